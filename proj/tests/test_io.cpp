#include <doctest.h>

#include <sstream>

#include "plmaps/errors.hpp"
#include "plmaps/map_io.hpp"

using namespace plm;

namespace {

PLMap roundtrip(const PLMap& f) {
    std::ostringstream out;
    io::write_map(out, f);
    std::istringstream in(out.str());
    return io::read_map(in);
}

}  // namespace

TEST_CASE("write/read round trip is the identity on canonical maps") {
    for (const PLMap& f : {maps::identity(), maps::tent(), maps::skeleton(), maps::zigzag(7),
                           compose(maps::tent(), maps::skeleton())}) {
        CHECK(roundtrip(f) == f);
    }
}

TEST_CASE("writer emits lowest terms, integers without denominator") {
    std::ostringstream out;
    io::write_map(out, maps::tent());
    CHECK(out.str() == "0 0\n1/2 1\n1 0\n");
}

TEST_CASE("reader accepts comments, blank lines and p/1 forms") {
    std::istringstream in("# a tent map\n\n0 0/1\n2/4 1/1\n\n1 0\n");
    CHECK(io::read_map(in) == maps::tent());
}

TEST_CASE("reader rejects bad input with positions") {
    auto expect_error = [](const std::string& text, int line) {
        std::istringstream in(text);
        try {
            io::read_map(in);
            FAIL("expected a parse error for: ", text);
        } catch (const ParseError& e) {
            CHECK(e.line == line);
        }
    };
    expect_error("0 0\n1/2 1\n1/3 0\n1 1/2\n", 3);     // non-monotone xs
    expect_error("0 0\n1/2 3/2\n1 0\n", 2);            // value out of range
    expect_error("0 0\n1/2 0\n1 1\n", 2);              // zero slope
    expect_error("0 0\n1/2\n1 1\n", 2);                // missing column
    expect_error("0 0\nhalf 1\n1 0\n", 2);             // bad token
    expect_error("0 0\n1/2 1located\n1 0\n", 2);       // bad token
    expect_error("0 0\n1/2 1 9\n1 0\n", 2);            // trailing text
    expect_error("1/4 0\n1 1\n", 1);                   // does not start at 0
    expect_error("0 0\n1/2 1\n", 3);                   // does not end at 1
}

TEST_CASE("breakpoint spec parsing") {
    PLMap b = io::parse_breakpoint_spec("0:1/3, 1/4:1, 2/3:1/3, 5/6:0, 1:1/3");
    CHECK(b == maps::skeleton());
    CHECK_THROWS_AS(io::parse_breakpoint_spec("0:0, 1:2"), ParseError);
    CHECK_THROWS_AS(io::parse_breakpoint_spec("0:0 1:1"), ParseError);
    CHECK_THROWS_AS(io::parse_breakpoint_spec(""), ParseError);
}
