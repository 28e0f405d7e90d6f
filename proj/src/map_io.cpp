#include "plmaps/map_io.hpp"

#include <fstream>
#include <sstream>

#include "plmaps/errors.hpp"

namespace plm::io {

namespace {

Rat parse_coord(const std::string& token, int line, int col) {
    try {
        return Rat::parse(token);
    } catch (const ParseError&) {
        throw ParseError("bad coordinate '" + token + "'", line, col);
    }
}

}  // namespace

PLMap read_map(std::istream& in) {
    std::vector<Rat> xs, ys;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;

        std::size_t x_end = line.find_first_of(" \t", start);
        if (x_end == std::string::npos)
            throw ParseError("expected two coordinates", lineno, static_cast<int>(line.size()) + 1);
        std::size_t y_start = line.find_first_not_of(" \t", x_end);
        if (y_start == std::string::npos)
            throw ParseError("expected a value after the abscissa", lineno,
                             static_cast<int>(x_end) + 1);
        std::size_t y_end = line.find_first_of(" \t\r", y_start);
        if (y_end == std::string::npos) y_end = line.size();
        std::size_t trail = line.find_first_not_of(" \t\r", y_end);
        if (trail != std::string::npos)
            throw ParseError("unexpected trailing text", lineno, static_cast<int>(trail) + 1);

        Rat x = parse_coord(line.substr(start, x_end - start), lineno, static_cast<int>(start) + 1);
        Rat y = parse_coord(line.substr(y_start, y_end - y_start), lineno,
                            static_cast<int>(y_start) + 1);

        if (!xs.empty() && !(xs.back() < x))
            throw ParseError("abscissae must increase strictly", lineno,
                             static_cast<int>(start) + 1);
        if (y < Rat(0) || y > Rat(1))
            throw ParseError("value outside [0,1]", lineno, static_cast<int>(y_start) + 1);
        if (!ys.empty() && ys.back() == y)
            throw ParseError("zero slope against previous record", lineno,
                             static_cast<int>(y_start) + 1);
        xs.push_back(std::move(x));
        ys.push_back(std::move(y));
    }
    if (xs.size() < 2) throw ParseError("map needs at least two breakpoints", lineno + 1, 1);
    if (xs.front() != Rat(0)) throw ParseError("first breakpoint must be at x = 0", 1, 1);
    if (xs.back() != Rat(1))
        throw ParseError("last breakpoint must be at x = 1", lineno + 1, 1);
    return PLMap(std::move(xs), std::move(ys));
}

PLMap read_map_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open map file: " + path);
    return read_map(in);
}

void write_map(std::ostream& out, const PLMap& f) {
    for (std::size_t i = 0; i < f.xs().size(); i++)
        out << f.xs()[i].str() << " " << f.ys()[i].str() << "\n";
}

void write_map_file(const std::string& path, const PLMap& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open map file for writing: " + path);
    write_map(out, f);
}

PLMap parse_breakpoint_spec(const std::string& spec) {
    std::vector<std::pair<Rat, Rat>> points;
    std::size_t pos = 0;
    int record = 0;
    while (pos < spec.size()) {
        std::size_t comma = spec.find(',', pos);
        std::string item = spec.substr(pos, comma == std::string::npos ? std::string::npos
                                                                       : comma - pos);
        record++;
        std::size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw ParseError("breakpoint " + std::to_string(record) + " needs x:y form", 1,
                             static_cast<int>(pos) + 1);
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t");
            std::size_t b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        Rat x = parse_coord(trim(item.substr(0, colon)), 1, static_cast<int>(pos) + 1);
        Rat y = parse_coord(trim(item.substr(colon + 1)), 1,
                            static_cast<int>(pos + colon) + 2);
        points.emplace_back(std::move(x), std::move(y));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    try {
        return maps::from_breakpoints(std::move(points));
    } catch (const InvariantError& e) {
        throw ParseError(e.what(), 1, 1);
    }
}

}  // namespace plm::io
