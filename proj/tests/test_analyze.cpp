#include <doctest.h>

#include "plmaps/analyze.hpp"
#include "plmaps/measure.hpp"
#include "plmaps/perturb.hpp"
#include "test_helpers.hpp"

using namespace plm;
using namespace plm::analyze;

TEST_CASE("level sets") {
    auto tent_half = level_set(maps::tent(), Rat(1, 2));
    CHECK(tent_half.points == std::vector<Rat>{Rat(1, 4), Rat(3, 4)});
    CHECK(tent_half.count == 2);
    CHECK(tent_half.intervals.empty());

    auto id_c = level_set(maps::identity(), Rat(2, 7));
    CHECK(id_c.points == std::vector<Rat>{Rat(2, 7)});

    auto t2_one = level_set(compose(maps::tent(), maps::tent()), Rat(1));
    CHECK(t2_one.points == std::vector<Rat>{Rat(1, 4), Rat(3, 4)});
}

TEST_CASE("noninjective value sets") {
    CHECK(noninjective_values(maps::identity()).closure.empty());
    CHECK(noninjective_values(maps::one_minus_id()).closure.empty());

    auto tent_b0 = noninjective_values(maps::tent());
    CHECK(tent_b0.closure == IntervalSet({{Rat(0), Rat(1)}}));
    CHECK(tent_b0.excluded_points == std::vector<Rat>{Rat(1)});
    CHECK(tent_b0.measure() == Rat(1));
    CHECK(tent_b0.contains(Rat(0)));      // 0 has preimages 0 and 1
    CHECK_FALSE(tent_b0.contains(Rat(1)));  // only x = 1/2 maps to 1

    auto skel_b0 = noninjective_values(maps::skeleton());
    CHECK(skel_b0.closure == IntervalSet({{Rat(0), Rat(1)}}));
    CHECK(skel_b0.measure() == Rat(1));
    CHECK_FALSE(skel_b0.contains(Rat(0)));  // single preimage at 5/6
    CHECK_FALSE(skel_b0.contains(Rat(1)));  // single preimage at 1/4
    CHECK(skel_b0.contains(Rat(1, 3)));     // fiber {0, 2/3, 1}
}

TEST_CASE("membership in the noninjective set matches fiber counts") {
    plmtest::RatGen gen(777);
    for (const PLMap& f : {maps::tent(), maps::skeleton(), maps::zigzag(3),
                           compose(maps::tent(), maps::zigzag(3))}) {
        auto b0 = noninjective_values(f);
        for (int k = 0; k < 1000; k++) {
            Rat c = gen.unit();
            CHECK(b0.contains(c) == (level_set(f, c).count >= 2));
        }
        for (const Rat& c : determining_values(f)) {
            CHECK(b0.contains(c) == (level_set(f, c).count >= 2));
        }
    }
}

TEST_CASE("nontrivial preserving maps are noninjective on an interval of values") {
    for (const PLMap& f : {maps::tent(), maps::skeleton(), maps::zigzag(3), maps::zigzag(9),
                           compose(maps::skeleton(), maps::tent())}) {
        CHECK(noninjective_values(f).contains_interval());
    }
}

TEST_CASE("scale diagnostics") {
    auto id_diag = scale_diagnostics(maps::identity(), Rat(1, 3), Rat(1, 7));
    CHECK(id_diag.max_dq == Rat(1));
    CHECK(id_diag.min_dq == Rat(1));

    auto tent_diag = scale_diagnostics(maps::tent(), Rat(1, 2), Rat(1, 4));
    CHECK(tent_diag.max_dq == Rat(2));
    CHECK(tent_diag.min_dq == Rat(-2));
}

TEST_CASE("diagnostic extremes bracket a slope of the window") {
    // Some affine piece meeting the punctured window has its slope between
    // the two extreme quotients.
    plmtest::RatGen gen(2024);
    for (const PLMap& f : {maps::tent(), maps::skeleton(), maps::zigzag(5),
                           compose(maps::tent(), maps::skeleton())}) {
        for (int trial = 0; trial < 50; trial++) {
            Rat x = gen.unit();
            Rat r(1, gen.integer(2, 40));
            auto d = scale_diagnostics(f, x, r);
            CHECK(d.min_dq <= d.max_dq);
            bool bracketed = false;
            Rat lo = max(Rat(0), x - r), hi = min(Rat(1), x + r);
            for (std::size_t s = 0; s < f.segment_count(); s++) {
                if (f.xs()[s + 1] <= lo || f.xs()[s] >= hi) continue;
                Rat sl = f.slope(s);
                if (d.min_dq <= sl && sl <= d.max_dq) bracketed = true;
            }
            CHECK(bracketed);
        }
    }
}

TEST_CASE("diagnostics see through breakpoints within the window") {
    // At x = 3/8 with radius 1/4 the tent peak lies inside the window: the
    // maximum quotient is the slope 2 next to x, the minimum is attained
    // against the falling branch at the window end 5/8.
    auto d = scale_diagnostics(maps::tent(), Rat(3, 8), Rat(1, 4));
    CHECK(d.max_dq == Rat(2));
    CHECK(d.min_dq == (maps::tent()(Rat(5, 8)) - maps::tent()(Rat(3, 8))) / Rat(1, 4));
}

TEST_CASE("certified constructions have huge two-sided quotients at breakpoints") {
    auto built = perturb::nowhere_monotone_perturb(maps::identity(), 1, Rat(1, 2));
    REQUIRE(built.certificate.valid());
    const PLMap& f = built.map;
    Rat r(1, 1);
    // Interior breakpoints; right at the domain ends one of the two
    // extremes collapses (the map opens at its band's top there).
    int checked = 0;
    for (std::size_t i = 0; i < f.xs().size() && checked < 25; i += f.xs().size() / 25 + 1) {
        const Rat& x = f.xs()[i];
        if (x < Rat(1, 8) || x > Rat(7, 8)) continue;
        auto d = scale_diagnostics(f, x, r);
        CHECK(d.max_dq > Rat(10));
        CHECK(d.min_dq < Rat(-10));
        checked++;
    }
    CHECK(checked > 10);
}

TEST_CASE("diagnostics diverge along repeated construction stages") {
    // Stage k uses scale 2^k and radius 1/2^k; the recorded extremes at
    // fixed probe points grow strictly through the stages. Two stages stay
    // inside the default lap budget (the third would need several million
    // segments); the growth is already an order of magnitude per stage.
    PLMap stage = maps::tent();
    std::vector<Rat> probes = {Rat(1, 3), Rat(2, 5), Rat(3, 4)};
    std::vector<Rat> lows(probes.size()), highs(probes.size());
    for (std::size_t p = 0; p < probes.size(); p++) {
        auto d = scale_diagnostics(stage, probes[p], Rat(1, 2));
        highs[p] = d.max_dq;
        lows[p] = d.min_dq;
    }
    for (int k = 1; k <= 2; k++) {
        int n = 1 << k;
        auto built = perturb::nowhere_monotone_perturb(stage, n, Rat(1, 1 << k));
        REQUIRE(built.certificate.valid());
        stage = built.map;
        for (std::size_t p = 0; p < probes.size(); p++) {
            auto d = scale_diagnostics(stage, probes[p], Rat(1, n));
            CHECK(d.max_dq > highs[p]);
            CHECK(d.min_dq < lows[p]);
            CHECK(d.max_dq > Rat(10 * n));
            CHECK(d.min_dq < Rat(-10 * n));
            highs[p] = d.max_dq;
            lows[p] = d.min_dq;
        }
    }
}
