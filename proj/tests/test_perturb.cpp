#include <doctest.h>

#include <sstream>

#include "plmaps/errors.hpp"
#include "plmaps/measure.hpp"
#include "plmaps/perturb.hpp"
#include "test_helpers.hpp"

using namespace plm;
using namespace plm::perturb;
using measure::check_measure_preserving;

TEST_CASE("regular window shapes") {
    CHECK(regular_window_shape(Interval(Rat(0), Rat(1)), 1).shape01() == maps::identity());
    WindowMap z3 = regular_window_shape(Interval(Rat(0), Rat(1)), 3);
    CHECK(z3.shape01() == maps::zigzag(3));
    CHECK_FALSE(z3.endpoint_waiver());

    WindowMap w5 = regular_window_shape(Interval(Rat(1, 4), Rat(1, 2)), 5);
    CHECK(w5.shape01().min_abs_slope() == Rat(5));
    CHECK(check_measure_preserving(w5.shape01()).preserving);
    CHECK(w5.apply(Rat(1, 4)) == Rat(1, 4));
    CHECK(w5.apply(Rat(1, 2)) == Rat(1, 2));
    CHECK(w5.apply(Rat(3, 10)) == Rat(1, 2));  // first sawtooth peak

    CHECK(regular_window_shape(Interval(Rat(0), Rat(1)), 4).endpoint_waiver());
}

TEST_CASE("window shape validation") {
    // Not onto: values stay in the lower half.
    PLMap squash({Rat(0), Rat(1, 2), Rat(1)}, {Rat(0), Rat(1, 2), Rat(0)});
    CHECK_THROWS_AS(WindowMap(Interval(Rat(0), Rat(1, 2)), squash, false), InvariantError);
    // Onto and weight-correct but endpoint-moving without the waiver.
    CHECK_THROWS_AS(WindowMap(Interval(Rat(0), Rat(1, 2)), maps::zigzag(2), false),
                    InvariantError);
    CHECK_NOTHROW(WindowMap(Interval(Rat(0), Rat(1, 2)), maps::zigzag(2), true));
}

TEST_CASE("window perturbation by a full-interval sawtooth gives the zigzag") {
    PLMap z = window_perturb(maps::identity(), regular_window_shape(Interval(Rat(0), Rat(1)), 3));
    CHECK(z == maps::zigzag(3));
    CHECK(check_measure_preserving(z).preserving);
    // The gap to the identity peaks at the interior nodes: |1 - 1/3| = 2/3.
    CHECK(sup_distance(maps::identity(), z) == Rat(2, 3));
}

TEST_CASE("window perturbation of the tent map on the left half") {
    PLMap g = window_perturb(maps::tent(),
                             regular_window_shape(Interval(Rat(0), Rat(1, 2)), 3));
    PLMap expected({Rat(0), Rat(1, 6), Rat(1, 3), Rat(1, 2), Rat(1)},
                   {Rat(0), Rat(1), Rat(0), Rat(1), Rat(0)});
    CHECK(g == expected);
    CHECK(g.slope(0) == Rat(6));
    CHECK(g.slope(1) == Rat(-6));
    CHECK(g.slope(2) == Rat(6));
    CHECK(g.slope(3) == Rat(-2));
    CHECK(check_measure_preserving(g).preserving);
    CHECK(plmtest::preserves_on_random_intervals(g, 200, 5));
}

TEST_CASE("identity shape leaves the map unchanged") {
    for (const PLMap& f : {maps::tent(), maps::skeleton()}) {
        CHECK(window_perturb(f, regular_window_shape(Interval(Rat(1, 8), Rat(3, 8)), 1)) == f);
    }
}

TEST_CASE("window perturbation rejects shapes that break continuity") {
    // Even lap count moves the right endpoint value; inside the domain this
    // tears the graph.
    CHECK_THROWS_AS(window_perturb(maps::tent(),
                                   regular_window_shape(Interval(Rat(1, 4), Rat(1, 2)), 2)),
                    ContinuityError);
    // At the domain boundary the same shape glues fine on the right.
    PLMap g = window_perturb(maps::zigzag(3),
                             regular_window_shape(Interval(Rat(2, 3), Rat(1)), 2));
    CHECK(check_measure_preserving(g).preserving);
}

TEST_CASE("window perturbations preserve measure and obey the distance law") {
    plmtest::RatGen gen(612);
    for (const PLMap& f : {maps::tent(), maps::skeleton()}) {
        for (int trial = 0; trial < 25; trial++) {
            // Window within one affine piece of f.
            std::size_t seg = static_cast<std::size_t>(gen.integer(0, f.segment_count() - 1));
            Rat a = f.xs()[seg], b = f.xs()[seg + 1];
            Rat third = (b - a) / Rat(3);
            Interval window(a + third, b - third);
            int m = 2 * static_cast<int>(gen.integer(1, 4)) + 1;
            PLMap g = window_perturb(f, regular_window_shape(window, m));
            CHECK(check_measure_preserving(g).preserving);
            Rat image_diameter = (f(window.hi) - f(window.lo)).abs();
            CHECK(sup_distance(f, g) <= image_diameter);
        }
    }
}

TEST_CASE("snapping leaves grid-aligned maps alone") {
    CHECK(snap_determining_values(maps::tent(), 2) == maps::tent());
    CHECK(snap_determining_values(maps::skeleton(), 3) == maps::skeleton());
}

TEST_CASE("snapping moves an interior determining value onto the grid") {
    // One peak at height 2/5: off the half-integer grid.
    PLMap f({Rat(0), Rat(1, 2), Rat(1)}, {Rat(0), Rat(2, 5), Rat(0)});
    PLMap snapped = snap_determining_values(f, 2);
    for (const Rat& d : determining_values(snapped)) {
        CHECK((d * Rat(2)).is_integer());
    }
    // Preservation is transported through the post-composition.
    PLMap preserving({Rat(0), Rat(2, 5), Rat(1)}, {Rat(0), Rat(1), Rat(0)});
    REQUIRE(check_measure_preserving(preserving).preserving);
    PLMap snapped2 = snap_determining_values(preserving, 2);
    CHECK(check_measure_preserving(snapped2).preserving);
    for (const Rat& d : determining_values(snapped2)) {
        CHECK((d * Rat(2)).is_integer());
    }
    // Value in the cell touching 1: the excursion map's upper corner is the
    // domain corner itself.
    PLMap high({Rat(0), Rat(1, 2), Rat(1)}, {Rat(0), Rat(7, 8), Rat(0)});
    PLMap snapped3 = snap_determining_values(high, 2);
    for (const Rat& d : determining_values(snapped3)) {
        CHECK((d * Rat(2)).is_integer());
    }
}

TEST_CASE("snapping reports colliding determining values") {
    // Peaks at 1/5 and 3/10 share the cell (0, 1/2).
    PLMap f({Rat(0), Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(1)},
            {Rat(0), Rat(1, 5), Rat(1, 10), Rat(3, 10), Rat(0)});
    try {
        snap_determining_values(f, 2);
        FAIL("expected a collision");
    } catch (const CellCollisionError& e) {
        CHECK(e.first_value == "1/10");
        CHECK(e.second_value == "1/5");
    }
}

TEST_CASE("reflection on an interval") {
    // Two-lap bump with equal end values 1/2 and peak 3/4.
    PLMap f({Rat(0), Rat(1, 4), Rat(1, 2), Rat(1)}, {Rat(1, 2), Rat(3, 4), Rat(1, 2), Rat(0)});
    PLMap r = reflect_on_interval(f, Rat(0), Rat(1, 2));
    CHECK(r(Rat(1, 4)) == Rat(1, 4));  // peak 3/4 becomes valley 1/4
    CHECK(r(Rat(0)) == Rat(1, 2));
    CHECK(r(Rat(1, 2)) == Rat(1, 2));
    CHECK(reflect_on_interval(r, Rat(0), Rat(1, 2)) == f);  // involution

    CHECK_THROWS_AS(reflect_on_interval(f, Rat(0), Rat(1, 4)), ContinuityError);
    // Reflecting the tent's peak about 0 leaves the range.
    CHECK_THROWS_AS(reflect_on_interval(maps::tent(), Rat(0), Rat(1)), RangeError);
}

TEST_CASE("monotone witnesses") {
    CHECK(monotone_witness_at(maps::identity(), 1, Rat(1, 2)));
    CHECK(monotone_witness_at(maps::zigzag(3), 1, Rat(0)));
    CHECK(monotone_witness_at(maps::tent(), 2, Rat(0)));
}

TEST_CASE("exclusion check is false for tame maps") {
    for (int n : {1, 2, 4}) {
        CHECK_FALSE(nowhere_monotone_at_scale(maps::identity(), n));
        CHECK_FALSE(nowhere_monotone_at_scale(maps::tent(), n));
        CHECK_FALSE(nowhere_monotone_at_scale(maps::skeleton(), n));
        CHECK_FALSE(nowhere_monotone_at_scale(maps::zigzag(9), n));
    }
}

TEST_CASE("witness equivalence: excluded maps admit no witness anywhere") {
    auto built = nowhere_monotone_perturb(maps::tent(), 2, Rat(3, 10));
    REQUIRE(built.certificate.monotone_excluded);
    plmtest::RatGen gen(31415);
    for (int k = 0; k < 10'000; k++) {
        CHECK_FALSE(monotone_witness_at(built.map, 2, gen.unit()));
    }
    for (const Rat& x : built.map.xs()) {
        CHECK_FALSE(monotone_witness_at(built.map, 2, x));
    }
}

TEST_CASE("every negative exclusion verdict comes with a confirmed witness") {
    // The decision procedure reports the point that blocks the exclusion;
    // the independent single-point checker must agree there.
    auto confirm = [](const PLMap& f, int n) {
        Rat witness(0);
        bool excluded =
            nowhere_monotone_at_scale(f, n, {Budgets{}.cells, Exec::serial}, &witness);
        REQUIRE_FALSE(excluded);
        CHECK(monotone_witness_at(f, n, witness));
    };
    confirm(maps::identity(), 1);
    confirm(maps::tent(), 2);
    confirm(maps::skeleton(), 3);
    confirm(maps::zigzag(9), 4);
    // A certified map re-examined far beyond its scale: its slopes reach
    // only +-80, so -100 is unattainable mid-segment and the blocking point
    // sits inside a lap, not on any breakpoint grid.
    auto built = nowhere_monotone_perturb(maps::identity(), 1, Rat(1, 2));
    REQUIRE(built.map.max_abs_slope() < Rat(100));
    confirm(built.map, 100);
}

TEST_CASE("shear reformulation of the witness") {
    // If x is a witness then gamma = -n makes f(t) - gamma t one-sided
    // monotone at scale 1/n on sampled points, and conversely a violated
    // sample refutes the witness.
    plmtest::RatGen gen(999);
    PLMap f = maps::skeleton();
    int n = 2;
    Rat gamma(-n);
    for (int k = 0; k < 300; k++) {
        Rat x = gen.unit();
        bool witness = monotone_witness_at(f, n, x);
        bool sheared_ok = true;
        for (int s = 0; s < 40; s++) {
            Rat t = gen.unit();
            if (t == x || (t - x).abs() >= Rat(1, n)) continue;
            Rat lhs = f(t) - gamma * t;
            Rat rhs = f(x) - gamma * x;
            if ((t < x && lhs > rhs) || (t > x && lhs < rhs)) sheared_ok = false;
        }
        if (witness) CHECK(sheared_ok);
    }
}

TEST_CASE("construction certificates for the identity") {
    auto built = nowhere_monotone_perturb(maps::identity(), 1, Rat(1, 2));
    const PerturbCertificate& cert = built.certificate;
    CHECK(cert.valid());
    CHECK(cert.band_count == 7);             // smallest multiple of 1 above 6
    CHECK(cert.band_width == Rat(1, 7));
    CHECK(cert.min_abs_slope > Rat(10));
    // Layout guarantee beyond the certificate bound: no lap is flatter than
    // one band over one mark radius.
    CHECK(cert.min_abs_slope >= cert.band_width / cert.mark_radius);
    CHECK(cert.distance <= Rat(1, 2));
    CHECK(cert.branch_weights_ok);
    CHECK(cert.monotone_excluded);
    CHECK(check_measure_preserving(built.map).preserving);
    CHECK(plmtest::preserves_on_random_intervals(built.map, 300, 17));
}

TEST_CASE("construction certificates for the tent map") {
    auto built = nowhere_monotone_perturb(maps::tent(), 2, Rat(3, 10));
    CHECK(built.certificate.valid());
    CHECK(built.certificate.min_abs_slope > Rat(20));
    CHECK(nowhere_monotone_at_scale(built.map, 2));
}

TEST_CASE("construction certificates for the skeleton: band grid honors q = 3") {
    auto built = nowhere_monotone_perturb(maps::skeleton(), 1, Rat(1, 4));
    const PerturbCertificate& cert = built.certificate;
    CHECK(cert.valid());
    CHECK(cert.value_denominator == Int(3));
    CHECK(cert.band_width < Rat(1, 12));
    CHECK(cert.band_width == Rat(1, 15));  // largest valid: 1/tau multiple of 3, tau < 1/12
    CHECK(Rat(cert.band_count) / Rat(3) == Rat(5));
}

TEST_CASE("stage two alone is not enough: reflections carry the exclusion") {
    auto stages = nowhere_monotone_stages(maps::identity(), 1, Rat(1, 2));
    CHECK_FALSE(nowhere_monotone_at_scale(stages.tilde, 1));
    CHECK(nowhere_monotone_at_scale(stages.final_map, 1));
    // The reflections happen on marked intervals with equal end values.
    REQUIRE(!stages.marked_points.empty());
    for (const Rat& x : stages.marked_points) {
        Rat d = stages.certificate.mark_radius;
        CHECK(stages.tilde(x - d) == stages.tilde(x));
        CHECK(stages.tilde(x + d) == stages.tilde(x));
        CHECK(stages.final_map(x) == stages.tilde(x));
    }
}

TEST_CASE("step-three reflections on both flanks of a marked point keep the weights") {
    auto stages = nowhere_monotone_stages(maps::tent(), 1, Rat(1, 2));
    REQUIRE(check_measure_preserving(stages.tilde).preserving);
    Rat d = stages.certificate.mark_radius;
    const Rat& x = stages.marked_points.front();
    // One flank alone shifts weight into the neighboring band; the step
    // applies to both flanks of the shared point, and that pair is neutral.
    PLMap one_flank = reflect_on_interval(stages.tilde, x - d, x);
    CHECK_FALSE(check_measure_preserving(one_flank).preserving);
    PLMap both_flanks = reflect_on_interval(one_flank, x, x + d);
    CHECK(check_measure_preserving(both_flanks).preserving);
    // The construction's own reversal form is weight-neutral marked point
    // by marked point, and globally.
    CHECK(check_measure_preserving(stages.final_map).preserving);
}

TEST_CASE("certificate validator rejects tampering") {
    auto built = nowhere_monotone_perturb(maps::identity(), 1, Rat(1, 2));
    CHECK(validate_certificate(maps::identity(), built.map, built.certificate));
    PerturbCertificate doctored = built.certificate;
    doctored.min_abs_slope = doctored.min_abs_slope + Rat(1);
    CHECK_FALSE(validate_certificate(maps::identity(), built.map, doctored));
    PerturbCertificate wrong_dist = built.certificate;
    wrong_dist.distance = Rat(0);
    CHECK_FALSE(validate_certificate(maps::identity(), built.map, wrong_dist));
    CHECK_FALSE(validate_certificate(maps::tent(), built.map, built.certificate));
}

TEST_CASE("certificate serialization round trip") {
    auto built = nowhere_monotone_perturb(maps::skeleton(), 1, Rat(1, 4));
    std::ostringstream out;
    write_certificate(out, built.certificate);
    std::istringstream in(out.str());
    PerturbCertificate back = read_certificate(in);
    CHECK(back.epsilon == built.certificate.epsilon);
    CHECK(back.n == built.certificate.n);
    CHECK(back.value_denominator == built.certificate.value_denominator);
    CHECK(back.band_count == built.certificate.band_count);
    CHECK(back.band_width == built.certificate.band_width);
    CHECK(back.mark_radius == built.certificate.mark_radius);
    CHECK(back.min_abs_slope == built.certificate.min_abs_slope);
    CHECK(back.distance == built.certificate.distance);
    CHECK(back.windows.size() == built.certificate.windows.size());
    CHECK(back.valid());
}

TEST_CASE("construction with an extremum window at the domain boundary") {
    // Starts one band below the top and crosses its maximum inside the
    // first window, so the stage-two map must open at the extreme value
    // itself. Weights: top band 6h + (a-h) = 1 and bottom 5 bands balance
    // identically for a = 1 - 5h; here h = 1/12.
    PLMap f = maps::from_breakpoints(
        {{Rat(0), Rat(5, 6)}, {Rat(1, 12), Rat(1)}, {Rat(7, 12), Rat(0)}, {Rat(1), Rat(5, 6)}});
    REQUIRE(check_measure_preserving(f).preserving);
    auto built = nowhere_monotone_perturb(f, 1, Rat(1));
    CHECK(built.certificate.band_count == 6);  // q = 6, smallest multiple above 3
    CHECK(built.certificate.valid());
    CHECK(built.map(Rat(0)) == Rat(1));  // opens at the top of its band
    CHECK(plmtest::preserves_on_random_intervals(built.map, 300, 99));

    // Mirror case: the flipped map ends one band above the bottom and
    // crosses its minimum inside the last window.
    PLMap g = maps::flip_conjugate(f);
    auto built_g = nowhere_monotone_perturb(g, 1, Rat(1));
    CHECK(built_g.certificate.valid());
    CHECK(built_g.map(Rat(1)) == Rat(0));

    // With a finer band grid the same extrema sit strictly inside windows
    // and take the interior path instead.
    auto fine = nowhere_monotone_perturb(f, 2, Rat(1, 2));
    CHECK(fine.certificate.band_count == 12);
    CHECK(fine.certificate.valid());
}

TEST_CASE("budget errors from the construction are graceful") {
    Budgets tight;
    tight.laps = 200;
    CHECK_THROWS_AS(nowhere_monotone_perturb(maps::identity(), 4, Rat(1, 8),
                                             {tight, Exec::serial}),
                    BudgetError);
}

TEST_CASE("non-preserving inputs are rejected") {
    PLMap bad({Rat(0), Rat(1, 2), Rat(1)}, {Rat(0), Rat(1), Rat(1, 2)});
    CHECK_THROWS_AS(nowhere_monotone_perturb(bad, 1, Rat(1, 2)), PreconditionError);
}
