#include "plmaps/measure.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstdint>

namespace plm::measure {

namespace {

// Sum of 1/|slope| over the fiber of the band midpoint; exact.
Rat band_weight(const PLMap& f, const Rat& band_lo, const Rat& band_hi) {
    Rat mid = (band_lo + band_hi) / Rat(2);
    Rat w(0);
    for (const auto& p : preimage_point(f, mid)) w += Rat(1) / p.slope.abs();
    return w;
}

}  // namespace

PreservationVerdict check_measure_preserving(const PLMap& f, Exec exec) {
    std::vector<Rat> grid = determining_values(f);
    if (grid.front() != Rat(0)) grid.insert(grid.begin(), Rat(0));
    if (grid.back() != Rat(1)) grid.push_back(Rat(1));

    const std::int64_t bands = static_cast<std::int64_t>(grid.size()) - 1;
    std::int64_t first_bad = bands;
    Rat bad_weight(0);

    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel
        {
            std::int64_t local_bad = bands;
            Rat local_weight(0);
#pragma omp for schedule(dynamic, 8) nowait
            for (std::int64_t b = 0; b < bands; b++) {
                if (b >= local_bad) continue;
                Rat w = band_weight(f, grid[b], grid[b + 1]);
                if (w != Rat(1) && b < local_bad) {
                    local_bad = b;
                    local_weight = w;
                }
            }
#pragma omp critical
            {
                if (local_bad < first_bad) {
                    first_bad = local_bad;
                    bad_weight = local_weight;
                }
            }
        }
#else
        exec = Exec::serial;
#endif
    }
    if (exec == Exec::serial) {
        for (std::int64_t b = 0; b < bands; b++) {
            Rat w = band_weight(f, grid[b], grid[b + 1]);
            if (w != Rat(1)) {
                first_bad = b;
                bad_weight = w;
                break;
            }
        }
    }

    PreservationVerdict verdict;
    if (first_bad == bands) {
        verdict.preserving = true;
    } else {
        verdict.preserving = false;
        verdict.witness = PreservationVerdict::Witness{grid[first_bad], grid[first_bad + 1],
                                                       bad_weight};
    }
    return verdict;
}

PreimageMeasure preimage_measure_check(const PLMap& f, const Interval& j) {
    Rat lhs = preimage_interval(f, j).measure();
    Rat rhs = j.length();
    return {lhs, rhs, lhs == rhs};
}

Rat preimage_stability(const PLMap& f, const PLMap& g, const Interval& j) {
    return symmetric_difference_measure(preimage_interval(f, j), preimage_interval(g, j));
}

}  // namespace plm::measure
