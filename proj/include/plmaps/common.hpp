#ifndef PLMAPS_COMMON_HPP
#define PLMAPS_COMMON_HPP

#include <cstdint>

namespace plm {

// Execution policy for the data-parallel kernels. Every kernel has a plain
// serial implementation used as the reference in tests and benchmarks; the
// parallel path must produce identical results.
enum class Exec { serial, parallel };

struct Budgets {
    std::int64_t laps = 1'000'000;    // segment budget for compose/iterate and builders
    std::int64_t cuts = 10'000'000;   // cut budget per join refinement
    std::int64_t cells = 10'000'000;  // cell budget for the scale-monotonicity decision
};

}  // namespace plm

#endif
