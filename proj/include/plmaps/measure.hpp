#ifndef PLMAPS_MEASURE_HPP
#define PLMAPS_MEASURE_HPP

#include <optional>

#include "plmaps/common.hpp"
#include "plmaps/interval.hpp"
#include "plmaps/plmap.hpp"

namespace plm::measure {

// Verdict of the exact branch-weight criterion: a piecewise-affine map with
// nonzero slopes preserves Lebesgue measure iff on every open band between
// consecutive determining values the reciprocal absolute slopes over one
// fiber sum to exactly 1. The witness band is open.
struct PreservationVerdict {
    struct Witness {
        Rat band_lo;
        Rat band_hi;
        Rat weight_sum;
    };
    bool preserving = false;
    std::optional<Witness> witness;
};

// Checks every band at its midpoint (the branch set and slopes are constant
// per band, so one exact sample proves the band). The witness, when present,
// is the lowest failing band; the result does not depend on the execution
// policy. Bands above max f or below min f fail with weight_sum = 0.
PreservationVerdict check_measure_preserving(const PLMap& f, Exec exec = Exec::parallel);

struct PreimageMeasure {
    Rat lhs;  // measure of f^{-1}(J)
    Rat rhs;  // length of J
    bool equal;
};

PreimageMeasure preimage_measure_check(const PLMap& f, const Interval& j);

// Exact measure of f^{-1}(J) symmetric-difference g^{-1}(J).
Rat preimage_stability(const PLMap& f, const PLMap& g, const Interval& j);

}  // namespace plm::measure

#endif
