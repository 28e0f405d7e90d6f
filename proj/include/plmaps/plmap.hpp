#ifndef PLMAPS_PLMAP_HPP
#define PLMAPS_PLMAP_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "plmaps/common.hpp"
#include "plmaps/interval.hpp"
#include "plmaps/rational.hpp"

namespace plm {

// Continuous piecewise-linear self-map of [0,1] with nonzero slopes, given
// by its breakpoints. Canonical form: breakpoints with collinear neighbors
// are merged on construction, so equal maps have identical breakpoint lists
// and map equality is plain field comparison. Immutable after construction.
class PLMap {
  public:
    // xs must be strictly increasing with xs.front()==0 and xs.back()==1;
    // ys must lie in [0,1] with ys[i+1] != ys[i] for every segment.
    PLMap(std::vector<Rat> xs, std::vector<Rat> ys);

    const std::vector<Rat>& xs() const { return xs_; }
    const std::vector<Rat>& ys() const { return ys_; }

    std::size_t segment_count() const { return xs_.size() - 1; }
    // Maximal intervals of monotonicity.
    std::size_t lap_count() const;

    Rat slope(std::size_t segment) const;
    Rat min_abs_slope() const;
    Rat max_abs_slope() const;

    // Index of the segment whose closed x-range contains x (ties resolve to
    // the left segment, matching the preimage reporting convention).
    std::size_t segment_containing(const Rat& x) const;

    // Exact affine interpolation; throws DomainError outside [0,1].
    Rat operator()(const Rat& x) const;

    friend bool operator==(const PLMap& a, const PLMap& b) {
        return a.xs_ == b.xs_ && a.ys_ == b.ys_;
    }
    friend bool operator!=(const PLMap& a, const PLMap& b) { return !(a == b); }

  private:
    std::vector<Rat> xs_;
    std::vector<Rat> ys_;
};

// f after g, i.e. x -> f(g(x)). Breakpoints: those of g plus g-preimages of
// the breakpoints of f. Throws BudgetError when the segment count would
// exceed `lap_budget`.
PLMap compose(const PLMap& f, const PLMap& g, std::int64_t lap_budget = Budgets{}.laps);

// k-fold composition, k >= 1.
PLMap iterate(const PLMap& f, int k, std::int64_t lap_budget = Budgets{}.laps);

struct PreimagePoint {
    Rat x;
    Rat slope;  // slope of the containing segment; left segment on breakpoint hits
};

// All solutions of f(x) = y, sorted, deduplicated by x.
std::vector<PreimagePoint> preimage_point(const PLMap& f, const Rat& y);

// Preimages of a sorted batch of values, one segment sweep for the whole
// batch. The output is unsorted and may repeat breakpoint hits.
std::vector<Rat> preimage_point_batch(const PLMap& f, const std::vector<Rat>& values);

// Exact f^{-1}(J) for a closed interval J within [0,1].
IntervalSet preimage_interval(const PLMap& f, const Interval& j);

// Values of f at its breakpoints (which include both endpoints), sorted and
// deduplicated. These are exactly the values at local extrema together with
// the values where the derivative jumps.
std::vector<Rat> determining_values(const PLMap& f);

// Exact sup-norm distance max |f-g|, attained on the merged breakpoint grid.
Rat sup_distance(const PLMap& f, const PLMap& g);

namespace maps {

PLMap identity();
PLMap one_minus_id();
PLMap tent();
// Uniform m-lap sawtooth through (j/m, j mod 2); zigzag(1) is the identity,
// zigzag(2) the tent map. All slopes have magnitude m.
PLMap zigzag(int m);
// Four-piece measure-preserving sample map with breakpoints
// (0,1/3) (1/4,1) (2/3,1/3) (5/6,0) (1,1/3).
PLMap skeleton();
PLMap from_breakpoints(std::vector<std::pair<Rat, Rat>> points);
// Conjugation by the spatial flip r(x) = 1-x, i.e. x -> 1 - f(1-x).
PLMap flip_conjugate(const PLMap& f);

}  // namespace maps

}  // namespace plm

#endif
