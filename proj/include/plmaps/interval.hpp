#ifndef PLMAPS_INTERVAL_HPP
#define PLMAPS_INTERVAL_HPP

#include <vector>

#include "plmaps/rational.hpp"

namespace plm {

// Closed interval [lo, hi]; degenerate (lo == hi) intervals are allowed.
struct Interval {
    Rat lo;
    Rat hi;

    Interval() = default;
    Interval(Rat lo_, Rat hi_);  // throws InvariantError if lo > hi

    Rat length() const { return hi - lo; }
    bool is_point() const { return lo == hi; }
    bool contains(const Rat& x) const { return lo <= x && x <= hi; }
    Rat midpoint() const { return (lo + hi) / Rat(2); }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

// Normalized finite union of disjoint closed intervals with rational
// endpoints, sorted and non-adjacent (gaps have positive length). Isolated
// points are kept as degenerate intervals. Normalization is canonical: any
// two representations of the same set produce identical contents.
class IntervalSet {
  public:
    IntervalSet() = default;
    explicit IntervalSet(std::vector<Interval> parts);  // normalizes

    static IntervalSet unit() { return IntervalSet({Interval(Rat(0), Rat(1))}); }

    const std::vector<Interval>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    std::size_t size() const { return parts_.size(); }

    Rat measure() const;
    bool contains(const Rat& x) const;
    // True iff some component has positive length.
    bool contains_interval() const;

    friend IntervalSet set_union(const IntervalSet& a, const IntervalSet& b);
    friend IntervalSet set_intersection(const IntervalSet& a, const IntervalSet& b);
    // measure(a) + measure(b) - 2*measure(a & b); boundary points carry no
    // measure, so this equals the measure of the symmetric difference.
    friend Rat symmetric_difference_measure(const IntervalSet& a, const IntervalSet& b);

    friend bool operator==(const IntervalSet& a, const IntervalSet& b) {
        return a.parts_ == b.parts_;
    }

  private:
    std::vector<Interval> parts_;
};

}  // namespace plm

#endif
