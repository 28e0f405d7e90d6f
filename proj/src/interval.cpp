#include "plmaps/interval.hpp"

#include <algorithm>

#include "plmaps/errors.hpp"

namespace plm {

Interval::Interval(Rat lo_, Rat hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo > hi) throw InvariantError("interval with lo > hi: [" + lo.str() + ", " + hi.str() + "]");
}

IntervalSet::IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) {
    std::sort(parts_.begin(), parts_.end(), [](const Interval& a, const Interval& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.hi < b.hi;
    });
    std::vector<Interval> merged;
    for (auto& p : parts_) {
        if (!merged.empty() && p.lo <= merged.back().hi) {
            if (p.hi > merged.back().hi) merged.back().hi = p.hi;
        } else {
            merged.push_back(std::move(p));
        }
    }
    parts_ = std::move(merged);
}

Rat IntervalSet::measure() const {
    Rat total(0);
    for (const auto& p : parts_) total += p.length();
    return total;
}

bool IntervalSet::contains(const Rat& x) const {
    // parts_ sorted and disjoint; binary search on lo.
    auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                               [](const Rat& v, const Interval& p) { return v < p.lo; });
    if (it == parts_.begin()) return false;
    --it;
    return x <= it->hi;
}

bool IntervalSet::contains_interval() const {
    for (const auto& p : parts_)
        if (!p.is_point()) return true;
    return false;
}

IntervalSet set_union(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> all = a.parts_;
    all.insert(all.end(), b.parts_.begin(), b.parts_.end());
    return IntervalSet(std::move(all));
}

IntervalSet set_intersection(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < a.parts_.size() && j < b.parts_.size()) {
        const Interval& p = a.parts_[i];
        const Interval& q = b.parts_[j];
        Rat lo = max(p.lo, q.lo);
        Rat hi = min(p.hi, q.hi);
        if (lo <= hi) out.emplace_back(lo, hi);
        if (p.hi < q.hi)
            i++;
        else
            j++;
    }
    return IntervalSet(std::move(out));
}

Rat symmetric_difference_measure(const IntervalSet& a, const IntervalSet& b) {
    Rat both = set_intersection(a, b).measure();
    return a.measure() + b.measure() - both - both;
}

}  // namespace plm
