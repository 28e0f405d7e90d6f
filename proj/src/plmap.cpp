#include "plmaps/plmap.hpp"

#include <algorithm>

#include "plmaps/errors.hpp"

namespace plm {

PLMap::PLMap(std::vector<Rat> xs, std::vector<Rat> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size()) throw InvariantError("breakpoint coordinate lists differ in length");
    if (xs_.size() < 2) throw InvariantError("a map needs at least two breakpoints");
    if (xs_.front() != Rat(0)) throw InvariantError("first breakpoint must be at x = 0");
    if (xs_.back() != Rat(1)) throw InvariantError("last breakpoint must be at x = 1");
    for (std::size_t i = 0; i + 1 < xs_.size(); i++) {
        if (!(xs_[i] < xs_[i + 1]))
            throw InvariantError("breakpoint abscissae not strictly increasing at index " +
                                 std::to_string(i + 1));
    }
    for (std::size_t i = 0; i < ys_.size(); i++) {
        if (ys_[i] < Rat(0) || ys_[i] > Rat(1))
            throw InvariantError("value outside [0,1] at breakpoint " + std::to_string(i));
    }
    for (std::size_t i = 0; i + 1 < ys_.size(); i++) {
        if (ys_[i] == ys_[i + 1])
            throw InvariantError("zero slope on segment " + std::to_string(i));
    }
    // Canonical form: merge breakpoints whose neighbors are collinear.
    std::vector<Rat> cx, cy;
    cx.reserve(xs_.size());
    cy.reserve(ys_.size());
    cx.push_back(xs_[0]);
    cy.push_back(ys_[0]);
    for (std::size_t i = 1; i + 1 < xs_.size(); i++) {
        Rat left = (ys_[i] - cy.back()) * (xs_[i + 1] - xs_[i]);
        Rat right = (ys_[i + 1] - ys_[i]) * (xs_[i] - cx.back());
        if (left != right) {
            cx.push_back(xs_[i]);
            cy.push_back(ys_[i]);
        }
    }
    cx.push_back(xs_.back());
    cy.push_back(ys_.back());
    xs_ = std::move(cx);
    ys_ = std::move(cy);
}

std::size_t PLMap::lap_count() const {
    std::size_t laps = 1;
    for (std::size_t i = 0; i + 2 < xs_.size(); i++) {
        bool up_now = ys_[i + 1] > ys_[i];
        bool up_next = ys_[i + 2] > ys_[i + 1];
        if (up_now != up_next) laps++;
    }
    return laps;
}

Rat PLMap::slope(std::size_t segment) const {
    return (ys_[segment + 1] - ys_[segment]) / (xs_[segment + 1] - xs_[segment]);
}

Rat PLMap::min_abs_slope() const {
    Rat best = slope(0).abs();
    for (std::size_t i = 1; i < segment_count(); i++) best = min(best, slope(i).abs());
    return best;
}

Rat PLMap::max_abs_slope() const {
    Rat best = slope(0).abs();
    for (std::size_t i = 1; i < segment_count(); i++) best = max(best, slope(i).abs());
    return best;
}

std::size_t PLMap::segment_containing(const Rat& x) const {
    if (x < Rat(0) || x > Rat(1)) throw DomainError("point " + x.str() + " outside [0,1]");
    // A breakpoint hit lands on the left segment.
    auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - xs_.begin());
    return idx == 0 ? 0 : idx - 1;
}

Rat PLMap::operator()(const Rat& x) const {
    std::size_t i = segment_containing(x);
    return ys_[i] + slope(i) * (x - xs_[i]);
}

PLMap compose(const PLMap& f, const PLMap& g, std::int64_t lap_budget) {
    // Cuts: breakpoints of g plus g-preimages of interior breakpoints of f.
    std::vector<Rat> cuts = g.xs();
    const std::vector<Rat>& fx = f.xs();
    for (std::size_t s = 0; s < g.segment_count(); s++) {
        const Rat& x0 = g.xs()[s];
        const Rat& y0 = g.ys()[s];
        const Rat& y1 = g.ys()[s + 1];
        Rat lo = min(y0, y1), hi = max(y0, y1);
        Rat sl = g.slope(s);
        // Interior breakpoints of f inside the value range of this segment.
        auto first = std::lower_bound(fx.begin() + 1, fx.end() - 1, lo);
        auto last = std::upper_bound(fx.begin() + 1, fx.end() - 1, hi);
        for (auto it = first; it != last; ++it) {
            cuts.push_back(x0 + (*it - y0) / sl);
            if (static_cast<std::int64_t>(cuts.size()) > lap_budget)
                throw BudgetError("lap budget exceeded in compose",
                                  static_cast<std::int64_t>(cuts.size()), lap_budget);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Rat> ys;
    ys.reserve(cuts.size());
    for (const Rat& c : cuts) ys.push_back(f(g(c)));
    return PLMap(std::move(cuts), std::move(ys));
}

PLMap iterate(const PLMap& f, int k, std::int64_t lap_budget) {
    if (k < 1) throw PreconditionError("iterate needs k >= 1");
    PLMap result = f;
    for (int j = 1; j < k; j++) result = compose(f, result, lap_budget);
    return result;
}

std::vector<PreimagePoint> preimage_point(const PLMap& f, const Rat& y) {
    if (y < Rat(0) || y > Rat(1)) throw DomainError("value " + y.str() + " outside [0,1]");
    std::vector<PreimagePoint> out;
    for (std::size_t s = 0; s < f.segment_count(); s++) {
        const Rat& y0 = f.ys()[s];
        const Rat& y1 = f.ys()[s + 1];
        if (y < min(y0, y1) || y > max(y0, y1)) continue;
        Rat sl = f.slope(s);
        Rat x = f.xs()[s] + (y - y0) / sl;
        if (!out.empty() && out.back().x == x) continue;  // breakpoint hit: keep left segment
        out.push_back({std::move(x), std::move(sl)});
    }
    return out;
}

std::vector<Rat> preimage_point_batch(const PLMap& f, const std::vector<Rat>& values) {
    std::vector<Rat> out;
    for (std::size_t s = 0; s < f.segment_count(); s++) {
        const Rat& y0 = f.ys()[s];
        const Rat& y1 = f.ys()[s + 1];
        Rat lo = min(y0, y1), hi = max(y0, y1);
        auto first = std::lower_bound(values.begin(), values.end(), lo);
        auto last = std::upper_bound(values.begin(), values.end(), hi);
        if (first == last) continue;
        Rat sl = f.slope(s);
        for (auto it = first; it != last; ++it) out.push_back(f.xs()[s] + (*it - y0) / sl);
    }
    return out;
}

IntervalSet preimage_interval(const PLMap& f, const Interval& j) {
    if (j.lo < Rat(0) || j.hi > Rat(1)) throw DomainError("interval not contained in [0,1]");
    std::vector<Interval> parts;
    for (std::size_t s = 0; s < f.segment_count(); s++) {
        const Rat& y0 = f.ys()[s];
        const Rat& y1 = f.ys()[s + 1];
        Rat lo = min(y0, y1), hi = max(y0, y1);
        Rat a = max(j.lo, lo), b = min(j.hi, hi);
        if (a > b) continue;
        Rat sl = f.slope(s);
        Rat xa = f.xs()[s] + (a - y0) / sl;
        Rat xb = f.xs()[s] + (b - y0) / sl;
        if (sl.sign() > 0)
            parts.emplace_back(std::move(xa), std::move(xb));
        else
            parts.emplace_back(std::move(xb), std::move(xa));
    }
    return IntervalSet(std::move(parts));
}

std::vector<Rat> determining_values(const PLMap& f) {
    std::vector<Rat> vals = f.ys();
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
}

Rat sup_distance(const PLMap& f, const PLMap& g) {
    std::vector<Rat> grid = f.xs();
    grid.insert(grid.end(), g.xs().begin(), g.xs().end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    Rat best(0);
    for (const Rat& x : grid) best = max(best, (f(x) - g(x)).abs());
    return best;
}

namespace maps {

PLMap identity() { return PLMap({Rat(0), Rat(1)}, {Rat(0), Rat(1)}); }

PLMap one_minus_id() { return PLMap({Rat(0), Rat(1)}, {Rat(1), Rat(0)}); }

PLMap tent() { return zigzag(2); }

PLMap zigzag(int m) {
    if (m < 1) throw PreconditionError("zigzag needs m >= 1");
    std::vector<Rat> xs, ys;
    for (int j = 0; j <= m; j++) {
        xs.emplace_back(j, m);
        ys.emplace_back(j % 2);
    }
    return PLMap(std::move(xs), std::move(ys));
}

PLMap skeleton() {
    return from_breakpoints({{Rat(0), Rat(1, 3)},
                             {Rat(1, 4), Rat(1)},
                             {Rat(2, 3), Rat(1, 3)},
                             {Rat(5, 6), Rat(0)},
                             {Rat(1), Rat(1, 3)}});
}

PLMap from_breakpoints(std::vector<std::pair<Rat, Rat>> points) {
    std::vector<Rat> xs, ys;
    xs.reserve(points.size());
    ys.reserve(points.size());
    for (auto& p : points) {
        xs.push_back(std::move(p.first));
        ys.push_back(std::move(p.second));
    }
    return PLMap(std::move(xs), std::move(ys));
}

PLMap flip_conjugate(const PLMap& f) {
    std::vector<Rat> xs, ys;
    xs.reserve(f.xs().size());
    ys.reserve(f.ys().size());
    for (std::size_t i = f.xs().size(); i-- > 0;) {
        xs.push_back(Rat(1) - f.xs()[i]);
        ys.push_back(Rat(1) - f.ys()[i]);
    }
    return PLMap(std::move(xs), std::move(ys));
}

}  // namespace maps

}  // namespace plm
