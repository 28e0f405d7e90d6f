#include "diffquot.hpp"

#include <algorithm>

#include "plmaps/errors.hpp"

namespace plm::detail {

namespace {

// Appends the slope limits of the pieces touching x (one slope inside a
// segment, two at an interior breakpoint, one at a domain endpoint).
template <typename Fn>
void adjacent_slopes(const PLMap& f, const Rat& x, Fn&& visit) {
    const auto& xs = f.xs();
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - xs.begin());
    bool on_breakpoint = it != xs.end() && *it == x;
    if (on_breakpoint) {
        if (idx > 0) visit(f.slope(idx - 1));
        if (idx < f.segment_count()) visit(f.slope(idx));
    } else {
        visit(f.slope(idx == 0 ? 0 : idx - 1));
    }
}

}  // namespace

DqExtrema dq_extrema(const PLMap& f, const Rat& x, const Rat& r) {
    if (x < Rat(0) || x > Rat(1)) throw DomainError("point " + x.str() + " outside [0,1]");
    if (r.sign() <= 0) throw DomainError("window radius must be positive");
    Rat lo = max(Rat(0), x - r);
    Rat hi = min(Rat(1), x + r);
    Rat fx = f(x);

    bool have = false;
    DqExtrema ext{Rat(0), Rat(0)};
    auto take = [&](const Rat& q) {
        if (!have) {
            ext.min_dq = q;
            ext.max_dq = q;
            have = true;
        } else {
            if (q < ext.min_dq) ext.min_dq = q;
            if (q > ext.max_dq) ext.max_dq = q;
        }
    };
    auto take_point = [&](const Rat& t) {
        if (t == x) return;
        take((f(t) - fx) / (t - x));
    };

    adjacent_slopes(f, x, take);
    take_point(lo);
    take_point(hi);
    const auto& xs = f.xs();
    auto first = std::lower_bound(xs.begin(), xs.end(), lo);
    auto last = std::upper_bound(xs.begin(), xs.end(), hi);
    for (auto it = first; it != last; ++it) take_point(*it);
    return ext;
}

bool has_dq_below(const PLMap& f, const Rat& x, const Rat& r, const Rat& bound) {
    if (x < Rat(0) || x > Rat(1)) throw DomainError("point " + x.str() + " outside [0,1]");
    Rat lo = max(Rat(0), x - r);
    Rat hi = min(Rat(1), x + r);
    Rat fx = f(x);

    bool found = false;
    auto probe_q = [&](const Rat& q) {
        if (q < bound) found = true;
        return found;
    };
    auto probe_point = [&](const Rat& t) {
        if (t == x) return false;
        return probe_q((f(t) - fx) / (t - x));
    };

    adjacent_slopes(f, x, [&](const Rat& s) { probe_q(s); });
    if (found) return true;

    // Breakpoints outward from x, alternating sides.
    const auto& xs = f.xs();
    auto pivot = std::lower_bound(xs.begin(), xs.end(), x);
    std::ptrdiff_t left = (pivot - xs.begin()) - 1;
    std::ptrdiff_t right = pivot - xs.begin();
    if (right < static_cast<std::ptrdiff_t>(xs.size()) && xs[right] == x) right++;
    const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(xs.size());
    while (true) {
        bool left_ok = left >= 0 && xs[left] >= lo;
        bool right_ok = right < count && xs[right] <= hi;
        if (!left_ok && !right_ok) break;
        if (left_ok) {
            if (probe_point(xs[left])) return true;
            left--;
        }
        if (right_ok) {
            if (probe_point(xs[right])) return true;
            right++;
        }
    }
    if (probe_point(lo)) return true;
    if (probe_point(hi)) return true;
    return false;
}

}  // namespace plm::detail
