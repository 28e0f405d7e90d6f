#include "plmaps/perturb.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <sstream>

#include "diffquot.hpp"
#include "plmaps/errors.hpp"
#include "plmaps/measure.hpp"

namespace plm::perturb {

namespace {

long rat_ceil_long(const Rat& x) {
    Int fl = x.floor();
    long v = fl.to_long();
    return Rat(fl, Int(1)) == x ? v : v + 1;
}

}  // namespace

// ---------------------------------------------------------------------------
// Window shapes and window perturbations
// ---------------------------------------------------------------------------

WindowMap::WindowMap(Interval window, PLMap shape01, bool endpoint_waiver)
    : window_(std::move(window)), shape01_(std::move(shape01)), waiver_(endpoint_waiver) {
    if (window_.lo < Rat(0) || window_.hi > Rat(1))
        throw InvariantError("window not contained in [0,1]");
    if (window_.is_point()) throw InvariantError("window must have positive length");
    Rat lo = shape01_.ys()[0], hi = shape01_.ys()[0];
    for (const Rat& y : shape01_.ys()) {
        lo = min(lo, y);
        hi = max(hi, y);
    }
    if (lo != Rat(0) || hi != Rat(1))
        throw InvariantError("shape must map the window onto itself");
    if (!waiver_ && (shape01_(Rat(0)) != Rat(0) || shape01_(Rat(1)) != Rat(1)))
        throw InvariantError("shape must fix the window endpoints (or carry the waiver)");
    if (!measure::check_measure_preserving(shape01_, Exec::serial).preserving)
        throw InvariantError("shape branch weights do not sum to 1 on every band");
}

Rat WindowMap::apply(const Rat& x) const {
    Rat width = window_.length();
    return window_.lo + width * shape01_((x - window_.lo) / width);
}

WindowMap regular_window_shape(const Interval& window, int m) {
    if (m < 1) throw PreconditionError("sawtooth needs m >= 1");
    return WindowMap(window, maps::zigzag(m), m % 2 == 0);
}

PLMap window_perturb(const PLMap& f, const WindowMap& w, std::int64_t lap_budget) {
    const Rat& a = w.window().lo;
    const Rat& b = w.window().hi;
    if (a > Rat(0) && f(w.apply(a)) != f(a))
        throw ContinuityError("window shape breaks continuity at the left boundary " + a.str());
    if (b < Rat(1) && f(w.apply(b)) != f(b))
        throw ContinuityError("window shape breaks continuity at the right boundary " + b.str());

    Rat width = w.window().length();
    const PLMap& s01 = w.shape01();

    // Cuts inside the window: shape nodes plus shape-preimages of the
    // breakpoints of f; between consecutive cuts the composition is affine.
    std::vector<Rat> cuts;
    for (const Rat& t : s01.xs()) cuts.push_back(a + width * t);
    const std::vector<Rat>& fx = f.xs();
    for (std::size_t seg = 0; seg < s01.segment_count(); seg++) {
        Rat t0 = a + width * s01.xs()[seg];
        Rat v0 = a + width * s01.ys()[seg];
        Rat v1 = a + width * s01.ys()[seg + 1];
        Rat sl = s01.slope(seg);  // slope of s in window coordinates
        Rat lo = min(v0, v1), hi = max(v0, v1);
        auto first = std::lower_bound(fx.begin(), fx.end(), lo);
        auto last = std::upper_bound(fx.begin(), fx.end(), hi);
        for (auto it = first; it != last; ++it) {
            cuts.push_back(t0 + (*it - v0) / sl);
            if (static_cast<std::int64_t>(cuts.size()) > lap_budget)
                throw BudgetError("lap budget exceeded in window perturbation",
                                  static_cast<std::int64_t>(cuts.size()), lap_budget);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Rat> xs, ys;
    for (std::size_t i = 0; i < fx.size() && fx[i] < a; i++) {
        xs.push_back(fx[i]);
        ys.push_back(f.ys()[i]);
    }
    for (const Rat& t : cuts) {
        xs.push_back(t);
        ys.push_back(f(w.apply(t)));
    }
    for (std::size_t i = 0; i < fx.size(); i++) {
        if (fx[i] > b) {
            xs.push_back(fx[i]);
            ys.push_back(f.ys()[i]);
        }
    }
    return PLMap(std::move(xs), std::move(ys));
}

// ---------------------------------------------------------------------------
// Determining-value snapping
// ---------------------------------------------------------------------------

namespace {

// Excursion map fixing everything outside [k/n,(k+1)/n]; inside, a 3-lap
// graph through ((cell_lo+c)/2, cell_hi) and (c, cell_lo), so the level c is
// replaced by the two grid levels. Branch weights inside sum to 1 for any c.
PLMap grid_excursion(int n, long k, const Rat& c) {
    Rat cell_lo(k, n), cell_hi(k + 1, n);
    std::vector<Rat> xs, ys;
    auto push = [&](Rat x, Rat y) {
        xs.push_back(std::move(x));
        ys.push_back(std::move(y));
    };
    if (cell_lo != Rat(0)) push(Rat(0), Rat(0));
    push(cell_lo, cell_lo);
    push((cell_lo + c) / Rat(2), cell_hi);
    push(c, cell_lo);
    push(cell_hi, cell_hi);
    if (cell_hi != Rat(1)) push(Rat(1), Rat(1));
    return PLMap(std::move(xs), std::move(ys));
}

}  // namespace

PLMap snap_determining_values(const PLMap& f, int n, std::int64_t lap_budget) {
    if (n < 1) throw PreconditionError("snapping needs a grid with n >= 1");
    std::vector<Rat> dets = determining_values(f);
    Rat n_rat(n);
    std::map<long, Rat> off_grid;  // cell index -> the one determining value inside
    for (const Rat& d : dets) {
        Rat scaled = d * n_rat;
        if (scaled.is_integer()) continue;
        long cell = scaled.floor().to_long();
        auto [it, fresh] = off_grid.emplace(cell, d);
        if (!fresh) throw CellCollisionError(it->second.str(), d.str());
    }
    PLMap result = f;
    for (const auto& [cell, d] : off_grid)
        result = compose(grid_excursion(n, cell, d), result, lap_budget);
    return result;
}

// ---------------------------------------------------------------------------
// Reflection
// ---------------------------------------------------------------------------

PLMap reflect_on_interval(const PLMap& f, const Rat& d, const Rat& e) {
    if (!(d < e) || d < Rat(0) || e > Rat(1))
        throw PreconditionError("reflection needs an interval [d,e] inside [0,1]");
    Rat c = f(d);
    if (f(e) != c)
        throw ContinuityError("reflection needs equal values at the interval ends, got " +
                              f(d).str() + " and " + f(e).str());
    std::vector<Rat> xs = f.xs();
    xs.push_back(d);
    xs.push_back(e);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<Rat> ys;
    ys.reserve(xs.size());
    Rat two_c = c + c;
    for (const Rat& x : xs) {
        Rat y = f(x);
        if (x > d && x < e) {
            y = two_c - y;
            if (y < Rat(0) || y > Rat(1))
                throw RangeError("reflection leaves [0,1] at x = " + x.str());
        }
        ys.push_back(std::move(y));
    }
    return PLMap(std::move(xs), std::move(ys));
}

// ---------------------------------------------------------------------------
// Scale monotonicity (witness and exclusion checks)
// ---------------------------------------------------------------------------

bool monotone_witness_at(const PLMap& f, int n, const Rat& x) {
    if (n < 1) throw PreconditionError("scale parameter n must be >= 1");
    // x is a witness iff no difference quotient over the punctured
    // 1/n-window is below -n (then gamma = -n shears the map one-sided
    // monotone at x).
    return !detail::has_dq_below(f, x, Rat(1, n), Rat(-n));
}

namespace {

// One candidate comparison family over a cell (e1,e2): a quotient function
// of x that is monotone on the cell, evaluated exactly.
struct Candidate {
    enum Kind { affine_edge, breakpoint } kind;
    Rat q1, q2;  // values at the cell ends
    Rat b, fb;   // breakpoint candidates: t = b fixed, fb = f(b)
};

struct CellContext {
    Rat e1, e2;
    Rat slope_a, offset_b;  // f(x) = slope_a*x + offset_b on the cell
    Rat bound;
};

Rat candidate_value(const CellContext& cc, const Candidate& c, const Rat& x) {
    if (c.kind == Candidate::breakpoint)
        return (c.fb - (cc.slope_a * x + cc.offset_b)) / (c.b - x);
    // Affine in x: interpolate the exact endpoint values.
    return c.q1 + (c.q2 - c.q1) * (x - cc.e1) / (cc.e2 - cc.e1);
}

bool covered_at(const CellContext& cc, const std::vector<Candidate>& cands, const Rat& x) {
    for (const auto& c : cands)
        if (candidate_value(cc, c, x) < cc.bound) return true;
    return false;
}

// Decides whether every x in the open cell has some candidate quotient
// strictly below the bound. The own-slope shortcut is handled by the caller.
// A failing test point is itself a monotonicity witness (the candidates are
// exhaustive for the infimum at interior points) and is reported.
bool open_cell_covered(const CellContext& cc, const std::vector<Candidate>& cands,
                       Rat* bad_point) {
    // Crossing points of the candidates with the bound partition the cell
    // into pieces on which every candidate's comparison is constant.
    std::vector<Rat> events;
    for (const auto& c : cands) {
        bool lo1 = c.q1 < cc.bound, lo2 = c.q2 < cc.bound;
        if (lo1 == lo2) continue;
        Rat star(0);
        if (c.kind == Candidate::breakpoint) {
            if (cc.bound == cc.slope_a) continue;  // no straddle possible
            star = (cc.bound * c.b - c.fb + cc.offset_b) / (cc.bound - cc.slope_a);
        } else {
            star = cc.e1 + (cc.bound - c.q1) * (cc.e2 - cc.e1) / (c.q2 - c.q1);
        }
        if (star > cc.e1 && star < cc.e2) events.push_back(std::move(star));
    }
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    auto fail_at = [&](Rat x) {
        if (bad_point) *bad_point = std::move(x);
        return false;
    };
    Rat prev = cc.e1;
    for (const Rat& ev : events) {
        Rat mid = (prev + ev) / Rat(2);
        if (!covered_at(cc, cands, mid)) return fail_at(std::move(mid));
        if (!covered_at(cc, cands, ev)) return fail_at(ev);
        prev = ev;
    }
    Rat mid = (prev + cc.e2) / Rat(2);
    if (!covered_at(cc, cands, mid)) return fail_at(std::move(mid));
    return true;
}

bool cell_covered(const PLMap& f, const Rat& e1, const Rat& e2, int n, const Rat& r,
                  const Rat& bound, Rat* bad_point) {
    Rat mid = (e1 + e2) / Rat(2);
    std::size_t seg = f.segment_containing(mid);
    Rat slope_a = f.slope(seg);
    if (slope_a < bound) return true;  // the quotient limit t -> x already qualifies
    CellContext cc{e1, e2, slope_a, f.ys()[seg] - slope_a * f.xs()[seg], bound};

    std::vector<Candidate> cands;
    auto add_breakpoint = [&](const Rat& b) -> bool {  // true when it covers alone
        if (b >= e1 && b <= e2) return false;          // own-slope case
        Candidate c{Candidate::breakpoint, Rat(0), Rat(0), b, f(b)};
        c.q1 = (c.fb - f(e1)) / (b - e1);
        c.q2 = (c.fb - f(e2)) / (b - e2);
        bool covers = c.q1 < bound && c.q2 < bound;
        cands.push_back(std::move(c));
        return covers;
    };

    // Breakpoints valid on the whole cell: b - r <= e1 and e2 <= b + r.
    // Probe nearest-first so steep oscillating maps exit immediately.
    const auto& xs = f.xs();
    Rat lo_b = e2 - r, hi_b = e1 + r;
    std::ptrdiff_t left = std::lower_bound(xs.begin(), xs.end(), e1) - xs.begin();
    std::ptrdiff_t right = std::upper_bound(xs.begin(), xs.end(), e2) - xs.begin();
    left--;
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(xs.size());
    while (true) {
        bool left_ok = left >= 0 && xs[left] >= lo_b;
        bool right_ok = right < total && xs[right] <= hi_b;
        if (!left_ok && !right_ok) break;
        if (left_ok && add_breakpoint(xs[left--])) return true;
        if (right_ok && add_breakpoint(xs[right++])) return true;
    }

    // Moving window ends t = x -+ r; valid when they stay inside [0,1]
    // across the cell. The boundary cases are breakpoint candidates (0, 1).
    auto add_edge = [&](const Rat& t1, const Rat& t2) -> bool {
        Candidate c{Candidate::affine_edge, Rat(0), Rat(0), Rat(0), Rat(0)};
        c.q1 = (f(t1) - f(e1)) / (t1 - e1);
        c.q2 = (f(t2) - f(e2)) / (t2 - e2);
        bool covers = c.q1 < bound && c.q2 < bound;
        cands.push_back(std::move(c));
        return covers;
    };
    (void)n;
    if (e1 >= r && add_edge(e1 - r, e2 - r)) return true;
    if (e2 <= Rat(1) - r && add_edge(e1 + r, e2 + r)) return true;

    return open_cell_covered(cc, cands, bad_point);
}

}  // namespace

bool nowhere_monotone_at_scale(const PLMap& f, int n, const ScaleMonotoneOptions& opts,
                               Rat* witness) {
    if (n < 1) throw PreconditionError("scale parameter n must be >= 1");
    Rat r(1, n);
    Rat bound(-n);

    std::vector<Rat> points = f.xs();
    for (const Rat& b : f.xs()) {
        Rat left = b - r, right = b + r;
        if (left > Rat(0) && left < Rat(1)) points.push_back(std::move(left));
        if (right > Rat(0) && right < Rat(1)) points.push_back(std::move(right));
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (static_cast<std::int64_t>(points.size()) > opts.cell_budget)
        throw BudgetError("cell budget exceeded in the scale-monotonicity check",
                          static_cast<std::int64_t>(points.size()), opts.cell_budget);

    const std::int64_t count = static_cast<std::int64_t>(points.size());

    if (opts.exec == Exec::parallel) {
#ifdef _OPENMP
        std::atomic<bool> found{false};
#pragma omp parallel for schedule(dynamic, 32)
        for (std::int64_t i = 0; i < count; i++) {
            if (found.load(std::memory_order_relaxed)) continue;
            if (!detail::has_dq_below(f, points[i], r, bound)) {
                // The compare-exchange admits exactly one writer.
                bool expected = false;
                if (found.compare_exchange_strong(expected, true) && witness)
                    *witness = points[i];
            }
        }
        if (!found.load()) {
            const std::int64_t cells = count - 1;
#pragma omp parallel for schedule(dynamic, 32)
            for (std::int64_t i = 0; i < cells; i++) {
                if (found.load(std::memory_order_relaxed)) continue;
                Rat bad(0);
                if (!cell_covered(f, points[i], points[i + 1], n, r, bound, &bad)) {
                    bool expected = false;
                    if (found.compare_exchange_strong(expected, true) && witness)
                        *witness = std::move(bad);
                }
            }
        }
        return !found.load();
#endif
    }
    for (std::int64_t i = 0; i < count; i++) {
        if (!detail::has_dq_below(f, points[i], r, bound)) {
            if (witness) *witness = points[i];
            return false;
        }
    }
    for (std::int64_t i = 0; i + 1 < count; i++) {
        Rat bad(0);
        if (!cell_covered(f, points[i], points[i + 1], n, r, bound, &bad)) {
            if (witness) *witness = std::move(bad);
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// The nowhere-monotone construction
// ---------------------------------------------------------------------------

namespace {

struct Window {
    Rat lo, hi;
    int band = 0;           // 0-based
    Rat interior_break;     // set when the window crosses a 0/1 extremum
    Rat extreme_value;      // f at that breakpoint (0 or 1)
    bool has_peak = false;
};

// Windows: closures of the connected components of the preimages of the
// open bands; components of one band merge across a breakpoint only where
// the map touches 0 or 1.
std::vector<Window> band_windows(const PLMap& f, long band_count, const Rat& tau) {
    std::vector<Rat> cuts;
    for (long k = 0; k <= band_count; k++) {
        for (auto& p : preimage_point(f, Rat(k, 1) * tau)) cuts.push_back(std::move(p.x));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Window> windows;
    for (std::size_t i = 0; i + 1 < cuts.size(); i++) {
        Rat mid_val = f((cuts[i] + cuts[i + 1]) / Rat(2));
        int band = static_cast<int>((mid_val / tau).floor().to_long());
        Rat shared_val = f(cuts[i]);
        bool absorbed = shared_val == Rat(0) || shared_val == Rat(1);
        if (!windows.empty() && windows.back().band == band && absorbed) {
            // The map touches 0 or 1 between two same-band pieces: one
            // window containing the extremum. Extrema at interior grid
            // values keep their two windows and get marked instead.
            Window& w = windows.back();
            if (w.has_peak)
                throw InvariantError("window with two interior extrema; determining values off "
                                     "the band grid");
            w.has_peak = true;
            w.interior_break = cuts[i];
            w.extreme_value = std::move(shared_val);
            w.hi = cuts[i + 1];
        } else {
            Window w;
            w.lo = cuts[i];
            w.hi = cuts[i + 1];
            w.band = band;
            windows.push_back(std::move(w));
        }
    }
    return windows;
}

class NodeBuilder {
  public:
    NodeBuilder(std::int64_t budget) : budget_(budget) {}

    void push(Rat x, Rat y) {
        if (!xs_.empty() && xs_.back() == x) {
            if (ys_.back() != y)
                throw InvariantError("discontinuous construction at x = " + x.str());
            return;
        }
        xs_.push_back(std::move(x));
        ys_.push_back(std::move(y));
        if (static_cast<std::int64_t>(xs_.size()) > budget_)
            throw BudgetError("lap budget exceeded in the nowhere-monotone construction",
                              static_cast<std::int64_t>(xs_.size()), budget_);
    }

    std::vector<Rat>&& take_xs() { return std::move(xs_); }
    std::vector<Rat>&& take_ys() { return std::move(ys_); }

  private:
    std::vector<Rat> xs_, ys_;
    std::int64_t budget_;
};

// Oscillation for a window on which f is affine: a full-range zigzag between
// the band boundaries. Marked ends carry exactly two laps of width delta/2
// with equal end values; interior laps are at most delta/4 wide.
void build_affine_window(const PLMap& f, const Window& w, const Rat& band_lo,
                         const Rat& band_hi, const Rat& delta, bool marked_left,
                         bool marked_right, NodeBuilder& nodes) {
    Rat val_u = marked_left ? f(w.lo) : band_hi;  // domain start opens at the band top
    Rat val_v = marked_right ? f(w.hi) : band_lo; // domain end closes at the band bottom
    auto opp = [&](const Rat& v) { return v == band_lo ? band_hi : band_lo; };

    nodes.push(w.lo, val_u);
    Rat pos = w.lo;
    if (marked_left) {
        nodes.push(pos + delta / Rat(2), opp(val_u));
        nodes.push(pos + delta, val_u);
        pos = pos + delta;
    }
    Rat end = marked_right ? w.hi - delta : w.hi;
    Rat iw = end - pos;
    long laps = rat_ceil_long(Rat(4) * iw / delta);
    if (laps < 1) laps = 1;
    bool need_even = val_u == val_v;
    if ((laps % 2 == 0) != need_even) laps++;
    Rat lap_width = iw / Rat(laps);
    Rat value = val_u;
    for (long r = 1; r <= laps; r++) {
        value = opp(value);
        nodes.push(r == laps ? end : pos + Rat(r) * lap_width, value);
    }
    if (marked_right) {
        nodes.push(w.hi - delta / Rat(2), opp(val_v));
        nodes.push(w.hi, val_v);
    }
}

// Oscillation for a window containing one interior extremum at value 0 or 1:
// full-range excursions from the shared pole value out to the extreme and
// back, the peak placed proportionally to the original breakpoint. Marked
// ends get one excursion (two laps) of width delta; interior excursions are
// at most delta/4 wide.
void build_peak_window(const PLMap& f, const Window& w, const Rat& band_lo, const Rat& band_hi,
                       const Rat& delta, bool marked_left, bool marked_right,
                       NodeBuilder& nodes) {
    const Rat& e = w.extreme_value;                    // 0 or 1
    Rat p = f(w.lo);                                   // pole value at both window ends
    if (f(w.hi) != p) throw InvariantError("peak window with unequal end values");
    Rat ratio = (w.interior_break - w.lo) / (w.hi - w.lo);

    Rat val_u = marked_left ? p : (e == band_hi ? band_hi : p);  // top rule at x = 0
    Rat val_v = marked_right ? p : (e == band_lo ? band_lo : p); // bottom rule at x = 1

    auto excursion = [&](const Rat& start, const Rat& width) {
        nodes.push(start + width * ratio, e);
        nodes.push(start + width, p);
    };

    nodes.push(w.lo, val_u);
    Rat pos = w.lo;
    if (val_u == e) {  // half excursion down to the pole
        pos = pos + delta / Rat(2);
        nodes.push(pos, p);
    }
    if (marked_left) {
        excursion(pos, delta);
        pos = pos + delta;
    }
    Rat tail = w.hi;
    if (marked_right) tail = tail - delta;
    if (val_v == e) tail = tail - delta / Rat(2);
    Rat iw = tail - pos;
    long count = rat_ceil_long(Rat(4) * iw / delta);
    if (count < 1) count = 1;
    Rat width = iw / Rat(count);
    for (long k = 0; k < count; k++) {
        excursion(pos, width);
        pos = pos + width;
    }
    if (marked_right) {
        excursion(pos, delta);
        pos = pos + delta;
    }
    if (val_v == e) nodes.push(w.hi, e);
}

}  // namespace

Rat PerturbCertificate::min_window_width() const {
    Rat best(1);
    for (const auto& w : windows) best = min(best, w.hi - w.lo);
    return best;
}

bool PerturbCertificate::valid() const {
    if (n < 1 || band_count < 1 || windows.empty()) return false;
    if (mark_radius.sign() <= 0) return false;
    if (!(band_width * Rat(3) < epsilon)) return false;
    if (band_width * Rat(band_count) != Rat(1)) return false;
    Rat nq(value_denominator, Int(1));
    Rat ratio = Rat(band_count) / nq;
    if (!ratio.is_integer()) return false;
    if (!(mark_radius < band_width / Rat(10 * n))) return false;
    if (!(mark_radius < min_window_width() / Rat(2))) return false;
    if (!(min_abs_slope > Rat(10 * n))) return false;
    if (!(distance <= epsilon)) return false;
    return branch_weights_ok && monotone_excluded;
}

ConstructionStages nowhere_monotone_stages(const PLMap& f, int n, const Rat& epsilon,
                                           const PerturbOptions& opts) {
    if (n < 1) throw PreconditionError("scale parameter n must be >= 1");
    if (epsilon.sign() <= 0) throw PreconditionError("epsilon must be positive");
    if (!measure::check_measure_preserving(f, opts.exec).preserving)
        throw PreconditionError("input map does not preserve measure");

    // Band grid: the least common denominator q of the determining values,
    // band count the smallest multiple of q exceeding 3/epsilon. Every
    // determining value then lies on the band grid.
    Int q(1);
    for (const Rat& d : determining_values(f)) q = lcm(q, d.den());
    Rat q_rat(q, Int(1));
    Int j = (Rat(3) / (epsilon * q_rat)).floor() + Int(1);
    Int bands_int = q * j;
    if (!(bands_int <= Int(opts.budgets.laps)))
        throw BudgetError("band count exceeds the lap budget",
                          bands_int.fits_long() ? bands_int.to_long() : opts.budgets.laps + 1,
                          opts.budgets.laps);
    long band_count = bands_int.to_long();
    Rat tau = Rat(Int(1), bands_int);

    std::vector<Window> windows = band_windows(f, band_count, tau);

    Rat min_width = windows.front().hi - windows.front().lo;
    for (const auto& w : windows) min_width = min(min_width, w.hi - w.lo);
    Rat delta = min(tau / Rat(10 * n), min_width / Rat(2)) / Rat(2);

    NodeBuilder nodes(opts.budgets.laps);
    for (std::size_t i = 0; i < windows.size(); i++) {
        const Window& w = windows[i];
        Rat band_lo = Rat(w.band) * tau;
        Rat band_hi = Rat(w.band + 1) * tau;
        bool marked_left = i > 0;
        bool marked_right = i + 1 < windows.size();
        if (w.has_peak)
            build_peak_window(f, w, band_lo, band_hi, delta, marked_left, marked_right, nodes);
        else
            build_affine_window(f, w, band_lo, band_hi, delta, marked_left, marked_right, nodes);
    }
    PLMap tilde(nodes.take_xs(), nodes.take_ys());

    // The two marked intervals flanking every shared window endpoint x get
    // reversed as one block: F(t) = stage-two value at 2x - t on
    // (x-delta, x+delta). A horizontal flip negates slopes and keeps every
    // fiber's reciprocal-slope weights, so the weight criterion survives
    // both at band transitions and at same-band extremum points; at a
    // transition the flip moves the excursion into the neighboring band,
    // which is what removes the monotonicity witnesses there.
    std::vector<Rat> marked;
    for (std::size_t i = 1; i < windows.size(); i++) marked.push_back(windows[i].lo);

    std::vector<Rat> xs = tilde.xs();
    std::vector<Rat> ys = tilde.ys();
    std::size_t node_idx = 0;
    for (const Rat& x : marked) {
        Rat lo = x - delta, hi = x + delta;
        Rat c = f(x);
        while (node_idx < xs.size() && xs[node_idx] <= lo) node_idx++;
        std::size_t first = node_idx;
        std::size_t last = first;
        while (last < xs.size() && xs[last] < hi) last++;
        if (first >= last)
            throw InvariantError("marked interval without interior nodes at x = " + x.str());
        if (tilde(lo) != c || tilde(hi) != c || tilde(x) != c)
            throw InvariantError("marked interval end values drifted at x = " + x.str());
        Rat two_x = x + x;
        std::vector<Rat> rev_x, rev_y;
        rev_x.reserve(last - first);
        rev_y.reserve(last - first);
        for (std::size_t i = last; i-- > first;) {
            rev_x.push_back(two_x - xs[i]);
            rev_y.push_back(ys[i]);
        }
        for (std::size_t i = first; i < last; i++) {
            xs[i] = std::move(rev_x[i - first]);
            ys[i] = std::move(rev_y[i - first]);
        }
        node_idx = last;
    }
    PLMap final_map(std::move(xs), std::move(ys));

    ConstructionStages stages{std::move(tilde), std::move(final_map), std::move(marked), {}};
    PerturbCertificate& cert = stages.certificate;
    cert.epsilon = epsilon;
    cert.n = n;
    cert.value_denominator = std::move(q);
    cert.band_count = static_cast<int>(band_count);
    cert.band_width = tau;
    cert.mark_radius = delta;
    for (const auto& w : windows) cert.windows.push_back({w.band + 1, w.lo, w.hi});
    cert.min_abs_slope = stages.final_map.min_abs_slope();
    cert.distance = sup_distance(f, stages.final_map);
    cert.branch_weights_ok =
        measure::check_measure_preserving(stages.final_map, opts.exec).preserving;
    cert.monotone_excluded =
        nowhere_monotone_at_scale(stages.final_map, n, {opts.budgets.cells, opts.exec});
    return stages;
}

NowhereMonotoneResult nowhere_monotone_perturb(const PLMap& f, int n, const Rat& epsilon,
                                               const PerturbOptions& opts) {
    ConstructionStages stages = nowhere_monotone_stages(f, n, epsilon, opts);
    return {std::move(stages.final_map), std::move(stages.certificate)};
}

bool validate_certificate(const PLMap& original, const PLMap& result,
                          const PerturbCertificate& cert, const PerturbOptions& opts) {
    if (!cert.valid()) return false;
    if (result.min_abs_slope() != cert.min_abs_slope) return false;
    if (sup_distance(original, result) != cert.distance) return false;
    if (measure::check_measure_preserving(result, opts.exec).preserving !=
        cert.branch_weights_ok)
        return false;
    if (nowhere_monotone_at_scale(result, cert.n, {opts.budgets.cells, opts.exec}) !=
        cert.monotone_excluded)
        return false;
    return true;
}

// ---------------------------------------------------------------------------
// Certificate serialization
// ---------------------------------------------------------------------------

void write_certificate(std::ostream& out, const PerturbCertificate& cert) {
    out << "epsilon " << cert.epsilon << "\n";
    out << "n " << cert.n << "\n";
    out << "value_denominator " << cert.value_denominator << "\n";
    out << "band_count " << cert.band_count << "\n";
    out << "band_width " << cert.band_width << "\n";
    out << "mark_radius " << cert.mark_radius << "\n";
    out << "min_abs_slope " << cert.min_abs_slope << "\n";
    out << "distance " << cert.distance << "\n";
    out << "branch_weights_ok " << (cert.branch_weights_ok ? "true" : "false") << "\n";
    out << "monotone_excluded " << (cert.monotone_excluded ? "true" : "false") << "\n";
    out << "windows " << cert.windows.size() << "\n";
    for (const auto& w : cert.windows)
        out << "window " << w.band << " " << w.lo << " " << w.hi << "\n";
}

void write_certificate_file(const std::string& path, const PerturbCertificate& cert) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open certificate file for writing: " + path);
    write_certificate(out, cert);
}

PerturbCertificate read_certificate(std::istream& in) {
    PerturbCertificate cert;
    std::string line;
    int lineno = 0;
    long expected_windows = -1;
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        auto want = [&](bool ok) {
            if (!ok) throw ParseError("bad certificate field '" + key + "'", lineno, 1);
        };
        std::string tok;
        if (key == "epsilon") {
            want(static_cast<bool>(ss >> tok));
            cert.epsilon = Rat::parse(tok);
        } else if (key == "n") {
            want(static_cast<bool>(ss >> cert.n));
        } else if (key == "value_denominator") {
            want(static_cast<bool>(ss >> tok));
            cert.value_denominator = Int(tok);
        } else if (key == "band_count") {
            want(static_cast<bool>(ss >> cert.band_count));
        } else if (key == "band_width") {
            want(static_cast<bool>(ss >> tok));
            cert.band_width = Rat::parse(tok);
        } else if (key == "mark_radius") {
            want(static_cast<bool>(ss >> tok));
            cert.mark_radius = Rat::parse(tok);
        } else if (key == "min_abs_slope") {
            want(static_cast<bool>(ss >> tok));
            cert.min_abs_slope = Rat::parse(tok);
        } else if (key == "distance") {
            want(static_cast<bool>(ss >> tok));
            cert.distance = Rat::parse(tok);
        } else if (key == "branch_weights_ok") {
            want(static_cast<bool>(ss >> tok) && (tok == "true" || tok == "false"));
            cert.branch_weights_ok = tok == "true";
        } else if (key == "monotone_excluded") {
            want(static_cast<bool>(ss >> tok) && (tok == "true" || tok == "false"));
            cert.monotone_excluded = tok == "true";
        } else if (key == "windows") {
            want(static_cast<bool>(ss >> expected_windows));
        } else if (key == "window") {
            CertWindow w;
            std::string lo, hi;
            want(static_cast<bool>(ss >> w.band >> lo >> hi));
            w.lo = Rat::parse(lo);
            w.hi = Rat::parse(hi);
            cert.windows.push_back(std::move(w));
        } else {
            throw ParseError("unknown certificate field '" + key + "'", lineno, 1);
        }
    }
    if (expected_windows >= 0 && expected_windows != static_cast<long>(cert.windows.size()))
        throw ParseError("window count mismatch", lineno, 1);
    return cert;
}

PerturbCertificate read_certificate_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open certificate file: " + path);
    return read_certificate(in);
}

}  // namespace plm::perturb
