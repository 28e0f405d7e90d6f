#ifndef PLMAPS_PERTURB_HPP
#define PLMAPS_PERTURB_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "plmaps/common.hpp"
#include "plmaps/interval.hpp"
#include "plmaps/plmap.hpp"

namespace plm::perturb {

// Perturbation shape for one window [a,b]: the map is replaced there by
// f(s(x)) with s a piecewise-affine self-map of the window. The shape is
// stored conjugated to [0,1]; the affine change of variables leaves slopes
// unchanged, so the onto and branch-weight requirements can be checked on
// the conjugated copy. Shapes must fix the window endpoints unless the
// caller sets the waiver (used by sawtooths with an even lap count).
class WindowMap {
  public:
    WindowMap(Interval window, PLMap shape01, bool endpoint_waiver = false);

    const Interval& window() const { return window_; }
    const PLMap& shape01() const { return shape01_; }
    bool endpoint_waiver() const { return waiver_; }

    // s(x) for x in the window.
    Rat apply(const Rat& x) const;

  private:
    Interval window_;
    PLMap shape01_;
    bool waiver_;
};

// The m-lap sawtooth of the window: slope magnitudes m, rising first.
// Endpoint-fixing iff m is odd; even m maps the right end to the left
// endpoint value, so the waiver is set.
WindowMap regular_window_shape(const Interval& window, int m);

// f outside the window, f(s(x)) inside. Requires value compatibility at
// interior window boundaries so the result is continuous.
PLMap window_perturb(const PLMap& f, const WindowMap& w,
                     std::int64_t lap_budget = Budgets{}.laps);

// Post-composes with grid-cell excursion maps until every determining value
// lies on the grid {k/n}. Each open cell (k/n,(k+1)/n) may contain at most
// one determining value; otherwise CellCollisionError names the colliding
// pair. The result preserves measure whenever the input does.
PLMap snap_determining_values(const PLMap& f, int n,
                              std::int64_t lap_budget = Budgets{}.laps);

// Replaces f on [d,e] by its reflection about the level f(d); requires
// f(d) = f(e) and the reflected values to stay inside [0,1].
PLMap reflect_on_interval(const PLMap& f, const Rat& d, const Rat& e);

struct ScaleMonotoneOptions {
    std::int64_t cell_budget = Budgets{}.cells;
    Exec exec = Exec::parallel;
};

// True iff x witnesses one-sided monotonicity at scale 1/n after some shear
// f(x) - gamma*x with gamma in [-n, n]; equivalently, iff every difference
// quotient over the punctured 1/n-window at x is >= -n.
bool monotone_witness_at(const PLMap& f, int n, const Rat& x);

// True iff no point of [0,1] is such a witness, i.e. every point sees a
// difference quotient below -n inside its 1/n-window. Decided exactly:
// cells between breakpoints and their 1/n-translates are covered by
// candidate quotient functions that are monotone per cell. On a false
// verdict, `witness` (when given) receives a point where
// monotone_witness_at holds.
bool nowhere_monotone_at_scale(const PLMap& f, int n, const ScaleMonotoneOptions& opts = {},
                               Rat* witness = nullptr);

struct CertWindow {
    int band = 0;  // 1-based band index i, J_i = [(i-1)*tau, i*tau]
    Rat lo;
    Rat hi;
};

// Machine-checkable record of one nowhere-monotone construction run. Every
// field is recomputed from the produced map by exact verifiers; nothing in
// here is assumed.
struct PerturbCertificate {
    Rat epsilon;
    int n = 0;
    Int value_denominator;  // least common denominator of the determining values
    int band_count = 0;     // 1/band_width
    Rat band_width;         // < epsilon/3, reciprocal a multiple of value_denominator
    Rat mark_radius;        // below band_width/(10 n) and half the least window width
    std::vector<CertWindow> windows;
    Rat min_abs_slope;  // > 10 n for a valid certificate
    Rat distance;       // sup distance to the input map, <= epsilon
    bool branch_weights_ok = false;
    bool monotone_excluded = false;

    // All type invariants at once.
    bool valid() const;
    Rat min_window_width() const;
};

struct NowhereMonotoneResult {
    PLMap map;
    PerturbCertificate certificate;
};

struct PerturbOptions {
    Budgets budgets;
    Exec exec = Exec::parallel;
};

NowhereMonotoneResult nowhere_monotone_perturb(const PLMap& f, int n, const Rat& epsilon,
                                               const PerturbOptions& opts = {});

// Intermediate stages of the construction, exposed for inspection and
// testing: the oscillating stage-two map still fails the exclusion check;
// the reflections at the marked points are what remove the witnesses.
struct ConstructionStages {
    PLMap tilde;                    // after the per-window oscillations
    PLMap final_map;                // after the reflections
    std::vector<Rat> marked_points; // shared window endpoints
    PerturbCertificate certificate;
};

ConstructionStages nowhere_monotone_stages(const PLMap& f, int n, const Rat& epsilon,
                                           const PerturbOptions& opts = {});

// Recomputes the slope bound, the distance, the weight criterion and the
// exclusion check from the maps alone and compares them with the recorded
// fields.
bool validate_certificate(const PLMap& original, const PLMap& result,
                          const PerturbCertificate& cert, const PerturbOptions& opts = {});

void write_certificate(std::ostream& out, const PerturbCertificate& cert);
void write_certificate_file(const std::string& path, const PerturbCertificate& cert);
PerturbCertificate read_certificate(std::istream& in);
PerturbCertificate read_certificate_file(const std::string& path);

}  // namespace plm::perturb

#endif
