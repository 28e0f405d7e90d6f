#ifndef PLMAPS_ANALYZE_HPP
#define PLMAPS_ANALYZE_HPP

#include <vector>

#include "plmaps/interval.hpp"
#include "plmaps/plmap.hpp"

namespace plm::analyze {

struct LevelSetReport {
    Rat value;
    std::vector<Rat> points;
    // Non-degenerate level components; always empty for maps with nonzero
    // slopes, kept so reports have a stable shape.
    IntervalSet intervals;
    std::size_t count = 0;
};

LevelSetReport level_set(const PLMap& f, const Rat& c);

// The set of values whose level set has more than one point. For a
// piecewise-linear map this is a finite union of bands between consecutive
// determining values, plus or minus finitely many boundary points; it is
// reported as the closure together with the boundary points that do not
// belong to the set. The measure is unaffected by the excluded points.
struct NoninjectiveValues {
    IntervalSet closure;
    std::vector<Rat> excluded_points;

    Rat measure() const { return closure.measure(); }
    bool contains_interval() const { return closure.contains_interval(); }
    bool contains(const Rat& c) const;
};

NoninjectiveValues noninjective_values(const PLMap& f);

// Exact extreme difference quotients over the punctured r-window around x;
// finite-scale stand-ins for the upper and lower derivatives.
struct ScaleDiagnostics {
    Rat x;
    Rat r;
    Rat max_dq;
    Rat min_dq;
};

ScaleDiagnostics scale_diagnostics(const PLMap& f, const Rat& x, const Rat& r);

}  // namespace plm::analyze

#endif
