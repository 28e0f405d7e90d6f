#include "plmaps/analyze.hpp"

#include <algorithm>

#include "diffquot.hpp"

namespace plm::analyze {

LevelSetReport level_set(const PLMap& f, const Rat& c) {
    LevelSetReport report;
    report.value = c;
    for (auto& p : preimage_point(f, c)) report.points.push_back(std::move(p.x));
    report.count = report.points.size();
    return report;
}

bool NoninjectiveValues::contains(const Rat& c) const {
    for (const auto& p : excluded_points)
        if (p == c) return false;
    return closure.contains(c);
}

NoninjectiveValues noninjective_values(const PLMap& f) {
    std::vector<Rat> grid = determining_values(f);
    if (grid.front() != Rat(0)) grid.insert(grid.begin(), Rat(0));
    if (grid.back() != Rat(1)) grid.push_back(Rat(1));

    std::size_t bands = grid.size() - 1;
    std::vector<bool> band_in(bands), point_in(grid.size());
    for (std::size_t b = 0; b < bands; b++) {
        Rat mid = (grid[b] + grid[b + 1]) / Rat(2);
        band_in[b] = preimage_point(f, mid).size() >= 2;
    }
    for (std::size_t v = 0; v < grid.size(); v++)
        point_in[v] = preimage_point(f, grid[v]).size() >= 2;

    std::vector<Interval> parts;
    for (std::size_t b = 0; b < bands; b++)
        if (band_in[b]) parts.emplace_back(grid[b], grid[b + 1]);
    for (std::size_t v = 0; v < grid.size(); v++)
        if (point_in[v]) parts.emplace_back(grid[v], grid[v]);

    NoninjectiveValues result;
    result.closure = IntervalSet(std::move(parts));
    for (std::size_t v = 0; v < grid.size(); v++) {
        bool adjacent_band = (v > 0 && band_in[v - 1]) || (v < bands && band_in[v]);
        if (!point_in[v] && adjacent_band) result.excluded_points.push_back(grid[v]);
    }
    return result;
}

ScaleDiagnostics scale_diagnostics(const PLMap& f, const Rat& x, const Rat& r) {
    detail::DqExtrema ext = detail::dq_extrema(f, x, r);
    return {x, r, std::move(ext.max_dq), std::move(ext.min_dq)};
}

}  // namespace plm::analyze
