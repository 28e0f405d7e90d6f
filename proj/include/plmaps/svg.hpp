#ifndef PLMAPS_SVG_HPP
#define PLMAPS_SVG_HPP

#include <iosfwd>
#include <optional>

#include "plmaps/entropy.hpp"
#include "plmaps/perturb.hpp"
#include "plmaps/plmap.hpp"

namespace plm::svg {

// Self-contained SVG of the map graph in the unit square. Coordinates are
// rendered on a fixed 10^6-unit integer grid from the exact rationals, so
// the output is byte-deterministic. With a certificate, horizontal guides
// mark the band grid and vertical guides the window boundaries.
void plot_map(std::ostream& out, const PLMap& f,
              const std::optional<perturb::PerturbCertificate>& cert = std::nullopt);

// Line chart of an entropy profile CSV: one polyline per partition level.
struct ProfilePoint {
    int i = 0;
    int n = 0;
    Rat h;  // parsed back from the decimal column
};
void plot_profile(std::ostream& out, const std::vector<ProfilePoint>& points);

// Parses the CSV written by write_profile_csv; truncation rows are skipped.
std::vector<ProfilePoint> read_profile_csv(std::istream& in);

}  // namespace plm::svg

#endif
