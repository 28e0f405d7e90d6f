#ifndef PLMAPS_MAP_IO_HPP
#define PLMAPS_MAP_IO_HPP

#include <iosfwd>
#include <string>

#include "plmaps/plmap.hpp"

namespace plm::io {

// Map files hold one record per breakpoint: "x y" with each coordinate in
// lowest-terms "p/q" form (plain "p" for integers). Blank lines and lines
// starting with '#' are ignored. The reader rejects non-monotone abscissae,
// out-of-range values and zero slopes with 1-based line/column positions.
PLMap read_map(std::istream& in);
PLMap read_map_file(const std::string& path);

void write_map(std::ostream& out, const PLMap& f);
void write_map_file(const std::string& path, const PLMap& f);

// Inline breakpoint syntax "x:y, x:y, ..." used by the command line.
PLMap parse_breakpoint_spec(const std::string& spec);

}  // namespace plm::io

#endif
