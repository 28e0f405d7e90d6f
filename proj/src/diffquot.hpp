#ifndef PLMAPS_SRC_DIFFQUOT_HPP
#define PLMAPS_SRC_DIFFQUOT_HPP

#include "plmaps/plmap.hpp"

namespace plm::detail {

// Exact extreme difference quotients (f(t)-f(x))/(t-x) over the punctured
// closed window [max(0,x-r), min(1,x+r)] \ {x}. On each affine piece the
// quotient is monotone in t, so the extrema are attained at breakpoints,
// the window ends, or in the limit t -> x (the adjacent slopes); all of
// those are evaluated in exact rational arithmetic.
struct DqExtrema {
    Rat min_dq;
    Rat max_dq;
};
DqExtrema dq_extrema(const PLMap& f, const Rat& x, const Rat& r);

// True iff some quotient over the window is strictly below `bound`.
// Probes the candidate set nearest-first and exits early, which keeps the
// scale-monotonicity sweep cheap on maps with steep oscillation.
bool has_dq_below(const PLMap& f, const Rat& x, const Rat& r, const Rat& bound);

}  // namespace plm::detail

#endif
