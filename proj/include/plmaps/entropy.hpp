#ifndef PLMAPS_ENTROPY_HPP
#define PLMAPS_ENTROPY_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "plmaps/common.hpp"
#include "plmaps/plmap.hpp"
#include "plmaps/real.hpp"

namespace plm::entropy {

// Partition of [0,1] into intervals between consecutive cuts.
struct Partition {
    std::vector<Rat> cuts;  // 0 = cuts[0] < ... < cuts[m] = 1

    std::size_t cell_count() const { return cuts.size() - 1; }
    // Cell index of a point; a cut hit resolves to the left cell.
    std::uint32_t cell_of(const Rat& x) const;
};

// The 2^i dyadic intervals [j/2^i, (j+1)/2^i]. Guarded for i > 30.
Partition dyadic_partition(int i);

// Common refinement of P, f^{-1}P, ..., f^{-(n-1)}P with itinerary labels.
// Elementary intervals live between consecutive refinement cuts; intervals
// sharing an itinerary word are grouped and their exact measures summed.
struct LabeledPartition {
    std::vector<Rat> cuts;
    int word_length = 0;
    // Flattened itineraries: words[c*word_length + j] is the P-cell of
    // f^j(midpoint of elementary interval c).
    std::vector<std::uint32_t> words;

    struct Group {
        std::vector<std::uint32_t> word;
        Rat measure;
    };
    std::vector<Group> groups;  // sorted lexicographically by word

    std::size_t cell_count() const { return cuts.size() - 1; }
    Interval cell(std::size_t c) const { return Interval(cuts[c], cuts[c + 1]); }
};

struct JoinOptions {
    std::int64_t cut_budget = Budgets{}.cuts;
    Exec exec = Exec::parallel;
};

LabeledPartition join_partition(const PLMap& f, const Partition& p, int n,
                                const JoinOptions& opts = {});

// H = -sum mu log mu over the groups; measures enter exactly, logarithms at
// the configured precision. Groups are accumulated in their sorted order, so
// the value is deterministic.
Real partition_entropy(const LabeledPartition& lp, int digits = 50);

// H(join(f, p, n)) / n.
Real join_entropy_rate(const PLMap& f, const Partition& p, int n, int digits = 50,
                       const JoinOptions& opts = {});

// For positive a_i with sum eta < 1: -sum a_i log a_i <= eta log l - eta log eta.
struct EntropySumBound {
    Real lhs;
    Real rhs;
    bool holds;
};
EntropySumBound entropy_sum_bound(const std::vector<Rat>& a, int digits = 50);

// First (i, n), lexicographic with i outer, in [k,i_max] x [k,n_max] whose
// join entropy rate is below beta; absent when no tested pair qualifies.
struct EntropyWitness {
    int i;
    int n;
    Real value;
};
std::optional<EntropyWitness> entropy_witness_search(const PLMap& f, const Rat& beta, int k,
                                                     int i_max, int n_max, int digits = 50,
                                                     const JoinOptions& opts = {});

struct ProfileRow {
    int i;
    int n;
    Real h;
    std::int64_t cut_count;
    std::int64_t group_count;
};

struct EntropyProfile {
    std::vector<ProfileRow> rows;
    bool exact_measures_retained = true;
    // Set when a budget stopped the sweep early; the CSV gets a marker row.
    bool truncated = false;
    std::int64_t truncated_reached = 0;
    std::int64_t truncated_budget = 0;
};

// Rates for i = 1..i_max, n = 1..n_max. On budget exhaustion the profile
// holds the rows computed so far with the truncation fields set.
EntropyProfile entropy_profile(const PLMap& f, int i_max, int n_max, int digits = 50,
                               const JoinOptions& opts = {});

// CSV with header i,n,h,cut_count,group_count; a truncated profile ends with
// a marker row.
void write_profile_csv(std::ostream& out, const EntropyProfile& profile, int digits = 50);

}  // namespace plm::entropy

#endif
