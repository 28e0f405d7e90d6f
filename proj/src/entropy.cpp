#include "plmaps/entropy.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "plmaps/errors.hpp"

namespace plm::entropy {

std::uint32_t Partition::cell_of(const Rat& x) const {
    auto it = std::lower_bound(cuts.begin(), cuts.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - cuts.begin());
    return static_cast<std::uint32_t>(idx == 0 ? 0 : idx - 1);
}

Partition dyadic_partition(int i) {
    if (i < 1) throw PreconditionError("dyadic partition needs i >= 1");
    if (i > 30)
        throw BudgetError("dyadic partition level too deep", i, 30);
    Partition p;
    long cells = 1L << i;
    p.cuts.reserve(cells + 1);
    for (long j = 0; j <= cells; j++) p.cuts.emplace_back(j, cells);
    return p;
}

namespace {

Rat pow10_inverse(int k) {
    Int d;
    mpz_ui_pow_ui(d.raw(), 10, static_cast<unsigned long>(k));
    return Rat(Int(1), d);
}

// Incremental cut refinement: cuts(P) joined with f-preimages of the
// previous level's cuts.
class JoinRefiner {
  public:
    JoinRefiner(const PLMap& f, const Partition& p, const JoinOptions& opts)
        : f_(f), p_(p), opts_(opts), cuts_(p.cuts), level_(1) {
        check_budget();
    }

    int level() const { return level_; }
    const std::vector<Rat>& cuts() const { return cuts_; }

    void extend_to(int n) {
        while (level_ < n) {
            // Budget the pulled-back cut count before materializing it: each
            // segment contributes the cuts its value range covers.
            std::int64_t projected = static_cast<std::int64_t>(p_.cuts.size());
            for (std::size_t s = 0; s < f_.segment_count(); s++) {
                const Rat& y0 = f_.ys()[s];
                const Rat& y1 = f_.ys()[s + 1];
                auto first = std::lower_bound(cuts_.begin(), cuts_.end(), min(y0, y1));
                auto last = std::upper_bound(cuts_.begin(), cuts_.end(), max(y0, y1));
                projected += static_cast<std::int64_t>(last - first);
                if (projected > opts_.cut_budget)
                    throw BudgetError("cut budget exceeded in join refinement", projected,
                                      opts_.cut_budget);
            }
            std::vector<Rat> next = preimage_point_batch(f_, cuts_);
            next.insert(next.end(), p_.cuts.begin(), p_.cuts.end());
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            cuts_ = std::move(next);
            level_++;
            check_budget();
        }
    }

    LabeledPartition label(int n) const {
        LabeledPartition lp;
        lp.cuts = cuts_;
        lp.word_length = n;
        const std::size_t cells = lp.cell_count();
        lp.words.assign(cells * static_cast<std::size_t>(n), 0);

        auto label_cell = [&](std::size_t c) {
            Rat x = (lp.cuts[c] + lp.cuts[c + 1]) / Rat(2);
            for (int j = 0; j < n; j++) {
                lp.words[c * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] =
                    p_.cell_of(x);
                if (j + 1 < n) x = f_(x);
            }
        };

        if (opts_.exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
            for (std::int64_t c = 0; c < static_cast<std::int64_t>(cells); c++)
                label_cell(static_cast<std::size_t>(c));
        } else {
            for (std::size_t c = 0; c < cells; c++) label_cell(c);
        }

        group(lp);
        return lp;
    }

  private:
    void check_budget() const {
        if (static_cast<std::int64_t>(cuts_.size()) > opts_.cut_budget)
            throw BudgetError("cut budget exceeded in join refinement",
                              static_cast<std::int64_t>(cuts_.size()), opts_.cut_budget);
    }

    void group(LabeledPartition& lp) const {
        const std::size_t cells = lp.cell_count();
        const std::size_t n = static_cast<std::size_t>(lp.word_length);
        std::vector<std::uint32_t> order(cells);
        std::iota(order.begin(), order.end(), 0);
        const std::uint32_t* words = lp.words.data();
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            return std::lexicographical_compare(words + a * n, words + (a + 1) * n, words + b * n,
                                                words + (b + 1) * n);
        });
        for (std::size_t k = 0; k < cells; k++) {
            std::uint32_t c = order[k];
            bool fresh = lp.groups.empty() ||
                         !std::equal(words + c * n, words + (c + 1) * n,
                                     lp.groups.back().word.begin());
            Rat len = lp.cuts[c + 1] - lp.cuts[c];
            if (fresh) {
                LabeledPartition::Group g;
                g.word.assign(words + c * n, words + (c + 1) * n);
                g.measure = std::move(len);
                lp.groups.push_back(std::move(g));
            } else {
                lp.groups.back().measure += len;
            }
        }
    }

    const PLMap& f_;
    const Partition& p_;
    JoinOptions opts_;
    std::vector<Rat> cuts_;
    int level_;
};

}  // namespace

LabeledPartition join_partition(const PLMap& f, const Partition& p, int n,
                                const JoinOptions& opts) {
    if (n < 1) throw PreconditionError("join needs n >= 1");
    JoinRefiner refiner(f, p, opts);
    refiner.extend_to(n);
    return refiner.label(n);
}

Real partition_entropy(const LabeledPartition& lp, int digits) {
    Real h(0L, digits);
    for (const auto& g : lp.groups) {
        if (g.measure == Rat(1)) continue;  // single full-measure group: term 0
        h += Real(g.measure, digits) * Real::log_of(g.measure, digits);
    }
    return -h;
}

Real join_entropy_rate(const PLMap& f, const Partition& p, int n, int digits,
                       const JoinOptions& opts) {
    return partition_entropy(join_partition(f, p, n, opts), digits) / Real(n, digits);
}

EntropySumBound entropy_sum_bound(const std::vector<Rat>& a, int digits) {
    if (a.empty()) throw PreconditionError("entropy_sum_bound needs at least one term");
    Rat eta(0);
    for (const auto& v : a) {
        if (v.sign() <= 0) throw PreconditionError("entropy_sum_bound needs positive terms");
        eta += v;
    }
    if (eta >= Rat(1)) throw PreconditionError("entropy_sum_bound needs total mass below 1");
    Real lhs(0L, digits);
    for (const auto& v : a) lhs += Real(v, digits) * Real::log_of(v, digits);
    lhs = -lhs;
    Real eta_r(eta, digits);
    Real rhs = eta_r * Real::log_of(static_cast<long>(a.size()), digits) -
               eta_r * Real::log_of(eta, digits);
    // Precision-guarded comparison: both sides carry the same evaluation
    // error envelope, so a tolerance past the working digit count keeps the
    // exact equality cases (uniform vectors) on the `holds` side.
    Real tol(pow10_inverse(digits + 5), digits);
    return {lhs, rhs, lhs <= rhs + tol};
}

std::optional<EntropyWitness> entropy_witness_search(const PLMap& f, const Rat& beta, int k,
                                                     int i_max, int n_max, int digits,
                                                     const JoinOptions& opts) {
    if (k < 1 || k > i_max || k > n_max)
        throw PreconditionError("witness search needs 1 <= k <= i_max and k <= n_max");
    for (int i = k; i <= i_max; i++) {
        Partition p = dyadic_partition(i);
        JoinRefiner refiner(f, p, opts);
        for (int n = k; n <= n_max; n++) {
            refiner.extend_to(n);
            Real h = partition_entropy(refiner.label(n), digits) / Real(n, digits);
            if (h.less_than(beta)) return EntropyWitness{i, n, h};
        }
    }
    return std::nullopt;
}

EntropyProfile entropy_profile(const PLMap& f, int i_max, int n_max, int digits,
                               const JoinOptions& opts) {
    EntropyProfile profile;
    for (int i = 1; i <= i_max; i++) {
        Partition p = dyadic_partition(i);
        JoinRefiner refiner(f, p, opts);
        for (int n = 1; n <= n_max; n++) {
            try {
                refiner.extend_to(n);
            } catch (const BudgetError& e) {
                profile.truncated = true;
                profile.truncated_reached = e.reached;
                profile.truncated_budget = e.budget;
                return profile;
            }
            LabeledPartition lp = refiner.label(n);
            Real h = partition_entropy(lp, digits) / Real(n, digits);
            profile.rows.push_back({i, n, h, static_cast<std::int64_t>(lp.cuts.size()),
                                    static_cast<std::int64_t>(lp.groups.size())});
        }
    }
    return profile;
}

void write_profile_csv(std::ostream& out, const EntropyProfile& profile, int digits) {
    out << "i,n,h,cut_count,group_count\n";
    for (const auto& row : profile.rows) {
        out << row.i << "," << row.n << "," << row.h.decimal(digits) << "," << row.cut_count
            << "," << row.group_count << "\n";
    }
    if (profile.truncated) {
        out << "truncated,truncated,budget-exceeded," << profile.truncated_reached << ","
            << profile.truncated_budget << "\n";
    }
}

}  // namespace plm::entropy
