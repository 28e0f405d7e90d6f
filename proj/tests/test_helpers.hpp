#ifndef PLMAPS_TESTS_HELPERS_HPP
#define PLMAPS_TESTS_HELPERS_HPP

#include <random>
#include <vector>

#include "plmaps/interval.hpp"
#include "plmaps/plmap.hpp"

namespace plmtest {

// Deterministic rational generator: values k/den with k uniform in [0, den].
class RatGen {
  public:
    explicit RatGen(std::uint64_t seed, long den = 720720) : rng_(seed), den_(den) {}

    plm::Rat unit() {
        std::uniform_int_distribution<long> d(0, den_);
        return plm::Rat(d(rng_), den_);
    }

    plm::Rat open_unit() {
        std::uniform_int_distribution<long> d(1, den_ - 1);
        return plm::Rat(d(rng_), den_);
    }

    plm::Interval sub_interval() {
        plm::Rat a = unit(), b = unit();
        if (b < a) std::swap(a, b);
        return {a, b};
    }

    long integer(long lo, long hi) {
        std::uniform_int_distribution<long> d(lo, hi);
        return d(rng_);
    }

  private:
    std::mt19937_64 rng_;
    long den_;
};

// Independent preservation oracle: exact preimage-measure equality over a
// batch of random intervals. Uses the interval-preimage path, not the
// band-weight path, so the two checks cross-validate each other.
inline bool preserves_on_random_intervals(const plm::PLMap& f, int count, std::uint64_t seed) {
    RatGen gen(seed);
    for (int i = 0; i < count; i++) {
        plm::Interval j = gen.sub_interval();
        if (plm::preimage_interval(f, j).measure() != j.length()) return false;
    }
    return true;
}

}  // namespace plmtest

#endif
