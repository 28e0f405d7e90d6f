#include "plmaps/real.hpp"

#include <cmath>

#include "plmaps/errors.hpp"

namespace plm {

mpfr_prec_t Real::bits_for_digits(int digits) {
    if (digits < 1) digits = 1;
    // 10^digits needs digits*log2(10) bits; add generous guard room so that
    // accumulated sums stay accurate well past the requested digit count.
    return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873626)) + 64;
}

Real Real::log_of(const Rat& x, int digits) {
    if (x.sign() <= 0) throw DomainError("log of non-positive rational " + x.str());
    Real r(digits);
    mpfr_set_q(r.v_, x.raw(), MPFR_RNDN);
    mpfr_log(r.v_, r.v_, MPFR_RNDN);
    return r;
}

Real Real::log_of(long n, int digits) { return log_of(Rat(n), digits); }

std::string Real::decimal(int digits) const {
    if (digits < 1) digits = 1;
    // Scale by 10^digits, round to nearest integer, print with a decimal point.
    mpfr_t scaled;
    mpfr_init2(scaled, prec_ + 64);
    mpfr_set(scaled, v_, MPFR_RNDN);
    mpfr_t pow10;
    mpfr_init2(pow10, prec_ + 64);
    mpfr_ui_pow_ui(pow10, 10, static_cast<unsigned long>(digits), MPFR_RNDN);
    mpfr_mul(scaled, scaled, pow10, MPFR_RNDN);
    mpz_t zi;
    mpz_init(zi);
    mpfr_get_z(zi, scaled, MPFR_RNDN);
    mpfr_clear(scaled);
    mpfr_clear(pow10);

    bool neg = mpz_sgn(zi) < 0;
    mpz_abs(zi, zi);
    char* s = mpz_get_str(nullptr, 10, zi);
    std::string raw(s);
    void (*freefn)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(s, raw.size() + 1);
    mpz_clear(zi);

    std::string out;
    if (raw.size() <= static_cast<std::size_t>(digits)) {
        out = "0." + std::string(static_cast<std::size_t>(digits) - raw.size(), '0') + raw;
    } else {
        out = raw.substr(0, raw.size() - digits) + "." + raw.substr(raw.size() - digits);
    }
    if (neg && out.find_first_not_of("0.") != std::string::npos) out = "-" + out;
    return out;
}

}  // namespace plm
