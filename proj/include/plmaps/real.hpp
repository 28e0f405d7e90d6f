#ifndef PLMAPS_REAL_HPP
#define PLMAPS_REAL_HPP

#include <mpfr.h>

#include <string>

#include "plmaps/rational.hpp"

namespace plm {

// High-precision real number with explicit working precision, used where
// exact rational arithmetic ends (logarithms). Measures stay exact; only
// the final entropy values pass through this type. All operations round to
// nearest, so results are deterministic across runs and platforms.
class Real {
  public:
    // Working precision for `digits` significant decimal digits plus guard bits.
    static mpfr_prec_t bits_for_digits(int digits);

    explicit Real(int digits = 50) : prec_(bits_for_digits(digits)) { mpfr_init2(v_, prec_); }
    Real(const Rat& v, int digits) : prec_(bits_for_digits(digits)) {
        mpfr_init2(v_, prec_);
        mpfr_set_q(v_, v.raw(), MPFR_RNDN);
    }
    Real(long v, int digits) : prec_(bits_for_digits(digits)) {
        mpfr_init2(v_, prec_);
        mpfr_set_si(v_, v, MPFR_RNDN);
    }

    Real(const Real& o) : prec_(o.prec_) {
        mpfr_init2(v_, prec_);
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept : prec_(o.prec_) {
        mpfr_init2(v_, prec_);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, o.prec_);
            prec_ = o.prec_;
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        prec_ = o.prec_;
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    friend Real operator+(const Real& a, const Real& b) {
        Real r = a.blank(b);
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator-(const Real& a, const Real& b) {
        Real r = a.blank(b);
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator*(const Real& a, const Real& b) {
        Real r = a.blank(b);
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator/(const Real& a, const Real& b) {
        Real r = a.blank(b);
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    Real operator-() const {
        Real r = blank(*this);
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }
    Real& operator+=(const Real& o) {
        mpfr_add(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }

    Real abs() const {
        Real r = blank(*this);
        mpfr_abs(r.v_, v_, MPFR_RNDN);
        return r;
    }

    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    bool less_than(const Rat& r) const { return mpfr_cmp_q(v_, r.raw()) < 0; }

    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    mpfr_prec_t precision() const { return prec_; }

    // Natural logarithm of a positive rational at the given precision.
    static Real log_of(const Rat& x, int digits);
    // log(n) for a positive integer.
    static Real log_of(long n, int digits);

    // Fixed-point decimal rendering with `digits` digits after the point,
    // rounded to nearest; e.g. "0.6931...". Deterministic.
    std::string decimal(int digits) const;

  private:
    Real blank(const Real& o) const {
        Real r;
        mpfr_set_prec(r.v_, prec_ >= o.prec_ ? prec_ : o.prec_);
        r.prec_ = prec_ >= o.prec_ ? prec_ : o.prec_;
        return r;
    }

    mpfr_t v_;
    mpfr_prec_t prec_;
};

}  // namespace plm

#endif
