#include "plmaps/rational.hpp"

#include <cctype>
#include <ostream>

#include "plmaps/errors.hpp"

namespace plm {

Int::Int(const std::string& decimal) {
    if (mpz_init_set_str(z_, decimal.c_str(), 10) != 0) {
        mpz_clear(z_);
        mpz_init(z_);
        throw ParseError("not a decimal integer: '" + decimal + "'", 1, 1);
    }
}

long Int::to_long() const {
    if (!fits_long()) throw RangeError("integer does not fit in long: " + str());
    return mpz_get_si(z_);
}

std::string Int::str() const {
    char* s = mpz_get_str(nullptr, 10, z_);
    std::string out(s);
    void (*freefn)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(s, out.size() + 1);
    return out;
}

std::ostream& operator<<(std::ostream& os, const Int& v) { return os << v.str(); }

Rat::Rat(long num, long den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    mpq_init(q_);
    mpq_set_si(q_, num, 1);
    Rat d;
    mpq_set_si(d.q_, den, 1);
    mpq_div(q_, q_, d.q_);
}

Rat::Rat(const Int& num, const Int& den) {
    if (den.sign() == 0) throw DomainError("rational with zero denominator");
    mpq_init(q_);
    mpz_set(mpq_numref(q_), num.raw());
    mpz_set(mpq_denref(q_), den.raw());
    mpq_canonicalize(q_);
}

Rat operator/(const Rat& a, const Rat& b) {
    if (b.sign() == 0) throw DomainError("division by zero");
    Rat r;
    mpq_div(r.q_, a.q_, b.q_);
    return r;
}

Rat Rat::parse(const std::string& text) {
    // Strict grammar: -?digits(/digits)? with a positive denominator part.
    const auto bad = [&](int col) { return ParseError("not a rational: '" + text + "'", 1, col); };
    if (text.empty()) throw bad(1);
    std::size_t i = 0;
    if (text[i] == '-') i++;
    std::size_t digits_start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) i++;
    if (i == digits_start) throw bad(static_cast<int>(i) + 1);
    if (i < text.size()) {
        if (text[i] != '/') throw bad(static_cast<int>(i) + 1);
        i++;
        std::size_t den_start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) i++;
        if (i == den_start || i != text.size()) throw bad(static_cast<int>(i) + 1);
        bool all_zero = true;
        for (std::size_t k = den_start; k < text.size(); k++)
            if (text[k] != '0') all_zero = false;
        if (all_zero) throw bad(static_cast<int>(den_start) + 1);
    }
    Rat r;
    if (mpq_set_str(r.q_, text.c_str(), 10) != 0) throw bad(1);
    mpq_canonicalize(r.q_);
    return r;
}

std::string Rat::str() const {
    char* s = mpq_get_str(nullptr, 10, q_);
    std::string out(s);
    void (*freefn)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(s, out.size() + 1);
    return out;
}

std::ostream& operator<<(std::ostream& os, const Rat& v) { return os << v.str(); }

}  // namespace plm
