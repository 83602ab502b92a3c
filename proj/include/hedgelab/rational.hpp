#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace hedgelab {

// All probabilities, prices and LP data are exact rationals. GMP keeps them
// canonical (lowest terms, positive denominator).
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Parses "num/den" or "num". Whitespace is not accepted.
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    Rat q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    if (q.get_den() == 0)
        throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

// q^p for integer p >= 0.
inline Rat rat_pow(const Rat& q, unsigned p) {
    Rat r(1);
    Rat base = q;
    while (p) {
        if (p & 1) r *= base;
        base *= base;
        p >>= 1;
    }
    return r;
}

// 2^{-e} for e >= 0.
inline Rat pow2_neg(unsigned e) {
    Rat r(1);
    mpz_class den(1);
    den <<= e;
    return Rat(1) / Rat(den);
}

}  // namespace hedgelab
