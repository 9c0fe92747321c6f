#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace spindle {

// Exact rational scalar used by the certification paths. mpq_class gives us
// canonicalized arbitrary-precision fractions with the usual operators.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rat: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Parses "3", "-7/2" or a plain decimal like "2.1" / "-0.9" into an exact value.
inline Rat rat_parse(const std::string& s) {
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        Rat r;
        if (r.set_str(s, 10) != 0) throw std::invalid_argument("rat_parse: bad rational '" + s + "'");
        r.canonicalize();
        return r;
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac_len = s.size() - dot - 1;
    if (frac_len == 0) throw std::invalid_argument("rat_parse: trailing dot in '" + s + "'");
    Int num;
    if (num.set_str(digits, 10) != 0) throw std::invalid_argument("rat_parse: bad decimal '" + s + "'");
    Int den = 1;
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline double rat_to_double(const Rat& r) { return r.get_d(); }

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

inline int sgn(const Rat& r) { return sgn(r.get_num()); }

// Smallest integer L with L*L >= x (x >= 0), used for exact diameter bounds.
inline Int ceil_isqrt(const Rat& x) {
    if (sgn(x) < 0) throw std::domain_error("ceil_isqrt: negative");
    Int num = x.get_num(), den = x.get_den();
    // ceil(sqrt(num/den)) = smallest L with L^2*den >= num
    Int lo = sqrt(num / den);  // floor sqrt of floor quotient, lower bound
    while (lo * lo * den < num) ++lo;
    return lo;
}

}  // namespace spindle
