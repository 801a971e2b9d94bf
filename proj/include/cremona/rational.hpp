#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <string>

#include "cremona/error.hpp"

namespace cremona {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

inline Int rat_num(const Rat& r) { return numerator(r); }
inline Int rat_den(const Rat& r) { return denominator(r); }

inline bool is_integer(const Rat& r) { return rat_den(r) == 1; }

inline int sign_of(const Int& x) { return x.sign(); }
inline int sign_of(const Rat& x) { return x.sign(); }

/// Canonical "p/q" form; plain "p" when the denominator is 1.
inline std::string rat_str(const Rat& r) {
    if (is_integer(r)) return rat_num(r).str();
    return rat_num(r).str() + "/" + rat_den(r).str();
}

inline std::string int_str(const Int& x) { return x.str(); }

/// Parses "p", "p/q" or "-p/q"; rejects q = 0 and malformed text.
inline Rat parse_rat(const std::string& s) {
    auto bad = [&] { fail(errc::invalid_input, "bad rational literal '" + s + "'"); };
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) bad();
    auto slash = t.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(t));
        Int p(t.substr(0, slash));
        Int q(t.substr(slash + 1));
        if (q == 0) bad();
        return Rat(p, q);
    } catch (const std::runtime_error&) {
        bad();
    }
    return Rat(0); // unreachable
}

inline Int int_gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int int_abs(const Int& a) { return boost::multiprecision::abs(a); }

inline Int int_pow(const Int& a, unsigned long e) {
    return boost::multiprecision::pow(a, e);
}

/// Exact integer square root; nullopt-style via bool return.
inline bool int_sqrt_exact(const Int& a, Int& out) {
    if (a < 0) return false;
    out = boost::multiprecision::sqrt(a);
    return out * out == a;
}

} // namespace cremona
