#pragma once

// Univariate polynomial machinery over Z and Q: primitive-PRS gcd,
// subresultant resultant, and exact rational root extraction (modular root
// finding plus Hensel lifting and rational reconstruction). Everything here
// is exact; no floating point.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "cremona/rational.hpp"

namespace cremona {

/// Coefficients ascending; empty vector is the zero polynomial.
struct IntPoly {
    std::vector<Int> c;

    static IntPoly zero() { return {}; }
    static IntPoly constant(Int v) {
        IntPoly p;
        if (v != 0) p.c.push_back(std::move(v));
        return p;
    }

    bool is_zero() const { return c.empty(); }
    int deg() const { return static_cast<int>(c.size()) - 1; }
    const Int& lc() const { return c.back(); }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    bool operator==(const IntPoly& o) const { return c == o.c; }
};

using QPoly = std::vector<Rat>; // same convention: ascending, may hold a trailing zero transiently

inline void qtrim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int qdeg(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

inline IntPoly ip_neg(IntPoly a) {
    for (auto& x : a.c) x = -x;
    return a;
}

inline IntPoly ip_add(const IntPoly& a, const IntPoly& b) {
    IntPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < r.c.size(); ++i) {
        if (i < a.c.size()) r.c[i] += a.c[i];
        if (i < b.c.size()) r.c[i] += b.c[i];
    }
    r.trim();
    return r;
}

inline IntPoly ip_sub(const IntPoly& a, const IntPoly& b) { return ip_add(a, ip_neg(b)); }

inline IntPoly ip_mul(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    IntPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, Int(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            if (b.c[j] != 0) r.c[i + j] += a.c[i] * b.c[j];
    }
    r.trim();
    return r;
}

inline IntPoly ip_scale(IntPoly a, const Int& s) {
    if (s == 0) return {};
    for (auto& x : a.c) x *= s;
    return a;
}

inline IntPoly ip_shift(const IntPoly& a, int k) { // multiply by x^k
    if (a.is_zero()) return {};
    IntPoly r;
    r.c.assign(a.c.size() + k, Int(0));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i + k] = a.c[i];
    return r;
}

inline Int ip_content(const IntPoly& a) {
    Int g = 0;
    for (const auto& x : a.c) {
        g = int_gcd(g, x);
        if (g == 1) break;
    }
    return g;
}

/// Primitive part with the sign of the leading coefficient preserved.
inline IntPoly ip_pp(const IntPoly& a) {
    if (a.is_zero()) return {};
    Int g = ip_content(a);
    IntPoly r = a;
    if (g != 1)
        for (auto& x : r.c) x /= g;
    return r;
}

inline IntPoly ip_derivative(const IntPoly& a) {
    IntPoly r;
    for (size_t i = 1; i < a.c.size(); ++i) r.c.push_back(a.c[i] * Int(i));
    r.trim();
    return r;
}

inline Int ip_eval(const IntPoly& a, const Int& x) {
    Int v = 0;
    for (size_t i = a.c.size(); i-- > 0;) v = v * x + a.c[i];
    return v;
}

/// p(n/d) * d^deg(p); exact integer, sign-faithful for d > 0.
inline Int ip_eval_scaled(const IntPoly& a, const Int& n, const Int& d) {
    if (a.is_zero()) return 0;
    Int v = 0;
    Int dp = 1;
    // Horner with denominator tracking: v = sum c_i n^i d^(deg-i)
    for (size_t i = a.c.size(); i-- > 0;) v = v * n + a.c[i] * dp, dp *= d;
    // note: dp ran one power too far; harmless, unused
    return v;
}

/// lc(b)^(deg a - deg b + 1) * a mod b; requires deg a >= deg b >= 0.
inline IntPoly ip_pseudo_rem(IntPoly a, const IntPoly& b) {
    int db = b.deg();
    const Int& l = b.lc();
    int e = a.deg() - db + 1;
    while (!a.is_zero() && a.deg() >= db) {
        Int coef = a.lc();
        int k = a.deg() - db;
        // a = l*a - coef * x^k * b
        for (auto& x : a.c) x *= l;
        for (int i = 0; i <= db; ++i) a.c[i + k] -= coef * b.c[i];
        a.trim();
        --e;
    }
    if (e > 0) a = ip_scale(std::move(a), int_pow(l, static_cast<unsigned long>(e)));
    return a;
}

/// Exact division; returns false when b does not divide a over Z.
inline bool ip_div_exact(const IntPoly& a, const IntPoly& b, IntPoly& q) {
    q = {};
    if (a.is_zero()) return true;
    if (b.is_zero()) return false;
    IntPoly r = a;
    q.c.assign(a.c.size() - b.c.size() + 1, Int(0));
    while (!r.is_zero() && r.deg() >= b.deg()) {
        Int t = r.lc() / b.lc();
        if (t * b.lc() != r.lc()) return false;
        int k = r.deg() - b.deg();
        q.c[k] = t;
        for (int i = 0; i <= b.deg(); ++i) r.c[i + k] -= t * b.c[i];
        r.trim();
    }
    q.trim();
    return r.is_zero();
}

/// gcd via primitive PRS; result primitive with positive leading coefficient,
/// scaled by gcd of the integer contents.
inline IntPoly ip_gcd(IntPoly a, IntPoly b) {
    if (a.is_zero()) {
        if (b.is_zero()) return {};
        if (b.lc() < 0) b = ip_neg(std::move(b));
        return b;
    }
    if (b.is_zero()) {
        if (a.lc() < 0) a = ip_neg(std::move(a));
        return a;
    }
    Int cont = int_gcd(ip_content(a), ip_content(b));
    a = ip_pp(a);
    b = ip_pp(b);
    if (a.deg() < b.deg()) std::swap(a, b);
    while (true) {
        IntPoly r = ip_pseudo_rem(a, b);
        if (r.is_zero()) break;
        if (r.deg() == 0) {
            b = IntPoly::constant(1);
            break;
        }
        a = std::move(b);
        b = ip_pp(r);
    }
    IntPoly g = ip_pp(b);
    if (!g.is_zero() && g.lc() < 0) g = ip_neg(std::move(g));
    return ip_scale(std::move(g), cont);
}

/// Resultant over Z via the subresultant PRS (Cohen, Alg. 3.3.7).
inline Int ip_resultant(IntPoly a, IntPoly b) {
    if (a.is_zero() || b.is_zero()) return 0;
    if (a.deg() == 0) return int_pow(a.c[0], static_cast<unsigned long>(b.deg()));
    if (b.deg() == 0) return int_pow(b.c[0], static_cast<unsigned long>(a.deg()));
    Int ca = ip_content(a), cb = ip_content(b);
    a = ip_pp(a);
    b = ip_pp(b);
    Int t = int_pow(ca, static_cast<unsigned long>(b.deg())) *
            int_pow(cb, static_cast<unsigned long>(a.deg()));
    int s = 1;
    if (a.deg() < b.deg()) {
        if ((a.deg() & 1) && (b.deg() & 1)) s = -s;
        std::swap(a, b);
    }
    Int g = 1, h = 1;
    while (true) {
        int d = a.deg() - b.deg();
        if ((a.deg() & 1) && (b.deg() & 1)) s = -s;
        IntPoly r = ip_pseudo_rem(a, b);
        a = std::move(b);
        // b = r / (g * h^d)
        Int divby = g * int_pow(h, static_cast<unsigned long>(d));
        b = r;
        for (auto& x : b.c) x /= divby;
        g = a.lc();
        // h = h^(1-d) * g^d
        Int gd = int_pow(g, static_cast<unsigned long>(d));
        if (d == 0) {
            // h unchanged
        } else if (d == 1) {
            h = gd;
        } else {
            h = gd / int_pow(h, static_cast<unsigned long>(d - 1));
        }
        if (b.is_zero()) return 0;
        if (b.deg() == 0) break;
    }
    // final step: h = h^(1-deg a) * lc(b)^(deg a)
    int da = a.deg();
    Int res = int_pow(b.c[0], static_cast<unsigned long>(da));
    if (da > 1) res /= int_pow(h, static_cast<unsigned long>(da - 1));
    if (s < 0) res = -res;
    return t * res;
}

inline IntPoly ip_squarefree_part(const IntPoly& a) {
    if (a.is_zero() || a.deg() == 0) return a;
    IntPoly g = ip_gcd(a, ip_derivative(a));
    IntPoly q;
    bool ok = ip_div_exact(a, g, q);
    (void)ok;
    return ip_pp(q);
}

// --- Sturm sequences -------------------------------------------------------

inline std::vector<IntPoly> sturm_chain(const IntPoly& p) {
    std::vector<IntPoly> chain;
    IntPoly a = ip_squarefree_part(p);
    if (a.is_zero()) return chain;
    chain.push_back(a);
    IntPoly d = ip_derivative(a);
    if (d.is_zero()) return chain;
    chain.push_back(d);
    while (true) {
        const IntPoly& p0 = chain[chain.size() - 2];
        const IntPoly& p1 = chain.back();
        if (p1.deg() == 0) break;
        IntPoly r = ip_pseudo_rem(p0, p1);
        if (r.is_zero()) break;
        // pseudo_rem multiplies by lc(p1)^e which may be negative; restore the
        // sign of the true remainder, then negate for the Sturm recurrence.
        int e = p0.deg() - p1.deg() + 1;
        if (p1.lc() < 0 && (e & 1)) r = ip_neg(std::move(r));
        r = ip_neg(std::move(r));
        Int cont = ip_content(r);
        for (auto& x : r.c) x /= cont;
        chain.push_back(std::move(r));
    }
    return chain;
}

/// Sign changes of the chain at x = n/d with d > 0.
inline int sturm_sign_changes(const std::vector<IntPoly>& chain, const Int& n, const Int& d) {
    int changes = 0, last = 0;
    for (const auto& p : chain) {
        int s = ip_eval_scaled(p, n, d).sign();
        if (s != 0) {
            if (last != 0 && s != last) ++changes;
            last = s;
        }
    }
    return changes;
}

// --- modular arithmetic (word-size primes) ---------------------------------

namespace modp {

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline uint64_t powmod(uint64_t a, uint64_t e, uint64_t p) {
    uint64_t r = 1;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline uint64_t invmod(uint64_t a, uint64_t p) { return powmod(a, p - 2, p); }

using Poly = std::vector<uint64_t>; // ascending, no trailing zeros

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly reduce(const IntPoly& a, uint64_t p) {
    Poly r(a.c.size());
    for (size_t i = 0; i < a.c.size(); ++i) {
        Int m = a.c[i] % Int(p);
        if (m < 0) m += Int(p);
        r[i] = m.convert_to<uint64_t>();
    }
    trim(r);
    return r;
}

inline Poly mul(const Poly& a, const Poly& b, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            if (b[j]) r[i + j] = (r[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % p;
    }
    trim(r);
    return r;
}

inline Poly rem(Poly a, const Poly& b, uint64_t p) {
    uint64_t inv = invmod(b.back(), p);
    while (a.size() >= b.size()) {
        uint64_t t = mulmod(a.back(), inv, p);
        size_t k = a.size() - b.size();
        if (t)
            for (size_t i = 0; i < b.size(); ++i) {
                uint64_t sub = mulmod(t, b[i], p);
                a[i + k] = (a[i + k] + p - sub) % p;
            }
        a.pop_back();
        trim(a);
        if (a.empty()) break;
    }
    return a;
}

inline Poly gcd(Poly a, Poly b, uint64_t p) {
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        uint64_t inv = invmod(a.back(), p);
        for (auto& x : a) x = mulmod(x, inv, p);
    }
    return a;
}

inline Poly powmod_poly(Poly base, uint64_t e, const Poly& mod, uint64_t p) {
    Poly r{1};
    base = rem(std::move(base), mod, p);
    while (e) {
        if (e & 1) r = rem(mul(r, base, p), mod, p);
        base = rem(mul(base, base, p), mod, p);
        e >>= 1;
    }
    return r;
}

/// All roots in F_p of a squarefree polynomial (equal-degree splitting).
inline void roots_rec(const Poly& f, uint64_t p, uint64_t& tweak, std::vector<uint64_t>& out) {
    if (f.size() <= 1) return;
    if (f.size() == 2) {
        // a + b x = 0 -> x = -a/b
        out.push_back(mulmod(p - (f[0] % p), invmod(f[1], p), p));
        return;
    }
    while (true) {
        uint64_t delta = tweak++ % p;
        Poly shifted{delta, 1}; // x + delta
        Poly h = powmod_poly(shifted, (p - 1) / 2, f, p);
        if (!h.empty()) h[0] = (h[0] + p - 1) % p; // h - 1
        trim(h);
        Poly g = gcd(f, h, p);
        if (g.size() > 1 && g.size() < f.size()) {
            Poly q;
            // f / g exact in F_p[x]
            Poly r = f;
            q.assign(f.size() - g.size() + 1, 0);
            uint64_t inv = invmod(g.back(), p);
            while (r.size() >= g.size()) {
                uint64_t t = mulmod(r.back(), inv, p);
                size_t k = r.size() - g.size();
                q[k] = t;
                for (size_t i = 0; i < g.size(); ++i) {
                    uint64_t sub = mulmod(t, g[i], p);
                    r[i + k] = (r[i + k] + p - sub) % p;
                }
                r.pop_back();
                trim(r);
                if (r.empty()) break;
            }
            trim(q);
            roots_rec(g, p, tweak, out);
            roots_rec(q, p, tweak, out);
            return;
        }
    }
}

/// Roots in F_p of an arbitrary polynomial (nonzero mod p).
inline std::vector<uint64_t> roots(const Poly& f, uint64_t p) {
    if (f.size() <= 1) return {};
    // keep only the part splitting into distinct linear factors
    Poly xq = powmod_poly(Poly{0, 1}, p, f, p); // x^p mod f
    // xq - x
    Poly diff = xq;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    Poly lin = gcd(f, diff, p);
    std::vector<uint64_t> out;
    uint64_t tweak = 1;
    roots_rec(lin, p, tweak, out);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace modp

// --- rational roots --------------------------------------------------------

/// Rational reconstruction: find n/d with |n|, d <= bound and n = v*d mod m.
inline bool rational_reconstruct(Int v, const Int& m, const Int& bound, Int& n_out, Int& d_out) {
    Int r0 = m, r1 = v % m;
    if (r1 < 0) r1 += m;
    Int s0 = 0, s1 = 1;
    while (r1 > bound) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        Int s2 = s0 - q * s1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (s1 == 0) return false;
    if (int_abs(s1) > bound) return false;
    if (s1 < 0) {
        r1 = -r1;
        s1 = -s1;
    }
    if (int_gcd(int_abs(r1), s1) != 1) return false;
    n_out = r1;
    d_out = s1;
    return true;
}

namespace detail {

constexpr uint64_t root_primes[] = {
    2147483629ULL, 2147483587ULL, 2147483563ULL, 2147483549ULL, 2147483543ULL,
    2147483497ULL, 2147483489ULL, 2147483477ULL, 2147483423ULL, 2147483399ULL,
    2147483353ULL, 2147483323ULL, 2147483269ULL, 2147483249ULL, 2147483237ULL,
    2147483179ULL, 2147483171ULL, 2147483137ULL, 2147483123ULL, 2147483077ULL,
};

} // namespace detail

/// All rational roots of a nonzero integer polynomial. Exact and complete:
/// a prime is chosen that keeps the squarefree part squarefree mod p, so
/// every rational root survives reduction and Hensel-lifts uniquely.
inline std::vector<Rat> ip_rational_roots(const IntPoly& poly) {
    std::vector<Rat> out;
    if (poly.is_zero()) fail(errc::invalid_input, "rational_roots of zero polynomial");
    IntPoly f = ip_squarefree_part(poly);
    if (f.deg() <= 0) return out;
    if (f.deg() == 1) {
        out.push_back(Rat(-f.c[0], f.c[1]));
        return out;
    }
    if (f.deg() == 2) {
        // exact quadratic formula over Q
        const Int &a = f.c[2], &b = f.c[1], &c0 = f.c[0];
        Int disc = b * b - 4 * a * c0;
        Int sq;
        if (int_sqrt_exact(disc, sq)) {
            out.push_back(Rat(-b + sq, 2 * a));
            out.push_back(Rat(-b - sq, 2 * a));
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
        }
        return out;
    }

    // bounds: numerator divides c0, denominator divides lc
    Int nbound = int_abs(f.c[0]);
    Int dbound = int_abs(f.lc());
    if (nbound == 0) { // x | f
        out.push_back(Rat(0));
        IntPoly g;
        g.c.assign(f.c.begin() + 1, f.c.end());
        g.trim();
        if (!g.is_zero() && g.deg() >= 1) {
            auto rest = ip_rational_roots(g);
            out.insert(out.end(), rest.begin(), rest.end());
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    for (uint64_t p : detail::root_primes) {
        Int pI(p);
        if (f.lc() % pI == 0) continue;
        modp::Poly fp = modp::reduce(f, p);
        modp::Poly fpd = modp::reduce(ip_derivative(f), p);
        if (modp::gcd(fp, fpd, p).size() > 1) continue; // not squarefree mod p
        auto mroots = modp::roots(fp, p);

        // lift each root to precision p^k with p^k > 2*B^2, B = max bound,
        // which makes rational reconstruction unique for |n|, d <= B
        Int B = std::max(nbound, dbound);
        Int target = 2 * B * B + 1;
        IntPoly fd = ip_derivative(f);
        for (uint64_t r : mroots) {
            Int m = pI;
            Int x(r);
            while (m < target) {
                // Newton step to modulus m^2
                Int m2 = m * m;
                Int fx = ip_eval(f, x) % m2;
                Int fdx = ip_eval(fd, x) % m;
                if (fdx < 0) fdx += m;
                // invert fdx mod m
                Int g, s, t;
                g = boost::multiprecision::gcd(fdx, m);
                if (g != 1) break; // should not happen for a good prime
                Int inv = 0;
                {
                    // extended euclid
                    Int a0 = fdx % m, b0 = m, x0 = 1, x1 = 0;
                    while (b0 != 0) {
                        Int q = a0 / b0;
                        Int tmp = a0 - q * b0;
                        a0 = b0;
                        b0 = tmp;
                        tmp = x0 - q * x1;
                        x0 = x1;
                        x1 = tmp;
                    }
                    inv = x0 % m;
                    if (inv < 0) inv += m;
                }
                x = (x - fx * inv) % m2;
                if (x < 0) x += m2;
                m = m2;
            }
            Int n, d;
            if (rational_reconstruct(x, m, std::max(nbound, dbound), n, d)) {
                Rat cand(n, d);
                // exact verification against the original polynomial
                Int scaled = ip_eval_scaled(poly, rat_num(cand), rat_den(cand));
                if (scaled == 0) out.push_back(cand);
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    fail(errc::internal_invariant_violation, "no good prime for rational root extraction");
}

// --- Q[x] helpers ----------------------------------------------------------

inline IntPoly q_clear_denominators(const QPoly& p) {
    Int l = 1;
    for (const auto& r : p) l = l / int_gcd(l, rat_den(r)) * rat_den(r);
    IntPoly out;
    out.c.reserve(p.size());
    for (const auto& r : p) out.c.push_back(rat_num(r) * (l / rat_den(r)));
    out.trim();
    return out;
}

inline Rat q_eval(const QPoly& p, const Rat& x) {
    Rat v = 0;
    for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    return v;
}

/// Lagrange interpolation through (xs[i], ys[i]); distinct nodes required.
inline QPoly q_interpolate(const std::vector<Rat>& xs, const std::vector<Rat>& ys) {
    size_t n = xs.size();
    QPoly acc; // running result
    // Newton form: divided differences
    std::vector<Rat> dd(ys);
    for (size_t j = 1; j < n; ++j)
        for (size_t i = n - 1; i >= j; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
            if (i == j) break;
        }
    // build poly: dd[n-1], then multiply by (x - xs[i]) and add dd[i]
    acc.assign(1, dd[n - 1]);
    for (size_t i = n - 1; i-- > 0;) {
        // acc = acc * (x - xs[i]) + dd[i]
        QPoly next(acc.size() + 1, Rat(0));
        for (size_t k = 0; k < acc.size(); ++k) {
            next[k + 1] += acc[k];
            next[k] -= acc[k] * xs[i];
        }
        next[0] += dd[i];
        acc = std::move(next);
    }
    qtrim(acc);
    return acc;
}

} // namespace cremona
