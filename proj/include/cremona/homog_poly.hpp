#pragma once

// Homogeneous trivariate polynomials over exact coefficients, sparse term
// maps keyed by exponent triples. The rational instantiation is the public
// face; the integer instantiation backs the hot substitution paths of the
// realization layer.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "cremona/bipoly.hpp"
#include "cremona/linalg.hpp"
#include "cremona/rational.hpp"

namespace cremona {

struct Mono {
    int i = 0, j = 0, k = 0; // exponents of x, y, z

    int total() const { return i + j + k; }

    friend bool operator==(const Mono& a, const Mono& b) {
        return a.i == b.i && a.j == b.j && a.k == b.k;
    }
};

/// Graded-lex, descending: higher degree first, then lex on (i, j, k).
struct MonoGreater {
    bool operator()(const Mono& a, const Mono& b) const {
        if (a.total() != b.total()) return a.total() > b.total();
        if (a.i != b.i) return a.i > b.i;
        if (a.j != b.j) return a.j > b.j;
        return a.k > b.k;
    }
};

template <class C>
class HomogPolyT {
public:
    using TermMap = std::map<Mono, C, MonoGreater>;

    HomogPolyT() = default;
    explicit HomogPolyT(int degree) : deg_(degree) {}

    static HomogPolyT zero(int degree = 0) { return HomogPolyT(degree); }

    static HomogPolyT monomial(C coeff, int i, int j, int k) {
        HomogPolyT p(i + j + k);
        if (coeff != 0) p.terms_.emplace(Mono{i, j, k}, std::move(coeff));
        return p;
    }

    static HomogPolyT constant(C v) { return monomial(std::move(v), 0, 0, 0); }

    static HomogPolyT var(int which) { // 0:x 1:y 2:z
        return monomial(C(1), which == 0, which == 1, which == 2);
    }

    bool is_zero() const { return terms_.empty(); }
    int degree() const { return deg_; }
    const TermMap& terms() const { return terms_; }

    const Mono& leading_mono() const { return terms_.begin()->first; }
    const C& leading_coeff() const { return terms_.begin()->second; }

    void add_term(const Mono& m, const C& c) {
        if (c == 0) return;
        if (terms_.empty() && deg_ != m.total() && deg_ == 0) deg_ = m.total();
        if (m.total() != deg_ && !terms_.empty())
            fail(errc::invalid_input, "term degree mismatch in homogeneous polynomial");
        deg_ = m.total();
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend HomogPolyT operator-(HomogPolyT p) {
        for (auto& [m, c] : p.terms_) c = -c;
        return p;
    }

    friend HomogPolyT operator+(const HomogPolyT& a, const HomogPolyT& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.deg_ != b.deg_) fail(errc::invalid_input, "degree mismatch in polynomial sum");
        HomogPolyT r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        if (r.is_zero()) r.deg_ = a.deg_;
        return r;
    }

    friend HomogPolyT operator-(const HomogPolyT& a, const HomogPolyT& b) { return a + (-b); }

    friend HomogPolyT operator*(const HomogPolyT& a, const HomogPolyT& b) {
        HomogPolyT r(a.deg_ + b.deg_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_)
                r.add_term(Mono{ma.i + mb.i, ma.j + mb.j, ma.k + mb.k}, ca * cb);
        return r;
    }

    friend HomogPolyT operator*(const HomogPolyT& a, const C& s) {
        if (s == 0) return zero(a.deg_);
        HomogPolyT r = a;
        for (auto& [m, c] : r.terms_) c = c * s;
        return r;
    }

    friend bool operator==(const HomogPolyT& a, const HomogPolyT& b) {
        if (a.is_zero() && b.is_zero()) return true;
        return a.deg_ == b.deg_ && a.terms_ == b.terms_;
    }

    HomogPolyT pow(int e) const {
        HomogPolyT r = constant(C(1));
        for (int t = 0; t < e; ++t) r = r * (*this);
        return r;
    }

    template <class V>
    V eval(const std::array<V, 3>& pt) const {
        V acc(0);
        for (const auto& [m, c] : terms_) {
            V t(c);
            for (int n = 0; n < m.i; ++n) t *= pt[0];
            for (int n = 0; n < m.j; ++n) t *= pt[1];
            for (int n = 0; n < m.k; ++n) t *= pt[2];
            acc += t;
        }
        return acc;
    }

    /// Substitutes three forms of a common degree d for x, y, z; the result
    /// is homogeneous of degree deg * d. Two-level Horner with a power table
    /// for the third form keeps every multiplication small.
    HomogPolyT substitute(const std::array<HomogPolyT, 3>& f) const {
        int d = f[0].degree();
        if (f[1].degree() != d || f[2].degree() != d)
            fail(errc::invalid_input, "substitution forms must share a degree");
        int n = deg_;
        if (is_zero()) return zero(n * d);
        // coefficient table: row i holds c_{i,j} with term x^i y^j z^(n-i-j)
        std::vector<std::vector<C>> rows(n + 1);
        for (int i = 0; i <= n; ++i) rows[i].assign(n - i + 1, C(0));
        for (const auto& [m, c] : terms_) rows[m.i][m.j] = c;
        std::vector<HomogPolyT> f2pow(n + 1);
        f2pow[0] = constant(C(1));
        for (int t = 1; t <= n; ++t) f2pow[t] = f2pow[t - 1] * f[2];
        HomogPolyT outer = zero(0);
        for (int i = n; i >= 0; --i) {
            int m = n - i;
            // inner Horner over j: sum_j c_{i,j} f1^j f2^(m-j)
            HomogPolyT inner = zero(0);
            for (int j = m; j >= 0; --j) {
                if (j == m) {
                    inner = rows[i][j] == 0 ? zero(0) : f2pow[0] * rows[i][j];
                } else {
                    inner = inner * f[1];
                    inner.deg_ = (m - j) * d;
                    if (rows[i][j] != 0) inner = inner + f2pow[m - j] * rows[i][j];
                }
            }
            inner.deg_ = m * d;
            if (i == n) {
                outer = inner;
            } else {
                outer = outer * f[0];
                outer.deg_ = (n - i) * d;
                if (!inner.is_zero()) outer = outer + inner;
            }
            outer.deg_ = (n - i) * d;
        }
        outer.deg_ = n * d;
        return outer;
    }

    void set_degree(int d) { // for zero polynomials produced by callers
        if (!terms_.empty() && deg_ != d)
            fail(errc::invalid_input, "cannot redeclare degree of nonzero polynomial");
        deg_ = d;
    }

private:
    int deg_ = 0;
    TermMap terms_;
};

using HomogPoly = HomogPolyT<Rat>;
using IntHomog = HomogPolyT<Int>;

inline IntHomog to_int_poly(const HomogPoly& p) {
    Int l = 1;
    for (const auto& [m, c] : p.terms()) l = l / int_gcd(l, rat_den(c)) * rat_den(c);
    IntHomog r(p.degree());
    for (const auto& [m, c] : p.terms()) r.add_term(m, rat_num(c) * (l / rat_den(c)));
    return r;
}

inline HomogPoly to_rat_poly(const IntHomog& p) {
    HomogPoly r(p.degree());
    for (const auto& [m, c] : p.terms()) r.add_term(m, Rat(c));
    return r;
}

// --- normalization ---------------------------------------------------------

/// Positive rational g such that p/g has coprime integer coefficients.
inline Rat poly_content(const HomogPoly& p) {
    if (p.is_zero()) fail(errc::invalid_input, "content of zero polynomial");
    Int l = 1;
    for (const auto& [m, c] : p.terms()) l = l / int_gcd(l, rat_den(c)) * rat_den(c);
    Int g = 0;
    for (const auto& [m, c] : p.terms()) g = int_gcd(g, rat_num(c) * (l / rat_den(c)));
    return Rat(g, l);
}

/// Content 1, graded-lex leading coefficient positive.
inline HomogPoly poly_normalize(const HomogPoly& p) {
    if (p.is_zero()) return p;
    Rat g = poly_content(p);
    if (p.leading_coeff() < 0) g = -g;
    HomogPoly r(p.degree());
    for (const auto& [m, c] : p.terms()) r.add_term(m, c / g);
    return r;
}

/// Leading coefficient scaled to 1 (the gcd normal form).
inline HomogPoly poly_monic(const HomogPoly& p) {
    if (p.is_zero()) return p;
    Rat l = p.leading_coeff();
    HomogPoly r(p.degree());
    for (const auto& [m, c] : p.terms()) r.add_term(m, c / l);
    return r;
}

// --- division and gcd ------------------------------------------------------

/// Exact division; false when d does not divide p. Graded-lex leading-term
/// cancellation, valid because the order is multiplicative.
inline bool poly_div_exact(const HomogPoly& p, const HomogPoly& d, HomogPoly& q) {
    if (d.is_zero()) return false;
    q = HomogPoly::zero(p.degree() - d.degree());
    if (p.is_zero()) return true;
    if (p.degree() < d.degree()) return false;
    HomogPoly r = p;
    while (!r.is_zero()) {
        const Mono& mr = r.leading_mono();
        const Mono& md = d.leading_mono();
        Mono mq{mr.i - md.i, mr.j - md.j, mr.k - md.k};
        if (mq.i < 0 || mq.j < 0 || mq.k < 0) return false;
        Rat cq = r.leading_coeff() / d.leading_coeff();
        HomogPoly t = HomogPoly::monomial(cq, mq.i, mq.j, mq.k);
        q = q + t;
        r = r - t * d;
    }
    return true;
}

inline int z_order(const HomogPoly& p) {
    int k = p.degree();
    for (const auto& [m, c] : p.terms()) k = std::min(k, m.k);
    return k;
}

inline HomogPoly shift_z(const HomogPoly& p, int dk) { // multiply by z^dk (dk may be negative)
    HomogPoly r(p.degree() + dk);
    for (const auto& [m, c] : p.terms()) r.add_term(Mono{m.i, m.j, m.k + dk}, c);
    return r;
}

/// Dehomogenize (z = 1) with denominators cleared; requires z_order(p) = 0.
inline BiPoly dehomogenize(const HomogPoly& p) {
    IntHomog ip = to_int_poly(p);
    BiPoly b;
    for (const auto& [m, c] : ip.terms()) {
        if (static_cast<size_t>(m.i) >= b.cx.size()) b.cx.resize(m.i + 1);
        auto& row = b.cx[m.i].c;
        if (static_cast<size_t>(m.j) >= row.size()) row.resize(m.j + 1, Int(0));
        row[m.j] = c;
    }
    for (auto& c : b.cx) c.trim();
    b.trim();
    return b;
}

inline HomogPoly rehomogenize(const BiPoly& b) {
    int d = b.total_deg();
    HomogPoly p(std::max(d, 0));
    for (size_t i = 0; i < b.cx.size(); ++i)
        for (size_t j = 0; j < b.cx[i].c.size(); ++j)
            if (b.cx[i].c[j] != 0)
                p.add_term(Mono{static_cast<int>(i), static_cast<int>(j),
                                d - static_cast<int>(i) - static_cast<int>(j)},
                           Rat(b.cx[i].c[j]));
    return p;
}

/// gcd of homogeneous forms, normalized to leading coefficient 1 under
/// graded-lex. Strips the common z power, then works in Z[y][x] on the
/// dehomogenized parts (the z-free correspondence is degree-faithful).
inline HomogPoly poly_gcd(const HomogPoly& p, const HomogPoly& q) {
    if (p.is_zero() && q.is_zero())
        fail(errc::invalid_input, "gcd of two zero polynomials");
    if (p.is_zero()) return poly_monic(q);
    if (q.is_zero()) return poly_monic(p);
    int zp = z_order(p), zq = z_order(q);
    HomogPoly p1 = shift_z(p, -zp), q1 = shift_z(q, -zq);
    BiPoly g = bp_gcd(dehomogenize(p1), dehomogenize(q1));
    HomogPoly h = rehomogenize(g);
    return poly_monic(shift_z(h, std::min(zp, zq)));
}

// --- multiplicity ----------------------------------------------------------

/// Order of vanishing of p at a rational projective point: move the point
/// to (0:0:1) by an exact linear change and read off the minimal x,y-order.
inline int multiplicity_at(const HomogPoly& p, const Vec3& pt_in) {
    if (p.is_zero()) fail(errc::invalid_input, "multiplicity of zero polynomial");
    Vec3 pt = normalize_point(pt_in);
    int pivot = 0;
    while (pt[pivot] == 0) ++pivot;
    // columns: the two unit vectors away from the pivot, then the point
    std::array<Vec3, 2> units{};
    int u = 0;
    for (int i = 0; i < 3 && u < 2; ++i) {
        if (i == pivot) continue;
        Vec3 e{Rat(0), Rat(0), Rat(0)};
        e[i] = 1;
        units[u++] = e;
    }
    Mat3 M = Mat3::from_columns(units[0], units[1], pt);
    std::array<HomogPoly, 3> forms;
    for (int r = 0; r < 3; ++r) {
        HomogPoly f(1);
        for (int c = 0; c < 3; ++c)
            if (M.at(r, c) != 0) f.add_term(Mono{c == 0, c == 1, c == 2}, M.at(r, c));
        f.set_degree(1);
        forms[r] = f;
    }
    HomogPoly moved = p.substitute(forms);
    int best = moved.degree() + 1;
    for (const auto& [m, c] : moved.terms()) best = std::min(best, m.i + m.j);
    return best;
}

/// p composed with the linear map given by matrix M: x -> p(M v).
inline HomogPoly linear_change(const HomogPoly& p, const Mat3& M) {
    std::array<HomogPoly, 3> forms;
    for (int r = 0; r < 3; ++r) {
        HomogPoly f(1);
        for (int c = 0; c < 3; ++c)
            if (M.at(r, c) != 0) f.add_term(Mono{c == 0, c == 1, c == 2}, M.at(r, c));
        f.set_degree(1);
        forms[r] = f;
    }
    return p.substitute(forms);
}

// --- text format -----------------------------------------------------------

/// Canonical text form: graded-lex descending terms, "c*x^i*y^j*z^k".
inline std::string poly_str(const HomogPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        Rat a = c;
        if (first) {
            if (a < 0) {
                out += "-";
                a = -a;
            }
        } else {
            out += (a < 0) ? " - " : " + ";
            if (a < 0) a = -a;
        }
        first = false;
        std::string vars;
        auto piece = [&](const char* v, int e) {
            if (e == 0) return;
            if (!vars.empty()) vars += "*";
            vars += v;
            if (e > 1) vars += "^" + std::to_string(e);
        };
        piece("x", m.i);
        piece("y", m.j);
        piece("z", m.k);
        if (vars.empty()) {
            out += rat_str(a);
        } else if (a == 1) {
            out += vars;
        } else {
            out += rat_str(a) + "*" + vars;
        }
    }
    return out;
}

/// Parses the sum-of-terms format; rejects non-homogeneous input.
inline HomogPoly parse_poly(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) fail(errc::invalid_input, "empty polynomial");
    size_t pos = 0;
    auto bad = [&] { fail(errc::invalid_input, "bad polynomial syntax near position " +
                                                   std::to_string(pos) + " in '" + text + "'"); };
    struct Term {
        Rat coeff{1};
        Mono m;
    };
    std::vector<Term> parsed;
    bool expect_term = true;
    int sign = 1;
    Term cur;
    bool cur_has_content = false;
    auto flush = [&] {
        if (!cur_has_content) bad();
        cur.coeff *= sign;
        parsed.push_back(cur);
        cur = Term{};
        cur_has_content = false;
        sign = 1;
    };
    while (pos < s.size()) {
        char c = s[pos];
        if (expect_term && (c == '+' || c == '-')) {
            if (c == '-') sign = -sign;
            ++pos;
            continue;
        }
        if (!expect_term && (c == '+' || c == '-')) {
            flush();
            sign = (c == '-') ? -1 : 1;
            ++pos;
            expect_term = true;
            continue;
        }
        if (c == '*') {
            if (expect_term) bad();
            ++pos;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            std::string numstr = s.substr(start, pos - start);
            if (pos < s.size() && s[pos] == '/') {
                ++pos;
                size_t ds = pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                if (ds == pos) bad();
                numstr += "/" + s.substr(ds, pos - ds);
            }
            cur.coeff *= parse_rat(numstr);
            cur_has_content = true;
            expect_term = false;
            continue;
        }
        if (c == 'x' || c == 'y' || c == 'z') {
            ++pos;
            int e = 1;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                size_t ds = pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                if (ds == pos) bad();
                e = std::stoi(s.substr(ds, pos - ds));
            }
            if (c == 'x') cur.m.i += e;
            if (c == 'y') cur.m.j += e;
            if (c == 'z') cur.m.k += e;
            cur_has_content = true;
            expect_term = false;
            continue;
        }
        bad();
    }
    if (expect_term) bad();
    flush();
    int deg = -1;
    bool all_zero = true;
    for (const auto& t : parsed)
        if (t.coeff != 0) {
            all_zero = false;
            if (deg == -1) deg = t.m.total();
            if (t.m.total() != deg)
                fail(errc::invalid_input, "non-homogeneous polynomial: '" + text + "'");
        }
    if (all_zero) return HomogPoly::zero(0);
    HomogPoly p(deg);
    for (const auto& t : parsed) p.add_term(t.m, t.coeff);
    return p;
}

} // namespace cremona
