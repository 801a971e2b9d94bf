#pragma once

// Bivariate integer polynomials Z[y][x], stored x-major. Used behind the
// homogeneous-polynomial gcd and the elimination step of base-point
// extraction: gcd by evaluation/interpolation with a division check, and
// Res_x by specialization at integer nodes plus interpolation.

#include <vector>

#include "cremona/intpoly.hpp"

namespace cremona {

struct BiPoly {
    std::vector<IntPoly> cx; // cx[i] = coefficient of x^i, an element of Z[y]

    bool is_zero() const { return cx.empty(); }
    int deg_x() const { return static_cast<int>(cx.size()) - 1; }
    const IntPoly& lc_x() const { return cx.back(); }

    int deg_y() const {
        int d = -1;
        for (const auto& c : cx) d = std::max(d, c.deg());
        return d;
    }

    int total_deg() const {
        int d = -1;
        for (size_t i = 0; i < cx.size(); ++i)
            if (!cx[i].is_zero()) d = std::max(d, static_cast<int>(i) + cx[i].deg());
        return d;
    }

    void trim() {
        while (!cx.empty() && cx.back().is_zero()) cx.pop_back();
    }

    IntPoly eval_y(const Int& t) const {
        IntPoly r;
        r.c.reserve(cx.size());
        for (const auto& c : cx) r.c.push_back(ip_eval(c, t));
        r.trim();
        return r;
    }

    bool operator==(const BiPoly& o) const { return cx == o.cx; }
};

inline BiPoly bp_mul(const BiPoly& a, const BiPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    BiPoly r;
    r.cx.assign(a.cx.size() + b.cx.size() - 1, IntPoly{});
    for (size_t i = 0; i < a.cx.size(); ++i) {
        if (a.cx[i].is_zero()) continue;
        for (size_t j = 0; j < b.cx.size(); ++j)
            if (!b.cx[j].is_zero())
                r.cx[i + j] = ip_add(r.cx[i + j], ip_mul(a.cx[i], b.cx[j]));
    }
    r.trim();
    return r;
}

inline BiPoly bp_scale(BiPoly a, const IntPoly& s) {
    for (auto& c : a.cx) c = ip_mul(c, s);
    a.trim();
    return a;
}

/// Content with respect to x: gcd in Z[y] of the x-coefficients.
inline IntPoly bp_content_x(const BiPoly& a) {
    IntPoly g;
    for (const auto& c : a.cx) g = ip_gcd(g, c);
    return g;
}

inline BiPoly bp_div_coeff(const BiPoly& a, const IntPoly& d) {
    BiPoly r;
    r.cx.reserve(a.cx.size());
    for (const auto& c : a.cx) {
        IntPoly q;
        if (!ip_div_exact(c, d, q))
            fail(errc::internal_invariant_violation, "inexact content division");
        r.cx.push_back(std::move(q));
    }
    r.trim();
    return r;
}

/// Exact division in Z[y][x]; returns false when d does not divide a.
inline bool bp_div_exact(const BiPoly& a, const BiPoly& d, BiPoly& q) {
    q = {};
    if (a.is_zero()) return true;
    if (d.is_zero()) return false;
    BiPoly r = a;
    if (r.deg_x() < d.deg_x()) return false;
    q.cx.assign(r.cx.size() - d.cx.size() + 1, IntPoly{});
    while (!r.is_zero() && r.deg_x() >= d.deg_x()) {
        IntPoly t;
        if (!ip_div_exact(r.lc_x(), d.lc_x(), t)) return false;
        int k = r.deg_x() - d.deg_x();
        q.cx[k] = t;
        for (int i = 0; i <= d.deg_x(); ++i)
            r.cx[i + k] = ip_sub(r.cx[i + k], ip_mul(t, d.cx[i]));
        r.trim();
    }
    q.trim();
    return r.is_zero();
}

namespace detail {

inline BiPoly bp_normalize_sign(BiPoly a) {
    if (a.is_zero()) return a;
    if (a.lc_x().lc() < 0)
        for (auto& c : a.cx) c = ip_neg(std::move(c));
    return a;
}

} // namespace detail

/// gcd in Z[y][x], primitive-in-every-sense up to sign, computed by
/// specializing y at integer nodes, taking univariate gcds and
/// interpolating; the candidate is certified by exact division.
inline BiPoly bp_gcd(const BiPoly& a, const BiPoly& b) {
    if (a.is_zero()) return detail::bp_normalize_sign(b);
    if (b.is_zero()) return detail::bp_normalize_sign(a);
    IntPoly ca = bp_content_x(a), cb = bp_content_x(b);
    IntPoly cont = ip_gcd(ca, cb);
    BiPoly fp = bp_div_coeff(a, ca);
    BiPoly gp = bp_div_coeff(b, cb);
    BiPoly cont_poly;
    cont_poly.cx.push_back(cont);

    if (fp.deg_x() == 0 || gp.deg_x() == 0)
        return detail::bp_normalize_sign(cont_poly); // primitive parts coprime in x

    IntPoly gamma = ip_gcd(fp.lc_x(), gp.lc_x());
    int dmin = std::min(fp.deg_x(), gp.deg_x());
    size_t want = static_cast<size_t>(gamma.deg() + std::max(fp.deg_y(), gp.deg_y()) + 1);

    std::vector<Rat> xs;
    std::vector<std::vector<Rat>> images; // per node: scaled gcd image coefficients, size dmin+1
    Int t = 0;
    int step = 0;
    int guard = 0;
    while (true) {
        if (++guard > 4000)
            fail(errc::internal_invariant_violation, "bivariate gcd did not stabilize");
        // nodes 0, 1, -1, 2, -2, ...
        if (step == 0)
            t = 0;
        else
            t = (step % 2 ? Int((step + 1) / 2) : Int(-(step / 2)));
        ++step;
        Int gam = ip_eval(gamma, t);
        if (gam == 0) continue;
        IntPoly A = fp.eval_y(t), B = gp.eval_y(t);
        if (A.deg() != fp.deg_x() || B.deg() != gp.deg_x()) continue;
        IntPoly g = ip_gcd(A, B);
        if (g.deg() == 0) return detail::bp_normalize_sign(cont_poly);
        if (g.deg() > dmin) continue; // unlucky node
        if (g.deg() < dmin) {
            dmin = g.deg();
            xs.clear();
            images.clear();
        }
        std::vector<Rat> img(dmin + 1);
        for (int j = 0; j <= dmin; ++j) img[j] = Rat(gam * g.c[j], g.lc());
        xs.emplace_back(t);
        images.push_back(std::move(img));
        if (xs.size() < want) continue;

        // interpolate each x-coefficient, clear denominators jointly
        std::vector<QPoly> coeffs(dmin + 1);
        for (int j = 0; j <= dmin; ++j) {
            std::vector<Rat> ys;
            ys.reserve(xs.size());
            for (const auto& im : images) ys.push_back(im[j]);
            coeffs[j] = q_interpolate(xs, ys);
        }
        Int l = 1;
        for (const auto& qc : coeffs)
            for (const auto& r : qc) l = l / int_gcd(l, rat_den(r)) * rat_den(r);
        BiPoly cand;
        cand.cx.resize(dmin + 1);
        for (int j = 0; j <= dmin; ++j) {
            IntPoly ic;
            for (const auto& r : coeffs[j]) ic.c.push_back(rat_num(r) * (l / rat_den(r)));
            ic.trim();
            cand.cx[j] = std::move(ic);
        }
        cand.trim();
        if (!cand.is_zero() && cand.deg_x() == dmin) {
            IntPoly cc = bp_content_x(cand);
            Int icc = 0;
            for (const auto& c : cand.cx) icc = int_gcd(icc, ip_content(c));
            cand = bp_div_coeff(cand, cc);
            BiPoly q1, q2;
            if (bp_div_exact(fp, cand, q1) && bp_div_exact(gp, cand, q2))
                return detail::bp_normalize_sign(bp_scale(cand, cont));
        }
        // failed certification: demand more nodes and retry
        want += 4;
    }
}

/// Res_x of a and b as an element of Z[y]. Requires the x-leading
/// coefficients of both inputs to be nonzero constants, which keeps the
/// specialization at every node degree-stable.
inline IntPoly bp_resultant_x(const BiPoly& a, const BiPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.lc_x().deg() != 0 || b.lc_x().deg() != 0)
        fail(errc::invalid_input, "resultant requires constant leading x-coefficients");
    int nodes = a.deg_x() * b.deg_y() + b.deg_x() * a.deg_y() + 1;
    if (nodes < 1) nodes = 1;
    std::vector<Rat> xs, ys;
    xs.reserve(nodes);
    ys.reserve(nodes);
    for (int i = 0; i < nodes; ++i) {
        Int t = (i % 2 ? Int((i + 1) / 2) : Int(-(i / 2)));
        IntPoly A = a.eval_y(t), B = b.eval_y(t);
        xs.emplace_back(t);
        ys.emplace_back(ip_resultant(A, B));
    }
    QPoly r = q_interpolate(xs, ys);
    IntPoly out;
    out.c.reserve(r.size());
    for (const auto& v : r) {
        if (!is_integer(v))
            fail(errc::internal_invariant_violation, "non-integer resultant interpolation");
        out.c.push_back(rat_num(v));
    }
    out.trim();
    return out;
}

} // namespace cremona
