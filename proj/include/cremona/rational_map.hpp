#pragma once

// Concrete Cremona maps as nets of homogeneous forms: composition with exact
// common-factor removal, base-point extraction by resultant elimination,
// quadratic conjugates, greedy quadratic factorization, and seeded corpus
// generation. This module is the polynomial oracle for the combinatorial
// engine.

#include <random>

#include "cremona/homog_poly.hpp"
#include "cremona/links.hpp"
#include "cremona/marked_system.hpp"

namespace cremona {

struct RationalMap {
    std::array<HomogPoly, 3> f;

    int degree() const { return f[0].degree(); }

    Vec3 apply(const Vec3& p) const {
        return Vec3{f[0].eval(p), f[1].eval(p), f[2].eval(p)};
    }
};

/// Joint normalization: one rational scalar makes all coefficients coprime
/// integers, with the first nonzero component's leading coefficient positive.
inline RationalMap make_rational_map(std::array<HomogPoly, 3> f, bool reduce = false) {
    int d = -1;
    bool any = false;
    for (const auto& p : f) {
        if (p.is_zero()) continue;
        require(d < 0 || p.degree() == d, errc::invalid_input,
                "map components must share a degree");
        d = p.degree();
        any = true;
    }
    require(any, errc::invalid_input, "map components all vanish");
    require(d >= 1, errc::invalid_input, "map degree must be at least 1");
    for (auto& p : f)
        if (p.is_zero()) p.set_degree(d);
    if (reduce) {
        HomogPoly g;
        bool first = true;
        for (const auto& p : f) {
            if (p.is_zero()) continue;
            g = first ? p : poly_gcd(g, p);
            first = false;
        }
        if (g.degree() > 0) {
            for (auto& p : f) {
                HomogPoly q;
                require(poly_div_exact(p, g, q), errc::internal_invariant_violation,
                        "gcd fails to divide a map component");
                p = q;
            }
        }
    }
    // common content across the triple
    Int l = 1, g = 0;
    for (const auto& p : f)
        for (const auto& [m, c] : p.terms()) l = l / int_gcd(l, rat_den(c)) * rat_den(c);
    for (const auto& p : f)
        for (const auto& [m, c] : p.terms()) g = int_gcd(g, rat_num(c) * (l / rat_den(c)));
    Rat s(g, l);
    for (const auto& p : f) {
        if (p.is_zero()) continue;
        if (p.leading_coeff() < 0) s = -s;
        break;
    }
    RationalMap out;
    for (int i = 0; i < 3; ++i) out.f[i] = f[i] * (1 / s);
    return out;
}

inline RationalMap identity_map() {
    return RationalMap{{HomogPoly::var(0), HomogPoly::var(1), HomogPoly::var(2)}};
}

inline RationalMap sigma_map() {
    auto x = HomogPoly::var(0), y = HomogPoly::var(1), z = HomogPoly::var(2);
    return RationalMap{{y * z, x * z, x * y}};
}

inline bool maps_equal(const RationalMap& a, const RationalMap& b) {
    return a.f[0] == b.f[0] && a.f[1] == b.f[1] && a.f[2] == b.f[2];
}

inline nlohmann::ordered_json map_to_json(const RationalMap& m) {
    return nlohmann::ordered_json{
        {"degree", m.degree()},
        {"polys", {poly_str(m.f[0]), poly_str(m.f[1]), poly_str(m.f[2])}}};
}

inline RationalMap map_from_json(const nlohmann::json& j) {
    std::array<HomogPoly, 3> f;
    const auto& polys = j.at("polys");
    require(polys.is_array() && polys.size() == 3, errc::invalid_input,
            "map JSON needs three polynomials");
    for (int i = 0; i < 3; ++i) f[i] = parse_poly(polys[i].get<std::string>());
    auto m = make_rational_map(f);
    if (j.contains("degree"))
        require(j["degree"].get<int>() == m.degree(), errc::invalid_input,
                "declared degree does not match the polynomials");
    return m;
}

// --- composition ------------------------------------------------------------

/// g after f, with the common factor of the three substituted forms removed.
inline RationalMap compose(const RationalMap& g, const RationalMap& f) {
    std::array<HomogPoly, 3> comps;
    bool all_zero = true;
    for (int i = 0; i < 3; ++i) {
        comps[i] = g.f[i].substitute(f.f);
        all_zero = all_zero && comps[i].is_zero();
    }
    require(!all_zero, errc::degenerate_composition, "composition vanishes identically");
    HomogPoly d;
    bool first = true;
    for (const auto& p : comps) {
        if (p.is_zero()) continue;
        d = first ? p : poly_gcd(d, p);
        first = false;
    }
    if (d.degree() > 0)
        for (auto& p : comps) {
            HomogPoly q;
            require(poly_div_exact(p, d, q), errc::internal_invariant_violation,
                    "gcd fails to divide a composition component");
            p = q;
        }
    require(comps[0].degree() >= 1, errc::degenerate_composition,
            "composition collapses to a point");
    return make_rational_map(comps);
}

// --- quadratic maps ---------------------------------------------------------

/// The standard involution conjugated to have base points p1, p2, p3.
inline RationalMap quadratic_from_points(const Vec3& p1, const Vec3& p2, const Vec3& p3) {
    Mat3 M = Mat3::from_columns(normalize_point(p1), normalize_point(p2), normalize_point(p3));
    require(M.det() != 0, errc::special_position,
            "quadratic centers must be distinct and non-collinear");
    Mat3 Minv = M.inverse();
    std::array<HomogPoly, 3> w;
    for (int r = 0; r < 3; ++r) {
        HomogPoly lin(1);
        for (int c = 0; c < 3; ++c)
            if (Minv.at(r, c) != 0) lin.add_term(Mono{c == 0, c == 1, c == 2}, Minv.at(r, c));
        lin.set_degree(1);
        w[r] = lin;
    }
    std::array<HomogPoly, 3> s{w[1] * w[2], w[0] * w[2], w[0] * w[1]};
    std::array<HomogPoly, 3> q;
    for (int i = 0; i < 3; ++i) {
        HomogPoly acc = HomogPoly::zero(2);
        for (int j = 0; j < 3; ++j)
            if (M.at(i, j) != 0) acc = acc + s[j] * M.at(i, j);
        q[i] = acc;
    }
    return make_rational_map(q);
}

// --- linearity test ---------------------------------------------------------

inline std::optional<Mat3> is_projective_linear(const RationalMap& m) {
    if (m.degree() != 1) return std::nullopt;
    Mat3 A;
    for (int i = 0; i < 3; ++i)
        for (const auto& [mono, c] : m.f[i].terms())
            A.at(i, mono.i ? 0 : (mono.j ? 1 : 2)) = c;
    return A;
}

// --- base points ------------------------------------------------------------

struct BasePoint {
    Vec3 point;
    Int mult;
};

namespace detail {

/// Specializes a Z[y][x] polynomial at y = p/q, scaled by q^deg_y to stay
/// integral.
inline IntPoly bp_specialize_y(const BiPoly& b, const Int& p, const Int& q) {
    int D = b.deg_y();
    IntPoly r;
    r.c.reserve(b.cx.size());
    for (const auto& c : b.cx)
        r.c.push_back(c.is_zero()
                          ? Int(0)
                          : ip_eval_scaled(c, p, q) *
                                int_pow(q, static_cast<unsigned long>(D - c.deg())));
    r.trim();
    return r;
}

inline bool sort_points(const BasePoint& a, const BasePoint& b) {
    if (a.mult != b.mult) return a.mult > b.mult;
    for (int i = 0; i < 3; ++i)
        if (a.point[i] != b.point[i]) return a.point[i] < b.point[i];
    return false;
}

} // namespace detail

/// Rational proper base points with multiplicities, by resultant elimination
/// after a deterministic exact change of coordinates. The homaloidal
/// identities act as the completeness gate: any shortfall signals infinitely
/// near or irrational base points.
inline std::vector<BasePoint> base_points(const RationalMap& m) {
    int n = m.degree();
    if (n == 1) return {};
    std::mt19937_64 rng(0x9E3779B97F4A7C15ull);
    bool saw_irrational = false;
    for (int attempt = 0; attempt < 8; ++attempt) {
        // coordinate change (identity first, then random unimodular-ish)
        Mat3 M = Mat3::identity();
        if (attempt > 0) {
            do {
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        M.at(i, j) = Rat(Int(rng() % 7) - 3);
            } while (M.det() == 0);
        }
        std::array<HomogPoly, 3> g;
        for (int i = 0; i < 3; ++i) g[i] = linear_change(m.f[i], M);

        // three pairwise-generic members of the net
        long t = 1 + static_cast<long>(attempt);
        std::array<HomogPoly, 3> h{
            g[0] + g[1] * Rat(t) + g[2] * Rat(t * t + 1),
            g[1] + g[2] * Rat(t + 1) + g[0] * Rat(2 * t + 1),
            g[2] + g[0] * Rat(t + 2) + g[1] * Rat(3 * t + 2)};
        bool ok = true;
        for (const auto& p : h)
            ok = ok && !p.is_zero() && p.terms().count(Mono{n, 0, 0}) && z_order(p) == 0;
        if (!ok) continue;

        IntPoly R12 = bp_resultant_x(dehomogenize(h[0]), dehomogenize(h[1]));
        IntPoly R13 = bp_resultant_x(dehomogenize(h[0]), dehomogenize(h[2]));
        if (R12.is_zero() || R13.is_zero()) continue;
        IntPoly G = ip_gcd(R12, R13);

        std::vector<Rat> ys = ip_rational_roots(G);
        IntPoly Gsq = ip_squarefree_part(G);
        bool leftover = Gsq.deg() > static_cast<int>(ys.size());

        std::vector<BasePoint> found;
        BiPoly H1 = dehomogenize(h[0]), H2 = dehomogenize(h[1]);
        for (const Rat& ystar : ys) {
            IntPoly u1 = detail::bp_specialize_y(H1, rat_num(ystar), rat_den(ystar));
            IntPoly u2 = detail::bp_specialize_y(H2, rat_num(ystar), rat_den(ystar));
            if (u1.is_zero() || u2.is_zero()) continue;
            IntPoly gc = ip_gcd(u1, u2);
            for (const Rat& xstar : ip_rational_roots(gc)) {
                Vec3 pt{xstar, ystar, Rat(1)};
                bool vanish = true;
                for (const auto& gi : g) vanish = vanish && gi.eval(pt) == 0;
                if (!vanish) continue;
                bool dup = false;
                for (const auto& bp : found) dup = dup || same_point(bp.point, pt);
                if (dup) continue;
                int mu = multiplicity_at(g[0], pt);
                mu = std::min(mu, multiplicity_at(g[1], pt));
                mu = std::min(mu, multiplicity_at(g[2], pt));
                found.push_back(BasePoint{normalize_point(M.apply(pt)), Int(mu)});
            }
        }
        Int s1 = 0, s2 = 0;
        for (const auto& bp : found) {
            s1 += bp.mult;
            s2 += bp.mult * bp.mult;
        }
        if (s1 == 3 * Int(n) - 3 && s2 == Int(n) * n - 1) {
            std::sort(found.begin(), found.end(), detail::sort_points);
            return found;
        }
        if (leftover) saw_irrational = true;
    }
    if (saw_irrational)
        fail(errc::non_rational_base_point,
             "elimination leaves an irreducible factor of degree above one");
    fail(errc::infinitely_near_or_irrational,
         "recovered multiplicities violate the degree identities: the map has "
         "infinitely near or irrational base points");
    return {}; // unreachable
}

inline HomaloidalType homaloidal_type_of(const RationalMap& m) {
    HomaloidalType t;
    t.n = m.degree();
    auto pts = base_points(m);
    for (size_t i = 0; i < pts.size(); ++i) {
        ClusterPoint p;
        p.id = "p" + std::to_string(i + 1);
        p.mult = pts[i].mult;
        t.cluster.points.push_back(p);
    }
    require(validate_homaloidal(t), errc::internal_invariant_violation,
            "extracted type fails the homaloidal identities");
    return t;
}

// --- composition with predicted line factors --------------------------------

namespace detail {

inline HomogPoly line_through(const Vec3& p, const Vec3& q) {
    Vec3 c{p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2],
           p[0] * q[1] - p[1] * q[0]};
    HomogPoly l(1);
    for (int i = 0; i < 3; ++i)
        if (c[i] != 0) l.add_term(Mono{i == 0, i == 1, i == 2}, c[i]);
    require(!l.is_zero(), errc::special_position, "coincident points define no line");
    l.set_degree(1);
    return l;
}

/// m composed with the quadratic based at the three given points, dividing
/// out the predicted line factors instead of a general gcd. Returns nullopt
/// when the division fails (non-generic configuration).
inline std::optional<RationalMap> compose_with_quadratic(
    const RationalMap& m, const RationalMap& q, const std::array<Vec3, 3>& centers,
    const std::array<Int, 3>& mults, int expected_degree) {
    HomogPoly L = HomogPoly::constant(Rat(1));
    for (int i = 0; i < 3; ++i) {
        if (mults[i] == 0) continue;
        HomogPoly l = line_through(centers[(i + 1) % 3], centers[(i + 2) % 3]);
        L = L * l.pow(static_cast<int>(mults[i].convert_to<long>()));
    }
    std::array<HomogPoly, 3> comps;
    for (int i = 0; i < 3; ++i) {
        HomogPoly c = m.f[i].substitute(q.f);
        if (L.degree() > 0) {
            HomogPoly out;
            if (!poly_div_exact(c, L, out)) return std::nullopt;
            c = out;
        }
        comps[i] = c;
    }
    if (comps[0].degree() != expected_degree) return std::nullopt;
    return make_rational_map(comps);
}

} // namespace detail

// --- greedy quadratic factorization -----------------------------------------

inline std::vector<RationalMap> factor_by_quadratics(const RationalMap& m_in) {
    std::vector<RationalMap> factors;
    if (m_in.degree() == 1) return factors;
    RationalMap m = m_in;
    std::vector<BasePoint> bps = base_points(m); // sorted by multiplicity
    while (m.degree() > 1) {
        Int n = m.degree();
        require(bps.size() >= 3, errc::special_position,
                "fewer than three proper base points to untwist at");
        std::array<Vec3, 3> c{bps[0].point, bps[1].point, bps[2].point};
        std::array<Int, 3> nu{bps[0].mult, bps[1].mult, bps[2].mult};
        require(triple_det(c[0], c[1], c[2]) != 0, errc::special_position,
                "three maximal base points are collinear");
        Int nprime = 2 * n - nu[0] - nu[1] - nu[2];
        require(nprime < n, errc::internal_invariant_violation,
                "quadratic untwisting does not drop the degree"); // Noether
        RationalMap Q = quadratic_from_points(c[0], c[1], c[2]);
        auto next = detail::compose_with_quadratic(
            m, Q, c, nu, static_cast<int>(nprime.convert_to<long>()));
        require(next.has_value(), errc::special_position,
                "untwisting quadratic meets a non-generic configuration");
        // transport the tracked base points through the involution
        std::vector<BasePoint> moved;
        for (int i = 0; i < 3; ++i) {
            Int mu = n - nu[(i + 1) % 3] - nu[(i + 2) % 3];
            require(mu >= 0, errc::special_position,
                    "negative predicted multiplicity: degenerate position");
            if (mu > 0) moved.push_back(BasePoint{c[i], mu});
        }
        for (size_t i = 3; i < bps.size(); ++i) {
            Vec3 img = Q.apply(bps[i].point);
            require(!vec_is_zero(img), errc::special_position,
                    "base point rides a contracted line");
            moved.push_back(BasePoint{normalize_point(img), bps[i].mult});
        }
        for (size_t i = 0; i < moved.size(); ++i)
            for (size_t j = i + 1; j < moved.size(); ++j)
                require(!same_point(moved[i].point, moved[j].point),
                        errc::special_position, "transported base points collide");
        for (const auto& bp : moved)
            for (const auto& f : next->f)
                require(f.eval(bp.point) == 0, errc::special_position,
                        "transported base point misses the composed map");
        m = *next;
        std::sort(moved.begin(), moved.end(), detail::sort_points);
        bps = std::move(moved);
        factors.push_back(Q);
    }
    return factors;
}

// --- corpus -----------------------------------------------------------------

inline std::vector<std::pair<RationalMap, HomaloidalType>> random_corpus(
    unsigned long long seed, int k, int height) {
    require(k >= 0, errc::invalid_input, "k must be nonnegative");
    require(height >= 1, errc::invalid_input, "height must be positive");
    std::mt19937_64 rng(seed);
    auto rnd_coord = [&]() { return Rat(Int(rng() % (2 * height + 1)) - height); };

    std::vector<std::pair<RationalMap, HomaloidalType>> out;
    RationalMap m = identity_map();
    HomaloidalType t;
    t.n = 1;
    std::map<PointId, Vec3> coords;
    int next_id = 1;
    out.emplace_back(m, t);

    for (int step = 0; step < k; ++step) {
        bool done = false;
        for (int attempt = 0; attempt < 400 && !done; ++attempt) {
            // pick three centers: above the degree cap always untwist the
            // three largest, otherwise mix existing and fresh points
            std::vector<PointId> roots;
            for (const auto& p : t.cluster.points) roots.push_back(p.id);
            std::array<PointId, 3> ids;
            std::array<Vec3, 3> pos;
            std::array<Int, 3> nu{Int(0), Int(0), Int(0)};
            HomaloidalType twork = t;
            bool bad = false;
            std::set<PointId> used;
            bool untwist = t.n >= 8 && roots.size() >= 3;
            if (untwist) {
                std::vector<const ClusterPoint*> sorted;
                for (const auto& p : t.cluster.points) sorted.push_back(&p);
                std::stable_sort(sorted.begin(), sorted.end(),
                                 [](auto* a, auto* b) { return a->mult > b->mult; });
                for (int i = 0; i < 3; ++i) ids[i] = sorted[i]->id;
            } else {
                for (int i = 0; i < 3; ++i) {
                    bool existing = !roots.empty() && rng() % 2 == 0;
                    if (existing) {
                        PointId cand = roots[rng() % roots.size()];
                        if (used.count(cand)) {
                            bad = true;
                            break;
                        }
                        ids[i] = cand;
                    } else {
                        // fresh point, registered with multiplicity zero
                        Vec3 p{rnd_coord(), rnd_coord(), rnd_coord()};
                        if (vec_is_zero(p)) {
                            bad = true;
                            break;
                        }
                        p = normalize_point(p);
                        for (const auto& [id, q] : coords)
                            if (same_point(p, q)) bad = true;
                        if (bad) break;
                        ClusterPoint cp;
                        cp.id = "p" + std::to_string(next_id++);
                        cp.mult = 0;
                        twork.cluster.points.push_back(cp);
                        coords[cp.id] = p;
                        ids[i] = cp.id;
                    }
                    used.insert(ids[i]);
                }
            }
            if (!bad) {
                for (int i = 0; i < 3; ++i) {
                    pos[i] = coords.at(ids[i]);
                    const ClusterPoint* p = twork.cluster.find(ids[i]);
                    nu[i] = p->mult;
                }
                bad = triple_det(pos[0], pos[1], pos[2]) == 0;
            }
            HomaloidalType tnext;
            if (!bad) {
                try {
                    tnext = compose_quadratic(
                        twork, std::array<std::optional<PointId>, 3>{
                                   ids[0], ids[1], ids[2]});
                } catch (const error&) {
                    bad = true;
                }
            }
            std::optional<RationalMap> mnext;
            if (!bad) {
                RationalMap Q = quadratic_from_points(pos[0], pos[1], pos[2]);
                mnext = detail::compose_with_quadratic(
                    m, Q, pos, nu, static_cast<int>(tnext.n.convert_to<long>()));
                bad = !mnext.has_value();
                if (!bad) {
                    // transport coordinates and check the configuration stays
                    // simple
                    std::map<PointId, Vec3> moved;
                    for (const auto& p : tnext.cluster.points) {
                        bool is_center = false;
                        for (const auto& id : ids) is_center = is_center || id == p.id;
                        Vec3 img = is_center ? coords.at(p.id) : Q.apply(coords.at(p.id));
                        if (vec_is_zero(img)) {
                            bad = true;
                            break;
                        }
                        moved[p.id] = normalize_point(img);
                    }
                    if (!bad)
                        for (auto i = moved.begin(); i != moved.end() && !bad; ++i)
                            for (auto j = std::next(i); j != moved.end() && !bad; ++j)
                                bad = same_point(i->second, j->second);
                    if (!bad)
                        for (const auto& [id, p] : moved)
                            for (const auto& f : mnext->f)
                                if (f.eval(p) != 0) bad = true;
                    if (!bad) {
                        m = *mnext;
                        t = tnext;
                        coords = std::move(moved);
                        done = true;
                    }
                }
            }
            if (!done) {
                // roll the registered fresh points back
                for (auto it = coords.begin(); it != coords.end();)
                    it = t.cluster.find(it->first) ? std::next(it) : coords.erase(it);
            }
        }
        require(done, errc::corpus_generation_failed,
                "retry budget exhausted during corpus generation");
        out.emplace_back(m, t);
    }
    return out;
}

} // namespace cremona
