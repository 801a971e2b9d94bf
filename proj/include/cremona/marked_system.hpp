#pragma once

// The engine's mutable state: a surface (P2 or a Hirzebruch surface F_N), a
// marked linear system H ~ -a K_F + b f, and a positioned cluster of base
// points. Also the Noether classifier, homaloidal validation, the degree
// triple (mu, lambda, e), and the threefold inequality checker.

#include <algorithm>
#include <optional>
#include <sstream>
#include <variant>

#include "cremona/cluster.hpp"

namespace cremona {

// --- Surface ---------------------------------------------------------------

enum class Ruling { A, B }; // the two rulings of F_0; which one carries "f"

struct Surface {
    bool is_p2 = true;
    int N = 0;              // Hirzebruch index, meaningful when !is_p2
    Ruling ruling = Ruling::A; // meaningful only when !is_p2 and N == 0

    static Surface P2() { return Surface{}; }
    static Surface FN(int n, Ruling r = Ruling::A) {
        require(n >= 0, errc::invalid_state, "Hirzebruch index must be nonnegative");
        Surface s;
        s.is_p2 = false;
        s.N = n;
        s.ruling = n == 0 ? r : Ruling::A;
        return s;
    }

    bool operator==(const Surface& o) const {
        if (is_p2 != o.is_p2) return false;
        if (is_p2) return true;
        if (N != o.N) return false;
        return N != 0 || ruling == o.ruling;
    }

    std::string str() const {
        if (is_p2) return "P2";
        std::string s = "F" + std::to_string(N);
        if (N == 0) s += ruling == Ruling::A ? "a" : "b";
        return s;
    }
};

// --- Positioned points ------------------------------------------------------

// Incidence flags for a root point on a Hirzebruch surface. On F_0 the flags
// are kept for both rulings (co_* is the other ruling) so that the ruling
// swap is an involution; on F_N with N > 0 and on P2 the co_* fields are
// ignored.
struct PointFlags {
    bool on_negative_section = false;
    std::optional<PointId> on_fiber_of; // shares a fiber with that root point
    bool co_on_negative_section = false;
    std::optional<PointId> co_on_fiber_of;

    PointFlags swapped() const {
        return PointFlags{co_on_negative_section, co_on_fiber_of,
                          on_negative_section, on_fiber_of};
    }
};

// --- Homaloidal types -------------------------------------------------------

struct HomaloidalType {
    Int n = 1;
    Cluster cluster;
};

inline bool validate_homaloidal(const HomaloidalType& t) {
    if (t.n < 1) return false;
    try {
        validate_cluster(t.cluster);
    } catch (const error&) {
        return false;
    }
    return t.cluster.sum_mult_sq() == t.n * t.n - 1 &&
           t.cluster.sum_mult() == 3 * t.n - 3;
}

/// Text form "n; v1,v2[>1],v3,..."; the optional ">k" marks the point as
/// infinitely near (and proximate) to the k-th point, 1-based.
inline std::string homaloidal_str(const HomaloidalType& t) {
    std::ostringstream os;
    os << t.n << ";";
    if (!t.cluster.points.empty()) os << " ";
    std::map<PointId, size_t> idx;
    for (size_t i = 0; i < t.cluster.points.size(); ++i) {
        const auto& p = t.cluster.points[i];
        idx[p.id] = i + 1;
        if (i) os << ",";
        os << p.mult;
        if (p.parent) os << "[>" << idx.at(*p.parent) << "]";
    }
    return os.str();
}

inline HomaloidalType parse_homaloidal(const std::string& text) {
    auto semi = text.find(';');
    require(semi != std::string::npos, errc::invalid_input,
            "homaloidal type must look like \"n; v1,v2,...\"");
    HomaloidalType t;
    try {
        t.n = Int(text.substr(0, semi));
    } catch (...) {
        fail(errc::invalid_input, "bad degree in homaloidal type");
    }
    std::string rest = text.substr(semi + 1);
    std::string tok;
    std::vector<std::string> toks;
    for (char ch : rest) {
        if (ch == ',') {
            toks.push_back(tok);
            tok.clear();
        } else if (!isspace(static_cast<unsigned char>(ch))) {
            tok += ch;
        }
    }
    if (!tok.empty()) toks.push_back(tok);
    for (size_t i = 0; i < toks.size(); ++i) {
        ClusterPoint p;
        p.id = "p" + std::to_string(i + 1);
        std::string s = toks[i];
        auto br = s.find('[');
        if (br != std::string::npos) {
            require(s.size() >= br + 4 && s[br + 1] == '>' && s.back() == ']',
                    errc::invalid_input, "bad proximity suffix in " + s);
            size_t parent = 0;
            try {
                parent = std::stoul(s.substr(br + 2, s.size() - br - 3));
            } catch (...) {
                fail(errc::invalid_input, "bad parent index in " + s);
            }
            require(parent >= 1 && parent <= i, errc::invalid_input,
                    "parent index out of range in " + s);
            p.parent = "p" + std::to_string(parent);
            p.prox = {*p.parent};
            s = s.substr(0, br);
        }
        try {
            p.mult = Int(s);
        } catch (...) {
            fail(errc::invalid_input, "bad multiplicity " + s);
        }
        t.cluster.points.push_back(std::move(p));
    }
    validate_cluster(t.cluster);
    return t;
}

inline nlohmann::ordered_json homaloidal_to_json(const HomaloidalType& t) {
    return nlohmann::ordered_json{{"n", t.n.convert_to<long long>()},
                                  {"cluster", cluster_to_json(t.cluster)}};
}

inline HomaloidalType homaloidal_from_json(const nlohmann::json& j) {
    HomaloidalType t;
    t.n = Int(j.at("n").get<long long>());
    t.cluster = cluster_from_json(j.at("cluster"));
    return t;
}

// --- MarkedSystem -----------------------------------------------------------

struct MarkedSystem {
    Surface surface;
    Rat a = Rat(1, 3);
    Rat b = 0;
    Cluster cluster;
    std::map<PointId, PointFlags> flags; // only root points carry entries

    const PointFlags& flags_of(const PointId& id) const {
        static const PointFlags none{};
        auto it = flags.find(id);
        return it == flags.end() ? none : it->second;
    }
};

/// Checks integrality, the self-intersection identity H^2 - sum(nu^2) = 1 and
/// the adjunction identity (-K_F).H - sum(nu) = 3.
inline void validate_marked(const MarkedSystem& ms) {
    validate_cluster(ms.cluster);
    require(ms.a > 0, errc::invalid_state, "coefficient a must be positive");
    Rat s1 = Rat(ms.cluster.sum_mult());
    Rat s2 = Rat(ms.cluster.sum_mult_sq());
    if (ms.surface.is_p2) {
        require(ms.b == 0, errc::invalid_state, "b must vanish on P2");
        Rat n = 3 * ms.a;
        require(is_integer(n) && n > 0, errc::invalid_state, "3a must be a positive integer on P2");
        require(9 * ms.a * ms.a - s2 == 1, errc::invalid_state,
                "self-intersection identity fails");
        require(9 * ms.a - s1 == 3, errc::invalid_state, "adjunction identity fails");
        for (const auto& [id, f] : ms.flags)
            require(!f.on_negative_section && !f.on_fiber_of, errc::invalid_state,
                    "position flags are meaningless on P2");
    } else {
        // {s, f} basis: -K = 2s + (N+2)f, so H = 2a s + ((N+2)a + b) f
        Rat alpha = 2 * ms.a;
        Rat beta = (ms.surface.N + 2) * ms.a + ms.b;
        require(is_integer(alpha) && alpha >= 0, errc::invalid_state,
                "2a must be a nonnegative integer on F_N");
        require(is_integer(beta) && beta >= 0, errc::invalid_state,
                "(N+2)a + b must be a nonnegative integer on F_N");
        require(8 * ms.a * ms.a + 4 * ms.a * ms.b - s2 == 1, errc::invalid_state,
                "self-intersection identity fails");
        require(8 * ms.a + 2 * ms.b - s1 == 3, errc::invalid_state,
                "adjunction identity fails");
        for (const auto& [id, f] : ms.flags)
            require(ms.cluster.find(id) != nullptr, errc::invalid_state,
                    "flag for unknown point " + id);
    }
}

inline MarkedSystem from_homaloidal(const HomaloidalType& t) {
    require(validate_homaloidal(t), errc::not_homaloidal,
            "type fails the homaloidal identities: " + homaloidal_str(t));
    MarkedSystem ms;
    ms.surface = Surface::P2();
    ms.a = Rat(t.n, 3);
    ms.b = 0;
    ms.cluster = t.cluster;
    validate_marked(ms);
    return ms;
}

inline bool noether_inequality(const HomaloidalType& t) {
    require(t.n > 1, errc::not_applicable, "Noether inequality needs n > 1");
    require(validate_homaloidal(t), errc::not_homaloidal, "invalid type");
    std::vector<Int> nu;
    for (const auto& p : t.cluster.points) nu.push_back(p.mult);
    std::sort(nu.rbegin(), nu.rend());
    Int top = 0;
    for (size_t i = 0; i < nu.size() && i < 3; ++i) top += nu[i];
    return top > t.n;
}

// --- Classification ---------------------------------------------------------

struct Isomorphism {};
struct MaxSingularity {
    PointId point;
};
struct NegativeFiberCoeff {};
using Classification = std::variant<Isomorphism, MaxSingularity, NegativeFiberCoeff>;

inline Classification classify(const MarkedSystem& ms) {
    validate_marked(ms);
    const ClusterPoint* best = nullptr;
    for (const auto& p : ms.cluster.points) {
        if (p.parent) continue; // only root points are link centers
        if (Rat(p.mult) <= ms.a) continue;
        if (!best || p.mult > best->mult) best = &p; // ties: keep input order
    }
    if (best) return MaxSingularity{best->id};
    if (!ms.surface.is_p2 && ms.b < 0) return NegativeFiberCoeff{};
    // nothing left to untwist: must be the identity state
    require(ms.surface.is_p2 && ms.a == Rat(1, 3) && ms.cluster.empty(),
            errc::invalid_state, "isomorphism state is not the standard one");
    return Isomorphism{};
}

// --- Sarkisov degree --------------------------------------------------------

struct SarkisovDegree {
    Rat mu;
    Rat lambda;
    Int e;

    bool operator==(const SarkisovDegree& o) const {
        return mu == o.mu && lambda == o.lambda && e == o.e;
    }
    bool operator<(const SarkisovDegree& o) const {
        if (mu != o.mu) return mu < o.mu;
        if (lambda != o.lambda) return lambda < o.lambda;
        return e < o.e;
    }
};

inline SarkisovDegree sarkisov_degree(const MarkedSystem& ms) {
    auto [lam, e] = lambda_e(ms.cluster);
    return SarkisovDegree{ms.a, lam, e};
}

inline bool noether_fano_certificate(const MarkedSystem& ms) {
    auto [lam, e] = lambda_e(ms.cluster);
    (void)e;
    return lam <= ms.a && (ms.surface.is_p2 || ms.b >= 0);
}

// --- Threefold inequality checker -------------------------------------------

struct Fano3Data {
    Int n = 1;     // degree of the mobile system
    Int r = 1;     // Fano index
    Int Hcube = 1; // H^3
    std::vector<std::pair<Int, Rat>> curve_data; // (degree, multiplicity)
    std::vector<Rat> point_data;                 // multiplicities
    std::vector<Rat> infnear_data; // multiplicities along infinitely near curves
};

struct Fano3Report {
    Rat curve_threshold;  // n/r
    Rat point_threshold;  // 2n/r
    Int curve_degree_bound; // r^2 H^3
    std::vector<bool> curve_open;   // mult > n/r and deg < r^2 H^3
    std::vector<bool> point_open;   // mult > 2n/r
    std::vector<bool> infnear_open; // mult > n/r; no degree bound available
    std::string infnear_note = "indeterminate bound";

    bool any_open() const {
        auto any = [](const std::vector<bool>& v) {
            return std::any_of(v.begin(), v.end(), [](bool x) { return x; });
        };
        return any(curve_open) || any(point_open) || any(infnear_open);
    }
};

inline Fano3Report fano3_classify(const Fano3Data& d) {
    require(d.n > 0 && d.r > 0 && d.Hcube > 0, errc::invalid_input,
            "n, r, H^3 must be positive");
    Fano3Report rep;
    rep.curve_threshold = Rat(d.n, d.r);
    rep.point_threshold = Rat(2 * d.n, d.r);
    rep.curve_degree_bound = d.r * d.r * d.Hcube;
    for (const auto& [deg, mult] : d.curve_data) {
        require(deg > 0, errc::invalid_input, "curve degree must be positive");
        rep.curve_open.push_back(mult > rep.curve_threshold && deg < rep.curve_degree_bound);
    }
    for (const auto& mult : d.point_data)
        rep.point_open.push_back(mult > rep.point_threshold);
    for (const auto& mult : d.infnear_data)
        rep.infnear_open.push_back(mult > rep.curve_threshold);
    return rep;
}

} // namespace cremona
