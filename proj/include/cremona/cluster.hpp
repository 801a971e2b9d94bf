#pragma once

// Combinatorial clusters of base points: parent/proximity forest with
// multiplicities. Discrepancies, total multiplicities, lambda/e and the
// canonical threshold are all computed from incidence alone; no coordinates
// appear at this layer.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cremona/rational.hpp"

namespace cremona {

using PointId = std::string;

struct ClusterPoint {
    PointId id;
    std::optional<PointId> parent; // absent: proper (root) point
    std::set<PointId> prox;        // ids this point is proximate to; includes parent
    Int mult = 0;                  // nu >= 0
};

struct Cluster {
    std::vector<ClusterPoint> points; // topological order: parents first

    bool empty() const { return points.empty(); }

    const ClusterPoint* find(const PointId& id) const {
        for (const auto& p : points)
            if (p.id == id) return &p;
        return nullptr;
    }

    ClusterPoint* find(const PointId& id) {
        for (auto& p : points)
            if (p.id == id) return &p;
        return nullptr;
    }

    bool is_root(const PointId& id) const {
        const ClusterPoint* p = find(id);
        return p && !p->parent;
    }

    bool has_children(const PointId& id) const {
        for (const auto& p : points)
            if ((p.parent && *p.parent == id) || p.prox.count(id)) return true;
        return false;
    }

    Int sum_mult() const {
        Int s = 0;
        for (const auto& p : points) s += p.mult;
        return s;
    }

    Int sum_mult_sq() const {
        Int s = 0;
        for (const auto& p : points) s += p.mult * p.mult;
        return s;
    }

    /// Drops points of multiplicity zero that nothing else depends on.
    void prune_zeros() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = points.size(); i-- > 0;) {
                if (points[i].mult != 0) continue;
                if (has_children(points[i].id)) continue;
                points.erase(points.begin() + i);
                changed = true;
            }
        }
    }
};

/// Structural validation: topological order, proximity only to ancestors,
/// parent contained in prox, nonnegative multiplicities, and the proximity
/// inequality nu_j >= sum of nu over points proximate to j.
inline void validate_cluster(const Cluster& c) {
    std::map<PointId, size_t> index;
    for (size_t i = 0; i < c.points.size(); ++i) {
        const auto& p = c.points[i];
        if (index.count(p.id)) fail(errc::invalid_cluster, "duplicate point id " + p.id);
        index[p.id] = i;
        if (p.mult < 0) fail(errc::invalid_cluster, "negative multiplicity at " + p.id);
        if (p.parent) {
            auto it = index.find(*p.parent);
            if (it == index.end() || it->second >= i)
                fail(errc::invalid_cluster, "parent of " + p.id + " not earlier in the list");
            if (!p.prox.count(*p.parent))
                fail(errc::invalid_cluster, "prox of " + p.id + " must contain its parent");
        } else if (!p.prox.empty()) {
            fail(errc::invalid_cluster, "root point " + p.id + " with proximities");
        }
        for (const auto& q : p.prox) {
            auto it = index.find(q);
            if (it == index.end() || it->second >= i)
                fail(errc::invalid_cluster, "proximity of " + p.id + " to non-ancestor " + q);
        }
        // proximate_to must lie on the ancestor chain
        if (p.parent) {
            std::set<PointId> ancestors;
            const ClusterPoint* cur = &p;
            while (cur->parent) {
                ancestors.insert(*cur->parent);
                cur = c.find(*cur->parent);
                if (!cur) fail(errc::invalid_cluster, "broken parent chain at " + p.id);
            }
            for (const auto& q : p.prox)
                if (!ancestors.count(q))
                    fail(errc::invalid_cluster,
                         "point " + p.id + " proximate to non-ancestor " + q);
        }
    }
    // proximity inequality
    for (const auto& j : c.points) {
        Int s = 0;
        for (const auto& k : c.points)
            if (k.prox.count(j.id)) s += k.mult;
        if (j.mult < s)
            fail(errc::invalid_cluster, "proximity inequality fails at " + j.id);
    }
}

/// Discrepancies a_k = 1 + sum of a_j over the points k is proximate to.
inline std::vector<Int> discrepancies(const Cluster& c) {
    validate_cluster(c);
    std::map<PointId, Int> a;
    std::vector<Int> out;
    out.reserve(c.points.size());
    for (const auto& p : c.points) {
        Int v = 1;
        for (const auto& q : p.prox) v += a.at(q);
        a[p.id] = v;
        out.push_back(v);
    }
    return out;
}

/// Total multiplicities b_k = nu_k + sum of b_j over the points k is
/// proximate to.
inline std::vector<Int> total_multiplicities(const Cluster& c) {
    validate_cluster(c);
    std::map<PointId, Int> b;
    std::vector<Int> out;
    out.reserve(c.points.size());
    for (const auto& p : c.points) {
        Int v = p.mult;
        for (const auto& q : p.prox) v += b.at(q);
        b[p.id] = v;
        out.push_back(v);
    }
    return out;
}

/// lambda = max b_k / a_k (0 for the empty cluster) and the count e of
/// indices attaining it (0 when lambda = 0).
inline std::pair<Rat, Int> lambda_e(const Cluster& c) {
    if (c.empty()) return {Rat(0), Int(0)};
    auto a = discrepancies(c);
    auto b = total_multiplicities(c);
    Rat lam = 0;
    for (size_t i = 0; i < a.size(); ++i) lam = std::max(lam, Rat(b[i], a[i]));
    Int e = 0;
    if (lam > 0)
        for (size_t i = 0; i < a.size(); ++i)
            if (Rat(b[i], a[i]) == lam) ++e;
    return {lam, e};
}

/// min a_k / b_k over points with b_k > 0; nullopt is the +infinity
/// sentinel (empty cluster or all b zero).
inline std::optional<Rat> canonical_threshold(const Cluster& c) {
    if (c.empty()) return std::nullopt;
    auto a = discrepancies(c);
    auto b = total_multiplicities(c);
    std::optional<Rat> best;
    for (size_t i = 0; i < a.size(); ++i) {
        if (b[i] <= 0) continue;
        Rat v(a[i], b[i]);
        if (!best || v < *best) best = v;
    }
    return best;
}

// --- JSON ------------------------------------------------------------------

inline nlohmann::ordered_json cluster_to_json(const Cluster& c) {
    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    for (const auto& p : c.points) {
        nlohmann::ordered_json jp;
        jp["id"] = p.id;
        jp["parent"] = p.parent ? nlohmann::ordered_json(*p.parent) : nlohmann::ordered_json(nullptr);
        jp["prox"] = p.prox;
        jp["mult"] = p.mult.convert_to<long long>();
        pts.push_back(jp);
    }
    return nlohmann::ordered_json{{"points", pts}};
}

inline Cluster cluster_from_json(const nlohmann::json& j) {
    Cluster c;
    if (!j.contains("points") || !j["points"].is_array())
        fail(errc::invalid_input, "cluster JSON needs a points array");
    for (const auto& jp : j["points"]) {
        ClusterPoint p;
        p.id = jp.at("id").get<std::string>();
        if (jp.contains("parent") && !jp["parent"].is_null())
            p.parent = jp["parent"].get<std::string>();
        if (jp.contains("prox"))
            for (const auto& q : jp["prox"]) p.prox.insert(q.get<std::string>());
        p.mult = Int(jp.at("mult").get<long long>());
        c.points.push_back(std::move(p));
    }
    validate_cluster(c);
    return c;
}

} // namespace cremona
