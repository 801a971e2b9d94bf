#pragma once

// The four elementary links as exact transitions on MarkedSystem, the
// factorization loop, the quadratic action on homaloidal types, and the
// trace round-trip machinery.
//
// Class updates used here (in the {-K_F, f} basis):
//   A     : P2 -> F1        a1 = (3a - nu)/2,  b1 = 3(nu - a)/2
//   A^-1  : F1 -> P2        a' = a + b/3,      b' = 0, new point of mult a+b
//   B     : F_N -> F_{N+-1} a' = a,            b' = b + a - nu,
//           new point of mult 2a - nu on the opposite side of the section
//   C     : F0 -> F0        (a, b) -> (a + b/2, -b), rulings swapped
// Each preserves H^2 - sum(nu^2) = 1 and (-K).H - sum(nu) = 3, which is
// re-checked after every application.

#include <sstream>

#include "cremona/marked_system.hpp"

namespace cremona {

enum class LinkKind { A, AInv, B, C };

inline const char* link_name(LinkKind k) {
    switch (k) {
        case LinkKind::A: return "A";
        case LinkKind::AInv: return "AInv";
        case LinkKind::B: return "B";
        case LinkKind::C: return "C";
    }
    return "?";
}

struct LinkStep {
    LinkKind kind;
    std::optional<PointId> center; // A and B (absent: fresh center)
    bool center_flag = false;      // B: the center's effective section flag
    Int center_mult = 0;           // multiplicity consumed by the link
    std::optional<PointId> created; // AInv and B (absent: nothing created)
    // zero-multiplicity fiber anchors swallowed by this link; the bool says
    // whether the center referenced the anchor (true) or conversely
    std::vector<std::pair<PointId, bool>> absorbed_phantoms;
    Surface surface_after;
    Rat a_after, b_after;
    SarkisovDegree degree_after;
};

struct LinkTrace {
    HomaloidalType input;
    std::vector<LinkStep> steps;
};

namespace detail {

inline bool has_dependents(const MarkedSystem& ms, const PointId& id) {
    for (const auto& p : ms.cluster.points)
        if ((p.parent && *p.parent == id) || p.prox.count(id)) return true;
    for (const auto& [pid, f] : ms.flags) {
        if (pid == id) continue;
        if (f.on_fiber_of == id || f.co_on_fiber_of == id) return true;
    }
    return false;
}

/// Drops zero-multiplicity points nothing refers to, together with their
/// flag entries.
inline void normalize(MarkedSystem& ms) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = ms.cluster.points.size(); i-- > 0;) {
            const auto& p = ms.cluster.points[i];
            if (p.mult != 0 || has_dependents(ms, p.id)) continue;
            ms.flags.erase(p.id);
            ms.cluster.points.erase(ms.cluster.points.begin() + i);
            changed = true;
        }
    }
    for (auto it = ms.flags.begin(); it != ms.flags.end();) {
        if (!ms.cluster.find(it->first))
            it = ms.flags.erase(it);
        else
            ++it;
    }
}

inline PointId fresh_id(const MarkedSystem& ms, const std::string& stem) {
    for (int k = 1;; ++k) {
        PointId id = stem + std::to_string(k);
        if (!ms.cluster.find(id)) return id;
    }
}

/// Detaches `center` from the cluster: children become roots, every
/// proximity to it disappears. Returns the indices-free list of former
/// first-order children.
inline std::vector<PointId> detach_center(MarkedSystem& ms, const PointId& center) {
    std::vector<PointId> children;
    for (auto& p : ms.cluster.points) {
        if (p.parent && *p.parent == center) {
            p.parent.reset();
            children.push_back(p.id);
        }
        p.prox.erase(center);
    }
    for (size_t i = 0; i < ms.cluster.points.size(); ++i)
        if (ms.cluster.points[i].id == center) {
            ms.cluster.points.erase(ms.cluster.points.begin() + i);
            break;
        }
    ms.flags.erase(center);
    return children;
}

} // namespace detail

// --- Link A: blow-up P2 -> F1 ----------------------------------------------

inline MarkedSystem apply_A(const MarkedSystem& ms, std::optional<PointId> center) {
    require(ms.surface.is_p2, errc::wrong_surface, "link A starts on P2");
    validate_marked(ms);
    Int nu = 0;
    MarkedSystem out = ms;
    std::vector<PointId> children;
    if (center) {
        const ClusterPoint* c = ms.cluster.find(*center);
        require(c && !c->parent, errc::not_proper_point,
                "link A center must be a proper base point");
        nu = c->mult;
        children = detail::detach_center(out, *center);
    }
    out.surface = Surface::FN(1);
    out.a = (3 * ms.a - nu) / 2;
    out.b = 3 * (Rat(nu) - ms.a) / 2;
    for (const auto& id : children) out.flags[id].on_negative_section = true;
    detail::normalize(out);
    validate_marked(out);
    return out;
}

// --- Link A^-1: contraction F1 -> P2 ---------------------------------------

inline MarkedSystem apply_AInv(const MarkedSystem& ms,
                               std::optional<PointId> created_id = std::nullopt,
                               std::optional<PointId>* created_out = nullptr) {
    require(!ms.surface.is_p2 && ms.surface.N == 1, errc::wrong_surface,
            "link A^-1 starts on F1");
    validate_marked(ms);
    Rat s = ms.a + ms.b;
    require(s >= 0 && is_integer(s), errc::invalid_contraction,
            "a + b must be a nonnegative integer to contract");
    MarkedSystem out = ms;
    out.surface = Surface::P2();
    out.a = ms.a + ms.b / 3;
    out.b = 0;
    std::vector<PointId> on_section;
    for (const auto& p : ms.cluster.points)
        if (!p.parent && ms.flags_of(p.id).on_negative_section)
            on_section.push_back(p.id);
    out.flags.clear();
    std::optional<PointId> q;
    if (s > 0) {
        q = created_id ? *created_id : detail::fresh_id(out, "q");
        ClusterPoint np;
        np.id = *q;
        np.mult = rat_num(s);
        // the contracted section's points become infinitely near the image
        out.cluster.points.insert(out.cluster.points.begin(), np);
        for (const auto& id : on_section) {
            ClusterPoint* p = out.cluster.find(id);
            p->parent = *q;
            p->prox.insert(*q);
        }
    } else {
        require(on_section.empty(), errc::invalid_contraction,
                "base points on the contracted section but nothing to attach them to");
    }
    if (created_out) *created_out = q;
    detail::normalize(out);
    // a proximity violation here means the contraction was geometrically
    // impossible, not that the caller handed us garbage
    try {
        validate_marked(out);
    } catch (const error&) {
        fail(errc::invalid_contraction, "contraction produces an inconsistent cluster");
    }
    return out;
}

// --- Link B: elementary transformation F_N -> F_{N+-1} ----------------------

inline MarkedSystem apply_B(const MarkedSystem& ms, std::optional<PointId> center,
                            bool fresh_on_negative_section = false,
                            std::optional<PointId> created_id = std::nullopt,
                            std::optional<PointId>* created_out = nullptr,
                            bool absorb_fiber_points = false,
                            std::vector<std::pair<PointId, bool>>* phantoms_out = nullptr) {
    require(!ms.surface.is_p2, errc::wrong_surface, "link B starts on a Hirzebruch surface");
    validate_marked(ms);
    int N = ms.surface.N;
    Int nu = 0;
    bool phi = fresh_on_negative_section;
    std::optional<PointId> fiber_peer; // root whose fiber carries the center
    if (center) {
        const ClusterPoint* c = ms.cluster.find(*center);
        require(c && !c->parent, errc::not_proper_point,
                "link B center must be a proper base point");
        nu = c->mult;
        phi = ms.flags_of(*center).on_negative_section;
        fiber_peer = ms.flags_of(*center).on_fiber_of;
    }
    if (N == 0) phi = true; // every fiber direction behaves like the section case
    require(Rat(nu) <= 2 * ms.a, errc::invalid_state,
            "center multiplicity exceeds 2a");

    // points sharing the center's fiber get contracted along with it
    std::vector<PointId> mates;
    for (const auto& p : ms.cluster.points) {
        if (center && p.id == *center) continue;
        if (!p.parent &&
            ((center && ms.flags_of(p.id).on_fiber_of == *center) ||
             (fiber_peer && p.id == *fiber_peer)))
            mates.push_back(p.id);
    }
    require(mates.empty() || absorb_fiber_points, errc::special_position,
            "another base point lies on the center's fiber");
    if (phantoms_out) {
        phantoms_out->clear();
        for (const auto& id : mates) {
            const ClusterPoint* m = ms.cluster.find(id);
            if (m->mult == 0 && !ms.cluster.has_children(id))
                phantoms_out->emplace_back(id, center && ms.flags_of(*center).on_fiber_of == id);
        }
    }

    MarkedSystem out = ms;
    std::vector<PointId> children;
    if (center) children = detail::detach_center(out, *center);
    int Nprime = phi ? N + 1 : N - 1;
    out.surface = Surface::FN(Nprime, ms.surface.ruling);
    out.a = ms.a;
    out.b = ms.b + ms.a - nu;

    Int qmult = rat_num(2 * ms.a) - nu; // 2a is an integer on F_N
    PointId qid = created_id ? *created_id : detail::fresh_id(out, "q");
    bool need_q = qmult > 0 || !children.empty() || !mates.empty();
    if (need_q) {
        ClusterPoint np;
        np.id = qid;
        np.mult = qmult;
        out.cluster.points.insert(out.cluster.points.begin(), np);
        out.flags[qid].on_negative_section = !phi && Nprime >= 1;
        for (const auto& id : children) {
            out.flags[id] = PointFlags{};
            out.flags[id].on_fiber_of = qid;
        }
        for (const auto& id : mates) { // fall onto the contracted fiber's image
            ClusterPoint* p = out.cluster.find(id);
            p->parent = qid;
            p->prox.insert(qid);
            out.flags.erase(id);
        }
    }

    // carry the remaining incidence flags onto the new surface
    std::set<PointId> just_assigned(children.begin(), children.end());
    for (auto& [pid, f] : out.flags) {
        if (pid == qid || just_assigned.count(pid)) continue;
        if (N == 0) {
            // fibers of the other ruling through the center become the new
            // negative section
            bool with_center = center && (f.co_on_fiber_of == *center ||
                                          ms.flags_of(*center).co_on_fiber_of == pid);
            f = PointFlags{};
            if (with_center) f.on_negative_section = true;
            // same-ruling fiber relations survive (handled below)
            f.on_fiber_of = ms.flags_of(pid).on_fiber_of;
        }
        if (f.on_fiber_of && center && *f.on_fiber_of == *center) f.on_fiber_of.reset();
        if (Nprime == 0 && f.on_negative_section) {
            // the old section is now a fiber of the other ruling through q
            f.on_negative_section = false;
            if (need_q) f.co_on_fiber_of = qid;
        }
        f.co_on_fiber_of = Nprime == 0 ? f.co_on_fiber_of : std::nullopt;
    }

    detail::normalize(out);
    if (created_out) *created_out = out.cluster.find(qid) ? std::optional<PointId>(qid) : std::nullopt;
    validate_marked(out);
    return out;
}

// --- Link C: ruling swap on F0 ---------------------------------------------

inline MarkedSystem apply_C(const MarkedSystem& ms) {
    require(!ms.surface.is_p2 && ms.surface.N == 0, errc::wrong_surface,
            "link C acts on F0");
    validate_marked(ms);
    MarkedSystem out = ms;
    out.surface.ruling = ms.surface.ruling == Ruling::A ? Ruling::B : Ruling::A;
    out.a = ms.a + ms.b / 2;
    out.b = -ms.b;
    require(out.a > 0, errc::invalid_state, "ruling swap drives a nonpositive");
    for (auto& [pid, f] : out.flags) f = f.swapped();
    validate_marked(out);
    return out;
}

// --- Factorization ----------------------------------------------------------

inline const ClusterPoint* max_singularity(const MarkedSystem& ms) {
    const ClusterPoint* best = nullptr;
    for (const auto& p : ms.cluster.points) {
        if (p.parent) continue;
        if (Rat(p.mult) <= ms.a) continue;
        if (!best || p.mult > best->mult) best = &p;
    }
    return best;
}

inline LinkTrace factorize(const HomaloidalType& t) {
    LinkTrace trace;
    trace.input = t;
    MarkedSystem ms = from_homaloidal(t);
    SarkisovDegree prev = sarkisov_degree(ms);
    for (int guard = 0;; ++guard) {
        require(guard < 100000, errc::internal_invariant_violation,
                "factorization does not terminate");
        LinkStep step;
        const ClusterPoint* sing = max_singularity(ms);
        if (sing) {
            step.center = sing->id;
            step.center_mult = sing->mult;
            if (ms.surface.is_p2) {
                step.kind = LinkKind::A;
                ms = apply_A(ms, sing->id);
            } else {
                step.kind = LinkKind::B;
                step.center_flag =
                    ms.surface.N == 0 || ms.flags_of(sing->id).on_negative_section;
                std::optional<PointId> created;
                // incidences tracked by the algorithm itself are exact, so
                // points riding on the contracted fiber are absorbed rather
                // than rejected
                ms = apply_B(ms, sing->id, false, std::nullopt, &created,
                             /*absorb_fiber_points=*/true, &step.absorbed_phantoms);
                step.created = created;
            }
        } else if (ms.surface.is_p2) {
            require(ms.a == Rat(1, 3) && ms.cluster.empty(),
                    errc::internal_invariant_violation,
                    "no maximal singularity on P2 but not the identity state");
            break;
        } else {
            require(ms.b < 0, errc::internal_invariant_violation,
                    "no maximal singularity on F_N but b >= 0");
            require(ms.surface.N <= 1, errc::internal_invariant_violation,
                    "untwisted state on F_N with N > 1");
            if (ms.surface.N == 1) {
                step.kind = LinkKind::AInv;
                std::optional<PointId> created;
                ms = apply_AInv(ms, std::nullopt, &created);
                step.created = created;
            } else {
                step.kind = LinkKind::C;
                ms = apply_C(ms);
            }
        }
        step.surface_after = ms.surface;
        step.a_after = ms.a;
        step.b_after = ms.b;
        step.degree_after = sarkisov_degree(ms);
        require(step.degree_after < prev, errc::internal_invariant_violation,
                "Sarkisov degree failed to decrease");
        prev = step.degree_after;
        trace.steps.push_back(std::move(step));
    }
    return trace;
}

// --- Quadratic composition on types ----------------------------------------

inline HomaloidalType compose_quadratic(const HomaloidalType& t,
                                        const std::array<std::optional<PointId>, 3>& centers) {
    require(validate_homaloidal(t), errc::not_homaloidal, "invalid input type");
    std::vector<Int> nu(3, Int(0));
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < i; ++j)
            require(!centers[i] || !centers[j] || *centers[i] != *centers[j],
                    errc::invalid_input, "repeated composition centers");
        if (!centers[i]) continue;
        const ClusterPoint* p = t.cluster.find(*centers[i]);
        require(p && !p->parent, errc::not_proper_point,
                "composition centers must be proper points");
        require(!t.cluster.has_children(p->id), errc::special_position,
                "composition center carries infinitely near points");
        nu[i] = p->mult;
    }
    Int nprime = 2 * t.n - nu[0] - nu[1] - nu[2];
    require(nprime >= 1, errc::invalid_composition, "composition drops below degree 1");
    HomaloidalType out;
    out.n = nprime;
    out.cluster = t.cluster;
    for (int i = 0; i < 3; ++i) {
        Int m = t.n - nu[(i + 1) % 3] - nu[(i + 2) % 3];
        require(m >= 0, errc::invalid_composition,
                "composition center multiplicities are not in general position");
        if (centers[i]) {
            out.cluster.find(*centers[i])->mult = m;
        } else if (m > 0) {
            ClusterPoint p;
            for (int k = 1;; ++k) {
                p.id = "c" + std::to_string(k);
                if (!out.cluster.find(p.id)) break;
            }
            p.mult = m;
            out.cluster.points.push_back(p);
        }
    }
    out.cluster.prune_zeros();
    require(validate_homaloidal(out), errc::internal_invariant_violation,
            "quadratic composition broke the homaloidal identities");
    return out;
}

// --- Round trip -------------------------------------------------------------

inline HomaloidalType recompose(const LinkTrace& trace) {
    MarkedSystem ms;
    ms.surface = Surface::P2();
    ms.a = Rat(1, 3);
    try {
        for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it) {
            const LinkStep& s = *it;
            switch (s.kind) {
                case LinkKind::A:
                    ms = apply_AInv(ms, s.center);
                    break;
                case LinkKind::AInv:
                    ms = apply_A(ms, s.created);
                    break;
                case LinkKind::B:
                    ms = apply_B(ms, s.created, !s.center_flag, s.center, nullptr,
                                 /*absorb_fiber_points=*/true);
                    // resurrect the fiber anchors the forward link swallowed;
                    // the inverse of the preceding B step needs them
                    for (const auto& [id, center_ref] : s.absorbed_phantoms) {
                        ClusterPoint np;
                        np.id = id;
                        np.mult = 0;
                        ms.cluster.points.push_back(np);
                        if (center_ref)
                            ms.flags[*s.center].on_fiber_of = id;
                        else
                            ms.flags[id].on_fiber_of = *s.center;
                    }
                    break;
                case LinkKind::C:
                    ms = apply_C(ms);
                    break;
            }
        }
        require(ms.surface.is_p2, errc::invalid_trace, "trace does not return to P2");
    } catch (const error& e) {
        if (e.code() == errc::invalid_trace) throw;
        fail(errc::invalid_trace, std::string("trace replay failed: ") + e.what());
    }
    HomaloidalType t;
    t.n = rat_num(3 * ms.a);
    t.cluster = ms.cluster;
    return t;
}

// --- Structural type equality ----------------------------------------------

namespace detail {

inline std::string point_signature(const Cluster& c, const ClusterPoint& p) {
    // ancestor distances of the proximity targets, so satellites differ from
    // plain chains
    std::vector<int> pd;
    for (const auto& q : p.prox) {
        int d = 0;
        const ClusterPoint* cur = &p;
        while (cur->parent && *cur->parent != q) {
            cur = c.find(*cur->parent);
            ++d;
        }
        pd.push_back(d + 1);
    }
    std::sort(pd.begin(), pd.end());
    std::vector<std::string> kids;
    for (const auto& k : c.points)
        if (k.parent && *k.parent == p.id) kids.push_back(point_signature(c, k));
    std::sort(kids.begin(), kids.end());
    std::ostringstream os;
    os << p.mult << "[";
    for (int d : pd) os << d << " ";
    os << "](";
    for (const auto& s : kids) os << s << ",";
    os << ")";
    return os.str();
}

} // namespace detail

/// Equality of homaloidal types up to renaming and reordering of points.
inline bool same_type(const HomaloidalType& s, const HomaloidalType& t) {
    if (s.n != t.n) return false;
    auto sig = [](const HomaloidalType& x) {
        std::vector<std::string> roots;
        for (const auto& p : x.cluster.points)
            if (!p.parent && p.mult > 0)
                roots.push_back(detail::point_signature(x.cluster, p));
        std::sort(roots.begin(), roots.end());
        return roots;
    };
    return sig(s) == sig(t);
}

// --- Trace JSON -------------------------------------------------------------

inline nlohmann::ordered_json trace_to_json(const LinkTrace& trace) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : trace.steps) {
        nlohmann::ordered_json js;
        js["link"] = link_name(s.kind);
        js["center"] = s.center ? nlohmann::ordered_json(*s.center)
                                : nlohmann::ordered_json(nullptr);
        js["created"] = s.created ? nlohmann::ordered_json(*s.created)
                                  : nlohmann::ordered_json(nullptr);
        js["surface_after"] = s.surface_after.str();
        js["a"] = rat_str(s.a_after);
        js["b"] = rat_str(s.b_after);
        js["degree"] = nlohmann::ordered_json::array(
            {rat_str(s.degree_after.mu), rat_str(s.degree_after.lambda),
             s.degree_after.e.convert_to<long long>()});
        arr.push_back(js);
    }
    return arr;
}

} // namespace cremona
