#pragma once

// The demand side of the problem: a small pattern digraph H, an injective
// placement f of its vertices into the host, and a demanded length for each
// pattern arc.  A Subdivision answers the demand with one internally
// disjoint route per pattern arc, jointly covering every host vertex.
//
// verify_subdivision is the referee for the whole library: constructive
// solvers may cut corners internally, but nothing is reported as a success
// unless it passes this check.

#include <string>
#include <vector>

#include "hlink/digraph.hpp"
#include "hlink/params.hpp"

namespace hlink {

struct Pattern {
    int verts = 0;
    std::vector<Arc> arcs;  // loops and parallel arcs allowed

    int arc_count() const { return int(arcs.size()); }
};

struct Instance {
    Digraph d;
    Pattern h;
    std::vector<int> f;        // pattern vertex -> host vertex, injective
    std::vector<int> lengths;  // demanded arc count per pattern arc
    double alpha = 0.3;        // short-length budget carried with the instance
    double beta = 0.25;        // short/long split carried with the instance
};

struct Subdivision {
    std::vector<Path> routes;  // routes[i] realizes pattern arc i
};

inline VertexSet branch_vertices(const Instance& inst) {
    VertexSet s(inst.d.order());
    for (int v : inst.f) s.insert(v);
    return s;
}

// ---------------------------------------------------------------------------
// Instance validation

struct ValidationReport {
    std::vector<std::string> structural;  // malformed: reject outright
    std::vector<std::string> infeasible;  // well-formed but provably unsatisfiable
    std::vector<std::string> warnings;    // theorem-strength advisories
    bool well_formed() const { return structural.empty(); }
    bool ok() const { return structural.empty() && infeasible.empty(); }
};

inline ValidationReport validate_instance(const Instance& inst) {
    ValidationReport rep;
    const int n = inst.d.order();
    const int k = inst.h.arc_count();

    if (inst.h.verts < 1) rep.structural.push_back("pattern has no vertices");
    if (k < 1) rep.structural.push_back("pattern has no arcs");
    std::vector<int> incident(std::max(inst.h.verts, 0), 0);
    for (auto [t, h] : inst.h.arcs) {
        if (t < 0 || t >= inst.h.verts || h < 0 || h >= inst.h.verts) {
            rep.structural.push_back("pattern arc endpoint out of range");
        } else {
            incident[t]++;
            incident[h]++;
        }
    }
    for (int w = 0; w < inst.h.verts; ++w)
        if (incident[w] == 0)
            rep.structural.push_back("pattern vertex " + std::to_string(w) +
                                     " touches no arc");

    if (int(inst.f.size()) != inst.h.verts)
        rep.structural.push_back("placement size does not match pattern order");
    VertexSet seen(std::max(n, 1));
    for (int v : inst.f) {
        if (v < 0 || v >= n) {
            rep.structural.push_back("placement vertex out of range");
        } else if (seen.contains(v)) {
            rep.structural.push_back("placement not injective at host vertex " +
                                     std::to_string(v));
        } else {
            seen.insert(v);
        }
    }

    if (int(inst.lengths.size()) != k)
        rep.structural.push_back("length vector does not match pattern arc count");
    for (std::size_t i = 0; i < inst.lengths.size(); ++i) {
        if (inst.lengths[i] < 1)
            rep.structural.push_back("demanded length " + std::to_string(i) +
                                     " is not positive");
        else if (i < inst.h.arcs.size() && inst.h.arcs[i].first == inst.h.arcs[i].second &&
                 inst.lengths[i] < 2)
            rep.infeasible.push_back("loop arc " + std::to_string(i) +
                                     " demands a cycle shorter than 2 in a loop-free host");
    }
    if (!(inst.alpha > 0.0 && inst.alpha < 1.0 && inst.beta > 0.0 && inst.beta < 1.0))
        rep.structural.push_back("alpha and beta must lie in (0,1)");

    if (!rep.well_formed()) return rep;

    // Spanning arithmetic: each route supplies exactly n_i - 1 internal
    // vertices, and together they must account for everything off the
    // branch set.  A mismatch is not a malformed input -- it is a proof
    // that no spanning subdivision exists.
    long interior = 0;
    for (int len : inst.lengths) interior += len - 1;
    if (interior != long(n) - inst.h.verts)
        rep.infeasible.push_back(
            "interior slots sum to " + std::to_string(interior) + " but " +
            std::to_string(long(n) - inst.h.verts) + " vertices need covering");

    if (min_semi_degree(inst.d) * 2 < n + 2 * k)
        rep.warnings.push_back("semi-degree below n/2 + k; outcome not guaranteed");
    for (int len : inst.lengths)
        if (len < 4) {
            rep.warnings.push_back("a demanded length is below 4");
            break;
        }
    long short_total = 0;
    for (int len : inst.lengths)
        if (double(len) < inst.beta * n) short_total += len;
    if (double(short_total) > inst.alpha * n)
        rep.warnings.push_back("short demanded lengths exceed the alpha budget");

    return rep;
}

// ---------------------------------------------------------------------------
// Subdivision verification

struct Violation {
    std::string rule;        // "shape", "endpoints", "length", "arc", "repeat",
                             // "overlap", "spanning"
    std::vector<int> routes; // offending route indices (empty for global rules)
    std::string detail;
};

struct VerifyReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

namespace detail {
// A route's admissible meeting points: both ends of a path, the root of a cycle.
inline bool is_route_endpoint(const Path& p, int v) {
    if (p.verts.empty()) return false;
    if (p.is_cycle) return p.verts.front() == v;
    return p.verts.front() == v || p.verts.back() == v;
}
}  // namespace detail

inline VerifyReport verify_subdivision(const Instance& inst, const Subdivision& sub) {
    VerifyReport rep;
    const int n = inst.d.order();
    const int k = inst.h.arc_count();

    if (int(sub.routes.size()) != k) {
        rep.violations.push_back({"shape", {}, "expected " + std::to_string(k) +
                                                   " routes, got " +
                                                   std::to_string(int(sub.routes.size()))});
        return rep;
    }

    for (int i = 0; i < k; ++i) {
        const Path& p = sub.routes[i];
        auto [t, h] = inst.h.arcs[i];
        const bool loop = (t == h);

        if (p.verts.empty()) {
            rep.violations.push_back({"shape", {i}, "route is empty"});
            continue;
        }
        bool in_range = true;
        for (int v : p.verts)
            if (v < 0 || v >= n) in_range = false;
        if (!in_range) {
            rep.violations.push_back({"shape", {i}, "route vertex out of range"});
            continue;
        }

        if (loop != p.is_cycle)
            rep.violations.push_back({"endpoints", {i},
                                      loop ? "loop arc needs a cycle route"
                                           : "non-loop arc needs a path route"});
        if (loop) {
            if (p.verts.front() != inst.f[t])
                rep.violations.push_back({"endpoints", {i}, "cycle does not start at its branch vertex"});
        } else {
            if (p.verts.front() != inst.f[t])
                rep.violations.push_back({"endpoints", {i}, "route starts at the wrong vertex"});
            if (p.verts.back() != inst.f[h])
                rep.violations.push_back({"endpoints", {i}, "route ends at the wrong vertex"});
        }

        if (p.arc_length() != inst.lengths[i])
            rep.violations.push_back({"length", {i},
                                      "arc length " + std::to_string(p.arc_length()) +
                                          ", demanded " + std::to_string(inst.lengths[i])});

        for (std::size_t j = 0; j + 1 < p.verts.size(); ++j)
            if (!inst.d.has_arc(p.verts[j], p.verts[j + 1])) {
                rep.violations.push_back({"arc", {i},
                                          "missing arc " + std::to_string(p.verts[j]) + "->" +
                                              std::to_string(p.verts[j + 1])});
                break;
            }
        if (p.is_cycle && p.verts.size() >= 2 &&
            !inst.d.has_arc(p.verts.back(), p.verts.front()))
            rep.violations.push_back({"arc", {i}, "missing closing arc"});

        VertexSet seen(n);
        for (int v : p.verts) {
            if (seen.contains(v)) {
                rep.violations.push_back({"repeat", {i},
                                          "vertex " + std::to_string(v) + " repeats"});
                break;
            }
            seen.insert(v);
        }
    }

    // Cross-route sharing: a vertex on two routes must be a branch vertex
    // meeting both routes at an admissible endpoint.
    VertexSet branches = branch_vertices(inst);
    std::vector<std::vector<int>> holder(n);
    for (int i = 0; i < k; ++i)
        for (int v : sub.routes[i].verts)
            if (v >= 0 && v < n) holder[v].push_back(i);
    for (int v = 0; v < n; ++v) {
        if (holder[v].size() < 2) continue;
        bool fine = branches.contains(v);
        for (int i : holder[v])
            if (!detail::is_route_endpoint(sub.routes[i], v)) fine = false;
        if (!fine)
            rep.violations.push_back({"overlap", holder[v],
                                      "vertex " + std::to_string(v) +
                                          " shared other than at branch endpoints"});
    }

    VertexSet covered(n);
    for (const auto& p : sub.routes)
        for (int v : p.verts)
            if (v >= 0 && v < n) covered.insert(v);
    if (covered.count() != n) {
        VertexSet missing = covered.complement();
        rep.violations.push_back({"spanning", {},
                                  std::to_string(missing.count()) +
                                      " vertices uncovered, first is " +
                                      std::to_string(missing.first())});
    }

    return rep;
}

}  // namespace hlink
