#pragma once

// The absorption pipeline.  The idea, desk-sized: a 4-path z1 z2 z3 z4
// "absorbs" a pair (u, v) when z2->u and v->z3 are arcs, because the
// detour z1 z2 [u ... v] z3 z4 swallows a whole u->v path into the middle
// of an existing route without disturbing its ends.  We first fix a small
// disjoint family of such 4-paths with coverage for every leftover pair,
// thread the family into partial routes ("shells") for the long demands,
// finish the short demands outright, then cover whatever is left by one
// spanning path of the remainder and absorb it piecewise into the shells.
//
// Probabilistic existence arguments become randomize-verify-retry loops
// with explicit seeds; every stage either verifies its own postcondition or
// reports a structured failure for the caller to fall back on.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hlink/digraph.hpp"
#include "hlink/exact.hpp"
#include "hlink/linkage.hpp"
#include "hlink/params.hpp"
#include "hlink/rng.hpp"

namespace hlink {

// ---------------------------------------------------------------------------
// Absorbers

struct Absorber {
    std::array<int, 4> z{};  // the 4-path z[0] -> z[1] -> z[2] -> z[3]

    bool is_path_in(const Digraph& d) const {
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (z[i] == z[j]) return false;
        return d.has_arc(z[0], z[1]) && d.has_arc(z[1], z[2]) && d.has_arc(z[2], z[3]);
    }

    bool touches(int v) const { return z[0] == v || z[1] == v || z[2] == v || z[3] == v; }

    // Absorbing the single-vertex "pair" u == v is allowed.
    bool absorbs(const Digraph& d, int u, int v) const {
        if (touches(u) || touches(v)) return false;
        return d.has_arc(z[1], u) && d.has_arc(v, z[2]);
    }

    bool operator<(const Absorber& o) const { return z < o.z; }
    bool operator==(const Absorber& o) const { return z == o.z; }
};

struct AbsorberFamily {
    std::vector<Absorber> members;

    VertexSet vertex_set(int universe) const {
        VertexSet s(universe);
        for (const auto& a : members)
            for (int v : a.z) s.insert(v);
        return s;
    }

    // Indices of members absorbing (u, v); computed on demand.
    std::vector<int> coverage(const Digraph& d, int u, int v) const {
        std::vector<int> idx;
        for (int i = 0; i < int(members.size()); ++i)
            if (members[i].absorbs(d, u, v)) idx.push_back(i);
        return idx;
    }
};

// All absorbers for (u, v) inside V minus (excluded + {u, v}), in ascending
// (z2, z3, z1, z4) scan order: the middle arc is the distinguishing part,
// the outer vertices are free ends.
inline std::vector<Absorber> enumerate_absorbers(const Digraph& d, const VertexSet& excluded,
                                                 int u, int v) {
    std::vector<Absorber> out;
    VertexSet banned = excluded;
    banned.insert(u);
    banned.insert(v);
    VertexSet mids = d.in(u) - banned;
    for (int z2 = mids.first(); z2 >= 0; z2 = mids.next_after(z2)) {
        VertexSet exits = (d.out(v) & d.out(z2)) - banned;
        exits.erase(z2);
        for (int z3 = exits.first(); z3 >= 0; z3 = exits.next_after(z3)) {
            VertexSet firsts = d.in(z2) - banned;
            firsts.erase(z2);
            firsts.erase(z3);
            for (int z1 = firsts.first(); z1 >= 0; z1 = firsts.next_after(z1)) {
                VertexSet lasts = d.out(z3) - banned;
                lasts.erase(z1);
                lasts.erase(z2);
                lasts.erase(z3);
                for (int z4 = lasts.first(); z4 >= 0; z4 = lasts.next_after(z4))
                    out.push_back({{z1, z2, z3, z4}});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Family selection

struct FamilyReport {
    bool ok = false;
    AbsorberFamily family;
    int retries_used = 0;
    int t_min_used = 0;
    std::string reason;
    std::pair<int, int> worst_pair{-1, -1};
    int worst_coverage = 0;
    std::map<int, int> coverage_histogram;  // coverage count -> number of pairs
};

namespace detail {

// Draw 4 distinct vertices out of `avail` (given as a vector), as an
// ordered tuple.
inline std::array<int, 4> draw_tuple(Rng& rng, const std::vector<int>& avail) {
    std::array<int, 4> t{};
    for (int i = 0; i < 4;) {
        int v = avail[rng.next_int(int(avail.size()))];
        bool dup = false;
        for (int j = 0; j < i; ++j)
            if (t[j] == v) dup = true;
        if (!dup) t[i++] = v;
    }
    return t;
}

// Coverage audit shared by selection and partition: every ordered pair
// (u, v) drawn from `residual` (u == v included) must have at least
// `needed` absorbing members.  On success fills the histogram; on failure
// reports the worst pair.
inline bool audit_coverage(const Digraph& d, const std::vector<Absorber>& members,
                           const VertexSet& residual, int needed,
                           std::pair<int, int>* worst, int* worst_cov,
                           std::map<int, int>* histogram) {
    bool ok = true;
    int best_seen_worst = -1;
    for (int u = residual.first(); u >= 0; u = residual.next_after(u))
        for (int v = residual.first(); v >= 0; v = residual.next_after(v)) {
            int c = 0;
            for (const auto& m : members)
                if (m.absorbs(d, u, v)) ++c;
            if (histogram) ++(*histogram)[c];
            if (c < needed && (best_seen_worst < 0 || c < best_seen_worst)) {
                best_seen_worst = c;
                if (worst) *worst = {u, v};
                if (worst_cov) *worst_cov = c;
                ok = false;
                if (!histogram) return false;  // early exit when not reporting
            }
        }
    return ok;
}

}  // namespace detail

// Seeded sampling of candidate 4-tuples at rate ~gamma*n / n^4, pruning of
// non-paths, of tuples that absorb nothing, and of any tuple meeting
// another (the deletion step), then a full coverage audit; fresh derived
// seeds up to params.retries.  The family is capped at ceil(gamma * n)
// members.
inline FamilyReport select_family(const Digraph& d, const VertexSet& excluded,
                                  const PipelineParams& params,
                                  int t_min_override = -1) {
    FamilyReport rep;
    rep.t_min_used = t_min_override > 0 ? t_min_override : params.t_min;
    const int n = d.order();
    VertexSet avail = excluded.complement();
    std::vector<int> avail_vec = avail.to_vector();
    if (int(avail_vec.size()) < 6) {
        rep.reason = "too few available vertices to absorb anything";
        return rep;
    }
    const int cap = int(params.gamma * n) + 1;
    const double mean = params.gamma * double(avail_vec.size());
    Rng base(params.seed);

    for (int attempt = 0; attempt < params.retries; ++attempt) {
        Rng rng = base.fork(std::uint64_t(attempt));
        int want = rng.next_poisson(mean);
        std::vector<Absorber> sampled;
        for (int i = 0; i < want; ++i) sampled.push_back({detail::draw_tuple(rng, avail_vec)});
        std::sort(sampled.begin(), sampled.end());
        sampled.erase(std::unique(sampled.begin(), sampled.end()), sampled.end());

        // Keep 4-paths that absorb at least one available pair.
        std::vector<Absorber> paths;
        for (const auto& a : sampled) {
            if (!a.is_path_in(d)) continue;
            VertexSet own(n);
            for (int z : a.z) own.insert(z);
            VertexSet heads = (d.out(a.z[1]) & avail) - own;
            VertexSet tails = (d.in(a.z[2]) & avail) - own;
            if (!heads.empty() && !tails.empty()) paths.push_back(a);
        }

        // Deletion step: drop every tuple that meets another tuple.
        std::vector<Absorber> kept;
        for (std::size_t i = 0; i < paths.size(); ++i) {
            bool clash = false;
            for (std::size_t j = 0; j < paths.size() && !clash; ++j) {
                if (i == j) continue;
                for (int a : paths[i].z)
                    if (paths[j].touches(a)) clash = true;
            }
            if (!clash) kept.push_back(paths[i]);
        }
        if (int(kept.size()) > cap) kept.resize(cap);

        AbsorberFamily fam{kept};
        VertexSet residual = avail - fam.vertex_set(n);
        rep.coverage_histogram.clear();
        std::map<int, int> hist;
        bool covered = detail::audit_coverage(d, fam.members, residual, rep.t_min_used,
                                              &rep.worst_pair, &rep.worst_coverage, &hist);
        if (covered) {
            rep.ok = true;
            rep.family = std::move(fam);
            rep.retries_used = attempt;
            rep.coverage_histogram = std::move(hist);
            rep.reason.clear();
            return rep;
        }
        rep.retries_used = attempt + 1;
        rep.reason = "coverage unreachable: pair (" + std::to_string(rep.worst_pair.first) +
                     "," + std::to_string(rep.worst_pair.second) + ") has " +
                     std::to_string(rep.worst_coverage) + " absorbers, needs " +
                     std::to_string(rep.t_min_used);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Family partition

struct PartitionReport {
    bool ok = false;
    std::vector<std::vector<Absorber>> classes;
    int retries_used = 0;
    std::string reason;
};

// Split the family into one class per cap so that class i occupies at most
// class_caps[i] vertices and still covers every ordered pair from
// `residual` at least once.  Uniform random assignment, audit, retry.
inline PartitionReport partition_family(const Digraph& d, const AbsorberFamily& family,
                                        const std::vector<int>& class_caps,
                                        const VertexSet& residual,
                                        const PipelineParams& params) {
    PartitionReport rep;
    const int s = int(class_caps.size());
    if (s == 0) {
        rep.reason = "no classes requested";
        return rep;
    }
    Rng base(params.seed ^ 0x5eedfeedULL);
    for (int attempt = 0; attempt < params.retries; ++attempt) {
        Rng rng = base.fork(std::uint64_t(attempt));
        std::vector<std::vector<Absorber>> classes(s);
        for (const auto& m : family.members) classes[rng.next_int(s)].push_back(m);

        bool fine = true;
        for (int c = 0; c < s && fine; ++c) {
            if (4 * int(classes[c].size()) > class_caps[c]) {
                fine = false;
                rep.reason = "class " + std::to_string(c) + " exceeds its vertex cap " +
                             std::to_string(class_caps[c]);
            }
        }
        for (int c = 0; c < s && fine; ++c) {
            std::pair<int, int> worst{-1, -1};
            int cov = 0;
            if (!detail::audit_coverage(d, classes[c], residual, 1, &worst, &cov, nullptr)) {
                fine = false;
                rep.reason = "class " + std::to_string(c) + " misses pair (" +
                             std::to_string(worst.first) + "," + std::to_string(worst.second) +
                             ")";
            }
        }
        rep.retries_used = attempt + 1;
        if (fine) {
            rep.ok = true;
            rep.classes = std::move(classes);
            rep.retries_used = attempt;
            rep.reason.clear();
            return rep;
        }
    }
    rep.reason = "partition unreachable: " + rep.reason;
    return rep;
}

// ---------------------------------------------------------------------------
// Connectors

namespace detail {
// b -> c on at most 4 vertices, interiors outside `avoid` (b and c
// themselves are never taken as interiors).  Three tiers, each scanned in
// ascending order: the direct arc, a common neighbour, an arc between
// out(b) and in(c).
inline std::optional<Path> connect_points(const Digraph& d, int b, int c,
                                          const VertexSet& avoid) {
    if (d.has_arc(b, c)) return Path{{b, c}, false};
    VertexSet banned = avoid;
    banned.insert(b);
    banned.insert(c);
    VertexSet commons = (d.out(b) & d.in(c)) - banned;
    if (int x = commons.first(); x >= 0) return Path{{b, x, c}, false};
    VertexSet outs = d.out(b) - banned;
    VertexSet ins = d.in(c) - banned;
    for (int x = outs.first(); x >= 0; x = outs.next_after(x)) {
        VertexSet hits = d.out(x) & ins;
        hits.erase(x);
        if (int y = hits.first(); y >= 0) return Path{{b, x, y, c}, false};
    }
    return std::nullopt;
}
}  // namespace detail

// Connector from the tail of p1 to the head of p2: a path on at most 4
// vertices avoiding `forbidden` and everything on p1, p2 except the two
// meeting ends.  nullopt when no tier applies.
inline std::optional<Path> connect(const Digraph& d, const Path& p1, const Path& p2,
                                   const VertexSet& forbidden) {
    if (p1.verts.empty() || p2.verts.empty()) return std::nullopt;
    const int b = p1.verts.back();
    const int c = p2.verts.front();
    if (b == c) return std::nullopt;
    VertexSet avoid = forbidden;
    avoid |= p1.vertex_set(d.order());
    avoid |= p2.vertex_set(d.order());
    avoid.erase(b);
    avoid.erase(c);
    return detail::connect_points(d, b, c, avoid);
}

// Concatenate the class members, in order, into one path; each hop uses a
// connector with at most 2 interior vertices.  The result contains every
// member as a consecutive run.
inline std::optional<Path> build_absorbing_path(const Digraph& d,
                                                const std::vector<Absorber>& members,
                                                const VertexSet& forbidden) {
    if (members.empty()) return std::nullopt;
    const int n = d.order();
    VertexSet avoid = forbidden;
    for (const auto& m : members)
        for (int v : m.z) avoid.insert(v);

    Path out;
    out.verts.assign(members[0].z.begin(), members[0].z.end());
    for (std::size_t i = 1; i < members.size(); ++i) {
        auto hop = detail::connect_points(d, out.verts.back(), members[i].z[0], avoid);
        if (!hop) return std::nullopt;
        for (std::size_t j = 1; j + 1 < hop->verts.size(); ++j) {
            out.verts.push_back(hop->verts[j]);
            avoid.insert(hop->verts[j]);
        }
        out.verts.insert(out.verts.end(), members[i].z.begin(), members[i].z.end());
    }
    (void)n;
    return out;
}

// ---------------------------------------------------------------------------
// Absorption step

struct AbsorbResult {
    bool ok = false;
    Path route;
    std::string reason;  // "not-a-segment" / "not-absorbable" on failure
};

// Splice the u->v path P into `shell` at the middle arc of `absorber`,
// which must appear as a consecutive run of the shell.  End vertices of the
// shell are untouched; the arc length grows by exactly |V(P)|.
inline AbsorbResult absorb(const Digraph& d, const Path& shell, const Absorber& absorber,
                           const Path& p) {
    AbsorbResult res;
    int pos = -1;
    for (int i = 0; i + 3 < int(shell.verts.size()); ++i)
        if (shell.verts[i] == absorber.z[0] && shell.verts[i + 1] == absorber.z[1] &&
            shell.verts[i + 2] == absorber.z[2] && shell.verts[i + 3] == absorber.z[3]) {
            pos = i;
            break;
        }
    if (pos < 0) {
        res.reason = "not-a-segment: absorber is not a consecutive run of the shell";
        return res;
    }
    if (p.verts.empty() || p.is_cycle) {
        res.reason = "not-absorbable: need a nonempty path";
        return res;
    }
    VertexSet shell_set = shell.vertex_set(d.order());
    for (int v : p.verts)
        if (shell_set.contains(v)) {
            res.reason = "not-absorbable: path shares vertex " + std::to_string(v) +
                         " with the shell";
            return res;
        }
    if (!path_valid_in(d, p)) {
        res.reason = "not-absorbable: spliced path is not a path of the host";
        return res;
    }
    if (!absorber.absorbs(d, p.verts.front(), p.verts.back())) {
        res.reason = "not-absorbable: missing z2->u or v->z3 arc";
        return res;
    }
    res.ok = true;
    res.route = shell;
    res.route.verts.insert(res.route.verts.begin() + pos + 2, p.verts.begin(), p.verts.end());
    return res;
}

// ---------------------------------------------------------------------------
// Skeleton

struct ShellSlot {
    int arc_index = 0;
    Path route;                       // finished route, or partial shell
    bool finished = false;            // true: already at demanded length
    std::vector<Absorber> absorbers;  // the class backing an unfinished shell
};

struct Skeleton {
    std::vector<ShellSlot> slots;  // one per pattern arc, in arc order
    VertexSet used;                // union of all slot vertices
    FamilyReport family_report;
    PartitionReport partition_report;
};

struct SkeletonResult {
    bool ok = false;
    Skeleton skeleton;
    std::string reason;  // empty on success
    std::string stage;   // "stability"/"family"/"partition"/"short-route"/"shell"
};

// Spot-check predicate from the shell invariant: every ordered pair of
// still-unused vertices must have an absorber in every unfinished slot.
inline bool skeleton_absorbs_remainder(const Digraph& d, const Skeleton& sk) {
    VertexSet remainder = sk.used.complement();
    for (const auto& slot : sk.slots) {
        if (slot.finished) continue;
        if (!detail::audit_coverage(d, slot.absorbers, remainder, 1, nullptr, nullptr, nullptr))
            return false;
    }
    return true;
}

// Build finished routes for short demands (below beta*n arcs) and partial
// shells (terminal, bridge, absorbing path, bridge, terminal) for long
// ones.  `host_is_stable` is the caller's stability verdict; the pipeline's
// guarantees are vacuous on a host with a near-partition, so we refuse to
// pretend otherwise.
inline SkeletonResult build_skeleton(const Instance& inst, const PipelineParams& params,
                                     bool host_is_stable = true) {
    SkeletonResult out;
    if (!host_is_stable) {
        out.stage = "stability";
        out.reason = "host flagged unstable; absorption guarantees do not apply";
        return out;
    }
    const int n = inst.d.order();
    const int k = inst.h.arc_count();
    const VertexSet branches = branch_vertices(inst);

    std::vector<int> long_arcs, short_arcs;
    for (int i = 0; i < k; ++i) {
        if (geq_threshold(inst.lengths[i], inst.beta * n))
            long_arcs.push_back(i);
        else
            short_arcs.push_back(i);
    }

    Skeleton sk;
    sk.used = VertexSet(n);
    sk.slots.assign(k, {});
    for (int i = 0; i < k; ++i) sk.slots[i].arc_index = i;

    // Family + classes for the long demands.
    std::vector<std::vector<Absorber>> classes(long_arcs.size());
    if (!long_arcs.empty()) {
        FamilyReport fam = select_family(inst.d, branches, params);
        if (!fam.ok && params.t_min > 1) {
            // Small hosts rarely support t_min-fold coverage; one absorber
            // per pair per class is what the assembly actually consumes.
            int relaxed = std::max(1, std::min<int>(params.t_min - 1, int(long_arcs.size())));
            fam = select_family(inst.d, branches, params, relaxed);
        }
        if (!fam.ok) {
            out.stage = "family";
            out.reason = fam.reason;
            out.skeleton.family_report = fam;
            return out;
        }

        // Trim to what the per-class vertex caps can hold, then partition.
        std::vector<int> caps;
        int max_members = 0;
        for (int i : long_arcs) {
            caps.push_back(inst.lengths[i] - 6);
            max_members += std::max(0, (inst.lengths[i] - 6) / 4);
        }
        if (int(fam.family.members.size()) > max_members)
            fam.family.members.resize(max_members);
        VertexSet residual = branches.complement() - fam.family.vertex_set(n);
        PartitionReport part = partition_family(inst.d, fam.family, caps, residual, params);
        sk.family_report = fam;
        sk.partition_report = part;
        if (!part.ok) {
            out.stage = "partition";
            out.reason = part.reason;
            out.skeleton = sk;
            return out;
        }
        classes = part.classes;
        sk.used |= fam.family.vertex_set(n);
    }
    sk.used |= branches;

    // Finished routes for the short demands, greedily by arc index.  The
    // interior pool excludes the family and everything already used.
    for (int i : short_arcs) {
        auto [t, h] = inst.h.arcs[i];
        VertexSet pool = sk.used.complement();
        auto route = fixed_length_route(inst.d, inst.f[t], inst.f[h], inst.lengths[i], pool,
                                        params.node_budget);
        if (!route) {
            out.stage = "short-route";
            out.reason = "no route of length " + std::to_string(inst.lengths[i]) +
                         " for demand " + std::to_string(i);
            out.skeleton = sk;
            return out;
        }
        sk.slots[i].route = *route;
        sk.slots[i].finished = true;
        for (int v : route->verts) sk.used.insert(v);
    }

    // Shells: terminal -> bridge -> absorbing path -> bridge -> terminal.
    for (std::size_t li = 0; li < long_arcs.size(); ++li) {
        const int i = long_arcs[li];
        auto [t, h] = inst.h.arcs[i];
        const int a = inst.f[t], b = inst.f[h];

        VertexSet avoid = sk.used;
        for (const auto& m : classes[li])
            for (int v : m.z) avoid.erase(v);  // own class is fair game
        auto lpath = build_absorbing_path(inst.d, classes[li], avoid);
        if (!lpath) {
            out.stage = "shell";
            out.reason = "could not thread class " + std::to_string(int(li)) +
                         " into one absorbing path";
            out.skeleton = sk;
            return out;
        }
        // connect_points never places b or c as an interior, so the avoid
        // sets below may freely contain the endpoints themselves.
        auto bridge_in =
            detail::connect_points(inst.d, a, lpath->verts.front(), sk.used | lpath->vertex_set(n));
        if (!bridge_in) {
            out.stage = "shell";
            out.reason = "no bridge from terminal " + std::to_string(a) + " to its shell";
            out.skeleton = sk;
            return out;
        }
        Path shell;
        shell.is_cycle = (t == h);
        shell.verts = bridge_in->verts;  // a ... front(L)
        shell.verts.pop_back();
        shell.verts.insert(shell.verts.end(), lpath->verts.begin(), lpath->verts.end());
        auto bridge_out = detail::connect_points(inst.d, lpath->verts.back(), b,
                                                 sk.used | shell.vertex_set(n));
        if (!bridge_out) {
            out.stage = "shell";
            out.reason = "no bridge from shell to terminal " + std::to_string(b);
            out.skeleton = sk;
            return out;
        }
        for (std::size_t j = 1; j + 1 < bridge_out->verts.size(); ++j)
            shell.verts.push_back(bridge_out->verts[j]);
        if (!shell.is_cycle) shell.verts.push_back(b);

        if (shell.arc_length() > inst.lengths[i]) {
            out.stage = "shell";
            out.reason = "shell for demand " + std::to_string(i) + " is already longer (" +
                         std::to_string(shell.arc_length()) + ") than demanded (" +
                         std::to_string(inst.lengths[i]) + ")";
            out.skeleton = sk;
            return out;
        }
        sk.slots[i].route = shell;
        sk.slots[i].finished = (shell.arc_length() == inst.lengths[i]);
        sk.slots[i].absorbers = classes[li];
        for (int v : shell.verts) sk.used.insert(v);
    }

    out.ok = true;
    out.skeleton = sk;
    return out;
}

// ---------------------------------------------------------------------------
// Cover and assemble

enum class PipelineStage {
    Done,
    Skeleton,      // build_skeleton failed (stage detail in reason)
    SplitArithmetic,
    Cover,         // no spanning path of the remainder was found
    Absorb,
    Verify
};

struct PipelineOutcome {
    bool ok = false;
    PipelineStage failed_at = PipelineStage::Done;
    std::string reason;
    std::optional<Subdivision> subdivision;
    Skeleton skeleton;
    int cover_restarts = 0;
};

namespace detail {

// Seeded rotation-extension heuristic for a spanning path of d.  Extends at
// both ends; when stuck, closes the path into a cycle via an end->start arc
// and breaks out at the latest position with an arc to an unused vertex.
inline std::optional<Path> ham_path_heuristic(const Digraph& d, Rng rng, int restarts) {
    const int n = d.order();
    if (n == 0) return std::nullopt;
    for (int r = 0; r < restarts; ++r) {
        Rng local = rng.fork(std::uint64_t(r));
        std::vector<int> path{local.next_int(n)};
        VertexSet used(n);
        used.insert(path[0]);
        int stuck_guard = 4 * n;
        while (int(path.size()) < n && stuck_guard-- > 0) {
            VertexSet fwd = d.out(path.back()) - used;
            if (!fwd.empty()) {
                std::vector<int> opts = fwd.to_vector();
                int v = opts[local.next_int(int(opts.size()))];
                path.push_back(v);
                used.insert(v);
                continue;
            }
            VertexSet bwd = d.in(path.front()) - used;
            if (!bwd.empty()) {
                std::vector<int> opts = bwd.to_vector();
                int v = opts[local.next_int(int(opts.size()))];
                path.insert(path.begin(), v);
                used.insert(v);
                continue;
            }
            // Rotation: close the cycle, then leave it wherever an unused
            // vertex is reachable.
            if (!d.has_arc(path.back(), path.front())) break;
            int cut = -1, leave = -1;
            for (int i = 0; i < int(path.size()); ++i) {
                VertexSet esc = d.out(path[i]) - used;
                if (!esc.empty()) {
                    cut = i;
                    std::vector<int> opts = esc.to_vector();
                    leave = opts[local.next_int(int(opts.size()))];
                    break;
                }
            }
            if (cut < 0) break;
            std::vector<int> rotated(path.begin() + cut + 1, path.end());
            rotated.insert(rotated.end(), path.begin(), path.begin() + cut + 1);
            rotated.push_back(leave);
            used.insert(leave);
            path = std::move(rotated);
        }
        if (int(path.size()) == n) return Path{path, false};
    }
    return std::nullopt;
}

}  // namespace detail

// Find one spanning path of the remainder, cut it into one segment per
// unfinished shell (segment i supplies exactly demanded-minus-shell
// vertices), absorb each segment into its shell, and verify.
inline PipelineOutcome cover_and_assemble(const Instance& inst, const Skeleton& sk,
                                          const PipelineParams& params) {
    PipelineOutcome out;
    out.skeleton = sk;
    const int n = inst.d.order();

    std::vector<int> open_slots;
    long need_total = 0;
    for (const auto& slot : sk.slots)
        if (!slot.finished) {
            open_slots.push_back(slot.arc_index);
            need_total += inst.lengths[slot.arc_index] - slot.route.arc_length();
        }
    VertexSet remainder = sk.used.complement();

    if (need_total != remainder.count()) {
        out.failed_at = PipelineStage::SplitArithmetic;
        out.reason = "shells demand " + std::to_string(need_total) +
                     " more vertices but the remainder has " +
                     std::to_string(remainder.count());
        return out;
    }

    Path spanning;
    if (!remainder.empty()) {
        auto sub = induced_subdigraph(inst.d, remainder);
        std::optional<Path> local;
        if (sub.graph.order() <= params.ham_cap) {
            local = hamiltonian_path(sub.graph, -1, -1, params.ham_cap);
        } else {
            local = detail::ham_path_heuristic(sub.graph, Rng(params.seed ^ 0xc0ffeeULL),
                                               std::max(params.retries, 32));
            out.cover_restarts = std::max(params.retries, 32);
        }
        if (!local) {
            out.failed_at = PipelineStage::Cover;
            out.reason = "no spanning path of the remainder (order " +
                         std::to_string(sub.graph.order()) + ")";
            return out;
        }
        for (int& v : local->verts) v = sub.to_host[v];
        spanning = *local;
    }

    // Cut the spanning path and absorb segment by segment.
    Subdivision result;
    result.routes.resize(sk.slots.size());
    for (const auto& slot : sk.slots)
        if (slot.finished) result.routes[slot.arc_index] = slot.route;

    std::size_t cursor = 0;
    for (int idx : open_slots) {
        const ShellSlot& slot = sk.slots[idx];
        int want = inst.lengths[idx] - slot.route.arc_length();
        if (want == 0) {
            result.routes[idx] = slot.route;
            continue;
        }
        Path segment;
        segment.verts.assign(spanning.verts.begin() + cursor,
                             spanning.verts.begin() + cursor + want);
        cursor += std::size_t(want);

        const Absorber* chosen = nullptr;
        for (const auto& m : slot.absorbers)
            if (m.absorbs(inst.d, segment.verts.front(), segment.verts.back())) {
                chosen = &m;
                break;
            }
        if (!chosen) {
            out.failed_at = PipelineStage::Absorb;
            out.reason = "no absorber in class of demand " + std::to_string(idx) +
                         " accepts the segment endpoints";
            return out;
        }
        AbsorbResult ab = absorb(inst.d, slot.route, *chosen, segment);
        if (!ab.ok) {
            out.failed_at = PipelineStage::Absorb;
            out.reason = ab.reason;
            return out;
        }
        result.routes[idx] = ab.route;
    }

    VerifyReport verdict = verify_subdivision(inst, result);
    if (!verdict.ok()) {
        out.failed_at = PipelineStage::Verify;
        out.reason = "assembled routes fail verification: " + verdict.violations.front().rule;
        return out;
    }
    out.ok = true;
    out.subdivision = std::move(result);
    return out;
}

// One-call driver: skeleton, then cover-and-assemble.
inline PipelineOutcome run_absorption(const Instance& inst, const PipelineParams& params,
                                      bool host_is_stable = true) {
    SkeletonResult sk = build_skeleton(inst, params, host_is_stable);
    if (!sk.ok) {
        PipelineOutcome out;
        out.failed_at = PipelineStage::Skeleton;
        out.reason = sk.stage + ": " + sk.reason;
        out.skeleton = sk.skeleton;
        return out;
    }
    return cover_and_assemble(inst, sk.skeleton, params);
}

}  // namespace hlink
