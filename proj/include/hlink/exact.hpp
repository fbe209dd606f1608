#pragma once

// Ground-truth searches.  Everything here is complete (within stated size
// caps): the route backtracker answers spanning-subdivision questions
// exactly, the subset DP answers Hamiltonian/longest path questions
// exactly, and Kuhn's algorithm answers matching questions exactly.  The
// constructive pipeline is allowed to be lucky; this file is not.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hlink/digraph.hpp"
#include "hlink/linkage.hpp"
#include "hlink/params.hpp"

namespace hlink {

struct SearchBudget {
    std::uint64_t node_limit = 2'000'000;
};

enum class SolveStatus { Found, Infeasible, BudgetExhausted };

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    std::optional<Subdivision> subdivision;
    std::uint64_t nodes = 0;
};

namespace detail {

// Arc-count distance from `from` to `to` using only vertices of `allowed`
// as intermediates (`from` and `to` need not lie in `allowed`).  Returns -1
// if unreachable.  Used as an admissible bound: a leg that still owes r
// arcs is dead once the distance exceeds r.
inline int bfs_distance(const Digraph& d, int from, int to, const VertexSet& allowed) {
    if (from == to) return 0;
    VertexSet frontier(d.order());
    frontier.insert(from);
    VertexSet seen = frontier;
    int dist = 0;
    while (!frontier.empty()) {
        ++dist;
        VertexSet next(d.order());
        frontier.for_each([&](int v) { next |= d.out(v); });
        if (next.contains(to)) return dist;
        next &= allowed;
        next -= seen;
        if (next.empty()) return -1;
        seen |= next;
        frontier = next;
    }
    return -1;
}

struct RouteSearcher {
    const Instance& inst;
    const SearchBudget budget;
    VertexSet free;  // vertices still available as route interiors
    std::vector<Path> routes;
    std::uint64_t nodes = 0;
    bool out_of_budget = false;

    RouteSearcher(const Instance& i, const SearchBudget& b)
        : inst(i), budget(b), free(i.d.order()) {
        free = branch_vertices(inst).complement();
    }

    bool extend(int route_idx, int cur, int target, int arcs_left) {
        if (++nodes > budget.node_limit) {
            out_of_budget = true;
            return false;
        }
        if (arcs_left == 1)
            return inst.d.has_arc(cur, target) && next_route(route_idx + 1);
        int dist = bfs_distance(inst.d, cur, target, free);
        if (dist < 0 || dist > arcs_left) return false;
        VertexSet cands = inst.d.out(cur) & free;
        for (int v = cands.first(); v >= 0; v = cands.next_after(v)) {
            free.erase(v);
            routes[route_idx].verts.push_back(v);
            if (extend(route_idx, v, target, arcs_left - 1)) return true;
            routes[route_idx].verts.pop_back();
            free.insert(v);
            if (out_of_budget) return false;
        }
        return false;
    }

    bool next_route(int route_idx) {
        if (route_idx == inst.h.arc_count()) return free.empty();
        auto [t, h] = inst.h.arcs[route_idx];
        routes[route_idx].verts.assign(1, inst.f[t]);
        routes[route_idx].is_cycle = (t == h);
        // A loop route walks back to its own branch vertex.
        return extend(route_idx, inst.f[t], inst.f[h], inst.lengths[route_idx]);
    }

    SolveResult run() {
        routes.assign(inst.h.arc_count(), {});
        SolveResult res;
        bool found = next_route(0);
        res.nodes = nodes;
        if (found) {
            // A path route ends where extend() placed the target; the
            // closing arc of a cycle is implicit, so only paths need the
            // target appended.
            for (int i = 0; i < inst.h.arc_count(); ++i)
                if (!routes[i].is_cycle) routes[i].verts.push_back(inst.f[inst.h.arcs[i].second]);
            res.status = SolveStatus::Found;
            res.subdivision = Subdivision{routes};
        } else if (out_of_budget) {
            res.status = SolveStatus::BudgetExhausted;
        } else {
            res.status = SolveStatus::Infeasible;
        }
        return res;
    }
};

}  // namespace detail

// Budgeted backtracking over route systems: routes in pattern-arc order,
// candidate vertices in ascending order, so reruns are bit-identical.  No
// size cap of its own -- callers that need a completeness guarantee wrap it
// (exact_solve), callers that just want a bounded try call it directly.
inline SolveResult route_search(const Instance& inst, const SearchBudget& budget) {
    auto v = validate_instance(inst);
    if (!v.well_formed())
        throw std::invalid_argument("route_search: malformed instance: " + v.structural.front());
    if (!v.ok()) return {SolveStatus::Infeasible, std::nullopt, 0};
    detail::RouteSearcher s(inst, budget);
    return s.run();
}

// Complete decision procedure for hosts up to `cap` vertices.  With the
// default node budget the search space at n <= 16 is always exhausted, so
// Infeasible really means infeasible.
inline SolveResult exact_solve(const Instance& inst, const SearchBudget& budget = {},
                               int cap = 16) {
    if (inst.d.order() > cap)
        throw std::invalid_argument("exact_solve: order " + std::to_string(inst.d.order()) +
                                    " exceeds cap " + std::to_string(cap));
    return route_search(inst, budget);
}

// ---------------------------------------------------------------------------
// Subset dynamic programs

// Spanning path from s to t; pass -1 to leave an endpoint free.  Exact for
// n <= cap (default 22; 2^n states).
inline std::optional<Path> hamiltonian_path(const Digraph& d, int s = -1, int t = -1,
                                            int cap = 22) {
    const int n = d.order();
    if (n > cap) throw std::invalid_argument("hamiltonian_path: order exceeds cap");
    if (n == 0) return std::nullopt;
    if (n == 1) {
        if (s > 0 || t > 0) return std::nullopt;
        return Path{{0}, false};
    }
    std::vector<std::uint32_t> outm(n), dp(std::size_t(1) << n, 0);
    for (int v = 0; v < n; ++v) {
        std::uint32_t m = 0;
        d.out(v).for_each([&](int u) { m |= 1u << u; });
        outm[v] = m;
    }
    for (int v = 0; v < n; ++v)
        if (s < 0 || v == s) dp[1u << v] = 1u << v;
    const std::uint32_t full = (n == 32) ? ~0u : (1u << n) - 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        std::uint32_t ends = dp[mask];
        while (ends) {
            int v = __builtin_ctz(ends);
            ends &= ends - 1;
            std::uint32_t ext = outm[v] & ~mask;
            while (ext) {
                int u = __builtin_ctz(ext);
                ext &= ext - 1;
                dp[mask | (1u << u)] |= 1u << u;
            }
        }
    }
    std::uint32_t finals = dp[full];
    if (t >= 0) finals &= 1u << t;
    if (!finals) return std::nullopt;

    Path p;
    int cur = __builtin_ctz(finals);
    std::uint32_t mask = full;
    p.verts.assign(1, cur);
    while (mask != (1u << cur)) {
        std::uint32_t prev_mask = mask & ~(1u << cur);
        std::uint32_t preds = dp[prev_mask];
        int chosen = -1;
        while (preds) {
            int u = __builtin_ctz(preds);
            preds &= preds - 1;
            if (outm[u] & (1u << cur)) {
                chosen = u;
                break;
            }
        }
        p.verts.push_back(chosen);
        mask = prev_mask;
        cur = chosen;
    }
    std::reverse(p.verts.begin(), p.verts.end());
    return p;
}

struct LongestPathResult {
    int length = 0;  // arc count
    Path path;
};

// Longest s->t path by arc count, exact via the same subset DP.  nullopt if
// t is unreachable from s.
inline std::optional<LongestPathResult> longest_path(const Digraph& d, int s, int t,
                                                     int cap = 22) {
    const int n = d.order();
    if (n > cap) throw std::invalid_argument("longest_path: order exceeds cap");
    if (s < 0 || s >= n || t < 0 || t >= n)
        throw std::invalid_argument("longest_path: endpoint out of range");
    if (s == t) return LongestPathResult{0, Path{{s}, false}};
    std::vector<std::uint32_t> outm(n), dp(std::size_t(1) << n, 0);
    for (int v = 0; v < n; ++v) {
        std::uint32_t m = 0;
        d.out(v).for_each([&](int u) { m |= 1u << u; });
        outm[v] = m;
    }
    dp[1u << s] = 1u << s;
    const std::uint32_t full = (1u << n) - 1;
    std::uint32_t best_mask = 0;
    int best = -1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        std::uint32_t ends = dp[mask];
        if (!ends) continue;
        if ((ends >> t) & 1u) {
            int len = __builtin_popcount(mask) - 1;
            if (len > best) {
                best = len;
                best_mask = mask;
            }
        }
        while (ends) {
            int v = __builtin_ctz(ends);
            ends &= ends - 1;
            if (v == t) continue;  // t is a sink for this query
            std::uint32_t ext = outm[v] & ~mask;
            while (ext) {
                int u = __builtin_ctz(ext);
                ext &= ext - 1;
                dp[mask | (1u << u)] |= 1u << u;
            }
        }
    }
    if (best < 0) return std::nullopt;

    LongestPathResult res;
    res.length = best;
    int cur = t;
    std::uint32_t mask = best_mask;
    res.path.verts.assign(1, cur);
    while (cur != s || mask != (1u << s)) {
        std::uint32_t prev_mask = mask & ~(1u << cur);
        std::uint32_t preds = dp[prev_mask];
        int chosen = -1;
        while (preds) {
            int u = __builtin_ctz(preds);
            preds &= preds - 1;
            if (outm[u] & (1u << cur)) {
                chosen = u;
                break;
            }
        }
        res.path.verts.push_back(chosen);
        mask = prev_mask;
        cur = chosen;
    }
    std::reverse(res.path.verts.begin(), res.path.verts.end());
    return res;
}

// Path from a to b with exactly `len` arcs, interior vertices drawn from
// `allowed_interior`; with b == a the result is a cycle through a (closing
// arc implied).  Budgeted DFS in ascending vertex order with the BFS bound
// as pruning, i.e. the single-route core of the backtracker.  nullopt means
// "not found within budget", not a proof of absence, unless the budget was
// never hit -- callers that care pass a nodes-out pointer and compare.
inline std::optional<Path> fixed_length_route(const Digraph& d, int a, int b, int len,
                                              const VertexSet& allowed_interior,
                                              std::uint64_t node_budget = 200'000,
                                              std::uint64_t* nodes_out = nullptr,
                                              bool* budget_hit = nullptr) {
    const bool cycle = (a == b);
    if (len < 1 || (cycle && len < 2)) return std::nullopt;
    VertexSet free = allowed_interior;
    free.erase(a);
    if (!cycle) free.erase(b);
    Path p;
    p.is_cycle = cycle;
    p.verts.assign(1, a);
    std::uint64_t nodes = 0;
    bool out_of_budget = false;

    struct Dfs {
        const Digraph& d;
        const int target;
        VertexSet& free;
        Path& p;
        std::uint64_t& nodes;
        const std::uint64_t limit;
        bool& blown;

        bool go(int cur, int arcs_left) {
            if (++nodes > limit) {
                blown = true;
                return false;
            }
            if (arcs_left == 1) return d.has_arc(cur, target);
            int dist = detail::bfs_distance(d, cur, target, free);
            if (dist < 0 || dist > arcs_left) return false;
            VertexSet cands = d.out(cur) & free;
            for (int v = cands.first(); v >= 0; v = cands.next_after(v)) {
                free.erase(v);
                p.verts.push_back(v);
                if (go(v, arcs_left - 1)) return true;
                p.verts.pop_back();
                free.insert(v);
                if (blown) return false;
            }
            return false;
        }
    } dfs{d, b, free, p, nodes, node_budget, out_of_budget};

    bool found = dfs.go(a, len);
    if (nodes_out) *nodes_out = nodes;
    if (budget_hit) *budget_hit = out_of_budget;
    if (!found) return std::nullopt;
    if (!cycle) p.verts.push_back(b);
    return p;
}

// ---------------------------------------------------------------------------
// Bipartite matching

struct MatchingProblem {
    int left = 0;
    int right = 0;
    std::vector<VertexSet> adj;  // adj[l] is a subset of the right side
};

struct MatchingResult {
    std::vector<int> match_of_left;   // -1 where unmatched
    std::vector<int> match_of_right;  // -1 where unmatched
    int size = 0;
    bool saturates_left = false;
};

namespace detail {
inline bool kuhn_augment(const MatchingProblem& p, int l, std::vector<int>& match_r,
                         std::vector<char>& visited) {
    for (int r = p.adj[l].first(); r >= 0; r = p.adj[l].next_after(r)) {
        if (visited[r]) continue;
        visited[r] = 1;
        if (match_r[r] < 0 || kuhn_augment(p, match_r[r], match_r, visited)) {
            match_r[r] = l;
            return true;
        }
    }
    return false;
}
}  // namespace detail

inline MatchingResult max_bipartite_matching(const MatchingProblem& p) {
    MatchingResult res;
    res.match_of_left.assign(p.left, -1);
    res.match_of_right.assign(p.right, -1);
    for (int l = 0; l < p.left; ++l) {
        std::vector<char> visited(p.right, 0);
        if (detail::kuhn_augment(p, l, res.match_of_right, visited)) ++res.size;
    }
    for (int r = 0; r < p.right; ++r)
        if (res.match_of_right[r] >= 0) res.match_of_left[res.match_of_right[r]] = r;
    res.saturates_left = (res.size == p.left);
    return res;
}

// For an unsaturated instance, the alternating-reachable left set from any
// unmatched left vertex has |N(set)| < |set|; that set is a Hall
// certificate.  Empty when the matching saturates the left side.
inline std::vector<int> hall_violator(const MatchingProblem& p, const MatchingResult& m) {
    if (m.saturates_left) return {};
    std::vector<char> left_in(p.left, 0), right_in(p.right, 0);
    std::vector<int> stack;
    for (int l = 0; l < p.left; ++l)
        if (m.match_of_left[l] < 0 && !left_in[l]) {
            left_in[l] = 1;
            stack.push_back(l);
        }
    while (!stack.empty()) {
        int l = stack.back();
        stack.pop_back();
        for (int r = p.adj[l].first(); r >= 0; r = p.adj[l].next_after(r)) {
            if (right_in[r]) continue;
            right_in[r] = 1;
            int l2 = m.match_of_right[r];
            if (l2 >= 0 && !left_in[l2]) {
                left_in[l2] = 1;
                stack.push_back(l2);
            }
        }
    }
    std::vector<int> out;
    for (int l = 0; l < p.left; ++l)
        if (left_in[l]) out.push_back(l);
    return out;
}

}  // namespace hlink
