#pragma once

// Digraph families used as test beds.  Three of them are the classical
// tightness examples for semi-degree conditions (a near-complete digraph
// with a forced source, two cliques glued on a small cut, and a join of
// cliques over an independent set); the rest are workhorses: complete
// digraphs, random digraphs repaired up to a degree floor, and double
// covers of undirected graphs.  Every generator is deterministic given its
// arguments, layouts are documented so tests can address specific vertices.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hlink/digraph.hpp"
#include "hlink/linkage.hpp"
#include "hlink/rng.hpp"

namespace hlink {

inline Digraph gen_complete(int n) {
    std::vector<Arc> arcs;
    arcs.reserve(std::size_t(n) * std::size_t(n > 0 ? n - 1 : 0));
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v) arcs.emplace_back(u, v);
    return Digraph(n, arcs);
}

// Complete digraph on 0..n-2 plus a source x = n-1 sending an arc to
// everything.  Every out-degree is at least n-2, yet x has in-degree 0, so
// no spanning collection of routes can ever reach x except by starting there.
struct Remark1Graph {
    Digraph d;
    int x = 0;
};

inline Remark1Graph gen_remark1(int n) {
    if (n < 2) throw std::invalid_argument("remark1: need n >= 2");
    std::vector<Arc> arcs;
    for (int u = 0; u + 1 < n; ++u)
        for (int v = 0; v + 1 < n; ++v)
            if (u != v) arcs.emplace_back(u, v);
    for (int v = 0; v + 1 < n; ++v) arcs.emplace_back(n - 1, v);
    return {Digraph(n, arcs), n - 1};
}

// Two complete digraphs Q1, Q2 of order n/2 + k sharing exactly the 2k
// vertices 0..2k-1.  Layout: terminals x_1..x_k are 0..k-1, y_1..y_k are
// k..2k-1, then the private half of Q1, then the private half of Q2.
// Semi-degree lands on n/2 + k - 1, one above the theorem threshold, but a
// route between private halves must pass through the shared cut, which
// caps path lengths well below spanning.
struct Remark2Graph {
    Digraph d;
    Instance instance;  // matching pattern x_i -> y_i with a default length split
};

inline Remark2Graph gen_remark2(int n, int k,
                                const std::vector<int>& lengths = {}) {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("remark2: need even n >= 4");
    if (k < 1 || 2 * k >= n / 2 + k)
        throw std::invalid_argument("remark2: need 1 <= k and 2k < n/2 + k");
    const int half = n / 2 + k;
    std::vector<Arc> arcs;
    auto clique_over = [&](int priv_lo, int priv_hi) {
        std::vector<int> mem;
        for (int v = 0; v < 2 * k; ++v) mem.push_back(v);
        for (int v = priv_lo; v < priv_hi; ++v) mem.push_back(v);
        for (int u : mem)
            for (int v : mem)
                if (u != v) arcs.emplace_back(u, v);
    };
    clique_over(2 * k, half);
    clique_over(half, n);

    Remark2Graph g{Digraph(n, arcs), {}};
    g.instance.d = g.d;
    g.instance.h.verts = 2 * k;
    for (int i = 0; i < k; ++i) g.instance.h.arcs.emplace_back(i, k + i);
    for (int i = 0; i < 2 * k; ++i) g.instance.f.push_back(i);
    if (!lengths.empty()) {
        if (int(lengths.size()) != k)
            throw std::invalid_argument("remark2: lengths must have one entry per terminal pair");
        g.instance.lengths = lengths;
    } else {
        // Spanning split: k-1 short routes of length 4, remainder on the last.
        int last = n - k - 4 * (k - 1);
        if (last < 1) throw std::invalid_argument("remark2: n too small for default lengths");
        g.instance.lengths.assign(k - 1, 4);
        g.instance.lengths.push_back(last);
    }
    return g;
}

// Join of l disjoint complete digraphs of order 3k-2 with an independent
// set of (n - 3k + 1)/2 join vertices; all arcs between the two layers run
// in both directions.  Only defined when l = (n + 3k - 1) / (2(3k - 2)) is
// an integer >= 2 and k >= 5.  Layout: join vertices 0..m-1 first, then the
// blocks in order.
inline Digraph gen_remark3(int n, int k) {
    if (k < 5) throw std::invalid_argument("remark3: need k >= 5");
    const int block = 3 * k - 2;
    const int num = n + 3 * k - 1;
    if (num % (2 * block) != 0)
        throw std::invalid_argument("remark3: (n + 3k - 1) / (2(3k - 2)) is not an integer for n=" +
                                    std::to_string(n));
    const int l = num / (2 * block);
    if (l < 2) throw std::invalid_argument("remark3: need at least two blocks");
    const int m = (n - 3 * k + 1) / 2;

    std::vector<Arc> arcs;
    for (int b = 0; b < l; ++b) {
        const int lo = m + b * block;
        for (int u = lo; u < lo + block; ++u)
            for (int v = lo; v < lo + block; ++v)
                if (u != v) arcs.emplace_back(u, v);
    }
    for (int j = 0; j < m; ++j)
        for (int v = m; v < n; ++v) {
            arcs.emplace_back(j, v);
            arcs.emplace_back(v, j);
        }
    return Digraph(n, arcs);
}

// Random digraph with arc probability `density`, then repaired upward until
// every semi-degree reaches `floor`: vertices in ascending order, each
// deficient side topped up with the lexicographically first missing arc.
inline Digraph gen_random_floor(int n, int floor, std::uint64_t seed,
                                double density = 0.5) {
    if (floor < 0 || floor > n - 1)
        throw std::invalid_argument("random_floor: floor must lie in [0, n-1]");
    std::vector<VertexSet> out(n, VertexSet(n)), in(n, VertexSet(n));
    Rng rng(seed);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v && rng.next_bool(density)) {
                out[u].insert(v);
                in[v].insert(u);
            }
    for (int v = 0; v < n; ++v) {
        for (int u = 0; out[v].count() < floor && u < n; ++u)
            if (u != v && !out[v].contains(u)) {
                out[v].insert(u);
                in[u].insert(v);
            }
        for (int u = 0; in[v].count() < floor && u < n; ++u)
            if (u != v && !in[v].contains(u)) {
                out[u].insert(v);
                in[v].insert(u);
            }
    }
    std::vector<Arc> arcs;
    for (int u = 0; u < n; ++u) out[u].for_each([&](int v) { arcs.emplace_back(u, v); });
    return Digraph(n, arcs);
}

// Each undirected edge becomes the pair of opposite arcs.
inline Digraph gen_double_cover(int n, const std::vector<Arc>& edges) {
    std::vector<Arc> arcs;
    arcs.reserve(edges.size() * 2);
    for (auto [u, v] : edges) {
        arcs.emplace_back(u, v);
        arcs.emplace_back(v, u);
    }
    return Digraph(n, arcs);
}

}  // namespace hlink
