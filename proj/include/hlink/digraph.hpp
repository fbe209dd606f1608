#pragma once

// Loop-free digraphs on vertices 0..n-1 with mirrored out/in adjacency
// bitsets.  A Digraph is immutable once constructed; algorithms that need
// "D minus some vertices" restrict themselves with masks instead of
// rebuilding, and induced_subdigraph() covers the cases where a genuine
// re-indexed copy is worth it.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hlink/bitset.hpp"

namespace hlink {

using Arc = std::pair<int, int>;

class Digraph {
public:
    Digraph() = default;

    Digraph(int n, const std::vector<Arc>& arcs) : n_(n) {
        if (n < 0) throw std::invalid_argument("digraph: negative order");
        out_.assign(n, VertexSet(n));
        in_.assign(n, VertexSet(n));
        for (auto [u, v] : arcs) {
            if (u < 0 || u >= n || v < 0 || v >= n)
                throw std::invalid_argument("digraph: arc endpoint out of range");
            if (u == v) throw std::invalid_argument("digraph: loop arc " + std::to_string(u));
            out_[u].insert(v);
            in_[v].insert(u);
        }
    }

    int order() const { return n_; }

    bool has_arc(int u, int v) const { return out_[u].contains(v); }

    const VertexSet& out(int v) const { return out_[v]; }
    const VertexSet& in(int v) const { return in_[v]; }

    int out_degree(int v) const { return out_[v].count(); }
    int in_degree(int v) const { return in_[v].count(); }

    int arc_count() const {
        int m = 0;
        for (const auto& s : out_) m += s.count();
        return m;
    }

    // Arcs in lexicographic (tail, head) order -- this is also the export
    // order for serialization, so round-trips are stable.
    std::vector<Arc> arcs() const {
        std::vector<Arc> out;
        out.reserve(arc_count());
        for (int u = 0; u < n_; ++u)
            out_[u].for_each([&](int v) { out.emplace_back(u, v); });
        return out;
    }

    VertexSet vertices() const { return VertexSet::full(n_); }

private:
    int n_ = 0;
    std::vector<VertexSet> out_;
    std::vector<VertexSet> in_;
};

// min over vertices of min(out-degree, in-degree); 0 for the empty graph
// by convention (nothing can be demanded of it).
inline int min_semi_degree(const Digraph& d) {
    int best = d.order() == 0 ? 0 : d.order();
    for (int v = 0; v < d.order(); ++v)
        best = std::min({best, d.out_degree(v), d.in_degree(v)});
    return best;
}

// Vertices joined to v by arcs in both directions.
inline VertexSet strong_neighbourhood(const Digraph& d, int v) {
    return d.out(v) & d.in(v);
}

// Number of arcs with tail in X and head in Y.  X and Y may overlap; an
// arc inside the overlap is counted once (it has one tail and one head).
inline int arcs_between(const Digraph& d, const VertexSet& x, const VertexSet& y) {
    int m = 0;
    x.for_each([&](int u) { m += d.out(u).count_and(y); });
    return m;
}

// Arcs with both ends in X.
inline int arcs_inside(const Digraph& d, const VertexSet& x) {
    return arcs_between(d, x, x);
}

// A directed path (or cycle) given by its vertex sequence.  For a cycle the
// closing arc verts.back() -> verts.front() is implied and not repeated in
// the sequence.
struct Path {
    std::vector<int> verts;
    bool is_cycle = false;

    int arc_length() const {
        if (verts.empty()) return 0;
        return int(verts.size()) - (is_cycle ? 0 : 1);
    }

    VertexSet vertex_set(int universe) const {
        VertexSet s(universe);
        for (int v : verts) s.insert(v);
        return s;
    }
};

// All consecutive arcs present and no repeated vertex.  Cycles additionally
// need the closing arc and at least two vertices (the digraph is loop-free).
inline bool path_valid_in(const Digraph& d, const Path& p) {
    if (p.verts.empty()) return false;
    VertexSet seen(d.order());
    for (int v : p.verts) {
        if (v < 0 || v >= d.order() || seen.contains(v)) return false;
        seen.insert(v);
    }
    for (std::size_t i = 0; i + 1 < p.verts.size(); ++i)
        if (!d.has_arc(p.verts[i], p.verts[i + 1])) return false;
    if (p.is_cycle) {
        if (p.verts.size() < 2) return false;
        if (!d.has_arc(p.verts.back(), p.verts.front())) return false;
    }
    return true;
}

struct InducedSubdigraph {
    Digraph graph;
    std::vector<int> to_host;    // new index -> host vertex
    std::vector<int> from_host;  // host vertex -> new index, -1 if absent
};

inline InducedSubdigraph induced_subdigraph(const Digraph& d, const VertexSet& keep) {
    InducedSubdigraph r;
    r.to_host = keep.to_vector();
    r.from_host.assign(d.order(), -1);
    for (int i = 0; i < int(r.to_host.size()); ++i) r.from_host[r.to_host[i]] = i;
    std::vector<Arc> arcs;
    for (int i = 0; i < int(r.to_host.size()); ++i) {
        VertexSet heads = d.out(r.to_host[i]) & keep;
        heads.for_each([&](int h) { arcs.emplace_back(i, r.from_host[h]); });
    }
    r.graph = Digraph(int(r.to_host.size()), arcs);
    return r;
}

}  // namespace hlink
