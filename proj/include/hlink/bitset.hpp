#pragma once

// Fixed-universe vertex sets backed by 64-bit words.  Everything downstream
// (adjacency, searches, audits) leans on these being cheap to copy and
// cheap to intersect, so the interface stays deliberately small.

#include <cassert>
#include <cstdint>
#include <vector>

namespace hlink {

class VertexSet {
public:
    VertexSet() = default;

    explicit VertexSet(int universe) : n_(universe), w_((universe + 63) / 64, 0) {
        assert(universe >= 0);
    }

    static VertexSet full(int universe) {
        VertexSet s(universe);
        for (auto& w : s.w_) w = ~0ULL;
        s.trim();
        return s;
    }

    static VertexSet of(int universe, std::initializer_list<int> verts) {
        VertexSet s(universe);
        for (int v : verts) s.insert(v);
        return s;
    }

    // Half-open [lo, hi).
    static VertexSet range(int universe, int lo, int hi) {
        VertexSet s(universe);
        for (int v = lo; v < hi; ++v) s.insert(v);
        return s;
    }

    int universe() const { return n_; }

    bool contains(int v) const {
        assert(v >= 0 && v < n_);
        return (w_[v >> 6] >> (v & 63)) & 1ULL;
    }

    void insert(int v) {
        assert(v >= 0 && v < n_);
        w_[v >> 6] |= 1ULL << (v & 63);
    }

    void erase(int v) {
        assert(v >= 0 && v < n_);
        w_[v >> 6] &= ~(1ULL << (v & 63));
    }

    int count() const {
        int c = 0;
        for (auto w : w_) c += __builtin_popcountll(w);
        return c;
    }

    bool empty() const {
        for (auto w : w_)
            if (w) return false;
        return true;
    }

    // Smallest member, or -1 when empty.  Deterministic choice points all
    // over the library reduce to "take first()".
    int first() const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i]) return int(i * 64 + __builtin_ctzll(w_[i]));
        return -1;
    }

    // Smallest member strictly greater than v, or -1.
    int next_after(int v) const {
        int i = (v + 1) >> 6;
        if (v + 1 >= n_) return -1;
        std::uint64_t cur = w_[i] & (~0ULL << ((v + 1) & 63));
        while (true) {
            if (cur) return int(i * 64 + __builtin_ctzll(cur));
            if (++i >= int(w_.size())) return -1;
            cur = w_[i];
        }
    }

    VertexSet& operator&=(const VertexSet& o) {
        assert(n_ == o.n_);
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }

    VertexSet& operator|=(const VertexSet& o) {
        assert(n_ == o.n_);
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }

    // Set difference: keep members not in o.
    VertexSet& operator-=(const VertexSet& o) {
        assert(n_ == o.n_);
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
        return *this;
    }

    friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
    friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
    friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

    VertexSet complement() const {
        VertexSet s(n_);
        for (std::size_t i = 0; i < w_.size(); ++i) s.w_[i] = ~w_[i];
        s.trim();
        return s;
    }

    bool intersects(const VertexSet& o) const {
        assert(n_ == o.n_);
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }

    int count_and(const VertexSet& o) const {
        assert(n_ == o.n_);
        int c = 0;
        for (std::size_t i = 0; i < w_.size(); ++i)
            c += __builtin_popcountll(w_[i] & o.w_[i]);
        return c;
    }

    bool subset_of(const VertexSet& o) const {
        assert(n_ == o.n_);
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    bool operator==(const VertexSet& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const VertexSet& o) const { return !(*this == o); }

    // Numeric order on the bit pattern; used only as a deterministic tie-break.
    bool lex_less(const VertexSet& o) const {
        assert(n_ == o.n_);
        for (std::size_t i = w_.size(); i-- > 0;)
            if (w_[i] != o.w_[i]) return w_[i] < o.w_[i];
        return false;
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        out.reserve(count());
        for (int v = first(); v >= 0; v = next_after(v)) out.push_back(v);
        return out;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (int v = first(); v >= 0; v = next_after(v)) f(v);
    }

private:
    void trim() {
        if (n_ % 64 != 0 && !w_.empty()) w_.back() &= (1ULL << (n_ % 64)) - 1;
    }

    int n_ = 0;
    std::vector<std::uint64_t> w_;
};

}  // namespace hlink
