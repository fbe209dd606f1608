#include "hlink/digraph.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

#include "hlink/bitset.hpp"
#include "hlink/params.hpp"
#include "hlink/rng.hpp"

using namespace hlink;

TEST(VertexSet, InsertEraseCount) {
    VertexSet s(100);
    EXPECT_TRUE(s.empty());
    s.insert(0);
    s.insert(63);
    s.insert(64);
    s.insert(99);
    EXPECT_EQ(s.count(), 4);
    EXPECT_TRUE(s.contains(64));
    EXPECT_FALSE(s.contains(65));
    s.erase(64);
    EXPECT_EQ(s.count(), 3);
    EXPECT_FALSE(s.contains(64));
}

TEST(VertexSet, IterationOrder) {
    auto s = VertexSet::of(70, {5, 68, 0, 33});
    EXPECT_EQ(s.first(), 0);
    EXPECT_EQ(s.next_after(0), 5);
    EXPECT_EQ(s.next_after(5), 33);
    EXPECT_EQ(s.next_after(33), 68);
    EXPECT_EQ(s.next_after(68), -1);
    std::vector<int> got = s.to_vector();
    EXPECT_EQ(got, (std::vector<int>{0, 5, 33, 68}));
}

TEST(VertexSet, SetAlgebra) {
    auto a = VertexSet::of(10, {1, 2, 3});
    auto b = VertexSet::of(10, {3, 4});
    EXPECT_EQ((a & b).to_vector(), (std::vector<int>{3}));
    EXPECT_EQ((a | b).count(), 4);
    EXPECT_EQ((a - b).to_vector(), (std::vector<int>{1, 2}));
    EXPECT_TRUE(a.intersects(b));
    EXPECT_EQ(a.count_and(b), 1);
    EXPECT_FALSE(VertexSet::of(10, {7}).intersects(a));
}

TEST(VertexSet, ComplementRespectsUniverse) {
    auto s = VertexSet::of(67, {0, 66});
    auto c = s.complement();
    EXPECT_EQ(c.count(), 65);
    EXPECT_FALSE(c.contains(0));
    EXPECT_FALSE(c.contains(66));
    EXPECT_TRUE(c.contains(65));
    // Full-universe complement is empty: tail bits must not leak in.
    EXPECT_TRUE(VertexSet::full(67).complement().empty());
}

TEST(VertexSet, SubsetAndOrdering) {
    auto a = VertexSet::of(20, {1, 4});
    auto b = VertexSet::of(20, {1, 4, 9});
    EXPECT_TRUE(a.subset_of(b));
    EXPECT_FALSE(b.subset_of(a));
    EXPECT_TRUE(a.lex_less(b));
    EXPECT_TRUE(a == a);
    EXPECT_TRUE(a != b);
}

TEST(Digraph, BasicAccessors) {
    Digraph d(4, {{0, 1}, {1, 2}, {2, 0}, {0, 2}});
    EXPECT_EQ(d.order(), 4);
    EXPECT_EQ(d.arc_count(), 4);
    EXPECT_TRUE(d.has_arc(0, 1));
    EXPECT_FALSE(d.has_arc(1, 0));
    EXPECT_EQ(d.out_degree(0), 2);
    EXPECT_EQ(d.in_degree(2), 2);
    EXPECT_EQ(d.out_degree(3), 0);
    // arcs() comes back lexicographic regardless of construction order.
    Digraph e(3, {{2, 1}, {0, 2}, {0, 1}});
    auto arcs = e.arcs();
    EXPECT_EQ(arcs, (std::vector<Arc>{{0, 1}, {0, 2}, {2, 1}}));
}

TEST(Digraph, RejectsBadArcs) {
    EXPECT_THROW(Digraph(3, {{0, 3}}), std::invalid_argument);
    EXPECT_THROW(Digraph(3, {{-1, 0}}), std::invalid_argument);
    EXPECT_THROW(Digraph(3, {{1, 1}}), std::invalid_argument);
}

TEST(Digraph, DuplicateArcsCollapse) {
    Digraph d(2, {{0, 1}, {0, 1}});
    EXPECT_EQ(d.arc_count(), 1);
}

TEST(Digraph, MinSemiDegree) {
    // Complete digraph: every vertex has both degrees n-1.
    std::vector<Arc> arcs;
    for (int u = 0; u < 5; ++u)
        for (int v = 0; v < 5; ++v)
            if (u != v) arcs.emplace_back(u, v);
    EXPECT_EQ(min_semi_degree(Digraph(5, arcs)), 4);
    // A source vertex drags the minimum to zero through its in-degree.
    arcs.clear();
    arcs.emplace_back(0, 1);
    arcs.emplace_back(1, 0);
    arcs.emplace_back(2, 0);
    EXPECT_EQ(min_semi_degree(Digraph(3, arcs)), 0);
    EXPECT_EQ(min_semi_degree(Digraph(0, {})), 0);
}

TEST(Digraph, StrongNeighbourhoodAndArcCounts) {
    Digraph d(4, {{0, 1}, {1, 0}, {0, 2}, {3, 0}});
    auto s = strong_neighbourhood(d, 0);
    EXPECT_EQ(s.to_vector(), (std::vector<int>{1}));
    auto x = VertexSet::of(4, {0, 1});
    auto y = VertexSet::of(4, {2, 3});
    EXPECT_EQ(arcs_between(d, x, y), 1);  // 0->2
    EXPECT_EQ(arcs_between(d, y, x), 1);  // 3->0
    EXPECT_EQ(arcs_inside(d, x), 2);      // 0->1, 1->0
}

TEST(Digraph, InducedSubdigraph) {
    Digraph d(5, {{0, 2}, {2, 4}, {4, 0}, {1, 3}});
    auto sub = induced_subdigraph(d, VertexSet::of(5, {0, 2, 4}));
    EXPECT_EQ(sub.graph.order(), 3);
    EXPECT_EQ(sub.graph.arc_count(), 3);
    // Host vertex 4 sits at local index 2; arcs must survive translation.
    EXPECT_EQ(sub.from_host[4], 2);
    EXPECT_EQ(sub.to_host[2], 4);
    EXPECT_TRUE(sub.graph.has_arc(sub.from_host[2], sub.from_host[4]));
    EXPECT_FALSE(sub.graph.has_arc(sub.from_host[2], sub.from_host[0]));
}

TEST(PathStruct, ArcLengthAndValidity) {
    Digraph d(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    Path p{{0, 1, 2, 3}, false};
    EXPECT_EQ(p.arc_length(), 3);
    EXPECT_TRUE(path_valid_in(d, p));
    Path c{{0, 1, 2, 3}, true};
    EXPECT_EQ(c.arc_length(), 4);
    EXPECT_TRUE(path_valid_in(d, c));  // closing arc 3->0 present
    Path bad{{0, 2}, false};
    EXPECT_FALSE(path_valid_in(d, bad));
    Path rep{{0, 1, 0}, false};
    EXPECT_FALSE(path_valid_in(d, rep));
    EXPECT_EQ(c.vertex_set(4).count(), 4);
}

TEST(Rng, DeterministicAcrossInstances) {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
    Rng c(43);
    EXPECT_NE(Rng(42).next_u64(), c.next_u64());
}

TEST(Rng, ForkIndependence) {
    Rng base(7);
    Rng f1 = base.fork(1);
    Rng f2 = base.fork(2);
    EXPECT_NE(f1.next_u64(), f2.next_u64());
    // Forking must not disturb the parent stream.
    Rng fresh(7);
    fresh.fork(1);
    fresh.fork(2);
    EXPECT_EQ(Rng(7).next_u64(), fresh.next_u64());
}

TEST(Rng, BoundedDrawsInRange) {
    Rng r(99);
    for (int i = 0; i < 1000; ++i) {
        int v = r.next_int(7);
        EXPECT_GE(v, 0);
        EXPECT_LT(v, 7);
        double x = r.next_double();
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 1.0);
    }
    // Poisson with a tiny mean should mostly come out zero, never negative.
    int zeros = 0;
    for (int i = 0; i < 200; ++i) {
        int v = r.next_poisson(0.05);
        EXPECT_GE(v, 0);
        if (v == 0) zeros++;
    }
    EXPECT_GT(zeros, 150);
}

TEST(Params, ValidationCatchesNonsense) {
    PipelineParams p;
    EXPECT_NO_THROW(p.validate());
    p.gamma = 0.5;  // must stay below eps_prime
    p.eps_prime = 0.4;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    PipelineParams q;
    q.t_min = 0;
    EXPECT_THROW(q.validate(), std::invalid_argument);
    PipelineParams r;
    r.alpha = 1.5;
    EXPECT_THROW(r.validate(), std::invalid_argument);
}

TEST(Params, ThresholdComparatorsTolerate) {
    // 0.3 * 3 is not exactly 0.9 in floating point; the comparators absorb it.
    EXPECT_TRUE(leq_threshold(3, 0.3 * 3 * 10.0 / 3.0));
    EXPECT_TRUE(geq_threshold(9, 0.3 * 30));
    EXPECT_FALSE(leq_threshold(4, 3.5));
    EXPECT_FALSE(geq_threshold(3, 3.5));
}
