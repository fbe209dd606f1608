#include "hlink/generators.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

#include "hlink/exact.hpp"
#include "test_util.hpp"

using namespace hlink;

TEST(GenComplete, AllArcsPresent) {
    auto d = gen_complete(6);
    EXPECT_EQ(d.arc_count(), 30);
    EXPECT_EQ(min_semi_degree(d), 5);
}

TEST(GenRemark1, SourceBlocksInboundHamiltonicity) {
    auto g = gen_remark1(7);
    const Digraph& d = g.d;
    EXPECT_EQ(d.order(), 7);
    EXPECT_EQ(d.in_degree(g.x), 0);
    EXPECT_EQ(d.out_degree(g.x), 6);
    // Every vertex keeps out-degree >= n-2 even though the semi-degree dies.
    for (int v = 0; v < 7; ++v) EXPECT_GE(d.out_degree(v), 5);
    EXPECT_EQ(min_semi_degree(d), 0);
    // A spanning path out of x exists; none can end at x.
    EXPECT_TRUE(testutil::oracle_has_ham_path(d, g.x, -1));
    EXPECT_FALSE(testutil::oracle_has_ham_path(d, -1, g.x));
}

TEST(GenRemark2, SharedCliquePairGeometry) {
    auto g = gen_remark2(8, 1);
    const Digraph& d = g.instance.d;
    EXPECT_EQ(d.order(), 8);
    // Semi-degree lands exactly on n/2 + k - 1.
    EXPECT_EQ(min_semi_degree(d), 4);
    // Terminals: x1 = 0 and y1 = k + 0 = 1, both in the shared overlap.
    EXPECT_EQ(g.instance.f, (std::vector<int>{0, 1}));
    // The longest terminal-to-terminal path stays inside one clique.
    EXPECT_EQ(testutil::oracle_longest_path(d, 0, 1), 4);
    // Demanded lengths sum to a spanning total.
    long sum = 0;
    for (int len : g.instance.lengths) sum += len - 1;
    EXPECT_EQ(sum, d.order() - 2);
    EXPECT_TRUE(validate_instance(g.instance).ok());
}

TEST(GenRemark2, LargerOverlapAndCustomLengths) {
    auto g = gen_remark2(16, 2, {4, 10});
    EXPECT_EQ(min_semi_degree(g.instance.d), 9);
    EXPECT_EQ(g.instance.lengths, (std::vector<int>{4, 10}));
    EXPECT_TRUE(validate_instance(g.instance).ok());
    EXPECT_THROW(gen_remark2(9, 1), std::invalid_argument);   // odd order
    EXPECT_THROW(gen_remark2(8, 4), std::invalid_argument);   // overlap swallows a clique
    EXPECT_THROW(gen_remark2(16, 2, {3, 3, 3}), std::invalid_argument);
}

TEST(GenRemark3, JoinGlassAndBlocks) {
    auto d = gen_remark3(38, 5);
    EXPECT_EQ(d.order(), 38);
    EXPECT_EQ(min_semi_degree(d), 24);
    // Join vertices see everything both ways.
    EXPECT_TRUE(d.has_arc(0, 37));
    EXPECT_TRUE(d.has_arc(37, 0));
    // Distinct blocks never talk to each other directly.
    EXPECT_FALSE(d.has_arc(12, 25));
    EXPECT_FALSE(d.has_arc(25, 12));
    // Inside a block everything is there.
    EXPECT_TRUE(d.has_arc(12, 13));
    EXPECT_TRUE(d.has_arc(13, 12));
    EXPECT_THROW(gen_remark3(40, 5), std::invalid_argument);  // divisibility fails
    EXPECT_THROW(gen_remark3(38, 4), std::invalid_argument);  // k too small
}

TEST(GenRandomFloor, RespectsFloorAndSeed) {
    for (std::uint64_t seed : {1ull, 7ull, 99ull}) {
        auto d = gen_random_floor(14, 8, seed);
        EXPECT_GE(min_semi_degree(d), 8) << "seed " << seed;
    }
    auto a = gen_random_floor(12, 6, 5);
    auto b = gen_random_floor(12, 6, 5);
    EXPECT_EQ(a.arcs(), b.arcs());
    auto c = gen_random_floor(12, 6, 6);
    EXPECT_NE(a.arcs(), c.arcs());
    // Density is honoured before repair: sparse request, sparse graph.
    auto sparse = gen_random_floor(20, 2, 3, 0.05);
    auto dense = gen_random_floor(20, 2, 3, 0.9);
    EXPECT_LT(sparse.arc_count(), dense.arc_count());
}

TEST(GenDoubleCover, SymmetricArcs) {
    auto d = gen_double_cover(4, {{0, 1}, {1, 2}, {2, 3}});
    EXPECT_EQ(d.arc_count(), 6);
    EXPECT_TRUE(d.has_arc(0, 1));
    EXPECT_TRUE(d.has_arc(1, 0));
    EXPECT_FALSE(d.has_arc(0, 2));
}

TEST(GenRemark2, DefaultLengthsMatchOverlapBudget) {
    // k-1 short routes of length four, one long mop-up route.
    auto g = gen_remark2(20, 3);
    ASSERT_EQ(g.instance.lengths.size(), 3u);
    EXPECT_EQ(g.instance.lengths[0], 4);
    EXPECT_EQ(g.instance.lengths[1], 4);
    EXPECT_EQ(g.instance.lengths[2], 20 - 3 - 8);
    EXPECT_TRUE(validate_instance(g.instance).ok());
}
