// Structured route construction: the joint segment router, the alternating
// bipartite embedder with its Hall certificates, and the three case
// builders dispatched from an audited partition.

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "hlink/extremal.hpp"
#include "hlink/generators.hpp"
#include "hlink/linkage.hpp"
#include "hlink/structure.hpp"
#include "test_util.hpp"

using namespace hlink;

namespace {

Instance make_instance(Digraph d, std::vector<Arc> pattern_arcs, std::vector<int> f,
                       std::vector<int> lengths) {
    Instance inst;
    inst.d = std::move(d);
    inst.h.verts = 0;
    for (auto [u, v] : pattern_arcs)
        inst.h.verts = std::max({inst.h.verts, u + 1, v + 1});
    inst.h.arcs = std::move(pattern_arcs);
    inst.f = std::move(f);
    inst.lengths = std::move(lengths);
    return inst;
}

}  // namespace

// ---------------------------------------------------------------------------
// route_system_through_parts

TEST(Router, FillsTwoPoolsExactly) {
    Digraph d = gen_complete(8);
    // Route 0 -> 7 through pools {1,2,3} then {4,5,6}.
    std::vector<VertexSet> parts = {VertexSet::of(8, {1, 2, 3}),
                                    VertexSet::of(8, {4, 5, 6})};
    PlannedRoute pr;
    pr.from = 0;
    pr.to = 7;
    pr.slot_part = {0, 0, 0, 1, 1, 1};
    auto res = route_system_through_parts(d, parts, {pr});
    ASSERT_TRUE(res.ok);
    ASSERT_EQ(res.routes.size(), 1u);
    const Path& p = res.routes[0];
    EXPECT_TRUE(path_valid_in(d, p));
    EXPECT_EQ(p.verts.size(), 8u);
    EXPECT_EQ(p.verts.front(), 0);
    EXPECT_EQ(p.verts.back(), 7);
    // First three interiors from the first pool, rest from the second.
    for (int i = 1; i <= 3; ++i) EXPECT_TRUE(parts[0].contains(p.verts[i]));
    for (int i = 4; i <= 6; ++i) EXPECT_TRUE(parts[1].contains(p.verts[i]));
}

TEST(Router, RejectsCountMismatchWithoutSearching) {
    Digraph d = gen_complete(6);
    std::vector<VertexSet> parts = {VertexSet::of(6, {1, 2, 3})};
    PlannedRoute pr;
    pr.from = 0;
    pr.to = 5;
    pr.slot_part = {0};  // demands one vertex of a three-vertex pool
    auto res = route_system_through_parts(d, parts, {pr});
    EXPECT_FALSE(res.ok);
    EXPECT_EQ(res.nodes, 0);
}

TEST(Router, ForcedSingletonsFollowTheArcs) {
    // Path graph 0 -> 1 -> 2 -> 3 -> 4: only one order can work.
    Digraph d(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    std::vector<VertexSet> parts = {VertexSet::of(5, {1}), VertexSet::of(5, {2}),
                                    VertexSet::of(5, {3})};
    PlannedRoute pr;
    pr.from = 0;
    pr.to = 4;
    pr.slot_part = {0, 1, 2};
    auto res = route_system_through_parts(d, parts, {pr});
    ASSERT_TRUE(res.ok);
    EXPECT_EQ(res.routes[0].verts, (std::vector<int>{0, 1, 2, 3, 4}));

    pr.slot_part = {1, 0, 2};  // demands 2 before 1: no arc 0 -> 2
    auto bad = route_system_through_parts(d, parts, {pr});
    EXPECT_FALSE(bad.ok);
    EXPECT_FALSE(bad.budget_hit);
}

TEST(Router, ClosesCycles) {
    Digraph d = gen_complete(6);
    std::vector<VertexSet> parts = {VertexSet::of(6, {1, 2, 3, 4, 5})};
    PlannedRoute pr;
    pr.from = 0;
    pr.to = 0;
    pr.cycle = true;
    pr.slot_part = {0, 0, 0, 0, 0};
    auto res = route_system_through_parts(d, parts, {pr});
    ASSERT_TRUE(res.ok);
    EXPECT_TRUE(res.routes[0].is_cycle);
    EXPECT_EQ(res.routes[0].verts.size(), 6u);
    EXPECT_TRUE(path_valid_in(d, res.routes[0]));
    EXPECT_TRUE(d.has_arc(res.routes[0].verts.back(), 0));
}

TEST(Router, ReportsBudgetExhaustion) {
    Digraph d = gen_complete(8);
    std::vector<VertexSet> parts = {VertexSet::of(8, {1, 2, 3, 4, 5, 6})};
    PlannedRoute pr;
    pr.from = 0;
    pr.to = 7;
    pr.slot_part = std::vector<int>(6, 0);
    auto res = route_system_through_parts(d, parts, {pr}, /*node_budget=*/1);
    EXPECT_FALSE(res.ok);
    EXPECT_TRUE(res.budget_hit);
    // The same plan succeeds with room to work.
    auto good = route_system_through_parts(d, parts, {pr});
    EXPECT_TRUE(good.ok);
}

TEST(Router, TwoRoutesShareNothing) {
    Digraph d = gen_complete(10);
    std::vector<VertexSet> parts = {VertexSet::of(10, {2, 3, 4, 5, 6, 7})};
    PlannedRoute a, b;
    a.from = 0;
    a.to = 1;
    a.slot_part = {0, 0, 0};
    b.from = 8;
    b.to = 9;
    b.slot_part = {0, 0, 0};
    auto res = route_system_through_parts(d, parts, {a, b});
    ASSERT_TRUE(res.ok);
    VertexSet seen(10);
    for (const auto& p : res.routes)
        for (std::size_t i = 1; i + 1 < p.verts.size(); ++i) {
            EXPECT_FALSE(seen.contains(p.verts[i]));
            seen.insert(p.verts[i]);
        }
    EXPECT_EQ(seen.count(), 6);
}

// ---------------------------------------------------------------------------
// prop_embed

TEST(PropEmbed, AlternatingHamiltonianPath) {
    for (int a = 4; a <= 7; ++a) {
        Digraph d = testutil::bicomplete(a, a);
        VertexSet s1 = VertexSet::range(2 * a, 0, a), s2 = VertexSet::range(2 * a, a, 2 * a);
        auto rep = prop_embed(d, s1, s2, {{0, a, 2 * a - 1}});
        ASSERT_TRUE(rep.ok) << "a=" << a << " reason=" << rep.reason;
        const Path& p = rep.routes[0];
        ASSERT_EQ(int(p.verts.size()), 2 * a);
        EXPECT_TRUE(path_valid_in(d, p));
        // Strict alternation, all vertices used once.
        std::set<int> used;
        for (std::size_t i = 0; i < p.verts.size(); ++i) {
            used.insert(p.verts[i]);
            if (i > 0) EXPECT_NE(s1.contains(p.verts[i]), s1.contains(p.verts[i - 1]));
        }
        EXPECT_EQ(int(used.size()), 2 * a);
    }
}

TEST(PropEmbed, TwoRoutesConsumeBothSides) {
    Digraph d = testutil::bicomplete(6, 6);
    VertexSet s1 = VertexSet::range(12, 0, 6), s2 = VertexSet::range(12, 6, 12);
    auto rep = prop_embed(d, s1, s2, {{0, 6, 5}, {1, 7, 5}});
    ASSERT_TRUE(rep.ok) << rep.reason;
    VertexSet used(12);
    for (const auto& p : rep.routes) {
        EXPECT_TRUE(path_valid_in(d, p));
        for (int v : p.verts) used.insert(v);
    }
    EXPECT_EQ(used.count(), 12);
}

TEST(PropEmbed, RejectsParityMismatch) {
    Digraph d = testutil::bicomplete(4, 4);
    VertexSet s1 = VertexSet::range(8, 0, 4), s2 = VertexSet::range(8, 4, 8);
    // Crossing route of even length can never alternate cleanly.
    auto rep = prop_embed(d, s1, s2, {{0, 4, 6}});
    EXPECT_FALSE(rep.ok);
    EXPECT_EQ(rep.reason, "parity");
}

TEST(PropEmbed, RejectsSideTotalMismatch) {
    Digraph d = testutil::bicomplete(4, 4);
    VertexSet s1 = VertexSet::range(8, 0, 4), s2 = VertexSet::range(8, 4, 8);
    // Length 5 leaves vertices uncovered.
    auto rep = prop_embed(d, s1, s2, {{0, 4, 5}});
    EXPECT_FALSE(rep.ok);
    EXPECT_EQ(rep.reason, "side-totals");
}

TEST(PropEmbed, HallCertificateOnStarvedStart) {
    // Vertex 0 keeps only its arc to the target 4; its first-interior slot
    // has no candidates at all.
    std::vector<Arc> arcs;
    for (int u = 0; u < 4; ++u)
        for (int v = 4; v < 8; ++v) {
            if (u == 0 && v != 4) {
                arcs.emplace_back(v, u);  // drop 0 -> v, keep the reverse
                continue;
            }
            arcs.emplace_back(u, v);
            arcs.emplace_back(v, u);
        }
    Digraph d(8, arcs);
    VertexSet s1 = VertexSet::range(8, 0, 4), s2 = VertexSet::range(8, 4, 8);
    auto rep = prop_embed(d, s1, s2, {{0, 4, 7}});
    ASSERT_FALSE(rep.ok);
    ASSERT_EQ(rep.reason, "hall");
    ASSERT_EQ(rep.hall_slots.size(), 1u);
    EXPECT_EQ(rep.hall_slots[0], (std::pair<int, int>{0, 1}));
    EXPECT_TRUE(rep.hall_candidates.empty());
}

TEST(PropEmbed, HallCertificateOnSharedBottleneck) {
    // Both route starts can only step to vertex 7: two anchored slots, one
    // candidate.
    std::vector<Arc> arcs;
    for (int u = 0; u < 5; ++u)
        for (int v = 5; v < 10; ++v) {
            bool starved = (u <= 1 && v >= 8);
            if (!starved) arcs.emplace_back(u, v);
            arcs.emplace_back(v, u);
        }
    Digraph d(10, arcs);
    VertexSet s1 = VertexSet::range(10, 0, 5), s2 = VertexSet::range(10, 5, 10);
    auto rep = prop_embed(d, s1, s2, {{0, 5, 3}, {1, 6, 5}});
    ASSERT_FALSE(rep.ok);
    ASSERT_EQ(rep.reason, "hall");
    std::set<std::pair<int, int>> slots(rep.hall_slots.begin(), rep.hall_slots.end());
    EXPECT_TRUE(slots.count({0, 1}));
    EXPECT_TRUE(slots.count({1, 1}));
    EXPECT_EQ(rep.hall_candidates, (std::vector<int>{7}));
}

TEST(PropEmbed, DeterministicAcrossCalls) {
    Digraph d = testutil::bicomplete(6, 6);
    VertexSet s1 = VertexSet::range(12, 0, 6), s2 = VertexSet::range(12, 6, 12);
    auto a = prop_embed(d, s1, s2, {{0, 6, 5}, {1, 7, 5}});
    auto b = prop_embed(d, s1, s2, {{0, 6, 5}, {1, 7, 5}});
    ASSERT_TRUE(a.ok);
    ASSERT_TRUE(b.ok);
    ASSERT_EQ(a.routes.size(), b.routes.size());
    for (std::size_t i = 0; i < a.routes.size(); ++i)
        EXPECT_EQ(a.routes[i].verts, b.routes[i].verts);
}

// ---------------------------------------------------------------------------
// Near-clique pair builder

TEST(CaseNearCliques, RoutesStayInsideTheirCliques) {
    Digraph d = testutil::two_cliques(8, 8);
    AnalysisParams ap;
    ap.eps_prime = 0.1;
    auto ec = detect_ec(d, ap.eps_prime, /*exact=*/true, ap);
    ASSERT_TRUE(ec.found);
    auto part = classify_ec1(d, *ec.witness, ap);
    ASSERT_EQ(part.overlap, OverlapCase::Tiny);

    Instance inst = make_instance(d, {{0, 1}, {2, 3}}, {0, 1, 8, 9}, {7, 7});
    PipelineParams pp;
    auto out = solve_extremal(inst, part, pp);
    ASSERT_TRUE(out.ok) << out.reason;
    EXPECT_EQ(out.case_name, "near-cliques");
    EXPECT_TRUE(verify_subdivision(inst, *out.subdivision).ok());
    // Each route sticks to its clique.
    for (int v : out.subdivision->routes[0].verts) EXPECT_LT(v, 8);
    for (int v : out.subdivision->routes[1].verts) EXPECT_GE(v, 8);
}

TEST(CaseNearCliques, CrossingRouteUsesTheOnlyBridge) {
    std::vector<Arc> arcs = testutil::two_cliques(8, 8).arcs();
    arcs.emplace_back(7, 8);   // lone bridge A -> B
    arcs.emplace_back(15, 0);  // return arc, unused by the path below
    Digraph d(16, arcs);

    ECWitness wit{VertexSet::range(16, 8, 16), VertexSet::range(16, 0, 8), 0};
    AnalysisParams ap;
    auto part = classify_ec1(d, wit, ap);
    ASSERT_EQ(part.overlap, OverlapCase::Tiny);

    Instance inst = make_instance(d, {{0, 1}}, {0, 15}, {15});
    PipelineParams pp;
    auto out = solve_extremal(inst, part, pp);
    ASSERT_TRUE(out.ok) << out.reason;
    EXPECT_TRUE(verify_subdivision(inst, *out.subdivision).ok());
    // The bridge arc must appear: 7 immediately followed by 8.
    const auto& vs = out.subdivision->routes[0].verts;
    auto it = std::find(vs.begin(), vs.end(), 7);
    ASSERT_NE(it, vs.end());
    ASSERT_NE(it + 1, vs.end());
    EXPECT_EQ(*(it + 1), 8);
}

TEST(CaseNearCliques, HonestFailureWithoutBridges) {
    Digraph d = testutil::two_cliques(8, 8);
    ECWitness wit{VertexSet::range(16, 8, 16), VertexSet::range(16, 0, 8), 0};
    AnalysisParams ap;
    auto part = classify_ec1(d, wit, ap);

    Instance inst = make_instance(d, {{0, 1}}, {0, 8}, {15});
    PipelineParams pp;
    auto out = solve_extremal(inst, part, pp);
    EXPECT_FALSE(out.ok);
    EXPECT_FALSE(out.reason.empty());
}

// ---------------------------------------------------------------------------
// Bipartite-like builder

TEST(CaseBipartite, BalancedHostGoesThroughTheEmbedder) {
    Digraph d = testutil::bicomplete(8, 8);
    ECWitness wit{VertexSet::range(16, 0, 8), VertexSet::range(16, 0, 8), 0};
    AnalysisParams ap;
    auto part = classify_ec1(d, wit, ap);
    ASSERT_EQ(part.overlap, OverlapCase::Huge);

    Instance inst = make_instance(d, {{0, 1}}, {0, 8}, {15});
    PipelineParams pp;
    auto out = solve_extremal(inst, part, pp);
    ASSERT_TRUE(out.ok) << out.reason;
    EXPECT_EQ(out.case_name, "bipartite-like");
    EXPECT_TRUE(verify_subdivision(inst, *out.subdivision).ok());
}

TEST(CaseBipartite, GadgetArcAbsorbsTheImbalance) {
    // Six against eight, one route between two big-side terminals: the two
    // spare big-side vertices ride a dedicated internal arc.
    std::vector<Arc> arcs = testutil::bicomplete(6, 8).arcs();
    arcs.emplace_back(8, 9);  // the gadget
    Digraph d(14, arcs);
    ECWitness wit{VertexSet::range(14, 0, 6), VertexSet::range(14, 0, 6), 0};
    AnalysisParams ap;
    auto part = classify_ec1(d, wit, ap);
    ASSERT_EQ(part.overlap, OverlapCase::Huge);

    Instance inst = make_instance(d, {{0, 1}}, {6, 7}, {13});
    PipelineParams pp;
    auto out = solve_extremal(inst, part, pp);
    ASSERT_TRUE(out.ok) << out.reason;
    EXPECT_TRUE(verify_subdivision(inst, *out.subdivision).ok());
    // 8 and 9 must be consecutive: the only way to sit two big-side
    // vertices next to each other.
    const auto& vs = out.subdivision->routes[0].verts;
    auto it = std::find(vs.begin(), vs.end(), 8);
    ASSERT_NE(it, vs.end());
    ASSERT_NE(it + 1, vs.end());
    EXPECT_EQ(*(it + 1), 9);
}

TEST(CaseBipartite, HonestFailureWhenGadgetsMissing) {
    Digraph d = testutil::bicomplete(6, 9);
    ECWitness wit{VertexSet::range(15, 0, 6), VertexSet::range(15, 0, 6), 0};
    AnalysisParams ap;
    auto part = classify_ec1(d, wit, ap);
    ASSERT_EQ(part.overlap, OverlapCase::Huge);

    Instance inst = make_instance(d, {{0, 1}}, {6, 7}, {14});
    PipelineParams pp;
    auto out = solve_extremal(inst, part, pp);
    EXPECT_FALSE(out.ok);
    EXPECT_NE(out.reason.find("not enough disjoint arcs"), std::string::npos)
        << out.reason;
}

// ---------------------------------------------------------------------------
// Ring builder

namespace {

// Witness chosen so the audited parts land on the blow-up's blocks (up to
// rotation): U1 = second and third block, U2 = first and second.
EC1Partition ring_partition(const Digraph& d, int s1, int s2, int s3) {
    const int n = d.order();
    ECWitness wit{VertexSet::range(n, s1, s1 + s2 + s3),
                  VertexSet::range(n, 0, s1 + s2), 0};
    AnalysisParams ap;
    return classify_ec1(d, wit, ap);
}

}  // namespace

TEST(CaseRing, LoopLapsTheRing) {
    Digraph d = testutil::ring_blowup(10, 10, 10, 10);
    auto part = ring_partition(d, 10, 10, 10);
    ASSERT_EQ(part.overlap, OverlapCase::Middle);
    ASSERT_TRUE(part.all_pass) << part.failed_rule;

    Instance inst = make_instance(d, {{0, 0}}, {0}, {40});
    PipelineParams pp;
    auto out = solve_extremal(inst, part, pp);
    ASSERT_TRUE(out.ok) << out.reason;
    EXPECT_EQ(out.case_name, "ring");
    EXPECT_TRUE(out.subdivision->routes[0].is_cycle);
    EXPECT_TRUE(verify_subdivision(inst, *out.subdivision).ok());
}

TEST(CaseRing, PathLapsTheRing) {
    Digraph d = testutil::ring_blowup(10, 10, 10, 10);
    auto part = ring_partition(d, 10, 10, 10);
    Instance inst = make_instance(d, {{0, 1}}, {0, 1}, {39});
    PipelineParams pp;
    auto out = solve_extremal(inst, part, pp);
    ASSERT_TRUE(out.ok) << out.reason;
    EXPECT_TRUE(verify_subdivision(inst, *out.subdivision).ok());
}

TEST(CaseRing, HonestFailureOnImbalance) {
    // Second block oversized: three of its vertices cannot ride one lap.
    Digraph d = testutil::ring_blowup(10, 12, 10, 10);
    auto part = ring_partition(d, 10, 12, 10);
    ASSERT_EQ(part.overlap, OverlapCase::Middle);
    Instance inst = make_instance(d, {{0, 0}}, {0}, {42});
    PipelineParams pp;
    auto out = solve_extremal(inst, part, pp);
    EXPECT_FALSE(out.ok);
    EXPECT_NE(out.reason.find("imbalance"), std::string::npos) << out.reason;
}

TEST(CaseRing, RefusesMultipleRoutes) {
    Digraph d = testutil::ring_blowup(10, 10, 10, 10);
    auto part = ring_partition(d, 10, 10, 10);
    Instance inst = make_instance(d, {{0, 1}, {2, 3}}, {0, 1, 20, 21}, {19, 19});
    PipelineParams pp;
    auto out = solve_extremal(inst, part, pp);
    EXPECT_FALSE(out.ok);
    EXPECT_NE(out.reason.find("one route"), std::string::npos) << out.reason;
}

// ---------------------------------------------------------------------------
// Dispatcher plumbing

TEST(SolveExtremal, TraceRecordsThePlan) {
    Digraph d = testutil::two_cliques(8, 8);
    ECWitness wit{VertexSet::range(16, 8, 16), VertexSet::range(16, 0, 8), 0};
    AnalysisParams ap;
    auto part = classify_ec1(d, wit, ap);
    Instance inst = make_instance(d, {{0, 1}, {2, 3}}, {0, 1, 8, 9}, {7, 7});
    PipelineParams pp;
    auto out = solve_extremal(inst, part, pp);
    ASSERT_TRUE(out.ok) << out.reason;
    EXPECT_FALSE(out.plan.empty());
    bool has_sides = false, has_router = false;
    for (const auto& line : out.plan) {
        if (line.find("sides settled") != std::string::npos) has_sides = true;
        if (line.find("router nodes") != std::string::npos) has_router = true;
    }
    EXPECT_TRUE(has_sides);
    EXPECT_TRUE(has_router);
}
