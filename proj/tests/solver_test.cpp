// End-to-end pipeline behaviour: honest statuses, the auto chain's strategy
// order, proof-backed infeasibility, and byte-stable reruns.

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "hlink/generators.hpp"
#include "hlink/solver.hpp"
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

bool trace_mentions(const RunReport& rep, const std::string& needle) {
    for (const auto& line : rep.trace)
        if (line.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST(Pipeline, MalformedInstanceExitsOne) {
    Instance inst = make_instance(gen_complete(6), {{0, 1}}, {0, 99}, {5});
    auto rep = run_pipeline(inst, "auto", PipelineParams{}, AnalysisParams{});
    EXPECT_EQ(rep.status, RunStatus::Malformed);
    EXPECT_EQ(rep.exit_code(), 1);
    EXPECT_FALSE(rep.reason.empty());
}

TEST(Pipeline, ArithmeticInfeasibilityExitsTwo) {
    // One demanded arc of length 3 on eight vertices: interiors cannot span.
    Instance inst = make_instance(gen_complete(8), {{0, 1}}, {0, 1}, {3});
    auto rep = run_pipeline(inst, "auto", PipelineParams{}, AnalysisParams{});
    EXPECT_EQ(rep.status, RunStatus::Infeasible);
    EXPECT_EQ(rep.exit_code(), 2);
    EXPECT_NE(rep.reason.find("interior slots"), std::string::npos) << rep.reason;
    EXPECT_EQ(rep.nodes, 0u);  // no search ever ran
}

TEST(Pipeline, SolvesCompleteHostInAutoMode) {
    Instance inst = make_instance(gen_complete(12), {{0, 1}, {2, 3}}, {0, 1, 2, 3},
                                  {5, 5});
    auto rep = run_pipeline(inst, "auto", PipelineParams{}, AnalysisParams{});
    ASSERT_EQ(rep.status, RunStatus::Solved) << rep.reason;
    EXPECT_EQ(rep.exit_code(), 0);
    EXPECT_FALSE(rep.method.empty());
    ASSERT_TRUE(rep.subdivision.has_value());
    EXPECT_TRUE(verify_subdivision(inst, *rep.subdivision).ok());
    EXPECT_TRUE(trace_mentions(rep, "ec: none"));
}

TEST(Pipeline, RoutesExtremalHostThroughCaseBuilder) {
    Digraph d = testutil::two_cliques(8, 8);
    Instance inst = make_instance(d, {{0, 1}, {2, 3}}, {0, 1, 8, 9}, {7, 7});
    auto rep = run_pipeline(inst, "auto", PipelineParams{}, AnalysisParams{});
    ASSERT_EQ(rep.status, RunStatus::Solved) << rep.reason;
    EXPECT_EQ(rep.method, "extremal:near-cliques");
    EXPECT_TRUE(trace_mentions(rep, "ec: witness found"));
    EXPECT_TRUE(verify_subdivision(inst, *rep.subdivision).ok());
}

TEST(Pipeline, ProvesInfeasibilityByExhaustiveFallback) {
    // The two-clique obstruction: demanded spanning route longer than the
    // host allows between its terminals.
    Instance inst = gen_remark2(8, 1).instance;
    auto rep = run_pipeline(inst, "auto", PipelineParams{}, AnalysisParams{});
    EXPECT_EQ(rep.status, RunStatus::Infeasible);
    EXPECT_EQ(rep.exit_code(), 2);
    EXPECT_TRUE(trace_mentions(rep, "search exhausted"));
    EXPECT_GT(rep.nodes, 0u);
}

TEST(Pipeline, GivesUpHonestlyBeyondExactCap) {
    // A bare directed cycle on 24 vertices defeats every construction
    // strategy and sits beyond complete search; the solution that exists is
    // not found, and the pipeline says so rather than guessing.
    std::vector<Arc> arcs;
    for (int v = 0; v < 24; ++v) arcs.emplace_back(v, (v + 1) % 24);
    Instance inst = make_instance(Digraph(24, arcs), {{0, 0}}, {0}, {24});
    auto rep = run_pipeline(inst, "auto", PipelineParams{}, AnalysisParams{});
    EXPECT_EQ(rep.status, RunStatus::GiveUp);
    EXPECT_EQ(rep.exit_code(), 3);
    EXPECT_NE(rep.reason.find("too large"), std::string::npos) << rep.reason;
    EXPECT_FALSE(rep.subdivision.has_value());
}

TEST(Pipeline, ExactModeRefusesOversizedHosts) {
    Instance inst = make_instance(gen_complete(20), {{0, 1}}, {0, 1}, {19});
    auto rep = run_pipeline(inst, "exact", PipelineParams{}, AnalysisParams{});
    EXPECT_EQ(rep.status, RunStatus::GiveUp);
    EXPECT_NE(rep.reason.find("exact cap"), std::string::npos) << rep.reason;
}

TEST(Pipeline, ExactModeSolvesAndProves) {
    Instance good = make_instance(gen_complete(8), {{0, 1}}, {0, 1}, {7});
    auto rep = run_pipeline(good, "exact", PipelineParams{}, AnalysisParams{});
    ASSERT_EQ(rep.status, RunStatus::Solved) << rep.reason;
    EXPECT_EQ(rep.method, "exact");
    EXPECT_TRUE(verify_subdivision(good, *rep.subdivision).ok());

    Instance bad = gen_remark2(8, 1).instance;
    auto rep2 = run_pipeline(bad, "exact", PipelineParams{}, AnalysisParams{});
    EXPECT_EQ(rep2.status, RunStatus::Infeasible);
}

TEST(Pipeline, AbsorbModeOnCompleteHost) {
    // Twelve vertices is the genuine floor for the family machinery here: a
    // ten-vertex complete host leaves the single family member unable to
    // cover every residual pair, and the pipeline refuses honestly.
    Instance inst = make_instance(gen_complete(12), {{0, 1}}, {0, 1}, {11});
    auto rep = run_pipeline(inst, "absorb", PipelineParams{}, AnalysisParams{});
    ASSERT_EQ(rep.status, RunStatus::Solved) << rep.reason;
    EXPECT_EQ(rep.method, "absorption");
    EXPECT_TRUE(verify_subdivision(inst, *rep.subdivision).ok());
}

TEST(Pipeline, ExtremalModeNeedsAWitness) {
    Instance inst = make_instance(gen_complete(10), {{0, 1}}, {0, 1}, {9});
    auto rep = run_pipeline(inst, "extremal", PipelineParams{}, AnalysisParams{});
    EXPECT_EQ(rep.status, RunStatus::GiveUp);
    EXPECT_NE(rep.reason.find("witness"), std::string::npos) << rep.reason;
}

TEST(Pipeline, UnknownModeIsMalformed) {
    Instance inst = make_instance(gen_complete(6), {{0, 1}}, {0, 1}, {5});
    auto rep = run_pipeline(inst, "sideways", PipelineParams{}, AnalysisParams{});
    EXPECT_EQ(rep.status, RunStatus::Malformed);
}

TEST(Pipeline, RerunsAreIdentical) {
    Digraph d = gen_random_floor(14, 8, 5, 0.9);
    Instance inst = make_instance(d, {{0, 1}}, {0, 1}, {13});
    auto a = run_pipeline(inst, "auto", PipelineParams{}, AnalysisParams{});
    auto b = run_pipeline(inst, "auto", PipelineParams{}, AnalysisParams{});
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.method, b.method);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(a.nodes, b.nodes);
    ASSERT_EQ(a.subdivision.has_value(), b.subdivision.has_value());
    if (a.subdivision) {
        ASSERT_EQ(a.subdivision->routes.size(), b.subdivision->routes.size());
        for (std::size_t i = 0; i < a.subdivision->routes.size(); ++i)
            EXPECT_EQ(a.subdivision->routes[i].verts, b.subdivision->routes[i].verts);
    }
}

TEST(Pipeline, TraceAccumulatesTheWholeChain) {
    // Extremal host with a demanded route the case builders cannot place:
    // the chain walks witness -> extremal failure -> absorption refusal ->
    // exact proof.
    Digraph d = testutil::two_cliques(8, 8);
    Instance inst = make_instance(d, {{0, 1}}, {0, 8}, {15});
    auto rep = run_pipeline(inst, "auto", PipelineParams{}, AnalysisParams{});
    EXPECT_EQ(rep.status, RunStatus::Infeasible);  // no cross arcs at all
    EXPECT_TRUE(trace_mentions(rep, "ec: witness found"));
    EXPECT_TRUE(trace_mentions(rep, "extremal"));
    EXPECT_TRUE(trace_mentions(rep, "absorption failed"));
    EXPECT_TRUE(trace_mentions(rep, "search exhausted"));
}
