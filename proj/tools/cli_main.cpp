// Command-line front end.  Five subcommands share one binary:
//
//   gen      write host digraphs from the built-in families
//   solve    run the route-construction pipeline on an instance file
//   verify   referee a claimed set of routes against its instance
//   analyze  structure report: near-partition witness, four-part split, expansion
//   bench    grid runs over (order, seed), one CSV row per cell
//
// Exit codes are uniform: 0 verified success, 1 malformed input or arguments,
// 2 a proven negative (no route system exists, or the routes handed to
// `verify` are refuted), 3 gave up without settling the question.  Nothing
// exits 0 without a verifier pass.
//
// Every artifact is a deterministic function of the arguments: randomness
// flows from --seed only, reports avoid wall-clock fields, and --budget-secs
// is converted to a node budget at a fixed rate (one million nodes per
// second) rather than racing a timer.  Re-running a command reproduces its
// output byte for byte.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "hlink/digraph.hpp"
#include "hlink/generators.hpp"
#include "hlink/linkage.hpp"
#include "hlink/params.hpp"
#include "hlink/serialize.hpp"
#include "hlink/solver.hpp"
#include "hlink/structure.hpp"

namespace {

using hlink::AnalysisParams;
using hlink::Digraph;
using hlink::Instance;
using hlink::Json;
using hlink::PipelineParams;
using hlink::RunReport;
using hlink::RunStatus;
using hlink::Subdivision;

// ---------------------------------------------------------------- plumbing

void emit_json(const std::string& path, const Json& j) {
    if (path.empty())
        std::fputs((j.dump(2) + "\n").c_str(), stdout);
    else
        hlink::save_json_file(path, j);
}

void emit_text(const std::string& path, const std::string& text) {
    if (path.empty())
        std::fputs(text.c_str(), stdout);
    else
        hlink::save_text_file(path, text);
}

const char* status_name(RunStatus s) {
    switch (s) {
        case RunStatus::Solved: return "solved";
        case RunStatus::Malformed: return "malformed";
        case RunStatus::Infeasible: return "infeasible";
        case RunStatus::GiveUp: return "give-up";
    }
    return "give-up";
}

// Reports embed the full resolved parameter set so a run can be reproduced
// from its own output.
Json params_json(const PipelineParams& pp, const AnalysisParams& ap) {
    Json p;
    p["pipeline"]["gamma"] = pp.gamma;
    p["pipeline"]["eps_prime"] = pp.eps_prime;
    p["pipeline"]["alpha"] = pp.alpha;
    p["pipeline"]["beta"] = pp.beta;
    p["pipeline"]["t_min"] = pp.t_min;
    p["pipeline"]["retries"] = pp.retries;
    p["pipeline"]["seed"] = pp.seed;
    p["pipeline"]["node_budget"] = pp.node_budget;
    p["pipeline"]["exact_cap"] = pp.exact_cap;
    p["pipeline"]["ham_cap"] = pp.ham_cap;
    p["analysis"]["eps_prime"] = ap.eps_prime;
    p["analysis"]["eps1"] = ap.eps1;
    p["analysis"]["eps"] = ap.eps;
    p["analysis"]["nu"] = ap.nu;
    p["analysis"]["tau"] = ap.tau;
    p["analysis"]["ec_exact_cap"] = ap.ec_exact_cap;
    p["analysis"]["expander_exact_cap"] = ap.expander_exact_cap;
    p["analysis"]["samples"] = ap.samples;
    p["analysis"]["seed"] = ap.seed;
    return p;
}

// Host digraph with the accepted routes overlaid: each route gets its own
// colour and fat arrows, arcs off every route stay thin and grey.
std::string routes_dot(const Digraph& d, const Subdivision& sub) {
    static const char* palette[] = {"crimson",    "royalblue", "forestgreen",
                                    "darkorange", "purple",    "saddlebrown",
                                    "deeppink",   "teal"};
    constexpr int kColours = int(sizeof(palette) / sizeof(palette[0]));
    std::map<std::pair<int, int>, int> owner;
    for (std::size_t i = 0; i < sub.routes.size(); ++i) {
        const auto& p = sub.routes[i];
        for (std::size_t j = 0; j + 1 < p.verts.size(); ++j)
            owner[{p.verts[j], p.verts[j + 1]}] = int(i);
        if (p.is_cycle && p.verts.size() > 1)
            owner[{p.verts.back(), p.verts.front()}] = int(i);
    }
    std::ostringstream out;
    out << "digraph D {\n";
    for (int v = 0; v < d.order(); ++v) out << "  " << v << ";\n";
    for (auto [u, v] : d.arcs()) {
        auto it = owner.find({u, v});
        if (it == owner.end())
            out << "  " << u << " -> " << v << " [color=grey80];\n";
        else
            out << "  " << u << " -> " << v << " [color=" << palette[it->second % kColours]
                << ", penwidth=2.0, label=" << it->second << "];\n";
    }
    out << "}\n";
    return out.str();
}

// --------------------------------------------------------- shared options

// The two parameter bags plus the CLI-only knobs.  eps-prime and exact-cap
// exist in both bags; one flag feeds both.  Seeds repeat: `solve` retries
// the pipeline once per seed, the other commands use the first.
struct Knobs {
    PipelineParams pp;
    AnalysisParams ap;
    std::vector<std::uint64_t> seeds;
    double eps_prime = 0.2;
    int exact_cap = 16;
    double budget_secs = 0.0;
    CLI::Option* eps_prime_opt = nullptr;
    CLI::Option* exact_cap_opt = nullptr;
    CLI::Option* alpha_opt = nullptr;
    CLI::Option* beta_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", seeds, "seed(s) feeding all randomized stages (repeatable)");
        cmd->add_option("--gamma", pp.gamma, "absorber family density target");
        eps_prime_opt =
            cmd->add_option("--eps-prime", eps_prime, "near-partition slack for the stability test");
        cmd->add_option("--eps1", ap.eps1, "overlap split between the partition cases");
        cmd->add_option("--eps", ap.eps, "audit slack and exceptional-degree threshold");
        cmd->add_option("--nu", ap.nu, "robust-neighbourhood margin");
        cmd->add_option("--tau", ap.tau, "size window trimmed from the expansion scan");
        alpha_opt = cmd->add_option("--alpha", pp.alpha, "budget for short demanded lengths");
        beta_opt = cmd->add_option("--beta", pp.beta, "a length below beta*n counts as short");
        cmd->add_option("--budget-nodes", pp.node_budget, "backtracking node cap per search");
        cmd->add_option("--budget-secs", budget_secs,
                        "work cap in seconds, charged at 1e6 nodes/sec for determinism");
        exact_cap_opt = cmd->add_option("--exact-cap", exact_cap,
                                        "largest order the exhaustive engines accept");
        cmd->add_option("--samples", ap.samples, "subset draws in sampled analysis mode");
    }

    // Post-parse fanout; throws std::invalid_argument on out-of-range values.
    void resolve() {
        if (seeds.empty()) seeds.push_back(1);
        pp.seed = ap.seed = seeds.front();
        if (eps_prime_opt->count()) pp.eps_prime = ap.eps_prime = eps_prime;
        if (exact_cap_opt->count()) {
            pp.exact_cap = exact_cap;
            ap.ec_exact_cap = exact_cap;
            ap.expander_exact_cap = exact_cap;
        }
        if (budget_secs > 0.0) {
            auto cap = std::uint64_t(budget_secs * 1e6);
            pp.node_budget = std::min(pp.node_budget, std::max<std::uint64_t>(cap, 1));
        }
        pp.validate();
    }
};

// ------------------------------------------------------------------- gen

struct GenOpts {
    std::string family;
    int n = 0;
    int k = 1;
    int floor = -1;
    double density = 0.5;
    std::vector<int> lengths;
    std::vector<std::uint64_t> seeds;
    std::string output, instance_out, dot;
};

int run_gen(const GenOpts& o) {
    const std::uint64_t seed = o.seeds.empty() ? 1 : o.seeds.front();
    Digraph d;
    std::optional<Instance> implied;

    if (o.family == "complete") {
        d = hlink::gen_complete(o.n);
    } else if (o.family == "remark1") {
        auto g = hlink::gen_remark1(o.n);
        d = g.d;
        std::fprintf(stderr, "gen: distinguished source is vertex %d\n", g.x);
    } else if (o.family == "remark2") {
        auto g = hlink::gen_remark2(o.n, o.k, o.lengths);
        d = g.d;
        implied = g.instance;
    } else if (o.family == "remark3") {
        d = hlink::gen_remark3(o.n, o.k);
    } else if (o.family == "random-floor") {
        const int floor = o.floor >= 0 ? o.floor : o.n / 2;
        d = hlink::gen_random_floor(o.n, floor, seed, o.density);
    } else {
        std::fprintf(stderr,
                     "gen: unknown family \"%s\" (choose complete, remark1, remark2, "
                     "remark3, random-floor)\n",
                     o.family.c_str());
        return 1;
    }

    if (!o.instance_out.empty()) {
        if (!implied) {
            std::fprintf(stderr, "gen: family \"%s\" does not imply terminals; no instance to write\n",
                         o.family.c_str());
            return 1;
        }
        hlink::save_json_file(o.instance_out, hlink::instance_to_json(*implied));
    }
    if (!o.dot.empty()) hlink::save_text_file(o.dot, hlink::digraph_to_dot(d));
    emit_json(o.output, hlink::digraph_to_json(d));
    return 0;
}

// ----------------------------------------------------------------- solve

struct SolveOpts {
    std::string input, output, routes_out, dot;
    std::string mode = "auto";
    Knobs knobs;
};

int run_solve(SolveOpts& o) {
    Instance inst = hlink::instance_from_json(hlink::load_json_file(o.input));
    o.knobs.resolve();
    PipelineParams pp = o.knobs.pp;
    AnalysisParams ap = o.knobs.ap;

    // The instance file carries its own (alpha, beta); explicit flags beat
    // the file, otherwise the file is authoritative.
    if (o.knobs.alpha_opt->count()) inst.alpha = pp.alpha;
    else pp.alpha = inst.alpha;
    if (o.knobs.beta_opt->count()) inst.beta = pp.beta;
    else pp.beta = inst.beta;

    // One pipeline run per seed until something terminal: Solved is final,
    // and so are Malformed and Infeasible (they are proofs, not bad luck).
    RunReport rep;
    std::uint64_t used_seed = o.knobs.seeds.front();
    Json attempts = Json::array();
    for (std::uint64_t seed : o.knobs.seeds) {
        pp.seed = ap.seed = seed;
        used_seed = seed;
        rep = hlink::run_pipeline(inst, o.mode, pp, ap);
        attempts.push_back({{"seed", seed}, {"status", status_name(rep.status)}});
        if (rep.status != RunStatus::GiveUp) break;
    }
    pp.seed = ap.seed = used_seed;

    Json rj;
    rj["command"] = "solve";
    rj["input"] = o.input;
    rj["mode"] = o.mode;
    rj["status"] = status_name(rep.status);
    rj["exit_code"] = rep.exit_code();
    rj["method"] = rep.method;
    rj["reason"] = rep.reason;
    rj["seed"] = used_seed;
    if (attempts.size() > 1) rj["attempts"] = attempts;
    rj["search_nodes"] = rep.nodes;
    rj["restarts"] = rep.retries;
    rj["params"] = params_json(pp, ap);
    rj["trace"] = rep.trace;
    if (rep.subdivision) rj["subdivision"] = hlink::subdivision_to_json(*rep.subdivision);

    if (!o.routes_out.empty() && rep.subdivision)
        hlink::save_json_file(o.routes_out, hlink::subdivision_to_json(*rep.subdivision));
    if (!o.dot.empty())
        hlink::save_text_file(o.dot, rep.subdivision ? routes_dot(inst.d, *rep.subdivision)
                                                     : hlink::digraph_to_dot(inst.d));
    emit_json(o.output, rj);
    return rep.exit_code();
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
    std::string input, routes, output;
};

int run_verify(const VerifyOpts& o) {
    Instance inst = hlink::instance_from_json(hlink::load_json_file(o.input));
    auto vr = hlink::validate_instance(inst);
    if (!vr.well_formed()) {
        std::fprintf(stderr, "verify: malformed instance: %s\n", vr.structural.front().c_str());
        return 1;
    }
    Subdivision sub = hlink::subdivision_from_json(hlink::load_json_file(o.routes));
    auto rep = hlink::verify_subdivision(inst, sub);

    Json rj;
    rj["command"] = "verify";
    rj["input"] = o.input;
    rj["routes"] = o.routes;
    rj["ok"] = rep.ok();
    rj["violations"] = Json::array();
    for (const auto& v : rep.violations)
        rj["violations"].push_back({{"rule", v.rule}, {"routes", v.routes}, {"detail", v.detail}});
    emit_json(o.output, rj);
    // A failed check is a refutation of the claimed routes, not a give-up.
    return rep.ok() ? 0 : 2;
}

// --------------------------------------------------------------- analyze

struct AnalyzeOpts {
    std::string input, output, dot;
    bool force_exact = false;
    Knobs knobs;
};

int run_analyze(AnalyzeOpts& o) {
    Digraph d = hlink::digraph_from_json(hlink::load_json_file(o.input));
    o.knobs.resolve();
    const AnalysisParams& ap = o.knobs.ap;
    const int n = d.order();
    bool caveat = false;

    // Exact scans are capped; --exact past the cap degrades to sampling
    // with a warning rather than an error, and the report says so.
    bool ec_exact = o.force_exact || n <= ap.ec_exact_cap;
    if (ec_exact && n > ap.ec_exact_cap) {
        std::fprintf(stderr,
                     "analyze: exact witness scan is capped at %d vertices (host has %d); "
                     "falling back to sampled mode\n",
                     ap.ec_exact_cap, n);
        ec_exact = false;
        caveat = true;
    }
    auto ec = hlink::detect_ec(d, ap.eps_prime, ec_exact, ap);
    if (!ec.found && !ec.certified) caveat = true;

    bool ex_exact = o.force_exact || n <= ap.expander_exact_cap;
    if (ex_exact && n > ap.expander_exact_cap) {
        std::fprintf(stderr,
                     "analyze: exact expansion scan is capped at %d vertices (host has %d); "
                     "falling back to sampled mode\n",
                     ap.expander_exact_cap, n);
        ex_exact = false;
        caveat = true;
    }
    auto ex = hlink::check_robust_outexpander(d, ap.nu, ap.tau, ex_exact, ap);
    if (!ex.caveat.empty()) caveat = true;

    Json rj;
    rj["command"] = "analyze";
    rj["input"] = o.input;
    rj["n"] = n;
    rj["arc_count"] = d.arc_count();
    rj["min_semi_degree"] = hlink::min_semi_degree(d);
    rj["caveat"] = caveat;
    rj["params"] = params_json(o.knobs.pp, ap);

    Json ecj;
    ecj["found"] = ec.found;
    ecj["certified"] = ec.certified;
    ecj["mode"] = ec_exact ? "exact" : "sampled";
    ecj["note"] = ec.note;
    if (ec.witness) {
        ecj["witness"]["u1"] = ec.witness->u1.to_vector();
        ecj["witness"]["u2"] = ec.witness->u2.to_vector();
        ecj["witness"]["crossing"] = ec.witness->crossing;
    }
    rj["ec"] = ecj;

    if (ec.found && ec.witness) {
        auto part = hlink::classify_ec1(d, *ec.witness, ap);
        Json pj;
        pj["case"] = part.overlap == hlink::OverlapCase::Tiny   ? "tiny-overlap"
                     : part.overlap == hlink::OverlapCase::Huge ? "huge-overlap"
                                                                : "middle-overlap";
        for (int i = 0; i < 4; ++i) {
            Json wj;
            wj["size"] = part.w[i].count();
            wj["members"] = part.w[i].to_vector();
            pj["parts"].push_back(wj);
        }
        pj["audits"] = Json::array();
        for (const auto& a : part.audits)
            pj["audits"].push_back({{"name", a.name},
                                    {"lhs", a.lhs},
                                    {"rhs", a.rhs},
                                    {"deficit", a.deficit},
                                    {"pass", a.pass}});
        pj["all_pass"] = part.all_pass;
        pj["failed_rule"] = part.failed_rule;
        rj["partition"] = pj;
    }

    Json xj;
    xj["nu"] = ex.nu;
    xj["tau"] = ex.tau;
    xj["mode"] = ex.exact ? "exact" : "sampled";
    xj["is_expander"] = ex.is_expander;
    xj["worst_set"] = ex.worst_set;
    xj["worst_slack"] = ex.worst_slack;
    xj["sets_checked"] = ex.sets_checked;
    xj["caveat"] = ex.caveat;
    rj["expansion"] = xj;

    if (!o.dot.empty()) hlink::save_text_file(o.dot, hlink::digraph_to_dot(d));
    emit_json(o.output, rj);
    return 0;
}

// ----------------------------------------------------------------- bench

struct BenchOpts {
    std::string family = "complete";
    std::vector<int> ns;
    int k = 1;
    int floor = -1;
    double density = 0.5;
    std::string mode = "auto";
    std::string output;
    Knobs knobs;
};

// A grid cell's instance.  Families without implied terminals get the
// spanning path demand 0 -> 1 of length n-1; remark2 carries its own.
Instance bench_instance(const BenchOpts& o, int n, std::uint64_t seed) {
    if (o.family == "remark2") return hlink::gen_remark2(n, o.k).instance;
    Digraph d;
    if (o.family == "complete") {
        d = hlink::gen_complete(n);
    } else if (o.family == "random-floor") {
        d = hlink::gen_random_floor(n, o.floor >= 0 ? o.floor : n / 2, seed, o.density);
    } else {
        throw std::invalid_argument("bench: family \"" + o.family +
                                    "\" is not benchable (choose complete, random-floor, remark2)");
    }
    Instance inst;
    inst.d = d;
    inst.h.verts = 2;
    inst.h.arcs = {{0, 1}};
    inst.f = {0, 1};
    inst.lengths = {n - 1};
    return inst;
}

int run_bench(BenchOpts& o) {
    o.knobs.resolve();
    std::vector<int> ns = o.ns;
    std::vector<std::uint64_t> seeds = o.knobs.seeds;
    std::sort(ns.begin(), ns.end());
    std::sort(seeds.begin(), seeds.end());

    // Validate the whole grid up front so a bad cell aborts before any row
    // is produced, then run cells in (n, seed) order.
    std::vector<std::pair<int, std::uint64_t>> grid;
    for (int n : ns)
        for (std::uint64_t s : seeds) {
            if (n < 2) throw std::invalid_argument("bench: grid order " + std::to_string(n) + " is too small");
            bench_instance(o, n, s);
            grid.emplace_back(n, s);
        }

    std::ostringstream csv;
    csv << "family,n,seed,mode,status,method,success,exit,search_nodes,restarts\n";
    for (auto [n, seed] : grid) {
        Instance inst = bench_instance(o, n, seed);
        PipelineParams pp = o.knobs.pp;
        AnalysisParams ap = o.knobs.ap;
        pp.seed = ap.seed = seed;
        pp.alpha = inst.alpha;
        pp.beta = inst.beta;
        RunReport rep = hlink::run_pipeline(inst, o.mode, pp, ap);
        csv << o.family << ',' << n << ',' << seed << ',' << o.mode << ','
            << status_name(rep.status) << ',' << rep.method << ','
            << (rep.status == RunStatus::Solved ? 1 : 0) << ',' << rep.exit_code() << ','
            << rep.nodes << ',' << rep.retries << '\n';
    }
    emit_text(o.output, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"directed H-linkage workbench: generate, solve, verify, analyze, benchmark"};
    app.require_subcommand(1);

    GenOpts gen;
    auto* cg = app.add_subcommand("gen", "generate a host digraph from a built-in family");
    cg->add_option("family", gen.family, "complete | remark1 | remark2 | remark3 | random-floor")
        ->required();
    cg->add_option("--n", gen.n, "host order")->required();
    cg->add_option("--k", gen.k, "pattern arity for remark2/remark3");
    cg->add_option("--floor", gen.floor, "semi-degree floor for random-floor (default n/2)");
    cg->add_option("--density", gen.density, "arc probability for random-floor");
    cg->add_option("--length", gen.lengths, "route length(s) for the remark2 instance (repeatable)");
    cg->add_option("--seed", gen.seeds, "seed for randomized families (repeatable; first is used)");
    cg->add_option("--output", gen.output, "digraph JSON path (default: stdout)");
    cg->add_option("--instance-out", gen.instance_out, "instance JSON path, for families with terminals");
    cg->add_option("--dot", gen.dot, "DOT export path");

    SolveOpts solve;
    auto* cs = app.add_subcommand("solve", "run the pipeline on an instance file");
    cs->add_option("--input", solve.input, "instance JSON")->required();
    cs->add_option("--output", solve.output, "run report JSON path (default: stdout)");
    cs->add_option("--routes", solve.routes_out, "write the routes alone as JSON (on success)");
    cs->add_option("--mode", solve.mode, "auto | exact | absorb | extremal");
    cs->add_option("--dot", solve.dot, "DOT export path (routes overlaid when solved)");
    solve.knobs.attach(cs);

    VerifyOpts verify;
    auto* cv = app.add_subcommand("verify", "referee claimed routes against an instance");
    cv->add_option("--input", verify.input, "instance JSON")->required();
    cv->add_option("--routes", verify.routes, "routes JSON to check")->required();
    cv->add_option("--output", verify.output, "verdict JSON path (default: stdout)");

    AnalyzeOpts analyze;
    auto* ca = app.add_subcommand("analyze", "structure report for a host digraph");
    ca->add_option("--input", analyze.input, "digraph JSON")->required();
    ca->add_option("--output", analyze.output, "report JSON path (default: stdout)");
    ca->add_flag("--exact", analyze.force_exact, "demand exact scans (degrades past the size caps)");
    ca->add_option("--dot", analyze.dot, "DOT export path");
    analyze.knobs.attach(ca);

    BenchOpts bench;
    auto* cb = app.add_subcommand("bench", "grid runs, one CSV row per (order, seed)");
    cb->add_option("--family", bench.family, "complete | random-floor | remark2");
    cb->add_option("--n", bench.ns, "host order(s) (repeatable)");
    cb->add_option("--k", bench.k, "pattern arity for remark2");
    cb->add_option("--floor", bench.floor, "semi-degree floor for random-floor (default n/2)");
    cb->add_option("--density", bench.density, "arc probability for random-floor");
    cb->add_option("--mode", bench.mode, "auto | exact | absorb | extremal");
    cb->add_option("--output", bench.output, "CSV path (default: stdout)");
    bench.knobs.attach(cb);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // bad arguments are malformed input
    }

    try {
        if (cg->parsed()) return run_gen(gen);
        if (cs->parsed()) return run_solve(solve);
        if (cv->parsed()) return run_verify(verify);
        if (ca->parsed()) return run_analyze(analyze);
        if (cb->parsed()) return run_bench(bench);
    } catch (const hlink::ParseError& e) {
        std::fprintf(stderr, "hlink: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "hlink: %s\n", e.what());
        return 1;
    }
    return 1;
}
