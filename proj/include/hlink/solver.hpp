#pragma once

// The driving pipeline: validate, look for extremal structure, pick a
// construction strategy, and fall back to complete search while the host is
// small enough.  Every report is honest -- a subdivision is re-verified
// before being called a solution, "infeasible" is only ever said with a
// completed proof (arithmetic or exhausted exact search) behind it, and
// anything else ends in an explicit give-up with the chain's trace.

#include <optional>
#include <string>
#include <vector>

#include "hlink/absorb.hpp"
#include "hlink/exact.hpp"
#include "hlink/extremal.hpp"
#include "hlink/linkage.hpp"
#include "hlink/params.hpp"
#include "hlink/structure.hpp"

namespace hlink {

enum class RunStatus {
    Solved,      // verified subdivision in hand
    Malformed,   // the instance fails structural validation
    Infeasible,  // proven: no subdivision exists
    GiveUp,      // nothing proven either way
};

struct RunReport {
    RunStatus status = RunStatus::GiveUp;
    std::string method;  // "exact", "absorption", "extremal:<case>"
    std::optional<Subdivision> subdivision;
    std::string reason;              // why not Solved
    std::vector<std::string> trace;  // one line per pipeline stage
    std::uint64_t nodes = 0;         // exact-search work, when it ran
    int retries = 0;                 // randomized-stage restarts consumed

    int exit_code() const {
        switch (status) {
            case RunStatus::Solved: return 0;
            case RunStatus::Malformed: return 1;
            case RunStatus::Infeasible: return 2;
            case RunStatus::GiveUp: return 3;
        }
        return 3;
    }
};

namespace detail {

// Success goes through one final gate: nothing unverified leaves the
// pipeline labelled Solved.
inline bool accept(RunReport& rep, const Instance& inst, Subdivision sub,
                   const std::string& method) {
    auto check = verify_subdivision(inst, sub);
    if (!check.ok()) {
        rep.trace.push_back(method + ": built routes failed verification (" +
                            check.violations[0].rule + "); discarded");
        return false;
    }
    rep.status = RunStatus::Solved;
    rep.method = method;
    rep.subdivision = std::move(sub);
    rep.reason.clear();
    return true;
    }

inline bool try_extremal(RunReport& rep, const Instance& inst, const ECReport& ec,
                         const PipelineParams& pp, const AnalysisParams& ap) {
    if (!ec.found || !ec.witness) return false;
    auto part = classify_ec1(inst.d, *ec.witness, ap);
    std::string overlap = part.overlap == OverlapCase::Tiny    ? "tiny"
                          : part.overlap == OverlapCase::Huge  ? "huge"
                                                               : "middle";
    rep.trace.push_back("classify: " + overlap + " overlap; " +
                        (part.all_pass ? std::string("all audits pass")
                                       : "audit failed: " + part.failed_rule));
    auto ext = solve_extremal(inst, part, pp);
    for (const auto& line : ext.plan) rep.trace.push_back("  plan: " + line);
    if (!ext.ok) {
        rep.trace.push_back("extremal (" + ext.case_name + ") failed: " + ext.reason);
        return false;
    }
    rep.trace.push_back("extremal (" + ext.case_name + ") built a subdivision");
    return detail::accept(rep, inst, std::move(*ext.subdivision),
                          "extremal:" + ext.case_name);
}

inline bool try_absorption(RunReport& rep, const Instance& inst, bool stable,
                           const PipelineParams& pp) {
    auto abs = run_absorption(inst, pp, stable);
    rep.retries += abs.cover_restarts;
    if (!abs.ok) {
        rep.trace.push_back("absorption failed: " + abs.reason);
        return false;
    }
    rep.trace.push_back("absorption built a subdivision");
    return detail::accept(rep, inst, std::move(*abs.subdivision), "absorption");
}

inline bool try_exact(RunReport& rep, const Instance& inst, const PipelineParams& pp) {
    if (inst.d.order() > pp.exact_cap) {
        rep.trace.push_back("exact: skipped, order " + std::to_string(inst.d.order()) +
                            " beyond cap " + std::to_string(pp.exact_cap));
        return false;
    }
    auto res = exact_solve(inst, SearchBudget{std::uint64_t(pp.node_budget)}, pp.exact_cap);
    rep.nodes += res.nodes;
    if (res.status == SolveStatus::Found) {
        rep.trace.push_back("exact: found after " + std::to_string(res.nodes) + " nodes");
        return detail::accept(rep, inst, std::move(*res.subdivision), "exact");
    }
    if (res.status == SolveStatus::Infeasible) {
        rep.trace.push_back("exact: search exhausted after " + std::to_string(res.nodes) +
                            " nodes; no subdivision exists");
        rep.status = RunStatus::Infeasible;
        rep.reason = "complete search proves there is no subdivision";
        return true;  // terminal outcome, even though not Solved
    }
    rep.trace.push_back("exact: node budget exhausted after " +
                        std::to_string(res.nodes) + " nodes");
    return false;
}

}  // namespace detail

// Modes: "auto" runs the full chain; "exact", "absorb", and "extremal" run
// a single strategy (with validation) and give up honestly when it misses.
inline RunReport run_pipeline(const Instance& inst, const std::string& mode,
                              const PipelineParams& pp, const AnalysisParams& ap) {
    RunReport rep;

    auto val = validate_instance(inst);
    if (!val.structural.empty()) {
        rep.status = RunStatus::Malformed;
        rep.reason = val.structural[0];
        rep.trace.push_back("validate: malformed: " + val.structural[0]);
        return rep;
    }
    if (!val.infeasible.empty()) {
        rep.status = RunStatus::Infeasible;
        rep.reason = val.infeasible[0];
        rep.trace.push_back("validate: infeasible by arithmetic: " + val.infeasible[0]);
        return rep;
    }
    rep.trace.push_back("validate: ok" +
                        (val.warnings.empty()
                             ? std::string()
                             : " (" + std::to_string(val.warnings.size()) + " warnings)"));

    const int n = inst.d.order();

    if (mode == "exact") {
        if (inst.d.order() > pp.exact_cap) {
            rep.reason = "host order exceeds the exact cap";
            rep.trace.push_back("exact: refused, order beyond cap " +
                                std::to_string(pp.exact_cap));
            return rep;
        }
        if (!detail::try_exact(rep, inst, pp))
            rep.reason = "exact search ran out of node budget";
        return rep;
    }

    if (mode == "absorb") {
        // Explicit mode takes the caller's word for stability.
        if (!detail::try_absorption(rep, inst, /*stable=*/true, pp))
            rep.reason = "absorption pipeline failed; see trace";
        return rep;
    }

    if (mode == "extremal") {
        bool exact_ec = n <= ap.ec_exact_cap;
        auto ec = detect_ec(inst.d, ap.eps_prime, exact_ec, ap);
        rep.trace.push_back("ec: " + std::string(ec.found ? "witness found" : "none") +
                            (exact_ec ? " [exact]" : " [heuristic]"));
        if (!ec.found) {
            rep.reason = "no extremal witness found; nothing for this mode to use";
            return rep;
        }
        if (!detail::try_extremal(rep, inst, ec, pp, ap))
            rep.reason = "extremal construction failed; see trace";
        return rep;
    }

    if (mode != "auto") {
        rep.status = RunStatus::Malformed;
        rep.reason = "unknown mode \"" + mode + "\"";
        return rep;
    }

    // Auto chain: extremal structure first (it poisons absorption), then
    // absorption, then complete search while the host is small.
    bool exact_ec = n <= ap.ec_exact_cap;
    auto ec = detect_ec(inst.d, ap.eps_prime, exact_ec, ap);
    if (ec.found) {
        rep.trace.push_back("ec: witness found, crossing " +
                            std::to_string(ec.witness->crossing) +
                            (exact_ec ? " [exact]" : " [heuristic]"));
        if (detail::try_extremal(rep, inst, ec, pp, ap)) return rep;
    } else {
        rep.trace.push_back(std::string("ec: none") +
                            (ec.certified ? " [exact, certified]" : " [heuristic]"));
    }

    // Absorption's guarantees assume the host is not extremal; a found
    // witness (even one the builders could not exploit) flags instability.
    if (detail::try_absorption(rep, inst, /*stable=*/!ec.found, pp)) return rep;

    if (detail::try_exact(rep, inst, pp)) return rep;

    rep.status = RunStatus::GiveUp;
    rep.reason = n <= pp.exact_cap
                     ? "every strategy failed within its budget"
                     : "construction strategies failed and the host is too large "
                       "for complete search";
    return rep;
}

}  // namespace hlink
