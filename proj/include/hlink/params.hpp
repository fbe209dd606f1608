#pragma once

// Tunable knobs, collected in two bags: one for the constructive pipeline,
// one for the structure analysis.  The asymptotic theory behind these
// algorithms wants a chain of "sufficiently small" constants; at the sizes
// this library runs at no such chain exists, so the defaults below are
// empirical and every solver takes the bag explicitly.

#include <cstdint>
#include <stdexcept>

namespace hlink {

struct PipelineParams {
    double gamma = 0.08;       // absorber family density target (|F| <= gamma*n)
    double eps_prime = 0.2;    // near-partition slack used by the stability test
    double alpha = 0.3;        // total budget for short demanded lengths
    double beta = 0.25;        // a demanded length below beta*n counts as short
    int t_min = 2;             // absorbers demanded per residual pair
    int retries = 32;          // randomize-verify retry cap per stage
    std::uint64_t seed = 1;
    std::uint64_t node_budget = 2'000'000;  // backtracking node cap per search
    int exact_cap = 16;        // largest order the exhaustive route solver accepts
    int ham_cap = 22;          // largest order the subset-DP path engines accept

    void validate() const {
        if (!(gamma > 0.0 && gamma < eps_prime && eps_prime < 1.0))
            throw std::invalid_argument("params: need 0 < gamma < eps_prime < 1");
        if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0))
            throw std::invalid_argument("params: alpha and beta must lie in (0,1)");
        if (t_min < 1) throw std::invalid_argument("params: t_min must be >= 1");
        if (retries < 1) throw std::invalid_argument("params: retries must be >= 1");
    }
};

struct AnalysisParams {
    double eps_prime = 0.2;  // near-partition slack for the two-set witness
    double eps1 = 0.1;       // overlap-size split between the three partition cases
    double eps = 0.03;       // audit slack and exceptional-degree thresholds
    double nu = 0.05;        // robust-neighbourhood margin
    double tau = 0.2;        // window excluded at both ends of the subset sizes
    int ec_exact_cap = 16;       // exhaustive witness search cap
    int expander_exact_cap = 20; // exhaustive subset scan cap
    int samples = 2000;          // sampled-mode subset draws
    std::uint64_t seed = 1;
};

// Threshold comparisons against real-valued bounds happen all over the
// audits.  Counts are integers; the bounds come out of doubles.  We give
// the count the benefit of a hair of slack so that e.g. a count of
// floor(t) always passes "count <= t" even when t was computed as
// 2.9999999999999996.
inline bool leq_threshold(double count, double bound) { return count <= bound + 1e-9; }
inline bool geq_threshold(double count, double bound) { return count + 1e-9 >= bound; }

}  // namespace hlink
