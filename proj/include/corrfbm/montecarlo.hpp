#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "corrfbm/model.hpp"
#include "corrfbm/pickands.hpp"
#include "corrfbm/stats.hpp"

namespace corrfbm {

// ---- joint survival / union probabilities ----

// P(sup X1 > u on grid, sup X2 > u on grid), crude Monte Carlo over N joint
// draws. Strict exceedance throughout.
EstimateWithCI joint_survival(double u, const ModelParams& params, const Grid& grid,
                              std::uint64_t n_reps, SeedSpec seed, unsigned threads = 0);

// Same event evaluated on every level of an ascending u-grid with common
// random numbers (one set of draws, nested indicators).
std::vector<EstimateWithCI> joint_survival_curve(const std::vector<double>& u_levels,
                                                 const ModelParams& params, const Grid& grid,
                                                 std::uint64_t n_reps, SeedSpec seed,
                                                 unsigned threads = 0);

// Union over the rectangle V1 x V2 of {X1(s) > u, X2(t) > u}; for a rectangle
// this reduces to both per-coordinate grid maxima exceeding u.
EstimateWithCI union_prob(double u, const ModelParams& params, const Grid& grid1,
                          const Grid& grid2, std::uint64_t n_reps, SeedSpec seed,
                          unsigned threads = 0);

// ---- localized exceedance (the local limit around (1,1)) ----

// MC estimate of the union probability over the rescaled window
//   K_u = (s0_hat, t0_hat) + (u^{-2/a1} Lambda1, u^{-2/a2} Lambda2),
// with per-coordinate lattice step delta_lambda (in Lambda units).
// The anchor must satisfy 1 - s0_hat <= (ln u)^2/u^2 (HypothesisViolated
// otherwise, same for t0_hat).
EstimateWithCI local_prob(double u, const ModelParams& params, double s0_hat, double t0_hat,
                          Interval lambda1, Interval lambda2, double delta_lambda,
                          std::uint64_t n_reps, SeedSpec seed, unsigned threads = 0);

// Companion closed-form evaluation of the local limit with supplied window
// constants q1, q2:
//   q1 q2 (1+r)^{3/2} / (2 pi sqrt(1-r)) u^{-2} exp(-u^2 h(s0,t0) / 2).
double local_limit_value(double u, const ModelParams& params, double s0_hat, double t0_hat, double q1,
                   double q2);

// ---- first passage times ----

struct FptSample {
    double tau1 = std::numeric_limits<double>::infinity();
    double tau2 = std::numeric_limits<double>::infinity();
    bool both_within = false; // both passages happened by the horizon
};

// First grid time strictly exceeding u per coordinate; +inf sentinel when the
// path never exceeds on the grid.
FptSample fpt_pair(double u, const ModelParams& params, const Grid& grid, SeedSpec seed);

struct ConditionalFptResult {
    std::vector<FptSample> samples; // exactly n_target accepted, attempt order
    std::uint64_t attempts = 0;     // attempts consumed up to the last acceptance
    double acceptance_rate = 0.0;   // accepted / attempts
    SeedSpec seed{};
};

// Rejection sampler for the conditional law (tau1, tau2) | both <= horizon.
// Streams are indexed by attempt, so the output is independent of the thread
// count and internal batching. Throws Timeout when a probe batch shows an
// acceptance rate below 1e-6.
ConditionalFptResult conditional_fpt_sample(double u, const ModelParams& params, const Grid& grid,
                                            std::uint64_t n_target, SeedSpec seed,
                                            unsigned threads = 0);

struct FptLimitStats {
    double ks1 = 0.0;         // KS of u^2(1-tau1*) against Exp(mean 2(1+r)/a1)
    double ks2 = 0.0;
    double correlation = 0.0; // empirical Pearson correlation of the coordinates
    double copula_dist = 0.0; // sup |empirical copula - uv| on a 20x20 lattice
};

FptLimitStats fpt_limit_test(const std::vector<FptSample>& samples, double u,
                             const ModelParams& params);

// ---- asymptotic independence ratio ----

// P(M1 > u, M2 > u) / P(M2 > u) on shared draws; delta-method standard error.
EstimateWithCI independence_ratio(double u, const ModelParams& params, const Grid& grid,
                                  std::uint64_t n_reps, SeedSpec seed, unsigned threads = 0);

// ---- discrete two-index Bonferroni verifier ----

// Finite outcome space (up to 64 outcomes) with events as bitmasks.
struct DiscreteSpace {
    std::vector<double> mass; // must sum to 1 within 1e-12
};

struct BonferroniResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// Exact enumeration of both sides of the two-index Bonferroni lower bound:
//   P(U (A_k ∩ B_l)) >= sum P(A_k ∩ B_l)
//                      - sum_k sum_{l1<l2} P(A_k ∩ B_l1 ∩ B_l2)
//                      - sum_l sum_{k1<k2} P(A_k1 ∩ A_k2 ∩ B_l).
BonferroniResult bonferroni_check(const DiscreteSpace& space,
                                  const std::vector<std::uint64_t>& a_events,
                                  const std::vector<std::uint64_t>& b_events);

} // namespace corrfbm
