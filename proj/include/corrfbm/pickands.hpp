#pragma once

#include <cstdint>
#include <vector>

#include "corrfbm/rng.hpp"
#include "corrfbm/stats.hpp"

namespace corrfbm {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Monte Carlo estimate of a Pickands-type constant with its discretization
// and truncation metadata.
struct PickandsEstimate {
    double value = 0.0;
    double alpha = 0.0;
    double b = 0.0;            // drift coefficient
    Interval lambda{};         // window the sup ranges over
    double T = 0.0;            // window length
    double delta = 0.0;        // grid step
    std::uint64_t n = 0;       // replications
    double stderr_ = 0.0;
};

// E exp( sup_{t in Lambda} ( sqrt(2) B_alpha(t) - |t|^alpha - b t ) ),
// estimated as the plain Monte Carlo mean over a delta-grid of Lambda
// (endpoints snapped outward to the lattice). Throws OverflowGuard if a
// replicate's exponent exceeds 700.
PickandsEstimate estimate_drifted_constant(double alpha, double b, Interval lambda, double delta,
                                           std::uint64_t n_reps, SeedSpec seed,
                                           unsigned threads = 1);

// H over [0,T] normalized by T; the T -> infinity limit is the Pickands
// constant of order alpha.
PickandsEstimate estimate_pickands(double alpha, double T, double delta, std::uint64_t n_reps,
                                   SeedSpec seed, unsigned threads = 1);

struct PickandsExtrapolation {
    std::vector<double> T_values;
    std::vector<PickandsEstimate> raw;   // H[0,T]/T at each window
    double intercept = 0.0;              // least-squares intercept of H/T against 1/T
    double slope = 0.0;
};

// The T limit is approached slowly; fit H[0,T]/T against 1/T and report the
// intercept next to the raw values rather than hiding the extrapolation.
PickandsExtrapolation pickands_extrapolate(double alpha, const std::vector<double>& T_values,
                                           double delta, std::uint64_t n_reps, SeedSpec seed,
                                           unsigned threads = 1);

// Local-limit constants: for alpha < 1 this is H^0_alpha over Lambda scaled by
// (1/(sqrt(2)(1+r)))^(2/alpha); at alpha = 1 it is the drifted constant with
// b = -(1+r) over Lambda scaled by (1/(sqrt(2)(1+r)))^2. Defined for
// alpha <= 1 only.
PickandsEstimate local_window_constant(double alpha, double r, Interval lambda, double delta,
                                  std::uint64_t n_reps, SeedSpec seed, unsigned threads = 1);

// Cross-window constant H^0_alpha([0,T],[nT,(n+1)T]) = E exp(min(S1, S2))
// where S1, S2 are the sups of sqrt(2) B_alpha(t) - |t|^alpha over the two
// windows of one path. Used to diagnose the summability of the gap series.
EstimateWithCI cross_term_constant(double alpha, unsigned gap_index, double T, double delta,
                                   std::uint64_t n_reps, SeedSpec seed, unsigned threads = 1);

} // namespace corrfbm
