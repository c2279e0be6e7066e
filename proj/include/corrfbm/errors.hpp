#pragma once

#include <stdexcept>
#include <string>

namespace corrfbm {

// Covariance matrix failed the PSD check even after maximal permitted jitter.
// For the constant-cross-correlation model this signals that (alpha1, alpha2, r)
// does not admit a jointly Gaussian pair on the requested grid.
struct NotPositiveSemiDefinite : std::runtime_error {
    explicit NotPositiveSemiDefinite(const std::string& what) : std::runtime_error(what) {}
};

// Both the circulant embedding and the Cholesky fallback failed.
struct EmbeddingFailed : std::runtime_error {
    explicit EmbeddingFailed(const std::string& what) : std::runtime_error(what) {}
};

// A replicate's exponent exceeded the safe range for exp(); indicates a
// misconfigured window/step in a Pickands-type estimator.
struct OverflowGuard : std::runtime_error {
    explicit OverflowGuard(const std::string& what) : std::runtime_error(what) {}
};

// A Pickands constant input is required (alpha < 1) but was not supplied.
struct MissingPickands : std::invalid_argument {
    explicit MissingPickands(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical minimizer of h(s,t) deviates from the expected point (1,1).
struct MinimizerMismatch : std::runtime_error {
    explicit MinimizerMismatch(const std::string& what) : std::runtime_error(what) {}
};

// Two algebraically equivalent forms disagreed beyond tolerance.
struct InternalMismatch : std::logic_error {
    explicit InternalMismatch(const std::string& what) : std::logic_error(what) {}
};

// Threshold u below the centering constant mu in a concentration bound.
struct ThresholdBelowMu : std::domain_error {
    explicit ThresholdBelowMu(const std::string& what) : std::domain_error(what) {}
};

// A stated hypothesis of a local-limit evaluation is violated by the inputs.
struct HypothesisViolated : std::domain_error {
    explicit HypothesisViolated(const std::string& what) : std::domain_error(what) {}
};

// Rejection sampling acceptance rate too small for desk-scale work.
struct Timeout : std::runtime_error {
    explicit Timeout(const std::string& what) : std::runtime_error(what) {}
};

// Ratio estimator denominator has no exceedances.
struct DegenerateDenominator : std::runtime_error {
    explicit DegenerateDenominator(const std::string& what) : std::runtime_error(what) {}
};

// Discrete probability space masses do not sum to one.
struct InvalidSpace : std::invalid_argument {
    explicit InvalidSpace(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace corrfbm
