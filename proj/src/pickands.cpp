#include "corrfbm/pickands.hpp"

#include <cmath>

#include "corrfbm/errors.hpp"
#include "corrfbm/parallel.hpp"
#include "corrfbm/sampler.hpp"

namespace corrfbm {

namespace {

constexpr double kExpGuard = 700.0;

struct WindowGrid {
    std::size_t k_neg = 0; // steps left of 0
    std::size_t k_pos = 0; // steps right of 0
    double delta = 0.0;
    std::size_t idx_lo = 0; // evaluation range within the path array
    std::size_t idx_hi = 0; // inclusive
    double t_of(std::size_t idx) const {
        return (static_cast<double>(idx) - static_cast<double>(k_neg)) * delta;
    }
};

// Snap interval endpoints outward to the delta lattice; the sample grid always
// contains the anchor t = 0.
WindowGrid make_window(Interval lambda, double delta) {
    if (!(delta > 0.0)) throw std::domain_error("grid step must be positive");
    if (lambda.hi < lambda.lo) throw std::domain_error("interval is empty");
    WindowGrid w;
    w.delta = delta;
    w.k_neg = lambda.lo < 0.0 ? static_cast<std::size_t>(std::ceil(-lambda.lo / delta - 1e-9)) : 0;
    const double hi = std::max(lambda.hi, 0.0);
    w.k_pos = static_cast<std::size_t>(std::ceil(hi / delta - 1e-9));
    w.idx_lo = lambda.lo <= 0.0
                   ? 0
                   : w.k_neg + static_cast<std::size_t>(std::floor(lambda.lo / delta + 1e-9));
    w.idx_hi = w.k_neg + w.k_pos;
    return w;
}

} // namespace

PickandsEstimate estimate_drifted_constant(double alpha, double b, Interval lambda, double delta,
                                           std::uint64_t n_reps, SeedSpec seed, unsigned threads) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw std::domain_error("alpha out of (0,2]");
    if (n_reps < 1) throw std::domain_error("need at least one replication");

    PickandsEstimate est;
    est.alpha = alpha;
    est.b = b;
    est.lambda = lambda;
    est.T = lambda.hi - lambda.lo;
    est.delta = delta;
    est.n = n_reps;

    // Degenerate window: the sup sits at t = 0 and E exp(0) = 1 exactly.
    if (lambda.lo == 0.0 && lambda.hi == 0.0) {
        est.value = 1.0;
        est.stderr_ = 0.0;
        return est;
    }

    const WindowGrid w = make_window(lambda, delta);
    const std::size_t m = w.k_neg + w.k_pos;
    const FgnSampler fgn(alpha, m, delta);

    const double sqrt2 = std::sqrt(2.0);
    auto rep_value = [&](std::uint64_t rep) {
        Rng rng(SeedSpec{seed.master, seed.stream + rep});
        const std::vector<double> path = sample_fbm_two_sided(fgn, w.k_neg, w.k_pos, rng);
        double sup = -1e300;
        for (std::size_t idx = w.idx_lo; idx <= w.idx_hi; ++idx) {
            const double t = w.t_of(idx);
            const double v = sqrt2 * path[idx] - std::pow(std::abs(t), alpha) - b * t;
            if (v > sup) sup = v;
        }
        if (sup > kExpGuard)
            throw OverflowGuard("replicate exponent " + std::to_string(sup) +
                                " exceeds 700; check delta/T configuration");
        return std::exp(sup);
    };

    const EstimateWithCI e = replicate_mean(n_reps, seed, threads, m + 1, rep_value);
    est.value = e.estimate;
    est.stderr_ = e.stderr_;
    return est;
}

PickandsEstimate estimate_pickands(double alpha, double T, double delta, std::uint64_t n_reps,
                                   SeedSpec seed, unsigned threads) {
    if (!(T > 0.0)) throw std::domain_error("window length must be positive");
    PickandsEstimate est =
        estimate_drifted_constant(alpha, 0.0, Interval{0.0, T}, delta, n_reps, seed, threads);
    est.value /= T;
    est.stderr_ /= T;
    return est;
}

PickandsExtrapolation pickands_extrapolate(double alpha, const std::vector<double>& T_values,
                                           double delta, std::uint64_t n_reps, SeedSpec seed,
                                           unsigned threads) {
    if (T_values.size() < 2) throw std::domain_error("need at least two windows to extrapolate");
    PickandsExtrapolation out;
    out.T_values = T_values;
    std::vector<double> inv_T, ratio;
    for (double T : T_values) {
        out.raw.push_back(estimate_pickands(alpha, T, delta, n_reps, seed, threads));
        inv_T.push_back(1.0 / T);
        ratio.push_back(out.raw.back().value);
    }
    const auto [a, bb] = linear_fit(inv_T, ratio);
    out.intercept = a;
    out.slope = bb;
    return out;
}

PickandsEstimate local_window_constant(double alpha, double r, Interval lambda, double delta,
                                  std::uint64_t n_reps, SeedSpec seed, unsigned threads) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::domain_error("local-limit constants are defined for alpha <= 1 only");
    if (!(r > -1.0 && r < 1.0)) throw std::domain_error("r out of (-1,1)");
    const double scale = std::pow(1.0 / (std::sqrt(2.0) * (1.0 + r)), 2.0 / alpha);
    const Interval scaled{lambda.lo * scale, lambda.hi * scale};
    const double drift = alpha == 1.0 ? -(1.0 + r) : 0.0;
    return estimate_drifted_constant(alpha, drift, scaled, delta, n_reps, seed, threads);
}

EstimateWithCI cross_term_constant(double alpha, unsigned gap_index, double T, double delta,
                                   std::uint64_t n_reps, SeedSpec seed, unsigned threads) {
    if (gap_index < 1) throw std::domain_error("gap index must be >= 1");
    if (!(T > 0.0)) throw std::domain_error("window length must be positive");
    if (!(delta > 0.0)) throw std::domain_error("grid step must be positive");

    const std::size_t per_window = static_cast<std::size_t>(std::ceil(T / delta - 1e-9));
    const std::size_t m = per_window * (gap_index + 1);
    const FgnSampler fgn(alpha, m, delta);

    const double sqrt2 = std::sqrt(2.0);
    auto rep_value = [&](std::uint64_t rep) {
        Rng rng(SeedSpec{seed.master, seed.stream + rep});
        const std::vector<double> path = sample_fbm_two_sided(fgn, 0, m, rng);
        auto window_sup = [&](std::size_t lo, std::size_t hi) {
            double sup = -1e300;
            for (std::size_t idx = lo; idx <= hi; ++idx) {
                const double t = static_cast<double>(idx) * delta;
                const double v = sqrt2 * path[idx] - std::pow(t, alpha);
                if (v > sup) sup = v;
            }
            return sup;
        };
        const double s1 = window_sup(0, per_window);
        const double s2 = window_sup(per_window * gap_index, m);
        const double mn = std::min(s1, s2);
        if (mn > kExpGuard) throw OverflowGuard("cross-term exponent exceeds 700");
        return std::exp(mn);
    };
    return replicate_mean(n_reps, seed, threads, m + 1, rep_value);
}

} // namespace corrfbm
