#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "corrfbm/rng.hpp"

namespace corrfbm {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Point estimate with replication metadata; stderr = sqrt(p(1-p)/N) for
// indicator means, sample-based otherwise.
struct EstimateWithCI {
    double estimate = 0.0;
    std::uint64_t n = 0;
    double stderr_ = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    SeedSpec seed{};
    std::size_t grid_n = 0;

    static EstimateWithCI from_indicator_count(std::uint64_t hits, std::uint64_t n_total,
                                               SeedSpec seed, std::size_t grid_n) {
        EstimateWithCI e;
        e.n = n_total;
        e.seed = seed;
        e.grid_n = grid_n;
        const double p = n_total ? static_cast<double>(hits) / static_cast<double>(n_total) : 0.0;
        e.estimate = p;
        e.stderr_ = n_total ? std::sqrt(p * (1.0 - p) / static_cast<double>(n_total)) : 0.0;
        e.ci_lo = std::max(0.0, p - 1.96 * e.stderr_);
        e.ci_hi = std::min(1.0, p + 1.96 * e.stderr_);
        return e;
    }

    static EstimateWithCI from_moments(double sum, double sum_sq, std::uint64_t n_total,
                                       SeedSpec seed, std::size_t grid_n) {
        EstimateWithCI e;
        e.n = n_total;
        e.seed = seed;
        e.grid_n = grid_n;
        const double n = static_cast<double>(n_total);
        e.estimate = sum / n;
        const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
        e.stderr_ = std::sqrt(var / n);
        e.ci_lo = e.estimate - 1.96 * e.stderr_;
        e.ci_hi = e.estimate + 1.96 * e.stderr_;
        return e;
    }
};

// Pairwise (tree) summation: deterministic association independent of the
// number of worker threads that produced the blocks.
inline double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

// One-sample Kolmogorov-Smirnov distance against a fully specified CDF.
inline double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::max((static_cast<double>(i) + 1.0) / n - f,
                                 f - static_cast<double>(i) / n));
    }
    return d;
}

// Two-sample KS distance.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// Asymptotic two-sample KS critical value at significance level 1%.
inline double ks_two_sample_critical_1pct(std::size_t na, std::size_t nb) {
    const double c = 1.628; // sqrt(-0.5 * ln(alpha/2)) at alpha = 0.01
    return c * std::sqrt((static_cast<double>(na) + static_cast<double>(nb)) /
                         (static_cast<double>(na) * static_cast<double>(nb)));
}

inline double pearson_correlation(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= n; my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy; sxx += dx * dx; syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

// Least squares line y = a + b x; returns (a, b).
inline std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    const double b = (n * sxy - sx * sy) / denom;
    const double a = (sy - b * sx) / n;
    return {a, b};
}

} // namespace corrfbm
