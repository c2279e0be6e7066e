#include "corrfbm/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "corrfbm/asymptotics.hpp"
#include "corrfbm/parallel.hpp"
#include "corrfbm/sampler.hpp"

namespace corrfbm {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

unsigned resolve_threads(unsigned threads) { return threads == 0 ? default_threads() : threads; }

double vec_max(const std::vector<double>& v) {
    double m = -1e300;
    for (double x : v) m = std::max(m, x);
    return m;
}

struct HitBlock {
    std::vector<std::uint64_t> hits;
};

// Shared engine: counts, per u-level, of draws where both coordinate maxima
// strictly exceed u. X2 is only evaluated when X1 already clears the lowest
// level (the indicator is zero otherwise).
std::vector<std::uint64_t> exceedance_counts(const PairSampler& sampler,
                                             const std::vector<double>& u_levels,
                                             std::uint64_t n_reps, SeedSpec seed,
                                             unsigned threads) {
    const double u_min = *std::min_element(u_levels.begin(), u_levels.end());
    const std::size_t n_u = u_levels.size();
    auto blocks = run_blocks<HitBlock>(n_reps, 8192, threads,
        [&](std::uint64_t lo, std::uint64_t hi, HitBlock& blk) {
            blk.hits.assign(n_u, 0);
            std::vector<double> z, x1, x2;
            for (std::uint64_t rep = lo; rep < hi; ++rep) {
                Rng rng(SeedSpec{seed.master, seed.stream + rep});
                sampler.draw_x1(rng, x1, z);
                const double m1 = vec_max(x1);
                if (!(m1 > u_min)) continue;
                sampler.draw_x2_given(rng, x1, x2, z);
                const double m2 = vec_max(x2);
                if (!(m2 > u_min)) continue;
                const double m = std::min(m1, m2);
                for (std::size_t k = 0; k < n_u; ++k)
                    if (m > u_levels[k]) ++blk.hits[k];
            }
        });
    std::vector<std::uint64_t> total(n_u, 0);
    for (const auto& b : blocks)
        for (std::size_t k = 0; k < n_u; ++k) total[k] += b.hits[k];
    return total;
}

} // namespace

EstimateWithCI joint_survival(double u, const ModelParams& params, const Grid& grid,
                              std::uint64_t n_reps, SeedSpec seed, unsigned threads) {
    if (u < 0.0) throw std::domain_error("joint_survival: u must be nonnegative");
    const PairSampler sampler(grid, grid, params);
    const auto counts = exceedance_counts(sampler, {u}, n_reps, seed, resolve_threads(threads));
    return EstimateWithCI::from_indicator_count(counts[0], n_reps, seed, grid.size());
}

std::vector<EstimateWithCI> joint_survival_curve(const std::vector<double>& u_levels,
                                                 const ModelParams& params, const Grid& grid,
                                                 std::uint64_t n_reps, SeedSpec seed,
                                                 unsigned threads) {
    if (u_levels.empty()) throw std::domain_error("empty u grid");
    const PairSampler sampler(grid, grid, params);
    const auto counts =
        exceedance_counts(sampler, u_levels, n_reps, seed, resolve_threads(threads));
    std::vector<EstimateWithCI> out;
    out.reserve(u_levels.size());
    for (std::size_t k = 0; k < u_levels.size(); ++k)
        out.push_back(EstimateWithCI::from_indicator_count(counts[k], n_reps, seed, grid.size()));
    return out;
}

EstimateWithCI union_prob(double u, const ModelParams& params, const Grid& grid1,
                          const Grid& grid2, std::uint64_t n_reps, SeedSpec seed,
                          unsigned threads) {
    const PairSampler sampler(grid1, grid2, params);
    const auto counts = exceedance_counts(sampler, {u}, n_reps, seed, resolve_threads(threads));
    return EstimateWithCI::from_indicator_count(counts[0], n_reps, seed,
                                                std::max(grid1.size(), grid2.size()));
}

namespace {

Grid window_grid(double anchor, Interval lambda, double delta_lambda, double scale) {
    if (lambda.hi < lambda.lo) throw std::domain_error("window interval is empty");
    // Lattice over Lambda snapped outward, mapped through anchor + scale * lambda.
    const long k_lo = static_cast<long>(std::floor(lambda.lo / delta_lambda + 1e-9));
    const long k_hi = static_cast<long>(std::ceil(lambda.hi / delta_lambda - 1e-9));
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
    for (long k = k_lo; k <= k_hi; ++k) {
        const double t = anchor + scale * (static_cast<double>(k) * delta_lambda);
        if (t > 0.0) pts.push_back(t);
    }
    if (pts.size() < 2) {
        // Degenerate window: grids need two points, so duplicate the anchor at
        // a negligible offset; the extra point moves the maximum by O(1e-4.5)
        // path fluctuation at most.
        pts.clear();
        pts.push_back(anchor);
        pts.push_back(anchor * (1.0 + 1e-9));
    }
    return Grid(std::move(pts));
}

} // namespace

EstimateWithCI local_prob(double u, const ModelParams& params, double s0_hat, double t0_hat,
                          Interval lambda1, Interval lambda2, double delta_lambda,
                          std::uint64_t n_reps, SeedSpec seed, unsigned threads) {
    if (!(u > 1.0)) throw std::domain_error("local_prob: u must exceed 1");
    const double neigh = std::log(u) * std::log(u) / (u * u);
    if (1.0 - s0_hat > neigh + 1e-12 || 1.0 - t0_hat > neigh + 1e-12)
        throw HypothesisViolated("anchor (" + std::to_string(s0_hat) + ", " +
                                 std::to_string(t0_hat) + ") outside the (ln u)^2/u^2 window");

    const Grid g1 = window_grid(s0_hat, lambda1, delta_lambda, std::pow(u, -2.0 / params.alpha1));
    const Grid g2 = window_grid(t0_hat, lambda2, delta_lambda, std::pow(u, -2.0 / params.alpha2));
    return union_prob(u, params, g1, g2, n_reps, seed, threads);
}

double local_limit_value(double u, const ModelParams& params, double s0_hat, double t0_hat, double q1,
                   double q2) {
    const double r = params.r;
    const double pref = std::pow(1.0 + r, 1.5) / (2.0 * kPi * std::sqrt(1.0 - r));
    return q1 * q2 * pref / (u * u) * std::exp(-0.5 * u * u * h_func(s0_hat, t0_hat, params));
}

// ---- first passage times ----

namespace {

// First grid index with x > u, or SIZE_MAX.
std::size_t first_crossing(const std::vector<double>& x, double u) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > u) return i;
    return static_cast<std::size_t>(-1);
}

} // namespace

FptSample fpt_pair(double u, const ModelParams& params, const Grid& grid, SeedSpec seed) {
    if (!(u > 0.0)) throw std::domain_error("fpt_pair: u must be positive");
    const PairSampler sampler(grid, grid, params);
    Rng rng(seed);
    std::vector<double> z, x1, x2;
    sampler.draw_x1(rng, x1, z);
    sampler.draw_x2_given(rng, x1, x2, z);
    FptSample out;
    const std::size_t i1 = first_crossing(x1, u);
    const std::size_t i2 = first_crossing(x2, u);
    if (i1 != static_cast<std::size_t>(-1)) out.tau1 = grid.points()[i1];
    if (i2 != static_cast<std::size_t>(-1)) out.tau2 = grid.points()[i2];
    out.both_within = std::isfinite(out.tau1) && std::isfinite(out.tau2);
    return out;
}

ConditionalFptResult conditional_fpt_sample(double u, const ModelParams& params, const Grid& grid,
                                            std::uint64_t n_target, SeedSpec seed,
                                            unsigned threads) {
    if (n_target == 0) throw std::domain_error("n_target must be positive");
    const PairSampler sampler(grid, grid, params);
    const unsigned nt = resolve_threads(threads);

    struct AcceptBlock {
        std::vector<std::pair<std::uint64_t, FptSample>> accepted; // (attempt, sample)
    };

    ConditionalFptResult out;
    out.seed = seed;
    std::vector<std::pair<std::uint64_t, FptSample>> all;
    std::uint64_t base = 0;
    std::uint64_t round = 1ull << 22; // probe batch
    const std::uint64_t probe = round;

    while (all.size() < n_target) {
        auto blocks = run_blocks<AcceptBlock>(round, 1ull << 14, nt,
            [&](std::uint64_t lo, std::uint64_t hi, AcceptBlock& blk) {
                std::vector<double> z, x1, x2;
                for (std::uint64_t a = lo; a < hi; ++a) {
                    const std::uint64_t attempt = base + a;
                    Rng rng(SeedSpec{seed.master, seed.stream + attempt});
                    sampler.draw_x1(rng, x1, z);
                    const std::size_t i1 = first_crossing(x1, u);
                    if (i1 == static_cast<std::size_t>(-1)) continue;
                    sampler.draw_x2_given(rng, x1, x2, z);
                    const std::size_t i2 = first_crossing(x2, u);
                    if (i2 == static_cast<std::size_t>(-1)) continue;
                    FptSample s;
                    s.tau1 = sampler.grid1().points()[i1];
                    s.tau2 = sampler.grid2().points()[i2];
                    s.both_within = true;
                    blk.accepted.emplace_back(attempt, s);
                }
            });
        for (auto& b : blocks)
            all.insert(all.end(), b.accepted.begin(), b.accepted.end());
        base += round;
        if (base == probe && all.empty())
            throw Timeout("acceptance rate below 1e-6 over the probe batch; u too large for "
                          "desk-scale rejection sampling");
        // Size the next round from the observed rate.
        if (all.size() < n_target) {
            const double rate = all.empty() ? 1e-6
                                            : static_cast<double>(all.size()) /
                                                  static_cast<double>(base);
            const double need = static_cast<double>(n_target - all.size()) / rate * 1.25;
            round = std::min<std::uint64_t>(1ull << 24,
                                            std::max<std::uint64_t>(1ull << 18,
                                                                    static_cast<std::uint64_t>(need)));
        }
    }

    std::sort(all.begin(), all.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    all.resize(n_target);
    out.attempts = all.back().first + 1;
    out.samples.reserve(n_target);
    for (auto& [attempt, s] : all) out.samples.push_back(s);
    out.acceptance_rate = static_cast<double>(n_target) / static_cast<double>(out.attempts);
    return out;
}

FptLimitStats fpt_limit_test(const std::vector<FptSample>& samples, double u,
                             const ModelParams& params) {
    if (samples.empty()) throw std::domain_error("fpt_limit_test: no samples");
    const auto [scale1, scale2] = fpt_limit_law(params);
    std::vector<double> x1, x2;
    x1.reserve(samples.size());
    x2.reserve(samples.size());
    for (const auto& s : samples) {
        x1.push_back(u * u * (1.0 - s.tau1));
        x2.push_back(u * u * (1.0 - s.tau2));
    }
    FptLimitStats out;
    out.ks1 = ks_distance(x1, [scale1 = scale1](double x) {
        return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x / scale1);
    });
    out.ks2 = ks_distance(x2, [scale2 = scale2](double x) {
        return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x / scale2);
    });
    out.correlation = pearson_correlation(x1, x2);

    // Empirical copula distance to the independence copula on a k x k lattice.
    const std::size_t n = samples.size();
    const std::size_t k = 20;
    std::vector<std::size_t> ord1(n), ord2(n), rank1(n), rank2(n);
    for (std::size_t i = 0; i < n; ++i) ord1[i] = ord2[i] = i;
    std::sort(ord1.begin(), ord1.end(), [&](std::size_t a, std::size_t b) { return x1[a] < x1[b]; });
    std::sort(ord2.begin(), ord2.end(), [&](std::size_t a, std::size_t b) { return x2[a] < x2[b]; });
    for (std::size_t i = 0; i < n; ++i) rank1[ord1[i]] = i;
    for (std::size_t i = 0; i < n; ++i) rank2[ord2[i]] = i;
    // Bin ranks into a k x k lattice; prefix counts give the empirical copula
    // at the lattice points (exact when k divides n).
    std::vector<std::uint32_t> cell(k * k, 0);
    for (std::size_t i = 0; i < n; ++i)
        ++cell[(rank1[i] * k / n) * k + (rank2[i] * k / n)];
    std::vector<std::uint32_t> pre(k * k, 0);
    double dist = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            std::uint32_t v = cell[i * k + j];
            if (i > 0) v += pre[(i - 1) * k + j];
            if (j > 0) v += pre[i * k + j - 1];
            if (i > 0 && j > 0) v -= pre[(i - 1) * k + j - 1];
            pre[i * k + j] = v;
            const double c_emp = static_cast<double>(v) / static_cast<double>(n);
            const double c_ind = (static_cast<double>(i + 1) / k) * (static_cast<double>(j + 1) / k);
            dist = std::max(dist, std::abs(c_emp - c_ind));
        }
    out.copula_dist = dist;
    return out;
}

EstimateWithCI independence_ratio(double u, const ModelParams& params, const Grid& grid,
                                  std::uint64_t n_reps, SeedSpec seed, unsigned threads) {
    const PairSampler sampler(grid, grid, params);
    struct RatioBlock {
        std::uint64_t both = 0;
        std::uint64_t denom = 0;
    };
    auto blocks = run_blocks<RatioBlock>(n_reps, 8192, resolve_threads(threads),
        [&](std::uint64_t lo, std::uint64_t hi, RatioBlock& blk) {
            std::vector<double> z, x1, x2;
            for (std::uint64_t rep = lo; rep < hi; ++rep) {
                Rng rng(SeedSpec{seed.master, seed.stream + rep});
                sampler.draw_x1(rng, x1, z);
                sampler.draw_x2_given(rng, x1, x2, z);
                const bool e2 = vec_max(x2) > u;
                if (!e2) continue;
                ++blk.denom;
                if (vec_max(x1) > u) ++blk.both;
            }
        });
    std::uint64_t both = 0, denom = 0;
    for (const auto& b : blocks) {
        both += b.both;
        denom += b.denom;
    }
    if (denom == 0)
        throw DegenerateDenominator("no exceedances of the conditioning supremum at u = " +
                                    std::to_string(u));
    EstimateWithCI e;
    e.n = n_reps;
    e.seed = seed;
    e.grid_n = grid.size();
    const double r_hat = static_cast<double>(both) / static_cast<double>(denom);
    const double p2 = static_cast<double>(denom) / static_cast<double>(n_reps);
    e.estimate = r_hat;
    // Delta method for the ratio of nested indicator means reduces to the
    // binomial error among denominator successes.
    e.stderr_ = std::sqrt(r_hat * (1.0 - r_hat) / (static_cast<double>(n_reps) * p2));
    e.ci_lo = std::max(0.0, r_hat - 1.96 * e.stderr_);
    e.ci_hi = std::min(1.0, r_hat + 1.96 * e.stderr_);
    return e;
}

BonferroniResult bonferroni_check(const DiscreteSpace& space,
                                  const std::vector<std::uint64_t>& a_events,
                                  const std::vector<std::uint64_t>& b_events) {
    const std::size_t n_out = space.mass.size();
    if (n_out == 0 || n_out > 64) throw InvalidSpace("outcome count must be in [1, 64]");
    double total = 0.0;
    for (double m : space.mass) {
        if (m < 0.0) throw InvalidSpace("negative outcome mass");
        total += m;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidSpace("masses must sum to 1");
    if (a_events.size() < 2 || b_events.size() < 2)
        throw std::domain_error("need n, m >= 2 events");

    auto prob = [&](std::uint64_t mask) {
        double p = 0.0;
        for (std::size_t i = 0; i < n_out; ++i)
            if (mask & (1ull << i)) p += space.mass[i];
        return p;
    };

    std::uint64_t union_mask = 0;
    double sum_pairs = 0.0;
    for (std::uint64_t a : a_events)
        for (std::uint64_t b : b_events) {
            union_mask |= a & b;
            sum_pairs += prob(a & b);
        }
    double corr_b = 0.0;
    for (std::uint64_t a : a_events)
        for (std::size_t l1 = 0; l1 < b_events.size(); ++l1)
            for (std::size_t l2 = l1 + 1; l2 < b_events.size(); ++l2)
                corr_b += prob(a & b_events[l1] & b_events[l2]);
    double corr_a = 0.0;
    for (std::uint64_t b : b_events)
        for (std::size_t k1 = 0; k1 < a_events.size(); ++k1)
            for (std::size_t k2 = k1 + 1; k2 < a_events.size(); ++k2)
                corr_a += prob(a_events[k1] & a_events[k2] & b);

    BonferroniResult out;
    out.lhs = prob(union_mask);
    out.rhs = sum_pairs - corr_b - corr_a;
    out.holds = out.lhs >= out.rhs - 1e-12;
    return out;
}

} // namespace corrfbm
