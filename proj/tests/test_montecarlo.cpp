#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "corrfbm/bounds.hpp"
#include "corrfbm/montecarlo.hpp"
#include "corrfbm/sampler.hpp"
#include "corrfbm/stats.hpp"
#include "oracles.hpp"

using namespace corrfbm;

TEST_CASE("joint survival at u=0 approaches one under grid refinement") {
    // The continuous supremum is a.s. positive, but a grid maximum stays
    // nonpositive with probability O(n^{-1/2}) per coordinate, so the grid
    // estimator sits visibly below 1 and climbs as the grid refines.
    const ModelParams p(1.0, 1.0, 0.0);
    const auto coarse = joint_survival(0.0, p, Grid::uniform(64), 20000, SeedSpec{30, 0}, 2);
    const auto fine = joint_survival(0.0, p, Grid::uniform(1024), 20000, SeedSpec{30, 0}, 2);
    CHECK(coarse.estimate > 0.8);
    CHECK(coarse.estimate < 0.95);
    CHECK(fine.estimate > coarse.estimate);
    CHECK(fine.estimate > 0.9);
}

TEST_CASE("joint survival: Brownian product oracle with a grid-bias band") {
    // Grid maxima under-estimate continuous suprema, so the estimate sits a
    // few percent below (2 normal_sf(u))^2; the band allows that deficit plus
    // Monte Carlo noise.
    const Grid g = Grid::uniform(512);
    const double u = 1.0;
    const auto e = joint_survival(u, ModelParams(1.0, 1.0, 0.0), g, 200000, SeedSpec{31, 0}, 2);
    const double oracle = 4.0 * normal_sf(u) * normal_sf(u);
    CHECK(e.estimate < oracle + 4.0 * e.stderr_);
    CHECK(e.estimate > 0.88 * oracle - 4.0 * e.stderr_);
    CHECK(e.stderr_ == doctest::Approx(std::sqrt(e.estimate * (1.0 - e.estimate) / 200000.0))
                           .epsilon(1e-12));
}

TEST_CASE("joint survival is deterministic and thread-count invariant") {
    const Grid g = Grid::uniform(128);
    const ModelParams p(1.0, 1.0, 0.0);
    const auto a = joint_survival(1.0, p, g, 20000, SeedSpec{32, 0}, 1);
    const auto b = joint_survival(1.0, p, g, 20000, SeedSpec{32, 0}, 2);
    CHECK(a.estimate == b.estimate);
}

TEST_CASE("survival curve is nonincreasing in u (common draws, exact)") {
    const Grid g = Grid::uniform_clipped(256, 1.0 / 32);
    const auto curve = joint_survival_curve({0.5, 1.0, 1.5, 2.0}, ModelParams(1.0, 1.0, 0.5), g,
                                            50000, SeedSpec{33, 0}, 2);
    REQUIRE(curve.size() == 4);
    for (std::size_t i = 0; i + 1 < curve.size(); ++i)
        CHECK(curve[i + 1].estimate <= curve[i].estimate);
}

TEST_CASE("union over the full square equals joint survival on identical draws") {
    const Grid g = Grid::uniform(128);
    const ModelParams p(1.0, 1.0, 0.0);
    const auto a = joint_survival(1.2, p, g, 30000, SeedSpec{34, 0}, 2);
    const auto b = union_prob(1.2, p, g, g, 30000, SeedSpec{34, 0}, 2);
    CHECK(a.estimate == b.estimate);
}

TEST_CASE("degenerate window reduces to the bivariate normal tail") {
    // Windows {0} around the anchor (1,1): the event is a single bivariate
    // pair exceeding u, with correlation exactly r there.
    const double u = 1.5;
    for (double r : {0.0, 0.4}) {
        const auto e = local_prob(u, ModelParams(1.0, 1.0, r), 1.0, 1.0, Interval{0.0, 0.0},
                                  Interval{0.0, 0.0}, 0.5, 400000, SeedSpec{35, 0}, 2);
        const double oracle = oracles::bivariate_normal_survival(u, u, r);
        CHECK(std::abs(e.estimate - oracle) < 4.0 * e.stderr_ + 0.01 * oracle);
    }
}

TEST_CASE("local window hypothesis is enforced") {
    CHECK_THROWS_AS(local_prob(2.0, ModelParams(1.0, 1.0, 0.0), 0.5, 1.0, Interval{-1.0, 0.0},
                               Interval{-1.0, 0.0}, 0.1, 10, SeedSpec{36, 0}),
                    HypothesisViolated);
}

TEST_CASE("local_limit_value with unit window constants is the bare local formula") {
    const ModelParams p(1.0, 1.0, 0.0);
    const double u = 2.0;
    const double v = local_limit_value(u, p, 1.0, 1.0, 1.0, 1.0);
    const double expect = 1.0 / (2.0 * 3.14159265358979324) / (u * u) * std::exp(-u * u);
    CHECK(v == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("fpt sentinel and ordering properties") {
    const Grid g = Grid::uniform(256);
    const ModelParams p(1.0, 1.0, 0.0);
    // Huge threshold: no crossing, infinite sentinel.
    const FptSample far = fpt_pair(50.0, p, g, SeedSpec{37, 1});
    CHECK(std::isinf(far.tau1));
    CHECK(std::isinf(far.tau2));
    CHECK_FALSE(far.both_within);
    // When a crossing exists it lies on the grid and precedes the argmax.
    const PairSampler sampler(g, g, p);
    int found = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const PathPair path = sampler.sample(SeedSpec{38, s});
        const auto [m1, arg1] = path_supremum(path.x1);
        const double u = 0.8;
        const FptSample f = fpt_pair(u, p, g, SeedSpec{38, s});
        if (m1 > u) {
            ++found;
            REQUIRE(std::isfinite(f.tau1));
            // x1 is prepended with t=0, so grid index of argmax is arg1 - 1.
            CHECK(f.tau1 <= g.points()[arg1 - 1] + 1e-15);
            bool on_grid = false;
            for (double t : g.points()) on_grid = on_grid || t == f.tau1;
            CHECK(on_grid);
        }
    }
    CHECK(found > 0);
}

TEST_CASE("conditional fpt sampling: conditioning, acceptance rate, determinism") {
    const Grid g = Grid::uniform(256);
    const ModelParams p(1.0, 1.0, 0.0);
    const double u = 1.5;
    const auto res = conditional_fpt_sample(u, p, g, 2000, SeedSpec{39, 0}, 2);
    REQUIRE(res.samples.size() == 2000);
    for (const auto& s : res.samples) {
        CHECK(std::isfinite(s.tau1));
        CHECK(s.tau1 <= 1.0);
        CHECK(s.tau2 <= 1.0);
        CHECK(s.both_within);
    }
    // Acceptance rate estimates the joint survival at the same grid.
    const auto surv = joint_survival(u, p, g, 200000, SeedSpec{40, 0}, 2);
    const double se_rate =
        std::sqrt(res.acceptance_rate * (1.0 - res.acceptance_rate) / res.attempts);
    const double se = std::sqrt(se_rate * se_rate + surv.stderr_ * surv.stderr_);
    CHECK(std::abs(res.acceptance_rate - surv.estimate) < 3.5 * se);
    // Thread-count invariance, bit for bit.
    const auto res1 = conditional_fpt_sample(u, p, g, 2000, SeedSpec{39, 0}, 1);
    REQUIRE(res1.samples.size() == res.samples.size());
    for (std::size_t i = 0; i < res.samples.size(); ++i) {
        CHECK(res1.samples[i].tau1 == res.samples[i].tau1);
        CHECK(res1.samples[i].tau2 == res.samples[i].tau2);
    }
    CHECK(res1.attempts == res.attempts);
}

TEST_CASE("timeout on hopeless thresholds") {
    const Grid g = Grid::uniform(32);
    CHECK_THROWS_AS(conditional_fpt_sample(30.0, ModelParams(1.0, 1.0, 0.0), g, 10,
                                           SeedSpec{41, 0}, 2),
                    Timeout);
}

TEST_CASE("fpt limit statistics self-test on synthetic exponentials") {
    // Feed samples drawn exactly from the limit law; KS must be at the
    // sampling-noise scale and shrink like 1/sqrt(N).
    const ModelParams p(1.0, 1.0, 0.0); // scales (2, 2)
    const double u = 10.0;
    Rng rng(SeedSpec{42, 0});
    auto synth = [&](std::size_t n) {
        std::vector<FptSample> out(n);
        for (auto& s : out) {
            const double x1 = -2.0 * std::log(rng.next_uniform());
            const double x2 = -2.0 * std::log(rng.next_uniform());
            s.tau1 = 1.0 - x1 / (u * u);
            s.tau2 = 1.0 - x2 / (u * u);
            s.both_within = true;
        }
        return out;
    };
    const auto stats_small = fpt_limit_test(synth(1000), u, p);
    const auto stats_big = fpt_limit_test(synth(40000), u, p);
    CHECK(stats_small.ks1 < 0.06);
    CHECK(stats_big.ks1 < 0.012);
    CHECK(stats_big.ks2 < 0.012);
    CHECK(std::abs(stats_big.correlation) < 0.02);
    CHECK(stats_big.copula_dist < 0.02);
}

TEST_CASE("independence ratio: bounds, oracle at r=0, trend in u") {
    const Grid g = Grid::uniform(512);
    const ModelParams p(1.0, 1.0, 0.0);
    const double u = 1.5;
    const auto e = independence_ratio(u, p, g, 300000, SeedSpec{43, 0}, 2);
    CHECK(e.estimate <= 1.0);
    // r = 0: ratio estimates P(M1 > u) = 2 normal_sf(u), up to grid bias.
    const double oracle = 2.0 * normal_sf(u);
    CHECK(e.estimate < oracle + 4.0 * e.stderr_);
    CHECK(e.estimate > 0.88 * oracle - 4.0 * e.stderr_);
    // Decreasing trend across u on shared seeds (asymptotic independence).
    const auto e2 = independence_ratio(2.2, p, g, 300000, SeedSpec{43, 0}, 2);
    CHECK(e2.estimate < e.estimate);
    // Degenerate denominator at absurd u.
    CHECK_THROWS_AS(independence_ratio(40.0, p, g, 1000, SeedSpec{44, 0}, 2),
                    DegenerateDenominator);
}

TEST_CASE("standard error scales like 1/sqrt(N)") {
    const Grid g = Grid::uniform(64);
    const ModelParams p(1.0, 1.0, 0.0);
    double ratio_acc = 0.0;
    const int repeats = 20;
    for (int k = 0; k < repeats; ++k) {
        const auto small = joint_survival(1.0, p, g, 4000, SeedSpec{45, (std::uint64_t)(2 * k)}, 2);
        const auto big = joint_survival(1.0, p, g, 16000, SeedSpec{45, (std::uint64_t)(2 * k + 1)}, 2);
        ratio_acc += small.stderr_ / big.stderr_;
    }
    CHECK(ratio_acc / repeats == doctest::Approx(2.0).epsilon(0.06));
}

TEST_CASE("bonferroni: disjoint events give exact equality") {
    // Outcomes 0..3 equally likely; A's partition {0,1} vs {2,3}, B's
    // partition {0,2} vs {1,3}. All pairwise double intersections vanish.
    DiscreteSpace sp{{0.25, 0.25, 0.25, 0.25}};
    const std::vector<std::uint64_t> a{0b0011, 0b1100};
    const std::vector<std::uint64_t> b{0b0101, 0b1010};
    const auto res = bonferroni_check(sp, a, b);
    CHECK(res.holds);
    CHECK(res.lhs == doctest::Approx(1.0));
    CHECK(res.rhs == doctest::Approx(res.lhs).epsilon(1e-14));
}

TEST_CASE("bonferroni: full-space events give the counting identity") {
    DiscreteSpace sp{{0.5, 0.5}};
    const std::uint64_t full = 0b11;
    const auto res = bonferroni_check(sp, {full, full}, {full, full});
    // n = m = 2: rhs = 4 - 2 - 2 = 0 <= lhs = 1.
    CHECK(res.lhs == doctest::Approx(1.0));
    CHECK(res.rhs == doctest::Approx(0.0));
    CHECK(res.holds);
}

TEST_CASE("bonferroni holds on random spaces (exact enumeration)") {
    Rng rng(SeedSpec{46, 0});
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n_out = 2 + (rng.next_u64() % 15);
        DiscreteSpace sp;
        sp.mass.resize(n_out);
        double total = 0.0;
        for (auto& m : sp.mass) {
            m = rng.next_uniform();
            total += m;
        }
        for (auto& m : sp.mass) m /= total;
        // Renormalize exactly.
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < n_out; ++i) acc += sp.mass[i];
        sp.mass.back() = 1.0 - acc;
        auto rand_events = [&](std::size_t k) {
            std::vector<std::uint64_t> ev(k);
            for (auto& e : ev) e = rng.next_u64() & ((1ull << n_out) - 1);
            return ev;
        };
        const auto res = bonferroni_check(sp, rand_events(2 + rng.next_u64() % 3),
                                          rand_events(2 + rng.next_u64() % 3));
        CHECK(res.holds);
    }
}

TEST_CASE("bonferroni input validation") {
    CHECK_THROWS_AS(bonferroni_check(DiscreteSpace{{0.5, 0.4}}, {1, 2}, {1, 2}), InvalidSpace);
    CHECK_THROWS_AS(bonferroni_check(DiscreteSpace{{0.5, 0.5}}, {1}, {1, 2}), std::domain_error);
}

TEST_CASE("union probability is dominated by the concentration bound") {
    const ModelParams p(1.0, 1.0, 0.0);
    const Rect v{1.0 / 32, 1.0, 1.0 / 32, 1.0};
    const Grid g = Grid::uniform_clipped(128, 1.0 / 32);
    const double u = 2.0;
    const auto mc = union_prob(u, p, g, g, 100000, SeedSpec{47, 0}, 2);
    const auto mu = estimate_mu_fbm(p, v, 64, 2000, SeedSpec{48, 0}, 2);
    const auto field = VarianceField::fbm(p, v);
    const double bnd = borell_bound(u, field, mu.mu);
    CHECK(mc.estimate - 3.0 * mc.stderr_ <= bnd);
}
