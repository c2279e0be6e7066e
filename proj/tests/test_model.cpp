#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "corrfbm/model.hpp"
#include "oracles.hpp"

using namespace corrfbm;

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ModelParams(0.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(ModelParams(2.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(ModelParams(1.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(ModelParams(1.0, 1.0, -1.5), std::domain_error);
    CHECK_NOTHROW(ModelParams(0.1, 1.9, 0.999));
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid({1.0}), std::domain_error);
    CHECK_THROWS_AS(Grid({0.5, 0.5}), std::domain_error);
    CHECK_THROWS_AS(Grid({-0.1, 0.5}), std::domain_error);
    const Grid g = Grid::uniform(4);
    CHECK(g.points().front() == doctest::Approx(0.25)); // zero excluded
    CHECK(g.points().back() == 1.0);
    const Grid gc = Grid::uniform_clipped(5, 0.2, 1.0);
    CHECK(gc.points().front() == doctest::Approx(0.2));
    CHECK(gc.points().back() == 1.0);
}

TEST_CASE("fbm covariance closed forms") {
    CHECK(fbm_covariance(1.0, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(fbm_covariance(0.0, 1.0, 1.5) == doctest::Approx(0.0));
    CHECK(fbm_covariance(0.5, 1.0, 1.0) == doctest::Approx(0.5)); // Brownian min(s,t)
    CHECK_THROWS_AS(fbm_covariance(-0.1, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(fbm_covariance(0.5, 1.0, 2.5), std::domain_error);
}

TEST_CASE("fbm covariance properties: symmetry and diagonal identity") {
    for (double alpha : {0.4, 1.0, 1.6}) {
        for (int i = 1; i <= 7; ++i) {
            const double t = i / 7.0;
            CHECK(fbm_covariance(t, t, alpha) == doctest::Approx(std::pow(t, alpha)).epsilon(1e-14));
            for (int j = 1; j <= 7; ++j) {
                const double s = j / 7.0;
                CHECK(fbm_covariance(s, t, alpha) ==
                      doctest::Approx(fbm_covariance(t, s, alpha)).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("cross covariance closed forms") {
    const ModelParams p(1.0, 1.5, 0.5);
    CHECK(cross_covariance(1.0, 1.0, p) == doctest::Approx(0.5));
    CHECK(cross_covariance(0.0, 1.0, p) == doctest::Approx(0.0));
    const ModelParams q(1.0, 1.5, 0.4);
    CHECK(cross_covariance(0.25, 1.0, q) == doctest::Approx(0.4 * 0.5 * 1.0));
}

TEST_CASE("joint covariance: Brownian two-point block structure at r=0") {
    const Grid g({0.5, 1.0});
    const auto cov = build_joint_covariance(g, g, ModelParams(1.0, 1.0, 0.0));
    CHECK(cov.dim() == 4);
    CHECK(cov.at(0, 0) == doctest::Approx(0.5));
    CHECK(cov.at(0, 1) == doctest::Approx(0.5));
    CHECK(cov.at(1, 1) == doctest::Approx(1.0));
    // r = 0: cross block exactly zero.
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 2; j < 4; ++j) CHECK(cov.at(i, j) == 0.0);
    CHECK(cov.jitter == 0.0);
}

TEST_CASE("joint covariance symmetry and cholesky residual") {
    const Grid g = Grid::uniform_clipped(24, 0.1);
    const auto cov = build_joint_covariance(g, g, ModelParams(0.8, 1.4, 0.3));
    const std::size_t d = cov.dim();
    double max_sigma = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            CHECK(cov.at(i, j) == doctest::Approx(cov.at(j, i)).epsilon(1e-12));
            max_sigma = std::max(max_sigma, std::abs(cov.at(i, j)));
        }
    // || L L^T - Sigma ||_max <= 1e-8 || Sigma ||_max
    double max_resid = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k <= std::min(i, j); ++k)
                s += cov.chol[i * d + k] * cov.chol[j * d + k];
            double target = cov.at(i, j) + (i == j ? cov.jitter : 0.0);
            max_resid = std::max(max_resid, std::abs(s - target));
        }
    CHECK(max_resid <= 1e-8 * max_sigma);
}

TEST_CASE("joint covariance: diagonal entries are the marginal variances") {
    const Grid g = Grid::uniform_clipped(16, 0.05);
    const ModelParams p(0.6, 1.7, -0.2);
    const auto cov = build_joint_covariance(g, g, p);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(cov.at(i, i) == doctest::Approx(std::pow(g.points()[i], p.alpha1)).epsilon(1e-13));
        const std::size_t j = g.size() + i;
        CHECK(cov.at(j, j) == doctest::Approx(std::pow(g.points()[i], p.alpha2)).epsilon(1e-13));
    }
}

TEST_CASE("permutation symmetry: swapping the two coordinates transposes the blocks") {
    const Grid g1 = Grid::uniform_clipped(9, 0.2);
    const Grid g2 = Grid::uniform_clipped(13, 0.3);
    const auto cov = build_joint_covariance(g1, g2, ModelParams(0.7, 1.3, 0.4));
    const auto swapped = build_joint_covariance(g2, g1, ModelParams(1.3, 0.7, 0.4));
    const std::size_t n1 = g1.size(), n2 = g2.size(), d = n1 + n2;
    auto perm = [&](std::size_t i) { return i < n1 ? n2 + i : i - n1; };
    double trace_a = 0.0, trace_b = 0.0, frob_a = 0.0, frob_b = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        trace_a += cov.at(i, i);
        trace_b += swapped.at(i, i);
        for (std::size_t j = 0; j < d; ++j) {
            CHECK(swapped.at(perm(i), perm(j)) == doctest::Approx(cov.at(i, j)).epsilon(1e-14));
            frob_a += cov.at(i, j) * cov.at(i, j);
            frob_b += swapped.at(i, j) * swapped.at(i, j);
        }
    }
    // Spectrum invariants of the permutation similarity.
    CHECK(trace_a == doctest::Approx(trace_b).epsilon(1e-13));
    CHECK(frob_a == doctest::Approx(frob_b).epsilon(1e-13));
}

TEST_CASE("grids must exclude zero for assembly") {
    CHECK_THROWS_AS(build_joint_covariance(Grid({0.0, 1.0}), Grid({0.5, 1.0}),
                                           ModelParams(1.0, 1.0, 0.0)),
                    std::domain_error);
}

TEST_CASE("feasibility boundary: constant correlation fails on fine uniform grids") {
    // |r| = 0.5, alpha = 1: feasible on coarse uniform grids, infeasible from
    // n = 64 on. Clipping the grid away from zero restores feasibility.
    const ModelParams p(1.0, 1.0, 0.5);
    CHECK_NOTHROW(build_joint_covariance(Grid::uniform(32), Grid::uniform(32), p));
    CHECK_THROWS_AS(build_joint_covariance(Grid::uniform(64), Grid::uniform(64), p),
                    NotPositiveSemiDefinite);
    const Grid clipped = Grid::uniform_clipped(128, 1.0 / 32);
    CHECK_NOTHROW(build_joint_covariance(clipped, clipped, p));
}

TEST_CASE("feasibility scan agrees with an independent eigenvalue oracle") {
    // The Cholesky-with-jitter verdict must match the sign of the smallest
    // eigenvalue computed by Jacobi iteration.
    const Grid g = Grid::uniform(24);
    const std::size_t n = g.size(), d = 2 * n;
    for (double r : {0.0, 0.3, 0.6, 0.8, 0.95}) {
        for (double a2 : {0.6, 1.0, 1.8}) {
            const ModelParams p(1.0, a2, r);
            bool feasible = true;
            try {
                (void)build_joint_covariance(g, g, p);
            } catch (const NotPositiveSemiDefinite&) {
                feasible = false;
            }
            // Raw matrix without the PSD gate.
            std::vector<double> sigma(d * d, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    sigma[i * d + j] = fbm_covariance(g.points()[i], g.points()[j], p.alpha1);
                    sigma[(n + i) * d + n + j] =
                        fbm_covariance(g.points()[i], g.points()[j], p.alpha2);
                    sigma[i * d + n + j] = cross_covariance(g.points()[i], g.points()[j], p);
                    sigma[(n + j) * d + i] = sigma[i * d + n + j];
                }
            const double min_eig = oracles::min_eigenvalue_sym(sigma, d);
            if (feasible) {
                CHECK(min_eig > -1e-8);
            } else {
                CHECK(min_eig < 0.0);
            }
        }
    }
}

TEST_CASE("covariance cache round-trip") {
    const Grid g = Grid::uniform_clipped(10, 0.1);
    const auto cov = build_joint_covariance(g, g, ModelParams(0.9, 1.1, 0.25));
    const std::string path = "/tmp/corrfbm_cov_cache_test.bin";
    cov.save(path);
    const auto back = JointCovariance::load(path);
    std::remove(path.c_str());
    REQUIRE(back.dim() == cov.dim());
    CHECK(back.params.alpha1 == cov.params.alpha1);
    CHECK(back.params.r == cov.params.r);
    CHECK(back.jitter == cov.jitter);
    for (std::size_t i = 0; i < cov.matrix.size(); ++i) {
        CHECK(back.matrix[i] == cov.matrix[i]);
        CHECK(back.chol[i] == cov.chol[i]);
    }
    CHECK(back.grid1.points() == cov.grid1.points());
}
