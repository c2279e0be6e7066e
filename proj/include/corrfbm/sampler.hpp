#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include "corrfbm/model.hpp"
#include "corrfbm/rng.hpp"

namespace corrfbm {

// One joint realization; values aligned to the grids with X(0) = 0 prepended.
struct PathPair {
    std::vector<double> x1;
    std::vector<double> x2;
    SeedSpec seed{};
};

// (max value, first index attaining it)
std::pair<double, std::size_t> path_supremum(const std::vector<double>& path);

// ---- single-path fBm sampler ----

// Stationary fractional Gaussian noise on a uniform step, drawn through a
// circulant embedding of the Toeplitz covariance (Cholesky fallback when the
// embedding spectrum goes negative beyond tolerance). alpha = 2 is allowed:
// the noise degenerates to a single Gaussian slope, which the embedding
// handles exactly. force_cholesky routes through the fallback, mainly so the
// two routes can be compared in distribution.
class FgnSampler {
public:
    FgnSampler(double alpha, std::size_t n_increments, double dt, bool force_cholesky = false);

    // n_increments unit draws scaled to step dt, written to out.
    void sample(Rng& rng, double* out) const;

    std::size_t size() const { return m_; }
    bool used_fallback() const { return !chol_.empty(); }

private:
    std::size_t m_;
    double scale_;                    // dt^(alpha/2)
    std::size_t embed_;               // circulant size (power of two, >= 2m)
    std::vector<double> sqrt_lambda_; // circulant route
    std::vector<double> chol_;        // fallback route (m x m lower factor)
};

// Exact fBm path on a uniform grid {dt, 2dt, ..., n*dt}; returned values are
// aligned to the grid (X(0) = 0 is not included).
std::vector<double> sample_fbm_path(double alpha, std::size_t n, double dt, SeedSpec seed);

// fBm on a two-sided uniform grid with k_neg steps left of 0 and k_pos right,
// anchored at B(0) = 0. Returned vector has k_neg + k_pos + 1 entries; index
// k_neg is the origin.
std::vector<double> sample_fbm_two_sided(const FgnSampler& fgn, std::size_t k_neg,
                                         std::size_t k_pos, Rng& rng);

// ---- joint pair sampler ----

// Exact sampler for the correlated pair. Internally uses the block
// factorization of the 2n x 2n covariance: X1 = L1 z1, then X2 drawn from its
// exact conditional law given X1 (the cross block r * f g^T is rank one, so
// the conditional mean is a scalar projection). Equal in law to applying the
// full 2n Cholesky factor; the X2 stage can be skipped by screening callers.
class PairSampler {
public:
    PairSampler(const Grid& grid1, const Grid& grid2, const ModelParams& params);

    const Grid& grid1() const { return grid1_; }
    const Grid& grid2() const { return grid2_; }
    const ModelParams& params() const { return params_; }
    double jitter() const { return jitter_; }

    // z is caller-provided scratch for the standard-normal draws, so samplers
    // stay stateless and safe to share across replication threads.
    void draw_x1(Rng& rng, std::vector<double>& x1, std::vector<double>& z) const;
    void draw_x2_given(Rng& rng, const std::vector<double>& x1, std::vector<double>& x2,
                       std::vector<double>& z) const;

    PathPair sample(SeedSpec seed) const;

private:
    struct BlockFactor {
        bool brownian = false;            // alpha == 1: factor applies as a cumsum
        std::vector<double> sqrt_dt;      // brownian route
        std::vector<double> dense;        // dense lower-triangular factor
        std::size_t n = 0;
        void apply(const double* z, std::vector<double>& out) const;
    };

    Grid grid1_;
    Grid grid2_;
    ModelParams params_;
    BlockFactor f1_;
    BlockFactor f2_cond_;        // factor of Sigma2 - r^2 q g g^T
    std::vector<double> w_;      // Sigma1^{-1} f
    std::vector<double> g_;      // t^(alpha2/2) profile
    double jitter_ = 0.0;
};

// Literal route: x = L z with L the full 2n x 2n Cholesky factor held in cov.
// Same law as PairSampler; kept for validation and covariance-cache users.
PathPair sample_pair(const JointCovariance& cov, SeedSpec seed);

} // namespace corrfbm
