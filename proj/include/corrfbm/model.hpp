#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "corrfbm/errors.hpp"

namespace corrfbm {

// Pair of fBm exponents (alpha = 2 * Hurst index) and the constant
// cross-correlation r of the jointly Gaussian pair.
struct ModelParams {
    double alpha1;
    double alpha2;
    double r;

    ModelParams(double a1, double a2, double r_);
};

// Ordered sample points in (0, T]. The zero time is excluded: X(0) = 0
// deterministically, and samplers prepend it.
class Grid {
public:
    explicit Grid(std::vector<double> points);

    static Grid uniform(std::size_t n, double horizon = 1.0);
    // Uniform n points on [t_min, horizon]. Starting the grid away from zero
    // keeps the joint covariance PSD for larger |r| (the constant-correlation
    // constraint tightens as the smallest grid point approaches 0).
    static Grid uniform_clipped(std::size_t n, double t_min, double horizon = 1.0);

    const std::vector<double>& points() const { return pts_; }
    std::size_t size() const { return pts_.size(); }
    double horizon() const { return pts_.back(); }

private:
    std::vector<double> pts_;
};

// ---- covariance kernels ----

// fBm auto-covariance (t^alpha variance normalization):
//   (s, t) -> (s^a + t^a - |t-s|^a) / 2
double fbm_covariance(double s, double t, double alpha);

// Cross covariance of the constant-correlation pair:
//   (s, t) -> r * s^(a1/2) * t^(a2/2)
double cross_covariance(double s, double t, const ModelParams& params);

// 2n x 2n joint covariance, block layout [X1-block, cross; cross^T, X2-block],
// with the PSD validation outcome recorded.
struct JointCovariance {
    std::vector<double> matrix; // row-major, dim x dim
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    ModelParams params;
    Grid grid1;
    Grid grid2;
    double jitter = 0.0;           // jitter added to the diagonal (possibly 0)
    std::vector<double> chol;      // lower-triangular Cholesky factor of matrix + jitter*I

    std::size_t dim() const { return n1 + n2; }
    double at(std::size_t i, std::size_t j) const { return matrix[i * dim() + j]; }

    void save(const std::string& path) const;
    static JointCovariance load(const std::string& path);
};

// Assembles the auto blocks and the cross block, then validates positive
// semi-definiteness: plain Cholesky first, then diagonal jitter starting at
// 1e-12 * max-diagonal and doubling up to 1e-8 * max-diagonal. Beyond that
// throws NotPositiveSemiDefinite: the parameter triple does not admit a
// jointly Gaussian pair with constant cross-correlation on this grid.
JointCovariance build_joint_covariance(const Grid& grid1, const Grid& grid2,
                                       const ModelParams& params);

// ---- dense linear algebra used by the covariance machinery ----

// In-place lower Cholesky of a row-major symmetric matrix; returns false if a
// non-positive pivot is met.
bool cholesky_in_place(std::vector<double>& a, std::size_t n);

// Factor A (+ jitter per the policy above) and report the jitter used.
// Returns empty vector on failure.
std::vector<double> cholesky_with_jitter(const std::vector<double>& a, std::size_t n,
                                         double& jitter_out);

} // namespace corrfbm
