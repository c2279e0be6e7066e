#pragma once

#include <optional>

#include "corrfbm/model.hpp"

namespace corrfbm {

// Effective-variance surface controlling the joint extremes:
//   h(s,t) = (t^a2 + s^a1 - 2 r s^(a1/2) t^(a2/2)) / (s^a1 t^a2 (1 - r^2))
// on (0,1]^2; minimized at (1,1) with value 2/(1+r).
double h_func(double s, double t, const ModelParams& params);

// Analytic gradient of h (used to cross-check finite differences).
std::pair<double, double> h_gradient(double s, double t, const ModelParams& params);

struct HAnalysis {
    double min_s = 1.0;
    double min_t = 1.0;
    double min_value = 0.0;                  // expected 2/(1+r)
    double taylor_s = 0.0;                   // coefficient of (1-s): alpha1/(1+r)
    double taylor_t = 0.0;                   // coefficient of (1-t): alpha2/(1+r)
};

// Coarse 512x512 grid scan over (0,1]^2 followed by Nelder-Mead refinement.
// Throws MinimizerMismatch if the numerical minimizer strays from (1,1) by
// more than 1e-4 in either coordinate.
HAnalysis analyze_h(const ModelParams& params);

// Marginal sup tail for one fBm:
//   P(sup_[0,1] B_a > u) ~ F_a(u) u^{-1} exp(-u^2/2) / sqrt(2 pi)
// with F_a = 2^{1-1/a} H_a u^{2/a-2} / a for a in (0,1), 2 at a = 1,
// 1 for a in (1,2). H (Pickands constant) is required only when a < 1.
double single_fbm_asymptotic(double u, double alpha, std::optional<double> pickands = {});

// Case factor of the joint formula:
//   2^{1-1/a} (1+r)^{1-2/a} H_a u^{2/a-2} / a   for a in (0,1)
//   (2+r)/(1+r)                                 at a = 1
//   1                                           for a in (1,2)
double upsilon(double u, double alpha, double r, std::optional<double> pickands = {});

struct AsymptoticValue {
    double value = 0.0;      // product of all components
    double upsilon1 = 0.0;
    double upsilon2 = 0.0;
    double prefactor = 0.0;  // (1+r)^(3/2) / (2 pi sqrt(1-r))
    double u_factor = 0.0;   // u^{-2}
    double psi = 0.0;        // exp(-u^2/(1+r))
};

// Leading-order joint survival approximation:
//   (1+r)^(3/2) / (2 pi sqrt(1-r)) * U1(u) U2(u) u^{-2} exp(-u^2/(1+r))
AsymptoticValue joint_asymptotic(double u, const ModelParams& params,
                                 std::optional<double> pickands1 = {},
                                 std::optional<double> pickands2 = {});

// Scale parameters (means) of the limiting exponential pair for the rescaled
// conditional first passage times: (2(1+r)/a1, 2(1+r)/a2). The coordinates of
// the limit are independent.
std::pair<double, double> fpt_limit_law(const ModelParams& params);

// Limit of the conditional joint maxima overshoot:
//   P(M1 > u + x1/u, M2 > u + x2/u | M1 > u, M2 > u) -> exp(-(x1+x2)/(1+r))
double conditional_maxima_limit(double x1, double x2, double r);

} // namespace corrfbm
