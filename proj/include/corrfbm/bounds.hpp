#pragma once

#include <functional>

#include "corrfbm/model.hpp"
#include "corrfbm/rng.hpp"

namespace corrfbm {

struct Rect {
    double s_lo = 0.0;
    double s_hi = 1.0;
    double t_lo = 0.0;
    double t_hi = 1.0;
};

// Variance/correlation structure of the 2-D field (Z1(s), Z2(t)) on a
// rectangle V in the positive quadrant.
struct VarianceField {
    std::function<double(double)> sigma1;
    std::function<double(double)> sigma2;
    std::function<double(double, double)> rho;
    Rect region;

    // Field of the correlated fBm pair: sigma_i(t) = t^(alpha_i/2), constant rho.
    static VarianceField fbm(const ModelParams& params, Rect region);
};

// min(sigma1/sigma2, sigma2/sigma1) in (0,1].
double c_func(double s, double t, const VarianceField& field);

// Inverse effective variance of the union event:
//   1/min(s1^2,s2^2) * (1 + (c-r)^2/(1-r^2) * I(r < c)).
// In the r < c regime the equivalent rational form
//   (s1^2 + s2^2 - 2 s1 s2 r) / (s1^2 s2^2 (1-r^2))
// is evaluated too; disagreement beyond 1e-10 throws InternalMismatch.
double sigma_sq(double s, double t, const VarianceField& field);

// Nonnegative combination weights (a, b) with a + b = 1; in the r < c regime
// 1/Var(a Z1 + b Z2) equals sigma_sq.
std::pair<double, double> weights(double s, double t, const VarianceField& field);

struct TauBound {
    double tau_sq = 0.0;
    double argmin_s = 0.0;
    double argmin_t = 0.0;
    bool regime_r_below_c = true; // regime at the argmin
};

// inf of sigma_sq over the region: grid scan plus local refinement.
TauBound minimize_sigma_sq(const VarianceField& field, std::size_t grid_res = 256);

// Union-event concentration bound exp(-(u-mu)^2 tau_m^2 / 2) for u >= mu.
double borell_bound(double u, const VarianceField& field, double mu);
double borell_bound(double u, double tau_sq, double mu);

// Polynomial-prefactor bound C mes(V) u^(4/gamma - 1) exp(-u^2 tau_m^2 / 2),
// valid for u large; the caller owns the choice of u range and C.
double piterbarg_bound(double u, const VarianceField& field, double gamma, double C);
double piterbarg_bound(double u, double tau_sq, double mes_V, double gamma, double C);

// Smallest C making the bound dominate the supplied estimates on a training
// u-grid (callers validate on a disjoint grid).
double calibrate_piterbarg_C(const VarianceField& field, double gamma,
                             const std::vector<double>& u_train,
                             const std::vector<double>& estimates);

// Global Hoelder pair (gamma, L) for the fBm field on V, computed numerically:
// E(X_i(v) - X_i(w))^2 = |v-w|^alpha_i <= L |v-w|^gamma with gamma = min alpha.
std::pair<double, double> holder_constants(const ModelParams& params, const Rect& region,
                                           std::size_t scan_points = 512);

// Exceedance-shape function from the localized analysis of the joint tail:
//   f(s,t) = (1 + (hat_c - r)^2/(1-r^2) I(r < hat_c)) / min(s^a1, t^a2),
// with hat_c = min(t^(a2/2)/s^(a1/2), s^(a1/2)/t^(a2/2)).
double f_func(double s, double t, const ModelParams& params);

// Monte Carlo estimate of mu = E sup_V (a Z1 + b Z2) for the fBm field, on a
// res x res evaluation grid of V.
struct MuEstimate {
    double mu = 0.0;
    double stderr_ = 0.0;
    std::uint64_t n = 0;
};
MuEstimate estimate_mu_fbm(const ModelParams& params, const Rect& region, std::size_t res,
                           std::uint64_t n_reps, SeedSpec seed, unsigned threads = 1);

} // namespace corrfbm
