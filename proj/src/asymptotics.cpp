#include "corrfbm/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "corrfbm/optimize.hpp"

namespace corrfbm {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

double h_func(double s, double t, const ModelParams& params) {
    if (!(s > 0.0) || !(t > 0.0)) throw std::domain_error("h(s,t) has a pole at s=0 or t=0");
    const double sa = std::pow(s, params.alpha1);
    const double ta = std::pow(t, params.alpha2);
    const double sh = std::pow(s, 0.5 * params.alpha1);
    const double th = std::pow(t, 0.5 * params.alpha2);
    return (ta + sa - 2.0 * params.r * sh * th) / (sa * ta * (1.0 - params.r * params.r));
}

std::pair<double, double> h_gradient(double s, double t, const ModelParams& params) {
    const double a1 = params.alpha1, a2 = params.alpha2, r = params.r;
    const double sa = std::pow(s, a1);
    const double ta = std::pow(t, a2);
    const double sh = std::pow(s, 0.5 * a1);
    const double th = std::pow(t, 0.5 * a2);
    const double num = ta + sa - 2.0 * r * sh * th;
    const double den = sa * ta * (1.0 - r * r);
    const double dnum_ds = a1 * sa / s - r * a1 * sh * th / s;
    const double dden_ds = a1 * den / s;
    const double dnum_dt = a2 * ta / t - r * a2 * sh * th / t;
    const double dden_dt = a2 * den / t;
    return {(dnum_ds * den - num * dden_ds) / (den * den),
            (dnum_dt * den - num * dden_dt) / (den * den)};
}

HAnalysis analyze_h(const ModelParams& params) {
    const int m = 512;
    double best_s = 1.0, best_t = 1.0;
    double best_v = h_func(1.0, 1.0, params);
    for (int i = 1; i <= m; ++i) {
        const double s = static_cast<double>(i) / m;
        for (int j = 1; j <= m; ++j) {
            const double t = static_cast<double>(j) / m;
            const double v = h_func(s, t, params);
            if (v < best_v) {
                best_v = v;
                best_s = s;
                best_t = t;
            }
        }
    }
    const auto refined = nelder_mead_2d(
        [&](double s, double t) { return h_func(s, t, params); },
        1e-6, 1.0, 1e-6, 1.0, best_s, best_t);

    HAnalysis out;
    out.min_s = refined.x;
    out.min_t = refined.y;
    out.min_value = refined.value;
    out.taylor_s = params.alpha1 / (1.0 + params.r);
    out.taylor_t = params.alpha2 / (1.0 + params.r);
    if (std::abs(out.min_s - 1.0) > 1e-4 || std::abs(out.min_t - 1.0) > 1e-4)
        throw MinimizerMismatch("numerical minimizer of h deviates from (1,1): s=" +
                                std::to_string(out.min_s) + ", t=" + std::to_string(out.min_t));
    return out;
}

double single_fbm_asymptotic(double u, double alpha, std::optional<double> pickands) {
    if (!(u > 0.0)) throw std::domain_error("single_fbm_asymptotic: u must be positive");
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::domain_error("alpha out of (0,2)");
    double f;
    if (alpha < 1.0) {
        if (!pickands) throw MissingPickands("Pickands constant required for alpha < 1");
        f = std::pow(2.0, 1.0 - 1.0 / alpha) / alpha * (*pickands) * std::pow(u, 2.0 / alpha - 2.0);
    } else if (alpha == 1.0) {
        f = 2.0;
    } else {
        f = 1.0;
    }
    return f / std::sqrt(2.0 * kPi) / u * std::exp(-0.5 * u * u);
}

double upsilon(double u, double alpha, double r, std::optional<double> pickands) {
    if (!(u > 0.0)) throw std::domain_error("upsilon: u must be positive");
    if (alpha < 1.0) {
        if (!pickands) throw MissingPickands("Pickands constant required for alpha < 1");
        return std::pow(2.0, 1.0 - 1.0 / alpha) * std::pow(1.0 + r, 1.0 - 2.0 / alpha) / alpha *
               (*pickands) * std::pow(u, 2.0 / alpha - 2.0);
    }
    if (alpha == 1.0) return (2.0 + r) / (1.0 + r);
    return 1.0;
}

AsymptoticValue joint_asymptotic(double u, const ModelParams& params,
                                 std::optional<double> pickands1,
                                 std::optional<double> pickands2) {
    AsymptoticValue out;
    out.upsilon1 = upsilon(u, params.alpha1, params.r, pickands1);
    out.upsilon2 = upsilon(u, params.alpha2, params.r, pickands2);
    out.prefactor = std::pow(1.0 + params.r, 1.5) / (2.0 * kPi * std::sqrt(1.0 - params.r));
    out.u_factor = 1.0 / (u * u);
    out.psi = std::exp(-u * u / (1.0 + params.r));
    out.value = out.prefactor * out.upsilon1 * out.upsilon2 * out.u_factor * out.psi;
    return out;
}

std::pair<double, double> fpt_limit_law(const ModelParams& params) {
    const double c = 2.0 * (1.0 + params.r);
    return {c / params.alpha1, c / params.alpha2};
}

double conditional_maxima_limit(double x1, double x2, double r) {
    if (x1 < 0.0 || x2 < 0.0) throw std::domain_error("offsets must be nonnegative");
    return std::exp(-(x1 + x2) / (1.0 + r));
}

} // namespace corrfbm
