#include "corrfbm/bounds.hpp"

#include <cmath>

#include "corrfbm/optimize.hpp"
#include "corrfbm/parallel.hpp"
#include "corrfbm/sampler.hpp"

namespace corrfbm {

VarianceField VarianceField::fbm(const ModelParams& params, Rect region) {
    VarianceField f;
    f.sigma1 = [a = params.alpha1](double s) { return std::pow(s, 0.5 * a); };
    f.sigma2 = [a = params.alpha2](double t) { return std::pow(t, 0.5 * a); };
    f.rho = [r = params.r](double, double) { return r; };
    f.region = region;
    return f;
}

double c_func(double s, double t, const VarianceField& field) {
    const double s1 = field.sigma1(s);
    const double s2 = field.sigma2(t);
    return std::min(s1 / s2, s2 / s1);
}

double sigma_sq(double s, double t, const VarianceField& field) {
    const double s1 = field.sigma1(s);
    const double s2 = field.sigma2(t);
    const double r = field.rho(s, t);
    const double c = std::min(s1 / s2, s2 / s1);
    const double min_var = std::min(s1 * s1, s2 * s2);
    if (r >= c) return 1.0 / min_var;

    const double v = (1.0 + (c - r) * (c - r) / (1.0 - r * r)) / min_var;
    const double v2 = (s1 * s1 + s2 * s2 - 2.0 * s1 * s2 * r) /
                      (s1 * s1 * s2 * s2 * (1.0 - r * r));
    if (std::abs(v - v2) > 1e-10 * std::max(1.0, std::abs(v)))
        throw InternalMismatch("sigma_sq forms disagree at (s=" + std::to_string(s) +
                               ", t=" + std::to_string(t) + "): " + std::to_string(v) + " vs " +
                               std::to_string(v2));
    return v;
}

std::pair<double, double> weights(double s, double t, const VarianceField& field) {
    const double s1 = field.sigma1(s);
    const double s2 = field.sigma2(t);
    const double r = field.rho(s, t);
    const double c = std::min(s1 / s2, s2 / s1);
    if (c > r) {
        const double big_a = s1 * s1 + s2 * s2 - 2.0 * s1 * s2 * r;
        return {(s2 * s2 - s1 * s2 * r) / big_a, (s1 * s1 - s1 * s2 * r) / big_a};
    }
    return s1 <= s2 ? std::pair<double, double>{1.0, 0.0} : std::pair<double, double>{0.0, 1.0};
}

TauBound minimize_sigma_sq(const VarianceField& field, std::size_t grid_res) {
    const Rect& v = field.region;
    double best_s = v.s_hi, best_t = v.t_hi;
    double best = sigma_sq(best_s, best_t, field);
    for (std::size_t i = 0; i < grid_res; ++i) {
        const double s = v.s_lo + (v.s_hi - v.s_lo) * static_cast<double>(i) /
                                      static_cast<double>(grid_res - 1);
        for (std::size_t j = 0; j < grid_res; ++j) {
            const double t = v.t_lo + (v.t_hi - v.t_lo) * static_cast<double>(j) /
                                          static_cast<double>(grid_res - 1);
            const double val = sigma_sq(s, t, field);
            if (val < best) {
                best = val;
                best_s = s;
                best_t = t;
            }
        }
    }
    const auto refined = nelder_mead_2d(
        [&](double s, double t) { return sigma_sq(s, t, field); },
        v.s_lo, v.s_hi, v.t_lo, v.t_hi, best_s, best_t);
    TauBound out;
    out.tau_sq = refined.value;
    out.argmin_s = refined.x;
    out.argmin_t = refined.y;
    out.regime_r_below_c =
        field.rho(out.argmin_s, out.argmin_t) < c_func(out.argmin_s, out.argmin_t, field);
    return out;
}

double borell_bound(double u, double tau_sq, double mu) {
    if (u < mu)
        throw ThresholdBelowMu("u = " + std::to_string(u) + " below mu = " + std::to_string(mu));
    return std::exp(-0.5 * (u - mu) * (u - mu) * tau_sq);
}

double borell_bound(double u, const VarianceField& field, double mu) {
    return borell_bound(u, minimize_sigma_sq(field).tau_sq, mu);
}

double piterbarg_bound(double u, double tau_sq, double mes_V, double gamma, double C) {
    if (!(C > 0.0)) throw std::domain_error("C must be positive");
    if (!(gamma > 0.0)) throw std::domain_error("gamma must be positive");
    return C * mes_V * std::pow(u, 4.0 / gamma - 1.0) * std::exp(-0.5 * u * u * tau_sq);
}

double piterbarg_bound(double u, const VarianceField& field, double gamma, double C) {
    const Rect& v = field.region;
    const double mes = (v.s_hi - v.s_lo) * (v.t_hi - v.t_lo);
    return piterbarg_bound(u, minimize_sigma_sq(field).tau_sq, mes, gamma, C);
}

double calibrate_piterbarg_C(const VarianceField& field, double gamma,
                             const std::vector<double>& u_train,
                             const std::vector<double>& estimates) {
    if (u_train.size() != estimates.size() || u_train.empty())
        throw std::domain_error("calibration grids must be nonempty and aligned");
    const double tau_sq = minimize_sigma_sq(field).tau_sq;
    const Rect& v = field.region;
    const double mes = (v.s_hi - v.s_lo) * (v.t_hi - v.t_lo);
    double c = 0.0;
    for (std::size_t i = 0; i < u_train.size(); ++i) {
        const double unit = piterbarg_bound(u_train[i], tau_sq, mes, gamma, 1.0);
        c = std::max(c, estimates[i] / unit);
    }
    return c;
}

std::pair<double, double> holder_constants(const ModelParams& params, const Rect& region,
                                           std::size_t scan_points) {
    const double gamma = std::min(params.alpha1, params.alpha2);
    const double diam1 = region.s_hi - region.s_lo;
    const double diam2 = region.t_hi - region.t_lo;
    double big_l = 0.0;
    for (std::size_t i = 1; i <= scan_points; ++i) {
        const double d1 = diam1 * static_cast<double>(i) / static_cast<double>(scan_points);
        const double d2 = diam2 * static_cast<double>(i) / static_cast<double>(scan_points);
        big_l = std::max(big_l, std::pow(d1, params.alpha1 - gamma));
        big_l = std::max(big_l, std::pow(d2, params.alpha2 - gamma));
    }
    return {gamma, big_l};
}

double f_func(double s, double t, const ModelParams& params) {
    if (!(s > 0.0) || !(t > 0.0)) throw std::domain_error("f(s,t) has a pole at s=0 or t=0");
    const double sh = std::pow(s, 0.5 * params.alpha1);
    const double th = std::pow(t, 0.5 * params.alpha2);
    const double hat_c = std::min(th / sh, sh / th);
    const double r = params.r;
    double v = 1.0;
    if (r < hat_c) v += (hat_c - r) * (hat_c - r) / (1.0 - r * r);
    return v / std::min(sh * sh, th * th);
}

MuEstimate estimate_mu_fbm(const ModelParams& params, const Rect& region, std::size_t res,
                           std::uint64_t n_reps, SeedSpec seed, unsigned threads) {
    const VarianceField field = VarianceField::fbm(params, region);

    Grid gs = Grid::uniform_clipped(res, std::max(region.s_lo, 1e-9), region.s_hi);
    Grid gt = Grid::uniform_clipped(res, std::max(region.t_lo, 1e-9), region.t_hi);
    const PairSampler sampler(gs, gt, params);

    // Weights on the evaluation grid are deterministic; precompute.
    std::vector<double> wa(res * res), wb(res * res);
    for (std::size_t i = 0; i < res; ++i)
        for (std::size_t j = 0; j < res; ++j) {
            const auto [a, b] = weights(gs.points()[i], gt.points()[j], field);
            wa[i * res + j] = a;
            wb[i * res + j] = b;
        }

    auto rep_value = [&](std::uint64_t rep) {
        Rng rng(SeedSpec{seed.master, seed.stream + rep});
        thread_local std::vector<double> z, x1, x2;
        sampler.draw_x1(rng, x1, z);
        sampler.draw_x2_given(rng, x1, x2, z);
        double sup = -1e300;
        for (std::size_t i = 0; i < res; ++i)
            for (std::size_t j = 0; j < res; ++j) {
                const double y = wa[i * res + j] * x1[i] + wb[i * res + j] * x2[j];
                if (y > sup) sup = y;
            }
        return sup;
    };
    const EstimateWithCI e = replicate_mean(n_reps, seed, threads, res, rep_value);
    return {e.estimate, e.stderr_, e.n};
}

} // namespace corrfbm
