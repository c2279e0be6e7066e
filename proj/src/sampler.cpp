#include "corrfbm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "corrfbm/fft.hpp"

namespace corrfbm {

std::pair<double, std::size_t> path_supremum(const std::vector<double>& path) {
    if (path.empty()) throw std::domain_error("path_supremum: empty path");
    double best = path[0];
    std::size_t arg = 0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (path[i] > best) {
            best = path[i];
            arg = i;
        }
    }
    return {best, arg};
}

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Unit-step fGn autocovariance.
double fgn_rho(std::size_t k, double alpha) {
    const double km = static_cast<double>(k);
    return 0.5 * (std::pow(km + 1.0, alpha) - 2.0 * std::pow(km, alpha) +
                  std::pow(std::abs(km - 1.0), alpha));
}

} // namespace

FgnSampler::FgnSampler(double alpha, std::size_t n_increments, double dt, bool force_cholesky)
    : m_(n_increments), scale_(std::pow(dt, 0.5 * alpha)) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw std::domain_error("FgnSampler: alpha out of (0,2]");
    if (m_ == 0) throw std::domain_error("FgnSampler: need at least one increment");

    if (!force_cholesky) {
        embed_ = next_pow2(std::max<std::size_t>(2 * m_, 2));
        const std::size_t half = embed_ / 2;
        std::vector<std::complex<double>> c(embed_);
        for (std::size_t j = 0; j <= half; ++j) c[j] = fgn_rho(j, alpha);
        for (std::size_t j = 1; j < half; ++j) c[embed_ - j] = c[j];
        fft_radix2(c);

        double min_l = 0.0, max_l = 0.0;
        for (const auto& z : c) {
            min_l = std::min(min_l, z.real());
            max_l = std::max(max_l, z.real());
        }
        if (min_l >= -1e-10 * max_l) {
            sqrt_lambda_.resize(embed_);
            for (std::size_t j = 0; j < embed_; ++j)
                sqrt_lambda_[j] = std::sqrt(std::max(0.0, c[j].real()));
            return;
        }
    }

    // Cholesky fallback on the m x m Toeplitz covariance.
    std::vector<double> cov(m_ * m_);
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < m_; ++j)
            cov[i * m_ + j] = fgn_rho(i > j ? i - j : j - i, alpha);
    double jitter = 0.0;
    chol_ = cholesky_with_jitter(cov, m_, jitter);
    if (chol_.empty())
        throw EmbeddingFailed("fGn covariance not factorizable (alpha=" + std::to_string(alpha) +
                              ", m=" + std::to_string(m_) + ")");
}

void FgnSampler::sample(Rng& rng, double* out) const {
    if (!chol_.empty()) {
        std::vector<double> z(m_);
        rng.fill_normal(z.data(), m_);
        for (std::size_t i = 0; i < m_; ++i) {
            double s = 0.0;
            const double* row = &chol_[i * m_];
            for (std::size_t k = 0; k <= i; ++k) s += row[k] * z[k];
            out[i] = scale_ * s;
        }
        return;
    }

    const std::size_t half = embed_ / 2;
    std::vector<std::complex<double>> v(embed_);
    v[0] = sqrt_lambda_[0] * rng.next_normal();
    v[half] = sqrt_lambda_[half] * rng.next_normal();
    const double inv_sqrt2 = 0.7071067811865475244;
    for (std::size_t j = 1; j < half; ++j) {
        const double a = rng.next_normal() * inv_sqrt2;
        const double b = rng.next_normal() * inv_sqrt2;
        v[j] = sqrt_lambda_[j] * std::complex<double>(a, b);
        v[embed_ - j] = std::conj(v[j]);
    }
    fft_radix2(v);
    const double norm = scale_ / std::sqrt(static_cast<double>(embed_));
    for (std::size_t i = 0; i < m_; ++i) out[i] = v[i].real() * norm;
}

std::vector<double> sample_fbm_path(double alpha, std::size_t n, double dt, SeedSpec seed) {
    FgnSampler fgn(alpha, n, dt);
    Rng rng(seed);
    std::vector<double> incr(n);
    fgn.sample(rng, incr.data());
    std::vector<double> path(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += incr[i];
        path[i] = acc;
    }
    return path;
}

std::vector<double> sample_fbm_two_sided(const FgnSampler& fgn, std::size_t k_neg,
                                         std::size_t k_pos, Rng& rng) {
    const std::size_t m = k_neg + k_pos;
    if (fgn.size() != m) throw std::domain_error("sample_fbm_two_sided: sampler length mismatch");
    std::vector<double> incr(m);
    fgn.sample(rng, incr.data());
    std::vector<double> path(m + 1);
    path[k_neg] = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < k_pos; ++i) {
        acc += incr[k_neg + i];
        path[k_neg + 1 + i] = acc;
    }
    acc = 0.0;
    for (std::size_t i = 0; i < k_neg; ++i) {
        acc -= incr[k_neg - 1 - i];
        path[k_neg - 1 - i] = acc;
    }
    return path;
}

// ---- PairSampler ----

void PairSampler::BlockFactor::apply(const double* z, std::vector<double>& out) const {
    out.resize(n);
    if (brownian) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += sqrt_dt[i] * z[i];
            out[i] = acc;
        }
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        const double* row = &dense[i * n];
        for (std::size_t k = 0; k <= i; ++k) s += row[k] * z[k];
        out[i] = s;
    }
}

PairSampler::PairSampler(const Grid& grid1, const Grid& grid2, const ModelParams& params)
    : grid1_(grid1), grid2_(grid2), params_(params) {
    if (grid1_.points().front() <= 0.0 || grid2_.points().front() <= 0.0)
        throw std::domain_error("pair sampler grids must exclude t = 0");

    const auto& s = grid1_.points();
    const auto& t = grid2_.points();
    const std::size_t n1 = s.size();
    const std::size_t n2 = t.size();

    auto build_auto = [](const std::vector<double>& pts, double alpha) {
        const std::size_t n = pts.size();
        std::vector<double> sig(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const double v = fbm_covariance(pts[i], pts[j], alpha);
                sig[i * n + j] = v;
                sig[j * n + i] = v;
            }
        return sig;
    };

    // X1 factor. The Brownian min-kernel factors exactly as the increment
    // cumsum on any increasing grid, so alpha = 1 skips the dense path.
    f1_.n = n1;
    if (params_.alpha1 == 1.0) {
        f1_.brownian = true;
        f1_.sqrt_dt.resize(n1);
        double prev = 0.0;
        for (std::size_t i = 0; i < n1; ++i) {
            f1_.sqrt_dt[i] = std::sqrt(s[i] - prev);
            prev = s[i];
        }
    } else {
        double jit = 0.0;
        f1_.dense = cholesky_with_jitter(build_auto(s, params_.alpha1), n1, jit);
        if (f1_.dense.empty())
            throw NotPositiveSemiDefinite("fBm auto-covariance (X1 block) not factorizable");
        jitter_ = std::max(jitter_, jit);
    }

    if (params_.r != 0.0) {
        // Rank-one cross structure: w = Sigma1^{-1} f, q = f^T w.
        std::vector<double> f(n1);
        for (std::size_t i = 0; i < n1; ++i) f[i] = std::pow(s[i], 0.5 * params_.alpha1);
        g_.resize(n2);
        for (std::size_t j = 0; j < n2; ++j) g_[j] = std::pow(t[j], 0.5 * params_.alpha2);

        w_ = f;
        if (f1_.brownian) {
            // Solve L y = f then L^T w = y with the bidiagonal cumsum factor:
            // (L y)_i = sum_{k<=i} sqrt_dt_k y_k.
            std::vector<double> y(n1);
            double acc = 0.0;
            for (std::size_t i = 0; i < n1; ++i) {
                y[i] = (f[i] - acc) / f1_.sqrt_dt[i];
                acc += f1_.sqrt_dt[i] * y[i];
            }
            // (L^T w)_i = sqrt_dt_i * sum_{k>=i} w'... backward substitution:
            double tail = 0.0;
            for (std::size_t ii = n1; ii-- > 0;) {
                w_[ii] = y[ii] / f1_.sqrt_dt[ii] - tail;
                tail += w_[ii];
            }
        } else {
            const std::size_t n = n1;
            const auto& l = f1_.dense;
            std::vector<double> y(n);
            for (std::size_t i = 0; i < n; ++i) {
                double acc = f[i];
                for (std::size_t k = 0; k < i; ++k) acc -= l[i * n + k] * y[k];
                y[i] = acc / l[i * n + i];
            }
            for (std::size_t ii = n; ii-- > 0;) {
                double acc = y[ii];
                for (std::size_t k = ii + 1; k < n; ++k) acc -= l[k * n + ii] * w_[k];
                w_[ii] = acc / l[ii * n + ii];
            }
        }
        double q = 0.0;
        for (std::size_t i = 0; i < n1; ++i) q += f[i] * w_[i];

        // Conditional covariance of X2 given X1: Sigma2 - r^2 q g g^T.
        auto sig2 = build_auto(t, params_.alpha2);
        const double r2q = params_.r * params_.r * q;
        for (std::size_t i = 0; i < n2; ++i)
            for (std::size_t j = 0; j < n2; ++j) sig2[i * n2 + j] -= r2q * g_[i] * g_[j];
        double jit = 0.0;
        f2_cond_.n = n2;
        f2_cond_.dense = cholesky_with_jitter(sig2, n2, jit);
        if (f2_cond_.dense.empty())
            throw NotPositiveSemiDefinite(
                "joint covariance not PSD: conditional X2 block fails (r=" +
                std::to_string(params_.r) + ", t_min=" + std::to_string(s.front()) + ")");
        jitter_ = std::max(jitter_, jit);
    } else {
        f2_cond_.n = n2;
        if (params_.alpha2 == 1.0) {
            f2_cond_.brownian = true;
            f2_cond_.sqrt_dt.resize(n2);
            double prev = 0.0;
            for (std::size_t j = 0; j < n2; ++j) {
                f2_cond_.sqrt_dt[j] = std::sqrt(t[j] - prev);
                prev = t[j];
            }
        } else {
            double jit = 0.0;
            f2_cond_.dense = cholesky_with_jitter(build_auto(t, params_.alpha2), n2, jit);
            if (f2_cond_.dense.empty())
                throw NotPositiveSemiDefinite("fBm auto-covariance (X2 block) not factorizable");
            jitter_ = std::max(jitter_, jit);
        }
    }
}

void PairSampler::draw_x1(Rng& rng, std::vector<double>& x1, std::vector<double>& z) const {
    z.resize(f1_.n);
    rng.fill_normal(z.data(), f1_.n);
    f1_.apply(z.data(), x1);
}

void PairSampler::draw_x2_given(Rng& rng, const std::vector<double>& x1, std::vector<double>& x2,
                                std::vector<double>& z) const {
    z.resize(f2_cond_.n);
    rng.fill_normal(z.data(), f2_cond_.n);
    f2_cond_.apply(z.data(), x2);
    if (params_.r != 0.0) {
        double proj = 0.0;
        for (std::size_t i = 0; i < w_.size(); ++i) proj += w_[i] * x1[i];
        const double c = params_.r * proj;
        for (std::size_t j = 0; j < x2.size(); ++j) x2[j] += c * g_[j];
    }
}

PathPair PairSampler::sample(SeedSpec seed) const {
    Rng rng(seed);
    std::vector<double> z, raw1, raw2;
    draw_x1(rng, raw1, z);
    draw_x2_given(rng, raw1, raw2, z);
    PathPair out;
    out.seed = seed;
    out.x1.reserve(raw1.size() + 1);
    out.x1.push_back(0.0);
    out.x1.insert(out.x1.end(), raw1.begin(), raw1.end());
    out.x2.reserve(raw2.size() + 1);
    out.x2.push_back(0.0);
    out.x2.insert(out.x2.end(), raw2.begin(), raw2.end());
    return out;
}

PathPair sample_pair(const JointCovariance& cov, SeedSpec seed) {
    const std::size_t dim = cov.dim();
    Rng rng(seed);
    std::vector<double> z(dim);
    rng.fill_normal(z.data(), dim);
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        double s = 0.0;
        const double* row = &cov.chol[i * dim];
        for (std::size_t k = 0; k <= i; ++k) s += row[k] * z[k];
        x[i] = s;
    }
    PathPair out;
    out.seed = seed;
    out.x1.reserve(cov.n1 + 1);
    out.x1.push_back(0.0);
    out.x1.insert(out.x1.end(), x.begin(), x.begin() + static_cast<std::ptrdiff_t>(cov.n1));
    out.x2.reserve(cov.n2 + 1);
    out.x2.push_back(0.0);
    out.x2.insert(out.x2.end(), x.begin() + static_cast<std::ptrdiff_t>(cov.n1), x.end());
    return out;
}

} // namespace corrfbm
