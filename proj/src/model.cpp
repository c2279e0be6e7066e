#include "corrfbm/model.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

namespace corrfbm {

ModelParams::ModelParams(double a1, double a2, double r_) : alpha1(a1), alpha2(a2), r(r_) {
    if (!(alpha1 > 0.0 && alpha1 < 2.0))
        throw std::domain_error("alpha1 out of (0,2): " + std::to_string(a1));
    if (!(alpha2 > 0.0 && alpha2 < 2.0))
        throw std::domain_error("alpha2 out of (0,2): " + std::to_string(a2));
    if (!(r > -1.0 && r < 1.0))
        throw std::domain_error("r out of (-1,1): " + std::to_string(r_));
}

Grid::Grid(std::vector<double> points) : pts_(std::move(points)) {
    if (pts_.size() < 2) throw std::domain_error("grid needs at least 2 points");
    double prev = -1.0;
    for (double p : pts_) {
        if (!std::isfinite(p) || p < 0.0) throw std::domain_error("grid points must be finite and nonnegative");
        if (p <= prev) throw std::domain_error("grid points must be strictly increasing");
        prev = p;
    }
}

Grid Grid::uniform(std::size_t n, double horizon) {
    if (n < 2) throw std::domain_error("grid needs at least 2 points");
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = horizon * static_cast<double>(i + 1) / static_cast<double>(n);
    return Grid(std::move(pts));
}

Grid Grid::uniform_clipped(std::size_t n, double t_min, double horizon) {
    if (n < 2) throw std::domain_error("grid needs at least 2 points");
    if (!(t_min > 0.0 && t_min < horizon)) throw std::domain_error("t_min must be in (0, horizon)");
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = t_min + (horizon - t_min) * static_cast<double>(i) / static_cast<double>(n - 1);
    pts.back() = horizon;
    return Grid(std::move(pts));
}

double fbm_covariance(double s, double t, double alpha) {
    if (s < 0.0 || t < 0.0) throw std::domain_error("fbm_covariance: negative time");
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::domain_error("fbm_covariance: alpha out of (0,2)");
    return 0.5 * (std::pow(s, alpha) + std::pow(t, alpha) - std::pow(std::abs(t - s), alpha));
}

double cross_covariance(double s, double t, const ModelParams& params) {
    if (s < 0.0 || t < 0.0) throw std::domain_error("cross_covariance: negative time");
    return params.r * std::pow(s, 0.5 * params.alpha1) * std::pow(t, 0.5 * params.alpha2);
}

bool cholesky_in_place(std::vector<double>& a, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        a[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            const double* ri = &a[i * n];
            const double* rj = &a[j * n];
            for (std::size_t k = 0; k < j; ++k) s -= ri[k] * rj[k];
            a[i * n + j] = s / ljj;
        }
        for (std::size_t k = j + 1; k < n; ++k) a[j * n + k] = 0.0;
    }
    return true;
}

std::vector<double> cholesky_with_jitter(const std::vector<double>& a, std::size_t n,
                                         double& jitter_out) {
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a[i * n + i]);
    const double jitter_max = 1e-8 * max_diag;

    jitter_out = 0.0;
    for (;;) {
        std::vector<double> l = a;
        if (jitter_out > 0.0)
            for (std::size_t i = 0; i < n; ++i) l[i * n + i] += jitter_out;
        if (cholesky_in_place(l, n)) return l;
        if (jitter_out == 0.0) {
            jitter_out = 1e-12 * max_diag;
        } else {
            jitter_out *= 2.0;
            if (jitter_out > jitter_max) return {};
        }
    }
}

JointCovariance build_joint_covariance(const Grid& grid1, const Grid& grid2,
                                       const ModelParams& params) {
    if (grid1.points().front() <= 0.0 || grid2.points().front() <= 0.0)
        throw std::domain_error("joint covariance grids must exclude t = 0");

    const std::size_t n1 = grid1.size();
    const std::size_t n2 = grid2.size();
    const std::size_t dim = n1 + n2;

    JointCovariance cov{std::vector<double>(dim * dim), n1, n2, params, grid1, grid2, 0.0, {}};
    const auto& s = grid1.points();
    const auto& t = grid2.points();

    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = i; j < n1; ++j) {
            const double v = fbm_covariance(s[i], s[j], params.alpha1);
            cov.matrix[i * dim + j] = v;
            cov.matrix[j * dim + i] = v;
        }
    for (std::size_t i = 0; i < n2; ++i)
        for (std::size_t j = i; j < n2; ++j) {
            const double v = fbm_covariance(t[i], t[j], params.alpha2);
            cov.matrix[(n1 + i) * dim + (n1 + j)] = v;
            cov.matrix[(n1 + j) * dim + (n1 + i)] = v;
        }
    if (params.r != 0.0) {
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n2; ++j) {
                const double v = cross_covariance(s[i], t[j], params);
                cov.matrix[i * dim + (n1 + j)] = v;
                cov.matrix[(n1 + j) * dim + i] = v;
            }
    }

    cov.chol = cholesky_with_jitter(cov.matrix, dim, cov.jitter);
    if (cov.chol.empty())
        throw NotPositiveSemiDefinite(
            "joint covariance not PSD after maximal jitter (alpha1=" +
            std::to_string(params.alpha1) + ", alpha2=" + std::to_string(params.alpha2) +
            ", r=" + std::to_string(params.r) + ", n1=" + std::to_string(n1) +
            ", n2=" + std::to_string(n2) + ", t_min=" + std::to_string(s.front()) + ")");
    return cov;
}

namespace {
constexpr char kCacheMagic[8] = {'c', 'f', 'b', 'm', 'c', 'o', 'v', '1'};
}

void JointCovariance::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    out.write(kCacheMagic, sizeof(kCacheMagic));
    const std::uint64_t a = n1, b = n2;
    out.write(reinterpret_cast<const char*>(&a), sizeof(a));
    out.write(reinterpret_cast<const char*>(&b), sizeof(b));
    const double pars[3] = {params.alpha1, params.alpha2, params.r};
    out.write(reinterpret_cast<const char*>(pars), sizeof(pars));
    out.write(reinterpret_cast<const char*>(&jitter), sizeof(jitter));
    auto write_vec = [&out](const std::vector<double>& v) {
        const std::uint64_t sz = v.size();
        out.write(reinterpret_cast<const char*>(&sz), sizeof(sz));
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(sz * sizeof(double)));
    };
    write_vec(grid1.points());
    write_vec(grid2.points());
    write_vec(matrix);
    write_vec(chol);
    if (!out) throw std::runtime_error("write failed: " + path);
}

JointCovariance JointCovariance::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for read: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0)
        throw std::runtime_error("bad covariance cache header: " + path);
    std::uint64_t a = 0, b = 0;
    in.read(reinterpret_cast<char*>(&a), sizeof(a));
    in.read(reinterpret_cast<char*>(&b), sizeof(b));
    double pars[3];
    in.read(reinterpret_cast<char*>(pars), sizeof(pars));
    double jit = 0.0;
    in.read(reinterpret_cast<char*>(&jit), sizeof(jit));
    auto read_vec = [&in, &path]() {
        std::uint64_t sz = 0;
        in.read(reinterpret_cast<char*>(&sz), sizeof(sz));
        std::vector<double> v(sz);
        in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(sz * sizeof(double)));
        if (!in) throw std::runtime_error("truncated covariance cache: " + path);
        return v;
    };
    auto g1 = read_vec();
    auto g2 = read_vec();
    auto m = read_vec();
    auto l = read_vec();
    JointCovariance cov{std::move(m), a, b, ModelParams(pars[0], pars[1], pars[2]),
                        Grid(std::move(g1)), Grid(std::move(g2)), jit, std::move(l)};
    return cov;
}

} // namespace corrfbm
