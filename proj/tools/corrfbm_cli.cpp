// Command-line front end: simulation, survival/ratio estimation, asymptotic
// evaluation, Pickands-constant estimation, concentration bounds, first
// passage times, and the discrete Bonferroni verifier.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "corrfbm/asymptotics.hpp"
#include "corrfbm/bounds.hpp"
#include "corrfbm/montecarlo.hpp"
#include "corrfbm/parallel.hpp"
#include "corrfbm/pickands.hpp"
#include "corrfbm/sampler.hpp"

using nlohmann::json;
using namespace corrfbm;

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Atomic emit: write to <path>.tmp then rename; empty path means stdout.
void emit(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw CLI::ValidationError("empty numeric list: " + csv);
    return out;
}

Interval parse_interval(const std::string& s) {
    const auto pos = s.find(':');
    if (pos == std::string::npos) throw CLI::ValidationError("interval must be lo:hi, got " + s);
    return {std::stod(s.substr(0, pos)), std::stod(s.substr(pos + 1))};
}

// Config file support: values from --config fill any flag the user did not
// set on the command line (flags win).
json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot open config: " + path);
    json j;
    in >> j;
    return j;
}

template <class T>
void overlay(const CLI::App& app, const std::string& flag, const json& cfg, const std::string& key,
             T& value) {
    const auto* opt = app.get_option_no_throw("--" + flag);
    if (opt != nullptr && opt->count() > 0) return;
    if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

struct CommonOpts {
    double alpha1 = 1.0, alpha2 = 1.0, r = 0.0;
    std::size_t n = 1024;
    double t_min = 0.0, horizon = 1.0;
    std::uint64_t reps = 100000, seed = 1;
    unsigned threads = 0;
    std::string out, format, config;

    void add_model(CLI::App* cmd) {
        cmd->add_option("--alpha1", alpha1, "exponent of the first fBm, in (0,2)");
        cmd->add_option("--alpha2", alpha2, "exponent of the second fBm, in (0,2)");
        cmd->add_option("--r", r, "constant cross-correlation, in (-1,1)");
    }
    void add_grid(CLI::App* cmd) {
        cmd->add_option("--n", n, "grid points per coordinate");
        cmd->add_option("--t-min", t_min,
                        "first grid point (0 = uniform grid on (0, horizon]); larger values keep "
                        "the joint covariance PSD for larger |r|");
        cmd->add_option("--horizon", horizon, "time horizon T");
    }
    void add_run(CLI::App* cmd) {
        cmd->add_option("--reps", reps, "Monte Carlo replications");
        cmd->add_option("--seed", seed, "master seed");
        cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
        cmd->add_option("--out", out, "output file (default stdout, atomic rename)");
        cmd->add_option("--format", format, "csv or json (default depends on the run)");
        cmd->add_option("--config", config, "JSON config file; explicit flags win");
    }
    void finalize(const CLI::App& app) {
        const json cfg = load_config(config);
        overlay(app, "alpha1", cfg, "alpha1", alpha1);
        overlay(app, "alpha2", cfg, "alpha2", alpha2);
        overlay(app, "r", cfg, "r", r);
        overlay(app, "n", cfg, "n", n);
        overlay(app, "t-min", cfg, "t_min", t_min);
        overlay(app, "horizon", cfg, "horizon", horizon);
        overlay(app, "reps", cfg, "reps", reps);
        overlay(app, "seed", cfg, "seed", seed);
        overlay(app, "threads", cfg, "threads", threads);
        overlay(app, "out", cfg, "out", out);
        overlay(app, "format", cfg, "format", format);
    }
    ModelParams params() const { return ModelParams(alpha1, alpha2, r); }
    Grid grid() const {
        return t_min > 0.0 ? Grid::uniform_clipped(n, t_min, horizon) : Grid::uniform(n, horizon);
    }
    json config_json() const {
        return json{{"alpha1", alpha1}, {"alpha2", alpha2}, {"r", r},       {"n", n},
                    {"t_min", t_min},   {"horizon", horizon}, {"reps", reps}, {"seed", seed}};
    }
};

json estimate_json(const EstimateWithCI& e, const json& config, double u) {
    return json{{"config", config},
                {"u", u},
                {"N", e.n},
                {"grid_n", e.grid_n},
                {"estimate", e.estimate},
                {"stderr", e.stderr_},
                {"ci95", {e.ci_lo, e.ci_hi}},
                {"seed", {{"master", e.seed.master}, {"stream", e.seed.stream}}}};
}

std::string csv_header(const std::string& schema, const json& config, const std::string& cols) {
    std::string s = "# schema: " + schema + "\n# config: " + config.dump() + "\n" + cols + "\n";
    return s;
}

// ---- subcommand runners ----

int run_simulate(const CommonOpts& o, const std::string& dump_paths) {
    const ModelParams p = o.params();
    const Grid g = o.grid();
    const PairSampler sampler(g, g, p);

    std::ostringstream sup_csv;
    sup_csv << csv_header("corrfbm.simulate.v1", o.config_json(),
                          "rep,sup1,argmax_t1,sup2,argmax_t2");
    std::ostringstream paths_csv;
    if (!dump_paths.empty())
        paths_csv << csv_header("corrfbm.paths.v1", o.config_json(), "t,x1,x2");

    for (std::uint64_t rep = 0; rep < o.reps; ++rep) {
        const PathPair pair = sampler.sample(SeedSpec{o.seed, rep});
        const auto [m1, i1] = path_supremum(pair.x1);
        const auto [m2, i2] = path_supremum(pair.x2);
        auto t_of = [&](std::size_t idx) { return idx == 0 ? 0.0 : g.points()[idx - 1]; };
        sup_csv << rep << ',' << fmt(m1) << ',' << fmt(t_of(i1)) << ',' << fmt(m2) << ','
                << fmt(t_of(i2)) << '\n';
        if (!dump_paths.empty()) {
            paths_csv << "# rep " << rep << '\n';
            for (std::size_t i = 0; i < pair.x1.size(); ++i)
                paths_csv << fmt(t_of(i)) << ',' << fmt(pair.x1[i]) << ',' << fmt(pair.x2[i])
                          << '\n';
        }
    }
    emit(o.out, sup_csv.str());
    if (!dump_paths.empty()) emit(dump_paths, paths_csv.str());
    return 0;
}

// Grid-sup bias diagnostic: rerun the curve at n/2 and 2n and report the
// n^{-1/2} Richardson step alongside the raw values, so discretization bias
// is visible instead of hidden.
int run_survival_sweep(const CommonOpts& o, const std::vector<double>& us) {
    std::vector<double> sorted(us);
    std::sort(sorted.begin(), sorted.end());
    const std::vector<std::size_t> ns{o.n / 2, o.n, o.n * 2};
    std::vector<std::vector<EstimateWithCI>> curves;
    for (std::size_t n : ns) {
        const Grid g = o.t_min > 0.0 ? Grid::uniform_clipped(n, o.t_min, o.horizon)
                                     : Grid::uniform(n, o.horizon);
        curves.push_back(
            joint_survival_curve(sorted, o.params(), g, o.reps, SeedSpec{o.seed, 0}, o.threads));
    }
    std::ostringstream csv;
    csv << csv_header("corrfbm.survival-sweep.v1", o.config_json(),
                      "u,grid_n,estimate,stderr,richardson");
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        // Extrapolate the two finest grids in n^{-1/2} (mesh halves => bias halves).
        const double extrap = 2.0 * curves[2][i].estimate - curves[1][i].estimate;
        for (std::size_t k = 0; k < ns.size(); ++k)
            csv << fmt(sorted[i]) << ',' << ns[k] << ',' << fmt(curves[k][i].estimate) << ','
                << fmt(curves[k][i].stderr_) << ',' << (k + 1 == ns.size() ? fmt(extrap) : "")
                << '\n';
    }
    emit(o.out, csv.str());
    return 0;
}

int run_survival(const CommonOpts& o, const std::vector<double>& us) {
    std::vector<double> sorted(us);
    std::sort(sorted.begin(), sorted.end());
    const auto curve =
        joint_survival_curve(sorted, o.params(), o.grid(), o.reps, SeedSpec{o.seed, 0}, o.threads);
    if (o.format == "json") {
        json arr = json::array();
        for (std::size_t i = 0; i < sorted.size(); ++i)
            arr.push_back(estimate_json(curve[i], o.config_json(), sorted[i]));
        emit(o.out, (sorted.size() == 1 ? arr[0] : arr).dump(2) + "\n");
    } else {
        std::ostringstream csv;
        csv << csv_header("corrfbm.survival.v1", o.config_json(),
                          "u,estimate,stderr,ci_lo,ci_hi,N,grid_n");
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            const auto& e = curve[i];
            csv << fmt(sorted[i]) << ',' << fmt(e.estimate) << ',' << fmt(e.stderr_) << ','
                << fmt(e.ci_lo) << ',' << fmt(e.ci_hi) << ',' << e.n << ',' << e.grid_n << '\n';
        }
        emit(o.out, csv.str());
    }
    for (std::size_t i = 0; i < sorted.size(); ++i)
        std::cerr << "u=" << sorted[i] << " estimate=" << curve[i].estimate
                  << " se=" << curve[i].stderr_ << "\n";
    return 0;
}

int run_asympt(const CommonOpts& o, const std::vector<double>& us, double h1, double h2) {
    const ModelParams p = o.params();
    std::optional<double> H1, H2;
    if (h1 > 0.0) H1 = h1;
    if (h2 > 0.0) H2 = h2;
    std::ostringstream csv;
    csv << csv_header("corrfbm.asympt.v1", o.config_json(),
                      "u,value,upsilon1,upsilon2,prefactor,u_factor,psi");
    for (double u : us) {
        const AsymptoticValue v = joint_asymptotic(u, p, H1, H2);
        csv << fmt(u) << ',' << fmt(v.value) << ',' << fmt(v.upsilon1) << ',' << fmt(v.upsilon2)
            << ',' << fmt(v.prefactor) << ',' << fmt(v.u_factor) << ',' << fmt(v.psi) << '\n';
    }
    emit(o.out, csv.str());
    return 0;
}

int run_pickands(const CommonOpts& o, double alpha, double b, const std::string& interval,
                 double delta, const std::string& sweep) {
    std::ostringstream csv;
    csv << csv_header("corrfbm.pickands.v1", o.config_json(), "alpha,b,T,delta,estimate,stderr");
    if (!sweep.empty()) {
        const auto Ts = parse_list(sweep);
        const auto ex =
            pickands_extrapolate(alpha, Ts, delta, o.reps, SeedSpec{o.seed, 0}, o.threads);
        for (std::size_t i = 0; i < Ts.size(); ++i)
            csv << fmt(alpha) << ',' << fmt(0.0) << ',' << fmt(Ts[i]) << ',' << fmt(delta) << ','
                << fmt(ex.raw[i].value) << ',' << fmt(ex.raw[i].stderr_) << '\n';
        // T = inf row: disclosed extrapolation intercept.
        csv << fmt(alpha) << ",0,inf," << fmt(delta) << ',' << fmt(ex.intercept) << ",\n";
    } else {
        const Interval lam = parse_interval(interval);
        const auto est = estimate_drifted_constant(alpha, b, lam, delta, o.reps,
                                                   SeedSpec{o.seed, 0}, o.threads);
        csv << fmt(alpha) << ',' << fmt(b) << ',' << fmt(lam.hi - lam.lo) << ',' << fmt(delta)
            << ',' << fmt(est.value) << ',' << fmt(est.stderr_) << '\n';
    }
    emit(o.out, csv.str());
    return 0;
}

int run_bounds(const CommonOpts& o, const std::string& region, const std::vector<double>& us,
               const std::string& mu_spec, const std::string& c_spec, std::uint64_t mu_reps) {
    const ModelParams p = o.params();
    const Interval reg = parse_interval(region);
    const Rect v{reg.lo, reg.hi, reg.lo, reg.hi};
    const auto field = VarianceField::fbm(p, v);
    const TauBound tb = minimize_sigma_sq(field);
    const auto [gamma, big_l] = holder_constants(p, v);

    double mu;
    if (mu_spec == "auto") {
        mu = estimate_mu_fbm(p, v, 128, mu_reps, SeedSpec{o.seed, 1}, o.threads).mu;
    } else {
        mu = std::stod(mu_spec);
    }

    // Monte Carlo estimates of the union probability on the same region.
    const Grid g = Grid::uniform_clipped(o.n, std::max(reg.lo, 1e-9), reg.hi);
    std::vector<double> sorted(us);
    std::sort(sorted.begin(), sorted.end());
    const auto mc = joint_survival_curve(sorted, p, g, o.reps, SeedSpec{o.seed, 0}, o.threads);

    double C;
    if (c_spec == "calibrate") {
        // Train on the even-indexed levels and validate on the rest. The
        // bound-to-estimate ratio increases in u, so the smallest level must
        // be in the training set.
        std::vector<double> u_train, est_train;
        for (std::size_t i = 0; i < sorted.size(); i += 2) {
            u_train.push_back(sorted[i]);
            est_train.push_back(mc[i].estimate);
        }
        C = calibrate_piterbarg_C(field, gamma, u_train, est_train);
    } else {
        C = std::stod(c_spec);
    }

    const double mes = (v.s_hi - v.s_lo) * (v.t_hi - v.t_lo);
    std::ostringstream csv;
    json cfg = o.config_json();
    cfg["region"] = region;
    cfg["mu"] = mu;
    cfg["C"] = C;
    cfg["tau_sq"] = tb.tau_sq;
    cfg["gamma"] = gamma;
    cfg["holder_L"] = big_l;
    csv << csv_header("corrfbm.bounds.v1", cfg, "u,borell,piterbarg,mc,mc_stderr,ok");
    int rc = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double u = sorted[i];
        const double bb = u >= mu ? borell_bound(u, tb.tau_sq, mu) : 1.0;
        const double pb = piterbarg_bound(u, tb.tau_sq, mes, gamma, C);
        const bool ok = mc[i].estimate - 3.0 * mc[i].stderr_ <= bb &&
                        mc[i].estimate - 3.0 * mc[i].stderr_ <= pb;
        if (!ok) rc = 4;
        csv << fmt(u) << ',' << fmt(bb) << ',' << fmt(pb) << ',' << fmt(mc[i].estimate) << ','
            << fmt(mc[i].stderr_) << ',' << (ok ? 1 : 0) << '\n';
    }
    emit(o.out, csv.str());
    return rc;
}

int run_fpt(const CommonOpts& o, double u, std::uint64_t n_target, const std::string& samples_out) {
    const ModelParams p = o.params();
    const Grid g = o.grid();
    const auto res = conditional_fpt_sample(u, p, g, n_target, SeedSpec{o.seed, 0}, o.threads);
    const auto stats = fpt_limit_test(res.samples, u, p);
    const auto [scale1, scale2] = fpt_limit_law(p);
    json out{{"config", o.config_json()},
             {"u", u},
             {"n_target", n_target},
             {"attempts", res.attempts},
             {"acceptance_rate", res.acceptance_rate},
             {"ks1", stats.ks1},
             {"ks2", stats.ks2},
             {"correlation", stats.correlation},
             {"copula_dist", stats.copula_dist},
             {"limit_scales", {scale1, scale2}}};
    emit(o.out, out.dump(2) + "\n");
    if (!samples_out.empty()) {
        std::ostringstream csv;
        csv << csv_header("corrfbm.fpt.v1", o.config_json(), "tau1,tau2");
        for (const auto& s : res.samples) csv << fmt(s.tau1) << ',' << fmt(s.tau2) << '\n';
        emit(samples_out, csv.str());
    }
    return 0;
}

int run_ratio(const CommonOpts& o, const std::vector<double>& us) {
    const ModelParams p = o.params();
    const Grid g = o.grid();
    if (us.size() == 1 && o.format != "csv") {
        const auto e = independence_ratio(us[0], p, g, o.reps, SeedSpec{o.seed, 0}, o.threads);
        emit(o.out, estimate_json(e, o.config_json(), us[0]).dump(2) + "\n");
        return 0;
    }
    std::ostringstream csv;
    csv << csv_header("corrfbm.ratio.v1", o.config_json(), "u,estimate,stderr,ci_lo,ci_hi");
    for (double u : us) {
        const auto e = independence_ratio(u, p, g, o.reps, SeedSpec{o.seed, 0}, o.threads);
        csv << fmt(u) << ',' << fmt(e.estimate) << ',' << fmt(e.stderr_) << ',' << fmt(e.ci_lo)
            << ',' << fmt(e.ci_hi) << '\n';
    }
    emit(o.out, csv.str());
    return 0;
}

int run_verify_bonferroni(const CommonOpts& o, std::uint64_t trials, std::size_t max_outcomes,
                          std::size_t max_events) {
    Rng rng(SeedSpec{o.seed, 0});
    std::uint64_t failures = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        const std::size_t n_out = 2 + rng.next_u64() % (max_outcomes - 1);
        DiscreteSpace sp;
        sp.mass.resize(n_out);
        double total = 0.0;
        for (auto& m : sp.mass) {
            m = rng.next_uniform();
            total += m;
        }
        for (auto& m : sp.mass) m /= total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < n_out; ++i) acc += sp.mass[i];
        sp.mass.back() = 1.0 - acc;
        auto rand_events = [&](std::size_t k) {
            std::vector<std::uint64_t> ev(k);
            for (auto& e : ev) e = rng.next_u64() & ((1ull << n_out) - 1);
            return ev;
        };
        const std::size_t n_a = 2 + rng.next_u64() % (max_events - 1);
        const std::size_t n_b = 2 + rng.next_u64() % (max_events - 1);
        const auto res = bonferroni_check(sp, rand_events(n_a), rand_events(n_b));
        if (!res.holds) ++failures;
    }
    json out{{"config", {{"trials", trials}, {"max_outcomes", max_outcomes},
                         {"max_events", max_events}, {"seed", o.seed}}},
             {"trials", trials},
             {"failures", failures},
             {"all_hold", failures == 0}};
    emit(o.out, out.dump(2) + "\n");
    return failures == 0 ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"correlated fractional Brownian motion extremes toolkit"};
    app.require_subcommand(1);

    CommonOpts o;

    auto* sim = app.add_subcommand("simulate", "draw joint paths and report their suprema");
    std::string dump_paths;
    o.add_model(sim);
    o.add_grid(sim);
    o.add_run(sim);
    sim->add_option("--dump-paths", dump_paths, "also write full trajectories (CSV t,x1,x2)");

    auto* surv = app.add_subcommand("survival", "joint survival probability estimates");
    std::vector<double> u_list{1.0};
    bool grid_sweep = false;
    o.add_model(surv);
    o.add_grid(surv);
    o.add_run(surv);
    surv->add_option("--u", u_list, "threshold(s); repeatable");
    surv->add_flag("--grid-sweep", grid_sweep,
                   "rerun at n/2 and 2n and report the n^{-1/2} extrapolation");

    auto* asy = app.add_subcommand("asympt", "leading-order joint tail approximation");
    std::string u_grid = "2.0";
    double h1_in = 0.0, h2_in = 0.0;
    o.add_model(asy);
    o.add_run(asy);
    asy->add_option("--u-grid", u_grid, "comma-separated thresholds");
    asy->add_option("--h1", h1_in, "Pickands constant for coordinate 1 (needed when alpha1 < 1)");
    asy->add_option("--h2", h2_in, "Pickands constant for coordinate 2 (needed when alpha2 < 1)");

    auto* pick = app.add_subcommand("pickands", "Pickands-type constant estimation");
    double alpha = 1.0, b_drift = 0.0, delta = 0.01;
    std::string interval = "0:5", sweep_T;
    o.add_run(pick);
    pick->add_option("--alpha", alpha, "fBm exponent, in (0,2]");
    pick->add_option("--b", b_drift, "linear drift coefficient");
    pick->add_option("--interval", interval, "window lo:hi");
    pick->add_option("--delta", delta, "grid step");
    pick->add_option("--sweep-T", sweep_T,
                     "comma-separated windows [0,T]; reports H/T per T plus the 1/T-fit intercept");

    auto* bnd = app.add_subcommand("bounds", "concentration bounds against Monte Carlo");
    std::string field = "fbm", region = "0.03125:1", mu_spec = "auto", c_spec = "calibrate";
    std::string u_grid_b = "1.6,2.0,2.4,2.8";
    std::uint64_t mu_reps = 10000;
    o.add_model(bnd);
    o.add_grid(bnd);
    o.add_run(bnd);
    bnd->add_option("--field", field, "field family (fbm)");
    bnd->add_option("--region", region, "square region lo:hi per coordinate");
    bnd->add_option("--u-grid", u_grid_b, "comma-separated thresholds");
    bnd->add_option("--mu", mu_spec, "centering constant: auto (Monte Carlo) or a number");
    bnd->add_option("--C", c_spec, "polynomial-bound constant: calibrate or a number");
    bnd->add_option("--mu-reps", mu_reps, "replications for the auto centering estimate");

    auto* fpt = app.add_subcommand("fpt", "conditional first passage times");
    double u_fpt = 2.0;
    std::uint64_t n_target = 10000;
    std::string samples_out;
    o.add_model(fpt);
    o.add_grid(fpt);
    o.add_run(fpt);
    fpt->add_option("--u", u_fpt, "threshold");
    fpt->add_option("--n-target", n_target, "accepted samples to collect");
    fpt->add_option("--samples-out", samples_out, "CSV dump of accepted (tau1, tau2)");

    auto* rat = app.add_subcommand("ratio", "asymptotic independence ratio");
    std::vector<double> u_ratio{2.0};
    o.add_model(rat);
    o.add_grid(rat);
    o.add_run(rat);
    rat->add_option("--u", u_ratio, "threshold(s); repeatable");

    auto* bon = app.add_subcommand("verify-bonferroni", "two-index Bonferroni brute-force check");
    std::uint64_t trials = 1000;
    std::size_t max_outcomes = 16, max_events = 4;
    o.add_run(bon);
    bon->add_option("--trials", trials, "random discrete spaces to enumerate");
    bon->add_option("--max-outcomes", max_outcomes, "outcomes per space (<= 64)");
    bon->add_option("--max-events", max_events, "events per index");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) {
            o.finalize(*sim);
            return run_simulate(o, dump_paths);
        }
        if (surv->parsed()) {
            o.finalize(*surv);
            return grid_sweep ? run_survival_sweep(o, u_list) : run_survival(o, u_list);
        }
        if (asy->parsed()) {
            o.finalize(*asy);
            return run_asympt(o, parse_list(u_grid), h1_in, h2_in);
        }
        if (pick->parsed()) {
            o.finalize(*pick);
            return run_pickands(o, alpha, b_drift, interval, delta, sweep_T);
        }
        if (bnd->parsed()) {
            o.finalize(*bnd);
            if (field != "fbm") throw CLI::ValidationError("unsupported field: " + field);
            return run_bounds(o, region, parse_list(u_grid_b), mu_spec, c_spec, mu_reps);
        }
        if (fpt->parsed()) {
            o.finalize(*fpt);
            return run_fpt(o, u_fpt, n_target, samples_out);
        }
        if (rat->parsed()) {
            o.finalize(*rat);
            return run_ratio(o, u_ratio);
        }
        if (bon->parsed()) {
            o.finalize(*bon);
            return run_verify_bonferroni(o, trials, max_outcomes, max_events);
        }
    } catch (const CLI::Error& e) {
        std::cerr << json{{"error", e.what()}, {"exit_code", 2}}.dump() << "\n";
        return 2;
    } catch (const NotPositiveSemiDefinite& e) {
        std::cerr << json{{"error", e.what()}, {"exit_code", 3}}.dump() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << json{{"error", e.what()}, {"exit_code", 2}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}, {"exit_code", 4}}.dump() << "\n";
        return 4;
    }
    return 0;
}
