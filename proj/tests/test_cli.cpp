#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(CLI_BINARY_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe) != nullptr) res.out += buf.data();
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("help lists every subcommand") {
    const auto res = run("--help");
    CHECK(res.exit_code == 0);
    for (const char* sub : {"simulate", "survival", "asympt", "pickands", "bounds", "fpt",
                            "ratio", "verify-bonferroni"})
        CHECK(res.out.find(sub) != std::string::npos);
}

TEST_CASE("per-subcommand help is golden") {
    struct Golden {
        const char* sub;
        std::vector<const char*> flags;
    };
    const std::vector<Golden> goldens{
        {"simulate", {"--alpha1", "--alpha2", "--r", "--n", "--t-min", "--horizon", "--reps",
                      "--seed", "--threads", "--out", "--format", "--config", "--dump-paths"}},
        {"survival", {"--alpha1", "--alpha2", "--r", "--n", "--t-min", "--horizon", "--reps",
                      "--seed", "--threads", "--out", "--format", "--config", "--u"}},
        {"asympt", {"--alpha1", "--alpha2", "--r", "--u-grid", "--h1", "--h2"}},
        {"pickands", {"--alpha", "--b", "--interval", "--delta", "--sweep-T", "--reps", "--seed"}},
        {"bounds", {"--field", "--region", "--u-grid", "--mu", "--C", "--mu-reps"}},
        {"fpt", {"--u", "--n-target", "--samples-out"}},
        {"ratio", {"--u"}},
        {"verify-bonferroni", {"--trials", "--max-outcomes", "--max-events"}},
    };
    for (const auto& g : goldens) {
        const auto res = run(std::string(g.sub) + " --help");
        CHECK(res.exit_code == 0);
        for (const char* f : g.flags) {
            INFO(g.sub << " missing " << f);
            CHECK(res.out.find(f) != std::string::npos);
        }
    }
}

TEST_CASE("parameter validation exits with code 2 and a machine-readable message") {
    const auto res = run("survival --r 1.5");
    CHECK(res.exit_code == 2);
    CHECK(res.out.find("r out of (-1,1)") != std::string::npos);
    CHECK(res.out.find("\"exit_code\":2") != std::string::npos);
}

TEST_CASE("infeasible parameter grids exit with code 3") {
    const auto res = run("survival --r 0.5 --n 256 --u 1 --reps 10 --seed 1");
    CHECK(res.exit_code == 3);
    CHECK(res.out.find("\"exit_code\":3") != std::string::npos);
}

TEST_CASE("unknown arguments exit with code 2") {
    CHECK(run("survival --not-a-flag 3").exit_code == 2);
    CHECK(run("").exit_code != 0);
}

TEST_CASE("single-threshold survival defaults to a CSV row") {
    const auto res = run("survival --u 1.0 --n 64 --reps 4000 --seed 5");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("# schema: corrfbm.survival.v1") != std::string::npos);
    CHECK(res.out.find("1,0.") != std::string::npos); // u=1 row with an estimate
}

TEST_CASE("survival output is deterministic and self-describing") {
    const std::string f1 = "/tmp/corrfbm_cli_a.json", f2 = "/tmp/corrfbm_cli_b.json";
    const std::string cmd =
        "survival --u 0.9 --n 128 --reps 4000 --seed 21 --threads 2 --format json --out ";
    CHECK(run(cmd + f1).exit_code == 0);
    CHECK(run(cmd + f2).exit_code == 0);
    const std::string a = slurp(f1), b = slurp(f2);
    CHECK(a == b);
    CHECK(a.find("\"seed\"") != std::string::npos);
    CHECK(a.find("\"config\"") != std::string::npos);
    CHECK(a.find("\"estimate\"") != std::string::npos);
    std::remove(f1.c_str());
    std::remove(f2.c_str());
}

TEST_CASE("grid sweep reports the refinement trend with an extrapolation column") {
    const auto res = run("survival --u 1.0 --n 64 --reps 8000 --seed 3 --grid-sweep --threads 2");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("# schema: corrfbm.survival-sweep.v1") != std::string::npos);
    CHECK(res.out.find("u,grid_n,estimate,stderr,richardson") != std::string::npos);
    CHECK(res.out.find("1,32,") != std::string::npos);
    CHECK(res.out.find("1,64,") != std::string::npos);
    CHECK(res.out.find("1,128,") != std::string::npos);
}

TEST_CASE("survival csv batch mode has the versioned header") {
    const auto res = run("survival --u 0.5 --u 1.0 --n 64 --reps 2000 --seed 5 --format csv");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("# schema: corrfbm.survival.v1") != std::string::npos);
    CHECK(res.out.find("u,estimate,stderr,ci_lo,ci_hi,N,grid_n") != std::string::npos);
}

TEST_CASE("config file fills unset flags and explicit flags win") {
    const std::string cfg = "/tmp/corrfbm_cli_cfg.json";
    {
        std::ofstream out(cfg);
        out << "{\"reps\": 1500, \"n\": 32, \"seed\": 77}";
    }
    const auto res = run("survival --u 0.5 --config " + cfg + " --seed 78 --format csv");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("\"reps\":1500") != std::string::npos);
    CHECK(res.out.find("\"n\":32") != std::string::npos);
    CHECK(res.out.find("\"seed\":78") != std::string::npos);
    std::remove(cfg.c_str());
}

TEST_CASE("simulate writes supremum rows and optional path dumps") {
    const std::string paths = "/tmp/corrfbm_cli_paths.csv";
    const auto res = run("simulate --n 16 --reps 3 --seed 9 --dump-paths " + paths);
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("rep,sup1,argmax_t1,sup2,argmax_t2") != std::string::npos);
    const std::string dump = slurp(paths);
    CHECK(dump.find("t,x1,x2") != std::string::npos);
    CHECK(dump.find("# rep 2") != std::string::npos);
    std::remove(paths.c_str());
}

TEST_CASE("asympt emits the component columns") {
    const auto res = run("asympt --alpha1 1 --alpha2 1 --r 0 --u-grid 2.0");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("u,value,upsilon1,upsilon2,prefactor,u_factor,psi") != std::string::npos);
    CHECK(res.out.find("2,") != std::string::npos);
}

TEST_CASE("bounds reports domination flags") {
    const auto res = run("bounds --alpha1 1 --alpha2 1 --r 0 --region 0.03125:1 "
                         "--u-grid 1.6,2.0,2.4 --n 128 --reps 20000 --mu-reps 500 --seed 13");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("u,borell,piterbarg,mc,mc_stderr,ok") != std::string::npos);
    CHECK(res.out.find(",1\n") != std::string::npos);
    CHECK(res.out.find(",0\n") == std::string::npos);
}

TEST_CASE("verify-bonferroni holds across random spaces") {
    const auto res = run("verify-bonferroni --trials 300 --seed 17");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("\"all_hold\": true") != std::string::npos);
}
