#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;
using bregman::cli::run;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation invoke(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("bregman_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), {}};
}

}  // namespace

TEST_CASE("usage errors exit with 2")
{
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({"solve", "--tol", "-1"}).code == 2);
    CHECK(invoke({"solve", "--problem", "nope", "--out", scratch("e1").string()}).code == 2);
    CHECK(invoke({"solve", "--x0", "0.5", "--out", scratch("e2").string()}).code == 2);
    CHECK(invoke({"solve", "--config", "/nonexistent.json"}).code == 2);

    const fs::path bad = scratch("bad.json");
    std::ofstream(bad) << R"({"tol": 1e-10, "colour": "red"})";
    const auto r = invoke({"solve", "--config", bad.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("colour") != std::string::npos);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("solve from the solution writes one row per run")
{
    const fs::path dir = scratch("solve0");
    const auto r = invoke({"solve", "--x0", "0", "--variant", "gmep", "--out", dir.string(), "--deterministic"});
    CHECK(r.code == 0);
    const std::string summary = slurp(dir / "summary.csv");
    CHECK(summary == "x0,variant,iterations,final_x,final_step_norm,final_fp_residual,wall_time\n"
                     "0,gmep,1,0,0,0,0\n");
    CHECK(fs::exists(dir / "trace_gmep_x0_0.csv"));
}

TEST_CASE("solve honours a config file and the overrides")
{
    const fs::path dir = scratch("solvecfg");
    fs::create_directories(dir);
    const fs::path cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"problem": "paper-example-ep", "x0": [[-1.0]], "variant": "gmep",
                             "max_iter": 400, "trace_every": 100, "deterministic": true,
                             "output": ")" << (dir / "from_config").string() << R"("})";
    auto r = invoke({"solve", "--config", cfg.string()});
    CHECK(r.code == 1);  // stopped at max_iter
    CHECK(r.err.find("max_iter") != std::string::npos);
    CHECK(fs::exists(dir / "from_config" / "trace_gmep_x0_-1.csv"));

    r = invoke({"solve", "--config", cfg.string(), "--max-iter", "200", "--out", (dir / "flag").string()});
    CHECK(r.code == 1);
    const std::string s = slurp(dir / "flag" / "summary.csv");
    CHECK(s.find(",200,") != std::string::npos);
}

TEST_CASE("solve output is byte-identical across runs")
{
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    const std::vector<std::string> common = {"--max-iter", "1500", "--trace-every", "100", "--deterministic"};
    auto args = [&](const fs::path& p) {
        std::vector<std::string> v = {"solve", "--out", p.string()};
        v.insert(v.end(), common.begin(), common.end());
        return v;
    };
    invoke(args(a));
    invoke(args(b));
    for (const auto& e : fs::directory_iterator(a)) CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
}

TEST_CASE("compare restricted to one start writes two rows")
{
    const fs::path dir = scratch("cmp");
    const auto r = invoke({"compare", "--x0", "-1", "--max-iter", "1000", "--out", dir.string()});
    CHECK(r.code == 1);
    const std::string csv = slurp(dir / "compare.csv");
    std::istringstream is(csv);
    std::vector<std::string> lines;
    for (std::string l; std::getline(is, l);) lines.push_back(l);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "x0,variant,iterations,reference,deviation_percent");
    CHECK(lines[1].rfind("-1,gmep,1000,2921737,", 0) == 0);
    CHECK(fs::exists(dir / "compare.txt"));
    CHECK(fs::exists(dir / "convergence_gmep_x0_-1.csv"));
    CHECK(fs::exists(dir / "convergence_ep_x0_-1.csv"));
}

TEST_CASE("verify")
{
    auto r = invoke({"verify", "--only", "bregman.nonnegativity", "--only", "equilibrium.resolvent"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("PASS bregman.nonnegativity[euclidean/d1]") != std::string::npos);

    r = invoke({"verify", "--only", "equilibrium.resolvent", "--inject-fault", "1"});
    CHECK(r.code == 1);
    CHECK(r.out.find("FAIL equilibrium.resolvent_vi") != std::string::npos);
    CHECK(r.out.find("FAIL equilibrium.bfne") != std::string::npos);

    r = invoke({"verify", "--only", ""});
    CHECK(r.code == 0);
    CHECK(r.out == "0 passed, 0 failed\n");

    r = invoke({"verify", "--only", "no.such.property"});
    CHECK(r.code == 2);

    r = invoke({"verify", "--list"});
    CHECK(r.code == 0);
    CHECK(r.out.find("solver.short_runs") != std::string::npos);
}

TEST_CASE("full default verify passes")
{
    const auto r = invoke({"verify"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
}
