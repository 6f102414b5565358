#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>

#include "bregman/errors.hpp"
#include "bregman/experiment.hpp"
#include "bregman/verify.hpp"

namespace bregman::cli {

namespace fs = std::filesystem;

namespace {

struct Overrides {
    std::string config;
    std::string problem;
    std::string variant;
    std::string legendre;
    std::vector<double> x0;
    double tol = 0.0;
    std::int64_t max_iter = 0;
    std::int64_t trace_every = 0;
    std::string out;
    int threads = -1;
    bool deterministic = false;
};

void add_run_options(CLI::App* sub, Overrides& o)
{
    sub->add_option("-c,--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--problem", o.problem, "problem registry name");
    sub->add_option("--variant", o.variant, "gmep, ep or both");
    sub->add_option("--legendre", o.legendre, "euclidean, scalar-power:<p>, scalar-quartic, neg-entropy");
    sub->add_option("--x0", o.x0, "starting point (1-D); repeat for several runs");
    sub->add_option("--tol", o.tol, "stop when ||x_{n+1} - x_n|| < tol")->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", o.max_iter, "iteration cap")->check(CLI::PositiveNumber);
    sub->add_option("--trace-every", o.trace_every, "trace decimation")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "output directory (default $BREGMAN_HYBRID_OUT or ./out)");
    sub->add_option("--threads", o.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
    sub->add_flag("--deterministic", o.deterministic, "write wall_time as 0");
}

VariantSelection parse_selection(const std::string& s)
{
    if (s == "gmep") return VariantSelection::gmep;
    if (s == "ep") return VariantSelection::ep;
    if (s == "both") return VariantSelection::both;
    throw ConfigError("unknown variant '" + s + "'");
}

ExperimentConfig build_config(const Overrides& o)
{
    ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
    if (o.config.empty()) cfg.output = default_output_dir();
    if (!o.problem.empty()) cfg.problem = o.problem;
    if (!o.variant.empty()) cfg.variant = parse_selection(o.variant);
    if (!o.legendre.empty()) cfg.legendre = o.legendre;
    if (!o.x0.empty()) {
        cfg.x0.clear();
        for (double v : o.x0) cfg.x0.push_back(make_vector({v}));
    }
    if (o.tol > 0.0) cfg.tol = o.tol;
    if (o.max_iter > 0) cfg.max_iter = o.max_iter;
    if (o.trace_every > 0) cfg.trace_every = o.trace_every;
    if (!o.out.empty()) cfg.output = o.out;
    if (o.threads >= 0) cfg.threads = o.threads;
    if (o.deterministic) cfg.deterministic = true;
    validate_config(cfg);
    return cfg;
}

std::ofstream open_out(const fs::path& p)
{
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    return os;
}

bool all_converged(const std::vector<RunOutcome>& runs)
{
    for (const auto& r : runs)
        if (r.summary.status != RunStatus::converged) return false;
    return true;
}

int cmd_solve(const Overrides& o, std::ostream& out, std::ostream& err)
{
    const ExperimentConfig cfg = build_config(o);
    const auto runs = run_experiment(cfg);
    const fs::path dir = cfg.output;
    fs::create_directories(dir);
    for (const auto& r : runs) {
        auto os = open_out(dir / ("trace_" + run_stem(r.summary) + ".csv"));
        write_trace_csv(os, r.result.trace);
    }
    {
        auto os = open_out(dir / "summary.csv");
        write_summary_csv(os, runs);
    }
    write_summary_csv(out, runs);
    if (!all_converged(runs)) {
        err << "error: at least one run stopped at max_iter without meeting tol\n";
        return kExitFailure;
    }
    return kExitOk;
}

int cmd_compare(const Overrides& o, std::ostream& out, std::ostream& err)
{
    const ExperimentConfig cfg = build_config(o);
    const auto runs = run_experiment(cfg);
    const auto rows = compare_rows(runs);
    const fs::path dir = cfg.output;
    fs::create_directories(dir);
    for (const auto& r : runs) {
        auto os = open_out(dir / ("convergence_" + run_stem(r.summary) + ".csv"));
        write_convergence_csv(os, r.result.trace);
    }
    {
        auto os = open_out(dir / "compare.csv");
        write_compare_csv(os, rows);
    }
    {
        auto os = open_out(dir / "compare.txt");
        write_compare_text(os, rows);
    }
    {
        auto os = open_out(dir / "summary.csv");
        write_summary_csv(os, runs);
    }
    write_compare_text(out, rows);
    if (!all_converged(runs)) {
        err << "error: at least one run stopped at max_iter without meeting tol\n";
        return kExitFailure;
    }
    return kExitOk;
}

struct VerifyArgs {
    std::uint64_t seed = VerifyOptions{}.seed;
    int samples = VerifyOptions{}.samples;
    double fault = 0.0;
    std::vector<std::string> only;
    bool only_given = false;
    bool list = false;
};

int cmd_verify(const VerifyArgs& v, std::ostream& out)
{
    if (v.list) {
        for (const auto& c : property_registry()) out << c.name << "  " << c.description << '\n';
        return kExitOk;
    }
    VerifyOptions opts;
    opts.seed = v.seed;
    opts.samples = v.samples;
    opts.resolvent_fault = v.fault;
    // an explicit but empty --only selects nothing
    std::vector<std::string> names;
    for (const auto& n : v.only)
        if (!n.empty()) names.push_back(n);
    const auto results = run_properties(names, !v.only_given, opts);
    write_report(out, results);
    std::size_t failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    out << results.size() - failed << " passed, " << failed << " failed\n";
    return failed == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Hybrid shrinking-projection solver for fixed points and generalized mixed equilibria"};
    app.name("bregman_hybrid");
    app.require_subcommand(1);

    Overrides solve_o, compare_o;
    auto* solve = app.add_subcommand("solve", "run every (x0, variant) pair and write traces and a summary");
    add_run_options(solve, solve_o);
    auto* compare = app.add_subcommand("compare", "run the iteration-count grid and report deviations");
    add_run_options(compare, compare_o);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run the property suites and report worst violations");
    verify->add_option("--seed", va.seed, "random seed");
    verify->add_option("--samples", va.samples, "samples per property")->check(CLI::PositiveNumber);
    verify->add_option("--only", va.only, "property names (repeatable; an empty value selects none)");
    verify->add_option("--inject-fault", va.fault, "perturb resolvent outputs by this gain (negative control)");
    verify->add_flag("--list", va.list, "list registered properties");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << "run with --help for usage\n";
        return kExitUsage;
    }
    va.only_given = verify->count("--only") > 0;

    try {
        if (*solve) return cmd_solve(solve_o, out, err);
        if (*compare) return cmd_compare(compare_o, out, err);
        return cmd_verify(va, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace bregman::cli
