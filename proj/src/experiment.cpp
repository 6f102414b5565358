#include "bregman/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bregman/errors.hpp"

namespace bregman {

using nlohmann::json;

namespace {

std::string to_string(VariantSelection v)
{
    switch (v) {
    case VariantSelection::gmep: return "gmep";
    case VariantSelection::ep: return "ep";
    case VariantSelection::both: return "both";
    }
    return "?";
}

VariantSelection parse_selection(const std::string& s)
{
    if (s == "gmep") return VariantSelection::gmep;
    if (s == "ep") return VariantSelection::ep;
    if (s == "both") return VariantSelection::both;
    throw ConfigError("unknown variant '" + s + "' (expected gmep, ep or both)");
}

json rule_to_json(const Rule& r)
{
    switch (r.kind) {
    case Rule::Kind::harmonic: return {{"kind", "harmonic"}, {"offset", r.offset}};
    case Rule::Kind::shifted_harmonic: return {{"kind", "shifted-harmonic"}, {"cap", r.cap}, {"offset", r.offset}};
    case Rule::Kind::constant: return {{"kind", "constant"}, {"value", r.cap}};
    }
    return {};
}

Rule rule_from_json(const json& j)
{
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "harmonic") return Rule::harmonic(j.at("offset").get<double>());
    if (kind == "shifted-harmonic") return Rule::shifted_harmonic(j.at("cap").get<double>(), j.at("offset").get<double>());
    if (kind == "constant") return Rule::constant(j.at("value").get<double>());
    throw ConfigError("unknown schedule rule '" + kind + "'");
}

Vector vector_from_json(const json& j)
{
    if (j.is_number()) return make_vector({j.get<double>()});
    const auto v = j.get<std::vector<double>>();
    return make_vector(v);
}

std::vector<Variant> variants_of(VariantSelection s)
{
    switch (s) {
    case VariantSelection::gmep: return {Variant::gmep};
    case VariantSelection::ep: return {Variant::ep};
    case VariantSelection::both: return {Variant::gmep, Variant::ep};
    }
    return {};
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg)
{
    json x0 = json::array();
    for (const auto& v : cfg.x0) x0.push_back(to_std(v));
    const json j = {
        {"problem", cfg.problem},
        {"legendre", cfg.legendre},
        {"mapping", {{"kind", "linear-contraction"}, {"kappa", cfg.kappa}}},
        {"schedule", {{"alpha", rule_to_json(cfg.schedule.alpha)}, {"beta", rule_to_json(cfg.schedule.beta)}}},
        {"x0", x0},
        {"variant", to_string(cfg.variant)},
        {"tol", cfg.tol},
        {"max_iter", cfg.max_iter},
        {"trace_every", cfg.trace_every},
        {"check_invariants_every", cfg.check_invariants_every},
        {"resolvent_method", to_string(cfg.resolvent_method)},
        {"output", cfg.output},
        {"deterministic", cfg.deterministic},
        {"threads", cfg.threads},
    };
    return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text)
{
    ExperimentConfig cfg;
    try {
        const json j = json::parse(text);
        if (!j.is_object()) throw ConfigError("config must be a JSON object");
        for (const auto& [key, _] : j.items()) {
            static const char* known[] = {"problem", "legendre", "mapping", "schedule", "x0", "variant", "tol",
                                          "max_iter", "trace_every", "check_invariants_every", "resolvent_method",
                                          "output", "deterministic", "threads"};
            if (std::find(std::begin(known), std::end(known), key) == std::end(known))
                throw ConfigError("unknown config key '" + key + "'");
        }
        if (j.contains("problem")) cfg.problem = j["problem"].get<std::string>();
        if (j.contains("legendre")) cfg.legendre = j["legendre"].get<std::string>();
        if (j.contains("mapping")) {
            const auto& m = j["mapping"];
            if (m.value("kind", std::string("linear-contraction")) != "linear-contraction")
                throw ConfigError("only the linear-contraction mapping is registered");
            cfg.kappa = m.at("kappa").get<double>();
        }
        if (j.contains("schedule")) {
            const auto& s = j["schedule"];
            if (s.contains("alpha")) cfg.schedule.alpha = rule_from_json(s["alpha"]);
            if (s.contains("beta")) cfg.schedule.beta = rule_from_json(s["beta"]);
        }
        if (j.contains("x0")) {
            cfg.x0.clear();
            for (const auto& v : j["x0"]) cfg.x0.push_back(vector_from_json(v));
        }
        if (j.contains("variant")) cfg.variant = parse_selection(j["variant"].get<std::string>());
        if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
        if (j.contains("max_iter")) cfg.max_iter = j["max_iter"].get<std::int64_t>();
        if (j.contains("trace_every")) cfg.trace_every = j["trace_every"].get<std::int64_t>();
        if (j.contains("check_invariants_every"))
            cfg.check_invariants_every = j["check_invariants_every"].get<std::int64_t>();
        if (j.contains("resolvent_method"))
            cfg.resolvent_method = parse_resolvent_method(j["resolvent_method"].get<std::string>());
        if (j.contains("output")) cfg.output = j["output"].get<std::string>();
        if (j.contains("deterministic")) cfg.deterministic = j["deterministic"].get<bool>();
        if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

void validate_config(const ExperimentConfig& cfg)
{
    const GmepProblem p = make_problem(cfg.problem);
    LegendreFunction f = LegendreFunction::euclidean(1);
    try {
        f = LegendreFunction::parse(cfg.legendre, p.dim());
        FixedPointMap::linear_contraction(cfg.kappa);
        cfg.schedule.validate(cfg.max_iter);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (cfg.x0.empty()) throw ConfigError("config lists no initial points");
    for (const auto& x : cfg.x0) {
        if (x.size() != p.dim()) throw ConfigError("x0 " + to_string(x) + " has the wrong dimension");
        if (!p.base.contains(x)) throw ConfigError("x0 " + to_string(x) + " is outside C = " + p.base.describe());
        if (!f.in_interior(x)) throw ConfigError("x0 " + to_string(x) + " is outside int dom f");
    }
    if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive");
    if (cfg.max_iter < 0) throw ConfigError("max_iter must be nonnegative");
    if (cfg.trace_every < 1) throw ConfigError("trace_every must be at least 1");
}

std::string default_output_dir()
{
    const char* env = std::getenv("BREGMAN_HYBRID_OUT");
    return env && *env ? env : "out";
}

std::vector<RunOutcome> run_experiment(const ExperimentConfig& cfg)
{
    validate_config(cfg);
    const GmepProblem problem = make_problem(cfg.problem);
    const LegendreFunction f = LegendreFunction::parse(cfg.legendre, problem.dim());

    struct Job {
        Vector x0;
        Variant variant;
    };
    std::vector<Job> jobs;
    for (const auto& x : cfg.x0)
        for (Variant v : variants_of(cfg.variant)) jobs.push_back({x, v});

    auto execute = [&](const Job& job) {
        SolverConfig sc;
        sc.tol = cfg.tol;
        sc.max_iter = cfg.max_iter;
        sc.variant = job.variant;
        sc.trace_every = cfg.trace_every;
        sc.check_invariants_every = cfg.check_invariants_every;
        sc.resolvent.method = cfg.resolvent_method;
        const HybridSolver solver(f, problem, FixedPointMap::linear_contraction(cfg.kappa), cfg.schedule, sc);
        const auto t0 = std::chrono::steady_clock::now();
        RunOutcome out;
        out.result = solver.run(job.x0);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.summary = {job.x0,
                       job.variant,
                       out.result.iterations,
                       out.result.result[0],
                       out.result.final_step,
                       out.result.final_fp_residual,
                       cfg.deterministic ? 0.0 : wall,
                       out.result.status};
        return out;
    };

    unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));

    std::vector<RunOutcome> out(jobs.size());
    // Jobs are handed out in batches of `threads`; results are collected in order.
    for (std::size_t start = 0; start < jobs.size(); start += threads) {
        std::vector<std::future<RunOutcome>> batch;
        const std::size_t stop = std::min(jobs.size(), start + threads);
        for (std::size_t k = start; k < stop; ++k)
            batch.push_back(std::async(std::launch::async, execute, std::cref(jobs[k])));
        for (std::size_t k = start; k < stop; ++k) out[k] = batch[k - start].get();
    }
    return out;
}

std::string format_number(double v)
{
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace)
{
    os << kTraceHeader << '\n';
    for (const auto& r : trace) {
        os << r.n << ',' << format_number(r.x[0]) << ',' << format_number(r.step_norm) << ','
           << format_number(r.d_x0) << ',' << (r.d_sol ? format_number(*r.d_sol) : std::string()) << ','
           << format_number(r.fp_residual) << '\n';
    }
}

namespace {

std::string x0_label(const Vector& x0)
{
    if (x0.size() == 1) return format_number(x0[0]);
    std::string s;
    for (std::size_t i = 0; i < x0.size(); ++i) s += (i ? ";" : "") + format_number(x0[i]);
    return s;
}

}  // namespace

void write_summary_csv(std::ostream& os, const std::vector<RunOutcome>& runs)
{
    os << kSummaryHeader << '\n';
    for (const auto& r : runs) {
        const auto& s = r.summary;
        os << x0_label(s.x0) << ',' << to_string(s.variant) << ',' << s.iterations << ',' << format_number(s.final_x)
           << ',' << format_number(s.final_step_norm) << ',' << format_number(s.final_fp_residual) << ','
           << format_number(s.wall_time) << '\n';
    }
}

std::optional<std::int64_t> reference_iterations(double x0, Variant v)
{
    struct Entry {
        double x0;
        std::int64_t gmep;
        std::int64_t ep;
    };
    static constexpr Entry table[] = {
        {-0.5, 1840206, 2001482},
        {-1.0, 2921737, 3177798},
        {-1.5, 3828937, 4164504},
    };
    for (const auto& e : table)
        if (e.x0 == x0) return v == Variant::gmep ? e.gmep : e.ep;
    return std::nullopt;
}

std::vector<CompareRow> compare_rows(const std::vector<RunOutcome>& runs)
{
    std::vector<CompareRow> rows;
    for (const auto& r : runs) {
        CompareRow row;
        row.x0 = r.summary.x0[0];
        row.variant = r.summary.variant;
        row.iterations = r.summary.iterations;
        if (r.summary.x0.size() == 1) row.reference = reference_iterations(row.x0, row.variant);
        if (row.reference)
            row.deviation_percent = 100.0 * static_cast<double>(row.iterations - *row.reference) /
                                    static_cast<double>(*row.reference);
        rows.push_back(row);
    }
    return rows;
}

void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows)
{
    os << "x0,variant,iterations,reference,deviation_percent\n";
    for (const auto& r : rows) {
        os << format_number(r.x0) << ',' << to_string(r.variant) << ',' << r.iterations << ','
           << (r.reference ? std::to_string(*r.reference) : std::string()) << ','
           << (r.deviation_percent ? format_number(*r.deviation_percent) : std::string()) << '\n';
    }
}

void write_compare_text(std::ostream& os, const std::vector<CompareRow>& rows)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-8s %-8s %12s %12s %10s\n", "x0", "variant", "iterations", "reference", "dev%");
    os << buf;
    for (const auto& r : rows) {
        const std::string ref = r.reference ? std::to_string(*r.reference) : "-";
        char dev[32] = "-";
        if (r.deviation_percent) std::snprintf(dev, sizeof dev, "%+.3f", *r.deviation_percent);
        std::snprintf(buf, sizeof buf, "%-8g %-8s %12lld %12s %10s\n", r.x0, to_string(r.variant).c_str(),
                      static_cast<long long>(r.iterations), ref.c_str(), dev);
        os << buf;
    }
}

void write_convergence_csv(std::ostream& os, const std::vector<TraceRecord>& trace)
{
    os << "n,abs_x,d_sol\n";
    for (const auto& r : trace)
        os << r.n << ',' << format_number(norm(r.x)) << ',' << (r.d_sol ? format_number(*r.d_sol) : std::string())
           << '\n';
}

std::string run_stem(const SummaryRow& row) { return to_string(row.variant) + "_x0_" + x0_label(row.x0); }

}  // namespace bregman
