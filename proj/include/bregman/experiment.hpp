#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bregman/solver.hpp"

namespace bregman {

enum class VariantSelection { gmep, ep, both };

/// One experiment: a problem, a Legendre function, the mapping and schedule,
/// and a list of starting points. Serialized as JSON.
struct ExperimentConfig {
    std::string problem = "paper-example-gmep";
    std::string legendre = "euclidean";
    double kappa = 2.0 / 3.0;
    Schedule schedule;
    std::vector<Vector> x0 = {make_vector({-0.5}), make_vector({-1.0}), make_vector({-1.5})};
    VariantSelection variant = VariantSelection::both;
    double tol = 1e-10;
    std::int64_t max_iter = 10'000'000;
    std::int64_t trace_every = 10'000;
    std::int64_t check_invariants_every = 10'000;
    ResolventMethod resolvent_method = ResolventMethod::automatic;
    std::string output = "out";
    /// Write wall_time as 0 so summaries are byte-identical across runs.
    bool deterministic = false;
    /// Worker threads for independent runs (0 = hardware concurrency).
    int threads = 0;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

std::string config_to_json(const ExperimentConfig& cfg);
/// Throws ConfigError on malformed input or unknown names.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Checks registry names, x0 in C, and schedule validity; throws ConfigError.
void validate_config(const ExperimentConfig& cfg);

/// Output directory default: $BREGMAN_HYBRID_OUT if set, else "out".
std::string default_output_dir();

struct SummaryRow {
    Vector x0;
    Variant variant = Variant::gmep;
    std::int64_t iterations = 0;
    double final_x = 0.0;
    double final_step_norm = 0.0;
    double final_fp_residual = 0.0;
    double wall_time = 0.0;
    RunStatus status = RunStatus::max_iter;
};

struct RunOutcome {
    SummaryRow summary;
    RunResult result;
};

/// Runs every (x0, variant) pair. Independent runs execute on worker threads;
/// outcomes come back in config order (x0 major, gmep before ep).
std::vector<RunOutcome> run_experiment(const ExperimentConfig& cfg);

/// Fixed 17-significant-digit formatting used in every CSV.
std::string format_number(double v);

inline constexpr const char* kTraceHeader = "n,x,step_norm,d_x0,d_sol,fp_residual";
inline constexpr const char* kSummaryHeader =
    "x0,variant,iterations,final_x,final_step_norm,final_fp_residual,wall_time";

void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace);
void write_summary_csv(std::ostream& os, const std::vector<RunOutcome>& runs);

/// Published reference iteration counts for the built-in example (Legendre euclidean,
/// T x = 2x/3, default schedule, tol 1e-10) keyed by x0 and variant.
std::optional<std::int64_t> reference_iterations(double x0, Variant v);

struct CompareRow {
    double x0 = 0.0;
    Variant variant = Variant::gmep;
    std::int64_t iterations = 0;
    std::optional<std::int64_t> reference;
    /// 100 (iterations - reference) / reference.
    std::optional<double> deviation_percent;
};

std::vector<CompareRow> compare_rows(const std::vector<RunOutcome>& runs);
void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows);
void write_compare_text(std::ostream& os, const std::vector<CompareRow>& rows);
/// Decimated |x_n| and D_f(q, x_n) versus n, for log-scale convergence plots.
void write_convergence_csv(std::ostream& os, const std::vector<TraceRecord>& trace);

/// File stem used for per-run outputs, e.g. "gmep_x0_-1".
std::string run_stem(const SummaryRow& row);

}  // namespace bregman
