#pragma once

#include "chebgap/asymptotics.hpp"
#include "chebgap/comb.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace chebgap {

inline constexpr int kCsvSchemaVersion = 1;

struct ExperimentConfig {
    std::vector<Interval> intervals;
    std::size_t n_min = 1;
    std::size_t n_max = 20;
    double equilibrium_tol = 1e-9;
    double remez_tol = 1e-12;
    double quadrature_tol = 1e-11;
    /// empty means the default grid
    std::vector<double> grid;
    std::filesystem::path output;
    /// cross-validate e_n against an equilibrium solve for n up to this (0: off)
    std::size_t cross_validate_up_to = 0;
    bool comb = true;
    long long comb_q_max = 1000;
    std::optional<double> almost_period_eps;
    std::uint64_t seed = 1;
    /// worker threads for the per-n pipeline; 0 picks the hardware count
    unsigned threads = 0;
};

/// Parses and validates a JSON config document.  Throws ValidationError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

enum class ExitCode : int { ok = 0, validation = 1, numerical = 2, invariant = 3 };

struct SuiteResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RunResult {
    ExitCode code = ExitCode::ok;
    std::string message;
    std::vector<DiagnosticsRow> rows;
    std::vector<SuiteResult> suites;
};

/// Runs the full pipeline and writes config.json, diagnostics.csv,
/// solutions/n_XXX.json, comb.json, summary.txt and manifest.json under
/// config.output.  Errors become exit codes; artifacts written so far stay.
RunResult run_experiment(const ExperimentConfig& config, const std::string& config_text);

/// CSV text for a set of rows (schema comment, header, one line per row).
std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows);

/// Human-readable record of solutions/n_XXX.json in a run directory.
/// Throws ValidationError when the artifact is missing.
std::string show_solution(const std::filesystem::path& run_dir, std::size_t n);

} // namespace chebgap
