#pragma once

// Experiment plumbing: config files, per-seed jobs, JSON-lines records and
// sweep summaries.  Record and config formats are described in docs/.

#include "hrg/analysis.hpp"
#include "hrg/graph.hpp"
#include "hrg/probes.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hrg {

enum class SampleModel { binomial, poisson };
/// Which omega the omega-dependent checks use: ln ln R or ln R.
enum class OmegaMode { log_log_r, log_r };

const char* to_string(SampleModel m);
const char* to_string(OmegaMode m);
SampleModel parse_sample_model(const std::string& s);
OmegaMode parse_omega_mode(const std::string& s);

/// omega for a disk of radius R under `mode`.
double omega_value(OmegaMode mode, double big_r);

struct Cell {
    double n = 1000;
    double alpha = 0.75;
    double nu = 1.0;

    ModelParams params() const { return ModelParams::create(n, alpha, nu); }
};

struct ExperimentConfig {
    std::string experiment_id = "hrg";
    std::vector<double> n_values{1000};
    std::vector<double> alpha_values{0.75};
    std::vector<double> nu_values{1.0};
    std::size_t seeds = 1;
    std::uint64_t seed_base = 0;
    SampleModel model = SampleModel::poisson;
    bool probes = false;
    std::size_t pairs = 2000;
    std::size_t clustering_samples = 10000;
    std::size_t probe_roots = 200;
    std::filesystem::path out = "hrg_out";
    std::optional<double> zeta; ///< unset: 0.1 delta
    double eps = 0.2;
    double c0 = 10.0;
    std::optional<OmegaMode> omega_mode; ///< unset: per-check default, see ProbeOptions
    int threads = 1;

    /// Throws InvalidArgument on out-of-range values.
    void validate() const;
    /// Grid in n-major, then alpha, then nu order.
    std::vector<Cell> cells() const;
    std::uint64_t seed_for(std::size_t s) const { return seed_base + s; }
};

/// Parses `key = value` lines; see docs/config.md.  Throws InvalidArgument
/// with the line number on unknown keys, duplicates or bad values.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

PointSet generate_points(const Cell& cell, SampleModel model, std::uint64_t seed);

struct AnalysisOptions {
    std::size_t pairs = 2000;
    std::size_t clustering_samples = 10000;
    bool probes = false;
    std::size_t probe_roots = 200;
};

struct ScalingRow {
    double n = 0, alpha = 0, nu = 0;
    std::uint64_t seed = 0;
    std::size_t points = 0, edges = 0;
    std::optional<double> mean_d, mean_d_stderr, ratio_to_log_r, ratio_stderr;
    std::optional<double> two_tau;
    double giant_fraction = 0.0;
    std::optional<double> beta_hat, beta_stderr;
    std::optional<double> clustering;
    std::size_t core_size = 0;
    std::optional<double> umbrella_q95;
    /// metric -> reason, for every metric left empty
    std::vector<std::pair<std::string, std::string>> skipped;
};

/// Every random choice is keyed on `seed`, so the row is a function of the
/// graph and the seed alone.
ScalingRow analyze_graph(const Graph& g, std::uint64_t seed, const AnalysisOptions& options);

/// One JSON object per metric: {experiment_id, params, seed, metric, value,
/// stderr} and, for skipped metrics, a null value and a "reason".
std::vector<std::string> scaling_records(const ScalingRow& row, const std::string& experiment_id);

struct ProbeOptions {
    std::size_t roots = 200;
    std::optional<double> zeta;
    /// Unset: ln ln R for the hub check and ln R for the max-type check.
    std::optional<OmegaMode> omega_mode;
};

/// Probe records {probe, root, seed, outcome, path_or_size, rounds,
/// validation_passed} for the core check and for sampled roots.
std::vector<std::string> probe_records(const Graph& g, std::uint64_t seed, const ProbeOptions& options);

/// Distinct roots drawn uniformly from the vertices, ascending.
std::vector<Vertex> sample_roots(std::size_t n, std::size_t count, std::uint64_t seed);

struct SweepReport {
    std::size_t jobs = 0;
    std::size_t failed = 0;
    std::vector<ScalingRow> rows; ///< successful jobs, in job order
};

/// Runs every cell x seed into config.out/cell_<i>/seed_<s>/, then writes
/// rows.csv, summary.csv and failures.jsonl (failed jobs do not stop it).
SweepReport run_sweep(const ExperimentConfig& config);

/// Column names of rows.csv.
std::string scaling_csv_header();
std::string scaling_csv_line(const ScalingRow& row);

} // namespace hrg
