#pragma once

#include "dqssa/graph.hpp"
#include "dqssa/swarm.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace dqssa {

inline constexpr std::string_view kVersion = "1.0.0";

// Every selector the harness can run, in the default column order.
const std::vector<std::string> &all_selectors();
bool is_known_selector(std::string_view name);

struct ExperimentConfig {
    std::vector<DatasetDescriptor> datasets;
    std::vector<std::string> algorithms = all_selectors();
    std::vector<double> spreader_fractions = {0.01, 0.02, 0.03, 0.04, 0.05};
    double p = 0.1;
    std::size_t repetitions = 10;

    // Swarm settings; k, algorithm and rng_seed are filled per cell.
    SwarmConfig swarm;
    double pool_factor = 5.0;
    double resolution = 1.0;
    double glr_gamma = 2.0;

    std::size_t num_simulations = 10000;
    unsigned workers = 1;
    std::filesystem::path output_dir = "results";
    std::uint64_t seed = 42;

    // Throws std::invalid_argument describing the first problem found.
    void validate() const;
};

// JSON config file; unknown keys are rejected. Relative dataset paths are
// resolved against the config file's directory.
ExperimentConfig load_experiment_config(const std::filesystem::path &path);
std::string config_to_json(const ExperimentConfig &config);

// k for a spreader fraction: max(1, round(fraction * n)).
std::size_t seeds_for_fraction(double fraction, std::size_t n);

struct ResultRow {
    std::string dataset;
    std::string algorithm;
    double fraction = 0.0;
    std::size_t k = 0;
    std::size_t repetition = 0;
    std::uint64_t seed = 0;
    double lie_value = 0.0;
    double fis_mean = 0.0;
    double fis_variance = 0.0;
    double wall_clock_seconds = 0.0;
    std::string error; // empty for a successful cell

    bool ok() const { return error.empty(); }
};

using RowSink = std::function<void(const ResultRow &)>;

// Runs every (dataset, algorithm, fraction, repetition) cell. The sink sees
// rows in cell order whatever the worker count. Failing cells become error
// rows and the run continues.
std::vector<ResultRow> run_experiment(const ExperimentConfig &config, const RowSink &sink = {});

void write_results_header(std::ostream &out);
void write_result_row(std::ostream &out, const ResultRow &row);
// Reads back results.csv, ignoring a trailing partial line.
std::vector<ResultRow> read_results_csv(const std::filesystem::path &path);

// Appends rows to <dir>/results.csv as they arrive, flushing each one.
class ResultsFile {
  public:
    explicit ResultsFile(const std::filesystem::path &path);
    void operator()(const ResultRow &row);

  private:
    std::ofstream out_;
};

// results.csv, time_table.csv and per-dataset <dataset>/fis_curve.csv and
// <dataset>/lie_curve.csv. Columns follow `algorithms`.
void emit_tables(const std::vector<ResultRow> &rows, const std::vector<std::string> &algorithms,
                 const std::filesystem::path &dir, bool write_results = true);

void write_manifest(const ExperimentConfig &config, const std::filesystem::path &dir);

} // namespace dqssa
