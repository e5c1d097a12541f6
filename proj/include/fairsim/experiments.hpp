#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairsim/config.hpp"
#include "fairsim/metrics.hpp"

namespace fairsim {

// Replicated do(theta), do(q0) interventions: every (theta, q0) cell is run
// `replicates` times with everything else taken from `base`.
struct SweepConfig {
    std::vector<double> theta_grid;
    std::vector<double> q0_grid;
    int replicates = 60;
    SimConfig base{};
    std::vector<double> eps_tols{0.1, 0.5, 1.0, 2.0};
    std::uint64_t master_seed = 0;

    void validate() const;
};

// theta_grid and q0_grid are required; everything else has a default.
SweepConfig sweep_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SweepConfig& config);

struct SweepRecord {
    double theta = 0.0;
    double q0 = 0.0;
    int replicate = 0;
    std::uint64_t seed = 0;
    MetricsReport report;
    std::vector<int> y_a;  // one indicator per eps_tol, arrested variant
    std::vector<int> y_p;  // population variant
};

std::uint64_t sweep_seed(std::uint64_t master_seed, std::size_t theta_index, std::size_t q0_index, int replicate);

// Fully resolved run parameters of one sweep job.
SimConfig sweep_cell_config(const SweepConfig& config, std::size_t theta_index, std::size_t q0_index, int replicate);

// Final-tick report of a single run.
MetricsReport final_report(const SimConfig& config);

struct RunOptions {
    int workers = 1;
    std::function<void(std::size_t done, std::size_t total)> progress;
};

// Records ordered by (theta, q0, replicate) whatever the worker count.
// ConfigError from a cell is rethrown with the cell named in the message.
std::vector<SweepRecord> run_sweep(const SweepConfig& config, const RunOptions& options = {});

// Mean/SD over the defined values; `nulls` counts the undefined ones.
struct Stat {
    std::optional<double> mean;
    std::optional<double> sd;  // sample SD, needs two values
    int count = 0;
    int nulls = 0;

    std::optional<double> standard_error() const;
};

Stat describe(std::span<const Metric> values);

struct CellSummary {
    double theta = 0.0;
    double q0 = 0.0;
    int replicates = 0;
    Stat tau1_a;
    Stat tau1_p;
    Stat tau_a;
    Stat tau_p;
    Stat arrest_ratio;
    // Share of ALL replicates with Y = 1 (an undefined tau1 counts as unfair).
    std::vector<double> fair_a;
    std::vector<double> fair_p;
};

struct SweepSummary {
    std::vector<double> eps_tols;
    std::vector<CellSummary> cells;  // first-appearance order of (theta, q0)

    const CellSummary* find(double theta, double q0) const;
};

// Throws std::invalid_argument on an empty record list.
SweepSummary summarize(std::span<const SweepRecord> records, std::span<const double> eps_tols);

// Tolerance label used in column names, e.g. 0.5 -> "0.5", 1.0 -> "1".
std::string tol_label(double eps_tol);

// theta,q0,replicate,seed,tau1_a,tau1_p,tau_a,tau_p,arrest_ratio, then
// Y_a_<tol> for every tolerance, then Y_p_<tol> for every tolerance.
void export_outcomes(std::span<const SweepRecord> records, std::span<const double> eps_tols,
                     const std::filesystem::path& path);

// One row per cell with mean/sd/count/nulls for each statistic and the fair
// proportions per tolerance.
void export_summary(const SweepSummary& summary, const std::filesystem::path& path);

}  // namespace fairsim
