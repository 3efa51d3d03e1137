#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hyplab/csv.hpp"
#include "hyplab/pinn.hpp"

namespace hyplab {

/// Everything needed to re-run one experiment bit-identically. Serialized as
/// a key = value document; reports echo it under a [config] section.
struct ExperimentConfig {
    std::string problem = "burgers-shock";  // catalog name
    std::string profile = "quick";          // "quick" or "paper", echo only
    std::size_t n_f = 10000;
    std::size_t n_u = 100;
    std::size_t width = 40;
    double viscosity = 0.0;
    std::uint64_t seed = 0;
    double learning_rate = 1e-3;
    long iterations = 20000;
    double loss_target = 0.0;
    double dx = 0.01;
    double cfl_lf = 0.4;
    double cfl_le = 0.2;
    std::vector<double> report_times;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Paper-scale defaults for a catalog problem (N_f = 10^6 for the smooth and
/// Buckley-Leverett cases; these are long-running).
ExperimentConfig default_experiment_config(const std::string& problem);

/// Desk-scale profile: N_f = 10^4, width 40, reduced iteration budgets.
void apply_quick_profile(ExperimentConfig& config);

void write_config(std::ostream& os, const ExperimentConfig& config);
/// Reads a bare key = value document or a report containing a [config]
/// section.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig parse_config_file(const std::string& path);

struct ExperimentReport {
    ExperimentConfig config;
    ErrorSeries errors;                 // ELF/EEL at the report times
    std::vector<double> exact_errors;   // vs analytic oracle, NaN when undefined
    double final_loss_f = 0.0;
    double final_loss_u = 0.0;
    long iterations_run = 0;
    double train_seconds = 0.0;
    double fv_seconds = 0.0;
    std::vector<std::string> artifacts;  // files written under the output dir
};

/// Trains the network, runs both reference schemes, computes the error
/// series, and writes artifacts (solution CSVs, error CSV, checkpoint,
/// report) under out_dir. Empty out_dir skips all file output.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                const std::string& out_dir);

void write_report(std::ostream& os, const ExperimentReport& report);

}  // namespace hyplab
