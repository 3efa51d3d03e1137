#include "hyplab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hyplab/metrics.hpp"
#include "hyplab/oracles.hpp"

namespace hyplab {

namespace {

std::vector<double> default_report_times(const std::string& problem) {
    // The Buckley-Leverett shock exits x = 8 near t ~ 6.6, so its reports
    // stay earlier in the run.
    if (problem == "bl-shock") return {1.0, 2.0, 3.0, 4.0};
    return {2.0, 4.0, 6.0, 8.0};
}

std::string join_times(const std::vector<double>& times) {
    std::string out;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i > 0) out += ',';
        out += format_double(times[i]);
    }
    return out;
}

std::vector<double> split_times(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string token = text.substr(pos, comma - pos);
        if (!token.empty()) out.push_back(std::stod(token));
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double now_seconds() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

}  // namespace

ExperimentConfig default_experiment_config(const std::string& problem) {
    ExperimentConfig config;
    config.problem = catalog(problem).name;  // validates the name
    config.profile = "paper";
    config.n_u = 100;
    config.width = 40;
    config.seed = 0;
    config.learning_rate = 1e-3;
    config.iterations = 20000;
    config.loss_target = 0.0;
    config.dx = 0.01;
    config.cfl_lf = 0.4;
    config.cfl_le = 0.2;
    config.report_times = default_report_times(problem);

    if (problem == "burgers-rarefaction") {
        config.n_f = 10000;
        config.viscosity = 0.0;
    } else if (problem == "burgers-shock") {
        config.n_f = 10000;
        config.viscosity = 0.01;
    } else if (problem == "burgers-smooth") {
        config.n_f = 1000000;
        config.width = 60;
        config.viscosity = 0.01;
    } else {  // bl-shock
        config.n_f = 1000000;
        config.viscosity = 0.01;
    }
    return config;
}

void apply_quick_profile(ExperimentConfig& config) {
    config.profile = "quick";
    config.n_f = 10000;
    config.width = 40;
    if (config.problem == "burgers-rarefaction") {
        config.iterations = 6000;
    } else if (config.problem == "burgers-shock") {
        config.iterations = 6000;
    } else if (config.problem == "burgers-smooth") {
        config.iterations = 12000;
    } else {
        config.iterations = 12000;
    }
}

void write_config(std::ostream& os, const ExperimentConfig& config) {
    os << "problem = " << config.problem << '\n';
    os << "profile = " << config.profile << '\n';
    os << "n_f = " << config.n_f << '\n';
    os << "n_u = " << config.n_u << '\n';
    os << "width = " << config.width << '\n';
    os << "viscosity = " << format_double(config.viscosity) << '\n';
    os << "seed = " << config.seed << '\n';
    os << "learning_rate = " << format_double(config.learning_rate) << '\n';
    os << "iterations = " << config.iterations << '\n';
    os << "loss_target = " << format_double(config.loss_target) << '\n';
    os << "dx = " << format_double(config.dx) << '\n';
    os << "cfl_lf = " << format_double(config.cfl_lf) << '\n';
    os << "cfl_le = " << format_double(config.cfl_le) << '\n';
    os << "report_times = " << join_times(config.report_times) << '\n';
}

ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig config;
    config.report_times.clear();
    bool seen_problem = false;
    bool in_config = true;  // bare documents are all config
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        if (text.front() == '[') {
            in_config = text == "[config]";
            continue;
        }
        if (!in_config) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected 'key = value'");
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        try {
            if (key == "problem") {
                config.problem = value;
                seen_problem = true;
            } else if (key == "profile") {
                config.profile = value;
            } else if (key == "n_f") {
                config.n_f = std::stoull(value);
            } else if (key == "n_u") {
                config.n_u = std::stoull(value);
            } else if (key == "width") {
                config.width = std::stoull(value);
            } else if (key == "viscosity") {
                config.viscosity = std::stod(value);
            } else if (key == "seed") {
                config.seed = std::stoull(value);
            } else if (key == "learning_rate") {
                config.learning_rate = std::stod(value);
            } else if (key == "iterations") {
                config.iterations = std::stol(value);
            } else if (key == "loss_target") {
                config.loss_target = std::stod(value);
            } else if (key == "dx") {
                config.dx = std::stod(value);
            } else if (key == "cfl_lf") {
                config.cfl_lf = std::stod(value);
            } else if (key == "cfl_le") {
                config.cfl_le = std::stod(value);
            } else if (key == "report_times") {
                config.report_times = split_times(value);
            } else {
                throw std::runtime_error("config line " + std::to_string(line_no) +
                                         ": unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": cannot parse value '" + value + "'");
        }
    }
    if (!seen_problem) throw std::runtime_error("config: missing 'problem' key");
    if (config.report_times.empty()) {
        config.report_times = default_report_times(config.problem);
    }
    return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
    return parse_config(is);
}

ExperimentReport run_experiment(const ExperimentConfig& config,
                                const std::string& out_dir) {
    const ConservationLawProblem problem = catalog(config.problem);
    if (config.report_times.empty()) {
        throw std::invalid_argument("run_experiment: no report times");
    }
    for (double t : config.report_times) {
        if (t < 0.0 || t > problem.t_end) {
            throw std::invalid_argument("run_experiment: report time outside [0, t_end]");
        }
    }

    ExperimentReport report;
    report.config = config;

    TrainingConfig tc;
    tc.problem = problem;
    tc.n_f = config.n_f;
    tc.n_u = config.n_u;
    tc.width = config.width;
    tc.viscosity = config.viscosity;
    tc.seed = config.seed;
    tc.learning_rate = config.learning_rate;
    tc.iterations = config.iterations;
    tc.loss_target = config.loss_target;

    const double t_train0 = now_seconds();
    TrainResult trained = train(tc);
    report.train_seconds = now_seconds() - t_train0;
    report.final_loss_f = trained.final_loss_f;
    report.final_loss_u = trained.final_loss_u;
    report.iterations_run = trained.iterations_run;

    const double t_fv0 = now_seconds();
    FvConfig lf{config.dx, config.cfl_lf, SchemeKind::lax_friedrichs(), config.report_times};
    FvConfig le{config.dx, config.cfl_le, SchemeKind::lagrangian_eulerian(), config.report_times};
    const GridSolution sol_lf = solve(problem, lf);
    const GridSolution sol_le = solve(problem, le);
    report.fv_seconds = now_seconds() - t_fv0;

    const auto xs = comparison_points(problem.x_min, problem.x_max, config.n_u);
    GridSolution nn_solution;
    nn_solution.x_centers = xs;
    for (double t : config.report_times) {
        const auto u_nn = sample_predictor_at(trained.params, t, xs);
        const auto u_lf = sample_grid_at(sol_lf, t, xs);
        const auto u_le = sample_grid_at(sol_le, t, xs);
        report.errors.times.push_back(t);
        report.errors.elf.push_back(error_vs_reference(u_nn, u_lf));
        report.errors.eel.push_back(error_vs_reference(u_nn, u_le));
        if (exact_available(problem, t)) {
            const auto u_ex = sample_oracle_at(problem, t, xs);
            report.exact_errors.push_back(error_vs_reference(u_nn, u_ex));
        } else {
            report.exact_errors.push_back(std::numeric_limits<double>::quiet_NaN());
        }
        nn_solution.times.push_back(t);
        nn_solution.values.push_back(u_nn);
    }

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const std::string base = out_dir + "/" + config.problem;

        write_solution_csv(base + "-lf.csv", sol_lf);
        report.artifacts.push_back(base + "-lf.csv");
        write_solution_csv(base + "-le.csv", sol_le);
        report.artifacts.push_back(base + "-le.csv");
        write_solution_csv(base + "-pinn.csv", nn_solution);
        report.artifacts.push_back(base + "-pinn.csv");
        write_error_series_csv(base + "-errors.csv", report.errors);
        report.artifacts.push_back(base + "-errors.csv");
        save_checkpoint(base + "-checkpoint.bin", trained.params);
        report.artifacts.push_back(base + "-checkpoint.bin");

        const std::string report_path = base + "-report.txt";
        std::ofstream os(report_path);
        if (!os) throw std::runtime_error("cannot open '" + report_path + "' for writing");
        write_report(os, report);
        report.artifacts.push_back(report_path);
    }
    return report;
}

void write_report(std::ostream& os, const ExperimentReport& report) {
    os << "# hyplab experiment report: " << report.config.problem << "\n\n";
    os << "[config]\n";
    write_config(os, report.config);
    os << "\n[results]\n";
    os << "iterations_run = " << report.iterations_run << '\n';
    os << "final_loss_f = " << format_double(report.final_loss_f) << '\n';
    os << "final_loss_u = " << format_double(report.final_loss_u) << '\n';
    os << "train_seconds = " << format_double(report.train_seconds) << '\n';
    os << "fv_seconds = " << format_double(report.fv_seconds) << '\n';
    for (std::size_t i = 0; i < report.errors.times.size(); ++i) {
        const std::string suffix = "_" + std::to_string(i);
        os << "time" << suffix << " = " << format_double(report.errors.times[i]) << '\n';
        os << "elf" << suffix << " = " << format_double(report.errors.elf[i]) << '\n';
        os << "eel" << suffix << " = " << format_double(report.errors.eel[i]) << '\n';
        os << "exact_error" << suffix << " = "
           << format_double(report.exact_errors[i]) << '\n';
    }
    for (const auto& artifact : report.artifacts) {
        os << "artifact = " << artifact << '\n';
    }
}

}  // namespace hyplab
