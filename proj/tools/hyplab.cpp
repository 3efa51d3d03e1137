// Command line front end: finite-volume reference solves, PINN training,
// exact-solution sampling, solution comparison, and full experiments.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hyplab/csv.hpp"
#include "hyplab/experiment.hpp"
#include "hyplab/metrics.hpp"
#include "hyplab/oracles.hpp"
#include "hyplab/pinn.hpp"

namespace {

using namespace hyplab;

SchemeKind parse_scheme(const std::string& name) {
    if (name == "lf" || name == "lax-friedrichs") return SchemeKind::lax_friedrichs();
    if (name == "le" || name == "lagrangian-eulerian") {
        return SchemeKind::lagrangian_eulerian();
    }
    throw CLI::ValidationError("--scheme", "expected 'lf' or 'le', got '" + name + "'");
}

bool is_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
    char magic[8] = {};
    is.read(magic, sizeof(magic));
    return is && std::string(magic, 8) == "HYPLNET1";
}

// One side of a comparison: either a grid solution or a network checkpoint.
struct CompareInput {
    std::optional<GridSolution> grid;
    std::optional<MlpParams> net;

    static CompareInput open(const std::string& path) {
        CompareInput in;
        if (is_checkpoint(path)) {
            in.net = load_checkpoint(path);
        } else {
            in.grid = read_solution_csv(path);
        }
        return in;
    }

    std::vector<double> sample(double t, std::span<const double> xs) const {
        if (grid) return sample_grid_at(*grid, t, xs);
        return sample_predictor_at(*net, t, xs);
    }
};

int cmd_solve_fv(const std::string& problem_name, const std::string& scheme_name,
                 double dx, double cfl, std::vector<double> times,
                 const std::string& output) {
    const auto problem = catalog(problem_name);
    if (times.empty()) times = {problem.t_end};
    const SchemeKind scheme = parse_scheme(scheme_name);
    if (cfl < 0.0) cfl = scheme.tag == SchemeKind::Tag::LaxFriedrichs ? 0.4 : 0.2;
    FvConfig config{dx, cfl, scheme, times};
    const GridSolution solution = solve(problem, config);
    write_solution_csv(output, solution);
    std::cout << "wrote " << output << " (" << solution.times.size()
              << " time levels, " << solution.x_centers.size() << " cells)\n";
    return 0;
}

int cmd_train(const TrainingConfig& config, const std::string& checkpoint,
              const std::string& history_path) {
    const TrainResult result = train(config);
    save_checkpoint(checkpoint, result.params);
    if (!history_path.empty()) {
        std::ofstream os(history_path);
        if (!os) throw std::runtime_error("cannot open '" + history_path + "'");
        os << "iteration,loss\n";
        for (std::size_t i = 0; i < result.loss_history.size(); ++i) {
            os << i << ',' << format_double(result.loss_history[i]) << '\n';
        }
    }
    std::cout << "trained " << config.problem.name << ": " << result.iterations_run
              << " iterations, L_f = " << format_double(result.final_loss_f)
              << ", L_u = " << format_double(result.final_loss_u) << '\n'
              << "wrote " << checkpoint << '\n';
    return 0;
}

int cmd_oracle(const std::string& problem_name, std::vector<double> times, double dx,
               const std::string& output) {
    const auto problem = catalog(problem_name);
    if (times.empty()) times = {problem.t_end};

    GridSolution solution;
    const auto n = static_cast<std::size_t>(
        std::llround((problem.x_max - problem.x_min) / dx));
    const double width = problem.x_max - problem.x_min;
    for (std::size_t j = 0; j < n; ++j) {
        solution.x_centers.push_back(problem.x_min +
                                     (static_cast<double>(j) + 0.5) * width /
                                         static_cast<double>(n));
    }
    for (double t : times) {
        solution.times.push_back(t);
        std::vector<double> row(n);
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = exact_eval(problem, solution.x_centers[j], t);
        }
        solution.values.push_back(std::move(row));
    }
    write_solution_csv(output, solution);
    std::cout << "wrote " << output << '\n';
    return 0;
}

int cmd_compare(const std::string& path_a, const std::string& path_b,
                std::vector<double> times, std::size_t n_u,
                const std::string& problem_name, const std::string& output) {
    const CompareInput a = CompareInput::open(path_a);
    const CompareInput b = CompareInput::open(path_b);

    // The comparison domain comes from the grids when present, otherwise
    // from the named problem.
    double x_min = 0.0, x_max = 0.0;
    const GridSolution* grids[2] = {a.grid ? &*a.grid : nullptr,
                                    b.grid ? &*b.grid : nullptr};
    if (grids[0] != nullptr || grids[1] != nullptr) {
        const GridSolution* first = grids[0] != nullptr ? grids[0] : grids[1];
        x_min = first->x_centers.front();
        x_max = first->x_centers.back();
        if (grids[0] != nullptr && grids[1] != nullptr) {
            const double o_min = grids[1]->x_centers.front();
            const double o_max = grids[1]->x_centers.back();
            if (std::fabs(o_min - x_min) > 0.5 || std::fabs(o_max - x_max) > 0.5) {
                throw std::runtime_error(
                    "mismatched grids: x ranges [" + format_double(x_min) + ", " +
                    format_double(x_max) + "] vs [" + format_double(o_min) + ", " +
                    format_double(o_max) + "]");
            }
        }
    } else if (!problem_name.empty()) {
        const auto problem = catalog(problem_name);
        x_min = problem.x_min;
        x_max = problem.x_max;
    } else {
        throw std::runtime_error(
            "two checkpoints need --problem to define the comparison domain");
    }

    if (times.empty()) {
        // Default to the times recorded in every grid input.
        const GridSolution* source = grids[0] != nullptr ? grids[0] : grids[1];
        if (source == nullptr) {
            throw std::runtime_error("two checkpoints need explicit --times");
        }
        for (double t : source->times) {
            bool in_both = true;
            if (grids[0] != nullptr && grids[1] != nullptr) {
                in_both = false;
                for (double s : grids[1]->times) in_both = in_both || s == t;
            }
            if (in_both) times.push_back(t);
        }
        if (times.empty()) {
            throw std::runtime_error("mismatched grids: no common recorded times");
        }
    }

    const auto xs = comparison_points(x_min, x_max, n_u);
    std::ostringstream lines;
    lines << "t,error\n";
    for (double t : times) {
        std::vector<double> ua, ub;
        try {
            ua = a.sample(t, xs);
            ub = b.sample(t, xs);
        } catch (const std::invalid_argument& err) {
            throw std::runtime_error(std::string("mismatched grids: ") + err.what());
        }
        lines << format_double(t) << ',' << format_double(error_vs_reference(ua, ub))
              << '\n';
    }
    std::cout << lines.str();
    if (!output.empty()) {
        std::ofstream os(output);
        if (!os) throw std::runtime_error("cannot open '" + output + "'");
        os << lines.str();
    }
    return 0;
}

int cmd_experiment(const ExperimentConfig& config, const std::string& out_dir) {
    const ExperimentReport report = run_experiment(config, out_dir);
    std::cout << "experiment " << config.problem << " (" << config.profile
              << " profile): " << report.iterations_run << " iterations, L_f = "
              << format_double(report.final_loss_f)
              << ", L_u = " << format_double(report.final_loss_u) << '\n';
    for (std::size_t i = 0; i < report.errors.times.size(); ++i) {
        std::cout << "  t = " << report.errors.times[i]
                  << ": ELF = " << format_double(report.errors.elf[i])
                  << ", EEL = " << format_double(report.errors.eel[i]);
        if (std::isfinite(report.exact_errors[i])) {
            std::cout << ", exact = " << format_double(report.exact_errors[i]);
        }
        std::cout << '\n';
    }
    for (const auto& artifact : report.artifacts) {
        std::cout << "  wrote " << artifact << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D scalar conservation laws: finite-volume references, a "
                 "physics-informed network, exact solutions, and experiments"};
    app.require_subcommand(1);

    std::string catalog_help = "problem name (";
    for (std::size_t i = 0; i < catalog_names().size(); ++i) {
        if (i > 0) catalog_help += ", ";
        catalog_help += catalog_names()[i];
    }
    catalog_help += ")";

    // solve-fv
    auto* solve_cmd = app.add_subcommand("solve-fv", "run a finite-volume reference");
    std::string problem_name, scheme_name = "le", output;
    double dx = 0.01, cfl = -1.0;
    std::vector<double> times;
    solve_cmd->add_option("--problem", problem_name, catalog_help)->required();
    solve_cmd->add_option("--scheme", scheme_name, "numerical flux: lf or le");
    solve_cmd->add_option("--dx", dx, "cell width");
    solve_cmd->add_option("--cfl", cfl, "CFL number in (0, 0.5); default 0.4 lf / 0.2 le");
    solve_cmd->add_option("--times", times, "record times")->delimiter(',');
    solve_cmd->add_option("--output", output, "solution CSV path")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "train the physics-informed network");
    std::string train_problem, checkpoint, history_path;
    std::size_t n_f = 10000, n_u = 100, width = 40;
    double viscosity = 0.0, learning_rate = 1e-3, loss_target = 0.0;
    std::uint64_t seed = 0;
    long iterations = 20000;
    train_cmd->add_option("--problem", train_problem, catalog_help)->required();
    train_cmd->add_option("--width", width, "neurons per hidden layer");
    train_cmd->add_option("--n-f", n_f, "collocation point count");
    train_cmd->add_option("--n-u", n_u, "initial point count");
    train_cmd->add_option("--viscosity", viscosity, "viscous coefficient in the residual");
    train_cmd->add_option("--seed", seed, "RNG seed");
    train_cmd->add_option("--iterations", iterations, "Adam iteration budget");
    train_cmd->add_option("--learning-rate", learning_rate, "Adam step size");
    train_cmd->add_option("--loss-target", loss_target, "stop early at this total loss");
    train_cmd->add_option("--checkpoint", checkpoint, "output checkpoint path")->required();
    train_cmd->add_option("--loss-history", history_path, "per-iteration loss CSV");

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "sample the exact entropy solution");
    std::string oracle_problem, oracle_output;
    double oracle_dx = 0.01;
    std::vector<double> oracle_times;
    oracle_cmd->add_option("--problem", oracle_problem, catalog_help)->required();
    oracle_cmd->add_option("--times", oracle_times, "sample times")->delimiter(',');
    oracle_cmd->add_option("--dx", oracle_dx, "sampling grid spacing");
    oracle_cmd->add_option("--output", oracle_output, "solution CSV path")->required();

    // compare
    auto* compare_cmd =
        app.add_subcommand("compare", "average quadratic error between two solutions");
    std::string path_a, path_b, compare_problem, compare_output;
    std::vector<double> compare_times;
    std::size_t compare_n = 100;
    compare_cmd->add_option("inputs", path_a, "solution CSV or checkpoint")->required();
    compare_cmd->add_option("inputs_b", path_b, "solution CSV or checkpoint")->required();
    compare_cmd->add_option("--times", compare_times, "comparison times")->delimiter(',');
    compare_cmd->add_option("--n-u", compare_n, "comparison point count");
    compare_cmd->add_option("--problem", compare_problem,
                            "domain source when both inputs are checkpoints");
    compare_cmd->add_option("--output", compare_output, "also write the CSV here");

    // experiment
    auto* exp_cmd = app.add_subcommand(
        "experiment", "train, solve both references, and report ELF/EEL errors");
    std::string exp_name, exp_profile = "quick", exp_config_path, out_dir = "hyplab-out";
    ExperimentConfig overrides;
    exp_cmd->add_option("name", exp_name, catalog_help);
    exp_cmd->add_option("--config", exp_config_path,
                        "config document or report to re-run");
    exp_cmd->add_option("--profile", exp_profile, "quick (desk scale) or paper");
    exp_cmd->add_option("--out-dir", out_dir, "artifact directory");
    auto* o_nf = exp_cmd->add_option("--n-f", overrides.n_f, "collocation count");
    auto* o_nu = exp_cmd->add_option("--n-u", overrides.n_u, "initial point count");
    auto* o_width = exp_cmd->add_option("--width", overrides.width, "hidden width");
    auto* o_visc = exp_cmd->add_option("--viscosity", overrides.viscosity, "residual viscosity");
    auto* o_seed = exp_cmd->add_option("--seed", overrides.seed, "RNG seed");
    auto* o_lr = exp_cmd->add_option("--learning-rate", overrides.learning_rate, "Adam step");
    auto* o_iter = exp_cmd->add_option("--iterations", overrides.iterations, "Adam budget");
    auto* o_target = exp_cmd->add_option("--loss-target", overrides.loss_target,
                                         "stop early at this total loss");
    auto* o_dx = exp_cmd->add_option("--dx", overrides.dx, "FV cell width");
    auto* o_cfl_lf = exp_cmd->add_option("--cfl-lf", overrides.cfl_lf, "Lax-Friedrichs CFL");
    auto* o_cfl_le = exp_cmd->add_option("--cfl-le", overrides.cfl_le,
                                         "Lagrangian-Eulerian CFL");
    auto* o_times = exp_cmd->add_option("--times", overrides.report_times, "report times")
                        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) {
            return cmd_solve_fv(problem_name, scheme_name, dx, cfl, times, output);
        }
        if (train_cmd->parsed()) {
            TrainingConfig config;
            config.problem = catalog(train_problem);
            config.n_f = n_f;
            config.n_u = n_u;
            config.width = width;
            config.viscosity = viscosity;
            config.seed = seed;
            config.learning_rate = learning_rate;
            config.iterations = iterations;
            config.loss_target = loss_target;
            return cmd_train(config, checkpoint, history_path);
        }
        if (oracle_cmd->parsed()) {
            return cmd_oracle(oracle_problem, oracle_times, oracle_dx, oracle_output);
        }
        if (compare_cmd->parsed()) {
            return cmd_compare(path_a, path_b, compare_times, compare_n,
                               compare_problem, compare_output);
        }
        if (exp_cmd->parsed()) {
            ExperimentConfig config;
            if (!exp_config_path.empty()) {
                config = parse_config_file(exp_config_path);
                if (!exp_name.empty() && exp_name != config.problem) {
                    throw std::runtime_error("problem '" + exp_name +
                                             "' conflicts with --config problem '" +
                                             config.problem + "'");
                }
            } else {
                if (exp_name.empty()) {
                    throw std::runtime_error("experiment needs a problem name or --config");
                }
                config = default_experiment_config(exp_name);
                if (exp_profile == "quick") {
                    apply_quick_profile(config);
                } else if (exp_profile != "paper") {
                    throw std::runtime_error("unknown profile '" + exp_profile +
                                             "' (expected quick or paper)");
                }
            }
            if (*o_nf) config.n_f = overrides.n_f;
            if (*o_nu) config.n_u = overrides.n_u;
            if (*o_width) config.width = overrides.width;
            if (*o_visc) config.viscosity = overrides.viscosity;
            if (*o_seed) config.seed = overrides.seed;
            if (*o_lr) config.learning_rate = overrides.learning_rate;
            if (*o_iter) config.iterations = overrides.iterations;
            if (*o_target) config.loss_target = overrides.loss_target;
            if (*o_dx) config.dx = overrides.dx;
            if (*o_cfl_lf) config.cfl_lf = overrides.cfl_lf;
            if (*o_cfl_le) config.cfl_le = overrides.cfl_le;
            if (*o_times) config.report_times = overrides.report_times;
            return cmd_experiment(config, out_dir);
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
