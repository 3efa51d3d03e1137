#include "hyplab/fv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hyplab/errors.hpp"

namespace hyplab {

namespace {

void validate(const ConservationLawProblem& problem, const FvConfig& config) {
    if (!(problem.x_min < problem.x_max)) {
        throw std::invalid_argument("solve: x_min must be less than x_max");
    }
    if (!(problem.t_end > 0.0)) {
        throw std::invalid_argument("solve: t_end must be positive");
    }
    if (!(config.dx > 0.0)) {
        throw std::invalid_argument("solve: dx must be positive");
    }
    if (!(config.cfl_number > 0.0 && config.cfl_number < 0.5)) {
        throw std::invalid_argument("solve: cfl_number must lie in (0, 0.5)");
    }
    if (!std::is_sorted(config.record_times.begin(), config.record_times.end())) {
        throw std::invalid_argument("solve: record_times must be sorted");
    }
    for (double t : config.record_times) {
        if (t < 0.0 || t > problem.t_end) {
            throw std::invalid_argument("solve: record_times must lie in [0, t_end]");
        }
    }
}

}  // namespace

double numerical_flux(const SchemeKind& scheme, const FluxKind& flux,
                      double u_left, double u_right, double h_over_k) {
    const double flux_sum = flux_eval(flux, u_right) + flux_eval(flux, u_left);
    const double jump = h_over_k * (u_left - u_right);
    switch (scheme.tag) {
        case SchemeKind::Tag::LaxFriedrichs:
            return 0.5 * (jump + flux_sum);
        case SchemeKind::Tag::LagrangianEulerian:
            return 0.25 * (jump + 2.0 * flux_sum);
    }
    return 0.0;
}

double cfl_timestep(const FluxKind& flux, std::span<const double> u, double dx,
                    double cfl_number, double t_remaining, double current_time) {
    if (u.empty()) throw std::invalid_argument("cfl_timestep: no cells");
    if (!(cfl_number > 0.0 && cfl_number < 0.5)) {
        throw std::invalid_argument("cfl_timestep: cfl_number must lie in (0, 0.5)");
    }
    double max_speed = 0.0;
    for (double value : u) {
        if (!std::isfinite(value)) {
            std::ostringstream msg;
            msg << "finite-volume solver diverged at t = " << current_time
                << " (non-finite cell value)";
            throw SolverDivergedError(current_time, msg.str());
        }
        max_speed = std::max(max_speed, std::fabs(flux_deriv(flux, value)));
    }
    // Constant-zero states have no wave speed; any step is stable there.
    const double k = max_speed > 0.0 ? cfl_number * dx / max_speed : cfl_number * dx;
    return std::min(k, t_remaining);
}

std::vector<double> step(const SchemeKind& scheme, const FluxKind& flux,
                         std::span<const double> u, double dx, double k) {
    const std::size_t n = u.size();
    const double h_over_k = dx / k;
    const double k_over_h = k / dx;

    // Interface fluxes with zero-gradient ghost cells.
    std::vector<double> face_flux(n + 1);
    face_flux[0] = numerical_flux(scheme, flux, u[0], u[0], h_over_k);
    for (std::size_t j = 1; j < n; ++j) {
        face_flux[j] = numerical_flux(scheme, flux, u[j - 1], u[j], h_over_k);
    }
    face_flux[n] = numerical_flux(scheme, flux, u[n - 1], u[n - 1], h_over_k);

    std::vector<double> next(n);
    for (std::size_t j = 0; j < n; ++j) {
        next[j] = u[j] - k_over_h * (face_flux[j + 1] - face_flux[j]);
    }
    return next;
}

GridSolution solve(const ConservationLawProblem& problem, const FvConfig& config) {
    validate(problem, config);

    const double width = problem.x_max - problem.x_min;
    const auto n_cells = static_cast<std::size_t>(std::llround(width / config.dx));
    if (n_cells == 0) throw std::invalid_argument("solve: dx exceeds the domain width");
    const double dx = width / static_cast<double>(n_cells);

    GridSolution out;
    out.x_centers.resize(n_cells);
    for (std::size_t j = 0; j < n_cells; ++j) {
        out.x_centers[j] = problem.x_min + (static_cast<double>(j) + 0.5) * dx;
    }

    std::vector<double> u(n_cells);
    for (std::size_t j = 0; j < n_cells; ++j) {
        u[j] = ic_eval(problem.ic, out.x_centers[j]);
    }

    std::vector<double> record_times = config.record_times;
    if (record_times.empty()) record_times.push_back(problem.t_end);

    double t = 0.0;
    for (double target : record_times) {
        while (t < target) {
            const double k = cfl_timestep(problem.flux, u, dx, config.cfl_number,
                                          target - t, t);
            u = step(config.scheme, problem.flux, u, dx, k);
            t = (k == target - t) ? target : t + k;
        }
        out.times.push_back(target);
        out.values.push_back(u);
    }
    return out;
}

}  // namespace hyplab
