#pragma once

#include <limits>
#include <span>
#include <vector>

#include "hyplab/problems.hpp"

namespace hyplab {

struct SchemeKind {
    enum class Tag { LaxFriedrichs, LagrangianEulerian };
    Tag tag = Tag::LaxFriedrichs;

    static SchemeKind lax_friedrichs() { return {Tag::LaxFriedrichs}; }
    static SchemeKind lagrangian_eulerian() { return {Tag::LagrangianEulerian}; }
};

struct FvConfig {
    double dx = 0.01;
    double cfl_number = 0.2;        // fraction of the stability bound, in (0, 1/2)
    SchemeKind scheme;
    std::vector<double> record_times;  // sorted, within [0, t_end]
};

struct GridSolution {
    std::vector<double> x_centers;
    std::vector<double> times;
    std::vector<std::vector<double>> values;  // values[time][cell]

    bool operator==(const GridSolution&) const = default;
};

/// Interface flux F(uL, uR). Lax-Friedrichs:
///   1/2 [ (h/k)(uL - uR) + (H(uR) + H(uL)) ]
/// Lagrangian-Eulerian:
///   1/4 [ (h/k)(uL - uR) + 2 (H(uR) + H(uL)) ]
double numerical_flux(const SchemeKind& scheme, const FluxKind& flux,
                      double u_left, double u_right, double h_over_k);

/// Stable time increment cfl_number * dx / max_j |H'(u_j)|, clipped to
/// t_remaining so a step can land exactly on a record time. Falls back to
/// cfl_number * dx when the maximal wave speed is zero. Throws
/// SolverDivergedError on non-finite cell values.
double cfl_timestep(const FluxKind& flux, std::span<const double> u, double dx,
                    double cfl_number,
                    double t_remaining = std::numeric_limits<double>::infinity(),
                    double current_time = 0.0);

/// One conservative update u_j - (k/h)[F_{j+1/2} - F_{j-1/2}] with
/// zero-gradient ghost cells at both ends.
std::vector<double> step(const SchemeKind& scheme, const FluxKind& flux,
                         std::span<const double> u, double dx, double k);

/// March the problem from t = 0 with cell averages initialized at cell
/// centers, snapshotting at every record time.
GridSolution solve(const ConservationLawProblem& problem, const FvConfig& config);

}  // namespace hyplab
