#pragma once

#include <span>
#include <vector>

#include "hyplab/fv.hpp"
#include "hyplab/mlp.hpp"
#include "hyplab/problems.hpp"

namespace hyplab {

/// Average quadratic error between two value vectors sampled at the same
/// points: mean of squared differences.
double error_vs_reference(std::span<const double> u_nn, std::span<const double> u_ref);

/// The n equispaced comparison abscissae over [x_min, x_max], endpoints
/// included.
std::vector<double> comparison_points(double x_min, double x_max, std::size_t n);

/// Grid solution values at time t and the given positions, by linear
/// interpolation between cell centers (constant beyond the outermost
/// centers). Throws if t is not among the recorded times.
std::vector<double> sample_grid_at(const GridSolution& solution, double t,
                                   std::span<const double> xs);

/// Network values at time t and the given positions.
std::vector<double> sample_predictor_at(const MlpParams& params, double t,
                                        std::span<const double> xs);

/// Exact-solution values at time t and the given positions.
std::vector<double> sample_oracle_at(const ConservationLawProblem& problem, double t,
                                     std::span<const double> xs);

}  // namespace hyplab
