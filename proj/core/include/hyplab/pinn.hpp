#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hyplab/mlp.hpp"
#include "hyplab/problems.hpp"
#include "hyplab/tape.hpp"

namespace hyplab {

struct SpaceTimePoint {
    double x = 0.0;
    double t = 0.0;
};

struct InitialPoint {
    double x = 0.0;
    double u = 0.0;  // target value u0(x)
};

struct CollocationSet {
    std::vector<SpaceTimePoint> interior;  // N_f residual points
    std::vector<InitialPoint> initial;     // N_u initial-condition points
};

/// Interior points drawn uniformly over [x_min,x_max] x [0,t_end] (seeded);
/// initial points equispaced over [x_min,x_max] at t = 0 with targets from
/// the initial condition.
CollocationSet sample_collocation(const ConservationLawProblem& problem,
                                  std::size_t n_f, std::size_t n_u,
                                  std::uint64_t seed);

struct TrainingConfig {
    ConservationLawProblem problem;
    std::size_t n_f = 10000;
    std::size_t n_u = 100;
    std::size_t width = 40;
    double viscosity = 0.0;
    std::uint64_t seed = 0;
    double learning_rate = 1e-3;
    long iterations = 20000;
    /// Stop once the total loss drops to this value; 0 disables the check.
    double loss_target = 0.0;
};

/// PDE residual f = u_t + H'(u) u_x - viscosity * u_xx given the network's
/// derivative channels at one point.
double residual_from_dual(const DualValue& u, const FluxKind& flux, double viscosity);
double residual_f(const MlpParams& params, const FluxKind& flux, double viscosity,
                  double x, double t);

/// Mean squared residual over the interior points.
double loss_f(const MlpParams& params, const FluxKind& flux, double viscosity,
              std::span<const SpaceTimePoint> interior);
/// Mean squared initial-condition mismatch.
double loss_u(const MlpParams& params, std::span<const InitialPoint> initial);

std::vector<double> predict(const MlpParams& params,
                            std::span<const SpaceTimePoint> points);

/// Full-batch evaluator of L_f + L_u and its parameter gradient. Points are
/// processed in fixed blocks whose partial sums combine through a fixed
/// pairwise tree, so results do not depend on the worker count.
class LossGradEvaluator {
public:
    LossGradEvaluator(FluxKind flux, double viscosity, CollocationSet points,
                      unsigned workers = 0);
    ~LossGradEvaluator();
    LossGradEvaluator(LossGradEvaluator&&) noexcept;
    LossGradEvaluator& operator=(LossGradEvaluator&&) noexcept;

    struct Losses {
        double f = 0.0;
        double u = 0.0;
        double total() const { return f + u; }
    };

    /// Loss and gradient in flatten() order.
    Losses loss_and_grad(const MlpParams& params, Eigen::VectorXd& grad);
    Losses loss_only(const MlpParams& params);

    const CollocationSet& points() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct TrainResult {
    MlpParams params;
    std::vector<double> loss_history;  // total loss per iteration, pre-update
    double final_loss_f = 0.0;
    double final_loss_u = 0.0;
    long iterations_run = 0;
};

/// Adam (full batch, step 1e-3, decay 0.9/0.999, epsilon 1e-8 by default)
/// on L_f + L_u. Deterministic for a fixed config including the seed.
/// Throws TrainingDivergedError if the loss turns non-finite.
TrainResult train(const TrainingConfig& config);

/// The same total loss recorded through the general tape, for cross-checking
/// the blocked evaluator. Returns the loss node and the parameter leaves in
/// flatten() order.
struct TapeLoss {
    Tape::NodeId loss;
    std::vector<Tape::NodeId> params;
};
TapeLoss record_loss_on_tape(Tape& tape, const MlpParams& params,
                             const FluxKind& flux, double viscosity,
                             const CollocationSet& points);

}  // namespace hyplab
