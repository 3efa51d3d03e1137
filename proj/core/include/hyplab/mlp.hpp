#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "hyplab/dual.hpp"

namespace hyplab {

/// Feedforward tanh network mapping (x, t) to u. The standard architecture
/// has 9 hidden layers of equal width and a linear output layer (solution
/// values such as 1.5 fall outside tanh range).
struct MlpParams {
    std::vector<Eigen::MatrixXd> weights;  // weights[l]: n_l x n_{l-1}
    std::vector<Eigen::VectorXd> biases;   // biases[l]: n_l

    std::vector<std::size_t> layer_sizes() const;
    std::size_t parameter_count() const;
    bool all_finite() const;
};

inline constexpr int kHiddenLayers = 9;

/// Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out))), zero biases,
/// reproducible from the seed. Layer sizes [2, width x 9, 1].
MlpParams init_params(std::size_t width, std::uint64_t seed);

/// Network value at (x, t).
double mlp_forward(const MlpParams& params, double x, double t);

/// Network value together with u_x, u_t and u_xx at (x, t), propagated in
/// one forward pass.
DualValue dual_propagate(const MlpParams& params, double x, double t);

/// Parameters as one flat vector (per layer: weight rows, then biases) and
/// back. The flat order is the reference order for gradients.
Eigen::VectorXd flatten(const MlpParams& params);
MlpParams unflatten(const Eigen::VectorXd& data,
                    const std::vector<std::size_t>& layer_sizes);

/// Binary checkpoint: magic "HYPLNET1", uint32 size count, uint32 sizes,
/// then per layer the row-major weight matrix and the bias vector as
/// little-endian doubles.
void save_checkpoint(const std::string& path, const MlpParams& params);
MlpParams load_checkpoint(const std::string& path);

}  // namespace hyplab
