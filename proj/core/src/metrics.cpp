#include "hyplab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hyplab/oracles.hpp"

namespace hyplab {

double error_vs_reference(std::span<const double> u_nn, std::span<const double> u_ref) {
    if (u_nn.empty() || u_nn.size() != u_ref.size()) {
        throw std::invalid_argument(
            "error_vs_reference: value vectors must be nonempty and equally long");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < u_nn.size(); ++i) {
        const double d = u_nn[i] - u_ref[i];
        sum += d * d;
    }
    return sum / static_cast<double>(u_nn.size());
}

std::vector<double> comparison_points(double x_min, double x_max, std::size_t n) {
    if (n < 1) throw std::invalid_argument("comparison_points: n must be >= 1");
    std::vector<double> xs(n);
    if (n == 1) {
        xs[0] = x_min;
        return xs;
    }
    const double span = x_max - x_min;
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = x_min + span * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return xs;
}

std::vector<double> sample_grid_at(const GridSolution& solution, double t,
                                   std::span<const double> xs) {
    std::size_t level = solution.times.size();
    for (std::size_t n = 0; n < solution.times.size(); ++n) {
        if (std::fabs(solution.times[n] - t) <= 1e-12) {
            level = n;
            break;
        }
    }
    if (level == solution.times.size()) {
        throw std::invalid_argument("sample_grid_at: time " + std::to_string(t) +
                                    " is not among the recorded times");
    }
    const auto& centers = solution.x_centers;
    const auto& u = solution.values[level];

    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        if (x <= centers.front()) {
            out[i] = u.front();
        } else if (x >= centers.back()) {
            out[i] = u.back();
        } else {
            const auto it = std::upper_bound(centers.begin(), centers.end(), x);
            const std::size_t j = static_cast<std::size_t>(it - centers.begin());
            const double w = (x - centers[j - 1]) / (centers[j] - centers[j - 1]);
            out[i] = (1.0 - w) * u[j - 1] + w * u[j];
        }
    }
    return out;
}

std::vector<double> sample_predictor_at(const MlpParams& params, double t,
                                        std::span<const double> xs) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out[i] = mlp_forward(params, xs[i], t);
    }
    return out;
}

std::vector<double> sample_oracle_at(const ConservationLawProblem& problem, double t,
                                     std::span<const double> xs) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out[i] = exact_eval(problem, xs[i], t);
    }
    return out;
}

}  // namespace hyplab
