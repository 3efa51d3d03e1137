#include "hyplab/mlp.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "hyplab/rng.hpp"

namespace hyplab {

namespace {

constexpr char kMagic[8] = {'H', 'Y', 'P', 'L', 'N', 'E', 'T', '1'};

void check_consistent(const MlpParams& params) {
    if (params.weights.empty() || params.weights.size() != params.biases.size()) {
        throw std::invalid_argument("MlpParams: inconsistent layer lists");
    }
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        if (params.biases[l].size() != params.weights[l].rows()) {
            throw std::invalid_argument("MlpParams: bias/weight size mismatch");
        }
        if (l > 0 && params.weights[l].cols() != params.weights[l - 1].rows()) {
            throw std::invalid_argument("MlpParams: layer size mismatch");
        }
    }
}

}  // namespace

std::vector<std::size_t> MlpParams::layer_sizes() const {
    std::vector<std::size_t> sizes;
    if (weights.empty()) return sizes;
    sizes.push_back(static_cast<std::size_t>(weights.front().cols()));
    for (const auto& w : weights) sizes.push_back(static_cast<std::size_t>(w.rows()));
    return sizes;
}

std::size_t MlpParams::parameter_count() const {
    std::size_t count = 0;
    for (const auto& w : weights) count += static_cast<std::size_t>(w.size());
    for (const auto& b : biases) count += static_cast<std::size_t>(b.size());
    return count;
}

bool MlpParams::all_finite() const {
    for (const auto& w : weights) {
        if (!w.allFinite()) return false;
    }
    for (const auto& b : biases) {
        if (!b.allFinite()) return false;
    }
    return true;
}

MlpParams init_params(std::size_t width, std::uint64_t seed) {
    if (width < 1) throw std::invalid_argument("init_params: width must be >= 1");

    std::vector<std::size_t> sizes;
    sizes.push_back(2);
    for (int l = 0; l < kHiddenLayers; ++l) sizes.push_back(width);
    sizes.push_back(1);

    UniformRng rng(seed);
    MlpParams params;
    for (std::size_t l = 1; l < sizes.size(); ++l) {
        const auto rows = static_cast<Eigen::Index>(sizes[l]);
        const auto cols = static_cast<Eigen::Index>(sizes[l - 1]);
        const double bound = std::sqrt(6.0 / static_cast<double>(sizes[l] + sizes[l - 1]));
        Eigen::MatrixXd w(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < cols; ++j) {
                w(i, j) = rng.next(-bound, bound);
            }
        }
        params.weights.push_back(std::move(w));
        params.biases.push_back(Eigen::VectorXd::Zero(rows));
    }
    return params;
}

double mlp_forward(const MlpParams& params, double x, double t) {
    Eigen::VectorXd a(2);
    a << x, t;
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        Eigen::VectorXd z = params.weights[l] * a + params.biases[l];
        if (l + 1 < params.weights.size()) {
            a = z.array().tanh().matrix();
        } else {
            a = std::move(z);
        }
    }
    return a(0);
}

DualValue dual_propagate(const MlpParams& params, double x, double t) {
    std::vector<DualValue> a = {DualValue::input_x(x), DualValue::input_t(t)};
    std::vector<DualValue> z;
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        const auto& w = params.weights[l];
        const auto& b = params.biases[l];
        z.assign(static_cast<std::size_t>(w.rows()), DualValue{});
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            DualValue acc = DualValue::constant(b(i));
            for (Eigen::Index j = 0; j < w.cols(); ++j) {
                acc = acc + w(i, j) * a[static_cast<std::size_t>(j)];
            }
            z[static_cast<std::size_t>(i)] = acc;
        }
        if (l + 1 < params.weights.size()) {
            for (auto& v : z) v = tanh(v);
        }
        a = z;
    }
    return a[0];
}

Eigen::VectorXd flatten(const MlpParams& params) {
    Eigen::VectorXd flat(static_cast<Eigen::Index>(params.parameter_count()));
    Eigen::Index pos = 0;
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        const auto& w = params.weights[l];
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            for (Eigen::Index j = 0; j < w.cols(); ++j) flat(pos++) = w(i, j);
        }
        const auto& b = params.biases[l];
        for (Eigen::Index i = 0; i < b.size(); ++i) flat(pos++) = b(i);
    }
    return flat;
}

MlpParams unflatten(const Eigen::VectorXd& data,
                    const std::vector<std::size_t>& layer_sizes) {
    if (layer_sizes.size() < 2) {
        throw std::invalid_argument("unflatten: need at least two layer sizes");
    }
    MlpParams params;
    Eigen::Index pos = 0;
    for (std::size_t l = 1; l < layer_sizes.size(); ++l) {
        const auto rows = static_cast<Eigen::Index>(layer_sizes[l]);
        const auto cols = static_cast<Eigen::Index>(layer_sizes[l - 1]);
        if (pos + rows * cols + rows > data.size()) {
            throw std::invalid_argument("unflatten: vector too short");
        }
        Eigen::MatrixXd w(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = data(pos++);
        }
        Eigen::VectorXd b(rows);
        for (Eigen::Index i = 0; i < rows; ++i) b(i) = data(pos++);
        params.weights.push_back(std::move(w));
        params.biases.push_back(std::move(b));
    }
    if (pos != data.size()) {
        throw std::invalid_argument("unflatten: vector size does not match layer sizes");
    }
    return params;
}

void save_checkpoint(const std::string& path, const MlpParams& params) {
    check_consistent(params);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");

    os.write(kMagic, sizeof(kMagic));
    const auto sizes = params.layer_sizes();
    const auto count = static_cast<std::uint32_t>(sizes.size());
    os.write(reinterpret_cast<const char*>(&count), sizeof(count));
    for (std::size_t s : sizes) {
        const auto v = static_cast<std::uint32_t>(s);
        os.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        const auto& w = params.weights[l];
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            for (Eigen::Index j = 0; j < w.cols(); ++j) {
                const double v = w(i, j);
                os.write(reinterpret_cast<const char*>(&v), sizeof(v));
            }
        }
        const auto& b = params.biases[l];
        for (Eigen::Index i = 0; i < b.size(); ++i) {
            const double v = b(i);
            os.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
    }
    if (!os) throw std::runtime_error("failed writing checkpoint '" + path + "'");
}

MlpParams load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");

    char magic[sizeof(kMagic)];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("'" + path + "' is not a hyplab checkpoint");
    }
    std::uint32_t count = 0;
    is.read(reinterpret_cast<char*>(&count), sizeof(count));
    if (!is || count < 2 || count > 1024) {
        throw std::runtime_error("checkpoint '" + path + "': bad layer count");
    }
    std::vector<std::size_t> sizes(count);
    for (auto& s : sizes) {
        std::uint32_t v = 0;
        is.read(reinterpret_cast<char*>(&v), sizeof(v));
        if (!is || v == 0) throw std::runtime_error("checkpoint '" + path + "': bad layer size");
        s = v;
    }
    MlpParams params;
    for (std::size_t l = 1; l < sizes.size(); ++l) {
        const auto rows = static_cast<Eigen::Index>(sizes[l]);
        const auto cols = static_cast<Eigen::Index>(sizes[l - 1]);
        Eigen::MatrixXd w(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < cols; ++j) {
                double v = 0.0;
                is.read(reinterpret_cast<char*>(&v), sizeof(v));
                w(i, j) = v;
            }
        }
        Eigen::VectorXd b(rows);
        for (Eigen::Index i = 0; i < rows; ++i) {
            double v = 0.0;
            is.read(reinterpret_cast<char*>(&v), sizeof(v));
            b(i) = v;
        }
        if (!is) throw std::runtime_error("checkpoint '" + path + "': truncated data");
        params.weights.push_back(std::move(w));
        params.biases.push_back(std::move(b));
    }
    return params;
}

}  // namespace hyplab
