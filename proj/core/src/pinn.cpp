#include "hyplab/pinn.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#if defined(__AVX512F__)
#include <immintrin.h>
#endif

#include "hyplab/errors.hpp"
#include "hyplab/rng.hpp"

namespace hyplab {

namespace {

constexpr std::size_t kBlockPoints = 128;   // points per work block
constexpr std::size_t kMaxGroups = 64;      // upper bound on reduction slots
constexpr std::uint64_t kCollocationStream = 0x9E3779B97F4A7C15ULL;

// g(i,j) += sum_k z(i,k) * a(j,k) for column-major operands with the given
// leading dimensions. This outer-product reduction (tiny m, n with a long k)
// is the one GEMM shape Eigen runs far below peak on, and it dominates the
// backward pass, so spell it out when AVX-512 is available.
void accumulate_outer_products(double* g, Eigen::Index ldg, const double* z,
                               Eigen::Index ldz, const double* a, Eigen::Index lda,
                               Eigen::Index m, Eigen::Index n, Eigen::Index k) {
#if defined(__AVX512F__)
    // 8-row strips of g, 4 columns at a time: each strip of z is loaded once
    // per column tile and feeds four independent accumulators.
    for (Eigen::Index i = 0; i < m; i += 8) {
        const auto rows = std::min<Eigen::Index>(8, m - i);
        const auto tail = static_cast<__mmask8>((1u << rows) - 1u);
        for (Eigen::Index j = 0; j < n; j += 4) {
            const auto cols = std::min<Eigen::Index>(4, n - j);
            __m512d acc[4] = {_mm512_setzero_pd(), _mm512_setzero_pd(),
                              _mm512_setzero_pd(), _mm512_setzero_pd()};
            const double* zp = z + i;
            const double* ap = a + j;
            if (cols == 4 && rows == 8) {
                for (Eigen::Index kk = 0; kk < k; ++kk) {
                    const __m512d zv = _mm512_loadu_pd(zp);
                    acc[0] = _mm512_fmadd_pd(zv, _mm512_set1_pd(ap[0]), acc[0]);
                    acc[1] = _mm512_fmadd_pd(zv, _mm512_set1_pd(ap[1]), acc[1]);
                    acc[2] = _mm512_fmadd_pd(zv, _mm512_set1_pd(ap[2]), acc[2]);
                    acc[3] = _mm512_fmadd_pd(zv, _mm512_set1_pd(ap[3]), acc[3]);
                    zp += ldz;
                    ap += lda;
                }
            } else {
                for (Eigen::Index kk = 0; kk < k; ++kk) {
                    const __m512d zv = _mm512_maskz_loadu_pd(tail, zp);
                    for (Eigen::Index jj = 0; jj < cols; ++jj) {
                        acc[jj] = _mm512_fmadd_pd(zv, _mm512_set1_pd(ap[jj]), acc[jj]);
                    }
                    zp += ldz;
                    ap += lda;
                }
            }
            for (Eigen::Index jj = 0; jj < cols; ++jj) {
                double* gp = g + (j + jj) * ldg + i;
                _mm512_mask_storeu_pd(
                    gp, tail,
                    _mm512_add_pd(_mm512_maskz_loadu_pd(tail, gp), acc[jj]));
            }
        }
    }
#else
    using Stride = Eigen::OuterStride<>;
    Eigen::Map<Eigen::MatrixXd, 0, Stride> gm(g, m, n, Stride(ldg));
    Eigen::Map<const Eigen::MatrixXd, 0, Stride> zm(z, m, k, Stride(ldz));
    Eigen::Map<const Eigen::MatrixXd, 0, Stride> am(a, n, k, Stride(lda));
    gm.noalias() += zm * am.transpose();
#endif
}

}  // namespace

CollocationSet sample_collocation(const ConservationLawProblem& problem,
                                  std::size_t n_f, std::size_t n_u,
                                  std::uint64_t seed) {
    if (n_f < 1 || n_u < 1) {
        throw std::invalid_argument("sample_collocation: counts must be >= 1");
    }
    CollocationSet set;
    set.interior.resize(n_f);
    UniformRng rng(seed);
    for (auto& p : set.interior) {
        p.x = rng.next(problem.x_min, problem.x_max);
        p.t = rng.next(0.0, problem.t_end);
    }
    set.initial.resize(n_u);
    const double span = problem.x_max - problem.x_min;
    for (std::size_t i = 0; i < n_u; ++i) {
        const double x =
            n_u == 1 ? problem.x_min
                     : problem.x_min + span * static_cast<double>(i) /
                                           static_cast<double>(n_u - 1);
        set.initial[i] = {x, ic_eval(problem.ic, x)};
    }
    return set;
}

double residual_from_dual(const DualValue& u, const FluxKind& flux, double viscosity) {
    return u.d_dt + flux_deriv(flux, u.value) * u.d_dx - viscosity * u.d2_dx2;
}

double residual_f(const MlpParams& params, const FluxKind& flux, double viscosity,
                  double x, double t) {
    return residual_from_dual(dual_propagate(params, x, t), flux, viscosity);
}

double loss_f(const MlpParams& params, const FluxKind& flux, double viscosity,
              std::span<const SpaceTimePoint> interior) {
    if (interior.empty()) throw std::invalid_argument("loss_f: empty point set");
    double sum = 0.0;
    for (const auto& p : interior) {
        const double f = residual_f(params, flux, viscosity, p.x, p.t);
        sum += f * f;
    }
    return sum / static_cast<double>(interior.size());
}

double loss_u(const MlpParams& params, std::span<const InitialPoint> initial) {
    if (initial.empty()) throw std::invalid_argument("loss_u: empty point set");
    double sum = 0.0;
    for (const auto& p : initial) {
        const double e = mlp_forward(params, p.x, 0.0) - p.u;
        sum += e * e;
    }
    return sum / static_cast<double>(initial.size());
}

std::vector<double> predict(const MlpParams& params,
                            std::span<const SpaceTimePoint> points) {
    std::vector<double> values(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        values[i] = mlp_forward(params, points[i].x, points[i].t);
    }
    return values;
}

// ---------------------------------------------------------------------------
// Blocked loss/gradient evaluator.
//
// Each scalar in the network carries channels (v, p, q, r) = (value, d/dx,
// d/dt, d2/dx2). A layer buffer holds the channels side by side as column
// groups of the current block, so the linear part of every layer is a single
// GEMM over all channels. The backward pass mirrors the forward rules
// exactly; parameter gradients accumulate per group of blocks and groups
// combine through a fixed pairwise tree, which keeps results independent of
// the number of workers.
// ---------------------------------------------------------------------------

struct LossGradEvaluator::Impl {
    FluxKind flux;
    double viscosity = 0.0;
    CollocationSet points;
    unsigned workers = 0;
    int channels = 4;  // 3 when viscosity == 0 (no u_xx channel needed)

    struct Block {
        bool interior = true;
        std::size_t begin = 0;
        std::size_t end = 0;
    };
    std::vector<Block> blocks;
    std::size_t group_size = 1;
    std::size_t n_groups = 0;

    // Per-group reduction slots, reused across iterations.
    std::vector<Eigen::VectorXd> grad_slots;
    std::vector<double> loss_f_slots;
    std::vector<double> loss_u_slots;

    struct Workspace {
        std::vector<Eigen::MatrixXd> a;  // activations per layer, 0..L
        std::vector<Eigen::MatrixXd> z;  // pre-activations per layer, 1..L
        Eigen::MatrixXd bar_z;
        Eigen::MatrixXd bar_a;
        Eigen::MatrixXd d1;
        Eigen::MatrixXd d2;
        Eigen::RowVectorXd row_a;  // per-point scratch rows
        Eigen::RowVectorXd row_b;
        Eigen::RowVectorXd row_c;
        std::vector<std::size_t> sizes;

        void ensure(const std::vector<std::size_t>& layer_sizes, int channels) {
            if (sizes == layer_sizes && !a.empty()) return;
            sizes = layer_sizes;
            const auto cb = static_cast<Eigen::Index>(channels * kBlockPoints);
            const std::size_t layers = layer_sizes.size();
            a.resize(layers);
            z.resize(layers);
            std::size_t max_n = 0;
            for (std::size_t l = 0; l < layers; ++l) {
                a[l].resize(static_cast<Eigen::Index>(layer_sizes[l]), cb);
                if (l > 0) z[l].resize(static_cast<Eigen::Index>(layer_sizes[l]), cb);
                max_n = std::max(max_n, layer_sizes[l]);
            }
            bar_z.resize(static_cast<Eigen::Index>(max_n), cb);
            bar_a.resize(static_cast<Eigen::Index>(max_n), cb);
            d1.resize(static_cast<Eigen::Index>(max_n),
                      static_cast<Eigen::Index>(kBlockPoints));
            d2.resize(static_cast<Eigen::Index>(max_n),
                      static_cast<Eigen::Index>(kBlockPoints));
            row_a.resize(static_cast<Eigen::Index>(kBlockPoints));
            row_b.resize(static_cast<Eigen::Index>(kBlockPoints));
            row_c.resize(static_cast<Eigen::Index>(kBlockPoints));
        }
    };
    std::vector<Workspace> workspaces;

    // Flat offsets for each layer's weight matrix and bias vector.
    std::vector<std::size_t> layer_sizes;
    std::vector<std::size_t> w_offset;
    std::vector<std::size_t> b_offset;
    std::size_t n_params = 0;

    void build_blocks() {
        const std::size_t n_int = points.interior.size();
        for (std::size_t b = 0; b < n_int; b += kBlockPoints) {
            blocks.push_back({true, b, std::min(b + kBlockPoints, n_int)});
        }
        const std::size_t n_init = points.initial.size();
        for (std::size_t b = 0; b < n_init; b += kBlockPoints) {
            blocks.push_back({false, b, std::min(b + kBlockPoints, n_init)});
        }
        group_size = std::max<std::size_t>(1, (blocks.size() + kMaxGroups - 1) / kMaxGroups);
        n_groups = (blocks.size() + group_size - 1) / group_size;
    }

    void prepare_offsets(const MlpParams& params) {
        auto sizes = params.layer_sizes();
        if (sizes == layer_sizes) return;
        layer_sizes = sizes;
        w_offset.assign(sizes.size(), 0);
        b_offset.assign(sizes.size(), 0);
        std::size_t pos = 0;
        for (std::size_t l = 1; l < sizes.size(); ++l) {
            w_offset[l] = pos;
            pos += sizes[l] * sizes[l - 1];
            b_offset[l] = pos;
            pos += sizes[l];
        }
        n_params = pos;
    }

    // Process one block: forward, seed, optional backward into the group's
    // gradient slot. Returns (sum f^2, sum e^2) over the block.
    std::pair<double, double> run_block(const Block& block, const MlpParams& params,
                                        Workspace& ws, Eigen::VectorXd* grad_slot) {
        const auto bk = static_cast<Eigen::Index>(block.end - block.begin);
        const int c = channels;
        const auto cb = static_cast<Eigen::Index>(c) * bk;
        const std::size_t n_layers = layer_sizes.size();  // node counts, L+1 entries

        // Input channels: value, d/dx, d/dt (and d2/dx2 when present).
        auto& a0 = ws.a[0];
        for (Eigen::Index i = 0; i < bk; ++i) {
            const std::size_t idx = block.begin + static_cast<std::size_t>(i);
            const double x = block.interior ? points.interior[idx].x
                                            : points.initial[idx].x;
            const double t = block.interior ? points.interior[idx].t : 0.0;
            a0(0, i) = x;
            a0(1, i) = t;
            a0(0, bk + i) = 1.0;
            a0(1, bk + i) = 0.0;
            a0(0, 2 * bk + i) = 0.0;
            a0(1, 2 * bk + i) = 1.0;
            if (c == 4) {
                a0(0, 3 * bk + i) = 0.0;
                a0(1, 3 * bk + i) = 0.0;
            }
        }

        // Forward.
        for (std::size_t l = 1; l < n_layers; ++l) {
            const auto n = static_cast<Eigen::Index>(layer_sizes[l]);
            auto z = ws.z[l].topLeftCorner(n, cb);
            z.noalias() = params.weights[l - 1] * ws.a[l - 1].topLeftCorner(
                              static_cast<Eigen::Index>(layer_sizes[l - 1]), cb);
            z.leftCols(bk).colwise() += params.biases[l - 1];
            if (l + 1 < n_layers) {
                auto zv = ws.z[l].block(0, 0, n, bk).array();
                auto zp = ws.z[l].block(0, bk, n, bk).array();
                auto zq = ws.z[l].block(0, 2 * bk, n, bk).array();
                auto av = ws.a[l].block(0, 0, n, bk).array();
                auto ap = ws.a[l].block(0, bk, n, bk).array();
                auto aq = ws.a[l].block(0, 2 * bk, n, bk).array();
                auto d1 = ws.d1.topLeftCorner(n, bk).array();
                // tanh via exp: Eigen vectorizes exp for doubles but not
                // tanh. Clamped where tanh is already +-1 to double
                // precision; worst-case error is one ulp.
                auto e2x = ws.d2.topLeftCorner(n, bk).array();
                e2x = (2.0 * zv.min(19.0).max(-19.0)).exp();
                av = (e2x - 1.0) / (e2x + 1.0);
                d1 = 1.0 - av.square();
                ap = d1 * zp;
                aq = d1 * zq;
                if (c == 4) {
                    auto zr = ws.z[l].block(0, 3 * bk, n, bk).array();
                    auto ar = ws.a[l].block(0, 3 * bk, n, bk).array();
                    ar = d1 * zr - 2.0 * av * d1 * zp.square();
                }
            }
        }

        // Output channels of the linear last layer.
        const std::size_t last = n_layers - 1;
        auto uv = ws.z[last].row(0).segment(0, bk).array();
        auto up = ws.z[last].row(0).segment(bk, bk).array();
        auto uq = ws.z[last].row(0).segment(2 * bk, bk).array();

        double sum_f2 = 0.0;
        double sum_e2 = 0.0;
        auto bar = ws.bar_z.row(0);
        if (block.interior) {
            const double n_f_total = static_cast<double>(points.interior.size());
            auto hp = ws.row_a.segment(0, bk).array();
            auto hp2 = ws.row_b.segment(0, bk).array();
            if (flux.tag == FluxKind::Tag::Burgers) {
                hp = uv;
                hp2 = 1.0;
            } else {
                const double aa = flux.a;
                auto w1 = 1.0 - uv;
                auto den = uv.square() + aa * w1.square();
                hp = 2.0 * aa * uv * w1 / den.square();
                hp2 = 2.0 * aa *
                      ((1.0 - 2.0 * uv) * den - 2.0 * uv * w1 * (2.0 * uv - 2.0 * aa * w1)) /
                      (den * den * den);
            }
            auto f = ws.row_c.segment(0, bk).array();
            f = uq + hp * up;
            if (c == 4) {
                auto ur = ws.z[last].row(0).segment(3 * bk, bk).array();
                f -= viscosity * ur;
            }
            sum_f2 = (f * f).sum();
            if (grad_slot != nullptr) {
                const auto g = (2.0 / n_f_total) * f;
                bar.segment(0, bk).array() = g * hp2 * up;
                bar.segment(bk, bk).array() = g * hp;
                bar.segment(2 * bk, bk).array() = g;
                if (c == 4) {
                    bar.segment(3 * bk, bk).array() = -viscosity * g;
                }
            }
        } else {
            const double n_u_total = static_cast<double>(points.initial.size());
            auto e = ws.row_c.segment(0, bk).array();
            for (Eigen::Index i = 0; i < bk; ++i) {
                e(i) = uv(i) - points.initial[block.begin + static_cast<std::size_t>(i)].u;
            }
            sum_e2 = (e * e).sum();
            if (grad_slot != nullptr) {
                bar.segment(0, bk).array() = (2.0 / n_u_total) * e;
                bar.segment(bk, (c - 1) * bk).setZero();
            }
        }

        if (grad_slot == nullptr) return {sum_f2, sum_e2};

        // Backward.
        for (std::size_t l = last; l >= 1; --l) {
            const auto n = static_cast<Eigen::Index>(layer_sizes[l]);
            const auto n_prev = static_cast<Eigen::Index>(layer_sizes[l - 1]);
            auto zbar = ws.bar_z.topLeftCorner(n, cb);

            // Slots hold the weight gradients column-major; run() remaps
            // them to flatten() order at the end.
            accumulate_outer_products(grad_slot->data() + w_offset[l], n,
                                      ws.bar_z.data(), ws.bar_z.rows(),
                                      ws.a[l - 1].data(), ws.a[l - 1].rows(), n,
                                      n_prev, cb);
            Eigen::Map<Eigen::VectorXd> gb(grad_slot->data() + b_offset[l], n);
            gb.noalias() += ws.bar_z.block(0, 0, n, bk).rowwise().sum();

            if (l == 1) break;
            auto abar = ws.bar_a.topLeftCorner(n_prev, cb);
            abar.noalias() = params.weights[l - 1].transpose() * zbar;

            // Convert the activation adjoint into the pre-activation adjoint
            // of layer l-1, in place (channel v first; later channels only
            // read their own or higher slots).
            auto s = ws.a[l - 1].block(0, 0, n_prev, bk).array();
            auto zp = ws.z[l - 1].block(0, bk, n_prev, bk).array();
            auto zq = ws.z[l - 1].block(0, 2 * bk, n_prev, bk).array();
            auto d1 = ws.d1.topLeftCorner(n_prev, bk).array();
            auto d2 = ws.d2.topLeftCorner(n_prev, bk).array();
            d1 = 1.0 - s.square();
            d2 = -2.0 * s * d1;
            auto bv = ws.bar_a.block(0, 0, n_prev, bk).array();
            auto bp = ws.bar_a.block(0, bk, n_prev, bk).array();
            auto bq = ws.bar_a.block(0, 2 * bk, n_prev, bk).array();
            if (c == 4) {
                auto zr = ws.z[l - 1].block(0, 3 * bk, n_prev, bk).array();
                auto br = ws.bar_a.block(0, 3 * bk, n_prev, bk).array();
                // d3 = -2 d1^2 + 4 s^2 d1
                bv = bv * d1 + bp * d2 * zp + bq * d2 * zq +
                     br * (d2 * zr + (-2.0 * d1.square() + 4.0 * s.square() * d1) * zp.square());
                bp = bp * d1 + 2.0 * br * d2 * zp;
                bq = bq * d1;
                br = br * d1;
            } else {
                bv = bv * d1 + bp * d2 * zp + bq * d2 * zq;
                bp = bp * d1;
                bq = bq * d1;
            }
            std::swap(ws.bar_z, ws.bar_a);
        }
        return {sum_f2, sum_e2};
    }

    Losses run(const MlpParams& params, Eigen::VectorXd* grad) {
        prepare_offsets(params);
        if (grad != nullptr && static_cast<std::size_t>(grad->size()) != n_params) {
            grad->resize(static_cast<Eigen::Index>(n_params));
        }

        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const unsigned n_workers =
            std::min<unsigned>(workers == 0 ? hw : workers,
                               static_cast<unsigned>(std::max<std::size_t>(1, n_groups)));

        grad_slots.resize(n_groups);
        loss_f_slots.assign(n_groups, 0.0);
        loss_u_slots.assign(n_groups, 0.0);
        workspaces.resize(n_workers);

        std::atomic<std::size_t> next_group{0};
        auto worker = [&](unsigned wid) {
            Workspace& ws = workspaces[wid];
            ws.ensure(layer_sizes, channels);
            for (;;) {
                const std::size_t g = next_group.fetch_add(1);
                if (g >= n_groups) break;
                Eigen::VectorXd* slot = nullptr;
                if (grad != nullptr) {
                    if (grad_slots[g].size() != static_cast<Eigen::Index>(n_params)) {
                        grad_slots[g].resize(static_cast<Eigen::Index>(n_params));
                    }
                    grad_slots[g].setZero();
                    slot = &grad_slots[g];
                }
                const std::size_t lo = g * group_size;
                const std::size_t hi = std::min(lo + group_size, blocks.size());
                for (std::size_t k = lo; k < hi; ++k) {
                    const auto [f2, e2] = run_block(blocks[k], params, ws, slot);
                    loss_f_slots[g] += f2;
                    loss_u_slots[g] += e2;
                }
            }
        };

        if (n_workers == 1) {
            worker(0);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(n_workers);
            for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker, w);
            for (auto& th : pool) th.join();
        }

        // Fixed pairwise tree over groups.
        for (std::size_t stride = 1; stride < n_groups; stride *= 2) {
            for (std::size_t i = 0; i + stride < n_groups; i += 2 * stride) {
                loss_f_slots[i] += loss_f_slots[i + stride];
                loss_u_slots[i] += loss_u_slots[i + stride];
                if (grad != nullptr) grad_slots[i] += grad_slots[i + stride];
            }
        }
        if (grad != nullptr) {
            if (n_groups > 0) {
                // Remap the column-major weight blocks into flatten() order.
                for (std::size_t l = 1; l < layer_sizes.size(); ++l) {
                    const auto n = static_cast<Eigen::Index>(layer_sizes[l]);
                    const auto n_prev = static_cast<Eigen::Index>(layer_sizes[l - 1]);
                    Eigen::Map<const Eigen::MatrixXd> src(
                        grad_slots[0].data() + w_offset[l], n, n_prev);
                    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                             Eigen::RowMajor>>
                        dst(grad->data() + w_offset[l], n, n_prev);
                    dst = src;
                    Eigen::Map<Eigen::VectorXd>(grad->data() + b_offset[l], n) =
                        Eigen::Map<const Eigen::VectorXd>(
                            grad_slots[0].data() + b_offset[l], n);
                }
            } else {
                grad->setZero();
            }
        }

        Losses losses;
        if (n_groups > 0) {
            losses.f = loss_f_slots[0] / std::max<double>(1.0, static_cast<double>(points.interior.size()));
            losses.u = loss_u_slots[0] / std::max<double>(1.0, static_cast<double>(points.initial.size()));
        }
        return losses;
    }
};

LossGradEvaluator::LossGradEvaluator(FluxKind flux, double viscosity,
                                     CollocationSet points, unsigned workers)
    : impl_(std::make_unique<Impl>()) {
    if (viscosity < 0.0) {
        throw std::invalid_argument("LossGradEvaluator: viscosity must be >= 0");
    }
    impl_->flux = flux;
    impl_->viscosity = viscosity;
    impl_->points = std::move(points);
    impl_->workers = workers;
    impl_->channels = viscosity == 0.0 ? 3 : 4;
    impl_->build_blocks();
}

LossGradEvaluator::~LossGradEvaluator() = default;
LossGradEvaluator::LossGradEvaluator(LossGradEvaluator&&) noexcept = default;
LossGradEvaluator& LossGradEvaluator::operator=(LossGradEvaluator&&) noexcept = default;

LossGradEvaluator::Losses LossGradEvaluator::loss_and_grad(const MlpParams& params,
                                                           Eigen::VectorXd& grad) {
    return impl_->run(params, &grad);
}

LossGradEvaluator::Losses LossGradEvaluator::loss_only(const MlpParams& params) {
    return impl_->run(params, nullptr);
}

const CollocationSet& LossGradEvaluator::points() const { return impl_->points; }

// ---------------------------------------------------------------------------
// Training loop.
// ---------------------------------------------------------------------------

namespace {

void validate(const TrainingConfig& config) {
    if (config.n_f < 1 || config.n_u < 1) {
        throw std::invalid_argument("train: n_f and n_u must be >= 1");
    }
    if (config.width < 1) throw std::invalid_argument("train: width must be >= 1");
    if (config.viscosity < 0.0) throw std::invalid_argument("train: viscosity must be >= 0");
    if (!(config.learning_rate > 0.0)) {
        throw std::invalid_argument("train: learning_rate must be positive");
    }
    if (config.iterations < 0) throw std::invalid_argument("train: iterations must be >= 0");
}

}  // namespace

TrainResult train(const TrainingConfig& config) {
    validate(config);

    MlpParams params = init_params(config.width, config.seed);
    // Distinct stream for point sampling so positions never correlate with
    // the weight draws.
    CollocationSet colloc = sample_collocation(config.problem, config.n_f,
                                               config.n_u,
                                               config.seed ^ kCollocationStream);
    LossGradEvaluator evaluator(config.problem.flux, config.viscosity,
                                std::move(colloc));

    const auto sizes = params.layer_sizes();
    Eigen::VectorXd theta = flatten(params);
    Eigen::VectorXd grad(theta.size());
    Eigen::VectorXd m = Eigen::VectorXd::Zero(theta.size());
    Eigen::VectorXd v = Eigen::VectorXd::Zero(theta.size());

    constexpr double kBeta1 = 0.9;
    constexpr double kBeta2 = 0.999;
    constexpr double kEps = 1e-8;
    double beta1_pow = 1.0;
    double beta2_pow = 1.0;

    TrainResult result;
    result.loss_history.reserve(static_cast<std::size_t>(config.iterations));

    long it = 0;
    for (; it < config.iterations; ++it) {
        params = unflatten(theta, sizes);
        const auto losses = evaluator.loss_and_grad(params, grad);
        const double total = losses.total();
        if (!std::isfinite(total)) {
            throw TrainingDivergedError(
                it, "training diverged at iteration " + std::to_string(it) +
                        " (non-finite loss)");
        }
        result.loss_history.push_back(total);
        if (config.loss_target > 0.0 && total <= config.loss_target) {
            ++it;
            break;
        }

        beta1_pow *= kBeta1;
        beta2_pow *= kBeta2;
        m = kBeta1 * m + (1.0 - kBeta1) * grad;
        v = kBeta2 * v.array().matrix() + (1.0 - kBeta2) * grad.array().square().matrix();
        const double c1 = 1.0 - beta1_pow;
        const double c2 = 1.0 - beta2_pow;
        theta.array() -= config.learning_rate * (m.array() / c1) /
                         ((v.array() / c2).sqrt() + kEps);
    }

    result.iterations_run = it;
    result.params = unflatten(theta, sizes);
    const auto final_losses = evaluator.loss_only(result.params);
    result.final_loss_f = final_losses.f;
    result.final_loss_u = final_losses.u;
    return result;
}

// ---------------------------------------------------------------------------
// Tape route for cross-checks.
// ---------------------------------------------------------------------------

namespace {

Tape::NodeId tape_wave_speed(Tape& tape, Tape::NodeId u_value, const FluxKind& flux) {
    if (flux.tag == FluxKind::Tag::Burgers) return u_value;
    // H'(u) = 2 a u (1-u) / (u^2 + a (1-u)^2)^2 from elementary tape ops.
    const auto one = tape.constant(1.0);
    const auto w = tape.sub(one, u_value);
    const auto u2 = tape.mul(u_value, u_value);
    const auto w2 = tape.mul(w, w);
    const auto den = tape.add(u2, tape.mul(tape.constant(flux.a), w2));
    const auto den2 = tape.mul(den, den);
    const auto num = tape.mul(tape.constant(2.0 * flux.a), tape.mul(u_value, w));
    return tape.div(num, den2);
}

Tape::NodeId tape_mlp(Tape& tape, const std::vector<std::vector<Tape::NodeId>>& w_nodes,
                      const std::vector<std::vector<Tape::NodeId>>& b_nodes,
                      const MlpParams& params, double x, double t) {
    std::vector<Tape::NodeId> a = {tape.leaf(DualValue::input_x(x)),
                                   tape.leaf(DualValue::input_t(t))};
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        const auto rows = static_cast<std::size_t>(params.weights[l].rows());
        const auto cols = static_cast<std::size_t>(params.weights[l].cols());
        std::vector<Tape::NodeId> z(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            Tape::NodeId acc = b_nodes[l][i];
            for (std::size_t j = 0; j < cols; ++j) {
                acc = tape.add(acc, tape.mul(w_nodes[l][i * cols + j], a[j]));
            }
            z[i] = l + 1 < params.weights.size() ? tape.tanh(acc) : acc;
        }
        a = std::move(z);
    }
    return a[0];
}

}  // namespace

TapeLoss record_loss_on_tape(Tape& tape, const MlpParams& params,
                             const FluxKind& flux, double viscosity,
                             const CollocationSet& points) {
    TapeLoss out{-1, {}};

    // Parameter leaves in flatten() order.
    std::vector<std::vector<Tape::NodeId>> w_nodes(params.weights.size());
    std::vector<std::vector<Tape::NodeId>> b_nodes(params.weights.size());
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        const auto& w = params.weights[l];
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            for (Eigen::Index j = 0; j < w.cols(); ++j) {
                const auto id = tape.leaf(DualValue::constant(w(i, j)));
                w_nodes[l].push_back(id);
                out.params.push_back(id);
            }
        }
        const auto& b = params.biases[l];
        for (Eigen::Index i = 0; i < b.size(); ++i) {
            const auto id = tape.leaf(DualValue::constant(b(i)));
            b_nodes[l].push_back(id);
            out.params.push_back(id);
        }
    }

    Tape::NodeId sum_f = tape.constant(0.0);
    for (const auto& p : points.interior) {
        const auto u = tape_mlp(tape, w_nodes, b_nodes, params, p.x, p.t);
        const auto hp = tape_wave_speed(tape, tape.channel(u, Tape::Channel::Value), flux);
        auto f = tape.add(tape.channel(u, Tape::Channel::Dt),
                          tape.mul(hp, tape.channel(u, Tape::Channel::Dx)));
        if (viscosity != 0.0) {
            f = tape.sub(f, tape.mul(tape.constant(viscosity),
                                     tape.channel(u, Tape::Channel::Dxx)));
        }
        sum_f = tape.add(sum_f, tape.mul(f, f));
    }
    Tape::NodeId loss =
        tape.mul(sum_f, tape.constant(1.0 / static_cast<double>(points.interior.size())));

    Tape::NodeId sum_u = tape.constant(0.0);
    for (const auto& p : points.initial) {
        const auto u = tape_mlp(tape, w_nodes, b_nodes, params, p.x, 0.0);
        const auto e = tape.sub(tape.channel(u, Tape::Channel::Value),
                                tape.constant(p.u));
        sum_u = tape.add(sum_u, tape.mul(e, e));
    }
    loss = tape.add(loss, tape.mul(sum_u, tape.constant(
                                              1.0 / static_cast<double>(points.initial.size()))));
    out.loss = loss;
    return out;
}

}  // namespace hyplab
