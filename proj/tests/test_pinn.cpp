#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "hyplab/errors.hpp"
#include "hyplab/pinn.hpp"
#include "hyplab/rng.hpp"
#include "test_util.hpp"

using namespace hyplab;

TEST_CASE("init_params: architecture, bound, reproducibility") {
    const MlpParams params = init_params(40, 123);
    const auto sizes = params.layer_sizes();
    REQUIRE(sizes.size() == 11);
    CHECK(sizes.front() == 2);
    CHECK(sizes.back() == 1);
    for (std::size_t l = 1; l + 1 < sizes.size(); ++l) CHECK(sizes[l] == 40);

    const double first_bound = std::sqrt(6.0 / 42.0);
    for (Eigen::Index i = 0; i < params.weights[0].rows(); ++i) {
        for (Eigen::Index j = 0; j < params.weights[0].cols(); ++j) {
            CHECK(std::fabs(params.weights[0](i, j)) <= first_bound);
        }
    }
    for (const auto& b : params.biases) CHECK(b.isZero(0.0));
    CHECK(params.all_finite());

    const MlpParams again = init_params(40, 123);
    CHECK(flatten(params) == flatten(again));
    const MlpParams other = init_params(40, 124);
    CHECK(flatten(params) != flatten(other));
}

TEST_CASE("sample_collocation: equispaced initial points, bounded interior") {
    const auto problem = catalog("burgers-shock");
    const CollocationSet set = sample_collocation(problem, 500, 100, 7);

    REQUIRE(set.initial.size() == 100);
    CHECK(set.initial.front().x == -10.0);
    CHECK(set.initial.back().x == 10.0);
    const double spacing = 20.0 / 99.0;
    for (std::size_t i = 1; i < set.initial.size(); ++i) {
        CHECK(set.initial[i].x - set.initial[i - 1].x ==
              doctest::Approx(spacing).epsilon(1e-12));
    }
    for (const auto& p : set.initial) {
        CHECK(p.u == (p.x < 0.0 ? 1.0 : 0.0));  // no sample falls on x = 0
    }
    REQUIRE(set.interior.size() == 500);
    for (const auto& p : set.interior) {
        CHECK(p.x >= -10.0);
        CHECK(p.x <= 10.0);
        CHECK(p.t >= 0.0);
        CHECK(p.t <= 8.0);
    }

    const CollocationSet same = sample_collocation(problem, 500, 100, 7);
    CHECK(same.interior.size() == set.interior.size());
    for (std::size_t i = 0; i < set.interior.size(); ++i) {
        CHECK(same.interior[i].x == set.interior[i].x);
        CHECK(same.interior[i].t == set.interior[i].t);
    }
}

TEST_CASE("residual: constants solve every conservation law") {
    MlpParams params = init_params(4, 0);
    for (auto& w : params.weights) w.setZero();
    params.biases.back()(0) = 0.75;
    for (const auto& flux : {FluxKind::burgers(), FluxKind::buckley_leverett(1.0)}) {
        for (double eps : {0.0, 0.01}) {
            CHECK(residual_f(params, flux, eps, 0.3, 1.2) == 0.0);
        }
    }
}

TEST_CASE("residual: x/(t+1) solves Burgers") {
    UniformRng rng(5);
    for (int i = 0; i < 50; ++i) {
        const double x = rng.next(-5.0, 5.0);
        const double t = rng.next(0.0, 4.0);
        const double den = t + 1.0;
        // Hand-built channels of u(x,t) = x/(t+1).
        const DualValue u{x / den, 1.0 / den, -x / (den * den), 0.0};
        CHECK(std::fabs(residual_from_dual(u, FluxKind::burgers(), 0.0)) < 1e-15);
    }
}

TEST_CASE("residual: viscous term is linear in epsilon") {
    const MlpParams params = testing::random_params(4, 9);
    const double x = 0.4, t = 1.1;
    const DualValue u = dual_propagate(params, x, t);
    const double base = residual_f(params, FluxKind::burgers(), 0.0, x, t);
    const double viscous = residual_f(params, FluxKind::burgers(), 0.01, x, t);
    CHECK(viscous - base == doctest::Approx(-0.01 * u.d2_dx2).epsilon(1e-13));
}

TEST_CASE("loss_u closed forms on the catalog initial sets") {
    const auto rarefaction = catalog("burgers-rarefaction");
    const auto shock = catalog("burgers-shock");

    MlpParams zero_net = init_params(4, 0);
    for (auto& w : zero_net.weights) w.setZero();

    const auto raref_set = sample_collocation(rarefaction, 10, 100, 1);
    CHECK(loss_u(zero_net, raref_set.initial) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(loss_f(zero_net, rarefaction.flux, 0.01, raref_set.interior) == 0.0);

    MlpParams one_net = zero_net;
    one_net.biases.back()(0) = 1.0;
    const auto shock_set = sample_collocation(shock, 10, 100, 1);
    CHECK(loss_u(one_net, shock_set.initial) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("blocked evaluator losses equal the reference loops") {
    const auto problem = catalog("bl-shock");
    // 1300 interior points spans multiple blocks plus a partial one.
    const CollocationSet points = sample_collocation(problem, 1300, 73, 21);
    const MlpParams params = testing::random_params(6, 33);

    for (double eps : {0.0, 0.01}) {
        LossGradEvaluator eval(problem.flux, eps, points);
        const auto losses = eval.loss_only(params);
        const double want_f = loss_f(params, problem.flux, eps, points.interior);
        const double want_u = loss_u(params, points.initial);
        CHECK(losses.f == doctest::Approx(want_f).epsilon(1e-12));
        CHECK(losses.u == doctest::Approx(want_u).epsilon(1e-12));
    }
}

TEST_CASE("blocked evaluator gradient agrees with the tape and finite differences") {
    for (const auto& [name, eps] :
         {std::pair{"burgers-rarefaction", 0.0}, std::pair{"bl-shock", 0.01}}) {
        const auto problem = catalog(name);
        const CollocationSet points = sample_collocation(problem, 10, 5, 13);
        const MlpParams params = testing::random_params(4, 55);

        LossGradEvaluator eval(problem.flux, eps, points);
        Eigen::VectorXd grad;
        const auto losses = eval.loss_and_grad(params, grad);

        Tape tape;
        const auto rec = record_loss_on_tape(tape, params, problem.flux, eps, points);
        CHECK(losses.total() == doctest::Approx(tape.value(rec.loss).value).epsilon(1e-12));
        const auto tape_grad = grad_wrt_params(tape, rec.loss, rec.params);

        REQUIRE(static_cast<std::size_t>(grad.size()) == tape_grad.size());
        for (std::size_t i = 0; i < tape_grad.size(); ++i) {
            CHECK(std::fabs(grad(static_cast<Eigen::Index>(i)) - tape_grad[i]) <=
                  1e-9 * std::max(1.0, std::fabs(tape_grad[i])));
        }

        // Central differences through the forward-only loss path.
        const Eigen::VectorXd theta = flatten(params);
        const auto sizes = params.layer_sizes();
        const auto loss_at = [&](const Eigen::VectorXd& v) {
            const MlpParams p = unflatten(v, sizes);
            return loss_f(p, problem.flux, eps, points.interior) +
                   loss_u(p, points.initial);
        };
        UniformRng rng(71);
        for (int k = 0; k < 20; ++k) {
            const auto i = static_cast<Eigen::Index>(
                rng.next_unit() * static_cast<double>(theta.size()));
            const double fd = testing::richardson_diff(
                [&](double v) {
                    Eigen::VectorXd shifted = theta;
                    shifted(i) = v;
                    return loss_at(shifted);
                },
                theta(i), 1e-4);
            CHECK(testing::rel_error(grad(i), fd) < 1e-5);
        }
    }
}

TEST_CASE("evaluator results do not depend on the worker count") {
    const auto problem = catalog("burgers-shock");
    const CollocationSet points = sample_collocation(problem, 2100, 64, 3);
    const MlpParams params = testing::random_params(8, 77);

    Eigen::VectorXd g1, g2;
    LossGradEvaluator one(problem.flux, 0.01, points, 1);
    LossGradEvaluator four(problem.flux, 0.01, points, 4);
    const auto l1 = one.loss_and_grad(params, g1);
    const auto l4 = four.loss_and_grad(params, g2);
    CHECK(l1.f == l4.f);
    CHECK(l1.u == l4.u);
    CHECK(g1 == g2);
}

TEST_CASE("train: zero iterations returns the initial parameters") {
    TrainingConfig config;
    config.problem = catalog("burgers-rarefaction");
    config.n_f = 50;
    config.n_u = 10;
    config.width = 4;
    config.iterations = 0;
    const TrainResult result = train(config);
    CHECK(result.iterations_run == 0);
    CHECK(result.loss_history.empty());
    CHECK(flatten(result.params) == flatten(init_params(4, config.seed)));
}

TEST_CASE("train decreases the loss on every catalog problem") {
    for (const auto& name : catalog_names()) {
        TrainingConfig config;
        config.problem = catalog(name);
        config.n_f = 400;
        config.n_u = 50;
        config.width = 6;
        config.viscosity = name == std::string("burgers-rarefaction") ? 0.0 : 0.01;
        config.iterations = 120;
        config.seed = 1;
        const TrainResult result = train(config);
        REQUIRE(result.loss_history.size() == 120);
        CHECK(result.final_loss_f + result.final_loss_u < result.loss_history.front());
    }
}

TEST_CASE("training is deterministic") {
    TrainingConfig config;
    config.problem = catalog("burgers-shock");
    config.n_f = 300;
    config.n_u = 40;
    config.width = 5;
    config.viscosity = 0.01;
    config.iterations = 60;
    config.seed = 9;

    const TrainResult a = train(config);
    const TrainResult b = train(config);
    CHECK(a.loss_history == b.loss_history);
    CHECK(flatten(a.params) == flatten(b.params));
}

TEST_CASE("train throws on a non-finite loss") {
    TrainingConfig config;
    config.problem = catalog("burgers-shock");
    config.n_f = 50;
    config.n_u = 10;
    config.width = 4;
    config.iterations = 10;
    config.viscosity = std::nan("");
    CHECK_THROWS_AS(train(config), TrainingDivergedError);
}

TEST_CASE("predict is pure and honors a constant network") {
    MlpParams params = init_params(4, 0);
    for (auto& w : params.weights) w.setZero();
    params.biases.back()(0) = -0.25;
    const std::vector<SpaceTimePoint> pts = {{0.0, 0.0}, {1.0, 2.0}, {-3.0, 7.0}};
    const auto a = predict(params, pts);
    const auto b = predict(params, pts);
    CHECK(a == b);
    for (double v : a) CHECK(v == -0.25);
}

TEST_CASE("checkpoints round-trip bit-exactly") {
    const MlpParams params = testing::random_params(5, 2024);
    const auto path = std::filesystem::temp_directory_path() / "hyplab_ckpt_test.bin";
    save_checkpoint(path.string(), params);
    const MlpParams loaded = load_checkpoint(path.string());
    CHECK(flatten(loaded) == flatten(params));
    CHECK(loaded.layer_sizes() == params.layer_sizes());
    std::filesystem::remove(path);

    CHECK_THROWS(load_checkpoint("/nonexistent/path.bin"));
}

TEST_CASE("training configs are validated") {
    TrainingConfig config;
    config.problem = catalog("burgers-shock");

    auto bad = config;
    bad.n_f = 0;
    CHECK_THROWS_AS(train(bad), std::invalid_argument);
    bad = config;
    bad.width = 0;
    CHECK_THROWS_AS(train(bad), std::invalid_argument);
    bad = config;
    bad.viscosity = -0.01;
    CHECK_THROWS_AS(train(bad), std::invalid_argument);
    bad = config;
    bad.learning_rate = 0.0;
    CHECK_THROWS_AS(train(bad), std::invalid_argument);
    bad = config;
    bad.iterations = -1;
    CHECK_THROWS_AS(train(bad), std::invalid_argument);
}
