#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hyplab/problems.hpp"
#include "hyplab/rng.hpp"
#include "test_util.hpp"

using namespace hyplab;

TEST_CASE("flux_eval matches the closed forms") {
    const auto burgers = FluxKind::burgers();
    CHECK(flux_eval(burgers, 0.0) == 0.0);
    CHECK(flux_eval(burgers, 1.0) == 0.5);

    const auto bl = FluxKind::buckley_leverett(1.0);
    CHECK(flux_eval(bl, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(flux_eval(bl, 0.0) == 0.0);
    CHECK(flux_eval(bl, 1.0) == 1.0);
}

TEST_CASE("flux_deriv closed forms") {
    CHECK(flux_deriv(FluxKind::burgers(), 0.7) == 0.7);

    const auto bl = FluxKind::buckley_leverett(1.0);
    CHECK(flux_deriv(bl, 0.0) == 0.0);
    CHECK(flux_deriv(bl, 1.0) == 0.0);
}

TEST_CASE("flux_deriv matches central finite differences") {
    for (const auto& flux :
         {FluxKind::burgers(), FluxKind::buckley_leverett(1.0),
          FluxKind::buckley_leverett(0.5)}) {
        UniformRng rng(7);
        int checked = 0;
        while (checked < 100) {
            const double u = rng.next(-1.5, 1.5);
            const double exact = flux_deriv(flux, u);
            if (std::fabs(exact) < 1e-9) continue;  // relative error undefined
            const double fd = testing::central_diff(
                [&](double v) { return flux_eval(flux, v); }, u, 1e-6);
            CHECK(testing::rel_error(fd, exact) < 1e-6);
            ++checked;
        }
    }
}

TEST_CASE("flux_deriv2 matches central finite differences of flux_deriv") {
    for (const auto& flux : {FluxKind::burgers(), FluxKind::buckley_leverett(1.0),
                             FluxKind::buckley_leverett(2.0)}) {
        UniformRng rng(11);
        for (int i = 0; i < 100; ++i) {
            const double u = rng.next(-1.5, 1.5);
            const double fd = testing::central_diff(
                [&](double v) { return flux_deriv(flux, v); }, u, 1e-6);
            CHECK(std::fabs(fd - flux_deriv2(flux, u)) < 1e-6);
        }
    }
}

TEST_CASE("Buckley-Leverett flux is monotone on [0,1]") {
    const auto bl = FluxKind::buckley_leverett(1.0);
    double prev = flux_eval(bl, 0.0);
    for (int k = 1; k < 1000; ++k) {
        const double u = static_cast<double>(k) / 999.0;
        const double cur = flux_eval(bl, u);
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("Burgers flux is even") {
    UniformRng rng(3);
    for (int i = 0; i < 100; ++i) {
        const double u = rng.next(-3.0, 3.0);
        CHECK(flux_eval(FluxKind::burgers(), u) == flux_eval(FluxKind::burgers(), -u));
    }
}

TEST_CASE("initial conditions evaluate per case, left value at x = 0") {
    const InitialCondition shock{InitialCondition::Tag::Shock};
    CHECK(ic_eval(shock, -3.0) == 1.0);
    CHECK(ic_eval(shock, 2.0) == 0.0);
    CHECK(ic_eval(shock, 0.0) == 1.0);

    const InitialCondition fan{InitialCondition::Tag::RarefactionFan};
    CHECK(ic_eval(fan, 2.0) == 1.0);
    CHECK(ic_eval(fan, -1.0) == -1.0);
    CHECK(ic_eval(fan, 0.0) == -1.0);

    const InitialCondition smooth{InitialCondition::Tag::Smooth};
    CHECK(ic_eval(smooth, 0.0) == 0.5);
    UniformRng rng(5);
    for (int i = 0; i < 200; ++i) {
        const double u = ic_eval(smooth, rng.next(-10.0, 10.0));
        CHECK(u >= -0.5);
        CHECK(u <= 1.5);
    }
}

TEST_CASE("catalog exposes the four cases with their domains") {
    const auto names = catalog_names();
    REQUIRE(names.size() == 4);

    const auto shock = catalog("burgers-shock");
    CHECK(shock.x_min == -10.0);
    CHECK(shock.x_max == 10.0);
    CHECK(shock.t_end == 8.0);
    CHECK(shock.flux.tag == FluxKind::Tag::Burgers);

    const auto bl = catalog("bl-shock");
    CHECK(bl.x_min == -8.0);
    CHECK(bl.x_max == 8.0);
    CHECK(bl.flux.tag == FluxKind::Tag::BuckleyLeverett);
    CHECK(bl.flux.a == 1.0);

    CHECK_THROWS_WITH_AS(catalog("nope"),
                         doctest::Contains("burgers-rarefaction"),
                         std::invalid_argument);
}

TEST_CASE("Buckley-Leverett accepts any positive a, rejects the rest") {
    CHECK_NOTHROW(FluxKind::buckley_leverett(1.0));
    CHECK_NOTHROW(FluxKind::buckley_leverett(2.5));
    CHECK_NOTHROW(FluxKind::buckley_leverett(0.1));
    CHECK_THROWS_AS(FluxKind::buckley_leverett(0.0), std::invalid_argument);
    CHECK_THROWS_AS(FluxKind::buckley_leverett(-1.0), std::invalid_argument);
}
