#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hyplab/errors.hpp"
#include "hyplab/oracles.hpp"
#include "hyplab/rng.hpp"

using namespace hyplab;

TEST_CASE("burgers shock oracle: jump travels at speed 1/2") {
    CHECK(exact_burgers_shock(0.4, 1.0) == 1.0);
    CHECK(exact_burgers_shock(0.6, 1.0) == 0.0);
    CHECK(exact_burgers_shock(0.5, 1.0) == 1.0);  // tie takes the left state
    UniformRng rng(1);
    for (int i = 0; i < 50; ++i) {
        const double x = rng.next(-10.0, 10.0);
        CHECK(exact_burgers_shock(x, 0.0) ==
              ic_eval({InitialCondition::Tag::Shock}, x));
    }
    CHECK_THROWS_AS(exact_burgers_shock(0.0, -0.1), std::invalid_argument);
}

TEST_CASE("burgers rarefaction oracle: fan between -t and t") {
    CHECK(exact_burgers_rarefaction(0.0, 2.0) == 0.0);
    CHECK(exact_burgers_rarefaction(0.5, 1.0) == 0.5);
    CHECK(exact_burgers_rarefaction(-3.0, 2.0) == -1.0);
    CHECK(exact_burgers_rarefaction(5.0, 2.0) == 1.0);
    CHECK(exact_burgers_rarefaction(-1.0, 0.0) == -1.0);
    CHECK(exact_burgers_rarefaction(1.0, 0.0) == 1.0);
}

TEST_CASE("rarefaction oracle is self-similar") {
    UniformRng rng(2);
    for (int i = 0; i < 100; ++i) {
        const double x = rng.next(-5.0, 5.0);
        const double t = rng.next(0.1, 4.0);
        const double lambda = rng.next(0.1, 3.0);
        CHECK(exact_burgers_rarefaction(lambda * x, lambda * t) ==
              doctest::Approx(exact_burgers_rarefaction(x, t)).epsilon(1e-12));
    }
}

TEST_CASE("burgers smooth oracle solves the characteristic equation") {
    UniformRng rng(3);
    for (int i = 0; i < 50; ++i) {
        const double x = rng.next(-10.0, 10.0);
        CHECK(exact_burgers_smooth(x, 0.0) ==
              doctest::Approx(0.5 + std::sin(x)).epsilon(1e-13));
    }
    // Characteristic from x0 = 0 carries u0(0) = 0.5 to x = 0.5 t.
    CHECK(exact_burgers_smooth(0.25, 0.5) == doctest::Approx(0.5).epsilon(1e-12));

    for (int i = 0; i < 200; ++i) {
        const double x = rng.next(-10.0, 10.0);
        const double t = rng.next(0.0, 0.999);
        const double u = exact_burgers_smooth(x, t);
        CHECK(std::fabs(u - 0.5 - std::sin(x - u * t)) <= 1e-12);
        CHECK(u >= -0.5 - 1e-12);
        CHECK(u <= 1.5 + 1e-12);
    }

    CHECK_THROWS_AS(exact_burgers_smooth(0.0, 1.0), HorizonExceededError);
    CHECK_THROWS_AS(exact_burgers_smooth(2.0, 1.5), HorizonExceededError);
}

TEST_CASE("Buckley-Leverett post-shock state matches the tangency closed form") {
    // u* = sqrt(a/(1+a)) solves 2a(1-u) = u^2 + a(1-u)^2 for this flux
    // family; the bisection result must agree.
    for (double a : {1.0, 0.5, 2.0, 0.9}) {
        const double closed = std::sqrt(a / (1.0 + a));
        CHECK(std::fabs(bl_post_shock_state(a) - closed) < 1e-12);
    }
    CHECK(bl_post_shock_state(1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
    CHECK(bl_shock_speed(1.0) == doctest::Approx(0.5 + 1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("Buckley-Leverett oracle structure") {
    CHECK(exact_bl(-1.0, 1.0, 1.0) == 1.0);
    CHECK(exact_bl(2.0, 1.0, 1.0) == 0.0);
    CHECK(exact_bl(-0.5, 0.0, 1.0) == 1.0);
    CHECK(exact_bl(0.5, 0.0, 1.0) == 0.0);

    const double sigma = bl_shock_speed(1.0);
    const double ustar = bl_post_shock_state(1.0);
    // Just left of the shock the fan bottoms out at u*.
    CHECK(exact_bl(sigma * 2.0 - 1e-9, 2.0, 1.0) ==
          doctest::Approx(ustar).epsilon(1e-6));
    CHECK(exact_bl(sigma * 2.0 + 1e-9, 2.0, 1.0) == 0.0);

    // On the fan the similarity variable reproduces the wave speed.
    const FluxKind bl = FluxKind::buckley_leverett(1.0);
    for (double xi : {0.2, 0.5, 0.9, 1.1}) {
        const double u = exact_bl(xi * 3.0, 3.0, 1.0);
        CHECK(flux_deriv(bl, u) == doctest::Approx(xi).epsilon(1e-10));
    }
}

TEST_CASE("Buckley-Leverett oracle is nonincreasing in x") {
    for (double t : {0.5, 2.0, 4.0}) {
        double prev = exact_bl(-8.0, t, 1.0);
        for (int k = 1; k <= 400; ++k) {
            const double x = -8.0 + 16.0 * static_cast<double>(k) / 400.0;
            const double cur = exact_bl(x, t, 1.0);
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("Oleinik chord condition") {
    const FluxKind burgers = FluxKind::burgers();
    CHECK(entropy_admissible({1.0, 0.0, 0.5}, burgers));
    CHECK_FALSE(entropy_admissible({-1.0, 1.0, 0.0}, burgers));

    const FluxKind bl = FluxKind::buckley_leverett(1.0);
    CHECK(entropy_admissible({bl_post_shock_state(1.0), 0.0, bl_shock_speed(1.0)}, bl));

    // Any upward jump is an expansion for a strictly convex flux, whatever
    // speed is proposed.
    UniformRng rng(4);
    for (int i = 0; i < 50; ++i) {
        const double ul = rng.next(-2.0, 1.0);
        const double ur = ul + rng.next(0.1, 2.0);
        const double s = rng.next(-2.0, 2.0);
        CHECK_FALSE(entropy_admissible({ul, ur, s}, burgers));
    }

    CHECK_THROWS_AS(entropy_admissible({0.3, 0.3, 1.0}, burgers), std::invalid_argument);
}

TEST_CASE("exact_eval dispatches on the catalog problems") {
    CHECK(exact_eval(catalog("burgers-shock"), 0.4, 1.0) == 1.0);
    CHECK(exact_eval(catalog("burgers-rarefaction"), 0.5, 1.0) == 0.5);
    CHECK(exact_eval(catalog("burgers-smooth"), 0.0, 0.0) == doctest::Approx(0.5));
    CHECK(exact_eval(catalog("bl-shock"), -1.0, 1.0) == 1.0);

    CHECK(exact_available(catalog("burgers-smooth"), 0.5));
    CHECK_FALSE(exact_available(catalog("burgers-smooth"), 1.0));
    CHECK(exact_available(catalog("bl-shock"), 7.0));

    ConservationLawProblem odd;
    odd.flux = FluxKind::buckley_leverett(1.0);
    odd.ic = {InitialCondition::Tag::Smooth};
    CHECK_FALSE(exact_available(odd, 1.0));
    CHECK_THROWS_AS(exact_eval(odd, 0.0, 1.0), std::invalid_argument);
}
