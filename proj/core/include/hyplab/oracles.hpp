#pragma once

#include "hyplab/problems.hpp"

namespace hyplab {

/// A discontinuity between two states moving at a given speed, to be tested
/// against Oleinik's chord condition.
struct ShockCandidate {
    double u_left = 0.0;
    double u_right = 0.0;
    double speed = 0.0;
};

/// Entropy solution of Burgers with the shock initial condition:
/// u = 1 left of x = t/2, 0 right of it (Rankine-Hugoniot speed 1/2).
double exact_burgers_shock(double x, double t);

/// Entropy solution of Burgers with the rarefaction-fan initial condition:
/// states -1 / 1 connected by the self-similar fan u = x/t.
double exact_burgers_rarefaction(double x, double t);

/// Pre-shock solution of Burgers with u(x,0) = 0.5 + sin(x), obtained by
/// solving u = 0.5 + sin(x - u t) along characteristics. Valid for t < 1;
/// throws HorizonExceededError at or past the first shock time.
double exact_burgers_smooth(double x, double t);

/// Post-shock state u* of the Buckley-Leverett Riemann problem (1 left,
/// 0 right): the Welge tangent state solving H'(u*) = H(u*)/u*.
double bl_post_shock_state(double a);

/// Shock speed of the same problem, H(u*)/u*.
double bl_shock_speed(double a);

/// Entropy solution of the Buckley-Leverett Riemann problem with left state
/// 1 and right state 0: rarefaction from 1 down to u*, then a shock to 0.
double exact_bl(double x, double t, double a);

/// Oleinik chord admissibility of a shock candidate for the given flux,
/// checked on a 1000-point grid of intermediate states.
bool entropy_admissible(const ShockCandidate& candidate, const FluxKind& flux);

/// Exact solution of a catalog problem, dispatched on flux and initial
/// condition. Throws HorizonExceededError for the smooth case at t >= 1 and
/// std::invalid_argument for combinations without a built-in solution.
double exact_eval(const ConservationLawProblem& problem, double x, double t);

/// True when exact_eval covers this problem at time t.
bool exact_available(const ConservationLawProblem& problem, double t);

}  // namespace hyplab
