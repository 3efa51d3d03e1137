#include "hyplab/oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "hyplab/errors.hpp"

namespace hyplab {

namespace {

constexpr int kGridPoints = 1000;   // intermediate states for the chord test
constexpr double kChordTol = 1e-10;

// Root of fn on [lo, hi] given a sign change, to machine-level interval width.
template <typename F>
double bisect(F fn, double lo, double hi) {
    double flo = fn(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = fn(mid);
        if ((flo <= 0.0) == (fmid <= 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double exact_burgers_shock(double x, double t) {
    if (t < 0.0) throw std::invalid_argument("exact_burgers_shock: t must be >= 0");
    // Rankine-Hugoniot speed (H(1) - H(0)) / (1 - 0) = 1/2; ties take the
    // left state.
    return x <= 0.5 * t ? 1.0 : 0.0;
}

double exact_burgers_rarefaction(double x, double t) {
    if (t < 0.0) throw std::invalid_argument("exact_burgers_rarefaction: t must be >= 0");
    if (t == 0.0) return x <= 0.0 ? -1.0 : 1.0;
    if (x <= -t) return -1.0;
    if (x >= t) return 1.0;
    return x / t;
}

double exact_burgers_smooth(double x, double t) {
    if (t < 0.0) throw std::invalid_argument("exact_burgers_smooth: t must be >= 0");
    if (t >= 1.0) {
        throw HorizonExceededError(
            "exact_burgers_smooth: valid only for t < 1 (first shock time); "
            "use a fine-grid finite-volume reference beyond the horizon");
    }
    // Characteristics: u = 0.5 + sin(x - u t). g is strictly increasing in u
    // for t < 1, so the root is unique and bracketed by the data range.
    const auto g = [&](double u) { return u - 0.5 - std::sin(x - u * t); };
    const auto dg = [&](double u) { return 1.0 + t * std::cos(x - u * t); };

    double lo = -0.5 - 1e-9;
    double hi = 1.5 + 1e-9;
    double u = 0.5 + std::sin(x);  // exact at t = 0, close otherwise
    double r = g(u);
    for (int it = 0; it < 200 && std::fabs(r) > 1e-13; ++it) {
        if (r > 0.0) hi = u; else lo = u;
        const double step = r / dg(u);
        double next = u - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        u = next;
        r = g(u);
    }
    return u;
}

double bl_post_shock_state(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("bl_post_shock_state: a must be positive");
    // Welge tangency: u H'(u) - H(u) = 0, positive near 0, negative at 1.
    const FluxKind flux = FluxKind::buckley_leverett(a);
    const auto tangency = [&](double u) {
        return u * flux_deriv(flux, u) - flux_eval(flux, u);
    };
    return bisect(tangency, 1e-12, 1.0);
}

double bl_shock_speed(double a) {
    const double ustar = bl_post_shock_state(a);
    return flux_eval(FluxKind::buckley_leverett(a), ustar) / ustar;
}

double exact_bl(double x, double t, double a) {
    if (t < 0.0) throw std::invalid_argument("exact_bl: t must be >= 0");
    if (!(a > 0.0)) throw std::invalid_argument("exact_bl: a must be positive");
    if (t == 0.0) return x <= 0.0 ? 1.0 : 0.0;

    const FluxKind flux = FluxKind::buckley_leverett(a);
    const double ustar = bl_post_shock_state(a);
    const double sigma = flux_eval(flux, ustar) / ustar;
    const double xi = x / t;

    if (xi <= 0.0) return 1.0;       // left constant state, H'(1) = 0
    if (xi == sigma) return ustar;   // tie on the shock takes the left state
    if (xi > sigma) return 0.0;
    // Rarefaction branch: invert H' on [u*, 1], where it decreases from
    // sigma down to 0.
    const auto speed_gap = [&](double u) { return flux_deriv(flux, u) - xi; };
    return bisect(speed_gap, ustar, 1.0);
}

double exact_eval(const ConservationLawProblem& problem, double x, double t) {
    if (problem.flux.tag == FluxKind::Tag::Burgers) {
        switch (problem.ic.tag) {
            case InitialCondition::Tag::Shock: return exact_burgers_shock(x, t);
            case InitialCondition::Tag::RarefactionFan: return exact_burgers_rarefaction(x, t);
            case InitialCondition::Tag::Smooth: return exact_burgers_smooth(x, t);
        }
    }
    if (problem.flux.tag == FluxKind::Tag::BuckleyLeverett &&
        problem.ic.tag == InitialCondition::Tag::Shock) {
        return exact_bl(x, t, problem.flux.a);
    }
    throw std::invalid_argument("exact_eval: no built-in solution for this problem");
}

bool exact_available(const ConservationLawProblem& problem, double t) {
    if (t < 0.0) return false;
    if (problem.flux.tag == FluxKind::Tag::Burgers) {
        return problem.ic.tag != InitialCondition::Tag::Smooth || t < 1.0;
    }
    return problem.flux.tag == FluxKind::Tag::BuckleyLeverett &&
           problem.ic.tag == InitialCondition::Tag::Shock;
}

bool entropy_admissible(const ShockCandidate& candidate, const FluxKind& flux) {
    const double ul = candidate.u_left;
    const double ur = candidate.u_right;
    const double s = candidate.speed;
    if (ul == ur) {
        throw std::invalid_argument("entropy_admissible: states must differ");
    }
    // Chord condition: (H(v)-H(ul))/(v-ul) >= s >= (H(v)-H(ur))/(v-ur) for
    // every v strictly between the states. The chain is equivalent to the
    // geometric picture (flux graph below the chord for ul > ur, above it
    // otherwise) in both orderings.
    const double hl = flux_eval(flux, ul);
    const double hr = flux_eval(flux, ur);
    for (int k = 1; k <= kGridPoints; ++k) {
        const double v = ul + (ur - ul) * static_cast<double>(k) /
                                  static_cast<double>(kGridPoints + 1);
        const double hv = flux_eval(flux, v);
        const double left_slope = (hv - hl) / (v - ul);
        const double right_slope = (hv - hr) / (v - ur);
        if (left_slope < s - kChordTol) return false;
        if (right_slope > s + kChordTol) return false;
    }
    return true;
}

}  // namespace hyplab
