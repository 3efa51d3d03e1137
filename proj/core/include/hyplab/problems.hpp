#pragma once

#include <string>
#include <vector>

namespace hyplab {

/// Scalar flux H(u). Burgers is u^2/2; Buckley-Leverett is
/// u^2 / (u^2 + a (1-u)^2) with a dimensionless parameter a > 0.
struct FluxKind {
    enum class Tag { Burgers, BuckleyLeverett };

    Tag tag = Tag::Burgers;
    double a = 1.0;  // Buckley-Leverett parameter, unused for Burgers

    static FluxKind burgers() { return {Tag::Burgers, 0.0}; }
    static FluxKind buckley_leverett(double a);
};

/// Initial datum u(x, 0). Evaluation at the jump point x = 0 returns the
/// left state so that tests are deterministic.
struct InitialCondition {
    enum class Tag {
        Shock,           // 1 for x < 0, 0 for x > 0
        RarefactionFan,  // -1 for x < 0, 1 for x > 0
        Smooth,          // 0.5 + sin(x)
    };

    Tag tag = Tag::Shock;
};

struct ConservationLawProblem {
    std::string name;  // catalog name, empty for ad-hoc problems
    FluxKind flux;
    InitialCondition ic;
    double x_min = 0.0;
    double x_max = 0.0;
    double t_end = 0.0;
};

double flux_eval(const FluxKind& flux, double u);
double flux_deriv(const FluxKind& flux, double u);
/// Second derivative H''(u); needed when back-propagating through the
/// wave speed H'(u) inside the PDE residual.
double flux_deriv2(const FluxKind& flux, double u);

double ic_eval(const InitialCondition& ic, double x);

/// The four built-in cases: burgers-shock, burgers-rarefaction,
/// burgers-smooth, bl-shock.
const std::vector<std::string>& catalog_names();
ConservationLawProblem catalog(const std::string& name);

}  // namespace hyplab
