#include "hyplab/problems.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hyplab {

FluxKind FluxKind::buckley_leverett(double a) {
    if (!(a > 0.0)) {
        throw std::invalid_argument("Buckley-Leverett parameter a must be positive");
    }
    return {Tag::BuckleyLeverett, a};
}

double flux_eval(const FluxKind& flux, double u) {
    switch (flux.tag) {
        case FluxKind::Tag::Burgers:
            return 0.5 * u * u;
        case FluxKind::Tag::BuckleyLeverett: {
            const double w = 1.0 - u;
            const double den = u * u + flux.a * w * w;
            return u * u / den;
        }
    }
    return 0.0;
}

double flux_deriv(const FluxKind& flux, double u) {
    switch (flux.tag) {
        case FluxKind::Tag::Burgers:
            return u;
        case FluxKind::Tag::BuckleyLeverett: {
            // H'(u) = 2 a u (1-u) / (u^2 + a (1-u)^2)^2
            const double w = 1.0 - u;
            const double den = u * u + flux.a * w * w;
            return 2.0 * flux.a * u * w / (den * den);
        }
    }
    return 0.0;
}

double flux_deriv2(const FluxKind& flux, double u) {
    switch (flux.tag) {
        case FluxKind::Tag::Burgers:
            return 1.0;
        case FluxKind::Tag::BuckleyLeverett: {
            // H''(u) = 2 a [ (1-2u) D - 2 u (1-u) D' ] / D^3,
            // with D = u^2 + a (1-u)^2 and D' = 2u - 2a(1-u).
            const double a = flux.a;
            const double w = 1.0 - u;
            const double den = u * u + a * w * w;
            const double dden = 2.0 * u - 2.0 * a * w;
            return 2.0 * a * ((1.0 - 2.0 * u) * den - 2.0 * u * w * dden) /
                   (den * den * den);
        }
    }
    return 0.0;
}

double ic_eval(const InitialCondition& ic, double x) {
    switch (ic.tag) {
        case InitialCondition::Tag::Shock:
            return x <= 0.0 ? 1.0 : 0.0;
        case InitialCondition::Tag::RarefactionFan:
            return x <= 0.0 ? -1.0 : 1.0;
        case InitialCondition::Tag::Smooth:
            return 0.5 + std::sin(x);
    }
    return 0.0;
}

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = {
        "burgers-shock",
        "burgers-rarefaction",
        "burgers-smooth",
        "bl-shock",
    };
    return names;
}

ConservationLawProblem catalog(const std::string& name) {
    if (name == "burgers-shock") {
        return {name, FluxKind::burgers(), {InitialCondition::Tag::Shock}, -10.0, 10.0, 8.0};
    }
    if (name == "burgers-rarefaction") {
        return {name, FluxKind::burgers(), {InitialCondition::Tag::RarefactionFan}, -10.0, 10.0, 8.0};
    }
    if (name == "burgers-smooth") {
        return {name, FluxKind::burgers(), {InitialCondition::Tag::Smooth}, -10.0, 10.0, 8.0};
    }
    if (name == "bl-shock") {
        return {name, FluxKind::buckley_leverett(1.0), {InitialCondition::Tag::Shock}, -8.0, 8.0, 8.0};
    }
    std::ostringstream msg;
    msg << "unknown problem '" << name << "'; available problems:";
    for (const auto& n : catalog_names()) msg << " " << n;
    throw std::invalid_argument(msg.str());
}

}  // namespace hyplab
