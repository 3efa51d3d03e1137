#pragma once

#include <cmath>

namespace hyplab {

/// Scalar carrying the derivative channels needed by the PDE residual:
/// first derivatives with respect to x and t and the second derivative with
/// respect to x. Arithmetic propagates all channels by the chain rule.
struct DualValue {
    double value = 0.0;
    double d_dx = 0.0;
    double d_dt = 0.0;
    double d2_dx2 = 0.0;

    static DualValue constant(double c) { return {c, 0.0, 0.0, 0.0}; }
    static DualValue input_x(double x) { return {x, 1.0, 0.0, 0.0}; }
    static DualValue input_t(double t) { return {t, 0.0, 1.0, 0.0}; }

    bool operator==(const DualValue&) const = default;
};

inline DualValue operator+(const DualValue& a, const DualValue& b) {
    return {a.value + b.value, a.d_dx + b.d_dx, a.d_dt + b.d_dt, a.d2_dx2 + b.d2_dx2};
}

inline DualValue operator-(const DualValue& a, const DualValue& b) {
    return {a.value - b.value, a.d_dx - b.d_dx, a.d_dt - b.d_dt, a.d2_dx2 - b.d2_dx2};
}

inline DualValue operator-(const DualValue& a) {
    return {-a.value, -a.d_dx, -a.d_dt, -a.d2_dx2};
}

inline DualValue operator*(const DualValue& a, const DualValue& b) {
    return {a.value * b.value,
            a.value * b.d_dx + a.d_dx * b.value,
            a.value * b.d_dt + a.d_dt * b.value,
            a.value * b.d2_dx2 + 2.0 * a.d_dx * b.d_dx + a.d2_dx2 * b.value};
}

inline DualValue operator*(double c, const DualValue& a) {
    return {c * a.value, c * a.d_dx, c * a.d_dt, c * a.d2_dx2};
}

inline DualValue operator*(const DualValue& a, double c) { return c * a; }

inline DualValue operator+(const DualValue& a, double c) {
    return {a.value + c, a.d_dx, a.d_dt, a.d2_dx2};
}

inline DualValue operator+(double c, const DualValue& a) { return a + c; }

inline DualValue operator-(const DualValue& a, double c) { return a + (-c); }

inline DualValue operator-(double c, const DualValue& a) { return (-a) + c; }

/// y = f(a) for smooth scalar f with derivatives f1 = f', f2 = f'' at a.value.
inline DualValue apply_smooth(const DualValue& a, double f0, double f1, double f2) {
    return {f0,
            f1 * a.d_dx,
            f1 * a.d_dt,
            f1 * a.d2_dx2 + f2 * a.d_dx * a.d_dx};
}

inline DualValue inv(const DualValue& a) {
    const double w = 1.0 / a.value;
    return apply_smooth(a, w, -w * w, 2.0 * w * w * w);
}

inline DualValue operator/(const DualValue& a, const DualValue& b) {
    return a * inv(b);
}

inline DualValue operator/(const DualValue& a, double c) { return a * (1.0 / c); }

inline DualValue operator/(double c, const DualValue& a) { return c * inv(a); }

inline DualValue tanh(const DualValue& a) {
    const double s = std::tanh(a.value);
    const double d1 = 1.0 - s * s;
    return apply_smooth(a, s, d1, -2.0 * s * d1);
}

inline DualValue sin(const DualValue& a) {
    const double s = std::sin(a.value);
    return apply_smooth(a, s, std::cos(a.value), -s);
}

inline DualValue cos(const DualValue& a) {
    const double c = std::cos(a.value);
    return apply_smooth(a, c, -std::sin(a.value), -c);
}

inline DualValue exp(const DualValue& a) {
    const double e = std::exp(a.value);
    return apply_smooth(a, e, e, e);
}

}  // namespace hyplab
