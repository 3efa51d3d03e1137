#include "hyplab/tape.hpp"

#include <cmath>
#include <stdexcept>

namespace hyplab {

namespace {

// Adjoint rules for y = f(a) with f applied channelwise through
// apply_smooth; f1..f3 are the first three derivatives of f at a.value.
void smooth_backward(const DualValue& a, const DualValue& ybar, double f1,
                     double f2, double f3, DualValue& abar) {
    abar.value += ybar.value * f1 + ybar.d_dx * f2 * a.d_dx +
                  ybar.d_dt * f2 * a.d_dt +
                  ybar.d2_dx2 * (f2 * a.d2_dx2 + f3 * a.d_dx * a.d_dx);
    abar.d_dx += ybar.d_dx * f1 + 2.0 * ybar.d2_dx2 * f2 * a.d_dx;
    abar.d_dt += ybar.d_dt * f1;
    abar.d2_dx2 += ybar.d2_dx2 * f1;
}

// Adjoint contribution into `abar` of y = a * other.
void mul_backward(const DualValue& other, const DualValue& ybar, DualValue& abar) {
    abar.value += ybar.value * other.value + ybar.d_dx * other.d_dx +
                  ybar.d_dt * other.d_dt + ybar.d2_dx2 * other.d2_dx2;
    abar.d_dx += ybar.d_dx * other.value + 2.0 * ybar.d2_dx2 * other.d_dx;
    abar.d_dt += ybar.d_dt * other.value;
    abar.d2_dx2 += ybar.d2_dx2 * other.value;
}

}  // namespace

Tape::NodeId Tape::push(Op op, NodeId a, NodeId b, const DualValue& val) {
    nodes_.push_back({op, a, b, val});
    return static_cast<NodeId>(nodes_.size() - 1);
}

Tape::NodeId Tape::leaf(const DualValue& v) { return push(Op::Leaf, -1, -1, v); }

Tape::NodeId Tape::constant(double c) {
    return push(Op::Const, -1, -1, DualValue::constant(c));
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
    return push(Op::Add, a, b, nodes_[a].val + nodes_[b].val);
}

Tape::NodeId Tape::sub(NodeId a, NodeId b) {
    return push(Op::Sub, a, b, nodes_[a].val - nodes_[b].val);
}

Tape::NodeId Tape::mul(NodeId a, NodeId b) {
    return push(Op::Mul, a, b, nodes_[a].val * nodes_[b].val);
}

Tape::NodeId Tape::div(NodeId a, NodeId b) { return mul(a, inv(b)); }

Tape::NodeId Tape::neg(NodeId a) { return push(Op::Neg, a, -1, -nodes_[a].val); }

Tape::NodeId Tape::inv(NodeId a) {
    return push(Op::Inv, a, -1, hyplab::inv(nodes_[a].val));
}

Tape::NodeId Tape::tanh(NodeId a) {
    return push(Op::Tanh, a, -1, hyplab::tanh(nodes_[a].val));
}

Tape::NodeId Tape::sin(NodeId a) {
    return push(Op::Sin, a, -1, hyplab::sin(nodes_[a].val));
}

Tape::NodeId Tape::channel(NodeId a, Channel c) {
    const DualValue& v = nodes_[a].val;
    switch (c) {
        case Channel::Value: return push(Op::ChanValue, a, -1, DualValue::constant(v.value));
        case Channel::Dx:    return push(Op::ChanDx, a, -1, DualValue::constant(v.d_dx));
        case Channel::Dt:    return push(Op::ChanDt, a, -1, DualValue::constant(v.d_dt));
        case Channel::Dxx:   return push(Op::ChanDxx, a, -1, DualValue::constant(v.d2_dx2));
    }
    throw std::logic_error("unreachable channel tag");
}

void Tape::backward(NodeId output) {
    adjoints_.assign(nodes_.size(), DualValue{});
    adjoints_[output].value = 1.0;

    for (NodeId i = static_cast<NodeId>(nodes_.size()) - 1; i >= 0; --i) {
        const Node& node = nodes_[i];
        const DualValue ybar = adjoints_[i];
        switch (node.op) {
            case Op::Leaf:
            case Op::Const:
                break;
            case Op::Add:
                adjoints_[node.a] = adjoints_[node.a] + ybar;
                adjoints_[node.b] = adjoints_[node.b] + ybar;
                break;
            case Op::Sub:
                adjoints_[node.a] = adjoints_[node.a] + ybar;
                adjoints_[node.b] = adjoints_[node.b] - ybar;
                break;
            case Op::Mul:
                mul_backward(nodes_[node.b].val, ybar, adjoints_[node.a]);
                mul_backward(nodes_[node.a].val, ybar, adjoints_[node.b]);
                break;
            case Op::Neg:
                adjoints_[node.a] = adjoints_[node.a] - ybar;
                break;
            case Op::Inv: {
                const double w = 1.0 / nodes_[node.a].val.value;
                const double w2 = w * w;
                smooth_backward(nodes_[node.a].val, ybar, -w2, 2.0 * w2 * w,
                                -6.0 * w2 * w2, adjoints_[node.a]);
                break;
            }
            case Op::Tanh: {
                const double s = node.val.value;
                const double d1 = 1.0 - s * s;
                const double d2 = -2.0 * s * d1;
                const double d3 = -2.0 * d1 * d1 + 4.0 * s * s * d1;
                smooth_backward(nodes_[node.a].val, ybar, d1, d2, d3,
                                adjoints_[node.a]);
                break;
            }
            case Op::Sin: {
                const double s = std::sin(nodes_[node.a].val.value);
                const double c = std::cos(nodes_[node.a].val.value);
                smooth_backward(nodes_[node.a].val, ybar, c, -s, -c,
                                adjoints_[node.a]);
                break;
            }
            case Op::ChanValue: adjoints_[node.a].value += ybar.value; break;
            case Op::ChanDx:    adjoints_[node.a].d_dx += ybar.value; break;
            case Op::ChanDt:    adjoints_[node.a].d_dt += ybar.value; break;
            case Op::ChanDxx:   adjoints_[node.a].d2_dx2 += ybar.value; break;
        }
    }
}

void Tape::clear() {
    nodes_.clear();
    adjoints_.clear();
}

std::vector<double> grad_wrt_params(Tape& tape, Tape::NodeId loss,
                                    std::span<const Tape::NodeId> params) {
    tape.backward(loss);
    std::vector<double> grad(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) grad[i] = tape.grad(params[i]);
    return grad;
}

}  // namespace hyplab
