#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hyplab/dual.hpp"

namespace hyplab {

/// Recording of a scalar computation over DualValue operands. Reverse
/// accumulation yields d(output)/d(leaf) for every leaf, including paths
/// that run through the derivative channels (so losses built from u_x, u_t,
/// u_xx differentiate correctly with respect to network parameters).
///
/// Construction order is evaluation order, so a backward sweep from the last
/// node to the first visits nodes in reverse topological order exactly once.
class Tape {
public:
    using NodeId = std::int32_t;

    enum class Channel { Value, Dx, Dt, Dxx };

    NodeId leaf(const DualValue& v);
    NodeId constant(double c);

    NodeId add(NodeId a, NodeId b);
    NodeId sub(NodeId a, NodeId b);
    NodeId mul(NodeId a, NodeId b);
    NodeId div(NodeId a, NodeId b);
    NodeId neg(NodeId a);
    NodeId inv(NodeId a);
    NodeId tanh(NodeId a);
    NodeId sin(NodeId a);

    /// Node whose value is one derivative channel of `a` (and whose own
    /// derivative channels are zero).
    NodeId channel(NodeId a, Channel c);

    const DualValue& value(NodeId id) const { return nodes_[id].val; }

    /// Reverse pass seeding d(output)/d(output value) = 1.
    void backward(NodeId output);

    /// Adjoint of a node after backward(); the value component of a leaf's
    /// adjoint is the gradient with respect to that leaf.
    const DualValue& adjoint(NodeId id) const { return adjoints_[id]; }
    double grad(NodeId id) const { return adjoints_[id].value; }

    std::size_t size() const { return nodes_.size(); }
    void clear();

private:
    enum class Op : std::uint8_t {
        Leaf, Const, Add, Sub, Mul, Neg, Inv, Tanh, Sin,
        ChanValue, ChanDx, ChanDt, ChanDxx,
    };

    struct Node {
        Op op;
        NodeId a = -1;
        NodeId b = -1;
        DualValue val;
    };

    NodeId push(Op op, NodeId a, NodeId b, const DualValue& val);

    std::vector<Node> nodes_;
    std::vector<DualValue> adjoints_;
};

/// Gradient of a recorded scalar with respect to the given leaves, in order.
std::vector<double> grad_wrt_params(Tape& tape, Tape::NodeId loss,
                                    std::span<const Tape::NodeId> params);

}  // namespace hyplab
