#pragma once

#include "fpf/errors.hpp"
#include "fpf/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

namespace fpf {

using NodeId = std::uint32_t;

enum class Op : std::uint8_t { Const, Input, Add, Sub, Mul, Div, Max, Min };

const char* op_name(Op op);

struct Node {
    Op op;
    NodeId lhs = 0;
    NodeId rhs = 0;
    std::uint32_t index = 0;  // input index, or constant table slot
};

struct Box {
    RVec lo, hi;

    static Box uniform(std::size_t n, const Rational& lo, const Rational& hi);
    std::size_t dim() const { return lo.size(); }
    void append(const Box& other);
    void append(std::size_t n, const Rational& lo, const Rational& hi);
    std::vector<double> lo_d() const { return to_doubles(lo); }
    std::vector<double> hi_d() const { return to_doubles(hi); }
    bool contains(std::span<const double> x, double slack = 0.0) const;
};

class Circuit {
public:
    Circuit(std::size_t input_arity, std::vector<Node> nodes, RVec constants,
            std::vector<NodeId> outputs);

    std::size_t input_arity() const { return input_arity_; }
    std::size_t output_arity() const { return outputs_.size(); }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<NodeId>& outputs() const { return outputs_; }
    const Rational& constant(const Node& n) const { return constants_[n.index]; }
    double constant_d(const Node& n) const { return constants_d_[n.index]; }
    std::size_t num_nodes() const { return nodes_.size(); }
    // nodes plus constant bit lengths
    std::size_t size() const;

private:
    std::size_t input_arity_;
    std::vector<Node> nodes_;
    RVec constants_;
    std::vector<double> constants_d_;
    std::vector<NodeId> outputs_;
};

std::vector<double> evaluate(const Circuit& c, std::span<const double> point);
RVec evaluate_exact(const Circuit& c, std::span<const Rational> point);

// Allocation-free evaluation; `work` is resized to the node count and keeps every node value.
void evaluate_into(const Circuit& c, std::span<const double> point, std::span<double> out,
                   std::vector<double>& work);

// evaluate_into with every Max/Min replaced by (a + b +- hypot(a - b, smoothing)) / 2.
void evaluate_smoothed(const Circuit& c, std::span<const double> point, std::span<double> out,
                       std::vector<double>& work, double smoothing);

// Value and Jacobian (rows = outputs) by forward-mode differentiation.
// Max/Min pick the branch the numeric comparison selects; ties go to the left operand.
// With smoothing > 0 the smoothed Max/Min of evaluate_smoothed is differentiated instead.
void evaluate_jacobian(const Circuit& c, std::span<const double> point, std::vector<double>& out,
                       std::vector<double>& jac, double smoothing = 0.0);

struct WellDefinedness {
    bool safe = true;
    std::optional<NodeId> node;
};

WellDefinedness check_well_defined(const Circuit& c, const Box& domain);

class CircuitBuilder {
public:
    explicit CircuitBuilder(std::size_t input_arity = 0);

    std::size_t input_arity() const { return arity_; }
    NodeId input(std::size_t i);
    NodeId add_input();
    std::vector<NodeId> inputs();

    NodeId constant(const Rational& v);
    NodeId add(NodeId a, NodeId b);
    NodeId sub(NodeId a, NodeId b);
    NodeId mul(NodeId a, NodeId b);
    NodeId div(NodeId a, NodeId b);
    NodeId max(NodeId a, NodeId b);
    NodeId min(NodeId a, NodeId b);

    NodeId neg(NodeId a);
    NodeId scale(const Rational& k, NodeId a);
    NodeId abs(NodeId a);
    NodeId clamp(NodeId a, const Rational& lo, const Rational& hi);
    NodeId clamp(NodeId a, NodeId lo, NodeId hi);
    NodeId clamp01(NodeId a);
    bool is_clamp01(NodeId a) const;
    NodeId sum(std::span<const NodeId> xs);
    NodeId max_of(std::span<const NodeId> xs);
    NodeId min_of(std::span<const NodeId> xs);
    NodeId dot(std::span<const NodeId> a, std::span<const NodeId> b);
    NodeId dot(std::span<const Rational> a, std::span<const NodeId> b);

    std::vector<NodeId> inline_circuit(const Circuit& guest, std::span<const NodeId> wiring);

    const Node& node(NodeId id) const { return nodes_[id]; }
    std::size_t num_nodes() const { return nodes_.size(); }
    Circuit build(std::vector<NodeId> outputs) const;

private:
    NodeId push(Op op, NodeId a, NodeId b);
    std::optional<Rational> const_value(NodeId id) const;

    std::size_t arity_;
    std::vector<Node> nodes_;
    RVec constants_;
    std::vector<NodeId> input_nodes_;
    std::map<Rational, NodeId> const_cache_;
    std::map<std::tuple<Op, NodeId, NodeId>, NodeId> op_cache_;
};

// Host nodes followed by the guest's, the guest's inputs replaced by `wiring`.
// Outputs are the host outputs followed by the guest outputs.
Circuit inline_circuit(const Circuit& host, const Circuit& guest, std::span<const NodeId> wiring);


}  // namespace fpf
