#include "fpf/circuit.hpp"

#include <algorithm>
#include <cmath>

namespace fpf {

namespace {
constexpr double kMachineZero = 1e-300;

bool binary(Op op) { return op != Op::Const && op != Op::Input; }
}  // namespace

const char* op_name(Op op) {
    switch (op) {
        case Op::Const: return "CONST";
        case Op::Input: return "INPUT";
        case Op::Add: return "ADD";
        case Op::Sub: return "SUB";
        case Op::Mul: return "MUL";
        case Op::Div: return "DIV";
        case Op::Max: return "MAX";
        case Op::Min: return "MIN";
    }
    return "?";
}

Box Box::uniform(std::size_t n, const Rational& lo, const Rational& hi) {
    Box b;
    b.append(n, lo, hi);
    return b;
}

void Box::append(const Box& other) {
    lo.insert(lo.end(), other.lo.begin(), other.lo.end());
    hi.insert(hi.end(), other.hi.begin(), other.hi.end());
}

void Box::append(std::size_t n, const Rational& l, const Rational& h) {
    if (l > h) throw Error("box interval with lo > hi");
    lo.insert(lo.end(), n, l);
    hi.insert(hi.end(), n, h);
}

bool Box::contains(std::span<const double> x, double slack) const {
    if (x.size() != dim()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < to_double(lo[i]) - slack || x[i] > to_double(hi[i]) + slack) return false;
    return true;
}

Circuit::Circuit(std::size_t input_arity, std::vector<Node> nodes, RVec constants,
                 std::vector<NodeId> outputs)
    : input_arity_(input_arity), nodes_(std::move(nodes)), constants_(std::move(constants)),
      outputs_(std::move(outputs)) {
    if (outputs_.empty()) throw InvalidWiring("circuit has no outputs");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        if (n.op == Op::Input && n.index >= input_arity_)
            throw InvalidWiring("input index out of range at node #" + std::to_string(i));
        if (n.op == Op::Const && n.index >= constants_.size())
            throw InvalidWiring("constant slot out of range at node #" + std::to_string(i));
        if (binary(n.op) && (n.lhs >= i || n.rhs >= i))
            throw InvalidWiring("operand not topologically earlier at node #" + std::to_string(i));
    }
    for (NodeId o : outputs_)
        if (o >= nodes_.size()) throw InvalidWiring("output refers to missing node");
    constants_d_ = to_doubles(constants_);
}

std::size_t Circuit::size() const {
    std::size_t s = nodes_.size();
    for (const Node& n : nodes_)
        if (n.op == Op::Const) s += bit_length(constants_[n.index]);
    return s;
}

void evaluate_into(const Circuit& c, std::span<const double> point, std::span<double> out,
                   std::vector<double>& v) {
    if (point.size() != c.input_arity()) throw InvalidWiring("point length != input arity");
    const auto& nodes = c.nodes();
    v.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        switch (n.op) {
            case Op::Const: v[i] = c.constant_d(n); break;
            case Op::Input: v[i] = point[n.index]; break;
            case Op::Add: v[i] = v[n.lhs] + v[n.rhs]; break;
            case Op::Sub: v[i] = v[n.lhs] - v[n.rhs]; break;
            case Op::Mul: v[i] = v[n.lhs] * v[n.rhs]; break;
            case Op::Div:
                if (std::fabs(v[n.rhs]) < kMachineZero) throw DivisionByZero(i);
                v[i] = v[n.lhs] / v[n.rhs];
                break;
            case Op::Max: v[i] = v[n.lhs] >= v[n.rhs] ? v[n.lhs] : v[n.rhs]; break;
            case Op::Min: v[i] = v[n.lhs] <= v[n.rhs] ? v[n.lhs] : v[n.rhs]; break;
        }
    }
    const auto& outs = c.outputs();
    for (std::size_t j = 0; j < outs.size(); ++j) out[j] = v[outs[j]];
}

std::vector<double> evaluate(const Circuit& c, std::span<const double> point) {
    std::vector<double> work, out(c.output_arity());
    evaluate_into(c, point, out, work);
    return out;
}

RVec evaluate_exact(const Circuit& c, std::span<const Rational> point) {
    if (point.size() != c.input_arity()) throw InvalidWiring("point length != input arity");
    const auto& nodes = c.nodes();
    RVec v(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        switch (n.op) {
            case Op::Const: v[i] = c.constant(n); break;
            case Op::Input: v[i] = point[n.index]; break;
            case Op::Add: v[i] = v[n.lhs] + v[n.rhs]; break;
            case Op::Sub: v[i] = v[n.lhs] - v[n.rhs]; break;
            case Op::Mul: v[i] = v[n.lhs] * v[n.rhs]; break;
            case Op::Div:
                if (v[n.rhs] == 0) throw DivisionByZero(i);
                v[i] = v[n.lhs] / v[n.rhs];
                break;
            case Op::Max: v[i] = v[n.lhs] >= v[n.rhs] ? v[n.lhs] : v[n.rhs]; break;
            case Op::Min: v[i] = v[n.lhs] <= v[n.rhs] ? v[n.lhs] : v[n.rhs]; break;
        }
    }
    RVec out;
    for (NodeId o : c.outputs()) out.push_back(v[o]);
    return out;
}

void evaluate_smoothed(const Circuit& c, std::span<const double> point, std::span<double> out,
                       std::vector<double>& v, double smoothing) {
    evaluate_into(c, point, out, v);
    if (smoothing <= 0.0) return;
    const auto& nodes = c.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        switch (n.op) {
            case Op::Const:
            case Op::Input: break;
            case Op::Add: v[i] = v[n.lhs] + v[n.rhs]; break;
            case Op::Sub: v[i] = v[n.lhs] - v[n.rhs]; break;
            case Op::Mul: v[i] = v[n.lhs] * v[n.rhs]; break;
            case Op::Div: v[i] = v[n.lhs] / v[n.rhs]; break;
            case Op::Max: v[i] = 0.5 * (v[n.lhs] + v[n.rhs] + std::hypot(v[n.lhs] - v[n.rhs], smoothing)); break;
            case Op::Min: v[i] = 0.5 * (v[n.lhs] + v[n.rhs] - std::hypot(v[n.lhs] - v[n.rhs], smoothing)); break;
        }
    }
    const auto& outs = c.outputs();
    for (std::size_t j = 0; j < outs.size(); ++j) out[j] = v[outs[j]];
}

void evaluate_jacobian(const Circuit& c, std::span<const double> point, std::vector<double>& out,
                       std::vector<double>& jac, double smoothing) {
    std::vector<double> v;
    out.assign(c.output_arity(), 0.0);
    evaluate_smoothed(c, point, out, v, smoothing);
    const auto& nodes = c.nodes();
    // local partial of each Max/Min node w.r.t. its left operand
    std::vector<double> wl(nodes.size(), 0.0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        if (n.op != Op::Max && n.op != Op::Min) continue;
        const double a = v[n.lhs], b = v[n.rhs];
        if (smoothing > 0.0) {
            const double h = std::hypot(a - b, smoothing);
            wl[i] = 0.5 * (1.0 + (n.op == Op::Max ? 1.0 : -1.0) * (a - b) / h);
        } else if (n.op == Op::Max) {
            wl[i] = a >= b ? 1.0 : 0.0;
        } else {
            wl[i] = a <= b ? 1.0 : 0.0;
        }
    }
    const std::size_t n_in = c.input_arity();
    jac.assign(c.output_arity() * n_in, 0.0);
    std::vector<double> adj(nodes.size());
    for (std::size_t r = 0; r < c.output_arity(); ++r) {
        NodeId root = c.outputs()[r];
        std::fill(adj.begin(), adj.begin() + root + 1, 0.0);
        adj[root] = 1.0;
        for (std::size_t i = root + 1; i-- > 0;) {
            double a = adj[i];
            if (a == 0.0) continue;
            const Node& n = nodes[i];
            switch (n.op) {
                case Op::Const: break;
                case Op::Input: jac[r * n_in + n.index] += a; break;
                case Op::Add: adj[n.lhs] += a; adj[n.rhs] += a; break;
                case Op::Sub: adj[n.lhs] += a; adj[n.rhs] -= a; break;
                case Op::Mul:
                    adj[n.lhs] += a * v[n.rhs];
                    adj[n.rhs] += a * v[n.lhs];
                    break;
                case Op::Div:
                    adj[n.lhs] += a / v[n.rhs];
                    adj[n.rhs] -= a * v[i] / v[n.rhs];
                    break;
                case Op::Max:
                case Op::Min:
                    adj[n.lhs] += a * wl[i];
                    adj[n.rhs] += a * (1.0 - wl[i]);
                    break;
            }
        }
    }
}

CircuitBuilder::CircuitBuilder(std::size_t input_arity) : arity_(0) {
    for (std::size_t i = 0; i < input_arity; ++i) add_input();
}

NodeId CircuitBuilder::input(std::size_t i) {
    if (i >= arity_) throw InvalidWiring("input " + std::to_string(i) + " out of range");
    return input_nodes_[i];
}

NodeId CircuitBuilder::add_input() {
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{Op::Input, 0, 0, static_cast<std::uint32_t>(arity_)});
    input_nodes_.push_back(id);
    ++arity_;
    return id;
}

std::vector<NodeId> CircuitBuilder::inputs() { return input_nodes_; }

NodeId CircuitBuilder::constant(const Rational& v) {
    auto it = const_cache_.find(v);
    if (it != const_cache_.end()) return it->second;
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{Op::Const, 0, 0, static_cast<std::uint32_t>(constants_.size())});
    constants_.push_back(v);
    const_cache_.emplace(v, id);
    return id;
}

std::optional<Rational> CircuitBuilder::const_value(NodeId id) const {
    if (nodes_[id].op != Op::Const) return std::nullopt;
    return constants_[nodes_[id].index];
}

NodeId CircuitBuilder::push(Op op, NodeId a, NodeId b) {
    if (a >= nodes_.size() || b >= nodes_.size()) throw InvalidWiring("operand refers to missing node");
    auto ca = const_value(a), cb = const_value(b);
    if (ca && cb) {
        switch (op) {
            case Op::Add: return constant(*ca + *cb);
            case Op::Sub: return constant(*ca - *cb);
            case Op::Mul: return constant(*ca * *cb);
            case Op::Div:
                if (*cb != 0) return constant(*ca / *cb);
                break;
            case Op::Max: return constant(*ca >= *cb ? *ca : *cb);
            case Op::Min: return constant(*ca <= *cb ? *ca : *cb);
            default: break;
        }
    }
    if ((op == Op::Add || op == Op::Sub) && cb && *cb == 0) return a;
    if (op == Op::Add && ca && *ca == 0) return b;
    if ((op == Op::Mul || op == Op::Div) && cb && *cb == 1) return a;
    if (op == Op::Mul && ca && *ca == 1) return b;
    if (op == Op::Mul && ((ca && *ca == 0) || (cb && *cb == 0))) return constant(0);
    if ((op == Op::Add || op == Op::Mul || op == Op::Max || op == Op::Min) && a > b) std::swap(a, b);
    auto key = std::make_tuple(op, a, b);
    auto it = op_cache_.find(key);
    if (it != op_cache_.end()) return it->second;
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{op, a, b, 0});
    op_cache_.emplace(key, id);
    return id;
}

NodeId CircuitBuilder::add(NodeId a, NodeId b) { return push(Op::Add, a, b); }
NodeId CircuitBuilder::sub(NodeId a, NodeId b) { return push(Op::Sub, a, b); }
NodeId CircuitBuilder::mul(NodeId a, NodeId b) { return push(Op::Mul, a, b); }
NodeId CircuitBuilder::div(NodeId a, NodeId b) { return push(Op::Div, a, b); }
NodeId CircuitBuilder::max(NodeId a, NodeId b) { return push(Op::Max, a, b); }
NodeId CircuitBuilder::min(NodeId a, NodeId b) { return push(Op::Min, a, b); }

NodeId CircuitBuilder::neg(NodeId a) { return sub(constant(0), a); }

NodeId CircuitBuilder::scale(const Rational& k, NodeId a) {
    if (k == 0) return constant(0);
    if (k == -1) return neg(a);
    return mul(constant(k), a);
}

NodeId CircuitBuilder::abs(NodeId a) { return max(a, neg(a)); }

NodeId CircuitBuilder::clamp(NodeId a, const Rational& lo, const Rational& hi) {
    return min(constant(hi), max(constant(lo), a));
}

NodeId CircuitBuilder::clamp(NodeId a, NodeId lo, NodeId hi) { return min(hi, max(lo, a)); }

NodeId CircuitBuilder::clamp01(NodeId a) { return clamp(a, Rational(0), Rational(1)); }

bool CircuitBuilder::is_clamp01(NodeId a) const {
    const Node& outer = nodes_[a];
    if (outer.op != Op::Min) return false;
    auto one_side = [&](NodeId c, NodeId inner) {
        auto v = const_value(c);
        if (!v || *v != 1) return false;
        const Node& in = nodes_[inner];
        if (in.op != Op::Max) return false;
        auto z0 = const_value(in.lhs), z1 = const_value(in.rhs);
        return (z0 && *z0 == 0) || (z1 && *z1 == 0);
    };
    return one_side(outer.lhs, outer.rhs) || one_side(outer.rhs, outer.lhs);
}

NodeId CircuitBuilder::sum(std::span<const NodeId> xs) {
    if (xs.empty()) return constant(0);
    NodeId acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = add(acc, xs[i]);
    return acc;
}

NodeId CircuitBuilder::max_of(std::span<const NodeId> xs) {
    if (xs.empty()) throw InvalidWiring("max of empty list");
    NodeId acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = max(acc, xs[i]);
    return acc;
}

NodeId CircuitBuilder::min_of(std::span<const NodeId> xs) {
    if (xs.empty()) throw InvalidWiring("min of empty list");
    NodeId acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = min(acc, xs[i]);
    return acc;
}

NodeId CircuitBuilder::dot(std::span<const NodeId> a, std::span<const NodeId> b) {
    if (a.size() != b.size()) throw InvalidWiring("dot length mismatch");
    std::vector<NodeId> terms;
    for (std::size_t i = 0; i < a.size(); ++i) terms.push_back(mul(a[i], b[i]));
    return sum(terms);
}

NodeId CircuitBuilder::dot(std::span<const Rational> a, std::span<const NodeId> b) {
    if (a.size() != b.size()) throw InvalidWiring("dot length mismatch");
    std::vector<NodeId> terms;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0) terms.push_back(scale(a[i], b[i]));
    return sum(terms);
}

std::vector<NodeId> CircuitBuilder::inline_circuit(const Circuit& guest,
                                                   std::span<const NodeId> wiring) {
    if (wiring.size() != guest.input_arity())
        throw InvalidWiring("wiring length " + std::to_string(wiring.size()) +
                            " != guest arity " + std::to_string(guest.input_arity()));
    for (NodeId w : wiring)
        if (w >= nodes_.size()) throw InvalidWiring("wiring refers to missing node");
    const auto& gn = guest.nodes();
    std::vector<NodeId> map(gn.size());
    for (std::size_t i = 0; i < gn.size(); ++i) {
        const Node& n = gn[i];
        switch (n.op) {
            case Op::Const: map[i] = constant(guest.constant(n)); break;
            case Op::Input: map[i] = wiring[n.index]; break;
            default: map[i] = push(n.op, map[n.lhs], map[n.rhs]); break;
        }
    }
    std::vector<NodeId> outs;
    for (NodeId o : guest.outputs()) outs.push_back(map[o]);
    return outs;
}

Circuit CircuitBuilder::build(std::vector<NodeId> outputs) const {
    return Circuit(arity_, nodes_, constants_, std::move(outputs));
}

Circuit inline_circuit(const Circuit& host, const Circuit& guest, std::span<const NodeId> wiring) {
    CircuitBuilder b(host.input_arity());
    std::vector<NodeId> map(host.num_nodes());
    const auto& hn = host.nodes();
    for (std::size_t i = 0; i < hn.size(); ++i) {
        const Node& n = hn[i];
        switch (n.op) {
            case Op::Const: map[i] = b.constant(host.constant(n)); break;
            case Op::Input: map[i] = b.input(n.index); break;
            default:
                map[i] = n.op == Op::Add ? b.add(map[n.lhs], map[n.rhs])
                       : n.op == Op::Sub ? b.sub(map[n.lhs], map[n.rhs])
                       : n.op == Op::Mul ? b.mul(map[n.lhs], map[n.rhs])
                       : n.op == Op::Div ? b.div(map[n.lhs], map[n.rhs])
                       : n.op == Op::Max ? b.max(map[n.lhs], map[n.rhs])
                                         : b.min(map[n.lhs], map[n.rhs]);
        }
    }
    std::vector<NodeId> w;
    for (NodeId x : wiring) {
        if (x >= map.size()) throw InvalidWiring("wiring refers to missing host node");
        w.push_back(map[x]);
    }
    auto guest_outs = b.inline_circuit(guest, w);
    std::vector<NodeId> outs;
    for (NodeId o : host.outputs()) outs.push_back(map[o]);
    outs.insert(outs.end(), guest_outs.begin(), guest_outs.end());
    return b.build(std::move(outs));
}

}  // namespace fpf
