#include "fpf/pseudogate.hpp"

#include <cmath>
#include <limits>

namespace fpf {

namespace {
constexpr NodeId kUnbound = std::numeric_limits<NodeId>::max();
}

Pseudogate::Pseudogate(Circuit b, std::size_t in, std::size_t out, std::size_t l)
    : body(std::move(b)), n_in(in), n_out(out), aux(l) {
    if (body.input_arity() != n_in + aux || body.output_arity() != n_out + aux)
        throw InvalidWiring("pseudogate body signature does not match (n_in, n_out, aux)");
}

Pseudogate as_pseudogate(const Circuit& c) {
    return Pseudogate(c, c.input_arity(), c.output_arity(), 0);
}

Pseudogate pad_aux(const Pseudogate& g, std::size_t aux) {
    if (aux < g.aux) throw InvalidWiring("cannot pad to fewer aux wires");
    if (aux == g.aux) return g;
    GateBuilder b(g.n_in);
    std::vector<NodeId> wiring = b.inputs();
    for (std::size_t j = 0; j < g.aux; ++j) wiring.push_back(b.reserve_aux());
    auto outs = b.inline_circuit(g.body, wiring);
    for (std::size_t j = 0; j < g.aux; ++j) b.bind_aux(wiring[g.n_in + j], outs[g.n_out + j]);
    for (std::size_t j = g.aux; j < aux; ++j) {
        NodeId a = b.reserve_aux();
        b.bind_aux(a, a);
    }
    outs.resize(g.n_out);
    return b.finish_pseudogate(outs);
}

Pseudogate heaviside() {
    GateBuilder b(1);
    NodeId x = b.input(0);
    NodeId y = b.reserve_aux();
    b.bind_aux(y, b.add(x, y));
    return b.finish_pseudogate({y});
}

GateBuilder::GateBuilder(std::size_t primary_inputs)
    : CircuitBuilder(primary_inputs), primary_(primary_inputs) {}

NodeId GateBuilder::reserve_aux() {
    NodeId in = add_input();
    ledger_.push_back({in, kUnbound});
    return in;
}

void GateBuilder::bind_aux(NodeId aux_in, NodeId out) {
    for (AuxPair& p : ledger_) {
        if (p.in != aux_in) continue;
        if (p.out != kUnbound) throw InvalidWiring("aux slot bound twice");
        p.out = is_clamp01(out) ? out : clamp01(out);
        return;
    }
    throw InvalidWiring("bind_aux on a node that is not a reserved aux slot");
}

std::vector<NodeId> GateBuilder::lift(const Pseudogate& gate, std::span<const NodeId> primary_inputs) {
    if (primary_inputs.size() != gate.n_in)
        throw InvalidWiring("lift: expected " + std::to_string(gate.n_in) + " primary inputs, got " +
                            std::to_string(primary_inputs.size()));
    std::vector<NodeId> wiring(primary_inputs.begin(), primary_inputs.end());
    for (std::size_t j = 0; j < gate.aux; ++j) wiring.push_back(reserve_aux());
    auto outs = inline_circuit(gate.body, wiring);
    for (std::size_t j = 0; j < gate.aux; ++j) bind_aux(wiring[gate.n_in + j], outs[gate.n_out + j]);
    outs.resize(gate.n_out);
    return outs;
}

std::vector<NodeId> GateBuilder::finish_outputs(const std::vector<NodeId>& primary_outputs) const {
    std::vector<NodeId> outs = primary_outputs;
    for (const AuxPair& p : ledger_) {
        if (p.out == kUnbound) throw InvalidWiring("aux slot left unbound");
        outs.push_back(p.out);
    }
    return outs;
}

Pseudogate GateBuilder::finish_pseudogate(const std::vector<NodeId>& primary_outputs) const {
    return Pseudogate(build(finish_outputs(primary_outputs)), primary_, primary_outputs.size(),
                      ledger_.size());
}

FixedPointProblem GateBuilder::finish_problem(const std::vector<NodeId>& primary_outputs,
                                              const Box& primary_domain) const {
    if (primary_outputs.size() != primary_ || primary_domain.dim() != primary_)
        throw InvalidWiring("fixed-point problem needs as many primary outputs as inputs");
    Box domain = primary_domain;
    domain.append(ledger_.size(), Rational(0), Rational(1));
    return FixedPointProblem{build(finish_outputs(primary_outputs)), domain, primary_, ledger_};
}

FixedPointProblem problem_from_text(std::string_view text) {
    ParsedCircuit p = parse_circuit_text(text);
    const Circuit& c = p.circuit;
    if (c.input_arity() != c.output_arity())
        throw SchemaError("fixed-point circuit must have equal input and output arity");
    Box domain = p.notes.domain ? *p.notes.domain : Box::uniform(c.input_arity(), 0, 1);
    std::size_t primary = p.notes.primary ? *p.notes.primary : c.input_arity() - p.notes.aux.size();
    return FixedPointProblem{c, domain, primary, p.notes.aux};
}

std::vector<AuxRange> fixed_aux_solutions_1d(const Pseudogate& gate, double x, std::size_t grid, double tol) {
    if (gate.aux != 1 || gate.n_in != 1) throw InvalidWiring("fixed_aux_solutions_1d needs n_in = aux = 1");
    if (grid < 2) grid = 2;
    std::vector<double> in(2), out(gate.body.output_arity()), work;
    auto gap = [&](double y) {
        in[0] = x;
        in[1] = y;
        evaluate_into(gate.body, in, out, work);
        return std::fabs(out[gate.n_out] - y);
    };
    auto is_fixed = [&](double y) { return gap(y) <= tol; };
    auto refine = [&](double fixed, double loose) {
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (fixed + loose);
            if (is_fixed(mid)) fixed = mid; else loose = mid;
        }
        return fixed;
    };
    std::vector<AuxRange> ranges;
    std::vector<bool> hit(grid);
    for (std::size_t k = 0; k < grid; ++k) hit[k] = is_fixed(static_cast<double>(k) / (grid - 1));
    for (std::size_t k = 0; k < grid;) {
        if (!hit[k]) { ++k; continue; }
        std::size_t e = k;
        while (e + 1 < grid && hit[e + 1]) ++e;
        double lo = static_cast<double>(k) / (grid - 1), hi = static_cast<double>(e) / (grid - 1);
        if (k > 0) lo = refine(lo, static_cast<double>(k - 1) / (grid - 1));
        if (e + 1 < grid) hi = refine(hi, static_cast<double>(e + 1) / (grid - 1));
        ranges.push_back({lo, hi});
        k = e + 1;
    }
    return ranges;
}

}  // namespace fpf
