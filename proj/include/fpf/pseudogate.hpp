#pragma once

#include "fpf/circuit.hpp"
#include "fpf/circuit_text.hpp"

namespace fpf {

// Body inputs: n_in primary then aux; outputs: n_out primary then aux (clamped to [0,1]).
struct Pseudogate {
    Circuit body;
    std::size_t n_in = 0;
    std::size_t n_out = 0;
    std::size_t aux = 0;

    Pseudogate(Circuit body, std::size_t n_in, std::size_t n_out, std::size_t aux);
};

// A plain circuit viewed as a pseudogate with no aux wires.
Pseudogate as_pseudogate(const Circuit& c);
// Adds pass-through aux wires a -> clamp01(a) until the gate has `aux` of them.
Pseudogate pad_aux(const Pseudogate& g, std::size_t aux);

Pseudogate heaviside();

// F(x) fixed-point problem: inputs and outputs are primary coordinates followed by aux slots.
struct FixedPointProblem {
    Circuit circuit;
    Box domain;
    std::size_t primary = 0;
    std::vector<AuxPair> aux;

    std::size_t dim() const { return circuit.input_arity(); }
    CircuitAnnotations annotations() const { return {aux, domain, primary}; }
};

FixedPointProblem problem_from_text(std::string_view text);

class GateBuilder : public CircuitBuilder {
public:
    explicit GateBuilder(std::size_t primary_inputs);

    std::size_t primary_inputs() const { return primary_; }
    NodeId reserve_aux();
    void bind_aux(NodeId aux_in, NodeId out);
    std::vector<NodeId> lift(const Pseudogate& gate, std::span<const NodeId> primary_inputs);
    const std::vector<AuxPair>& ledger() const { return ledger_; }

    Pseudogate finish_pseudogate(const std::vector<NodeId>& primary_outputs) const;
    FixedPointProblem finish_problem(const std::vector<NodeId>& primary_outputs,
                                     const Box& primary_domain) const;

private:
    std::vector<NodeId> finish_outputs(const std::vector<NodeId>& primary_outputs) const;

    std::size_t primary_;
    std::vector<AuxPair> ledger_;
};

struct AuxRange {
    double lo, hi;
};

// Aux values y on a uniform grid of [0,1] with |aux_out(x,y) - y| <= tol, merged into
// ranges whose endpoints are refined by bisection.
std::vector<AuxRange> fixed_aux_solutions_1d(const Pseudogate& gate, double x, std::size_t grid, double tol = 1e-12);

}  // namespace fpf
