#pragma once

#include "fpf/pseudogate.hpp"

#include <optional>

namespace fpf {

// c evaluated on the first inputs of an arity (c.input_arity() + extra) circuit.
Circuit widen(const Circuit& c, std::size_t extra);
Pseudogate widen(const Pseudogate& g, std::size_t extra);

// minimize f(x;w) s.t. A x = b, g_i(x;w) <= 0, x in [-R,R]^n.
struct ConvexProgramSpec {
    std::size_t n = 0, m = 0, k = 0, s = 0;
    std::vector<Circuit> g;            // k circuits of arity n+s
    std::optional<Pseudogate> grad_f;  // (x,w) -> subgradient of f
    std::vector<Pseudogate> grad_g;    // k gates, same signature
};

struct CPParams {
    RVec w;
    RMat A;
    RVec b;
    Rational R;

    // Primary input order of the OPT-gate: w, A row-major, b, R.
    RVec flatten() const;
};

// Fixed points z = OPT(params) of the gate with its parameters frozen; domain [-R,R]^n.
FixedPointProblem compile_cp(const ConvexProgramSpec& spec, const CPParams& params);

std::size_t opt_gate_param_count(const ConvexProgramSpec& spec);
std::size_t opt_gate_aux_count(const ConvexProgramSpec& spec);

Pseudogate build_opt_gate(const ConvexProgramSpec& spec);

// LP OPT-gate: maximize c.x s.t. A x = b, C x <= d, with w = (c, C row-major, d).
ConvexProgramSpec lp_program(std::size_t n, std::size_t m, std::size_t k);
Pseudogate build_lp_opt_gate(std::size_t n, std::size_t m, std::size_t k);

// Parameter nodes for lifting an LP OPT-gate into a builder.
struct LPNodes {
    std::vector<NodeId> c;
    std::vector<std::vector<NodeId>> C;
    std::vector<NodeId> d;
    std::vector<std::vector<NodeId>> A;
    std::vector<NodeId> b;
    NodeId R = 0;
};

std::vector<NodeId> lift_lp_opt_gate(GateBuilder& b, const LPNodes& lp);
std::vector<NodeId> lift_opt_gate(GateBuilder& b, const ConvexProgramSpec& spec,
                                  std::span<const NodeId> w, const RMat& A, const RVec& bvec,
                                  const Rational& R);

struct PdcPiece {
    Circuit g;     // arity n, one output
    Circuit grad;  // arity n, n outputs
};

// Superdifferential of min_j g_j(x): n primary inputs, n primary outputs, 2M+1 aux.
Pseudogate pdc_supergradient(const std::vector<PdcPiece>& pieces);

struct SlaterVerdict {
    enum class Kind { Holds, Unknown, FailsLinearIndependence } kind = Kind::Unknown;
    RVec witness;

    bool holds() const { return kind == Kind::Holds; }
};

// g circuits have arity n (parameters already substituted).
SlaterVerdict check_explicit_slater(const RMat& A, const RVec& b, const std::vector<Circuit>& g,
                                    const Rational& R, std::size_t n);

// Returns coefficients (a, a0) with c(x) = a.x + a0 if the single-output circuit is affine in its inputs.
struct AffineForm {
    RVec coef;
    Rational offset;
};
std::optional<AffineForm> affine_form(const Circuit& c, std::size_t output = 0);

}  // namespace fpf
