#pragma once

#include "fpf/games.hpp"

namespace fpf {

// f(x) > 0 => g(x) <= 0; every circuit has arity n.
struct ConditionalConstraint {
    Circuit f;
    Circuit g;
    Pseudogate grad_g;  // n -> n
};

// Domain D = {x in [-R,R]^n : A x = b, h_i(x) <= 0}.
struct CCCSystem {
    std::size_t n = 0;
    RMat A;
    RVec b;
    std::vector<Circuit> h;
    std::vector<Pseudogate> grad_h;
    Rational R = 1;
    std::vector<ConditionalConstraint> constraints;
};

// Primary coordinates (x, y), domain [-R,R]^{2n}. The first n are the solution.
FixedPointProblem compile_ccc(const CCCSystem& sys);

// Myerson's correspondence over the perturbed simplices as a conditional constraint system.
CCCSystem eps_proper_system(const GameNF& g, const Rational& eps);
FixedPointProblem compile_eps_proper(const GameNF& g, const Rational& eps);

}  // namespace fpf
