#pragma once

#include "fpf/optgate.hpp"

namespace fpf {

// {v : A v = b, h_i(v) <= 0}; circuits have arity equal to the number of goods.
struct ConvexSet {
    RMat A;
    RVec b;
    std::vector<Circuit> h;
    std::vector<Pseudogate> grad_h;
};

struct Consumer {
    ConvexSet X;
    Circuit utility;   // goods -> 1, concave
    Pseudogate grad_u; // goods -> goods, a supergradient
    RVec endowment;
    RVec lower;        // xi with xi <= x for every x in X
    std::optional<RVec> witness;  // some x in X with x < endowment
    RVec shares;       // one per firm

    Consumer(Circuit utility, Pseudogate grad_u) : utility(std::move(utility)), grad_u(std::move(grad_u)) {}
};

struct Firm {
    ConvexSet Y;
};

struct ADMarketSpec {
    std::size_t goods = 0;
    std::vector<Consumer> consumers;
    std::vector<Firm> firms;
    Rational C = 0;  // l_inf bound on production plans

    void validate() const;
    // Primary layout: x_1..x_m, y_1..y_n, p.
    std::size_t x_offset(std::size_t i) const { return i * goods; }
    std::size_t y_offset(std::size_t j) const { return (consumers.size() + j) * goods; }
    std::size_t p_offset() const { return (consumers.size() + firms.size()) * goods; }
    std::size_t primary_dim() const { return p_offset() + goods; }
};

// K = n C + m max ||zeta|| + m max ||xi|| + 1 in the l_inf norm.
Rational ad_bound(const ADMarketSpec& m);

FixedPointProblem compile_ad_market(const ADMarketSpec& m);

struct HZSpec {
    std::size_t n = 0;
    RMat u;  // u[i][j]: agent i, good j

    void validate() const;
    // Primary layout: p (n), then x row-major.
    std::size_t primary_dim() const { return n + n * n; }
};

// Gap between the best and the best strictly worse utility, 1 when all goods tie.
Rational hz_delta(const RVec& u);

struct HZCircuit {
    FixedPointProblem problem;
    Circuit dummy;  // full point -> y_{i,n+1} for every agent
};

HZCircuit compile_hz_detailed(const HZSpec& h);
FixedPointProblem compile_hz(const HZSpec& h);

}  // namespace fpf
