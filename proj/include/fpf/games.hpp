#pragma once

#include "fpf/optgate.hpp"

namespace fpf {

// Payoffs are stored per player as a flat tensor, player 0's action most significant.
struct GameNF {
    std::vector<std::size_t> actions;
    std::vector<RVec> payoffs;

    std::size_t players() const { return actions.size(); }
    std::size_t profiles() const;
    std::size_t flat(std::span<const std::size_t> profile) const;
    std::vector<std::size_t> unflat(std::size_t index) const;
    // Offset of player i's block in the concatenated strategy vector.
    std::size_t offset(std::size_t i) const;
    std::size_t strategy_dim() const;
    void validate() const;
};

constexpr std::size_t kMaxTensorEntries = 1000000;

// Expected payoff of player i for each own pure action against the mixed profile (exact / numeric).
RVec pure_payoffs(const GameNF& g, std::size_t i, std::span<const Rational> x);
std::vector<double> pure_payoffs(const GameNF& g, std::size_t i, std::span<const double> x);

// Nodes for u_i(j, x_{-i}) for every action j of player i, from strategy nodes x (full profile).
std::vector<NodeId> pure_payoff_nodes(CircuitBuilder& b, const GameNF& g, std::size_t i,
                                      std::span<const NodeId> x,
                                      const std::vector<std::vector<NodeId>>* values = nullptr);

FixedPointProblem compile_nash(const GameNF& g);

struct ConcavePlayer {
    std::size_t dim = 0;
    Rational R = 1;
    RMat A;
    RVec b;
    std::vector<Circuit> g;          // arity dim
    std::vector<Pseudogate> grad_g;  // dim -> dim
    Circuit utility;                 // full profile -> 1, used by verifiers
    Pseudogate grad_u;               // full profile -> dim, supergradient in the own block

    ConcavePlayer(Circuit utility, Pseudogate grad_u)
        : utility(std::move(utility)), grad_u(std::move(grad_u)) {}
};

struct ConcaveGameSpec {
    std::vector<ConcavePlayer> players;

    std::size_t offset(std::size_t i) const;
    std::size_t profile_dim() const;
};

FixedPointProblem compile_concave(const ConcaveGameSpec& g);
// The normal-form game as a concave game over simplices.
ConcaveGameSpec concave_from_nash(const GameNF& g);

struct StochasticGameSpec {
    std::size_t states = 1;
    std::vector<std::size_t> actions;
    std::vector<std::vector<RVec>> payoffs;      // [state][player][flat profile]
    std::vector<std::vector<RVec>> transitions;  // [state][flat profile][next state]
    Rational lambda = 1;

    GameNF stage(std::size_t s) const;
    Rational bound() const;  // M = max |u_i(s,a)|
    void validate() const;
    // Layout of the primary vector: values v_i(s), then strategies x(s)_i.
    std::size_t value_index(std::size_t i, std::size_t s) const { return i * states + s; }
    std::size_t strategy_offset(std::size_t s, std::size_t i) const;
    std::size_t primary_dim() const;
};

FixedPointProblem compile_stochastic(const StochasticGameSpec& g);

Rational eps_proper_eta(std::size_t actions, const Rational& eps);

}  // namespace fpf
