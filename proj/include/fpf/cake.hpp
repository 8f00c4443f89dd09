#pragma once

#include "fpf/optgate.hpp"

#include <optional>

namespace fpf {

// u[i] maps a division x (arity n) to agent i's values for the n pieces.
struct CakeSpec {
    std::size_t n = 0;
    std::vector<Circuit> u;

    void validate() const;
};

// A simplex point (from `samples` seeded draws) where some agent's best piece is empty or a value is negative.
std::optional<std::vector<double>> hungriness_violation(const CakeSpec& c, std::size_t samples = 10000,
                                                        std::uint64_t seed = 0);

// Nonnegativity of F is enforced by wrapping every output in max(0, .).
struct KKMSpec {
    std::size_t n = 0;
    Circuit F;  // arity n, n outputs

    void validate() const;
};

struct BapatSpec {
    std::size_t n = 0;
    std::vector<Circuit> f;  // each arity n, n outputs, simplex to simplex

    void validate() const;
};

// pi_j = max(x_j - t, floor) with t chosen so that sum_j pi_j = 1, computed through a sorting network.
// With clamp_t, t is additionally kept >= 0.
std::vector<NodeId> floor_projection(CircuitBuilder& b, std::span<const NodeId> x, const Rational& floor,
                                     bool clamp_t);
// Euclidean projection onto the probability simplex.
std::vector<NodeId> simplex_projection(CircuitBuilder& b, std::span<const NodeId> x);

FixedPointProblem compile_cake(const CakeSpec& c);
FixedPointProblem compile_kkm(const KKMSpec& spec);
// max(0, F_i(x)) as an explicit circuit.
Circuit kkm_nonnegative(const KKMSpec& spec);

// Preprocessed g_i of the Bapat maps.
std::vector<Circuit> bapat_preprocess(const BapatSpec& spec);
CakeSpec bapat_to_cake(const BapatSpec& spec);
// 2 (x - 1/(2n))
std::vector<double> bapat_recover(std::size_t n, std::span<const double> division);

}  // namespace fpf
