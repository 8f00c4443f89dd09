#pragma once

#include "fpf/ccc.hpp"
#include "fpf/instance.hpp"
#include "fpf/solver.hpp"

#include <random>

namespace fixtures {

using namespace fpf;

GameNF matching_pennies();
GameNF rock_paper_scissors();
GameNF random_game(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int range = 50);

// u_ij(x) = w[j] x_j + add[j]
Circuit linear_valuation(std::size_t n, const RVec& w, const RVec& add);
CakeSpec cake_sym2();
CakeSpec cake_sym3();
CakeSpec cake_separated();
CakeSpec random_linear_cake(std::mt19937_64& rng, std::size_t n);

// F_i(x) = max(0, c_i - x_i)
KKMSpec kkm_target(const RVec& c);
// F_i(x) = max(0, G(x)_i - x_i) for an affine G of the simplex into itself, G(x) = M x + v.
KKMSpec kkm_brouwer(const RMat& M, const RVec& v);
BapatSpec bapat_constant(const RMat& rows);

// Linear utility a.x over {x >= lo}, witness strictly below the endowment.
Consumer linear_consumer(const RVec& a, const RVec& endowment, const Rational& lo);
ADMarketSpec autarky();
ADMarketSpec exchange_2x2();

HZSpec hz_opposed();
HZSpec random_hz(std::mt19937_64& rng, std::size_t n);

Rational random_rational(std::mt19937_64& rng, int num = 9, int den = 9);

// Random LP with n <= 4, m <= 2, k <= 4 passing the explicit Slater check.
struct RandomLP {
    LPInstance lp;
    std::size_t n, m, k;
};
RandomLP random_slater_lp(std::mt19937_64& rng, const Rational& R = 10);
CPInstance lp_instance(const LPInstance& lp);

// All Nash equilibria of a nondegenerate bimatrix game by support enumeration (exact).
std::vector<RVec> support_enumeration(const GameNF& g);
bool nondegenerate(const GameNF& g);

double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace fixtures
