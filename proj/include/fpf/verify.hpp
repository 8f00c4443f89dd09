#pragma once

#include "fpf/cake.hpp"
#include "fpf/ccc.hpp"
#include "fpf/lp.hpp"
#include "fpf/markets.hpp"

#include <string>

namespace fpf {

struct Violation {
    std::string condition;
    double value = 0.0;
    double tolerance = 0.0;
    std::string witness;  // offending player / piece / commodity when failing

    bool ok() const { return value <= tolerance; }
};

struct VerificationReport {
    bool pass = true;
    std::vector<Violation> conditions;  // worst violation per condition
    std::vector<std::string> notes;

    // Keeps the largest value seen for each condition name.
    void record(const std::string& condition, double value, double tolerance, std::string witness = {});
    const Violation* first_failure() const;
};

VerificationReport check_nash(const GameNF& g, std::span<const double> profile, double eps = 1e-6);
VerificationReport check_envy_free(const CakeSpec& c, std::span<const double> division, double eps = 1e-6);
// x is row-major n x n.
VerificationReport check_hz(const HZSpec& h, std::span<const double> p, std::span<const double> x,
                            double eps = 1e-6);
// x: consumers' bundles concatenated, y: firms' plans concatenated.
VerificationReport check_ad_equilibrium(const ADMarketSpec& m, std::span<const double> x,
                                        std::span<const double> y, std::span<const double> p,
                                        double eps = 1e-6);
VerificationReport check_kkm(const KKMSpec& spec, std::span<const double> x, double eps = 1e-6);
VerificationReport check_eps_proper(const GameNF& g, std::span<const double> x, const Rational& eps,
                                    double tol = 1e-6);
// v laid out as v[i * S + s]; x as in StochasticGameSpec::strategy_offset minus the value block.
VerificationReport check_stochastic_stationary(const StochasticGameSpec& g, std::span<const double> v,
                                               std::span<const double> x, double tol = 1e-6);
VerificationReport check_ccc(const CCCSystem& sys, std::span<const double> x, double tol = 1e-6);

// Discounted values gamma[i * S + s] of the stationary profile (x as for check_stochastic_stationary).
// Each player's own block maximizes its utility against the others (exact LP when affine, first-order
// certificate when grad_u has no aux wires, sampled search otherwise).
VerificationReport check_concave(const ConcaveGameSpec& g, std::span<const double> profile, double eps = 1e-6);
// Feasibility of z and, when every constraint is affine, the first-order optimality certificate.
VerificationReport check_cp(const ConvexProgramSpec& spec, const CPParams& params, std::span<const double> z,
                            double eps = 1e-6);
// Envy-freeness of the reduced cake division and z_pi(i) >= f_i,pi(i)(z) - eps for some permutation pi.
VerificationReport check_bapat(const BapatSpec& spec, std::span<const double> division, double eps = 1e-5);

std::vector<double> stationary_values(const StochasticGameSpec& g, std::span<const double> x);

// Perfect matching in the bipartite graph adj[i][j]; returns the piece matched to each agent or nullopt.
std::optional<std::vector<std::size_t>> perfect_matching(const std::vector<std::vector<bool>>& adj);

}  // namespace fpf
