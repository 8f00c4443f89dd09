#pragma once

#include "fpf/pseudogate.hpp"

#include <cstdint>
#include <optional>

namespace fpf {

struct SolverConfig {
    double alpha = 0.5;
    std::size_t max_iters = 200000;
    double tol = 1e-9;
    std::size_t restarts = 16;
    std::uint64_t seed = 0;
    std::size_t anderson = 5;
    std::size_t grid = 0;  // grid oracle resolution per axis; 0 disables
    bool newton = true;    // projected Levenberg-Marquardt polish between damped sweeps
    bool extragradient = true;  // damped step re-evaluated at the trial point

    void validate() const;
};

struct FixedPointReport {
    std::vector<double> point;
    double residual = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t restart = 0;
    std::vector<double> trace;  // residual at iterations 0, 1, 2, 4, 8, ...
};

// ||F(x) - x||_inf
double fixed_point_residual(const Circuit& c, std::span<const double> x);

FixedPointReport iterate(const Circuit& c, const Box& domain, const SolverConfig& cfg,
                         std::optional<std::vector<double>> start = std::nullopt);
FixedPointReport multistart(const Circuit& c, const Box& domain, const SolverConfig& cfg);

inline FixedPointReport multistart(const FixedPointProblem& p, const SolverConfig& cfg) {
    return multistart(p.circuit, p.domain, cfg);
}

constexpr std::size_t kGridMaxDim = 3;

// Local residual minima of a uniform grid, refined and kept when residual <= 10 tol.
std::vector<std::vector<double>> grid_fixed_points(const Circuit& c, const Box& domain,
                                                   std::size_t resolution, double tol = 1e-9);

// Thread count for restarts: FPF_THREADS if set, else 1.
std::size_t restart_threads();

}  // namespace fpf
