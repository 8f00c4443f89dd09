#pragma once

#include "fpf/solver.hpp"
#include "fpf/verify.hpp"

#include <string>
#include <string_view>

namespace fpf {

// 64-bit FNV-1a of the input bytes, as 16 hex digits.
std::string content_digest(std::string_view bytes);

struct RunReport {
    std::string digest;
    std::string kind;
    SolverConfig config;
    FixedPointReport fixed_point;
    std::vector<double> primary;  // primary coordinates of the fixed point
    std::optional<VerificationReport> verification;
    double seconds = 0.0;
};

std::string to_json(const RunReport& r);
RunReport parse_run_report(std::string_view bytes);
std::string to_json(const VerificationReport& r);
std::string summarize(const RunReport& r);

// Reads --config files: a JSON object with any of alpha, tol, max_iters, restarts, seed, anderson, grid,
// newton, extragradient.
SolverConfig parse_solver_config(std::string_view bytes, SolverConfig base = {});

}  // namespace fpf
