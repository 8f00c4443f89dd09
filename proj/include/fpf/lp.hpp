#pragma once

#include "fpf/rational.hpp"

namespace fpf {

// maximize c.x  s.t.  A x = b,  C x <= d,  x in [-R, R]^n
struct LPInstance {
    RVec c;
    RMat A;
    RVec b;
    RMat C;
    RVec d;
    Rational R;
};

// maximize c.x  s.t.  A x = b,  C x <= d,  lo <= x <= hi
struct BoundedLP {
    RVec c;
    RMat A;
    RVec b;
    RMat C;
    RVec d;
    RVec lo, hi;
};

struct LPResult {
    enum class Status { Optimal, Infeasible } status = Status::Infeasible;
    RVec x;
    Rational value;

    bool optimal() const { return status == Status::Optimal; }
};

constexpr std::size_t kOracleMaxVars = 12;
constexpr std::size_t kOracleMaxRows = 40;

// Exact simplex with Bland's rule; SizeLimit beyond n <= 12, m + k <= 40.
LPResult exact_lp_oracle(const LPInstance& lp);
// Same algorithm without the size guard, for internal certificates.
LPResult solve_bounded_lp(const BoundedLP& lp);

std::size_t exact_rank(const RMat& rows, std::size_t cols);

// Solutions of A x = b as x_p + N t (N columns span the null space). Empty optional if inconsistent.
struct AffineSolution {
    RVec particular;
    RMat null_basis;  // each entry is one basis vector of length n
};
bool solve_affine(const RMat& A, const RVec& b, std::size_t n, AffineSolution& out);

}  // namespace fpf
