#include "fpf/lp.hpp"

#include "fpf/errors.hpp"

#include <limits>

namespace fpf {

namespace {

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : t_(rows, RVec(cols + 1)), basis_(rows), cols_(cols) {}

    Rational& at(std::size_t r, std::size_t c) { return t_[r][c]; }
    Rational& rhs(std::size_t r) { return t_[r][cols_]; }
    std::size_t rows() const { return t_.size(); }
    std::size_t cols() const { return cols_; }
    std::vector<std::size_t>& basis() { return basis_; }

    void pivot(std::size_t r, std::size_t c) {
        Rational p = t_[r][c];
        for (auto& v : t_[r]) v /= p;
        for (std::size_t i = 0; i < t_.size(); ++i) {
            if (i == r || t_[i][c] == 0) continue;
            Rational f = t_[i][c];
            for (std::size_t j = 0; j <= cols_; ++j)
                if (t_[r][j] != 0) t_[i][j] -= f * t_[r][j];
        }
        basis_[r] = c;
    }

    // Maximize obj over columns with allowed[c]; Bland's rule. Tableau must be primal feasible.
    void maximize(const RVec& obj, const std::vector<bool>& allowed) {
        for (;;) {
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < cols_ && enter == cols_; ++j) {
                if (!allowed[j]) continue;
                Rational rc = obj[j];
                for (std::size_t r = 0; r < t_.size(); ++r)
                    if (t_[r][j] != 0) rc -= obj[basis_[r]] * t_[r][j];
                if (rc > 0) enter = j;
            }
            if (enter == cols_) return;
            std::size_t leave = t_.size();
            Rational best;
            for (std::size_t r = 0; r < t_.size(); ++r) {
                if (t_[r][enter] <= 0) continue;
                Rational ratio = t_[r][cols_] / t_[r][enter];
                if (leave == t_.size() || ratio < best ||
                    (ratio == best && basis_[r] < basis_[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave == t_.size()) throw Error("exact simplex: unbounded direction in a bounded LP");
            pivot(leave, enter);
        }
    }

    void drop_row(std::size_t r) {
        t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    }

private:
    RMat t_;
    std::vector<std::size_t> basis_;
    std::size_t cols_;
};

}  // namespace

LPResult solve_bounded_lp(const BoundedLP& lp) {
    const std::size_t n = lp.c.size();
    const std::size_t m = lp.A.size(), k = lp.C.size();
    if (lp.lo.size() != n || lp.hi.size() != n || lp.b.size() != m || lp.d.size() != k)
        throw Error("LP dimension mismatch");
    for (std::size_t j = 0; j < n; ++j)
        if (lp.lo[j] > lp.hi[j]) return {};
    // Shift x = x' + lo so x' >= 0; upper bounds become rows x'_j <= hi_j - lo_j.
    const std::size_t n_ineq = k + n;
    const std::size_t rows = m + n_ineq;
    std::vector<RVec> coef(rows, RVec(n));
    RVec rhs(rows);
    std::vector<bool> has_slack(rows, false);
    for (std::size_t i = 0; i < m; ++i) {
        if (lp.A[i].size() != n) throw Error("LP dimension mismatch");
        rhs[i] = lp.b[i];
        for (std::size_t j = 0; j < n; ++j) {
            coef[i][j] = lp.A[i][j];
            rhs[i] -= lp.A[i][j] * lp.lo[j];
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (lp.C[i].size() != n) throw Error("LP dimension mismatch");
        std::size_t r = m + i;
        rhs[r] = lp.d[i];
        has_slack[r] = true;
        for (std::size_t j = 0; j < n; ++j) {
            coef[r][j] = lp.C[i][j];
            rhs[r] -= lp.C[i][j] * lp.lo[j];
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t r = m + k + j;
        coef[r][j] = 1;
        rhs[r] = lp.hi[j] - lp.lo[j];
        has_slack[r] = true;
    }

    // Columns: x' (n), slacks (n_ineq), artificials (as needed).
    std::vector<std::size_t> art_row;
    std::vector<int> sign(rows, 1);
    for (std::size_t r = 0; r < rows; ++r) {
        if (rhs[r] < 0) sign[r] = -1;
        if (!has_slack[r] || sign[r] < 0) art_row.push_back(r);
    }
    const std::size_t n_art = art_row.size();
    const std::size_t cols = n + n_ineq + n_art;
    Tableau T(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < n; ++j) T.at(r, j) = sign[r] * coef[r][j];
        if (has_slack[r]) T.at(r, n + (r - m)) = sign[r];
        T.rhs(r) = sign[r] * rhs[r];
        if (has_slack[r] && sign[r] > 0) T.basis()[r] = n + (r - m);
    }
    for (std::size_t a = 0; a < n_art; ++a) {
        std::size_t r = art_row[a];
        T.at(r, n + n_ineq + a) = 1;
        T.basis()[r] = n + n_ineq + a;
    }

    std::vector<bool> allowed(cols, true);
    if (n_art > 0) {
        RVec obj(cols);
        for (std::size_t a = 0; a < n_art; ++a) obj[n + n_ineq + a] = -1;
        T.maximize(obj, allowed);
        Rational phase1 = 0;
        for (std::size_t r = 0; r < T.rows(); ++r)
            if (T.basis()[r] >= n + n_ineq) phase1 += T.rhs(r);
        if (phase1 != 0) return {};
        for (std::size_t r = 0; r < T.rows();) {
            if (T.basis()[r] < n + n_ineq) { ++r; continue; }
            std::size_t c = 0;
            while (c < n + n_ineq && T.at(r, c) == 0) ++c;
            if (c < n + n_ineq) {
                T.pivot(r, c);
                ++r;
            } else {
                T.drop_row(r);
            }
        }
        for (std::size_t a = 0; a < n_art; ++a) allowed[n + n_ineq + a] = false;
    }

    RVec obj(cols);
    for (std::size_t j = 0; j < n; ++j) obj[j] = lp.c[j];
    T.maximize(obj, allowed);

    LPResult res;
    res.status = LPResult::Status::Optimal;
    res.x = lp.lo;
    for (std::size_t r = 0; r < T.rows(); ++r)
        if (T.basis()[r] < n) res.x[T.basis()[r]] += T.rhs(r);
    res.value = 0;
    for (std::size_t j = 0; j < n; ++j) res.value += lp.c[j] * res.x[j];
    return res;
}

LPResult exact_lp_oracle(const LPInstance& lp) {
    const std::size_t n = lp.c.size();
    if (n > kOracleMaxVars || lp.A.size() + lp.C.size() > kOracleMaxRows)
        throw SizeLimit("exact LP oracle limited to n <= 12 and m + k <= 40");
    if (lp.R <= 0) throw Error("LP box radius must be positive");
    BoundedLP b{lp.c, lp.A, lp.b, lp.C, lp.d, RVec(n, -lp.R), RVec(n, lp.R)};
    return solve_bounded_lp(b);
}

namespace {

// Reduced row echelon form in place; returns pivot columns. Pivot rows are chosen by row order.
std::vector<std::size_t> rref(RMat& M, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < M.size(); ++c) {
        std::size_t p = r;
        while (p < M.size() && M[p][c] == 0) ++p;
        if (p == M.size()) continue;
        std::swap(M[p], M[r]);
        Rational piv = M[r][c];
        for (auto& v : M[r]) v /= piv;
        for (std::size_t i = 0; i < M.size(); ++i) {
            if (i == r || M[i][c] == 0) continue;
            Rational f = M[i][c];
            for (std::size_t j = 0; j < M[i].size(); ++j) M[i][j] -= f * M[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

std::size_t exact_rank(const RMat& rows, std::size_t cols) {
    RMat M = rows;
    for (auto& row : M) row.resize(cols);
    return rref(M, cols).size();
}

bool solve_affine(const RMat& A, const RVec& b, std::size_t n, AffineSolution& out) {
    RMat M = A;
    for (std::size_t i = 0; i < M.size(); ++i) {
        M[i].resize(n);
        M[i].push_back(b[i]);
    }
    auto pivots = rref(M, n);
    for (std::size_t i = pivots.size(); i < M.size(); ++i)
        if (M[i][n] != 0) return false;
    out.particular.assign(n, 0);
    std::vector<bool> is_pivot(n, false);
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        out.particular[pivots[i]] = M[i][n];
        is_pivot[pivots[i]] = true;
    }
    out.null_basis.clear();
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        RVec v(n);
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -M[i][f];
        out.null_basis.push_back(v);
    }
    return true;
}

}  // namespace fpf
