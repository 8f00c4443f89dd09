#include "fpf/lp.hpp"
#include "fpf/optgate.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace fpf {

namespace {

struct Constraint {
    const Circuit* nonlinear = nullptr;
    RVec a;  // affine: a.x - rhs <= 0
    Rational rhs;
};

double eval_constraint(const Constraint& c, const std::vector<double>& x, std::vector<double>& grad) {
    const std::size_t n = x.size();
    if (!c.nonlinear) {
        double v = -to_double(c.rhs);
        grad.assign(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            double aj = to_double(c.a[j]);
            v += aj * x[j];
            grad[j] = aj;
        }
        return v;
    }
    std::vector<double> out;
    evaluate_jacobian(*c.nonlinear, x, out, grad);
    return out[0];
}

bool strictly_feasible(const std::vector<Constraint>& cons, const RVec& x, const Rational& R) {
    for (const auto& xr : x)
        if (abs(xr) >= R) return false;
    for (const auto& c : cons) {
        Rational v;
        if (c.nonlinear) {
            try {
                v = evaluate_exact(*c.nonlinear, x)[0];
            } catch (const DivisionByZero&) {
                return false;
            }
        } else {
            v = -c.rhs;
            for (std::size_t j = 0; j < x.size(); ++j) v += c.a[j] * x[j];
        }
        if (v >= 0) return false;
    }
    return true;
}

}  // namespace

SlaterVerdict check_explicit_slater(const RMat& A, const RVec& b, const std::vector<Circuit>& g,
                                    const Rational& R, std::size_t n) {
    SlaterVerdict verdict;
    if (exact_rank(A, n) < A.size()) {
        verdict.kind = SlaterVerdict::Kind::FailsLinearIndependence;
        return verdict;
    }
    if (R <= 0) return verdict;

    std::vector<Constraint> cons;
    RMat C;
    RVec d;
    for (const auto& gi : g) {
        if (gi.input_arity() != n) throw InvalidWiring("constraint arity != n");
        if (auto af = affine_form(gi)) {
            C.push_back(af->coef);
            d.push_back(-af->offset);
            cons.push_back({nullptr, af->coef, -af->offset});
        } else {
            cons.push_back({&gi, {}, 0});
        }
    }

    // maximize s over (x, s): A x = b, C x + s <= d, |x_r| + s <= R, s in [0,1]
    BoundedLP lp;
    lp.c.assign(n + 1, 0);
    lp.c[n] = 1;
    for (std::size_t j = 0; j < A.size(); ++j) {
        RVec row = A[j];
        row.resize(n);
        row.push_back(0);
        lp.A.push_back(row);
    }
    lp.b = b;
    for (std::size_t i = 0; i < C.size(); ++i) {
        RVec row = C[i];
        row.push_back(1);
        lp.C.push_back(row);
        lp.d.push_back(d[i]);
    }
    for (std::size_t r = 0; r < n; ++r)
        for (int sg : {1, -1}) {
            RVec row(n + 1);
            row[r] = sg;
            row[n] = 1;
            lp.C.push_back(row);
            lp.d.push_back(R);
        }
    lp.lo.assign(n + 1, -R);
    lp.hi.assign(n + 1, R);
    lp.lo[n] = 0;
    lp.hi[n] = 1;
    LPResult res = solve_bounded_lp(lp);
    if (!res.optimal() || res.x[n] <= 0) return verdict;
    RVec x0(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(n));
    if (strictly_feasible(cons, x0, R)) {
        verdict.kind = SlaterVerdict::Kind::Holds;
        verdict.witness = x0;
        return verdict;
    }

    // Subgradient descent on max(constraints, |x_r| - R) over x = x0 + N t.
    AffineSolution aff;
    if (!solve_affine(A, b, n, aff)) return verdict;
    const std::size_t dim = aff.null_basis.size();
    if (dim == 0) return verdict;
    Eigen::MatrixXd N(n, dim);
    for (std::size_t q = 0; q < dim; ++q)
        for (std::size_t r = 0; r < n; ++r) N(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(q)) = to_double(aff.null_basis[q][r]);
    Eigen::VectorXd t = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    std::vector<double> base = to_doubles(x0), x(n), grad;
    const double Rd = to_double(R);
    auto phi = [&](const Eigen::VectorXd& tt, Eigen::VectorXd* sub) {
        Eigen::VectorXd xv = N * tt;
        for (std::size_t r = 0; r < n; ++r) x[r] = base[r] + xv(static_cast<Eigen::Index>(r));
        double worst = -std::numeric_limits<double>::infinity();
        std::vector<double> wg(n, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            double v = std::fabs(x[r]) - Rd;
            if (v > worst) {
                worst = v;
                std::fill(wg.begin(), wg.end(), 0.0);
                wg[r] = x[r] >= 0 ? 1.0 : -1.0;
            }
        }
        for (const auto& c : cons) {
            double v;
            try {
                v = eval_constraint(c, x, grad);
            } catch (const DivisionByZero&) {
                return std::numeric_limits<double>::infinity();
            }
            if (v > worst) {
                worst = v;
                wg = grad;
            }
        }
        if (sub) {
            Eigen::Map<Eigen::VectorXd> gx(wg.data(), static_cast<Eigen::Index>(n));
            *sub = N.transpose() * gx;
        }
        return worst;
    };
    Eigen::VectorXd best_t = t, sub;
    double best = phi(t, &sub);
    double step = 0.1 * std::max(Rd, 1.0);
    for (int it = 0; it < 4000 && best >= -1e-9; ++it) {
        double v = phi(t, &sub);
        if (v < best) {
            best = v;
            best_t = t;
        }
        double norm = sub.norm();
        if (norm == 0.0) break;
        t -= (step / std::sqrt(1.0 + it)) * sub / norm;
    }
    for (int polish = 0; polish < 50; ++polish) {
        RVec xr = x0;
        for (std::size_t q = 0; q < dim; ++q) {
            Rational tq(best_t(static_cast<Eigen::Index>(q)));
            for (std::size_t r = 0; r < n; ++r) xr[r] += tq * aff.null_basis[q][r];
        }
        if (strictly_feasible(cons, xr, R)) {
            verdict.kind = SlaterVerdict::Kind::Holds;
            verdict.witness = xr;
            return verdict;
        }
        best_t *= 0.5;  // retreat toward the linear witness
    }
    return verdict;
}

}  // namespace fpf
