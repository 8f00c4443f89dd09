#include "fpf/verify.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <sstream>

namespace fpf {

void VerificationReport::record(const std::string& condition, double value, double tolerance, std::string witness) {
    if (std::isnan(value)) value = std::numeric_limits<double>::infinity();
    for (auto& v : conditions)
        if (v.condition == condition) {
            if (value > v.value) {
                v.value = value;
                v.witness = std::move(witness);
            }
            pass = pass && v.ok();
            return;
        }
    conditions.push_back({condition, value, tolerance, std::move(witness)});
    pass = pass && conditions.back().ok();
}

const Violation* VerificationReport::first_failure() const {
    for (const auto& v : conditions)
        if (!v.ok()) return &v;
    return nullptr;
}

namespace {

std::string label(const char* a, std::size_t i) { return std::string(a) + " " + std::to_string(i); }
std::string label(const char* a, std::size_t i, const char* b, std::size_t j) {
    return label(a, i) + " " + b + " " + std::to_string(j);
}

void check_simplex(VerificationReport& rep, const char* name, std::span<const double> x, double eps,
                   const std::string& who) {
    double sum = 0, neg = 0;
    for (double v : x) {
        sum += v;
        neg = std::max(neg, -v);
    }
    rep.record(name, std::max(std::fabs(sum - 1), neg), eps, who);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

RVec exact(std::span<const double> v) {
    RVec out;
    for (double x : v) out.emplace_back(x);
    return out;
}

Rational rdot(const RVec& a, const RVec& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

std::optional<std::vector<std::size_t>> perfect_matching(const std::vector<std::vector<bool>>& adj) {
    const std::size_t n = adj.size();
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> owner(n, none);
    std::vector<bool> seen;
    auto augment = [&](auto&& self, std::size_t i) -> bool {
        for (std::size_t j = 0; j < n; ++j) {
            if (!adj[i][j] || seen[j]) continue;
            seen[j] = true;
            if (owner[j] == none || self(self, owner[j])) {
                owner[j] = i;
                return true;
            }
        }
        return false;
    };
    for (std::size_t i = 0; i < n; ++i) {
        seen.assign(n, false);
        if (!augment(augment, i)) return std::nullopt;
    }
    std::vector<std::size_t> match(n);
    for (std::size_t j = 0; j < n; ++j) match[owner[j]] = j;
    return match;
}

VerificationReport check_nash(const GameNF& g, std::span<const double> profile, double eps) {
    g.validate();
    if (profile.size() != g.strategy_dim()) throw SchemaError("profile length does not match the game");
    VerificationReport rep;
    for (std::size_t i = 0; i < g.players(); ++i) {
        auto xi = profile.subspan(g.offset(i), g.actions[i]);
        check_simplex(rep, "simplex", xi, eps, label("player", i));
        auto pay = pure_payoffs(g, i, profile);
        const double value = dot(xi, pay);
        for (std::size_t j = 0; j < pay.size(); ++j)
            rep.record("deviation gain", pay[j] - value, eps, label("player", i, "action", j));
    }
    return rep;
}

VerificationReport check_envy_free(const CakeSpec& c, std::span<const double> division, double eps) {
    c.validate();
    if (division.size() != c.n) throw SchemaError("division length must equal n");
    VerificationReport rep;
    check_simplex(rep, "simplex", division, eps, "division");
    std::vector<std::vector<bool>> adj(c.n, std::vector<bool>(c.n));
    for (std::size_t i = 0; i < c.n; ++i) {
        auto u = evaluate(c.u[i], division);
        const double best = *std::max_element(u.begin(), u.end());
        for (std::size_t j = 0; j < c.n; ++j) adj[i][j] = u[j] >= best - eps;
    }
    auto match = perfect_matching(adj);
    if (match) {
        rep.record("perfect matching", 0, 0);
        std::ostringstream os;
        os << "matching";
        for (std::size_t i = 0; i < c.n; ++i) os << " " << i << "->" << (*match)[i];
        rep.notes.push_back(os.str());
    } else {
        // Smallest agent prefix that cannot be matched names the Hall violator.
        std::size_t k = 1;
        for (; k <= c.n; ++k) {
            std::vector<std::vector<bool>> sub(adj.begin(), adj.begin() + static_cast<std::ptrdiff_t>(k));
            for (auto& row : sub) row.resize(c.n);
            std::vector<std::size_t> owner(c.n, c.n);
            bool ok = true;
            for (std::size_t i = 0; i < k && ok; ++i) {
                std::vector<bool> seen(c.n, false);
                auto augment = [&](auto&& self, std::size_t a) -> bool {
                    for (std::size_t j = 0; j < c.n; ++j) {
                        if (!sub[a][j] || seen[j]) continue;
                        seen[j] = true;
                        if (owner[j] == c.n || self(self, owner[j])) {
                            owner[j] = a;
                            return true;
                        }
                    }
                    return false;
                };
                ok = augment(augment, i);
            }
            if (!ok) break;
        }
        rep.record("perfect matching", 1, 0, label("agent", k - 1));
    }
    return rep;
}

VerificationReport check_hz(const HZSpec& h, std::span<const double> p, std::span<const double> x, double eps) {
    h.validate();
    const std::size_t n = h.n;
    if (p.size() != n || x.size() != n * n) throw SchemaError("hz point has the wrong shape");
    VerificationReport rep;
    const double nd = static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) rep.record("price range", std::max(-p[j], p[j] - nd), eps, label("good", j));
    for (std::size_t j = 0; j < n; ++j) {
        double col = 0;
        for (std::size_t i = 0; i < n; ++i) col += x[i * n + j];
        rep.record("goods fully allocated", std::fabs(col - 1), eps, label("good", j));
    }
    const RVec pr = exact(p);
    for (std::size_t i = 0; i < n; ++i) {
        auto xi = x.subspan(i * n, n);
        check_simplex(rep, "allocation simplex", xi, eps, label("agent", i));
        rep.record("budget", dot(p, xi) - 1, eps, label("agent", i));

        LPInstance best;
        best.c = h.u[i];
        best.A = {RVec(n, 1)};
        best.b = {1};
        best.C.push_back(pr);
        best.d.push_back(1);
        for (std::size_t j = 0; j < n; ++j) {
            RVec row(n, 0);
            row[j] = -1;
            best.C.push_back(row);
            best.d.push_back(0);
        }
        best.R = 1;
        LPResult opt = exact_lp_oracle(best);
        if (!opt.optimal()) {
            rep.record("utility optimal", std::numeric_limits<double>::infinity(), eps, label("agent", i) + " budget set empty");
            continue;
        }
        double util = 0;
        for (std::size_t j = 0; j < n; ++j) util += to_double(h.u[i][j]) * xi[j];
        rep.record("utility optimal", to_double(opt.value) - util, eps, label("agent", i));

        LPInstance cheap;
        for (const auto& v : pr) cheap.c.push_back(-v);
        cheap.A = {RVec(n, 1)};
        cheap.b = {1};
        RVec urow;
        for (const auto& v : h.u[i]) urow.push_back(-v);
        cheap.C.push_back(urow);
        cheap.d.push_back(-opt.value);
        for (std::size_t j = 0; j < n; ++j) {
            RVec row(n, 0);
            row[j] = -1;
            cheap.C.push_back(row);
            cheap.d.push_back(0);
        }
        cheap.R = 1;
        LPResult c = exact_lp_oracle(cheap);
        if (c.optimal()) rep.record("cheapest allocation", dot(p, xi) + to_double(c.value), eps, label("agent", i));
    }
    return rep;
}

namespace {

struct LinearSet {
    RMat A;
    RVec b;
    RMat C;
    RVec d;
};

std::optional<LinearSet> linearize(const ConvexSet& s) {
    LinearSet out{s.A, s.b, {}, {}};
    for (const auto& h : s.h) {
        auto f = affine_form(h);
        if (!f) return std::nullopt;
        out.C.push_back(f->coef);
        out.d.push_back(-f->offset);
    }
    return out;
}

double set_violation(const ConvexSet& s, std::span<const double> v) {
    double worst = 0;
    for (std::size_t r = 0; r < s.A.size(); ++r) {
        double acc = -to_double(s.b[r]);
        for (std::size_t h = 0; h < v.size(); ++h) acc += to_double(s.A[r][h]) * v[h];
        worst = std::max(worst, std::fabs(acc));
    }
    for (const auto& c : s.h) worst = std::max(worst, evaluate(c, v)[0]);
    return worst;
}

// max value of `objective` over sampled points of the set near v; returns the best gain over v.
template <class Obj, class Feasible>
double sampled_gain(std::span<const double> v, double K, Obj objective, Feasible feasible) {
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> u(-1, 1);
    const double base = objective(v);
    double gain = 0;
    std::vector<double> t(v.size());
    for (int s = 0; s < 10000; ++s) {
        const double radius = K * std::pow(10.0, -4.0 * (s % 5) / 4.0);
        for (std::size_t h = 0; h < v.size(); ++h) t[h] = std::clamp(v[h] + radius * u(rng), -K, K);
        if (!feasible(std::span<const double>(t))) continue;
        gain = std::max(gain, objective(std::span<const double>(t)) - base);
    }
    return gain;
}

}  // namespace

VerificationReport check_ad_equilibrium(const ADMarketSpec& m, std::span<const double> x, std::span<const double> y,
                                        std::span<const double> p, double eps) {
    m.validate();
    const std::size_t l = m.goods, nc = m.consumers.size(), nf = m.firms.size();
    if (x.size() != nc * l || y.size() != nf * l || p.size() != l) throw SchemaError("market point has the wrong shape");
    VerificationReport rep;
    const Rational K = ad_bound(m);
    const double Kd = to_double(K);
    rep.notes.push_back("optimality is checked within [-K, K]^l, K = " + format_rational(K));
    check_simplex(rep, "price simplex", p, eps, "p");
    const RVec pr = exact(p);
    RVec lo(l, -K), hi(l, K);

    std::vector<double> profit(nf);
    for (std::size_t j = 0; j < nf; ++j) {
        auto yj = y.subspan(j * l, l);
        const ConvexSet& Y = m.firms[j].Y;
        rep.record("production feasible", set_violation(Y, yj), eps, label("firm", j));
        profit[j] = dot(p, yj);
        if (auto lin = linearize(Y)) {
            LPResult r = solve_bounded_lp(BoundedLP{pr, lin->A, lin->b, lin->C, lin->d, lo, hi});
            if (r.optimal()) rep.record("profit maximization", to_double(r.value) - profit[j], eps, label("firm", j));
        } else {
            rep.notes.push_back(label("firm", j) + ": sampled deviation search (nonlinear production set)");
            double gain = sampled_gain(yj, Kd, [&](std::span<const double> v) { return dot(p, v); },
                                       [&](std::span<const double> v) { return set_violation(Y, v) <= 0; });
            rep.record("profit maximization", gain, eps, label("firm", j));
        }
    }

    for (std::size_t i = 0; i < nc; ++i) {
        const Consumer& c = m.consumers[i];
        auto xi = x.subspan(i * l, l);
        rep.record("consumption feasible", set_violation(c.X, xi), eps, label("consumer", i));
        Rational income = rdot(pr, c.endowment);
        for (std::size_t j = 0; j < nf; ++j) income += c.shares[j] * rdot(pr, exact(y.subspan(j * l, l)));
        const double income_d = to_double(income);
        rep.record("budget", dot(p, xi) - income_d, eps, label("consumer", i));

        auto lin = linearize(c.X);
        auto uform = affine_form(c.utility);
        if (lin) {
            lin->C.push_back(pr);
            lin->d.push_back(income);
        }
        const std::string who = label("consumer", i);
        if (lin && uform) {
            LPResult r = solve_bounded_lp(BoundedLP{uform->coef, lin->A, lin->b, lin->C, lin->d, lo, hi});
            if (r.optimal())
                rep.record("utility maximization", to_double(r.value + uform->offset) - evaluate(c.utility, xi)[0], eps, who);
        } else if (lin && c.grad_u.aux == 0) {
            // First-order certificate: no budget-feasible direction improves along a supergradient.
            auto g = evaluate(c.grad_u.body, xi);
            LPResult r = solve_bounded_lp(BoundedLP{exact(g), lin->A, lin->b, lin->C, lin->d, lo, hi});
            rep.notes.push_back(who + ": supergradient certificate");
            if (r.optimal()) rep.record("utility maximization", to_double(r.value) - dot(g, xi), eps, who);
        } else {
            rep.notes.push_back(who + ": sampled deviation search (fallback)");
            double gain = sampled_gain(
                xi, Kd, [&](std::span<const double> v) { return evaluate(c.utility, v)[0]; },
                [&](std::span<const double> v) { return set_violation(c.X, v) <= 0 && dot(p, v) <= income_d; });
            rep.record("utility maximization", gain, eps, who);
        }
    }

    std::vector<double> z(l, 0);
    for (std::size_t h = 0; h < l; ++h) {
        for (std::size_t i = 0; i < nc; ++i) z[h] += x[i * l + h] - to_double(m.consumers[i].endowment[h]);
        for (std::size_t j = 0; j < nf; ++j) z[h] -= y[j * l + h];
        rep.record("excess demand", z[h], eps, label("commodity", h));
    }
    rep.record("complementarity", std::fabs(dot(p, z)), eps, "p.z");
    return rep;
}

VerificationReport check_kkm(const KKMSpec& spec, std::span<const double> x, double eps) {
    const Circuit F = kkm_nonnegative(spec);
    if (x.size() != spec.n) throw SchemaError("point length must equal n");
    VerificationReport rep;
    check_simplex(rep, "simplex", x, eps, "x");
    auto f = evaluate(F, x);
    double cond1 = 0;
    std::size_t worst1 = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] > cond1) cond1 = f[i], worst1 = i;
    bool cond2 = true;
    std::size_t worst2 = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (x[i] > eps && !(f[i] > eps)) cond2 = false, worst2 = i;
    if (cond1 <= eps) {
        rep.notes.push_back("condition 1: all F_i vanish");
        rep.record("kkm", 0, eps);
    } else if (cond2) {
        rep.notes.push_back("condition 2: every supported coordinate has F_i > 0");
        rep.record("kkm", 0, eps);
    } else {
        rep.record("kkm", cond1, eps, label("index", worst1) + ", unsupported by F at " + std::to_string(worst2));
    }
    return rep;
}

VerificationReport check_eps_proper(const GameNF& g, std::span<const double> x, const Rational& eps, double tol) {
    g.validate();
    if (x.size() != g.strategy_dim()) throw SchemaError("profile length does not match the game");
    VerificationReport rep;
    const double e = to_double(eps);
    for (std::size_t i = 0; i < g.players(); ++i) {
        const std::size_t off = g.offset(i), m = g.actions[i];
        auto xi = x.subspan(off, m);
        check_simplex(rep, "simplex", xi, tol, label("player", i));
        const double eta = to_double(eps_proper_eta(m, eps));
        for (std::size_t j = 0; j < m; ++j) rep.record("perturbed lower bound", eta - xi[j], tol, label("player", i, "action", j));
        auto pay = pure_payoffs(g, i, x);
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t l = 0; l < m; ++l)
                if (pay[l] - pay[k] > tol)
                    rep.record("proper ratio", xi[k] - e * xi[l], tol,
                               label("player", i) + " action " + std::to_string(k) + " vs " + std::to_string(l));
    }
    if (rep.conditions.size() == 0) rep.record("proper ratio", 0, tol);
    return rep;
}

std::vector<double> stationary_values(const StochasticGameSpec& g, std::span<const double> x) {
    g.validate();
    const std::size_t S = g.states, n = g.actions.size();
    const double lam = to_double(g.lambda);
    if (lam <= 0) throw SingularSystem("lambda = 0 makes policy evaluation singular");
    const std::size_t base = n * S;
    std::vector<double> out(n * S);
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(S));
    std::vector<Eigen::VectorXd> r(n, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(S)));
    for (std::size_t s = 0; s < S; ++s) {
        GameNF G = g.stage(s);
        for (std::size_t f = 0; f < G.profiles(); ++f) {
            auto a = G.unflat(f);
            double prob = 1;
            for (std::size_t i = 0; i < n; ++i) prob *= x[g.strategy_offset(s, i) - base + a[i]];
            for (std::size_t t = 0; t < S; ++t)
                M(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) -=
                    (1 - lam) * prob * to_double(g.transitions[s][f][t]);
            for (std::size_t i = 0; i < n; ++i) r[i](static_cast<Eigen::Index>(s)) += lam * prob * to_double(G.payoffs[i][f]);
        }
    }
    auto lu = M.fullPivLu();
    if (!lu.isInvertible()) throw SingularSystem("policy evaluation system is singular");
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::VectorXd gam = lu.solve(r[i]);
        for (std::size_t s = 0; s < S; ++s) out[g.value_index(i, s)] = gam(static_cast<Eigen::Index>(s));
    }
    return out;
}

VerificationReport check_stochastic_stationary(const StochasticGameSpec& g, std::span<const double> v,
                                               std::span<const double> x, double tol) {
    g.validate();
    const std::size_t S = g.states, n = g.actions.size();
    const std::size_t base = n * S;
    if (v.size() != n * S || x.size() != g.primary_dim() - base) throw SchemaError("stochastic point has the wrong shape");
    VerificationReport rep;
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t i = 0; i < n; ++i)
            check_simplex(rep, "simplex", x.subspan(g.strategy_offset(s, i) - base, g.actions[i]), tol,
                          label("state", s, "player", i));
    auto gamma = stationary_values(g, x);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t s = 0; s < S; ++s)
            rep.record("value matches", std::fabs(v[g.value_index(i, s)] - gamma[g.value_index(i, s)]), tol,
                       label("player", i, "state", s));
    const double lam = to_double(g.lambda);
    for (std::size_t s = 0; s < S; ++s) {
        GameNF G = g.stage(s);
        // Stage game with continuation values gamma.
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t f = 0; f < G.profiles(); ++f) {
                double cont = 0;
                for (std::size_t t = 0; t < S; ++t) cont += to_double(g.transitions[s][f][t]) * gamma[g.value_index(i, t)];
                G.payoffs[i][f] = Rational(lam * to_double(g.payoffs[s][i][f]) + (1 - lam) * cont);
            }
        auto xs = x.subspan(g.strategy_offset(s, 0) - base, G.strategy_dim());
        for (std::size_t i = 0; i < n; ++i) {
            auto pay = pure_payoffs(G, i, xs);
            const double value = dot(xs.subspan(G.offset(i), G.actions[i]), pay);
            for (std::size_t j = 0; j < pay.size(); ++j)
                rep.record("one-shot deviation", pay[j] - value, tol,
                           label("state", s, "player", i) + " action " + std::to_string(j));
        }
    }
    return rep;
}

VerificationReport check_ccc(const CCCSystem& sys, std::span<const double> x, double tol) {
    if (x.size() != sys.n) throw SchemaError("point length must equal n");
    VerificationReport rep;
    const double R = to_double(sys.R);
    double box = 0;
    for (double v : x) box = std::max(box, std::fabs(v) - R);
    rep.record("domain box", box, tol, "x");
    for (std::size_t r = 0; r < sys.A.size(); ++r) {
        double acc = -to_double(sys.b[r]);
        for (std::size_t h = 0; h < sys.n; ++h) acc += to_double(sys.A[r][h]) * x[h];
        rep.record("domain equalities", std::fabs(acc), tol, label("row", r));
    }
    for (std::size_t i = 0; i < sys.h.size(); ++i) rep.record("domain inequalities", evaluate(sys.h[i], x)[0], tol, label("h", i));

    std::vector<std::size_t> fired;
    double worst = 0;
    std::string who;
    for (std::size_t i = 0; i < sys.constraints.size(); ++i) {
        if (!(evaluate(sys.constraints[i].f, x)[0] > tol)) continue;
        fired.push_back(i);
        const double gval = evaluate(sys.constraints[i].g, x)[0];
        if (gval > worst) worst = gval, who = label("constraint", i);
    }
    if (worst <= tol) {
        rep.record("fired constraints", worst, tol, who);
        return rep;
    }
    // x violates a fired constraint; it is still a solution when F(x) is empty.
    BoundedLP lp;
    lp.c = RVec(sys.n, 0);
    lp.A = sys.A;
    lp.b = sys.b;
    lp.lo = RVec(sys.n, -sys.R);
    lp.hi = RVec(sys.n, sys.R);
    bool affine = true;
    auto add = [&](const Circuit& c) {
        auto f = affine_form(c);
        if (!f) {
            affine = false;
            return;
        }
        lp.C.push_back(f->coef);
        lp.d.push_back(-f->offset);
    };
    for (const auto& h : sys.h) add(h);
    for (std::size_t i : fired) add(sys.constraints[i].g);
    if (affine && !solve_bounded_lp(lp).optimal()) {
        rep.notes.push_back("F(x) is empty (exact feasibility oracle)");
        rep.record("fired constraints", 0, tol);
        return rep;
    }
    if (!affine) rep.notes.push_back("emptiness of F(x) not certifiable: nonlinear constraints");
    rep.record("fired constraints", worst, tol, who);
    return rep;
}

}  // namespace fpf

namespace fpf {

namespace {

// Substitutes trailing parameters into an affine form over (x, w).
std::optional<AffineForm> affine_in_x(const Circuit& c, std::size_t n, const RVec& w) {
    auto f = affine_form(c);
    if (!f) return std::nullopt;
    AffineForm out{RVec(f->coef.begin(), f->coef.begin() + static_cast<std::ptrdiff_t>(n)), f->offset};
    for (std::size_t j = 0; j < w.size(); ++j) out.offset += f->coef[n + j] * w[j];
    return out;
}

std::vector<double> gate_value(const Pseudogate& g, std::span<const double> x) {
    auto out = evaluate(g.body, x);
    out.resize(g.n_out);
    return out;
}

}  // namespace

VerificationReport check_concave(const ConcaveGameSpec& g, std::span<const double> profile, double eps) {
    if (profile.size() != g.profile_dim()) throw SchemaError("profile length does not match the game");
    VerificationReport rep;
    for (std::size_t i = 0; i < g.players.size(); ++i) {
        const ConcavePlayer& P = g.players[i];
        const std::size_t off = g.offset(i), n = P.dim;
        auto xi = profile.subspan(off, n);
        const std::string who = label("player", i);
        double box = 0;
        for (double v : xi) box = std::max(box, std::fabs(v) - to_double(P.R));
        rep.record("strategy feasible", box, eps, who);
        ConvexSet S{P.A, P.b, P.g, P.grad_g};
        rep.record("strategy feasible", set_violation(S, xi), eps, who);

        std::vector<double> full(profile.begin(), profile.end());
        auto own = [&](std::span<const double> v) {
            std::copy(v.begin(), v.end(), full.begin() + static_cast<std::ptrdiff_t>(off));
            return evaluate(P.utility, full)[0];
        };
        auto lin = linearize(S);
        RVec lo(n, -P.R), hi(n, P.R);
        if (lin && P.grad_u.aux == 0) {
            auto grad = gate_value(P.grad_u, profile);
            LPResult r = solve_bounded_lp(BoundedLP{exact(grad), lin->A, lin->b, lin->C, lin->d, lo, hi});
            rep.notes.push_back(who + ": supergradient certificate");
            if (r.optimal()) rep.record("best response", to_double(r.value) - dot(grad, xi), eps, who);
        } else {
            rep.notes.push_back(who + ": sampled deviation search (fallback)");
            double gain = sampled_gain(xi, to_double(P.R), own,
                                       [&](std::span<const double> v) { return set_violation(S, v) <= 0; });
            rep.record("best response", gain, eps, who);
        }
    }
    return rep;
}

VerificationReport check_cp(const ConvexProgramSpec& spec, const CPParams& params, std::span<const double> z,
                            double eps) {
    if (z.size() != spec.n) throw SchemaError("point length must equal n");
    VerificationReport rep;
    double box = 0;
    for (double v : z) box = std::max(box, std::fabs(v) - to_double(params.R));
    rep.record("box", box, eps, "z");
    std::vector<double> zw(z.begin(), z.end());
    for (const auto& v : params.w) zw.push_back(to_double(v));
    for (std::size_t r = 0; r < params.A.size(); ++r) {
        double acc = -to_double(params.b[r]);
        for (std::size_t h = 0; h < spec.n; ++h) acc += to_double(params.A[r][h]) * z[h];
        rep.record("equalities", std::fabs(acc), eps, label("row", r));
    }
    for (std::size_t i = 0; i < spec.g.size(); ++i) rep.record("inequalities", evaluate(spec.g[i], zw)[0], eps, label("g", i));

    BoundedLP lp;
    lp.A = params.A;
    lp.b = params.b;
    lp.lo = RVec(spec.n, -params.R);
    lp.hi = RVec(spec.n, params.R);
    for (const auto& g : spec.g) {
        auto f = affine_in_x(g, spec.n, params.w);
        if (!f) {
            rep.notes.push_back("optimality not certified: nonlinear constraints");
            return rep;
        }
        lp.C.push_back(f->coef);
        lp.d.push_back(-f->offset);
    }
    if (!spec.grad_f || spec.grad_f->aux != 0) {
        rep.notes.push_back("optimality not certified: gradient gate has aux wires");
        return rep;
    }
    auto grad = gate_value(*spec.grad_f, zw);
    // min grad.v over the feasible set must not undercut grad.z.
    for (double v : grad) lp.c.emplace_back(-v);
    LPResult r = solve_bounded_lp(lp);
    if (r.optimal()) rep.record("first-order optimality", to_double(r.value) + dot(grad, z), eps, "z");
    return rep;
}

VerificationReport check_bapat(const BapatSpec& spec, std::span<const double> division, double eps) {
    spec.validate();
    VerificationReport rep = check_envy_free(bapat_to_cake(spec), division, eps);
    auto z = bapat_recover(spec.n, division);
    std::vector<std::vector<bool>> adj(spec.n, std::vector<bool>(spec.n));
    for (std::size_t i = 0; i < spec.n; ++i) {
        auto f = evaluate(spec.f[i], z);
        for (std::size_t j = 0; j < spec.n; ++j) adj[i][j] = z[j] >= f[j] - eps;
    }
    auto match = perfect_matching(adj);
    rep.record("covering permutation", match ? 0.0 : 1.0, 0.0);
    std::ostringstream os;
    os << "recovered z";
    for (double v : z) os << " " << v;
    rep.notes.push_back(os.str());
    return rep;
}

}  // namespace fpf
