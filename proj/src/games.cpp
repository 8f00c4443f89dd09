#include "fpf/games.hpp"

#include <numeric>

namespace fpf {

std::size_t GameNF::profiles() const {
    std::size_t p = 1;
    for (std::size_t m : actions) p *= m;
    return p;
}

std::size_t GameNF::flat(std::span<const std::size_t> profile) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < actions.size(); ++i) idx = idx * actions[i] + profile[i];
    return idx;
}

std::vector<std::size_t> GameNF::unflat(std::size_t index) const {
    std::vector<std::size_t> a(actions.size());
    for (std::size_t i = actions.size(); i-- > 0;) {
        a[i] = index % actions[i];
        index /= actions[i];
    }
    return a;
}

std::size_t GameNF::offset(std::size_t i) const {
    return std::accumulate(actions.begin(), actions.begin() + static_cast<std::ptrdiff_t>(i), std::size_t{0});
}

std::size_t GameNF::strategy_dim() const { return offset(actions.size()); }

void GameNF::validate() const {
    if (actions.empty()) throw SchemaError("game needs at least one player");
    std::size_t total = 1;
    for (std::size_t m : actions) {
        if (m == 0) throw SchemaError("every player needs at least one action");
        total *= m;
        if (total * actions.size() > kMaxTensorEntries)
            throw SizeLimit("payoff tensor exceeds 10^6 entries");
    }
    if (payoffs.size() != actions.size()) throw SchemaError("payoffs: one tensor per player required");
    for (const auto& t : payoffs)
        if (t.size() != total)
            throw SchemaError("payoffs: tensor has " + std::to_string(t.size()) + " entries, expected " +
                              std::to_string(total));
}

namespace {

template <class T>
std::vector<T> pure_payoffs_impl(const GameNF& g, std::size_t i, std::span<const T> x) {
    std::vector<T> out(g.actions[i], T(0));
    const std::size_t P = g.profiles();
    for (std::size_t f = 0; f < P; ++f) {
        auto a = g.unflat(f);
        T w = T(1);
        for (std::size_t p = 0; p < g.players(); ++p)
            if (p != i) w *= x[g.offset(p) + a[p]];
        out[a[i]] += w * T(g.payoffs[i][f]);
    }
    return out;
}

}  // namespace

RVec pure_payoffs(const GameNF& g, std::size_t i, std::span<const Rational> x) {
    return pure_payoffs_impl<Rational>(g, i, x);
}

std::vector<double> pure_payoffs(const GameNF& g, std::size_t i, std::span<const double> x) {
    std::vector<double> out(g.actions[i], 0.0);
    const std::size_t P = g.profiles();
    for (std::size_t f = 0; f < P; ++f) {
        auto a = g.unflat(f);
        double w = 1.0;
        for (std::size_t p = 0; p < g.players(); ++p)
            if (p != i) w *= x[g.offset(p) + a[p]];
        out[a[i]] += w * to_double(g.payoffs[i][f]);
    }
    return out;
}

std::vector<NodeId> pure_payoff_nodes(CircuitBuilder& b, const GameNF& g, std::size_t i,
                                      std::span<const NodeId> x,
                                      const std::vector<std::vector<NodeId>>* values) {
    std::vector<std::vector<NodeId>> terms(g.actions[i]);
    const std::size_t P = g.profiles();
    for (std::size_t f = 0; f < P; ++f) {
        auto a = g.unflat(f);
        std::vector<NodeId> factors;
        for (std::size_t p = 0; p < g.players(); ++p)
            if (p != i) factors.push_back(x[g.offset(p) + a[p]]);
        NodeId prob = factors.empty() ? b.constant(1) : factors[0];
        for (std::size_t q = 1; q < factors.size(); ++q) prob = b.mul(prob, factors[q]);
        NodeId value = values ? (*values)[i][f] : b.constant(g.payoffs[i][f]);
        terms[a[i]].push_back(b.mul(prob, value));
    }
    std::vector<NodeId> out;
    for (auto& t : terms) out.push_back(b.sum(t));
    return out;
}

namespace {

// LP (1): maximize c.z over the simplex, as LP OPT-gate parameters.
LPNodes simplex_lp(CircuitBuilder& b, std::vector<NodeId> c) {
    const std::size_t m = c.size();
    LPNodes lp;
    lp.c = std::move(c);
    NodeId zero = b.constant(0), one = b.constant(1), minus_one = b.constant(-1);
    lp.A.push_back(std::vector<NodeId>(m, one));
    lp.b.push_back(one);
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<NodeId> row(m, zero);
        row[j] = minus_one;
        lp.C.push_back(row);
        lp.d.push_back(zero);
    }
    lp.R = one;
    return lp;
}

}  // namespace

FixedPointProblem compile_nash(const GameNF& g) {
    g.validate();
    const std::size_t N = g.strategy_dim();
    GateBuilder b(N);
    std::vector<NodeId> x = b.inputs();
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < g.players(); ++i) {
        auto z = lift_lp_opt_gate(b, simplex_lp(b, pure_payoff_nodes(b, g, i, x)));
        for (NodeId zj : z) out.push_back(b.clamp01(zj));
    }
    return b.finish_problem(out, Box::uniform(N, 0, 1));
}

std::size_t ConcaveGameSpec::offset(std::size_t i) const {
    std::size_t o = 0;
    for (std::size_t p = 0; p < i; ++p) o += players[p].dim;
    return o;
}

std::size_t ConcaveGameSpec::profile_dim() const { return offset(players.size()); }

FixedPointProblem compile_concave(const ConcaveGameSpec& g) {
    const std::size_t N = g.profile_dim();
    if (g.players.empty()) throw SchemaError("concave game needs at least one player");
    GateBuilder b(N);
    std::vector<NodeId> x = b.inputs();
    std::vector<NodeId> out;
    Box domain;
    for (std::size_t i = 0; i < g.players.size(); ++i) {
        const ConcavePlayer& P = g.players[i];
        const std::size_t n = P.dim, off = g.offset(i);
        if (P.R <= 0) throw SchemaError("player " + std::to_string(i) + ": R must be positive");
        if (P.grad_u.n_in != N || P.grad_u.n_out != n)
            throw InvalidWiring("player " + std::to_string(i) + ": utility gradient must map the profile to the own block");
        if (P.g.size() != P.grad_g.size()) throw InvalidWiring("constraint/gradient count mismatch");
        auto verdict = check_explicit_slater(P.A, P.b, P.g, P.R, n);
        if (!verdict.holds())
            throw SlaterViolation("player " + std::to_string(i) + " constraints fail the explicit Slater condition");

        ConvexProgramSpec spec;
        spec.n = n;
        spec.m = P.A.size();
        spec.k = P.g.size();
        spec.s = N;
        {
            GateBuilder gb(n + N);
            std::vector<NodeId> in = gb.inputs();
            std::vector<NodeId> profile(in.begin() + static_cast<std::ptrdiff_t>(n), in.end());
            for (std::size_t r = 0; r < n; ++r) profile[off + r] = in[r];
            auto gu = gb.lift(P.grad_u, profile);
            std::vector<NodeId> neg;
            for (NodeId v : gu) neg.push_back(gb.neg(v));
            spec.grad_f = gb.finish_pseudogate(neg);
        }
        for (std::size_t j = 0; j < P.g.size(); ++j) {
            CircuitBuilder cb(n + N);
            std::vector<NodeId> in = cb.inputs();
            std::vector<NodeId> y(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(n));
            spec.g.push_back(cb.build(cb.inline_circuit(P.g[j], y)));
            GateBuilder gb(n + N);
            std::vector<NodeId> gin = gb.inputs();
            std::vector<NodeId> gy(gin.begin(), gin.begin() + static_cast<std::ptrdiff_t>(n));
            spec.grad_g.push_back(gb.finish_pseudogate(gb.lift(P.grad_g[j], gy)));
        }
        auto z = lift_opt_gate(b, spec, x, P.A, P.b, P.R);
        out.insert(out.end(), z.begin(), z.end());
        domain.append(n, -P.R, P.R);
    }
    return b.finish_problem(out, domain);
}

ConcaveGameSpec concave_from_nash(const GameNF& g) {
    g.validate();
    const std::size_t N = g.strategy_dim();
    ConcaveGameSpec spec;
    for (std::size_t i = 0; i < g.players(); ++i) {
        const std::size_t m = g.actions[i], off = g.offset(i);
        CircuitBuilder ub(N), gb(N);
        std::vector<NodeId> x = ub.inputs();
        auto pay = pure_payoff_nodes(ub, g, i, x);
        std::vector<NodeId> own(x.begin() + static_cast<std::ptrdiff_t>(off),
                                x.begin() + static_cast<std::ptrdiff_t>(off + m));
        Circuit utility = ub.build({ub.dot(own, pay)});
        std::vector<NodeId> gx = gb.inputs();
        Circuit grad = gb.build(pure_payoff_nodes(gb, g, i, gx));
        ConcavePlayer P(utility, as_pseudogate(grad));
        P.dim = m;
        P.R = 1;
        P.A = {RVec(m, 1)};
        P.b = {1};
        for (std::size_t j = 0; j < m; ++j) {
            CircuitBuilder cb(m);
            P.g.push_back(cb.build({cb.neg(cb.input(j))}));
            CircuitBuilder db(m);
            std::vector<NodeId> e(m, db.constant(0));
            e[j] = db.constant(-1);
            P.grad_g.push_back(as_pseudogate(db.build(e)));
        }
        spec.players.push_back(std::move(P));
    }
    return spec;
}

GameNF StochasticGameSpec::stage(std::size_t s) const {
    return GameNF{actions, payoffs.at(s)};
}

Rational StochasticGameSpec::bound() const {
    Rational M = 0;
    for (const auto& st : payoffs)
        for (const auto& pl : st)
            for (const auto& u : pl) M = std::max(M, Rational(abs(u)));
    return M;
}

void StochasticGameSpec::validate() const {
    if (states == 0) throw SchemaError("stochastic game needs at least one state");
    if (lambda <= 0 || lambda > 1) throw SchemaError("lambda must lie in (0, 1]");
    if (payoffs.size() != states || transitions.size() != states)
        throw SchemaError("payoffs/transitions need one entry per state");
    for (std::size_t s = 0; s < states; ++s) {
        GameNF G = stage(s);
        G.validate();
        if (transitions[s].size() != G.profiles()) throw SchemaError("transitions: one row per action profile");
        for (const auto& row : transitions[s]) {
            if (row.size() != states) throw SchemaError("transitions: row length must equal the state count");
            Rational sum = 0;
            for (const auto& q : row) {
                if (q < 0) throw SchemaError("transitions: negative probability");
                sum += q;
            }
            if (sum != 1) throw SchemaError("transitions: rows must sum to 1");
        }
    }
}

std::size_t StochasticGameSpec::strategy_offset(std::size_t s, std::size_t i) const {
    std::size_t per_state = std::accumulate(actions.begin(), actions.end(), std::size_t{0});
    std::size_t o = actions.size() * states + s * per_state;
    for (std::size_t p = 0; p < i; ++p) o += actions[p];
    return o;
}

std::size_t StochasticGameSpec::primary_dim() const { return strategy_offset(states, 0); }

FixedPointProblem compile_stochastic(const StochasticGameSpec& g) {
    g.validate();
    const std::size_t n = g.actions.size(), S = g.states;
    const Rational M = g.bound();
    GateBuilder b(g.primary_dim());
    std::vector<NodeId> in = b.inputs();
    std::vector<NodeId> out(g.primary_dim());
    for (std::size_t s = 0; s < S; ++s) {
        GameNF G = g.stage(s);
        std::vector<NodeId> x(in.begin() + static_cast<std::ptrdiff_t>(g.strategy_offset(s, 0)),
                              in.begin() + static_cast<std::ptrdiff_t>(g.strategy_offset(s, 0) + G.strategy_dim()));
        // Stage utility lambda u_i(s,a) + (1 - lambda) sum_s' q(s'|s,a) v_i(s').
        std::vector<std::vector<NodeId>> values(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t f = 0; f < G.profiles(); ++f) {
                std::vector<NodeId> terms{b.constant(g.lambda * G.payoffs[i][f])};
                for (std::size_t t = 0; t < S; ++t) {
                    Rational w = (1 - g.lambda) * g.transitions[s][f][t];
                    if (w != 0) terms.push_back(b.scale(w, in[g.value_index(i, t)]));
                }
                values[i].push_back(b.sum(terms));
            }
        for (std::size_t i = 0; i < n; ++i) {
            auto c = pure_payoff_nodes(b, G, i, x, &values);
            auto z = lift_lp_opt_gate(b, simplex_lp(b, c));
            std::vector<NodeId> xbar;
            for (NodeId zj : z) xbar.push_back(b.clamp01(zj));
            for (std::size_t j = 0; j < xbar.size(); ++j) out[g.strategy_offset(s, i) + j] = xbar[j];
            out[g.value_index(i, s)] = b.clamp(b.dot(xbar, c), -M, M);
        }
    }
    Box domain = Box::uniform(n * S, -M, M);
    domain.append(g.primary_dim() - n * S, 0, 1);
    return b.finish_problem(out, domain);
}

Rational eps_proper_eta(std::size_t actions, const Rational& eps) {
    Rational p = 1;
    for (std::size_t k = 0; k < actions; ++k) p *= eps;
    return p / static_cast<unsigned long>(actions);
}

}  // namespace fpf
