#include "fpf/markets.hpp"

namespace fpf {

namespace {

Rational inf_norm(const RVec& v) {
    Rational m = 0;
    for (const auto& x : v) m = std::max(m, Rational(abs(x)));
    return m;
}

void check_set(const ConvexSet& s, std::size_t l, const std::string& who) {
    if (s.A.size() != s.b.size()) throw SchemaError(who + ": A and b disagree in row count");
    for (const auto& row : s.A)
        if (row.size() != l) throw SchemaError(who + ": A row length must equal the number of goods");
    if (s.h.size() != s.grad_h.size()) throw InvalidWiring(who + ": h/grad_h count mismatch");
    for (const auto& c : s.h)
        if (c.input_arity() != l || c.output_arity() != 1) throw InvalidWiring(who + ": h circuit signature");
    for (const auto& g : s.grad_h)
        if (g.n_in != l || g.n_out != l) throw InvalidWiring(who + ": gradient signature");
}

bool in_set_exact(const ConvexSet& s, const RVec& v) {
    for (std::size_t r = 0; r < s.A.size(); ++r) {
        Rational acc = 0;
        for (std::size_t h = 0; h < v.size(); ++h) acc += s.A[r][h] * v[h];
        if (acc != s.b[r]) return false;
    }
    for (const auto& c : s.h)
        if (evaluate_exact(c, v)[0] > 0) return false;
    return true;
}

std::vector<NodeId> slice(std::span<const NodeId> v, std::size_t off, std::size_t len) {
    return {v.begin() + static_cast<std::ptrdiff_t>(off), v.begin() + static_cast<std::ptrdiff_t>(off + len)};
}

}  // namespace

void ADMarketSpec::validate() const {
    if (goods == 0) throw SchemaError("market needs at least one good");
    if (consumers.empty()) throw SchemaError("market needs at least one consumer");
    if (C < 0) throw SchemaError("production bound C must be nonnegative");
    for (std::size_t i = 0; i < consumers.size(); ++i) {
        const Consumer& c = consumers[i];
        const std::string who = "consumer " + std::to_string(i);
        check_set(c.X, goods, who);
        if (c.utility.input_arity() != goods || c.utility.output_arity() != 1)
            throw InvalidWiring(who + ": utility signature");
        if (c.grad_u.n_in != goods || c.grad_u.n_out != goods) throw InvalidWiring(who + ": utility gradient signature");
        if (c.endowment.size() != goods || c.lower.size() != goods) throw SchemaError(who + ": endowment/lower length");
        if (c.shares.size() != firms.size()) throw SchemaError(who + ": one share per firm required");
        for (const auto& a : c.shares)
            if (a < 0) throw SchemaError(who + ": negative share");
    }
    for (std::size_t j = 0; j < firms.size(); ++j) {
        check_set(firms[j].Y, goods, "firm " + std::to_string(j));
        Rational sum = 0;
        for (const auto& c : consumers) sum += c.shares[j];
        if (sum != 1) throw SchemaError("shares of firm " + std::to_string(j) + " must sum to 1");
    }
}

Rational ad_bound(const ADMarketSpec& m) {
    Rational z = 0, xi = 0;
    for (const auto& c : m.consumers) {
        z = std::max(z, inf_norm(c.endowment));
        xi = std::max(xi, inf_norm(c.lower));
    }
    const Rational n(static_cast<long>(m.firms.size())), mm(static_cast<long>(m.consumers.size()));
    return n * m.C + mm * z + mm * xi + 1;
}

FixedPointProblem compile_ad_market(const ADMarketSpec& m) {
    m.validate();
    const std::size_t l = m.goods, nf = m.firms.size(), nc = m.consumers.size();
    const Rational K = ad_bound(m);
    for (std::size_t i = 0; i < nc; ++i) {
        const Consumer& c = m.consumers[i];
        const std::string who = "consumer " + std::to_string(i);
        if (!c.witness) throw MissingWitness(who + ": no x < endowment witness supplied");
        if (c.witness->size() != l) throw SchemaError(who + ": witness length");
        for (std::size_t h = 0; h < l; ++h)
            if (!((*c.witness)[h] < c.endowment[h])) throw MissingWitness(who + ": witness is not below the endowment");
        if (!in_set_exact(c.X, *c.witness)) throw MissingWitness(who + ": witness lies outside the consumption set");
        if (!check_explicit_slater(c.X.A, c.X.b, c.X.h, K, l).holds())
            throw SlaterViolation(who + ": consumption set fails the explicit Slater condition");
    }
    for (std::size_t j = 0; j < nf; ++j)
        if (!check_explicit_slater(m.firms[j].Y.A, m.firms[j].Y.b, m.firms[j].Y.h, K, l).holds())
            throw SlaterViolation("firm " + std::to_string(j) + ": production set fails the explicit Slater condition");

    GateBuilder b(m.primary_dim());
    auto in = b.inputs();
    auto p = slice(in, m.p_offset(), l);
    std::vector<NodeId> out(m.primary_dim());

    // (14) maximize p.v over Y_j.
    for (std::size_t j = 0; j < nf; ++j) {
        const ConvexSet& Y = m.firms[j].Y;
        ConvexProgramSpec spec;
        spec.n = l;
        spec.s = l;
        spec.m = Y.A.size();
        spec.k = Y.h.size();
        CircuitBuilder gb(2 * l);
        std::vector<NodeId> grad;
        for (std::size_t h = 0; h < l; ++h) grad.push_back(gb.neg(gb.input(l + h)));
        spec.grad_f = as_pseudogate(gb.build(grad));
        for (std::size_t r = 0; r < Y.h.size(); ++r) {
            spec.g.push_back(widen(Y.h[r], l));
            spec.grad_g.push_back(widen(Y.grad_h[r], l));
        }
        auto ybar = lift_opt_gate(b, spec, p, Y.A, Y.b, K);
        for (std::size_t h = 0; h < l; ++h) out[m.y_offset(j) + h] = ybar[h];
    }

    // (15) maximize u_i(v) over X_i and the budget, parameters w = (p, y_1..y_n).
    const std::size_t s = l * (1 + nf);
    std::vector<NodeId> w = p;
    for (std::size_t j = 0; j < nf; ++j) {
        auto yj = slice(in, m.y_offset(j), l);
        w.insert(w.end(), yj.begin(), yj.end());
    }
    for (std::size_t i = 0; i < nc; ++i) {
        const Consumer& c = m.consumers[i];
        ConvexProgramSpec spec;
        spec.n = l;
        spec.s = s;
        spec.m = c.X.A.size();
        spec.k = c.X.h.size() + 1;
        {
            GateBuilder gb(l + s);
            auto gin = gb.inputs();
            std::vector<NodeId> grad;
            for (NodeId v : gb.lift(c.grad_u, slice(gin, 0, l))) grad.push_back(gb.neg(v));
            spec.grad_f = gb.finish_pseudogate(grad);
        }
        for (std::size_t r = 0; r < c.X.h.size(); ++r) {
            spec.g.push_back(widen(c.X.h[r], s));
            spec.grad_g.push_back(widen(c.X.grad_h[r], s));
        }
        {
            CircuitBuilder cb(l + s);
            auto cin = cb.inputs();
            auto v = slice(cin, 0, l), pw = slice(cin, l, l);
            std::vector<NodeId> terms{cb.dot(pw, v), cb.neg(cb.dot(c.endowment, pw))};
            for (std::size_t j = 0; j < nf; ++j)
                if (c.shares[j] != 0)
                    terms.push_back(cb.scale(-c.shares[j], cb.dot(pw, slice(cin, l + l * (1 + j), l))));
            spec.g.push_back(cb.build({cb.sum(terms)}));
            CircuitBuilder db(l + s);
            spec.grad_g.push_back(as_pseudogate(db.build(slice(db.inputs(), l, l))));
        }
        auto xbar = lift_opt_gate(b, spec, w, c.X.A, c.X.b, K);
        for (std::size_t h = 0; h < l; ++h) out[m.x_offset(i) + h] = xbar[h];
    }

    // (16) maximize v.z over the price simplex.
    std::vector<NodeId> z;
    for (std::size_t h = 0; h < l; ++h) {
        std::vector<NodeId> terms;
        Rational endow = 0;
        for (std::size_t i = 0; i < nc; ++i) {
            terms.push_back(in[m.x_offset(i) + h]);
            endow += m.consumers[i].endowment[h];
        }
        for (std::size_t j = 0; j < nf; ++j) terms.push_back(b.neg(in[m.y_offset(j) + h]));
        terms.push_back(b.constant(-endow));
        z.push_back(b.sum(terms));
    }
    LPNodes lp;
    NodeId zero = b.constant(0), one = b.constant(1), minus_one = b.constant(-1);
    lp.c = z;
    lp.A.push_back(std::vector<NodeId>(l, one));
    lp.b.push_back(one);
    for (std::size_t h = 0; h < l; ++h) {
        std::vector<NodeId> row(l, zero);
        row[h] = minus_one;
        lp.C.push_back(row);
        lp.d.push_back(zero);
    }
    lp.R = one;
    auto pbar = lift_lp_opt_gate(b, lp);
    for (std::size_t h = 0; h < l; ++h) out[m.p_offset() + h] = b.clamp01(pbar[h]);

    Box domain = Box::uniform(m.p_offset(), -K, K);
    domain.append(l, 0, 1);
    return b.finish_problem(out, domain);
}

void HZSpec::validate() const {
    if (n == 0) throw SchemaError("hz needs n >= 1");
    if (u.size() != n) throw SchemaError("hz: utility matrix must be n x n");
    for (const auto& row : u)
        if (row.size() != n) throw SchemaError("hz: utility matrix must be n x n");
}

Rational hz_delta(const RVec& u) {
    Rational top = *std::max_element(u.begin(), u.end());
    std::optional<Rational> second;
    for (const auto& v : u)
        if (v < top && (!second || v > *second)) second = v;
    return second ? top - *second : Rational(1);
}

HZCircuit compile_hz_detailed(const HZSpec& h) {
    h.validate();
    const std::size_t n = h.n;
    const Rational nr(static_cast<long>(n));
    GateBuilder b(h.primary_dim());
    auto in = b.inputs();
    auto p = slice(in, 0, n);
    NodeId zero = b.constant(0), one = b.constant(1), minus_one = b.constant(-1);
    auto neg_unit = [&](std::size_t len, std::size_t j) {
        std::vector<NodeId> row(len, zero);
        row[j] = minus_one;
        return row;
    };

    std::vector<NodeId> out(h.primary_dim()), dummy;
    std::vector<std::vector<NodeId>> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        // (17) utility maximization under the budget.
        LPNodes lp;
        for (std::size_t j = 0; j < n; ++j) lp.c.push_back(b.constant(h.u[i][j]));
        lp.A.push_back(std::vector<NodeId>(n, one));
        lp.b.push_back(one);
        lp.C.push_back(p);
        lp.d.push_back(one);
        for (std::size_t j = 0; j < n; ++j) {
            lp.C.push_back(neg_unit(n, j));
            lp.d.push_back(zero);
        }
        lp.R = one;
        std::vector<NodeId> xp;
        for (NodeId v : lift_lp_opt_gate(b, lp)) xp.push_back(b.clamp01(v));

        // (18) cheapest allocation over n + 1 goods reaching the same utility.
        const Rational umax = *std::max_element(h.u[i].begin(), h.u[i].end());
        RVec uext = h.u[i];
        uext.push_back(umax + hz_delta(h.u[i]));
        LPNodes cost;
        for (std::size_t j = 0; j < n; ++j) cost.c.push_back(b.neg(p[j]));
        cost.c.push_back(b.constant(-3 * nr));
        cost.A.push_back(std::vector<NodeId>(n + 1, one));
        cost.b.push_back(one);
        std::vector<NodeId> urow;
        for (const auto& v : uext) urow.push_back(b.constant(-v));
        cost.C.push_back(urow);
        cost.d.push_back(b.neg(b.dot(h.u[i], xp)));
        for (std::size_t j = 0; j <= n; ++j) {
            cost.C.push_back(neg_unit(n + 1, j));
            cost.d.push_back(zero);
        }
        cost.R = one;
        for (NodeId v : lift_lp_opt_gate(b, cost)) y[i].push_back(b.clamp01(v));
        for (std::size_t j = 0; j < n; ++j) out[n + i * n + j] = y[i][j];
        dummy.push_back(y[i][n]);
    }

    // (19) overallocated goods get price n, underallocated 0.
    LPNodes price;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<NodeId> col;
        for (std::size_t i = 0; i < n; ++i) col.push_back(y[i][j]);
        price.c.push_back(b.sub(b.sum(col), one));
    }
    NodeId nn = b.constant(nr);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<NodeId> row(n, zero);
        row[j] = one;
        price.C.push_back(row);
        price.d.push_back(nn);
    }
    for (std::size_t j = 0; j < n; ++j) {
        price.C.push_back(neg_unit(n, j));
        price.d.push_back(zero);
    }
    price.R = nn;
    auto pstar = lift_lp_opt_gate(b, price);
    NodeId pmin = b.min_of(pstar);
    for (std::size_t j = 0; j < n; ++j) out[j] = b.clamp(b.sub(pstar[j], pmin), 0, nr);

    Box domain = Box::uniform(n, 0, nr);
    domain.append(n * n, 0, 1);
    HZCircuit res{b.finish_problem(out, domain), b.build(dummy)};
    return res;
}

FixedPointProblem compile_hz(const HZSpec& h) { return compile_hz_detailed(h).problem; }

}  // namespace fpf
