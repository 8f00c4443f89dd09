#include "fpf/ccc.hpp"

namespace fpf {

namespace {

void check_system(const CCCSystem& sys) {
    const std::size_t n = sys.n;
    if (n == 0) throw SchemaError("conditional constraint system needs n >= 1");
    if (sys.R <= 0) throw SchemaError("R must be positive");
    if (sys.A.size() != sys.b.size()) throw SchemaError("A and b disagree in row count");
    for (const auto& row : sys.A)
        if (row.size() != n) throw SchemaError("A row length must equal n");
    if (sys.h.size() != sys.grad_h.size()) throw InvalidWiring("h/grad_h count mismatch");
    auto arity = [&](const Circuit& c, std::size_t outs, const char* what) {
        if (c.input_arity() != n || c.output_arity() != outs)
            throw InvalidWiring(std::string(what) + " has the wrong signature");
    };
    auto grad = [&](const Pseudogate& p) {
        if (p.n_in != n || p.n_out != n) throw InvalidWiring("gradient pseudogate must map n -> n");
    };
    for (const auto& c : sys.h) arity(c, 1, "h circuit");
    for (const auto& p : sys.grad_h) grad(p);
    for (const auto& cc : sys.constraints) {
        arity(cc.f, 1, "f circuit");
        arity(cc.g, 1, "g circuit");
        grad(cc.grad_g);
    }
}

void add_domain_constraints(ConvexProgramSpec& spec, const CCCSystem& sys) {
    for (std::size_t i = 0; i < sys.h.size(); ++i) {
        spec.g.push_back(widen(sys.h[i], spec.s));
        spec.grad_g.push_back(widen(sys.grad_h[i], spec.s));
    }
}

}  // namespace

FixedPointProblem compile_ccc(const CCCSystem& sys) {
    check_system(sys);
    const std::size_t n = sys.n;
    if (!check_explicit_slater(sys.A, sys.b, sys.h, sys.R, n).holds())
        throw SlaterViolation("domain constraints fail the explicit Slater condition");

    // Feasibility program in z, parameterized by x: maximize 0 subject to the domain and
    // max(0, f_i(x)) g_i(z) <= 0.
    ConvexProgramSpec feas;
    feas.n = n;
    feas.s = n;
    feas.m = sys.A.size();
    feas.k = sys.h.size() + sys.constraints.size();
    {
        CircuitBuilder b(2 * n);
        std::vector<NodeId> zero(n, b.constant(0));
        feas.grad_f = as_pseudogate(b.build(zero));
    }
    add_domain_constraints(feas, sys);
    for (const auto& cc : sys.constraints) {
        CircuitBuilder b(2 * n);
        auto in = b.inputs();
        std::vector<NodeId> z(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(n));
        std::vector<NodeId> x(in.begin() + static_cast<std::ptrdiff_t>(n), in.end());
        NodeId gate = b.max(b.constant(0), b.inline_circuit(cc.f, x)[0]);
        feas.g.push_back(b.build({b.mul(gate, b.inline_circuit(cc.g, z)[0])}));

        GateBuilder gb(2 * n);
        auto gin = gb.inputs();
        std::vector<NodeId> gz(gin.begin(), gin.begin() + static_cast<std::ptrdiff_t>(n));
        std::vector<NodeId> gx(gin.begin() + static_cast<std::ptrdiff_t>(n), gin.end());
        NodeId ggate = gb.max(gb.constant(0), gb.inline_circuit(cc.f, gx)[0]);
        std::vector<NodeId> out;
        for (NodeId v : gb.lift(cc.grad_g, gz)) out.push_back(gb.mul(ggate, v));
        feas.grad_g.push_back(gb.finish_pseudogate(out));
    }

    // Projection of y onto D: minimize |z - y|^2.
    ConvexProgramSpec proj;
    proj.n = n;
    proj.s = n;
    proj.m = sys.A.size();
    proj.k = sys.h.size();
    {
        CircuitBuilder b(2 * n);
        std::vector<NodeId> grad;
        for (std::size_t r = 0; r < n; ++r) grad.push_back(b.scale(2, b.sub(b.input(r), b.input(n + r))));
        proj.grad_f = as_pseudogate(b.build(grad));
    }
    add_domain_constraints(proj, sys);

    GateBuilder b(2 * n);
    auto in = b.inputs();
    std::vector<NodeId> x(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<NodeId> y(in.begin() + static_cast<std::ptrdiff_t>(n), in.end());
    auto ybar = lift_opt_gate(b, feas, x, sys.A, sys.b, sys.R);
    auto xbar = lift_opt_gate(b, proj, y, sys.A, sys.b, sys.R);
    std::vector<NodeId> out = xbar;
    out.insert(out.end(), ybar.begin(), ybar.end());
    return b.finish_problem(out, Box::uniform(2 * n, -sys.R, sys.R));
}

CCCSystem eps_proper_system(const GameNF& g, const Rational& eps) {
    g.validate();
    if (eps <= 0 || eps >= 1) throw SchemaError("eps must lie in (0, 1)");
    const std::size_t N = g.strategy_dim();
    CCCSystem sys;
    sys.n = N;
    sys.R = 1;
    for (std::size_t i = 0; i < g.players(); ++i) {
        const std::size_t off = g.offset(i), m = g.actions[i];
        RVec row(N, 0);
        for (std::size_t j = 0; j < m; ++j) row[off + j] = 1;
        sys.A.push_back(row);
        sys.b.push_back(1);
        const Rational eta = eps_proper_eta(m, eps);
        for (std::size_t j = 0; j < m; ++j) {
            CircuitBuilder hb(N);
            sys.h.push_back(hb.build({hb.sub(hb.constant(eta), hb.input(off + j))}));
            CircuitBuilder db(N);
            std::vector<NodeId> e(N, db.constant(0));
            e[off + j] = db.constant(-1);
            sys.grad_h.push_back(as_pseudogate(db.build(e)));
        }
    }
    for (std::size_t i = 0; i < g.players(); ++i) {
        const std::size_t off = g.offset(i), m = g.actions[i];
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t l = 0; l < m; ++l) {
                if (k == l) continue;
                CircuitBuilder fb(N);
                auto pay = pure_payoff_nodes(fb, g, i, fb.inputs());
                Circuit f = fb.build({fb.sub(pay[l], pay[k])});
                CircuitBuilder gb(N);
                Circuit gc = gb.build({gb.sub(gb.input(off + k), gb.scale(eps, gb.input(off + l)))});
                CircuitBuilder db(N);
                std::vector<NodeId> grad(N, db.constant(0));
                grad[off + k] = db.constant(1);
                grad[off + l] = db.constant(-eps);
                sys.constraints.push_back({std::move(f), std::move(gc), as_pseudogate(db.build(grad))});
            }
    }
    return sys;
}

FixedPointProblem compile_eps_proper(const GameNF& g, const Rational& eps) {
    return compile_ccc(eps_proper_system(g, eps));
}

}  // namespace fpf
