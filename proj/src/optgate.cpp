#include "fpf/optgate.hpp"

#include <algorithm>

namespace fpf {

RVec CPParams::flatten() const {
    RVec out = w;
    for (const auto& row : A) out.insert(out.end(), row.begin(), row.end());
    out.insert(out.end(), b.begin(), b.end());
    out.push_back(R);
    return out;
}

Circuit widen(const Circuit& c, std::size_t extra) {
    const std::size_t n = c.input_arity();
    CircuitBuilder b(n + extra);
    auto in = b.inputs();
    std::vector<NodeId> z(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(n));
    return b.build(b.inline_circuit(c, z));
}

Pseudogate widen(const Pseudogate& g, std::size_t extra) {
    GateBuilder b(g.n_in + extra);
    auto in = b.inputs();
    std::vector<NodeId> z(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(g.n_in));
    return b.finish_pseudogate(b.lift(g, z));
}

std::size_t opt_gate_param_count(const ConvexProgramSpec& spec) {
    return spec.s + spec.m * spec.n + spec.m + 1;
}

namespace {

std::size_t common_aux(const ConvexProgramSpec& spec) {
    std::size_t t = spec.grad_f ? spec.grad_f->aux : 0;
    for (const auto& g : spec.grad_g) t = std::max(t, g.aux);
    return t;
}

void check_spec(const ConvexProgramSpec& spec) {
    if (spec.n == 0) throw InvalidWiring("convex program needs n >= 1");
    if (!spec.grad_f) throw InvalidWiring("convex program is missing grad_f");
    if (spec.g.size() != spec.k || spec.grad_g.size() != spec.k)
        throw InvalidWiring("convex program needs k constraint circuits and k gradient gates");
    auto check_grad = [&](const Pseudogate& p) {
        if (p.n_in != spec.n + spec.s || p.n_out != spec.n)
            throw InvalidWiring("gradient pseudogate signature must be (n+s) -> n");
    };
    check_grad(*spec.grad_f);
    for (const auto& p : spec.grad_g) check_grad(p);
    for (const auto& c : spec.g)
        if (c.input_arity() != spec.n + spec.s || c.output_arity() != 1)
            throw InvalidWiring("constraint circuit must map (n+s) inputs to one output");
}

}  // namespace

std::size_t opt_gate_aux_count(const ConvexProgramSpec& spec) {
    return spec.n + spec.k + spec.m + common_aux(spec) * (spec.k + 1);
}

Pseudogate build_opt_gate(const ConvexProgramSpec& spec) {
    check_spec(spec);
    const std::size_t n = spec.n, m = spec.m, k = spec.k, s = spec.s;
    const std::size_t t = common_aux(spec);
    GateBuilder b(opt_gate_param_count(spec));
    std::vector<NodeId> w, bvec;
    std::vector<std::vector<NodeId>> A(m);
    for (std::size_t i = 0; i < s; ++i) w.push_back(b.input(i));
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t r = 0; r < n; ++r) A[j].push_back(b.input(s + j * n + r));
    for (std::size_t j = 0; j < m; ++j) bvec.push_back(b.input(s + m * n + j));
    NodeId R = b.input(s + m * n + m);
    NodeId two_R = b.add(R, R);

    std::vector<NodeId> y, x;
    for (std::size_t r = 0; r < n; ++r) y.push_back(b.reserve_aux());
    for (std::size_t r = 0; r < n; ++r) x.push_back(b.sub(b.mul(two_R, y[r]), R));
    std::vector<NodeId> xw = x;
    xw.insert(xw.end(), w.begin(), w.end());

    const Pseudogate H = heaviside();
    std::vector<NodeId> mu, lambda;
    for (std::size_t i = 0; i < k; ++i) {
        NodeId gi = b.inline_circuit(spec.g[i], xw)[0];
        mu.push_back(b.lift(H, std::vector<NodeId>{gi})[0]);
    }
    for (std::size_t j = 0; j < m; ++j) {
        NodeId e = b.sub(b.dot(A[j], x), bvec[j]);
        NodeId h = b.lift(H, std::vector<NodeId>{e})[0];
        lambda.push_back(b.sub(b.add(h, h), b.constant(1)));
    }
    std::vector<NodeId> v0 = b.lift(pad_aux(*spec.grad_f, t), xw);
    std::vector<std::vector<NodeId>> v;
    for (std::size_t i = 0; i < k; ++i) v.push_back(b.lift(pad_aux(spec.grad_g[i], t), xw));

    std::vector<NodeId> weights = mu;
    for (NodeId l : lambda) weights.push_back(b.abs(l));
    NodeId mu0 = weights.empty() ? b.constant(1) : b.sub(b.constant(1), b.max_of(weights));

    std::vector<NodeId> z;
    NodeId neg_R = b.neg(R);
    for (std::size_t r = 0; r < n; ++r) {
        NodeId pre = b.sub(x[r], b.mul(mu0, v0[r]));
        for (std::size_t i = 0; i < k; ++i) pre = b.sub(pre, b.mul(mu[i], v[i][r]));
        for (std::size_t j = 0; j < m; ++j) pre = b.sub(pre, b.mul(lambda[j], A[j][r]));
        NodeId zr = b.max(neg_R, b.min(R, pre));
        z.push_back(zr);
        b.bind_aux(y[r], b.div(b.add(zr, R), two_R));
    }
    return b.finish_pseudogate(z);
}

ConvexProgramSpec lp_program(std::size_t n, std::size_t m, std::size_t k) {
    ConvexProgramSpec spec;
    spec.n = n;
    spec.m = m;
    spec.k = k;
    spec.s = n + k * n + k;
    const std::size_t arity = n + spec.s;
    auto c_at = [&](std::size_t r) { return n + r; };
    auto C_at = [&](std::size_t i, std::size_t r) { return n + n + i * n + r; };
    auto d_at = [&](std::size_t i) { return n + n + k * n + i; };
    {
        CircuitBuilder b(arity);
        std::vector<NodeId> outs;
        for (std::size_t r = 0; r < n; ++r) outs.push_back(b.neg(b.input(c_at(r))));
        spec.grad_f = as_pseudogate(b.build(outs));
    }
    for (std::size_t i = 0; i < k; ++i) {
        CircuitBuilder g(arity);
        std::vector<NodeId> terms;
        for (std::size_t r = 0; r < n; ++r) terms.push_back(g.mul(g.input(C_at(i, r)), g.input(r)));
        spec.g.push_back(g.build({g.sub(g.sum(terms), g.input(d_at(i)))}));
        CircuitBuilder dg(arity);
        std::vector<NodeId> outs;
        for (std::size_t r = 0; r < n; ++r) outs.push_back(dg.input(C_at(i, r)));
        spec.grad_g.push_back(as_pseudogate(dg.build(outs)));
    }
    return spec;
}

Pseudogate build_lp_opt_gate(std::size_t n, std::size_t m, std::size_t k) {
    return build_opt_gate(lp_program(n, m, k));
}

std::vector<NodeId> lift_lp_opt_gate(GateBuilder& b, const LPNodes& lp) {
    const std::size_t n = lp.c.size(), m = lp.A.size(), k = lp.C.size();
    if (lp.d.size() != k || lp.b.size() != m) throw InvalidWiring("LP node dimensions disagree");
    std::vector<NodeId> wiring = lp.c;
    for (const auto& row : lp.C) {
        if (row.size() != n) throw InvalidWiring("LP row length mismatch");
        wiring.insert(wiring.end(), row.begin(), row.end());
    }
    wiring.insert(wiring.end(), lp.d.begin(), lp.d.end());
    for (const auto& row : lp.A) {
        if (row.size() != n) throw InvalidWiring("LP row length mismatch");
        wiring.insert(wiring.end(), row.begin(), row.end());
    }
    wiring.insert(wiring.end(), lp.b.begin(), lp.b.end());
    wiring.push_back(lp.R);
    return b.lift(build_lp_opt_gate(n, m, k), wiring);
}

std::vector<NodeId> lift_opt_gate(GateBuilder& b, const ConvexProgramSpec& spec,
                                  std::span<const NodeId> w, const RMat& A, const RVec& bvec,
                                  const Rational& R) {
    if (w.size() != spec.s || A.size() != spec.m || bvec.size() != spec.m)
        throw InvalidWiring("OPT-gate parameter dimensions disagree with the spec");
    std::vector<NodeId> wiring(w.begin(), w.end());
    for (const auto& row : A) {
        if (row.size() != spec.n) throw InvalidWiring("equality row length mismatch");
        for (const auto& a : row) wiring.push_back(b.constant(a));
    }
    for (const auto& v : bvec) wiring.push_back(b.constant(v));
    wiring.push_back(b.constant(R));
    return b.lift(build_opt_gate(spec), wiring);
}

FixedPointProblem compile_cp(const ConvexProgramSpec& spec, const CPParams& params) {
    if (params.w.size() != spec.s) throw InvalidWiring("parameter vector w has the wrong length");
    GateBuilder b(spec.n);
    std::vector<NodeId> w;
    for (const auto& v : params.w) w.push_back(b.constant(v));
    auto z = lift_opt_gate(b, spec, w, params.A, params.b, params.R);
    z.resize(spec.n);
    return b.finish_problem(z, Box::uniform(spec.n, -params.R, params.R));
}

Pseudogate pdc_supergradient(const std::vector<PdcPiece>& pieces) {
    if (pieces.empty()) throw InvalidWiring("pdc_supergradient needs at least one piece");
    const std::size_t n = pieces[0].g.input_arity();
    for (const auto& p : pieces)
        if (p.g.input_arity() != n || p.g.output_arity() != 1 || p.grad.input_arity() != n ||
            p.grad.output_arity() != n)
            throw InvalidWiring("pdc pieces must share arity n with scalar g and n-vector gradient");
    const std::size_t M = pieces.size();
    GateBuilder b(n);
    std::vector<NodeId> x = b.inputs();
    std::vector<NodeId> gv;
    std::vector<std::vector<NodeId>> grads;
    for (const auto& p : pieces) {
        gv.push_back(b.inline_circuit(p.g, x)[0]);
        grads.push_back(b.inline_circuit(p.grad, x));
    }
    LPNodes lp;
    NodeId zero = b.constant(0), one = b.constant(1), minus_one = b.constant(-1);
    for (std::size_t j = 0; j < M; ++j) lp.c.push_back(b.neg(gv[j]));
    lp.A.push_back(std::vector<NodeId>(M, one));
    lp.b.push_back(one);
    for (std::size_t j = 0; j < M; ++j) {
        std::vector<NodeId> row(M, zero);
        row[j] = minus_one;
        lp.C.push_back(row);
        lp.d.push_back(zero);
    }
    lp.R = one;
    std::vector<NodeId> v = lift_lp_opt_gate(b, lp);
    std::vector<NodeId> out;
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<NodeId> terms;
        for (std::size_t j = 0; j < M; ++j) terms.push_back(b.mul(v[j], grads[j][r]));
        out.push_back(b.sum(terms));
    }
    return b.finish_pseudogate(out);
}

std::optional<AffineForm> affine_form(const Circuit& c, std::size_t output) {
    const std::size_t n = c.input_arity();
    const auto& nodes = c.nodes();
    std::vector<std::optional<AffineForm>> f(nodes.size());
    auto is_const = [&](const AffineForm& a) {
        return std::all_of(a.coef.begin(), a.coef.end(), [](const Rational& q) { return q == 0; });
    };
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& nd = nodes[i];
        switch (nd.op) {
            case Op::Const: f[i] = AffineForm{RVec(n), c.constant(nd)}; break;
            case Op::Input: {
                AffineForm a{RVec(n), 0};
                a.coef[nd.index] = 1;
                f[i] = a;
                break;
            }
            default: {
                const auto& L = f[nd.lhs];
                const auto& Rr = f[nd.rhs];
                if (!L || !Rr) break;
                if (nd.op == Op::Add || nd.op == Op::Sub) {
                    AffineForm a = *L;
                    Rational sg = nd.op == Op::Add ? 1 : -1;
                    for (std::size_t j = 0; j < n; ++j) a.coef[j] += sg * Rr->coef[j];
                    a.offset += sg * Rr->offset;
                    f[i] = a;
                } else if (nd.op == Op::Mul) {
                    const AffineForm* k = is_const(*L) ? &*L : is_const(*Rr) ? &*Rr : nullptr;
                    if (!k) break;
                    const AffineForm& other = k == &*L ? *Rr : *L;
                    AffineForm a = other;
                    for (auto& q : a.coef) q *= k->offset;
                    a.offset *= k->offset;
                    f[i] = a;
                } else if (nd.op == Op::Div) {
                    if (!is_const(*Rr) || Rr->offset == 0) break;
                    AffineForm a = *L;
                    for (auto& q : a.coef) q /= Rr->offset;
                    a.offset /= Rr->offset;
                    f[i] = a;
                } else if (is_const(*L) && is_const(*Rr)) {
                    Rational v = nd.op == Op::Max ? std::max(L->offset, Rr->offset)
                                                  : std::min(L->offset, Rr->offset);
                    f[i] = AffineForm{RVec(n), v};
                }
            }
        }
    }
    return f[c.outputs().at(output)];
}

}  // namespace fpf
