#include "fpf/cake.hpp"

#include <random>

namespace fpf {

namespace {

void check_map(const Circuit& c, std::size_t n, const std::string& what) {
    if (c.input_arity() != n || c.output_arity() != n)
        throw SchemaError(what + ": circuit must map n inputs to n outputs");
}

std::vector<double> random_simplex_point(std::mt19937_64& rng, std::size_t n) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> x(n);
    double s = 0;
    for (double& v : x) s += (v = e(rng));
    for (double& v : x) v /= s;
    return x;
}

}  // namespace

void CakeSpec::validate() const {
    if (n < 1) throw SchemaError("cake needs at least one agent");
    if (u.size() != n) throw SchemaError("cake: one valuation circuit per agent required");
    for (std::size_t i = 0; i < n; ++i) check_map(u[i], n, "valuation " + std::to_string(i));
}

std::optional<std::vector<double>> hungriness_violation(const CakeSpec& c, std::size_t samples,
                                                        std::uint64_t seed) {
    c.validate();
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        auto x = random_simplex_point(rng, c.n);
        // Also probe faces, where empty pieces exist.
        if (s % 2 == 1 && c.n > 1) x[s / 2 % c.n] = 0;
        double sum = 0;
        for (double v : x) sum += v;
        for (double& v : x) v /= sum;
        for (std::size_t i = 0; i < c.n; ++i) {
            auto val = evaluate(c.u[i], x);
            double best = val[0];
            for (double v : val) {
                if (v < 0) return x;
                best = std::max(best, v);
            }
            bool nonempty_best = false;
            for (std::size_t j = 0; j < c.n; ++j)
                if (val[j] == best && x[j] > 0) nonempty_best = true;
            if (!nonempty_best) return x;
        }
    }
    return std::nullopt;
}

void KKMSpec::validate() const {
    if (n < 1) throw SchemaError("kkm needs n >= 1");
    check_map(F, n, "F");
}

void BapatSpec::validate() const {
    if (n < 1) throw SchemaError("bapat needs n >= 1");
    if (f.size() != n) throw SchemaError("bapat: one map per agent required");
    for (std::size_t i = 0; i < n; ++i) check_map(f[i], n, "map " + std::to_string(i));
}

std::vector<NodeId> floor_projection(CircuitBuilder& b, std::span<const NodeId> x, const Rational& floor,
                                     bool clamp_t) {
    const std::size_t n = x.size();
    // Odd-even transposition sort, descending.
    std::vector<NodeId> s(x.begin(), x.end());
    for (std::size_t round = 0; round < n; ++round)
        for (std::size_t j = round % 2; j + 1 < n; j += 2) {
            NodeId hi = b.max(s[j], s[j + 1]), lo = b.min(s[j], s[j + 1]);
            s[j] = hi;
            s[j + 1] = lo;
        }
    // With the top k above the floor: S_k - k t + (n - k) floor = 1.
    std::vector<NodeId> cands;
    if (clamp_t) cands.push_back(b.constant(0));
    NodeId prefix = s[0];
    for (std::size_t k = 1; k <= n; ++k) {
        if (k > 1) prefix = b.add(prefix, s[k - 1]);
        Rational shift = 1 - Rational(static_cast<long>(n - k)) * floor;
        cands.push_back(b.scale(Rational(1, static_cast<long>(k)), b.sub(prefix, b.constant(shift))));
    }
    NodeId t = b.max_of(cands);
    NodeId fl = b.constant(floor);
    std::vector<NodeId> out;
    for (NodeId xi : x) out.push_back(b.max(b.sub(xi, t), fl));
    return out;
}

std::vector<NodeId> simplex_projection(CircuitBuilder& b, std::span<const NodeId> x) {
    return floor_projection(b, x, 0, false);
}

FixedPointProblem compile_cake(const CakeSpec& c) {
    c.validate();
    const std::size_t n = c.n;
    GateBuilder b(n);
    auto raw = b.inputs();
    // Points off the simplex are first projected onto it; fixed points lie on the simplex.
    auto x = simplex_projection(b, raw);
    NodeId zero = b.constant(0), one = b.constant(1), minus_one = b.constant(-1);

    std::vector<std::vector<NodeId>> cap(n);
    for (std::size_t i = 0; i < n; ++i) {
        LPNodes lp;
        lp.c = b.inline_circuit(c.u[i], x);
        lp.A.push_back(std::vector<NodeId>(n, one));
        lp.b.push_back(one);
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<NodeId> row(n, zero);
            row[j] = minus_one;
            lp.C.push_back(row);
            lp.d.push_back(zero);
        }
        lp.R = one;
        for (NodeId z : lift_lp_opt_gate(b, lp)) cap[i].push_back(b.clamp01(z));
    }

    // Flow LP over z'_{ij}, flattened as i * n + j.
    const std::size_t N = n * n;
    const Rational slack(1, static_cast<long>(n * n * n));
    LPNodes flow;
    flow.c.assign(N, one);
    auto unit_row = [&](std::size_t idx, NodeId coef) {
        std::vector<NodeId> row(N, zero);
        row[idx] = coef;
        return row;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            flow.C.push_back(unit_row(i * n + j, one));
            flow.d.push_back(b.add(cap[i][j], b.constant(slack)));
        }
    for (std::size_t e = 0; e < N; ++e) {
        flow.C.push_back(unit_row(e, minus_one));
        flow.d.push_back(zero);
    }
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<NodeId> row(N, zero);
        for (std::size_t i = 0; i < n; ++i) row[i * n + j] = one;
        flow.C.push_back(row);
        flow.d.push_back(one);
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<NodeId> row(N, zero);
        for (std::size_t j = 0; j < n; ++j) row[i * n + j] = one;
        flow.C.push_back(row);
        flow.d.push_back(one);
    }
    flow.R = one;
    std::vector<NodeId> y;
    for (NodeId z : lift_lp_opt_gate(b, flow)) y.push_back(b.clamp01(z));

    std::vector<NodeId> r;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<NodeId> col;
        for (std::size_t i = 0; i < n; ++i) col.push_back(y[i * n + k]);
        r.push_back(b.max(zero, b.sub(one, b.sum(col))));
    }
    NodeId denom = b.add(one, b.sum(r));
    std::vector<NodeId> out;
    for (std::size_t j = 0; j < n; ++j) out.push_back(b.div(b.add(x[j], r[j]), denom));
    return b.finish_problem(out, Box::uniform(n, 0, 1));
}

Circuit kkm_nonnegative(const KKMSpec& spec) {
    spec.validate();
    CircuitBuilder b(spec.n);
    auto F = b.inline_circuit(spec.F, b.inputs());
    for (NodeId& f : F) f = b.max(b.constant(0), f);
    return b.build(F);
}

FixedPointProblem compile_kkm(const KKMSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n;
    GateBuilder b(n);
    auto raw = b.inputs();
    auto x = simplex_projection(b, raw);
    auto F = b.inline_circuit(spec.F, x);
    for (NodeId& f : F) f = b.max(b.constant(0), f);
    NodeId denom = b.add(b.constant(1), b.sum(F));
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(b.div(b.add(x[i], F[i]), denom));
    return b.finish_problem(out, Box::uniform(n, 0, 1));
}

std::vector<Circuit> bapat_preprocess(const BapatSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n;
    const Rational c(1, static_cast<long>(2 * n));
    std::vector<Circuit> g;
    for (std::size_t i = 0; i < n; ++i) {
        CircuitBuilder b(n);
        auto pi = floor_projection(b, b.inputs(), c, true);
        std::vector<NodeId> arg;
        for (NodeId p : pi) arg.push_back(b.scale(2, b.sub(p, b.constant(c))));
        auto f = b.inline_circuit(spec.f[i], arg);
        std::vector<NodeId> out;
        for (NodeId v : f) out.push_back(b.add(b.scale(Rational(1, 2), v), b.constant(c)));
        g.push_back(b.build(out));
    }
    return g;
}

CakeSpec bapat_to_cake(const BapatSpec& spec) {
    auto g = bapat_preprocess(spec);
    CakeSpec cake;
    cake.n = spec.n;
    for (std::size_t i = 0; i < spec.n; ++i) {
        CircuitBuilder b(spec.n);
        auto x = b.inputs();
        auto gi = b.inline_circuit(g[i], x);
        std::vector<NodeId> u;
        for (std::size_t j = 0; j < spec.n; ++j) u.push_back(b.max(b.constant(0), b.sub(x[j], gi[j])));
        cake.u.push_back(b.build(u));
    }
    return cake;
}

std::vector<double> bapat_recover(std::size_t n, std::span<const double> division) {
    std::vector<double> z;
    for (double x : division) z.push_back(2.0 * (x - 1.0 / (2.0 * static_cast<double>(n))));
    return z;
}

}  // namespace fpf
