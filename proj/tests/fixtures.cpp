#include "fixtures.hpp"

#include <algorithm>
#include <cmath>

namespace fixtures {

GameNF matching_pennies() { return GameNF{{2, 2}, {{1, -1, -1, 1}, {-1, 1, 1, -1}}}; }

GameNF rock_paper_scissors() {
    RVec a{0, -1, 1, 1, 0, -1, -1, 1, 0};
    RVec b;
    for (const auto& v : a) b.push_back(-v);
    return GameNF{{3, 3}, {a, b}};
}

GameNF random_game(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int range) {
    std::uniform_int_distribution<int> d(-range, range);
    GameNF g{{rows, cols}, {RVec(rows * cols), RVec(rows * cols)}};
    for (auto& t : g.payoffs)
        for (auto& v : t) v = d(rng);
    return g;
}

Rational random_rational(std::mt19937_64& rng, int num, int den) {
    std::uniform_int_distribution<int> p(-num, num), q(1, den);
    Rational r(p(rng), q(rng));
    r.canonicalize();
    return r;
}

Circuit linear_valuation(std::size_t n, const RVec& w, const RVec& add) {
    CircuitBuilder b(n);
    std::vector<NodeId> out;
    for (std::size_t j = 0; j < n; ++j) out.push_back(b.add(b.scale(w[j], b.input(j)), b.constant(add[j])));
    return b.build(out);
}

CakeSpec cake_sym2() { return {2, {linear_valuation(2, {1, 1}, {0, 0}), linear_valuation(2, {1, 1}, {0, 0})}}; }

CakeSpec cake_sym3() {
    CakeSpec c{3, {}};
    for (int w = 1; w <= 3; ++w) c.u.push_back(linear_valuation(3, RVec(3, w), RVec(3, 0)));
    return c;
}

CakeSpec cake_separated() { return {2, {linear_valuation(2, {1, 1}, {1, 0}), linear_valuation(2, {1, 1}, {0, 1})}}; }

CakeSpec random_linear_cake(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> w(1, 9);
    CakeSpec c{n, {}};
    for (std::size_t i = 0; i < n; ++i) {
        RVec a(n);
        for (auto& v : a) v = w(rng);
        c.u.push_back(linear_valuation(n, a, RVec(n, 0)));
    }
    return c;
}

KKMSpec kkm_target(const RVec& c) {
    const std::size_t n = c.size();
    CircuitBuilder b(n);
    std::vector<NodeId> out;
    for (std::size_t j = 0; j < n; ++j) out.push_back(b.max(b.constant(0), b.sub(b.constant(c[j]), b.input(j))));
    return {n, b.build(out)};
}

KKMSpec kkm_brouwer(const RMat& M, const RVec& v) {
    const std::size_t n = v.size();
    CircuitBuilder b(n);
    auto x = b.inputs();
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < n; ++i) {
        NodeId g = b.add(b.dot(M[i], x), b.constant(v[i]));
        out.push_back(b.max(b.constant(0), b.sub(g, x[i])));
    }
    return {n, b.build(out)};
}

BapatSpec bapat_constant(const RMat& rows) {
    const std::size_t n = rows.size();
    BapatSpec s{n, {}};
    for (std::size_t i = 0; i < n; ++i) {
        CircuitBuilder b(n);
        std::vector<NodeId> out;
        for (const auto& v : rows[i]) out.push_back(b.constant(v));
        s.f.push_back(b.build(out));
    }
    return s;
}

Consumer linear_consumer(const RVec& a, const RVec& endowment, const Rational& lo) {
    const std::size_t l = a.size();
    CircuitBuilder ub(l);
    Circuit u = ub.build({ub.dot(a, ub.inputs())});
    CircuitBuilder gb(l);
    std::vector<NodeId> g;
    for (const auto& v : a) g.push_back(gb.constant(v));
    Consumer c(u, as_pseudogate(gb.build(g)));
    for (std::size_t h = 0; h < l; ++h) {
        CircuitBuilder hb(l);
        c.X.h.push_back(hb.build({hb.sub(hb.constant(lo), hb.input(h))}));
        CircuitBuilder db(l);
        std::vector<NodeId> d(l, db.constant(0));
        d[h] = db.constant(-1);
        c.X.grad_h.push_back(as_pseudogate(db.build(d)));
    }
    c.endowment = endowment;
    c.lower = RVec(l, lo);
    RVec w;
    for (const auto& v : endowment) w.push_back((lo + v) / 2);
    c.witness = w;
    return c;
}

ADMarketSpec autarky() {
    ADMarketSpec m;
    m.goods = 2;
    m.consumers.push_back(linear_consumer({1, 1}, {1, 1}, 0));
    return m;
}

ADMarketSpec exchange_2x2() {
    ADMarketSpec m;
    m.goods = 2;
    m.consumers.push_back(linear_consumer({1, 2}, {1, 0}, Rational(-1, 10)));
    m.consumers.push_back(linear_consumer({2, 1}, {0, 1}, Rational(-1, 10)));
    return m;
}

HZSpec hz_opposed() { return {2, {{1, 0}, {0, 1}}}; }

HZSpec random_hz(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> d(0, 9);
    HZSpec h{n, RMat(n, RVec(n))};
    for (auto& row : h.u)
        for (auto& v : row) v = d(rng);
    return h;
}

RandomLP random_slater_lp(std::mt19937_64& rng, const Rational& R) {
    std::uniform_int_distribution<int> dn(1, 4), dm(0, 2), dk(0, 4);
    for (;;) {
        RandomLP r;
        r.n = dn(rng);
        r.m = std::min<std::size_t>(dm(rng), r.n - 1);
        r.k = dk(rng);
        LPInstance& lp = r.lp;
        lp.R = R;
        for (std::size_t i = 0; i < r.n; ++i) lp.c.push_back(random_rational(rng));
        lp.A.assign(r.m, RVec(r.n));
        lp.b.assign(r.m, 0);
        for (auto& row : lp.A)
            for (auto& a : row) a = random_rational(rng);
        for (auto& v : lp.b) v = random_rational(rng);
        lp.C.assign(r.k, RVec(r.n));
        lp.d.assign(r.k, 0);
        for (auto& row : lp.C)
            for (auto& a : row) a = random_rational(rng);
        for (auto& v : lp.d) v = random_rational(rng);
        std::vector<Circuit> g;
        for (std::size_t i = 0; i < r.k; ++i) {
            CircuitBuilder b(r.n);
            g.push_back(b.build({b.sub(b.dot(lp.C[i], b.inputs()), b.constant(lp.d[i]))}));
        }
        if (check_explicit_slater(lp.A, lp.b, g, lp.R, r.n).holds()) return r;
    }
}

CPInstance lp_instance(const LPInstance& lp) {
    CPInstance c;
    const std::size_t n = lp.c.size();
    c.spec = lp_program(n, lp.A.size(), lp.C.size());
    c.params.w = lp.c;
    for (const auto& row : lp.C) c.params.w.insert(c.params.w.end(), row.begin(), row.end());
    c.params.w.insert(c.params.w.end(), lp.d.begin(), lp.d.end());
    c.params.A = lp.A;
    c.params.b = lp.b;
    c.params.R = lp.R;
    return c;
}

namespace {

// Solves for the mixed strategy of the column player that makes the row player indifferent over `rows`.
std::optional<RVec> indifferent(const RVec& pay, std::size_t ncols, bool transpose, const std::vector<std::size_t>& own,
                                const std::vector<std::size_t>& other, std::size_t other_total) {
    // unknowns: probabilities on `other` plus the common value v
    const std::size_t k = other.size();
    RMat A;
    RVec b;
    for (std::size_t r : own) {
        RVec row(k + 1);
        for (std::size_t c = 0; c < k; ++c) row[c] = transpose ? pay[other[c] * ncols + r] : pay[r * ncols + other[c]];
        row[k] = -1;
        A.push_back(row);
        b.push_back(0);
    }
    RVec sum(k + 1, 1);
    sum[k] = 0;
    A.push_back(sum);
    b.push_back(1);
    AffineSolution sol;
    if (!solve_affine(A, b, k + 1, sol) || !sol.null_basis.empty()) return std::nullopt;
    RVec full(other_total, 0);
    for (std::size_t c = 0; c < k; ++c) {
        if (sol.particular[c] <= 0) return std::nullopt;
        full[other[c]] = sol.particular[c];
    }
    return full;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) s.push_back(i);
        out.push_back(s);
    }
    return out;
}

}  // namespace

std::vector<RVec> support_enumeration(const GameNF& g) {
    const std::size_t R = g.actions[0], C = g.actions[1];
    std::vector<RVec> out;
    for (const auto& S : subsets(R))
        for (const auto& T : subsets(C)) {
            if (S.size() != T.size()) continue;
            // column strategy y makes the row player indifferent on S, and vice versa
            auto y = indifferent(g.payoffs[0], C, false, S, T, C);
            auto x = indifferent(g.payoffs[1], C, true, T, S, R);
            if (!x || !y) continue;
            RVec prof = *x;
            prof.insert(prof.end(), y->begin(), y->end());
            bool ok = true;
            for (std::size_t i = 0; i < 2 && ok; ++i) {
                auto pay = pure_payoffs(g, i, prof);
                RVec xi(prof.begin() + static_cast<std::ptrdiff_t>(g.offset(i)),
                        prof.begin() + static_cast<std::ptrdiff_t>(g.offset(i) + g.actions[i]));
                Rational v = 0;
                for (std::size_t j = 0; j < pay.size(); ++j) v += xi[j] * pay[j];
                for (const auto& p : pay) ok = ok && p <= v;
            }
            if (ok) out.push_back(prof);
        }
    return out;
}

bool nondegenerate(const GameNF& g) {
    // No pure profile with a tied best response, and no mixed strategy of support k with more than k best replies.
    const std::size_t R = g.actions[0], C = g.actions[1];
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t r1 = 0; r1 < R; ++r1)
            for (std::size_t r2 = r1 + 1; r2 < R; ++r2)
                if (g.payoffs[0][r1 * C + c] == g.payoffs[0][r2 * C + c]) return false;
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c1 = 0; c1 < C; ++c1)
            for (std::size_t c2 = c1 + 1; c2 < C; ++c2)
                if (g.payoffs[1][r * C + c1] == g.payoffs[1][r * C + c2]) return false;
    return true;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace fixtures
