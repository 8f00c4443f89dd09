#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace fpf;
using namespace fixtures;

TEST(Pseudogate, HeavisideAuxSets) {
    Pseudogate h = heaviside();
    EXPECT_EQ(h.aux, 1u);
    auto neg = fixed_aux_solutions_1d(h, -0.25, 32, 0.0);
    ASSERT_EQ(neg.size(), 1u);
    EXPECT_EQ(neg[0].lo, 0.0);
    EXPECT_EQ(neg[0].hi, 0.0);
    auto pos = fixed_aux_solutions_1d(h, 0.25, 32, 0.0);
    ASSERT_EQ(pos.size(), 1u);
    EXPECT_EQ(pos[0].lo, 1.0);
    auto zero = fixed_aux_solutions_1d(h, 0.0, 32, 0.0);
    ASSERT_EQ(zero.size(), 1u);
    EXPECT_EQ(zero[0].lo, 0.0);
    EXPECT_EQ(zero[0].hi, 1.0);
}

TEST(Pseudogate, PadAuxAddsPassThroughSlots) {
    Pseudogate p = pad_aux(heaviside(), 3);
    EXPECT_EQ(p.aux, 3u);
    EXPECT_EQ(p.body.input_arity(), 4u);
    auto out = evaluate(p.body, std::vector<double>{0.5, 0.0, 0.25, 2.0});
    EXPECT_EQ(out[2], 0.25);
    EXPECT_EQ(out[3], 1.0);
    EXPECT_THROW(pad_aux(p, 1), InvalidWiring);
}

TEST(Pseudogate, LiftRegistersAux) {
    GateBuilder b(1);
    auto out = b.lift(heaviside(), std::vector<NodeId>{b.input(0)});
    EXPECT_EQ(out.size(), 1u);
    EXPECT_EQ(b.ledger().size(), 1u);
    FixedPointProblem p = b.finish_problem(out, Box::uniform(1, -1, 1));
    EXPECT_EQ(p.dim(), 2u);
    EXPECT_EQ(p.primary, 1u);
}

TEST(Pseudogate, UnboundAuxIsRejected) {
    GateBuilder b(1);
    b.reserve_aux();
    EXPECT_THROW(b.finish_pseudogate({b.input(0)}), InvalidWiring);
}

TEST(OptGate, AuxAccounting) {
    ConvexProgramSpec lp = lp_program(3, 1, 2);
    // n + k + m with no gradient aux
    EXPECT_EQ(opt_gate_aux_count(lp), 3u + 2u + 1u);
    EXPECT_EQ(build_opt_gate(lp).aux, 6u);
    EXPECT_EQ(opt_gate_param_count(lp), lp.s + 3u + 1u + 1u);
}

TEST(OptGate, MissingGradientIsRejected) {
    ConvexProgramSpec s = lp_program(2, 0, 1);
    s.grad_f.reset();
    EXPECT_THROW(build_opt_gate(s), InvalidWiring);
}

TEST(OptGate, SolvesTinyLP) {
    // maximize x1 + 2 x2 s.t. x1 + x2 = 1, x in [-10, 10]^2, x >= 0 -> (0, 1)
    LPInstance lp{{1, 2}, {{1, 1}}, {1}, {{-1, 0}, {0, -1}}, {0, 0}, 10};
    auto opt = exact_lp_oracle(lp);
    ASSERT_TRUE(opt.optimal());
    EXPECT_EQ(opt.value, 2);
    CPInstance c = lp_instance(lp);
    auto rep = multistart(compile_cp(c.spec, c.params), SolverConfig{});
    ASSERT_TRUE(rep.converged);
    EXPECT_NEAR(rep.point[0], 0.0, 1e-7);
    EXPECT_NEAR(rep.point[1], 1.0, 1e-7);
    auto v = check_cp(c.spec, c.params, std::span(rep.point).first(2), 1e-6);
    EXPECT_TRUE(v.pass);
}

TEST(LPOracle, KnownOptimumAndInfeasibility) {
    LPInstance lp{{3, 1}, {}, {}, {{1, 1}, {1, -1}}, {4, 2}, 10};
    auto r = exact_lp_oracle(lp);
    ASSERT_TRUE(r.optimal());
    EXPECT_EQ(r.value, 10);
    EXPECT_EQ(r.x[0], 3);
    EXPECT_EQ(r.x[1], 1);
    LPInstance bad{{1}, {}, {}, {{1}, {-1}}, {0, -1}, 10};
    EXPECT_FALSE(exact_lp_oracle(bad).optimal());
    LPInstance big{RVec(13, 1), {}, {}, {}, {}, 1};
    EXPECT_THROW(exact_lp_oracle(big), SizeLimit);
}

TEST(Slater, Verdicts) {
    CircuitBuilder b(2);
    auto x = b.inputs();
    Circuit g = b.build({b.sub(b.add(x[0], x[1]), b.constant(1))});
    EXPECT_TRUE(check_explicit_slater({}, {}, {g}, 10, 2).holds());
    // x1 + x2 <= 1 and -(x1 + x2) <= -1 leaves no strict point
    CircuitBuilder b2(2);
    auto y = b2.inputs();
    Circuit h = b2.build({b2.sub(b2.constant(1), b2.add(y[0], y[1]))});
    EXPECT_FALSE(check_explicit_slater({}, {}, {g, h}, 10, 2).holds());
    // dependent equality rows
    auto v = check_explicit_slater({{1, 1}, {2, 2}}, {1, 2}, {}, 10, 2);
    EXPECT_EQ(v.kind, SlaterVerdict::Kind::FailsLinearIndependence);
}

TEST(AffineForm, RecognizesAffineAndRejectsProducts) {
    CircuitBuilder b(2);
    auto x = b.inputs();
    Circuit a = b.build({b.add(b.scale(3, x[0]), b.sub(b.constant(2), x[1]))});
    auto f = affine_form(a);
    ASSERT_TRUE(f);
    EXPECT_EQ(f->coef, (RVec{3, -1}));
    EXPECT_EQ(f->offset, 2);
    CircuitBuilder c(2);
    auto y = c.inputs();
    EXPECT_FALSE(affine_form(c.build({c.mul(y[0], y[1])})));
}

TEST(PdcSupergradient, PicksActivePieceGradient) {
    // min(x, 1 - x) on [0, 1]: gradient 1 left of 1/2, -1 right of it
    auto piece = [](Rational slope, Rational off) {
        CircuitBuilder g(1);
        Circuit val = g.build({g.add(g.scale(slope, g.input(0)), g.constant(off))});
        CircuitBuilder d(1);
        Circuit grad = d.build({d.constant(slope)});
        return PdcPiece{val, grad};
    };
    Pseudogate p = pdc_supergradient({piece(1, 0), piece(-1, 1)});
    EXPECT_EQ(p.n_in, 1u);
    EXPECT_EQ(p.aux, 5u);
    for (double x : {0.2, 0.8}) {
        // Primary coordinate = gate output at the pinned input, so its fixed value is the supergradient.
        GateBuilder pin(1);
        auto g = pin.lift(p, std::vector<NodeId>{pin.constant(Rational(x))});
        auto rep = multistart(pin.finish_problem({g[0]}, Box::uniform(1, -1, 1)), SolverConfig{});
        ASSERT_TRUE(rep.converged);
        EXPECT_NEAR(rep.point[0], x < 0.5 ? 1.0 : -1.0, 1e-6);
    }
}

TEST(OptGateProperty, RandomLPsMatchOracle) {
    std::mt19937_64 rng(99);
    int converged = 0;
    for (int t = 0; t < 15; ++t) {
        RandomLP r = random_slater_lp(rng);
        CPInstance c = lp_instance(r.lp);
        auto rep = multistart(compile_cp(c.spec, c.params), SolverConfig{});
        if (!rep.converged) continue;
        ++converged;
        auto opt = exact_lp_oracle(r.lp);
        double val = 0;
        for (std::size_t j = 0; j < r.n; ++j) val += to_double(r.lp.c[j]) * rep.point[j];
        EXPECT_NEAR(val, to_double(opt.value), 1e-6);
        EXPECT_TRUE(check_cp(c.spec, c.params, std::span(rep.point).first(r.n), 1e-6).pass);
    }
    EXPECT_GE(converged, 12);
}
