#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace fpf;
using namespace fixtures;

TEST(GameNF, FlatIndexing) {
    GameNF g{{2, 3}, {RVec(6), RVec(6)}};
    std::vector<std::size_t> prof{1, 2};
    EXPECT_EQ(g.flat(prof), 5u);
    EXPECT_EQ(g.unflat(4), (std::vector<std::size_t>{1, 1}));
    EXPECT_EQ(g.offset(1), 2u);
    EXPECT_EQ(g.strategy_dim(), 5u);
}

TEST(GameNF, ShapeErrors) {
    GameNF bad{{2, 2}, {RVec(4), RVec(3)}};
    EXPECT_THROW(bad.validate(), SchemaError);
    GameNF huge{{1000, 1001}, {RVec(1), RVec(1)}};
    EXPECT_THROW(huge.validate(), SizeLimit);
}

TEST(GameNF, PurePayoffsAgainstMixedProfile) {
    GameNF g = matching_pennies();
    RVec x{Rational(1, 4), Rational(3, 4), Rational(1, 2), Rational(1, 2)};
    auto p0 = pure_payoffs(g, 0, x);
    EXPECT_EQ(p0[0], 0);
    auto p1 = pure_payoffs(g, 1, x);
    EXPECT_EQ(p1[0], Rational(1, 2));
    EXPECT_EQ(p1[1], Rational(-1, 2));
}

TEST(Nash, MatchingPenniesUniform) {
    auto p = compile_nash(matching_pennies());
    EXPECT_EQ(p.primary, 4u);
    auto r = multistart(p, SolverConfig{});
    ASSERT_TRUE(r.converged);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(r.point[i], 0.5, 1e-6);
}

TEST(Nash, RockPaperScissorsUniform) {
    auto r = multistart(compile_nash(rock_paper_scissors()), SolverConfig{});
    ASSERT_TRUE(r.converged);
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(r.point[i], 1.0 / 3, 1e-6);
}

TEST(Nash, PureEquilibriumOfDominanceGame) {
    // prisoner's dilemma: defect (action 1) dominates
    GameNF g{{2, 2}, {{3, 0, 5, 1}, {3, 5, 0, 1}}};
    auto r = multistart(compile_nash(g), SolverConfig{});
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(r.point[1], 1.0, 1e-6);
    EXPECT_NEAR(r.point[3], 1.0, 1e-6);
}

TEST(Nash, ThreePlayerGameConvergesToEquilibrium) {
    std::mt19937_64 rng(12);
    GameNF g{{2, 2, 2}, {RVec(8), RVec(8), RVec(8)}};
    std::uniform_int_distribution<int> d(-5, 5);
    for (auto& t : g.payoffs)
        for (auto& v : t) v = d(rng);
    auto r = multistart(compile_nash(g), SolverConfig{});
    ASSERT_TRUE(r.converged);
    EXPECT_TRUE(check_nash(g, std::span(r.point).first(6), 1e-6).pass);
}

TEST(SupportEnumeration, OracleFindsMixedEquilibrium) {
    auto eq = support_enumeration(matching_pennies());
    ASSERT_EQ(eq.size(), 1u);
    EXPECT_EQ(eq[0], (RVec{Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)}));
    // battle of the sexes: two pure and one mixed
    GameNF bos{{2, 2}, {{2, 0, 0, 1}, {1, 0, 0, 2}}};
    EXPECT_EQ(support_enumeration(bos).size(), 3u);
}

TEST(Concave, MatchesNashOnPennies) {
    auto r = multistart(compile_concave(concave_from_nash(matching_pennies())), SolverConfig{});
    ASSERT_TRUE(r.converged);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(r.point[i], 0.5, 1e-6);
    EXPECT_TRUE(check_concave(concave_from_nash(matching_pennies()), std::span(r.point).first(4), 1e-6).pass);
}

TEST(Concave, SlaterViolationIsRejected) {
    ConcaveGameSpec g = concave_from_nash(matching_pennies());
    // x1 + x2 <= 0 together with x1 + x2 = 1 leaves nothing strictly feasible
    CircuitBuilder b(2);
    auto x = b.inputs();
    g.players[0].g.push_back(b.build({b.add(x[0], x[1])}));
    CircuitBuilder d(2);
    g.players[0].grad_g.push_back(as_pseudogate(d.build({d.constant(1), d.constant(1)})));
    EXPECT_THROW(compile_concave(g), SlaterViolation);
}

TEST(Stochastic, SingleStateMatchesNash) {
    StochasticGameSpec s;
    s.actions = {2, 2};
    s.payoffs = {matching_pennies().payoffs};
    s.transitions = {std::vector<RVec>(4, RVec{1})};
    auto r = multistart(compile_stochastic(s), SolverConfig{});
    ASSERT_TRUE(r.converged);
    for (int i = 2; i < 6; ++i) EXPECT_NEAR(r.point[i], 0.5, 1e-6);
    EXPECT_NEAR(r.point[0], 0.0, 1e-6);
    EXPECT_TRUE(check_stochastic_stationary(s, std::span(r.point).first(2), std::span(r.point).subspan(2, 4), 1e-5).pass);
}

TEST(Stochastic, GeometricSeriesValue) {
    // one state, reward 2, lambda 1/4: v = sum lambda (1 - lambda)^t 2 = 2
    StochasticGameSpec s;
    s.actions = {1};
    s.payoffs = {{{2}}};
    s.transitions = {{{1}}};
    s.lambda = Rational(1, 4);
    auto v = stationary_values(s, std::vector<double>{1.0});
    EXPECT_NEAR(v[0], 2.0, 1e-12);
    auto r = multistart(compile_stochastic(s), SolverConfig{});
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(r.point[0], 2.0, 1e-9);
}

TEST(Stochastic, ValidationErrors) {
    StochasticGameSpec s;
    s.actions = {1};
    s.payoffs = {{{1}}};
    s.transitions = {{{Rational(1, 2)}}};
    s.lambda = 0;
    EXPECT_THROW(s.validate(), SchemaError);
}

TEST(EpsProper, EtaArithmetic) {
    EXPECT_EQ(eps_proper_eta(2, Rational(1, 2)), Rational(1, 8));
    EXPECT_EQ(eps_proper_eta(4, Rational(1, 3)), Rational(1, 324));
}

TEST(EpsProper, FixedPointIsEpsProper) {
    GameNF g{{2}, {{1, 0}}};
    auto r = multistart(compile_eps_proper(g, Rational(1, 2)), SolverConfig{});
    ASSERT_TRUE(r.converged);
    EXPECT_TRUE(check_eps_proper(g, std::span(r.point).first(2), Rational(1, 2), 1e-6).pass);
    // eps-proper points are not unique here
    std::vector<double> w{7.0 / 8, 1.0 / 8};
    EXPECT_TRUE(check_eps_proper(g, w, Rational(1, 2), 1e-6).pass);
}

TEST(EpsProper, TwoPlayerGame) {
    GameNF g{{2, 2}, {{2, 0, 0, 1}, {1, 0, 0, 2}}};
    auto r = multistart(compile_eps_proper(g, Rational(1, 10)), SolverConfig{});
    ASSERT_TRUE(r.converged);
    EXPECT_TRUE(check_eps_proper(g, std::span(r.point).first(4), Rational(1, 10), 1e-6).pass);
}

TEST(CCC, EmptyAndNonEmptyConditionalSets) {
    // x in [-1, 1]; if x > 0 then x <= 1/2 must hold
    CCCSystem s;
    s.n = 1;
    CircuitBuilder f(1), g(1), d(1);
    ConditionalConstraint c{f.build({f.input(0)}), g.build({g.sub(g.input(0), g.constant(Rational(1, 2)))}),
                            as_pseudogate(d.build({d.constant(1)}))};
    s.constraints.push_back(c);
    auto r = multistart(compile_ccc(s), SolverConfig{});
    ASSERT_TRUE(r.converged);
    EXPECT_LE(r.point[0], 0.5 + 1e-6);
    EXPECT_TRUE(check_ccc(s, std::span(r.point).first(1), 1e-6).pass);
    EXPECT_FALSE(check_ccc(s, std::vector<double>{0.9}, 1e-6).pass);
}
