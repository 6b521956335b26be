#include <gtest/gtest.h>

#include <cmath>

#include "hgrl/errors.hpp"
#include "hgrl/fixtures.hpp"
#include "hgrl/mdp_solver.hpp"
#include "oracles.hpp"

using namespace hgrl;
using namespace hgrl::testing;

namespace {

// s0 --b0 (r=1)--> s1, s0 --b1 (r=0)--> s0, s1 --b0 (r=0)--> s0.
FiniteMdp two_state() {
    FiniteMdp m(2, 2);
    m.rows[0][0] = std::vector<Transition>{{1, 1.0, 1.0}};
    m.rows[0][1] = std::vector<Transition>{{0, 0.0, 1.0}};
    m.rows[1][0] = std::vector<Transition>{{0, 0.0, 1.0}};
    return m;
}

}  // namespace

TEST(FiniteMdp, ValidateRejectsBadRows) {
    FiniteMdp m(1, 1);
    m.rows[0][0] = std::vector<Transition>{{1, 0.0, 1.0}};
    EXPECT_THROW(m.validate(), InvalidModelError);
    m.rows[0][0] = std::vector<Transition>{{0, 0.0, 0.5}};
    EXPECT_THROW(m.validate(), InvalidModelError);
    m.rows[0][0] = std::vector<Transition>{{0, NAN, 1.0}};
    EXPECT_THROW(m.validate(), InvalidModelError);
    m.rows[0][0] = std::vector<Transition>{{0, 0.0, 1.5}, {0, 0.0, -0.5}};
    EXPECT_THROW(m.validate(), InvalidModelError);
    m.rows[0][0] = std::vector<Transition>{{0, 0.5, 1.0}};
    EXPECT_NO_THROW(m.validate());
    EXPECT_DOUBLE_EQ(m.mean_reward(0, 0), 0.5);
}

TEST(FiniteMdp, ActionSetsMayDifferByState) {
    auto m = two_state();
    EXPECT_EQ(m.actions_at(0), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(m.actions_at(1), (std::vector<std::size_t>{0}));
    EXPECT_FALSE(m.available(1, 1));
}

TEST(ValueIteration, SingleAbsorbingState) {
    FiniteMdp m(1, 1);
    m.rows[0][0] = std::vector<Transition>{{0, 1.0, 1.0}};
    auto r = value_iteration(m, 0.9);
    EXPECT_NEAR(r.v[0], 10.0, 1e-10);
    EXPECT_NEAR(r.q[0][0], 10.0, 1e-10);
}

TEST(ValueIteration, TwoStateCycle) {
    auto m = two_state();
    auto r = value_iteration(m, 0.5);
    // v0 = 1 + 0.5 v1, v1 = 0.5 v0  ⇒  v0 = 4/3
    EXPECT_NEAR(r.v[0], 4.0 / 3.0, 1e-11);
    EXPECT_NEAR(r.v[1], 2.0 / 3.0, 1e-11);
    EXPECT_TRUE(std::isnan(r.q[1][1]));
    EXPECT_EQ(r.policy.action(0), 0u);
    EXPECT_LE(r.residual, 1e-11);
}

TEST(ValueIteration, TerminalStatesHaveZeroValue) {
    FiniteMdp m(2, 1);
    m.rows[0][0] = std::vector<Transition>{{1, 1.0, 1.0}};
    auto r = value_iteration(m, 0.9);
    EXPECT_DOUBLE_EQ(r.v[1], 0.0);
    EXPECT_NEAR(r.v[0], 1.0, 1e-12);
    EXPECT_FALSE(r.policy.action(1));
}

TEST(ValueIteration, RejectsBadArguments) {
    auto m = two_state();
    EXPECT_THROW(value_iteration(m, 1.0), InvalidModelError);
    EXPECT_THROW(value_iteration(m, 0.5, 0.0), InvalidModelError);
    EXPECT_THROW(value_iteration(m, 0.99, 1e-12, 3), SizeLimitError);
}

TEST(ValueIteration, MatchesDenseOracle) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto m = random_mdp(seed, 6, 3);
        auto r = value_iteration(m, 0.9, 1e-12);
        // oracle: v = max_b (r + γ P v) via elimination on the greedy policy
        std::vector<std::vector<double>> p(6, std::vector<double>(6, 0.0));
        std::vector<double> rew(6, 0.0);
        for (std::size_t s = 0; s < 6; ++s) {
            const auto b = *r.policy.action(s);
            for (const auto& t : *m.rows[s][b]) {
                p[s][t.next] += t.probability;
                rew[s] += t.probability * t.reward;
            }
        }
        auto v = regional_oracle(p, rew, 0.9);
        for (std::size_t s = 0; s < 6; ++s) EXPECT_NEAR(r.v[s], v[s], 1e-10);
    }
}

TEST(PolicyEvaluation, AgreesWithValueIterationOnTheGreedyPolicy) {
    auto m = random_mdp(17, 8, 3);
    auto vi = value_iteration(m, 0.8, 1e-12);
    auto pe = policy_evaluation(m, vi.policy, 0.8, 1e-12);
    for (std::size_t s = 0; s < 8; ++s) {
        EXPECT_NEAR(pe.v[s], vi.v[s], 2e-12);
        for (std::size_t b = 0; b < 3; ++b) EXPECT_NEAR(pe.q[s][b], vi.q[s][b], 2e-12);
    }
    EXPECT_LE(bellman_residual(m, pe.q, 0.8, &vi.policy), 1e-12);
}

TEST(PolicyEvaluation, UniformPolicyOnSymmetricMdp) {
    FiniteMdp m(1, 2);
    m.rows[0][0] = std::vector<Transition>{{0, 1.0, 1.0}};
    m.rows[0][1] = std::vector<Transition>{{0, 0.0, 1.0}};
    AbstractPolicy u{{{0.5, 0.5}}};
    auto r = policy_evaluation(m, u, 0.5);
    EXPECT_NEAR(r.v[0], 1.0, 1e-12);
    EXPECT_NEAR(r.q[0][0], 1.5, 1e-12);
    EXPECT_NEAR(r.q[0][1], 0.5, 1e-12);
}

TEST(AbstractPolicy, ValidationAndPointMasses) {
    auto m = two_state();
    AbstractPolicy bad{{{0.5, 0.5}, {0.0, 1.0}}};
    EXPECT_THROW(bad.validate(m), InvalidModelError);
    AbstractPolicy unnormalized{{{0.5, 0.4}, {1.0, 0.0}}};
    EXPECT_THROW(unnormalized.validate(m), InvalidModelError);
    auto pm = AbstractPolicy::point_masses(m, {1, 0});
    EXPECT_NO_THROW(pm.validate(m));
    EXPECT_TRUE(pm.deterministic());
    EXPECT_EQ(pm.action(0), 1u);
    AbstractPolicy mixed{{{0.5, 0.5}, {1.0, 0.0}}};
    EXPECT_FALSE(mixed.deterministic());
    EXPECT_FALSE(mixed.action(0));
}

TEST(BellmanResidual, ZeroAtTheFixedPoint) {
    auto m = two_state();
    std::vector<std::vector<double>> q{{4.0 / 3.0, 2.0 / 3.0}, {2.0 / 3.0, NAN}};
    EXPECT_NEAR(bellman_residual(m, q, 0.5), 0.0, 1e-15);
    q[0][0] += 0.1;
    EXPECT_NEAR(bellman_residual(m, q, 0.5), 0.1, 1e-12);
}

TEST(RegionalSystem, MatchesElimination) {
    std::vector<std::vector<double>> p{{0.0, 1.0, 0.0}, {0.0, 0.5, 0.5}, {1.0, 0.0, 0.0}};
    std::vector<double> r{0.0, 0.25, 1.0};
    auto sol = solve_regional_system(p, r, 0.7);
    auto oracle = regional_oracle(p, r, 0.7);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(sol.q[i], oracle[i], 1e-12);
    EXPECT_LT(sol.residual, 1e-12);
    EXPECT_FALSE(sol.deltas);
}

TEST(RegionalSystem, ReportsDeltasAgainstAClosedForm) {
    std::vector<std::vector<double>> p{{1.0}};
    auto sol = solve_regional_system(p, {1.0}, 0.5, std::vector<double>{1.5});
    ASSERT_TRUE(sol.deltas);
    EXPECT_NEAR((*sol.deltas)[0], 0.5, 1e-12);
}

TEST(RegionalSystem, RejectsMalformedInput) {
    EXPECT_THROW(solve_regional_system({{0.5, 0.5}}, {0.0, 0.0}, 0.5), InvalidModelError);
    EXPECT_THROW(solve_regional_system({{0.5}}, {0.0}, 0.5), InvalidModelError);
    EXPECT_THROW(solve_regional_system({{1.5, -0.5}, {0.0, 1.0}}, {0.0, 0.0}, 0.5), InvalidModelError);
    EXPECT_THROW(solve_regional_system({{1.0}}, {0.0}, 0.5, std::vector<double>{1.0, 2.0}), InvalidModelError);
}

TEST(RegionalSystem, CaseOneAtHalfDiscount) {
    auto chain = build_region_chain(1, 0.5);
    auto sol = solve_regional_system(chain.p_double(), chain.r_double(), 0.5, chain.closed_form);
    auto oracle = regional_oracle(chain.p_double(), chain.r_double(), 0.5);
    for (std::size_t i = 0; i < oracle.size(); ++i) EXPECT_NEAR(sol.q[i], oracle[i], 1e-12);
    EXPECT_LT(sol.residual, 1e-10);
}
