#include <gtest/gtest.h>

#include <cmath>

#include "builders.hpp"
#include "hgrl/errors.hpp"
#include "hgrl/fixtures.hpp"
#include "hgrl/values.hpp"
#include "oracles.hpp"

using namespace hgrl;
using namespace hgrl::testing;

TEST(DiscountConfig, TailAndValidation) {
    DiscountConfig cfg{0.5, 3};
    EXPECT_DOUBLE_EQ(cfg.tail(), 0.25);
    EXPECT_THROW((DiscountConfig{1.0, 3}.validate()), InvalidModelError);
    EXPECT_THROW((DiscountConfig{-0.1, 3}.validate()), InvalidModelError);
    EXPECT_THROW((DiscountConfig{0.5, 0}.validate()), InvalidModelError);
    EXPECT_NO_THROW((DiscountConfig{0.0, 1}.validate()));
}

TEST(ValueInterval, Helpers) {
    ValueInterval v{1.0, 3.0};
    EXPECT_DOUBLE_EQ(v.midpoint(), 2.0);
    EXPECT_DOUBLE_EQ(v.width(), 2.0);
    EXPECT_TRUE(v.contains(3.0));
    EXPECT_FALSE(v.contains(3.1));
    EXPECT_TRUE(v.contains(3.1, 0.2));
}

TEST(Values, ZeroRewardGivesZeroToTail) {
    auto p = constant_reward(Rational(0));
    DiscountConfig cfg{0.9, 20};
    auto v = v_value(p, HistoryPolicy::uniform(1), History{}, cfg);
    EXPECT_DOUBLE_EQ(v.lower, 0.0);
    EXPECT_DOUBLE_EQ(v.upper, cfg.tail());
}

TEST(Values, UnitRewardIntervalContainsTheGeometricSum) {
    auto p = constant_reward(Rational(1));
    DiscountConfig cfg{0.9, 30};
    auto v = v_value(p, HistoryPolicy::uniform(1), History{}, cfg);
    EXPECT_NEAR(v.lower, (1.0 - std::pow(0.9, 30)) / 0.1, 1e-12);
    EXPECT_TRUE(v.contains(10.0, 1e-12));
    EXPECT_NEAR(v.upper, 10.0, 1e-12);
}

TEST(Values, BanditUnderUniformPolicy) {
    auto p = bandit();
    DiscountConfig cfg{0.5, 40};
    auto u = HistoryPolicy::uniform(2);
    EXPECT_NEAR(q_value(p, u, History{}, 0, cfg).midpoint(), 1.0 + 0.5 * 1.0, 1e-10);
    EXPECT_NEAR(q_value(p, u, History{}, 1, cfg).midpoint(), 0.0 + 0.5 * 1.0, 1e-10);
    EXPECT_NEAR(v_value(p, u, History{}, cfg).midpoint(), 1.0, 1e-10);
}

TEST(Values, OptimalBanditPicksTheRewardingArm) {
    auto p = bandit();
    DiscountConfig cfg{0.5, 40};
    auto hs = enumerate_histories(p, 2);
    auto opt = optimal_q(p, hs, cfg);
    const auto& row = opt.q.at(History{});
    EXPECT_NEAR(row[0].midpoint(), 2.0, 1e-10);
    EXPECT_NEAR(row[1].midpoint(), 1.0, 1e-10);
    EXPECT_EQ(opt.greedy(History{}), (ActionDistribution{1.0, 0.0}));
}

TEST(Values, VIsTheChosenActionValueForDeterministicPolicies) {
    auto rp = random_process({.seed = 3, .observations = 2, .actions = 3, .rewards = 2, .memory = 1});
    auto choice = [](const History& h) { return h.empty() ? Action(0) : Action((h.back().observation + 1) % 3); };
    auto pi = HistoryPolicy::deterministic(3, choice, 1);
    DiscountConfig cfg{0.6, 8};
    for (const auto& wh : enumerate_histories(rp.process, 2)) {
        const Action a = choice(wh.history);
        EXPECT_NEAR(v_value(rp.process, pi, wh.history, cfg).lower, q_value(rp.process, pi, wh.history, a, cfg).lower,
                    1e-12);
    }
}

TEST(Values, EngineMatchesBruteForceRecursion) {
    auto rp = random_process({.seed = 11, .observations = 2, .actions = 2, .rewards = 2, .memory = 1});
    const double gamma = 0.7;
    const std::size_t n = 5;
    ValueEngine policy_engine(rp.process, rp.policy, gamma);
    ValueEngine optimal_engine(rp.process, std::nullopt, gamma);
    for (const auto& wh : enumerate_histories(rp.process, 2)) {
        for (Action a = 0; a < 2; ++a) {
            EXPECT_NEAR(policy_engine.q_row(wh.history, n)[a], brute_q(rp.process, &rp.policy, wh.history, a, n, gamma),
                        1e-12);
            EXPECT_NEAR(optimal_engine.q_row(wh.history, n)[a], brute_q(rp.process, nullptr, wh.history, a, n, gamma),
                        1e-12);
        }
        EXPECT_NEAR(policy_engine.v(wh.history, n), brute_v(rp.process, &rp.policy, wh.history, n, gamma), 1e-12);
    }
}

TEST(Values, EngineMemoStaysBoundedByContexts) {
    auto rp = random_process({.seed = 5, .observations = 2, .actions = 2, .rewards = 2, .memory = 1});
    ValueEngine engine(rp.process, std::nullopt, 0.9);
    engine.v(History{}, 60);
    EXPECT_LE(engine.memo_size(), rp.process.table().size() * 61);
    EXPECT_EQ(engine.memory(), 1u);
}

TEST(Values, EngineMemoCapThrows) {
    auto rp = random_process({.seed = 5, .observations = 2, .actions = 2, .rewards = 2, .memory = 1});
    ValueEngine engine(rp.process, std::nullopt, 0.9, 10);
    EXPECT_THROW(engine.v(History{}, 60), SizeLimitError);
}

TEST(Values, PolicyActionCountMustMatch) {
    EXPECT_THROW(ValueEngine(bandit(), HistoryPolicy::uniform(3), 0.5), InvalidModelError);
}

TEST(Values, GridStartMatchesCellValueIteration) {
    GridWorldSpec spec;
    auto g = build_gridworld(spec);
    DiscountConfig cfg{0.9, 300};
    const auto raw = gridworld_values(spec, 0.9);
    ValueEngine engine(g.process, std::nullopt, 0.9);
    for (Cell c : {Cell{0, 0}, Cell{4, 2}, Cell{5, 4}, Cell{5, 5}}) {
        const double v = engine.v(g.history_at(c), cfg.horizon) + 0.5 * cfg.tail();
        EXPECT_NEAR(g.transform.value_to_raw(v, 0.9), raw[c.y * spec.width + c.x], 1e-9);
    }
}

TEST(Values, ValueFromRowAndGreedy) {
    std::vector<ValueInterval> row{{1.0, 2.0}, {3.0, 4.0}};
    ActionDistribution pi{0.25, 0.75};
    auto v = value_from_row(row, &pi);
    EXPECT_DOUBLE_EQ(v.lower, 2.5);
    EXPECT_DOUBLE_EQ(v.upper, 3.5);
    EXPECT_DOUBLE_EQ(value_from_row(row, nullptr).lower, 3.0);
    EXPECT_THROW(value_from_row({}, nullptr), InvalidModelError);
    EXPECT_EQ(greedy_action({1.0, 2.0, 2.0}), 1u);
    EXPECT_EQ(greedy_action({1.0, 2.0, 2.0 + 1e-14}), 1u);
    EXPECT_EQ(greedy_action({1.0, 2.0, 2.0 + 1e-6}), 2u);
}

TEST(Values, OptimalGreedyIsDefinedOffTheEnumeration) {
    auto rp = random_process({.seed = 2, .observations = 2, .actions = 2, .rewards = 2, .memory = 1});
    auto opt = optimal_q(rp.process, enumerate_histories(rp.process, 1), {0.8, 20});
    for (const auto& wh : enumerate_histories(rp.process, 3)) {
        auto d = opt.greedy(wh.history);
        EXPECT_DOUBLE_EQ(d[0] + d[1], 1.0);
    }
}
