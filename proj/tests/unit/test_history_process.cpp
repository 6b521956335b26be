#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "builders.hpp"
#include "hgrl/errors.hpp"
#include "hgrl/fixtures.hpp"
#include "hgrl/process.hpp"

using namespace hgrl;
using hgrl::testing::bandit;
using hgrl::testing::coin;

TEST(Alphabets, RejectsEmptyDuplicateAndOutOfRange) {
    EXPECT_THROW(Alphabets({}, {"o"}, {Rational(0)}), InvalidModelError);
    EXPECT_THROW(Alphabets({"a", "a"}, {"o"}, {Rational(0)}), InvalidModelError);
    EXPECT_THROW(Alphabets({"a"}, {"o"}, {Rational(0), Rational(0)}), InvalidModelError);
    EXPECT_THROW(Alphabets({"a"}, {"o"}, {Rational(3, 2)}), InvalidModelError);
    EXPECT_THROW(Alphabets({"a"}, {"o"}, {Rational(-1, 20)}), InvalidModelError);
}

TEST(Alphabets, LooksUpByNameAndValue) {
    Alphabets ab({"up", "down"}, {"x", "y", "z"}, {Rational(0), Rational(1, 2)});
    EXPECT_EQ(ab.find_action("down"), 1u);
    EXPECT_EQ(ab.find_observation("z"), 2u);
    EXPECT_EQ(ab.find_reward(Rational(1, 2)), 1u);
    EXPECT_FALSE(ab.find_action("left"));
    EXPECT_DOUBLE_EQ(ab.reward_value(1), 0.5);
}

TEST(History, ShortlexOrdersByLengthThenSteps) {
    const History e;
    const History a({{0, 1, 0}});
    const History b({{1, 0, 0}});
    const History ab({{0, 0, 0}, {0, 0, 0}});
    EXPECT_LT(e, a);
    EXPECT_LT(a, b);
    EXPECT_LT(b, ab);
    EXPECT_EQ(a.extended(1, 1, 1).size(), 2u);
}

TEST(History, SuffixAndContext) {
    const History h({{0, 0, 0}, {1, 1, 0}, {0, 2, 1}});
    EXPECT_EQ(h.suffix(1), History({{0, 2, 1}}));
    EXPECT_EQ(h.suffix(0), History());
    EXPECT_EQ(h.suffix(9), h);
    EXPECT_EQ(h.context(std::nullopt), h);
    EXPECT_EQ(h.context(2).size(), 2u);
}

TEST(History, PrintsSymbols) {
    Alphabets ab({"l", "r"}, {"o"}, {Rational(0), Rational(1)});
    EXPECT_EQ(History({{1, 0, 1}}).to_string(ab), "[(r,o,1)]");
}

TEST(NormalizeOutcomes, SortsMergesAndDropsZeros) {
    Alphabets ab({"a"}, {"o1", "o2"}, {Rational(0), Rational(1)});
    auto d = normalize_outcomes({{{1, 0}, 0.25}, {{0, 1}, 0.5}, {{1, 0}, 0.25}, {{0, 0}, 0.0}}, ab);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d[0].outcome, (Outcome{0, 1}));
    EXPECT_DOUBLE_EQ(d[1].probability, 0.5);
}

TEST(NormalizeOutcomes, RejectsBadRows) {
    Alphabets ab({"a"}, {"o"}, {Rational(0)});
    EXPECT_THROW(normalize_outcomes({{{0, 0}, 0.9}}, ab), InvalidModelError);
    EXPECT_THROW(normalize_outcomes({{{0, 0}, 1.5}, {{0, 0}, -0.5}}, ab), InvalidModelError);
    EXPECT_THROW(normalize_outcomes({{{1, 0}, 1.0}}, ab), InvalidModelError);
    EXPECT_THROW(normalize_outcomes({{{0, 0}, NAN}}, ab), InvalidModelError);
    EXPECT_NO_THROW(normalize_outcomes({{{0, 0}, 1.0 + 5e-13}}, ab));
}

TEST(OriginalProcess, FromKernelNamesTheFailingContext) {
    Alphabets ab({"a"}, {"o"}, {Rational(0)});
    try {
        OriginalProcess::from_kernel(ab, [](const History&, Action) { return OutcomeDistribution{{{0, 0}, 0.5}}; }, 1);
        FAIL();
    } catch (const InvalidModelError& e) {
        EXPECT_NE(std::string(e.what()).find("context"), std::string::npos);
    }
}

TEST(OriginalProcess, ContextCapThrows) {
    Alphabets ab({"a"}, {"o1", "o2"}, {Rational(0)});
    auto kernel = [](const History&, Action) { return OutcomeDistribution{{{0, 0}, 0.5}, {{1, 0}, 0.5}}; };
    EXPECT_THROW(OriginalProcess::from_kernel(ab, kernel, 6, 10), SizeLimitError);
}

TEST(OriginalProcess, FromTableValidates) {
    Alphabets ab({"a"}, {"o"}, {Rational(0)});
    KernelTable good{{History{}, {{{{0, 0}, 1.0}}}}};
    auto p = OriginalProcess::from_table(ab, good, std::nullopt);
    EXPECT_FALSE(p.memory_bound());
    EXPECT_THROW(p.step(History({{0, 0, 0}}), 0), DomainError);
    EXPECT_THROW(OriginalProcess::from_table(ab, {}, std::nullopt), InvalidModelError);
    KernelTable wrong_rows{{History{}, {}}};
    EXPECT_THROW(OriginalProcess::from_table(ab, wrong_rows, std::nullopt), InvalidModelError);
    KernelTable too_long{{History{}, {{{{0, 0}, 1.0}}}}, {History({{0, 0, 0}, {0, 0, 0}}), {{{{0, 0}, 1.0}}}}};
    EXPECT_THROW(OriginalProcess::from_table(ab, too_long, 1), InvalidModelError);
}

TEST(OriginalProcess, StepOutsideTheAlphabetThrows) {
    EXPECT_THROW(bandit().step(History{}, 5), std::out_of_range);
}

TEST(OriginalProcess, GridMoveIntoGoalIsCertain) {
    GridWorldSpec spec;
    auto g = build_gridworld(spec);
    const History h = g.history_at({5, 4});
    const auto& d = g.process.step(h, kUp);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].outcome.observation, g.observation_of({5, 5}));
    EXPECT_DOUBLE_EQ(d[0].probability, 1.0);
    EXPECT_EQ(g.process.alphabets().reward(d[0].outcome.reward), g.transform.apply(Rational(1)));
}

TEST(OriginalProcess, RegionThreeSplitsEvenlyInCaseOne) {
    auto chain = build_region_chain(1, 0.5);
    // observation "1" (index 0) with a β action is R3, which moves to R4a or R4b.
    const History h({{0, 0, 0}});
    ASSERT_EQ(chain.region_of(h, 2), 2u);
    const auto& d = chain.process.step(h, 2);
    double to_r4a = 0.0, to_r4b = 0.0;
    for (const auto& w : d) {
        if (w.outcome.observation == 1) to_r4a += w.probability;
        if (w.outcome.observation == 0) to_r4b += w.probability;
    }
    EXPECT_DOUBLE_EQ(to_r4a, 0.5);
    EXPECT_DOUBLE_EQ(to_r4b, 0.5);
}

TEST(OriginalProcess, EqualityComparesContent) {
    EXPECT_EQ(bandit(), bandit());
    EXPECT_FALSE(bandit() == coin());
}

TEST(HistoryPolicy, ValidatesDistributions) {
    HistoryPolicy bad(2, [](const History&) { return ActionDistribution{0.7, 0.7}; }, 0);
    EXPECT_THROW(bad(History{}), InvalidModelError);
    HistoryPolicy short_row(2, [](const History&) { return ActionDistribution{1.0}; }, 0);
    EXPECT_THROW(short_row(History{}), InvalidModelError);
    HistoryPolicy negative(2, [](const History&) { return ActionDistribution{1.5, -0.5}; }, 0);
    EXPECT_THROW(negative(History{}), InvalidModelError);
    EXPECT_THROW(HistoryPolicy(0, [](const History&) { return ActionDistribution{}; }, 0), InvalidModelError);
}

TEST(HistoryPolicy, UniformAndDeterministic) {
    auto u = HistoryPolicy::uniform(4);
    EXPECT_EQ(u(History{}), ActionDistribution(4, 0.25));
    auto d = HistoryPolicy::deterministic(3, [](const History& h) { return static_cast<Action>(h.size() % 3); }, 0);
    EXPECT_EQ(d(History({{0, 0, 0}})), (ActionDistribution{0.0, 1.0, 0.0}));
}

TEST(EnumerateHistories, DepthZeroIsTheEmptyHistory) {
    auto hs = enumerate_histories(coin(), 0);
    ASSERT_EQ(hs.size(), 1u);
    EXPECT_TRUE(hs[0].history.empty());
    EXPECT_DOUBLE_EQ(hs[0].probability, 1.0);
}

TEST(EnumerateHistories, CoinFlipsWeighQuarterAtDepthTwo) {
    auto hs = enumerate_histories(coin(), 2);
    ASSERT_EQ(hs.size(), 7u);
    double level2 = 0.0;
    for (const auto& wh : hs)
        if (wh.history.size() == 2) {
            EXPECT_DOUBLE_EQ(wh.probability, 0.25);
            level2 += wh.probability;
        }
    EXPECT_DOUBLE_EQ(level2, 1.0);
    for (std::size_t i = 1; i < hs.size(); ++i) EXPECT_LT(hs[i - 1].history, hs[i].history);
}

TEST(EnumerateHistories, SupportPolicyPrunesZeroActions) {
    auto only_left = HistoryPolicy::deterministic(2, [](const History&) { return Action{0}; }, 0);
    auto hs = enumerate_histories(bandit(), 3, &only_left);
    EXPECT_EQ(hs.size(), 4u);
    for (const auto& wh : hs) EXPECT_DOUBLE_EQ(wh.probability, 1.0);
}

TEST(EnumerateHistories, CapThrows) {
    EXPECT_THROW(enumerate_histories(coin(), 10, nullptr, 100), SizeLimitError);
}

TEST(ReachableContexts, CoversTheTableAndRejectsSmallMemory) {
    auto chain = build_region_chain(1, 0.5);
    auto ctx = reachable_contexts(chain.process);
    EXPECT_EQ(ctx.size(), chain.process.table().size());
    EXPECT_THROW(reachable_contexts(chain.process, 0), InvalidModelError);
    auto deeper = reachable_contexts(chain.process, 2);
    EXPECT_GT(deeper.size(), ctx.size());
    auto unbounded = OriginalProcess::from_table(coin().alphabets(), coin().table(), std::nullopt);
    EXPECT_THROW(reachable_contexts(unbounded), InvalidModelError);
}

TEST(ReachProbability, MultipliesPolicyAndKernel) {
    auto p = coin();
    auto u = HistoryPolicy::uniform(1);
    EXPECT_DOUBLE_EQ(reach_probability(p, u, History({{0, 0, 1}, {0, 1, 0}})), 0.25);
    EXPECT_DOUBLE_EQ(reach_probability(p, u, History({{0, 0, 0}})), 0.0);
    EXPECT_DOUBLE_EQ(reach_probability(p, u, History{}), 1.0);
}

TEST(ReachProbability, RegionChainPolicyCarriesTheChain) {
    auto chain = build_region_chain(1, 0.5);
    auto hs = enumerate_histories(chain.process, 4, &chain.policy);
    double total = 0.0;
    for (const auto& wh : hs)
        if (wh.history.size() == 4) total += reach_probability(chain.process, chain.policy, wh.history);
    EXPECT_NEAR(total, 1.0, 1e-12);
}
