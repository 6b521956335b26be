#pragma once

// Small hand-built processes shared by the unit suites.

#include "hgrl/process.hpp"

namespace hgrl::testing {

/// One observation, rewards {0, 1}; action 0 pays 1, action 1 pays 0.
inline OriginalProcess bandit() {
    Alphabets ab({"left", "right"}, {"o"}, {Rational(0), Rational(1)});
    return OriginalProcess::from_kernel(
        ab, [](const History&, Action a) { return OutcomeDistribution{{{0, a == 0 ? 1u : 0u}, 1.0}}; }, 0);
}

/// Single action, coin-flip observation, reward 1 on heads.
inline OriginalProcess coin() {
    Alphabets ab({"go"}, {"heads", "tails"}, {Rational(0), Rational(1)});
    return OriginalProcess::from_kernel(
        ab, [](const History&, Action) { return OutcomeDistribution{{{0, 1}, 0.5}, {{1, 0}, 0.5}}; }, 0);
}

/// Constant reward r on every step, one action, one observation.
inline OriginalProcess constant_reward(const Rational& r) {
    Alphabets ab({"a"}, {"o"}, {r});
    return OriginalProcess::from_kernel(ab, [](const History&, Action) { return OutcomeDistribution{{{0, 0}, 1.0}}; },
                                        0);
}

/// Three observations drawn w.p. 0.2 / 0.6 / 0.2 from the empty history and
/// then repeated forever; one action, zero reward.
inline OriginalProcess three_way() {
    Alphabets ab({"a"}, {"o1", "o2", "o3"}, {Rational(0)});
    return OriginalProcess::from_kernel(
        ab,
        [](const History& ctx, Action) {
            if (ctx.empty()) return OutcomeDistribution{{{0, 0}, 0.2}, {{1, 0}, 0.6}, {{2, 0}, 0.2}};
            return OutcomeDistribution{{{ctx.back().observation, 0}, 1.0}};
        },
        1);
}

}  // namespace hgrl::testing
