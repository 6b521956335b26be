#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hgrl/rational.hpp"

namespace hgrl {

using Action = std::uint32_t;
using Observation = std::uint32_t;
using RewardId = std::uint32_t;

/// Finite, totally ordered action/observation/reward sets. Order is the
/// index order; rewards are exact rationals in [0, 1].
class Alphabets {
public:
    Alphabets(std::vector<std::string> actions, std::vector<std::string> observations, std::vector<Rational> rewards);

    std::size_t num_actions() const { return actions_.size(); }
    std::size_t num_observations() const { return observations_.size(); }
    std::size_t num_rewards() const { return rewards_.size(); }

    const std::vector<std::string>& actions() const { return actions_; }
    const std::vector<std::string>& observations() const { return observations_; }
    const std::vector<Rational>& rewards() const { return rewards_; }

    const Rational& reward(RewardId r) const { return rewards_.at(r); }
    double reward_value(RewardId r) const { return reward_values_[r]; }

    std::optional<Action> find_action(const std::string& name) const;
    std::optional<Observation> find_observation(const std::string& name) const;
    std::optional<RewardId> find_reward(const Rational& value) const;

    friend bool operator==(const Alphabets&, const Alphabets&) = default;

private:
    std::vector<std::string> actions_;
    std::vector<std::string> observations_;
    std::vector<Rational> rewards_;
    std::vector<double> reward_values_;
};

/// One interaction cycle: the agent's action followed by the percept.
struct Step {
    Action action = 0;
    Observation observation = 0;
    RewardId reward = 0;

    friend auto operator<=>(const Step&, const Step&) = default;
};

/// Finite action/observation/reward sequence. Ordered shortlex: shorter
/// histories first, equal lengths compared element-wise.
class History {
public:
    History() = default;
    explicit History(std::vector<Step> steps) : steps_(std::move(steps)) {}

    std::size_t size() const { return steps_.size(); }
    bool empty() const { return steps_.empty(); }
    const Step& operator[](std::size_t i) const { return steps_[i]; }
    const Step& back() const { return steps_.back(); }
    std::span<const Step> steps() const { return steps_; }

    History extended(Action a, Observation o, RewardId r) const;
    /// Last min(k, size()) steps.
    History suffix(std::size_t k) const;
    /// suffix(k) when k is set, the whole history otherwise.
    History context(std::optional<std::size_t> memory) const { return memory ? suffix(*memory) : *this; }

    std::string to_string(const Alphabets& alphabets) const;

    friend bool operator==(const History&, const History&) = default;
    friend std::strong_ordering operator<=>(const History& a, const History& b);

private:
    std::vector<Step> steps_;
};

struct HistoryHash {
    std::size_t operator()(const History& h) const noexcept;
};

/// max of two memory bounds, where nullopt means unbounded.
inline std::optional<std::size_t> combine_memory(std::optional<std::size_t> a, std::optional<std::size_t> b) {
    if (!a || !b) return std::nullopt;
    return std::max(*a, *b);
}

}  // namespace hgrl
