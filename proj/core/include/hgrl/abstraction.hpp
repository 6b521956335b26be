#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hgrl/process.hpp"
#include "hgrl/values.hpp"

namespace hgrl {

using AbstractState = std::uint32_t;
using AbstractAction = std::uint32_t;

/// ψ(h,a) = (f(h), g(h,a)). The state map never sees the candidate action.
/// `memory` bounds how many trailing steps f and g read.
class HomomorphismMap {
public:
    using StateFn = std::function<AbstractState(const History&)>;
    using ActionFn = std::function<AbstractAction(const History&, Action)>;

    HomomorphismMap(std::vector<std::string> states, std::vector<std::string> abstract_actions, StateFn state_map,
                    ActionFn action_map, std::optional<std::size_t> memory, std::string name = {});

    /// Range-checked evaluations; throw InvalidModelError on out-of-range ids.
    AbstractState state_of(const History& h) const;
    AbstractAction action_of(const History& h, Action a) const;

    std::size_t num_states() const { return states_.size(); }
    std::size_t num_abstract_actions() const { return actions_.size(); }
    const std::vector<std::string>& states() const { return states_; }
    const std::vector<std::string>& abstract_actions() const { return actions_; }
    std::optional<std::size_t> memory() const { return memory_; }
    const std::string& name() const { return name_; }

private:
    std::vector<std::string> states_;
    std::vector<std::string> actions_;
    StateFn state_map_;
    ActionFn action_map_;
    std::optional<std::size_t> memory_;
    std::string name_;
};

/// Each context of length ≤ memory (at least the process memory) is its own
/// state and every action its own abstract action. Histories sharing a context
/// are indistinguishable to the process, so this is the finest useful map.
HomomorphismMap identity_map(const OriginalProcess& process, std::optional<std::size_t> memory = std::nullopt);

struct ClassMember {
    std::size_t history;  // index into HomomorphismIndex::histories()
    Action action;
};

/// Pre-image tables of ψ over an enumerated history set.
class HomomorphismIndex {
public:
    /// Throws InvalidModelError when some history's action map misses an
    /// abstract action that other members of its state use.
    HomomorphismIndex(const HomomorphismMap& map, std::vector<WeightedHistory> histories, std::size_t num_actions);

    const HomomorphismMap& map() const { return map_; }
    const std::vector<WeightedHistory>& histories() const { return histories_; }
    std::size_t num_actions() const { return num_actions_; }

    /// Histories with some action in the (s,b) class, in enumeration order.
    std::vector<History> histories_of(AbstractState s, AbstractAction b) const;
    /// Original actions a with ψ(h,a) = (s,b); empty when f(h) ≠ s.
    std::vector<Action> actions_of(AbstractState s, AbstractAction b, const History& h) const;
    AbstractState state_of(const History& h) const { return map_.state_of(h); }
    /// Enumerated histories mapped to s, in enumeration (shortlex) order.
    std::vector<History> histories_of_state(AbstractState s) const;

    const std::vector<ClassMember>& members(AbstractState s, AbstractAction b) const;
    const std::vector<std::size_t>& state_members(AbstractState s) const;
    /// Abstract actions with a non-empty class at s, ascending.
    const std::vector<AbstractAction>& actions_at(AbstractState s) const;
    bool reachable(AbstractState s) const { return !state_members(s).empty(); }
    AbstractState state_at(std::size_t history_index) const { return states_[history_index]; }

private:
    HomomorphismMap map_;
    std::vector<WeightedHistory> histories_;
    std::size_t num_actions_;
    std::vector<AbstractState> states_;
    std::vector<std::vector<std::size_t>> by_state_;
    std::vector<std::vector<AbstractAction>> actions_at_;
    std::map<std::pair<AbstractState, AbstractAction>, std::vector<ClassMember>> classes_;
};

struct AbstractOutcome {
    AbstractState state = 0;
    RewardId reward = 0;

    friend auto operator<=>(const AbstractOutcome&, const AbstractOutcome&) = default;
};

struct WeightedAbstractOutcome {
    AbstractOutcome outcome;
    double probability = 0.0;

    friend bool operator==(const WeightedAbstractOutcome&, const WeightedAbstractOutcome&) = default;
};

using AbstractOutcomeDistribution = std::vector<WeightedAbstractOutcome>;

/// P_ψ(s′,r|h,a): the original kernel pushed through the state map.
class InducedProcess {
public:
    InducedProcess(OriginalProcess process, HomomorphismMap map);
    AbstractOutcomeDistribution step(const History& h, Action a) const;
    const OriginalProcess& process() const { return process_; }
    const HomomorphismMap& map() const { return map_; }

private:
    OriginalProcess process_;
    HomomorphismMap map_;
};

/// Π_ψ(b|h): the policy pushed through the action map.
class InducedPolicy {
public:
    InducedPolicy(HistoryPolicy policy, HomomorphismMap map);
    std::vector<double> operator()(const History& h) const;
    const HistoryPolicy& policy() const { return policy_; }

private:
    HistoryPolicy policy_;
    HomomorphismMap map_;
};

InducedProcess induce_process(const OriginalProcess& process, const HomomorphismMap& map);
InducedPolicy induce_policy(const HistoryPolicy& policy, const HomomorphismMap& map);

/// Π_ψ(·|h₀) for the shortlex-smallest enumerated h₀ mapped to s. Throws
/// DomainError when s has no enumerated member.
std::vector<double> representative_policy(const InducedPolicy& policy, const HomomorphismIndex& index, AbstractState s);

/// Total-variation distance between two sparse abstract distributions.
double total_variation(const AbstractOutcomeDistribution& x, const AbstractOutcomeDistribution& y);

struct GapReport {
    double epsilon_mdp = 0.0;
    double epsilon_q_uniform = 0.0;
    double epsilon_v_uniform = 0.0;
    double epsilon_max = 0.0;
    double tail_slack = 0.0;
    double gamma = 0.0;
    /// Per abstract state; zero for states with no enumerated member.
    std::vector<double> epsilon_q_rep;
    std::vector<double> epsilon_pi_rep;
    std::vector<double> epsilon_mdp_state;
    std::vector<double> epsilon_v_state;

    /// max_s ε_Q(s) + ε_Π(s)/(1−γ), recomputed from the per-state entries.
    double recompute_epsilon_max() const;
};

/// Every supremum runs over the enumerated histories and uses interval
/// midpoints of `q`; the policy supplies both V = Σ Π Q and ε_Π.
GapReport gap_report(const OriginalProcess& process, const HistoryPolicy& policy, const HomomorphismIndex& index,
                     const QTable& q, const DiscountConfig& cfg);

/// Class spread max − min of Q midpoints, maximized over (s,b) classes.
double epsilon_q_uniform(const HomomorphismIndex& index, const QTable& q);

}  // namespace hgrl
