#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hgrl/history.hpp"

namespace hgrl {

struct Outcome {
    Observation observation = 0;
    RewardId reward = 0;

    friend auto operator<=>(const Outcome&, const Outcome&) = default;
};

struct WeightedOutcome {
    Outcome outcome;
    double probability = 0.0;

    friend bool operator==(const WeightedOutcome&, const WeightedOutcome&) = default;
};

/// Sparse distribution over (observation, reward), sorted by outcome, strictly
/// positive entries only.
using OutcomeDistribution = std::vector<WeightedOutcome>;

/// Kernel rows per context: one OutcomeDistribution per action.
using KernelTable = std::map<History, std::vector<OutcomeDistribution>>;

/// Raw kernel callback used at construction time. Receives the context (the
/// last `memory` steps of the history) and may return unsorted entries with
/// zero weights; duplicates are merged.
using KernelFunction = std::function<OutcomeDistribution(const History& context, Action action)>;

inline constexpr double kNormalizationTolerance = 1e-12;

/// The environment: a stochastic map from (history, action) to a distribution
/// over (observation, reward). Immutable and cheap to copy.
///
/// Memory-bounded processes are tabulated at construction over every context
/// reachable from the empty history, so every row is validated up front.
/// Unbounded processes come from an explicit finite history table.
class OriginalProcess {
public:
    static OriginalProcess from_kernel(Alphabets alphabets, const KernelFunction& kernel, std::size_t memory,
                                       std::size_t context_cap = 1'000'000);
    static OriginalProcess from_table(Alphabets alphabets, KernelTable table, std::optional<std::size_t> memory);

    const Alphabets& alphabets() const { return impl_->alphabets; }
    std::optional<std::size_t> memory_bound() const { return impl_->memory; }
    /// Context rows; keys are contexts (memory-bounded) or full histories.
    const KernelTable& table() const { return impl_->table; }

    /// Throws DomainError when the history's context is not in the table
    /// (i.e. the history is unreachable).
    const OutcomeDistribution& step(const History& h, Action a) const;
    bool covers(const History& h) const;

    friend bool operator==(const OriginalProcess& a, const OriginalProcess& b);

private:
    struct Impl {
        Alphabets alphabets;
        std::optional<std::size_t> memory;
        KernelTable table;
    };
    explicit OriginalProcess(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    std::shared_ptr<const Impl> impl_;
};

/// Validates and canonicalizes a distribution (sort, merge, drop zeros).
OutcomeDistribution normalize_outcomes(OutcomeDistribution raw, const Alphabets& alphabets);

/// Dense distribution over the original actions.
using ActionDistribution = std::vector<double>;

/// History-based (possibly stochastic) agent. `memory` states how many
/// trailing steps the rule reads; nullopt means the whole history.
class HistoryPolicy {
public:
    using Rule = std::function<ActionDistribution(const History&)>;

    HistoryPolicy(std::size_t num_actions, Rule rule, std::optional<std::size_t> memory, std::string name = {});

    static HistoryPolicy uniform(std::size_t num_actions);
    static HistoryPolicy deterministic(std::size_t num_actions, std::function<Action(const History&)> choice,
                                       std::optional<std::size_t> memory, std::string name = {});

    /// Evaluates the rule and validates normalization; throws InvalidModelError.
    ActionDistribution operator()(const History& h) const;

    std::size_t num_actions() const { return num_actions_; }
    std::optional<std::size_t> memory() const { return memory_; }
    const std::string& name() const { return name_; }

private:
    std::size_t num_actions_;
    Rule rule_;
    std::optional<std::size_t> memory_;
    std::string name_;
};

struct WeightedHistory {
    History history;
    double probability = 0.0;
};

/// All positive-probability histories of length <= depth, in shortlex order.
/// Actions are weighted by support_policy, or uniformly when it is null.
/// Throws SizeLimitError when more than `cap` histories would be produced.
std::vector<WeightedHistory> enumerate_histories(const OriginalProcess& process, std::size_t depth,
                                                 const HistoryPolicy* support_policy = nullptr,
                                                 std::size_t cap = 2'000'000);

/// Every context of length ≤ memory reachable from the empty history, sorted
/// shortlex. memory must be at least the process memory; nullopt means the
/// process memory. Throws InvalidModelError for unbounded processes.
std::vector<History> reachable_contexts(const OriginalProcess& process, std::optional<std::size_t> memory = std::nullopt,
                                        std::size_t cap = 1'000'000);

/// Probability of generating h under policy and process.
double reach_probability(const OriginalProcess& process, const HistoryPolicy& policy, const History& h);

}  // namespace hgrl
