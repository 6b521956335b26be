#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hgrl/process.hpp"

namespace hgrl {

struct DiscountConfig {
    double gamma = 0.9;
    std::size_t horizon = 50;

    /// γ^T/(1−γ): the most reward mass that truncation at T can hide.
    double tail() const;
    /// Throws InvalidModelError unless 0 ≤ γ < 1 and T ≥ 1.
    void validate() const;
};

/// Bracket around an infinite-horizon value. Computed values have lower equal
/// to the T-step truncation and upper = lower + tail.
struct ValueInterval {
    double lower = 0.0;
    double upper = 0.0;

    double midpoint() const { return 0.5 * (lower + upper); }
    double width() const { return upper - lower; }
    bool contains(double x, double tol = 0.0) const { return x >= lower - tol && x <= upper + tol; }
};

using QTable = std::map<History, std::vector<ValueInterval>>;

/// Memoized truncated backward induction. Values depend on a history only
/// through its last K steps, where K combines the process and policy memory
/// bounds, so the memo is keyed on (context, steps to go).
///
/// Without a policy the engine computes optimal values. Thread-safe.
class ValueEngine {
public:
    ValueEngine(OriginalProcess process, std::optional<HistoryPolicy> policy, double gamma,
                std::size_t memo_cap = 4'000'000);

    /// n-step truncated action values at h, one per action.
    std::vector<double> q_row(const History& h, std::size_t n);
    /// n-step truncated value at h.
    double v(const History& h, std::size_t n);

    const OriginalProcess& process() const { return process_; }
    std::optional<std::size_t> memory() const { return memory_; }
    double gamma() const { return gamma_; }
    std::size_t memo_size() const;

private:
    struct Entry {
        std::vector<double> q;
        double v = 0.0;
    };
    struct Key {
        History context;
        std::size_t n;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept { return HistoryHash{}(k.context) * 31 + k.n; }
    };

    const Entry& compute(const History& context, std::size_t n);

    OriginalProcess process_;
    std::optional<HistoryPolicy> policy_;
    double gamma_;
    std::size_t memo_cap_;
    std::optional<std::size_t> memory_;
    mutable std::mutex mutex_;
    std::unordered_map<Key, Entry, KeyHash> memo_;
};

/// Tail interval of Q^Π(h,a) truncated at cfg.horizon.
ValueInterval q_value(const OriginalProcess& process, const HistoryPolicy& policy, const History& h, Action a,
                      const DiscountConfig& cfg);
/// Tail interval of V^Π(h) truncated at cfg.horizon.
ValueInterval v_value(const OriginalProcess& process, const HistoryPolicy& policy, const History& h,
                      const DiscountConfig& cfg);

/// Interval table of Q^Π (policy given) or Q* (policy null) over the given
/// histories, using one shared engine.
QTable q_table(const OriginalProcess& process, const HistoryPolicy* policy, const std::vector<WeightedHistory>& histories,
               const DiscountConfig& cfg);

/// V from a Q table row: Σ_a Π(a|h) Q(h,a), or max_a Q(h,a) without a policy.
ValueInterval value_from_row(const std::vector<ValueInterval>& row, const ActionDistribution* policy);

/// Greedy choice among action values: the lowest-indexed action whose value
/// is within tie_tolerance of the maximum.
Action greedy_action(const std::vector<double>& values, double tie_tolerance = 1e-12);

struct OptimalQ {
    QTable q;
    HistoryPolicy greedy;
    DiscountConfig cfg;
};

/// Optimal values over the histories plus the deterministic greedy policy
/// (defined on every reachable history, not just the listed ones).
OptimalQ optimal_q(const OriginalProcess& process, const std::vector<WeightedHistory>& histories,
                   const DiscountConfig& cfg);

}  // namespace hgrl
