#include "hgrl/process.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include "hgrl/errors.hpp"

namespace hgrl {

OutcomeDistribution normalize_outcomes(OutcomeDistribution raw, const Alphabets& alphabets) {
    std::sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) { return x.outcome < y.outcome; });
    OutcomeDistribution out;
    double total = 0.0;
    for (const auto& entry : raw) {
        if (entry.outcome.observation >= alphabets.num_observations() || entry.outcome.reward >= alphabets.num_rewards())
            throw InvalidModelError("kernel outcome outside the alphabets");
        if (!(entry.probability >= 0.0) || !std::isfinite(entry.probability))
            throw InvalidModelError("kernel probability is negative or not finite");
        total += entry.probability;
        if (entry.probability == 0.0) continue;
        if (!out.empty() && out.back().outcome == entry.outcome)
            out.back().probability += entry.probability;
        else
            out.push_back(entry);
    }
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "kernel row sums to " << total << ", not 1";
        throw InvalidModelError(os.str());
    }
    return out;
}

OriginalProcess OriginalProcess::from_kernel(Alphabets alphabets, const KernelFunction& kernel, std::size_t memory,
                                             std::size_t context_cap) {
    KernelTable table;
    std::deque<History> frontier{History{}};
    std::set<History> seen{History{}};
    const std::size_t na = alphabets.num_actions();
    while (!frontier.empty()) {
        History ctx = std::move(frontier.front());
        frontier.pop_front();
        std::vector<OutcomeDistribution> rows(na);
        for (Action a = 0; a < na; ++a) {
            try {
                rows[a] = normalize_outcomes(kernel(ctx, a), alphabets);
            } catch (const InvalidModelError& e) {
                throw InvalidModelError(std::string(e.what()) + " at context " + ctx.to_string(alphabets) +
                                        ", action " + alphabets.actions()[a]);
            }
            for (const auto& w : rows[a]) {
                History next = ctx.extended(a, w.outcome.observation, w.outcome.reward).suffix(memory);
                if (seen.insert(next).second) {
                    if (seen.size() > context_cap) throw SizeLimitError("reachable context count exceeds cap");
                    frontier.push_back(std::move(next));
                }
            }
        }
        table.emplace(std::move(ctx), std::move(rows));
    }
    auto impl = std::make_shared<Impl>(Impl{std::move(alphabets), memory, std::move(table)});
    return OriginalProcess(std::move(impl));
}

OriginalProcess OriginalProcess::from_table(Alphabets alphabets, KernelTable table, std::optional<std::size_t> memory) {
    for (auto& [ctx, rows] : table) {
        if (rows.size() != alphabets.num_actions())
            throw InvalidModelError("kernel table row count differs from the action count");
        if (memory && ctx.size() > *memory) throw InvalidModelError("kernel context longer than the memory bound");
        for (auto& row : rows) row = normalize_outcomes(std::move(row), alphabets);
    }
    if (!table.count(History{})) throw InvalidModelError("kernel table lacks the empty history");
    auto impl = std::make_shared<Impl>(Impl{std::move(alphabets), memory, std::move(table)});
    return OriginalProcess(std::move(impl));
}

const OutcomeDistribution& OriginalProcess::step(const History& h, Action a) const {
    if (a >= impl_->alphabets.num_actions()) throw std::out_of_range("action outside the alphabet");
    auto it = impl_->table.find(h.context(impl_->memory));
    if (it == impl_->table.end())
        throw DomainError("history " + h.to_string(impl_->alphabets) + " is not reachable in this process");
    return it->second[a];
}

bool OriginalProcess::covers(const History& h) const { return impl_->table.count(h.context(impl_->memory)) > 0; }

bool operator==(const OriginalProcess& a, const OriginalProcess& b) {
    if (a.impl_ == b.impl_) return true;
    return a.impl_->alphabets == b.impl_->alphabets && a.impl_->memory == b.impl_->memory &&
           a.impl_->table == b.impl_->table;
}

HistoryPolicy::HistoryPolicy(std::size_t num_actions, Rule rule, std::optional<std::size_t> memory, std::string name)
    : num_actions_(num_actions), rule_(std::move(rule)), memory_(memory), name_(std::move(name)) {
    if (num_actions_ == 0) throw InvalidModelError("policy over an empty action set");
}

HistoryPolicy HistoryPolicy::uniform(std::size_t num_actions) {
    return HistoryPolicy(
        num_actions, [num_actions](const History&) { return ActionDistribution(num_actions, 1.0 / num_actions); }, 0,
        "uniform");
}

HistoryPolicy HistoryPolicy::deterministic(std::size_t num_actions, std::function<Action(const History&)> choice,
                                           std::optional<std::size_t> memory, std::string name) {
    return HistoryPolicy(
        num_actions,
        [num_actions, choice = std::move(choice)](const History& h) {
            ActionDistribution d(num_actions, 0.0);
            d.at(choice(h)) = 1.0;
            return d;
        },
        memory, std::move(name));
}

ActionDistribution HistoryPolicy::operator()(const History& h) const {
    ActionDistribution d = rule_(h);
    if (d.size() != num_actions_) throw InvalidModelError("policy returned a distribution of the wrong size");
    double total = 0.0;
    for (double p : d) {
        if (!(p >= 0.0)) throw InvalidModelError("policy returned a negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > kNormalizationTolerance) throw InvalidModelError("policy distribution not normalized");
    return d;
}

std::vector<WeightedHistory> enumerate_histories(const OriginalProcess& process, std::size_t depth,
                                                 const HistoryPolicy* support_policy, std::size_t cap) {
    const std::size_t na = process.alphabets().num_actions();
    std::vector<WeightedHistory> out{{History{}, 1.0}};
    std::size_t level_begin = 0;
    for (std::size_t t = 0; t < depth; ++t) {
        std::size_t level_end = out.size();
        for (std::size_t i = level_begin; i < level_end; ++i) {
            // Copy: push_back below may reallocate.
            const History h = out[i].history;
            const double ph = out[i].probability;
            ActionDistribution act = support_policy ? (*support_policy)(h) : ActionDistribution(na, 1.0 / na);
            for (Action a = 0; a < na; ++a) {
                if (act[a] <= 0.0) continue;
                for (const auto& w : process.step(h, a)) {
                    if (out.size() >= cap)
                        throw SizeLimitError("history enumeration exceeds cap of " + std::to_string(cap));
                    out.push_back({h.extended(a, w.outcome.observation, w.outcome.reward), ph * act[a] * w.probability});
                }
            }
        }
        level_begin = level_end;
    }
    return out;
}

std::vector<History> reachable_contexts(const OriginalProcess& process, std::optional<std::size_t> memory,
                                        std::size_t cap) {
    auto pm = process.memory_bound();
    if (!pm) throw InvalidModelError("context closure needs a memory-bounded process");
    const std::size_t k = memory.value_or(*pm);
    if (k < *pm) throw InvalidModelError("context memory below the process memory");
    std::set<History> seen{History{}};
    std::deque<History> frontier{History{}};
    const std::size_t na = process.alphabets().num_actions();
    while (!frontier.empty()) {
        History ctx = std::move(frontier.front());
        frontier.pop_front();
        for (Action a = 0; a < na; ++a) {
            for (const auto& w : process.step(ctx, a)) {
                History next = ctx.extended(a, w.outcome.observation, w.outcome.reward).suffix(k);
                if (seen.insert(next).second) {
                    if (seen.size() > cap) throw SizeLimitError("reachable context count exceeds cap");
                    frontier.push_back(std::move(next));
                }
            }
        }
    }
    return {seen.begin(), seen.end()};
}

double reach_probability(const OriginalProcess& process, const HistoryPolicy& policy, const History& h) {
    double p = 1.0;
    std::vector<Step> prefix;
    prefix.reserve(h.size());
    for (const auto& s : h.steps()) {
        History ctx(prefix);
        p *= policy(ctx)[s.action];
        if (p == 0.0) return 0.0;
        double po = 0.0;
        for (const auto& w : process.step(ctx, s.action))
            if (w.outcome == Outcome{s.observation, s.reward}) po = w.probability;
        p *= po;
        if (p == 0.0) return 0.0;
        prefix.push_back(s);
    }
    return p;
}

}  // namespace hgrl
