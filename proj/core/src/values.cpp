#include "hgrl/values.hpp"

#include <cmath>

#include "hgrl/errors.hpp"

namespace hgrl {

double DiscountConfig::tail() const { return std::pow(gamma, static_cast<double>(horizon)) / (1.0 - gamma); }

void DiscountConfig::validate() const {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidModelError("discount must lie in [0, 1)");
    if (horizon == 0) throw InvalidModelError("horizon must be positive");
}

ValueEngine::ValueEngine(OriginalProcess process, std::optional<HistoryPolicy> policy, double gamma,
                         std::size_t memo_cap)
    : process_(std::move(process)), policy_(std::move(policy)), gamma_(gamma), memo_cap_(memo_cap) {
    DiscountConfig{gamma, 1}.validate();
    memory_ = process_.memory_bound();
    if (policy_) {
        if (policy_->num_actions() != process_.alphabets().num_actions())
            throw InvalidModelError("policy action count differs from the process");
        memory_ = combine_memory(memory_, policy_->memory());
    }
}

std::vector<double> ValueEngine::q_row(const History& h, std::size_t n) {
    std::lock_guard lock(mutex_);
    return compute(h.context(memory_), n).q;
}

double ValueEngine::v(const History& h, std::size_t n) {
    std::lock_guard lock(mutex_);
    return compute(h.context(memory_), n).v;
}

std::size_t ValueEngine::memo_size() const {
    std::lock_guard lock(mutex_);
    return memo_.size();
}

const ValueEngine::Entry& ValueEngine::compute(const History& context, std::size_t n) {
    Key key{context, n};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const auto& alphabets = process_.alphabets();
    const std::size_t na = alphabets.num_actions();
    Entry e;
    e.q.assign(na, 0.0);
    if (n > 0) {
        for (Action a = 0; a < na; ++a) {
            double acc = 0.0;
            for (const auto& w : process_.step(context, a)) {
                History next = context.extended(a, w.outcome.observation, w.outcome.reward).context(memory_);
                double future = compute(next, n - 1).v;
                acc += w.probability * (alphabets.reward_value(w.outcome.reward) + gamma_ * future);
            }
            e.q[a] = acc;
        }
    }
    if (policy_) {
        ActionDistribution pi = (*policy_)(context);
        for (Action a = 0; a < na; ++a) e.v += pi[a] * e.q[a];
    } else {
        e.v = e.q[0];
        for (double x : e.q) e.v = std::max(e.v, x);
    }
    if (memo_.size() >= memo_cap_) throw SizeLimitError("value memo exceeds cap of " + std::to_string(memo_cap_));
    return memo_.emplace(std::move(key), std::move(e)).first->second;
}

namespace {

ValueInterval with_tail(double lower, const DiscountConfig& cfg) { return {lower, lower + cfg.tail()}; }

}  // namespace

ValueInterval q_value(const OriginalProcess& process, const HistoryPolicy& policy, const History& h, Action a,
                      const DiscountConfig& cfg) {
    cfg.validate();
    ValueEngine engine(process, policy, cfg.gamma);
    return with_tail(engine.q_row(h, cfg.horizon).at(a), cfg);
}

ValueInterval v_value(const OriginalProcess& process, const HistoryPolicy& policy, const History& h,
                      const DiscountConfig& cfg) {
    cfg.validate();
    ValueEngine engine(process, policy, cfg.gamma);
    return with_tail(engine.v(h, cfg.horizon), cfg);
}

QTable q_table(const OriginalProcess& process, const HistoryPolicy* policy, const std::vector<WeightedHistory>& histories,
               const DiscountConfig& cfg) {
    cfg.validate();
    ValueEngine engine(process, policy ? std::optional<HistoryPolicy>(*policy) : std::nullopt, cfg.gamma);
    QTable table;
    for (const auto& wh : histories) {
        std::vector<ValueInterval> row;
        for (double q : engine.q_row(wh.history, cfg.horizon)) row.push_back(with_tail(q, cfg));
        table.emplace(wh.history, std::move(row));
    }
    return table;
}

ValueInterval value_from_row(const std::vector<ValueInterval>& row, const ActionDistribution* policy) {
    if (row.empty()) throw InvalidModelError("empty action-value row");
    if (!policy) {
        ValueInterval best = row[0];
        for (const auto& q : row) {
            best.lower = std::max(best.lower, q.lower);
            best.upper = std::max(best.upper, q.upper);
        }
        return best;
    }
    ValueInterval v{0.0, 0.0};
    for (std::size_t a = 0; a < row.size(); ++a) {
        v.lower += (*policy)[a] * row[a].lower;
        v.upper += (*policy)[a] * row[a].upper;
    }
    return v;
}

Action greedy_action(const std::vector<double>& values, double tie_tolerance) {
    double best = values.at(0);
    for (double x : values) best = std::max(best, x);
    for (Action a = 0; a < values.size(); ++a)
        if (values[a] >= best - tie_tolerance) return a;
    return 0;
}

OptimalQ optimal_q(const OriginalProcess& process, const std::vector<WeightedHistory>& histories,
                   const DiscountConfig& cfg) {
    cfg.validate();
    auto engine = std::make_shared<ValueEngine>(process, std::nullopt, cfg.gamma);
    QTable table;
    for (const auto& wh : histories) {
        std::vector<ValueInterval> row;
        for (double q : engine->q_row(wh.history, cfg.horizon)) row.push_back(with_tail(q, cfg));
        table.emplace(wh.history, std::move(row));
    }
    const std::size_t horizon = cfg.horizon;
    HistoryPolicy greedy = HistoryPolicy::deterministic(
        process.alphabets().num_actions(),
        [engine, horizon](const History& h) { return greedy_action(engine->q_row(h, horizon)); },
        process.memory_bound(), "greedy");
    return {std::move(table), std::move(greedy), cfg};
}

}  // namespace hgrl
