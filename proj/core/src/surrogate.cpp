#include "hgrl/surrogate.hpp"

#include <cmath>

#include "hgrl/errors.hpp"

namespace hgrl {

StochasticInverse::StochasticInverse(const HomomorphismIndex& index, std::map<Cell, std::vector<InverseEntry>> weights,
                                     std::map<Cell, double> class_weights, InverseMode mode)
    : index_(&index), weights_(std::move(weights)), class_weights_(std::move(class_weights)), mode_(mode) {
    const std::size_t nh = index.histories().size();
    const std::size_t nb = index.map().num_abstract_actions();
    const std::size_t na = index.num_actions();
    history_mass_.assign(nh, 0.0);
    joint_.assign(nh, {});
    for (const auto& [cell, entries] : weights_) {
        const auto& [s, b] = cell;
        double total = 0.0;
        for (const auto& e : entries) {
            if (!(e.weight >= 0.0)) throw InvalidModelError("stochastic inverse weight negative");
            if (e.history >= nh || index.state_at(e.history) != s ||
                index.map().action_of(index.histories()[e.history].history, e.action) != b)
                throw InvalidModelError("stochastic inverse puts weight outside the class pre-image");
            total += e.weight;
        }
        if (std::abs(total - 1.0) > kNormalizationTolerance)
            throw InvalidModelError("stochastic inverse class does not normalize");
        const double w = class_weight(s, b);
        for (const auto& e : entries) {
            auto& j = joint_[e.history];
            if (j.empty()) j.assign(nb, std::vector<double>(na, 0.0));
            j[b][e.action] += w * e.weight;
            history_mass_[e.history] += w * e.weight;
        }
    }
}

const std::vector<InverseEntry>& StochasticInverse::weights(AbstractState s, AbstractAction b) const {
    static const std::vector<InverseEntry> empty;
    auto it = weights_.find({s, b});
    return it == weights_.end() ? empty : it->second;
}

double StochasticInverse::class_weight(AbstractState s, AbstractAction b) const {
    auto it = class_weights_.find({s, b});
    return it == class_weights_.end() ? 0.0 : it->second;
}

double StochasticInverse::b_given_s(AbstractState s, AbstractAction b) const {
    double total = 0.0;
    for (AbstractAction b2 : index_->actions_at(s)) total += class_weight(s, b2);
    return total > 0.0 ? class_weight(s, b) / total : 0.0;
}

std::vector<std::vector<double>> StochasticInverse::ab_given_h(std::size_t history) const {
    const double m = history_mass_.at(history);
    if (m <= 0.0) return {};
    auto out = joint_[history];
    for (auto& row : out)
        for (double& x : row) x /= m;
    return out;
}

double StochasticInverse::history_mass(std::size_t history) const { return history_mass_.at(history); }

StochasticInverse build_inverse(const HomomorphismIndex& index, InverseMode mode, const OriginalProcess& process,
                                const HistoryPolicy* behavior) {
    const auto& hs = index.histories();
    const std::size_t na = index.num_actions();
    if (na != process.alphabets().num_actions()) throw InvalidModelError("index and process disagree on actions");

    std::vector<ActionDistribution> act(hs.size());
    std::vector<double> reach(hs.size(), 0.0);
    std::map<History, std::size_t> position;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const History& h = hs[i].history;
        act[i] = behavior ? (*behavior)(h) : ActionDistribution(na, 1.0 / na);
        position.emplace(h, i);
        if (h.empty()) {
            reach[i] = 1.0;
            continue;
        }
        const auto steps = h.steps();
        History parent(std::vector<Step>(steps.begin(), steps.end() - 1));
        auto it = position.find(parent);
        if (it == position.end()) throw InvalidModelError("history set is not prefix-closed");
        const Step& last = h.back();
        double po = 0.0;
        for (const auto& w : process.step(parent, last.action))
            if (w.outcome == Outcome{last.observation, last.reward}) po = w.probability;
        reach[i] = reach[it->second] * act[it->second][last.action] * po;
    }

    std::map<StochasticInverse::Cell, std::vector<InverseEntry>> weights;
    std::map<StochasticInverse::Cell, double> class_weights;
    std::vector<StochasticInverse::Cell> fallback;
    double grand = 0.0;
    for (AbstractState s = 0; s < index.map().num_states(); ++s) {
        for (AbstractAction b : index.actions_at(s)) {
            const auto& members = index.members(s, b);
            std::vector<InverseEntry> entries;
            double mass = 0.0;
            for (const auto& m : members) {
                double x = reach[m.history] * act[m.history][m.action];
                entries.push_back({m.history, m.action, x});
                mass += x;
            }
            class_weights[{s, b}] = mass;
            grand += mass;
            const bool uniform = mode == InverseMode::uniform || mass <= 0.0;
            if (mode == InverseMode::visitation && mass <= 0.0) fallback.push_back({s, b});
            for (auto& e : entries) e.weight = uniform ? 1.0 / static_cast<double>(entries.size()) : e.weight / mass;
            weights.emplace(StochasticInverse::Cell{s, b}, std::move(entries));
        }
    }
    if (grand > 0.0)
        for (auto& [cell, w] : class_weights) w /= grand;
    StochasticInverse inv(index, std::move(weights), std::move(class_weights), mode);
    inv.fallback_ = std::move(fallback);
    return inv;
}

SurrogateMdp surrogate_mdp(const InducedProcess& induced, const StochasticInverse& inverse) {
    const auto& index = inverse.index();
    const auto& map = index.map();
    const auto& alphabets = induced.process().alphabets();
    const auto& hs = index.histories();
    SurrogateMdp out{FiniteMdp(map.num_states(), map.num_abstract_actions()), map.states(), map.abstract_actions()};
    for (const auto& [cell, entries] : inverse.cells()) {
        const auto& [s, b] = cell;
        std::map<AbstractOutcome, double> acc;
        for (const auto& e : entries) {
            if (e.weight == 0.0) continue;
            for (const auto& w : induced.step(hs[e.history].history, e.action)) acc[w.outcome] += e.weight * w.probability;
        }
        std::vector<Transition> row;
        for (const auto& [o, p] : acc) {
            if (!index.reachable(o.state))
                throw DomainError("surrogate is not closed: successor state " + map.states()[o.state] +
                                  " has no enumerated member");
            row.push_back({o.state, alphabets.reward_value(o.reward), p});
        }
        out.mdp.rows[s][b] = std::move(row);
    }
    out.mdp.validate();
    return out;
}

double b_average_q(const QTable& q, const StochasticInverse& inverse, AbstractState s, AbstractAction b) {
    const auto& hs = inverse.index().histories();
    const auto& entries = inverse.weights(s, b);
    if (entries.empty()) throw DomainError("B-average over an empty class");
    double acc = 0.0;
    for (const auto& e : entries) {
        auto it = q.find(hs[e.history].history);
        if (it == q.end()) throw DomainError("action-value table does not cover the inverse support");
        acc += e.weight * it->second[e.action].midpoint();
    }
    return acc;
}

ActionDistribution induced_action_measure(const StochasticInverse& inverse, const std::vector<double>& pi_s,
                                          std::size_t history) {
    const auto& index = inverse.index();
    const AbstractState s = index.state_at(history);
    ActionDistribution out(index.num_actions(), 0.0);
    auto ab = inverse.ab_given_h(history);
    for (AbstractAction b = 0; b < pi_s.size(); ++b) {
        const double bs = inverse.b_given_s(s, b);
        if (bs == 0.0) {
            if (pi_s[b] > 0.0)
                throw DegenerateSupportError("B(b|s) = 0 for abstract action " + index.map().abstract_actions()[b] +
                                             " at state " + index.map().states()[s] + " while the policy uses it");
            continue;
        }
        if (ab.empty() || pi_s[b] == 0.0) continue;
        for (Action a = 0; a < out.size(); ++a) out[a] += ab[b][a] / bs * pi_s[b];
    }
    return out;
}

double epsilon_b(const QTable& q, const HistoryPolicy& policy, const StochasticInverse& inverse,
                 const AbstractPolicy& pi) {
    const auto& index = inverse.index();
    const auto& hs = index.histories();
    double eps = 0.0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (inverse.history_mass(i) <= 0.0) continue;
        const auto& row = q.at(hs[i].history);
        ActionDistribution measure = induced_action_measure(inverse, pi.rows.at(index.state_at(i)), i);
        ActionDistribution p = policy(hs[i].history);
        double lhs = 0.0, v = 0.0;
        for (Action a = 0; a < row.size(); ++a) {
            lhs += row[a].midpoint() * measure[a];
            v += row[a].midpoint() * p[a];
        }
        eps = std::max(eps, std::abs(lhs - v));
    }
    return eps;
}

}  // namespace hgrl
