#include "hgrl/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hgrl/errors.hpp"

namespace hgrl {

HomomorphismMap::HomomorphismMap(std::vector<std::string> states, std::vector<std::string> abstract_actions,
                                 StateFn state_map, ActionFn action_map, std::optional<std::size_t> memory,
                                 std::string name)
    : states_(std::move(states)),
      actions_(std::move(abstract_actions)),
      state_map_(std::move(state_map)),
      action_map_(std::move(action_map)),
      memory_(memory),
      name_(std::move(name)) {
    if (states_.empty() || actions_.empty()) throw InvalidModelError("homomorphism needs states and abstract actions");
    if (!state_map_ || !action_map_) throw InvalidModelError("homomorphism needs both component maps");
}

AbstractState HomomorphismMap::state_of(const History& h) const {
    AbstractState s = state_map_(h);
    if (s >= states_.size()) throw InvalidModelError("state map returned an out-of-range state");
    return s;
}

AbstractAction HomomorphismMap::action_of(const History& h, Action a) const {
    AbstractAction b = action_map_(h, a);
    if (b >= actions_.size()) throw InvalidModelError("action map returned an out-of-range abstract action");
    return b;
}

HomomorphismMap identity_map(const OriginalProcess& process, std::optional<std::size_t> memory) {
    std::vector<History> contexts = reachable_contexts(process, memory);
    const std::size_t k = memory.value_or(*process.memory_bound());
    const auto& alphabets = process.alphabets();
    auto lookup = std::make_shared<std::map<History, AbstractState>>();
    std::vector<std::string> names;
    for (const auto& c : contexts) {
        lookup->emplace(c, static_cast<AbstractState>(names.size()));
        names.push_back(c.to_string(alphabets));
    }
    return HomomorphismMap(
        std::move(names), alphabets.actions(),
        [lookup, k, alphabets](const History& h) {
            auto it = lookup->find(h.suffix(k));
            if (it == lookup->end()) throw DomainError("identity map: unreachable context " + h.to_string(alphabets));
            return it->second;
        },
        [](const History&, Action a) { return static_cast<AbstractAction>(a); }, k, "identity");
}

HomomorphismIndex::HomomorphismIndex(const HomomorphismMap& map, std::vector<WeightedHistory> histories,
                                     std::size_t num_actions)
    : map_(map), histories_(std::move(histories)), num_actions_(num_actions) {
    by_state_.resize(map_.num_states());
    actions_at_.resize(map_.num_states());
    std::vector<std::set<AbstractAction>> used(map_.num_states());
    std::vector<std::vector<AbstractAction>> images(histories_.size());
    states_.reserve(histories_.size());
    for (std::size_t i = 0; i < histories_.size(); ++i) {
        const History& h = histories_[i].history;
        AbstractState s = map_.state_of(h);
        states_.push_back(s);
        by_state_[s].push_back(i);
        for (Action a = 0; a < num_actions_; ++a) {
            AbstractAction b = map_.action_of(h, a);
            images[i].push_back(b);
            used[s].insert(b);
            classes_[{s, b}].push_back({i, a});
        }
    }
    for (std::size_t s = 0; s < used.size(); ++s) actions_at_[s].assign(used[s].begin(), used[s].end());
    for (std::size_t i = 0; i < histories_.size(); ++i) {
        std::set<AbstractAction> image(images[i].begin(), images[i].end());
        if (image.size() != used[states_[i]].size())
            throw InvalidModelError("action map at history " + std::to_string(i) + " does not cover the abstract actions of state " +
                                    map_.states()[states_[i]]);
    }
}

std::vector<History> HomomorphismIndex::histories_of(AbstractState s, AbstractAction b) const {
    std::vector<History> out;
    for (const auto& m : members(s, b))
        if (out.empty() || !(out.back() == histories_[m.history].history)) out.push_back(histories_[m.history].history);
    return out;
}

std::vector<Action> HomomorphismIndex::actions_of(AbstractState s, AbstractAction b, const History& h) const {
    std::vector<Action> out;
    if (map_.state_of(h) != s) return out;
    for (Action a = 0; a < num_actions_; ++a)
        if (map_.action_of(h, a) == b) out.push_back(a);
    return out;
}

std::vector<History> HomomorphismIndex::histories_of_state(AbstractState s) const {
    std::vector<History> out;
    for (std::size_t i : state_members(s)) out.push_back(histories_[i].history);
    return out;
}

const std::vector<ClassMember>& HomomorphismIndex::members(AbstractState s, AbstractAction b) const {
    static const std::vector<ClassMember> empty;
    auto it = classes_.find({s, b});
    return it == classes_.end() ? empty : it->second;
}

const std::vector<std::size_t>& HomomorphismIndex::state_members(AbstractState s) const {
    static const std::vector<std::size_t> empty;
    return s < by_state_.size() ? by_state_[s] : empty;
}

const std::vector<AbstractAction>& HomomorphismIndex::actions_at(AbstractState s) const {
    static const std::vector<AbstractAction> empty;
    return s < actions_at_.size() ? actions_at_[s] : empty;
}

InducedProcess::InducedProcess(OriginalProcess process, HomomorphismMap map)
    : process_(std::move(process)), map_(std::move(map)) {}

AbstractOutcomeDistribution InducedProcess::step(const History& h, Action a) const {
    std::map<AbstractOutcome, double> acc;
    for (const auto& w : process_.step(h, a)) {
        AbstractState next = map_.state_of(h.extended(a, w.outcome.observation, w.outcome.reward));
        acc[{next, w.outcome.reward}] += w.probability;
    }
    AbstractOutcomeDistribution out;
    out.reserve(acc.size());
    for (const auto& [o, p] : acc) out.push_back({o, p});
    return out;
}

InducedPolicy::InducedPolicy(HistoryPolicy policy, HomomorphismMap map)
    : policy_(std::move(policy)), map_(std::move(map)) {}

std::vector<double> InducedPolicy::operator()(const History& h) const {
    std::vector<double> out(map_.num_abstract_actions(), 0.0);
    ActionDistribution pi = policy_(h);
    for (Action a = 0; a < pi.size(); ++a) out[map_.action_of(h, a)] += pi[a];
    return out;
}

InducedProcess induce_process(const OriginalProcess& process, const HomomorphismMap& map) {
    return InducedProcess(process, map);
}

InducedPolicy induce_policy(const HistoryPolicy& policy, const HomomorphismMap& map) {
    return InducedPolicy(policy, map);
}

std::vector<double> representative_policy(const InducedPolicy& policy, const HomomorphismIndex& index, AbstractState s) {
    const auto& members = index.state_members(s);
    if (members.empty()) throw DomainError("abstract state has an empty pre-image");
    return policy(index.histories()[members.front()].history);
}

double total_variation(const AbstractOutcomeDistribution& x, const AbstractOutcomeDistribution& y) {
    double l1 = 0.0;
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].outcome < y[j].outcome)) {
            l1 += x[i++].probability;
        } else if (i == x.size() || y[j].outcome < x[i].outcome) {
            l1 += y[j++].probability;
        } else {
            l1 += std::abs(x[i++].probability - y[j++].probability);
        }
    }
    return 0.5 * l1;
}

double GapReport::recompute_epsilon_max() const {
    double m = 0.0;
    for (std::size_t s = 0; s < epsilon_q_rep.size(); ++s)
        m = std::max(m, epsilon_q_rep[s] + epsilon_pi_rep[s] / (1.0 - gamma));
    return m;
}

namespace {

const std::vector<ValueInterval>& row_of(const QTable& q, const History& h) {
    auto it = q.find(h);
    if (it == q.end()) throw DomainError("action-value table does not cover an enumerated history");
    return it->second;
}

double l1(const std::vector<double>& x, const std::vector<double>& y) {
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d += std::abs(x[i] - y[i]);
    return d;
}

}  // namespace

double epsilon_q_uniform(const HomomorphismIndex& index, const QTable& q) {
    double eps = 0.0;
    const auto& hs = index.histories();
    for (AbstractState s = 0; s < index.map().num_states(); ++s) {
        for (AbstractAction b : index.actions_at(s)) {
            double lo = INFINITY, hi = -INFINITY;
            for (const auto& m : index.members(s, b)) {
                double x = row_of(q, hs[m.history].history)[m.action].midpoint();
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
            eps = std::max(eps, hi - lo);
        }
    }
    return eps;
}

GapReport gap_report(const OriginalProcess& process, const HistoryPolicy& policy, const HomomorphismIndex& index,
                     const QTable& q, const DiscountConfig& cfg) {
    cfg.validate();
    const auto& map = index.map();
    const auto& hs = index.histories();
    const std::size_t ns = map.num_states();
    GapReport g;
    g.gamma = cfg.gamma;
    g.tail_slack = cfg.tail();
    g.epsilon_q_rep.assign(ns, 0.0);
    g.epsilon_pi_rep.assign(ns, 0.0);
    g.epsilon_mdp_state.assign(ns, 0.0);
    g.epsilon_v_state.assign(ns, 0.0);
    g.epsilon_q_uniform = epsilon_q_uniform(index, q);

    InducedProcess induced(process, map);
    InducedPolicy induced_policy(policy, map);
    const auto row_memory = combine_memory(process.memory_bound(), map.memory());

    for (AbstractState s = 0; s < ns; ++s) {
        const auto& members = index.state_members(s);
        if (members.empty()) continue;

        double vlo = INFINITY, vhi = -INFINITY;
        std::vector<double> rep_pi = induced_policy(hs[members.front()].history);
        for (std::size_t i : members) {
            const History& h = hs[i].history;
            const auto& row = row_of(q, h);
            ActionDistribution pi = policy(h);
            double v = 0.0;
            for (Action a = 0; a < row.size(); ++a) v += pi[a] * row[a].midpoint();
            vlo = std::min(vlo, v);
            vhi = std::max(vhi, v);
            g.epsilon_pi_rep[s] = std::max(g.epsilon_pi_rep[s], l1(rep_pi, induced_policy(h)));
        }
        g.epsilon_v_state[s] = vhi - vlo;

        for (AbstractAction b : index.actions_at(s)) {
            const auto& cls = index.members(s, b);
            double rep_q = row_of(q, hs[cls.front().history].history)[cls.front().action].midpoint();
            std::set<std::pair<History, Action>> seen;
            std::vector<AbstractOutcomeDistribution> distinct;
            for (const auto& m : cls) {
                const History& h = hs[m.history].history;
                double x = row_of(q, h)[m.action].midpoint();
                g.epsilon_q_rep[s] = std::max(g.epsilon_q_rep[s], std::abs(rep_q - x));
                if (!seen.insert({h.context(row_memory), m.action}).second) continue;
                auto d = induced.step(h, m.action);
                if (std::find(distinct.begin(), distinct.end(), d) == distinct.end()) distinct.push_back(std::move(d));
            }
            for (std::size_t i = 0; i < distinct.size(); ++i)
                for (std::size_t j = i + 1; j < distinct.size(); ++j)
                    g.epsilon_mdp_state[s] = std::max(g.epsilon_mdp_state[s], total_variation(distinct[i], distinct[j]));
        }
        g.epsilon_mdp = std::max(g.epsilon_mdp, g.epsilon_mdp_state[s]);
        g.epsilon_v_uniform = std::max(g.epsilon_v_uniform, g.epsilon_v_state[s]);
    }
    g.epsilon_max = g.recompute_epsilon_max();
    return g;
}

}  // namespace hgrl
