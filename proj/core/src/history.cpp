#include "hgrl/history.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "hgrl/errors.hpp"

namespace hgrl {

Alphabets::Alphabets(std::vector<std::string> actions, std::vector<std::string> observations,
                     std::vector<Rational> rewards)
    : actions_(std::move(actions)), observations_(std::move(observations)), rewards_(std::move(rewards)) {
    if (actions_.empty() || observations_.empty() || rewards_.empty())
        throw InvalidModelError("alphabets must be non-empty");
    for (const auto* names : {&actions_, &observations_}) {
        std::set<std::string> unique(names->begin(), names->end());
        if (unique.size() != names->size()) throw InvalidModelError("duplicate symbol name in alphabet");
    }
    std::set<Rational> unique(rewards_.begin(), rewards_.end());
    if (unique.size() != rewards_.size()) throw InvalidModelError("duplicate reward value");
    for (const auto& r : rewards_) {
        if (r < Rational(0) || r > Rational(1))
            throw InvalidModelError("reward " + r.to_string() + " outside [0, 1]");
        reward_values_.push_back(r.to_double());
    }
}

std::optional<Action> Alphabets::find_action(const std::string& name) const {
    auto it = std::find(actions_.begin(), actions_.end(), name);
    if (it == actions_.end()) return std::nullopt;
    return static_cast<Action>(it - actions_.begin());
}

std::optional<Observation> Alphabets::find_observation(const std::string& name) const {
    auto it = std::find(observations_.begin(), observations_.end(), name);
    if (it == observations_.end()) return std::nullopt;
    return static_cast<Observation>(it - observations_.begin());
}

std::optional<RewardId> Alphabets::find_reward(const Rational& value) const {
    auto it = std::find(rewards_.begin(), rewards_.end(), value);
    if (it == rewards_.end()) return std::nullopt;
    return static_cast<RewardId>(it - rewards_.begin());
}

History History::extended(Action a, Observation o, RewardId r) const {
    std::vector<Step> steps;
    steps.reserve(steps_.size() + 1);
    steps = steps_;
    steps.push_back({a, o, r});
    return History(std::move(steps));
}

History History::suffix(std::size_t k) const {
    if (k >= steps_.size()) return *this;
    return History(std::vector<Step>(steps_.end() - static_cast<std::ptrdiff_t>(k), steps_.end()));
}

std::string History::to_string(const Alphabets& alphabets) const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        if (i) os << ' ';
        const auto& s = steps_[i];
        os << '(' << alphabets.actions()[s.action] << ',' << alphabets.observations()[s.observation] << ','
           << alphabets.reward(s.reward) << ')';
    }
    os << ']';
    return os.str();
}

std::strong_ordering operator<=>(const History& a, const History& b) {
    if (auto c = a.steps_.size() <=> b.steps_.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.steps_.begin(), a.steps_.end(), b.steps_.begin(),
                                                  b.steps_.end());
}

std::size_t HistoryHash::operator()(const History& h) const noexcept {
    std::uint64_t x = 0x9e3779b97f4a7c15ULL ^ h.size();
    for (const auto& s : h.steps()) {
        std::uint64_t v = (static_cast<std::uint64_t>(s.action) << 42) ^ (static_cast<std::uint64_t>(s.observation) << 21) ^
                          s.reward;
        x ^= v + 0x9e3779b97f4a7c15ULL + (x << 6) + (x >> 2);
    }
    return static_cast<std::size_t>(x);
}

}  // namespace hgrl
