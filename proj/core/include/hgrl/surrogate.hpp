#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hgrl/abstraction.hpp"
#include "hgrl/mdp_solver.hpp"

namespace hgrl {

enum class InverseMode { uniform, visitation };

struct InverseEntry {
    std::size_t history;  // index into the HomomorphismIndex histories
    Action action;
    double weight;
};

/// B(h,a|s,b) over the enumerated class members, plus the class weights
/// w(s,b) that fix the joint distribution behind B(b|s) and B(ab|h).
class StochasticInverse {
public:
    using Cell = std::pair<AbstractState, AbstractAction>;

    StochasticInverse(const HomomorphismIndex& index, std::map<Cell, std::vector<InverseEntry>> weights,
                      std::map<Cell, double> class_weights, InverseMode mode);

    const HomomorphismIndex& index() const { return *index_; }
    InverseMode mode() const { return mode_; }
    const std::vector<InverseEntry>& weights(AbstractState s, AbstractAction b) const;
    const std::map<Cell, std::vector<InverseEntry>>& cells() const { return weights_; }
    double class_weight(AbstractState s, AbstractAction b) const;
    /// Classes whose behavior mass was zero and fell back to equal weights.
    const std::vector<Cell>& fallback_cells() const { return fallback_; }

    /// B(b|s) = w(s,b) / Σ_b′ w(s,b′).
    double b_given_s(AbstractState s, AbstractAction b) const;
    /// B(a,b|h) for h = histories()[i]; row indexed [b][a]. Empty when h
    /// carries no joint mass.
    std::vector<std::vector<double>> ab_given_h(std::size_t history) const;
    /// Joint mass of history i.
    double history_mass(std::size_t history) const;

private:
    friend StochasticInverse build_inverse(const HomomorphismIndex&, InverseMode, const OriginalProcess&,
                                           const HistoryPolicy*);
    const HomomorphismIndex* index_;
    std::map<Cell, std::vector<InverseEntry>> weights_;
    std::map<Cell, double> class_weights_;
    InverseMode mode_;
    std::vector<Cell> fallback_;
    std::vector<double> history_mass_;
    std::vector<std::vector<std::vector<double>>> joint_;  // [history][b][a]
};

/// Builds B for every non-empty class of the index. Class weights and
/// visitation-mode weights come from reach probabilities under `behavior`
/// (uniform over original actions when null). The index must outlive B.
StochasticInverse build_inverse(const HomomorphismIndex& index, InverseMode mode, const OriginalProcess& process,
                                const HistoryPolicy* behavior = nullptr);

struct SurrogateMdp {
    FiniteMdp mdp;
    std::vector<std::string> state_names;
    std::vector<std::string> action_names;
};

/// p_B(s′,r|s,b) = Σ B(h,a|s,b) P_ψ(s′,r|h,a). Throws DomainError when some
/// successor state has no enumerated member (the surrogate would not close).
SurrogateMdp surrogate_mdp(const InducedProcess& induced, const StochasticInverse& inverse);

/// ⟨Q⟩_B(s,b) over interval midpoints.
double b_average_q(const QTable& q, const StochasticInverse& inverse, AbstractState s, AbstractAction b);

/// B^π(a|h,s) = Σ_b (B(ab|h)/B(b|s)) π(b|s) with 0/0 := 0. Not renormalized.
/// Throws DegenerateSupportError when π(b|s) > 0 but B(b|s) = 0.
ActionDistribution induced_action_measure(const StochasticInverse& inverse, const std::vector<double>& pi_s,
                                          std::size_t history);

/// sup over histories with joint mass of |Σ_a Q(h,a) B^π(a|h,s) − V(h)|,
/// where V(h) = Σ_a Π(a|h) Q(h,a) (midpoints).
double epsilon_b(const QTable& q, const HistoryPolicy& policy, const StochasticInverse& inverse,
                 const AbstractPolicy& pi);

}  // namespace hgrl
