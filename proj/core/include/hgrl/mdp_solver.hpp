#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hgrl {

struct Transition {
    std::size_t next = 0;
    double reward = 0.0;
    double probability = 0.0;
};

/// Finite MDP with a possibly state-dependent action set: rows[s][b] is empty
/// when b is unavailable at s. States without any action are terminal (v = 0).
struct FiniteMdp {
    std::size_t num_states = 0;
    std::size_t num_actions = 0;
    std::vector<std::vector<std::optional<std::vector<Transition>>>> rows;

    FiniteMdp() = default;
    FiniteMdp(std::size_t states, std::size_t actions);

    bool available(std::size_t s, std::size_t b) const { return rows[s][b].has_value(); }
    std::vector<std::size_t> actions_at(std::size_t s) const;
    /// Expected one-step reward of (s,b).
    double mean_reward(std::size_t s, std::size_t b) const;
    /// Throws InvalidModelError on out-of-range successors, negative or
    /// non-normalized rows (tolerance 1e-12), or non-finite rewards.
    void validate() const;
};

/// Abstract state-based policy; rows[s] is a distribution over abstract actions.
struct AbstractPolicy {
    std::vector<std::vector<double>> rows;

    bool deterministic() const;
    /// Greedy action of a point-mass row; nullopt for empty or mixed rows.
    std::optional<std::size_t> action(std::size_t s) const;
    /// Checks normalization and that no mass sits on unavailable actions.
    void validate(const FiniteMdp& mdp) const;

    static AbstractPolicy point_masses(const FiniteMdp& mdp, const std::vector<std::optional<std::size_t>>& choice);
};

struct SolveResult {
    /// q[s][b]; NaN where b is unavailable at s.
    std::vector<std::vector<double>> q;
    std::vector<double> v;
    AbstractPolicy policy;
    double residual = 0.0;
    std::size_t iterations = 0;
};

/// Jacobi value iteration. Stops once a sweep changes v by less than
/// tol·(1−γ)/(2γ); the greedy policy breaks ties toward the lowest action.
SolveResult value_iteration(const FiniteMdp& mdp, double gamma, double tol = 1e-12,
                            std::size_t max_iterations = 10'000'000);

/// Solves the evaluation equations for q^π, densely when there are at most
/// 10⁴ state-action pairs and iteratively otherwise.
SolveResult policy_evaluation(const FiniteMdp& mdp, const AbstractPolicy& policy, double gamma, double tol = 1e-12);

/// Sup-norm Bellman residual of q (optimality backup when policy is null).
double bellman_residual(const FiniteMdp& mdp, const std::vector<std::vector<double>>& q, double gamma,
                        const AbstractPolicy* policy = nullptr);

struct RegionalSolution {
    std::vector<double> q;
    double residual = 0.0;
    /// Entrywise q − closed_form when a closed form was supplied.
    std::optional<std::vector<double>> closed_form;
    std::optional<std::vector<double>> deltas;
};

/// Solves Q = r + γPQ directly. P must be square, row-stochastic and match r.
RegionalSolution solve_regional_system(const std::vector<std::vector<double>>& p, const std::vector<double>& r,
                                       double gamma, std::optional<std::vector<double>> closed_form = std::nullopt);

}  // namespace hgrl
