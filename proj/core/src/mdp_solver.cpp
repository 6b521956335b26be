#include "hgrl/mdp_solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "hgrl/errors.hpp"

namespace hgrl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTie = 1e-12;
constexpr std::size_t kDenseLimit = 10'000;

void check_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidModelError("discount must lie in [0, 1)");
}

double backup(const std::vector<Transition>& row, const std::vector<double>& v, double gamma) {
    double acc = 0.0;
    for (const auto& t : row) acc += t.probability * (t.reward + gamma * v[t.next]);
    return acc;
}

std::vector<std::vector<double>> q_from_v(const FiniteMdp& mdp, const std::vector<double>& v, double gamma) {
    std::vector<std::vector<double>> q(mdp.num_states, std::vector<double>(mdp.num_actions, kNaN));
    for (std::size_t s = 0; s < mdp.num_states; ++s)
        for (std::size_t b = 0; b < mdp.num_actions; ++b)
            if (mdp.rows[s][b]) q[s][b] = backup(*mdp.rows[s][b], v, gamma);
    return q;
}

double policy_value(const FiniteMdp& mdp, const AbstractPolicy& pi, const std::vector<std::vector<double>>& q,
                    std::size_t s) {
    double v = 0.0;
    for (std::size_t b = 0; b < mdp.num_actions; ++b)
        if (mdp.rows[s][b]) v += pi.rows[s][b] * q[s][b];
    return v;
}

double max_value(const FiniteMdp& mdp, const std::vector<std::vector<double>>& q, std::size_t s) {
    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t b = 0; b < mdp.num_actions; ++b)
        if (mdp.rows[s][b]) {
            best = std::max(best, q[s][b]);
            any = true;
        }
    return any ? best : 0.0;
}

}  // namespace

FiniteMdp::FiniteMdp(std::size_t states, std::size_t actions)
    : num_states(states), num_actions(actions), rows(states, std::vector<std::optional<std::vector<Transition>>>(actions)) {}

std::vector<std::size_t> FiniteMdp::actions_at(std::size_t s) const {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < num_actions; ++b)
        if (rows[s][b]) out.push_back(b);
    return out;
}

double FiniteMdp::mean_reward(std::size_t s, std::size_t b) const {
    double r = 0.0;
    for (const auto& t : rows[s][b].value()) r += t.probability * t.reward;
    return r;
}

void FiniteMdp::validate() const {
    if (rows.size() != num_states) throw InvalidModelError("MDP row table has the wrong state count");
    for (std::size_t s = 0; s < num_states; ++s) {
        if (rows[s].size() != num_actions) throw InvalidModelError("MDP row table has the wrong action count");
        for (std::size_t b = 0; b < num_actions; ++b) {
            if (!rows[s][b]) continue;
            double total = 0.0;
            for (const auto& t : *rows[s][b]) {
                if (t.next >= num_states) throw InvalidModelError("MDP successor out of range");
                if (!(t.probability >= 0.0)) throw InvalidModelError("MDP probability negative");
                if (!std::isfinite(t.reward)) throw InvalidModelError("MDP reward not finite");
                total += t.probability;
            }
            if (std::abs(total - 1.0) > 1e-12) throw InvalidModelError("MDP row does not normalize");
        }
    }
}

bool AbstractPolicy::deterministic() const {
    for (std::size_t s = 0; s < rows.size(); ++s)
        if (!rows[s].empty() && std::any_of(rows[s].begin(), rows[s].end(), [](double p) { return p > 0.0; }) &&
            !action(s))
            return false;
    return true;
}

std::optional<std::size_t> AbstractPolicy::action(std::size_t s) const {
    const auto& row = rows.at(s);
    std::optional<std::size_t> found;
    for (std::size_t b = 0; b < row.size(); ++b) {
        if (row[b] == 1.0) {
            found = b;
        } else if (row[b] != 0.0) {
            return std::nullopt;
        }
    }
    return found;
}

void AbstractPolicy::validate(const FiniteMdp& mdp) const {
    if (rows.size() != mdp.num_states) throw InvalidModelError("policy row count differs from the MDP");
    for (std::size_t s = 0; s < mdp.num_states; ++s) {
        const auto& row = rows[s];
        if (row.size() != mdp.num_actions) throw InvalidModelError("policy row has the wrong action count");
        double total = 0.0;
        for (std::size_t b = 0; b < row.size(); ++b) {
            if (!(row[b] >= 0.0)) throw InvalidModelError("policy probability negative");
            if (row[b] > 0.0 && !mdp.rows[s][b]) throw InvalidModelError("policy puts mass on an unavailable action");
            total += row[b];
        }
        bool terminal = mdp.actions_at(s).empty();
        if (terminal ? total != 0.0 : std::abs(total - 1.0) > 1e-12)
            throw InvalidModelError("policy row does not normalize");
    }
}

AbstractPolicy AbstractPolicy::point_masses(const FiniteMdp& mdp, const std::vector<std::optional<std::size_t>>& choice) {
    AbstractPolicy pi;
    pi.rows.assign(mdp.num_states, std::vector<double>(mdp.num_actions, 0.0));
    for (std::size_t s = 0; s < mdp.num_states; ++s)
        if (choice.at(s)) pi.rows[s][*choice[s]] = 1.0;
    return pi;
}

SolveResult value_iteration(const FiniteMdp& mdp, double gamma, double tol, std::size_t max_iterations) {
    check_gamma(gamma);
    if (!(tol > 0.0)) throw InvalidModelError("tolerance must be positive");
    mdp.validate();
    const double stop = gamma > 0.0 ? tol * (1.0 - gamma) / (2.0 * gamma) : std::numeric_limits<double>::infinity();
    std::vector<double> v(mdp.num_states, 0.0), next(mdp.num_states, 0.0);
    SolveResult res;
    for (;;) {
        double change = 0.0;
        for (std::size_t s = 0; s < mdp.num_states; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            bool any = false;
            for (std::size_t b = 0; b < mdp.num_actions; ++b)
                if (mdp.rows[s][b]) {
                    best = std::max(best, backup(*mdp.rows[s][b], v, gamma));
                    any = true;
                }
            next[s] = any ? best : 0.0;
            change = std::max(change, std::abs(next[s] - v[s]));
        }
        v.swap(next);
        ++res.iterations;
        if (change < stop) break;
        if (res.iterations >= max_iterations) throw SizeLimitError("value iteration hit its iteration cap");
    }
    res.q = q_from_v(mdp, v, gamma);
    res.v.resize(mdp.num_states);
    std::vector<std::optional<std::size_t>> choice(mdp.num_states);
    for (std::size_t s = 0; s < mdp.num_states; ++s) {
        res.v[s] = max_value(mdp, res.q, s);
        for (std::size_t b = 0; b < mdp.num_actions; ++b)
            if (mdp.rows[s][b] && res.q[s][b] >= res.v[s] - kTie) {
                choice[s] = b;
                break;
            }
    }
    res.policy = AbstractPolicy::point_masses(mdp, choice);
    res.residual = bellman_residual(mdp, res.q, gamma);
    return res;
}

SolveResult policy_evaluation(const FiniteMdp& mdp, const AbstractPolicy& policy, double gamma, double tol) {
    check_gamma(gamma);
    mdp.validate();
    policy.validate(mdp);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::vector<long>> slot(mdp.num_states, std::vector<long>(mdp.num_actions, -1));
    for (std::size_t s = 0; s < mdp.num_states; ++s)
        for (std::size_t b = 0; b < mdp.num_actions; ++b)
            if (mdp.rows[s][b]) {
                slot[s][b] = static_cast<long>(pairs.size());
                pairs.emplace_back(s, b);
            }
    const std::size_t n = pairs.size();
    SolveResult res;
    res.policy = policy;
    if (n <= kDenseLimit) {
        std::vector<Eigen::Triplet<double>> entries;
        Eigen::VectorXd rhs(static_cast<long>(n));
        for (std::size_t i = 0; i < n; ++i) {
            auto [s, b] = pairs[i];
            const long row = static_cast<long>(i);
            entries.emplace_back(row, row, 1.0);
            rhs[row] = mdp.mean_reward(s, b);
            for (const auto& t : *mdp.rows[s][b])
                for (std::size_t b2 = 0; b2 < mdp.num_actions; ++b2)
                    if (slot[t.next][b2] >= 0 && policy.rows[t.next][b2] > 0.0)
                        entries.emplace_back(row, slot[t.next][b2], -gamma * t.probability * policy.rows[t.next][b2]);
        }
        Eigen::SparseMatrix<double> a(static_cast<long>(n), static_cast<long>(n));
        a.setFromTriplets(entries.begin(), entries.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success) throw InvalidModelError("policy evaluation system is singular");
        Eigen::VectorXd x = lu.solve(rhs);
        res.q.assign(mdp.num_states, std::vector<double>(mdp.num_actions, kNaN));
        for (std::size_t i = 0; i < n; ++i) res.q[pairs[i].first][pairs[i].second] = x[static_cast<long>(i)];
        res.iterations = 1;
    } else {
        const double stop = gamma > 0.0 ? tol * (1.0 - gamma) / (2.0 * gamma) : std::numeric_limits<double>::infinity();
        std::vector<double> v(mdp.num_states, 0.0), next(mdp.num_states, 0.0);
        for (;;) {
            auto q = q_from_v(mdp, v, gamma);
            double change = 0.0;
            for (std::size_t s = 0; s < mdp.num_states; ++s) {
                next[s] = policy_value(mdp, policy, q, s);
                change = std::max(change, std::abs(next[s] - v[s]));
            }
            v.swap(next);
            ++res.iterations;
            if (change < stop) break;
            if (res.iterations >= 10'000'000) throw SizeLimitError("policy evaluation hit its iteration cap");
        }
        res.q = q_from_v(mdp, v, gamma);
    }
    res.v.resize(mdp.num_states);
    for (std::size_t s = 0; s < mdp.num_states; ++s) res.v[s] = policy_value(mdp, policy, res.q, s);
    res.residual = bellman_residual(mdp, res.q, gamma, &policy);
    return res;
}

double bellman_residual(const FiniteMdp& mdp, const std::vector<std::vector<double>>& q, double gamma,
                        const AbstractPolicy* policy) {
    std::vector<double> v(mdp.num_states);
    for (std::size_t s = 0; s < mdp.num_states; ++s)
        v[s] = policy ? policy_value(mdp, *policy, q, s) : max_value(mdp, q, s);
    double residual = 0.0;
    for (std::size_t s = 0; s < mdp.num_states; ++s)
        for (std::size_t b = 0; b < mdp.num_actions; ++b)
            if (mdp.rows[s][b]) residual = std::max(residual, std::abs(backup(*mdp.rows[s][b], v, gamma) - q[s][b]));
    return residual;
}

RegionalSolution solve_regional_system(const std::vector<std::vector<double>>& p, const std::vector<double>& r,
                                       double gamma, std::optional<std::vector<double>> closed_form) {
    check_gamma(gamma);
    const std::size_t n = r.size();
    if (p.size() != n) throw InvalidModelError("regional matrix and reward vector sizes differ");
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(static_cast<long>(n), static_cast<long>(n));
    Eigen::VectorXd rhs(static_cast<long>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (p[i].size() != n) throw InvalidModelError("regional matrix is not square");
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!(p[i][j] >= 0.0)) throw InvalidModelError("regional matrix has a negative entry");
            total += p[i][j];
            a(static_cast<long>(i), static_cast<long>(j)) -= gamma * p[i][j];
        }
        if (std::abs(total - 1.0) > 1e-12) throw InvalidModelError("regional matrix row does not normalize");
        rhs[static_cast<long>(i)] = r[i];
    }
    Eigen::VectorXd x = a.partialPivLu().solve(rhs);
    RegionalSolution sol;
    sol.q.assign(x.data(), x.data() + n);
    for (std::size_t i = 0; i < n; ++i) {
        double back = r[i];
        for (std::size_t j = 0; j < n; ++j) back += gamma * p[i][j] * sol.q[j];
        sol.residual = std::max(sol.residual, std::abs(back - sol.q[i]));
    }
    if (closed_form) {
        if (closed_form->size() != n) throw InvalidModelError("closed form has the wrong length");
        std::vector<double> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = sol.q[i] - (*closed_form)[i];
        sol.deltas = std::move(d);
        sol.closed_form = std::move(closed_form);
    }
    return sol;
}

}  // namespace hgrl
