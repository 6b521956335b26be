#include "hgrl/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "hgrl/errors.hpp"

namespace hgrl {

namespace {

struct KindName {
    CertificateKind kind;
    const char* name;
};

constexpr KindName kKindNames[] = {
    {CertificateKind::T1_mdp_pi, "T1_mdp_pi"},       {CertificateKind::T2_mdp_exact, "T2_mdp_exact"},
    {CertificateKind::T3_mdp_star, "T3_mdp_star"},   {CertificateKind::T4_q_pi, "T4_q_pi"},
    {CertificateKind::T5_q_star, "T5_q_star"},       {CertificateKind::T6_v_pi, "T6_v_pi"},
    {CertificateKind::T7_v_star, "T7_v_star"},       {CertificateKind::L_qbq, "L_qbq"},
    {CertificateKind::L_subopt_action, "L_subopt_action"},
};

Clause make_clause(std::string name, double lhs, double rhs, double slack) {
    return {std::move(name), lhs, rhs, slack, lhs <= rhs + slack};
}

double row_value(const std::vector<ValueInterval>& row, const ActionDistribution& pi) {
    double v = 0.0;
    for (std::size_t a = 0; a < row.size(); ++a) v += pi[a] * row[a].midpoint();
    return v;
}

double row_max(const std::vector<ValueInterval>& row) {
    double v = -std::numeric_limits<double>::infinity();
    for (const auto& q : row) v = std::max(v, q.midpoint());
    return v;
}

}  // namespace

std::string to_string(CertificateKind kind) {
    for (const auto& k : kKindNames)
        if (k.kind == kind) return k.name;
    return "unknown";
}

std::optional<CertificateKind> parse_certificate_kind(const std::string& name) {
    for (const auto& k : kKindNames)
        if (name == k.name) return k.kind;
    return std::nullopt;
}

const std::vector<CertificateKind>& all_certificate_kinds() {
    static const std::vector<CertificateKind> kinds = [] {
        std::vector<CertificateKind> out;
        for (const auto& k : kKindNames) out.push_back(k.kind);
        return out;
    }();
    return kinds;
}

void finalize(BoundCertificate& cert) {
    cert.pass = true;
    const Clause* worst = nullptr;
    for (const auto& c : cert.clauses) {
        cert.pass = cert.pass && c.pass;
        if (!worst || c.margin() < worst->margin()) worst = &c;
    }
    if (worst) {
        cert.lhs = worst->lhs;
        cert.rhs = worst->rhs;
        cert.slack = worst->slack;
    }
}

UpliftedPolicy uplift_policy(const AbstractPolicy& pi, const HomomorphismIndex& index, const Alphabets& alphabets) {
    const HomomorphismMap map = index.map();
    const std::size_t na = alphabets.num_actions();
    auto choose = [pi, map, na, alphabets](const History& h) -> Action {
        const AbstractState s = map.state_of(h);
        auto b = s < pi.rows.size() ? pi.action(s) : std::nullopt;
        if (!b)
            throw UpliftInfeasibleError("no deterministic abstract action at state " + map.states()[s] + " for history " +
                                        h.to_string(alphabets));
        for (Action a = 0; a < na; ++a)
            if (map.action_of(h, a) == *b) return a;
        throw UpliftInfeasibleError("history " + h.to_string(alphabets) + " at state " + map.states()[s] +
                                    " has no original action realizing abstract action " + map.abstract_actions()[*b]);
    };
    for (const auto& wh : index.histories()) choose(wh.history);
    HistoryPolicy policy = HistoryPolicy::deterministic(na, choose, map.memory(), "uplifted");
    return {std::move(policy), pi};
}

struct Certifier::State {
    OriginalProcess process;
    HomomorphismIndex index;
    DiscountConfig cfg;
    HistoryPolicy policy;
    CertifyOptions options;

    std::optional<OptimalQ> optimal;
    std::optional<QTable> policy_q;
    std::unique_ptr<StochasticInverse> inverse;
    std::optional<SurrogateMdp> surrogate;
    std::optional<SolveResult> optimal_solve;
    std::optional<AbstractPolicy> representative;
    std::optional<SolveResult> representative_solve;
    std::optional<UpliftedPolicy> uplifted;
    std::optional<QTable> uplifted_q;
    std::optional<GapReport> policy_gaps;
    std::optional<GapReport> optimal_gaps;
    std::optional<double> eb_representative;
    std::optional<double> eb_optimal;
    std::optional<bool> coverage;
};

Certifier::Certifier(OriginalProcess process, const HomomorphismMap& map, std::vector<WeightedHistory> histories,
                     DiscountConfig cfg, std::optional<HistoryPolicy> policy, CertifyOptions options) {
    cfg.validate();
    const std::size_t na = process.alphabets().num_actions();
    HistoryPolicy pi = policy ? std::move(*policy) : HistoryPolicy::uniform(na);
    HomomorphismIndex index(map, std::move(histories), na);
    state_ = std::make_unique<State>(
        State{std::move(process), std::move(index), cfg, std::move(pi), std::move(options), {}, {}, {}, {}, {}, {}, {},
              {}, {}, {}, {}, {}, {}, {}});
}

Certifier::~Certifier() = default;

const OriginalProcess& Certifier::process() const { return state_->process; }
const HomomorphismIndex& Certifier::index() const { return state_->index; }
const DiscountConfig& Certifier::config() const { return state_->cfg; }
const HistoryPolicy& Certifier::policy() const { return state_->policy; }
const CertifyOptions& Certifier::options() const { return state_->options; }

const OptimalQ& Certifier::optimal() {
    if (!state_->optimal) state_->optimal = optimal_q(state_->process, state_->index.histories(), state_->cfg);
    return *state_->optimal;
}

const QTable& Certifier::policy_q() {
    if (!state_->policy_q)
        state_->policy_q = q_table(state_->process, &state_->policy, state_->index.histories(), state_->cfg);
    return *state_->policy_q;
}

const StochasticInverse& Certifier::inverse() {
    if (!state_->inverse) {
        const HistoryPolicy* behavior = state_->options.behavior ? &*state_->options.behavior : nullptr;
        state_->inverse = std::make_unique<StochasticInverse>(
            build_inverse(state_->index, state_->options.inverse_mode, state_->process, behavior));
    }
    return *state_->inverse;
}

const SurrogateMdp& Certifier::surrogate() {
    if (!state_->surrogate)
        state_->surrogate = surrogate_mdp(InducedProcess(state_->process, state_->index.map()), inverse());
    return *state_->surrogate;
}

const SolveResult& Certifier::optimal_solve() {
    if (!state_->optimal_solve)
        state_->optimal_solve = value_iteration(surrogate().mdp, state_->cfg.gamma, state_->options.solver_tolerance);
    return *state_->optimal_solve;
}

const AbstractPolicy& Certifier::representative() {
    if (!state_->representative) {
        const auto& map = state_->index.map();
        InducedPolicy induced(state_->policy, map);
        AbstractPolicy pi;
        pi.rows.assign(map.num_states(), std::vector<double>(map.num_abstract_actions(), 0.0));
        for (AbstractState s = 0; s < map.num_states(); ++s)
            if (state_->index.reachable(s)) pi.rows[s] = representative_policy(induced, state_->index, s);
        state_->representative = std::move(pi);
    }
    return *state_->representative;
}

const SolveResult& Certifier::representative_solve() {
    if (!state_->representative_solve)
        state_->representative_solve =
            policy_evaluation(surrogate().mdp, representative(), state_->cfg.gamma, state_->options.solver_tolerance);
    return *state_->representative_solve;
}

const UpliftedPolicy& Certifier::uplifted() {
    if (!state_->uplifted)
        state_->uplifted = uplift_policy(optimal_solve().policy, state_->index, state_->process.alphabets());
    return *state_->uplifted;
}

const QTable& Certifier::uplifted_q() {
    if (!state_->uplifted_q)
        state_->uplifted_q = q_table(state_->process, &uplifted().policy, state_->index.histories(), state_->cfg);
    return *state_->uplifted_q;
}

const GapReport& Certifier::policy_gaps() {
    if (!state_->policy_gaps)
        state_->policy_gaps = gap_report(state_->process, state_->policy, state_->index, policy_q(), state_->cfg);
    return *state_->policy_gaps;
}

const GapReport& Certifier::optimal_gaps() {
    if (!state_->optimal_gaps)
        state_->optimal_gaps = gap_report(state_->process, optimal().greedy, state_->index, optimal().q, state_->cfg);
    return *state_->optimal_gaps;
}

double Certifier::epsilon_b_representative() {
    if (!state_->eb_representative)
        state_->eb_representative = epsilon_b(policy_q(), state_->policy, inverse(), representative());
    return *state_->eb_representative;
}

double Certifier::epsilon_b_optimal() {
    if (!state_->eb_optimal) state_->eb_optimal = epsilon_b(optimal().q, optimal().greedy, inverse(), optimal_solve().policy);
    return *state_->eb_optimal;
}

bool Certifier::coverage_complete() {
    if (!state_->coverage) {
        auto k = combine_memory(combine_memory(state_->process.memory_bound(), state_->index.map().memory()),
                                state_->policy.memory());
        if (state_->options.behavior) k = combine_memory(k, state_->options.behavior->memory());
        bool ok = k.has_value();
        if (ok) {
            const auto& hs = state_->index.histories();
            std::size_t depth = 0;
            for (const auto& wh : hs) depth = std::max(depth, wh.history.size());
            std::set<History> shallow;
            for (const auto& wh : hs)
                if (wh.history.size() < depth) shallow.insert(wh.history.suffix(*k));
            for (const auto& wh : hs)
                if (wh.history.size() == depth && !shallow.count(wh.history.suffix(*k))) {
                    ok = false;
                    break;
                }
        }
        state_->coverage = ok;
    }
    return *state_->coverage;
}

namespace {

/// Largest total mass Σ_a B^π(a|h,s) over histories with joint mass.
double max_measure_mass(const StochasticInverse& inverse, const AbstractPolicy& pi) {
    const auto& index = inverse.index();
    double m = 0.0;
    for (std::size_t i = 0; i < index.histories().size(); ++i) {
        if (inverse.history_mass(i) <= 0.0) continue;
        double total = 0.0;
        for (double x : induced_action_measure(inverse, pi.rows.at(index.state_at(i)), i)) total += x;
        m = std::max(m, total);
    }
    return m;
}

}  // namespace

BoundCertificate Certifier::certify(CertificateKind kind) {
    const double gamma = state_->cfg.gamma;
    const double tau = state_->cfg.tail();
    const double tol = state_->options.solver_tolerance;
    const double nu = state_->options.numerical_slack;
    const auto& index = state_->index;
    const auto& map = index.map();
    const auto& hs = index.histories();
    const std::size_t na = index.num_actions();

    BoundCertificate cert;
    cert.kind = kind;
    cert.inputs["gamma"] = gamma;
    cert.inputs["horizon"] = static_cast<double>(state_->cfg.horizon);
    cert.inputs["tail"] = tau;
    cert.inputs["solver_tolerance"] = tol;
    cert.inputs["numerical_slack"] = nu;
    cert.inputs["coverage_complete"] = coverage_complete() ? 1.0 : 0.0;

    // |abstract − history| over every enumerated pair, for a history table
    // paired with an abstract solve.
    auto pair_gaps = [&](const QTable& q, const std::function<ActionDistribution(const History&)>& pi,
                         const SolveResult& solve) {
        double dq = 0.0, dv = 0.0;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const History& h = hs[i].history;
            const auto& row = q.at(h);
            const AbstractState s = index.state_at(i);
            for (Action a = 0; a < na; ++a)
                dq = std::max(dq, std::abs(solve.q[s][map.action_of(h, a)] - row[a].midpoint()));
            const double v = pi ? row_value(row, pi(h)) : row_max(row);
            dv = std::max(dv, std::abs(solve.v[s] - v));
        }
        return std::pair{dq, dv};
    };
    // max over (s,b) of |⟨Q⟩_B − q(s,b)|.
    auto b_average_gap = [&](const QTable& q, const SolveResult& solve) {
        double d = 0.0;
        for (const auto& [cell, entries] : inverse().cells())
            d = std::max(d, std::abs(b_average_q(q, inverse(), cell.first, cell.second) - solve.q[cell.first][cell.second]));
        return d;
    };
    auto policy_fn = [this](const History& h) { return state_->policy(h); };

    auto mdp_hypothesis = [&] {
        const double e = policy_gaps().epsilon_mdp;
        cert.inputs["epsilon_mdp"] = e;
        std::ostringstream text;
        text << "epsilon_mdp <= " << state_->options.mdp_threshold;
        cert.hypothesis = text.str();
        cert.hypothesis_satisfied = e <= state_->options.mdp_threshold;
    };

    switch (kind) {
        case CertificateKind::T1_mdp_pi:
        case CertificateKind::T2_mdp_exact: {
            mdp_hypothesis();
            const auto& g = policy_gaps();
            double eq = 0.0, ep = 0.0;
            for (std::size_t s = 0; s < g.epsilon_q_rep.size(); ++s) {
                eq = std::max(eq, g.epsilon_q_rep[s]);
                ep = std::max(ep, g.epsilon_pi_rep[s]);
            }
            cert.inputs["epsilon_max"] = g.epsilon_max;
            cert.inputs["epsilon_q_rep_max"] = eq;
            cert.inputs["epsilon_pi_rep_max"] = ep;
            auto [dq, dv] = pair_gaps(policy_q(), policy_fn, representative_solve());
            if (kind == CertificateKind::T1_mdp_pi) {
                cert.clauses.push_back(make_clause("q_representative", dq, gamma * g.epsilon_max / (1.0 - gamma),
                                                   tau / 2 + tol + gamma * tau / (1.0 - gamma) + nu));
                cert.clauses.push_back(make_clause("v_representative", dv, g.epsilon_max / (1.0 - gamma),
                                                   tau / 2 + tol + tau / (1.0 - gamma) + nu));
            } else {
                // Π_ψ constant on every pre-image
                const double similarity = ep;
                cert.inputs["policy_similarity"] = similarity;
                cert.hypothesis += " and policy similarity <= 1e-12";
                cert.hypothesis_satisfied = cert.hypothesis_satisfied && similarity <= 1e-12;
                cert.clauses.push_back(make_clause("q_equality", dq, 0.0, tau / 2 + tol + nu));
                cert.clauses.push_back(make_clause("v_equality", dv, 0.0, tau / 2 + tol + nu));
            }
            break;
        }
        case CertificateKind::T3_mdp_star: {
            mdp_hypothesis();
            auto [dq, dv] = pair_gaps(optimal().q, nullptr, optimal_solve());
            cert.clauses.push_back(make_clause("q_star_equality", dq, 0.0, tau / 2 + tol + nu));
            cert.clauses.push_back(make_clause("v_star_equality", dv, 0.0, tau / 2 + tol + nu));
            double loss = 0.0;
            for (const auto& wh : hs) {
                const auto& row = uplifted_q().at(wh.history);
                loss = std::max(loss, std::abs(row_max(optimal().q.at(wh.history)) -
                                               row_value(row, uplifted().policy(wh.history))));
            }
            cert.clauses.push_back(make_clause("uplift_optimal", loss, 0.0, tau + nu));
            break;
        }
        case CertificateKind::T4_q_pi: {
            const auto& g = policy_gaps();
            const double eps = g.epsilon_q_uniform;
            double ep = 0.0;
            for (double x : g.epsilon_pi_rep) ep = std::max(ep, x);
            const double eps_s = 2 * eps + ep / (1.0 - gamma);
            cert.inputs["epsilon"] = eps;
            cert.inputs["epsilon_pi_rep_max"] = ep;
            cert.inputs["epsilon_s"] = eps_s;
            cert.hypothesis = "measured: |Q(h,a) - Q(h',a')| <= epsilon on merged pairs";
            auto [dq, dv] = pair_gaps(policy_q(), policy_fn, representative_solve());
            cert.clauses.push_back(make_clause("q_representative", dq, eps + gamma * eps_s / (1.0 - gamma),
                                               tau / 2 + tol + tau * (1.0 + 2 * gamma / (1.0 - gamma)) + nu));
            cert.clauses.push_back(
                make_clause("v_representative", dv, eps_s / (1.0 - gamma), tau / 2 + tol + 2 * tau / (1.0 - gamma) + nu));
            break;
        }
        case CertificateKind::T5_q_star: {
            const double eps = optimal_gaps().epsilon_q_uniform;
            cert.inputs["epsilon"] = eps;
            cert.hypothesis = "measured: |Q*(h,a) - Q*(h',a')| <= epsilon on merged pairs";
            auto [dq, dv] = pair_gaps(optimal().q, nullptr, optimal_solve());
            const double rhs_slack = 2 * tau / (1.0 - gamma);
            cert.clauses.push_back(make_clause("q_star", dq, 2 * eps / (1.0 - gamma), tau / 2 + tol + rhs_slack + nu));
            cert.clauses.push_back(make_clause("v_star", dv, 2 * eps / (1.0 - gamma), tau / 2 + tol + rhs_slack + nu));
            double loss = -std::numeric_limits<double>::infinity();
            double gain = -std::numeric_limits<double>::infinity();
            for (const auto& wh : hs) {
                const double d = row_max(optimal().q.at(wh.history)) -
                                 row_value(uplifted_q().at(wh.history), uplifted().policy(wh.history));
                loss = std::max(loss, d);
                gain = std::max(gain, -d);
            }
            const double scale = (1.0 - gamma) * (1.0 - gamma);
            cert.clauses.push_back(make_clause("uplift_loss", loss, 4 * eps / scale, tau + 4 * tau / scale + nu));
            cert.clauses.push_back(make_clause("uplift_nonnegative", gain, 0.0, tau + nu));
            break;
        }
        case CertificateKind::T6_v_pi:
        case CertificateKind::T7_v_star: {
            const bool star = kind == CertificateKind::T7_v_star;
            const QTable& q = star ? optimal().q : policy_q();
            const GapReport& g = star ? optimal_gaps() : policy_gaps();
            const SolveResult& solve = star ? optimal_solve() : representative_solve();
            const AbstractPolicy& pi = star ? optimal_solve().policy : representative();
            const double eps = g.epsilon_v_uniform;
            const double eb = star ? epsilon_b_optimal() : epsilon_b_representative();
            const double mass = max_measure_mass(inverse(), pi);
            // ε and ε_B each move by at most this much under the truncation.
            const double eps_sens = tau + tau / 2 * (1.0 + mass);
            cert.inputs["epsilon"] = eps;
            cert.inputs["epsilon_b"] = eb;
            cert.inputs["measure_mass_max"] = mass;
            cert.hypothesis = "measured: |V(h) - V(h')| <= epsilon on merged histories, epsilon_b from B^pi";
            const double dq = b_average_gap(q, solve);
            auto [unused, dv] = star ? pair_gaps(q, nullptr, solve) : pair_gaps(q, policy_fn, solve);
            (void)unused;
            const double k = star ? 3.0 / ((1.0 - gamma) * (1.0 - gamma)) : 1.0 / (1.0 - gamma);
            cert.clauses.push_back(make_clause("b_average_q", dq, gamma * k * (eps + eb), tau / 2 + tol + gamma * k * eps_sens + nu));
            cert.clauses.push_back(make_clause("v", dv, k * (eps + eb), tau / 2 + tol + k * eps_sens + nu));
            if (star) {
                const double exact_slack = eps_sens + nu;
                cert.inputs["exact_threshold"] = exact_slack;
                if (eps + eb <= exact_slack) {
                    // Some near-optimal action at every history must realize π*(s).
                    double failures = 0.0;
                    for (std::size_t i = 0; i < hs.size(); ++i) {
                        const auto& row = q.at(hs[i].history);
                        const double best = row_max(row);
                        const auto b = pi.action(index.state_at(i));
                        bool found = false;
                        for (Action a = 0; a < na && b; ++a)
                            if (row[a].midpoint() >= best - tau - nu && map.action_of(hs[i].history, a) == *b) found = true;
                        if (!found) failures += 1.0;
                    }
                    cert.clauses.push_back(make_clause("exact_action_identity", failures, 0.0, 0.0));
                }
            }
            break;
        }
        case CertificateKind::L_qbq: {
            auto lemma = [&](const char* name, const QTable& q, const std::function<ActionDistribution(const History&)>& pi,
                             const SolveResult& solve) {
                double eps = 0.0;
                for (std::size_t i = 0; i < hs.size(); ++i) {
                    const auto& row = q.at(hs[i].history);
                    const double v = pi ? row_value(row, pi(hs[i].history)) : row_max(row);
                    eps = std::max(eps, std::abs(v - solve.v[index.state_at(i)]));
                }
                cert.inputs[std::string("epsilon_") + name] = eps;
                cert.clauses.push_back(make_clause(std::string("b_average_") + name, b_average_gap(q, solve), gamma * eps,
                                                   tau / 2 + tol + gamma * (tau / 2 + tol) + nu));
            };
            cert.hypothesis = "measured: |V(h) - v(s)| <= epsilon";
            lemma("representative", policy_q(), policy_fn, representative_solve());
            lemma("optimal", optimal().q, nullptr, optimal_solve());
            break;
        }
        case CertificateKind::L_subopt_action: {
            double eps = 0.0;
            for (const auto& wh : hs) {
                const auto& row = optimal().q.at(wh.history);
                ActionDistribution p = uplifted().policy(wh.history);
                eps = std::max(eps, row_max(row) - row_value(row, p));
            }
            cert.inputs["epsilon"] = eps;
            cert.hypothesis = "measured: Q*(h, uplifted(h)) >= V*(h) - epsilon";
            double qloss = -std::numeric_limits<double>::infinity(), vloss = qloss, qgain = qloss, vgain = qloss;
            for (const auto& wh : hs) {
                const auto& opt = optimal().q.at(wh.history);
                const auto& up = uplifted_q().at(wh.history);
                for (Action a = 0; a < na; ++a) {
                    const double d = opt[a].midpoint() - up[a].midpoint();
                    qloss = std::max(qloss, d);
                    qgain = std::max(qgain, -d);
                }
                const double d = row_max(opt) - row_value(up, uplifted().policy(wh.history));
                vloss = std::max(vloss, d);
                vgain = std::max(vgain, -d);
            }
            cert.clauses.push_back(
                make_clause("q_loss", qloss, gamma * eps / (1.0 - gamma), tau + gamma * tau / (1.0 - gamma) + nu));
            cert.clauses.push_back(make_clause("v_loss", vloss, eps / (1.0 - gamma), tau + tau / (1.0 - gamma) + nu));
            cert.clauses.push_back(make_clause("q_nonnegative", qgain, 0.0, tau + nu));
            cert.clauses.push_back(make_clause("v_nonnegative", vgain, 0.0, tau + nu));
            break;
        }
    }
    finalize(cert);
    return cert;
}

BoundCertificate certify_subopt_mdp(const FiniteMdp& mdp, const AbstractPolicy& pi, double gamma, double tol,
                                    double numerical_slack) {
    SolveResult opt = value_iteration(mdp, gamma, tol);
    SolveResult eval = policy_evaluation(mdp, pi, gamma, tol);
    double eps = 0.0;
    for (std::size_t s = 0; s < mdp.num_states; ++s) {
        auto b = pi.action(s);
        if (!b) {
            if (!mdp.actions_at(s).empty()) throw InvalidModelError("lemma check needs a deterministic policy");
            continue;
        }
        eps = std::max(eps, opt.v[s] - opt.q[s][*b]);
    }
    double qloss = 0.0, vloss = 0.0, qgain = 0.0, vgain = 0.0;
    for (std::size_t s = 0; s < mdp.num_states; ++s) {
        vloss = std::max(vloss, opt.v[s] - eval.v[s]);
        vgain = std::max(vgain, eval.v[s] - opt.v[s]);
        for (std::size_t b : mdp.actions_at(s)) {
            qloss = std::max(qloss, opt.q[s][b] - eval.q[s][b]);
            qgain = std::max(qgain, eval.q[s][b] - opt.q[s][b]);
        }
    }
    BoundCertificate cert;
    cert.kind = CertificateKind::L_subopt_action;
    cert.inputs = {{"gamma", gamma}, {"epsilon", eps}, {"solver_tolerance", tol}, {"numerical_slack", numerical_slack}};
    cert.hypothesis = "measured: q*(s, pi(s)) >= v*(s) - epsilon";
    const double slack = 2 * tol + numerical_slack;
    cert.clauses.push_back(make_clause("q_loss", qloss, gamma * eps / (1.0 - gamma), slack));
    cert.clauses.push_back(make_clause("v_loss", vloss, eps / (1.0 - gamma), slack));
    cert.clauses.push_back(make_clause("q_nonnegative", qgain, 0.0, slack));
    cert.clauses.push_back(make_clause("v_nonnegative", vgain, 0.0, slack));
    finalize(cert);
    return cert;
}

}  // namespace hgrl
