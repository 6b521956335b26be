#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hgrl/abstraction.hpp"
#include "hgrl/mdp_solver.hpp"
#include "hgrl/surrogate.hpp"
#include "hgrl/values.hpp"

namespace hgrl {

enum class CertificateKind {
    T1_mdp_pi,
    T2_mdp_exact,
    T3_mdp_star,
    T4_q_pi,
    T5_q_star,
    T6_v_pi,
    T7_v_star,
    L_qbq,
    L_subopt_action,
};

std::string to_string(CertificateKind kind);
std::optional<CertificateKind> parse_certificate_kind(const std::string& name);
const std::vector<CertificateKind>& all_certificate_kinds();

/// One inequality lhs ≤ rhs + slack.
struct Clause {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool pass = false;

    double margin() const { return rhs + slack - lhs; }
};

struct BoundCertificate {
    CertificateKind kind{};
    /// γ, horizon, tail and every measured ε the formulas consume.
    std::map<std::string, double> inputs;
    std::vector<Clause> clauses;
    /// The clause with the smallest margin.
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    /// All clauses hold.
    bool pass = false;
    /// The theorem's hypothesis as measured on the instance. A bound whose
    /// hypothesis fails is still checked and reported.
    bool hypothesis_satisfied = true;
    std::string hypothesis;
};

/// Fills the summary fields from the clauses.
void finalize(BoundCertificate& cert);

struct UpliftedPolicy {
    HistoryPolicy policy;
    AbstractPolicy source;
};

/// Π̆(h) = lowest original action a with ψ(h,a) = (f(h), π(f(h))). Checks every
/// history of the index eagerly; throws UpliftInfeasibleError naming (h, s, b).
UpliftedPolicy uplift_policy(const AbstractPolicy& pi, const HomomorphismIndex& index, const Alphabets& alphabets);

struct CertifyOptions {
    InverseMode inverse_mode = InverseMode::uniform;
    /// Behavior policy behind the class weights; uniform when absent.
    std::optional<HistoryPolicy> behavior;
    double solver_tolerance = 1e-12;
    double numerical_slack = 1e-9;
    /// epsilon_mdp at or below this counts as an exact MDP homomorphism.
    double mdp_threshold = 1e-9;
};

/// Computes and caches everything the certificates need for one instance:
/// history-side values, the surrogate MDP and its solutions, the uplifted
/// policy and the gap reports.
class Certifier {
public:
    /// `policy` is the Π of the on-policy theorems; uniform when absent.
    Certifier(OriginalProcess process, const HomomorphismMap& map, std::vector<WeightedHistory> histories,
              DiscountConfig cfg, std::optional<HistoryPolicy> policy = std::nullopt, CertifyOptions options = {});
    ~Certifier();
    Certifier(const Certifier&) = delete;
    Certifier& operator=(const Certifier&) = delete;

    BoundCertificate certify(CertificateKind kind);

    const OriginalProcess& process() const;
    const HomomorphismIndex& index() const;
    const DiscountConfig& config() const;
    const HistoryPolicy& policy() const;
    const CertifyOptions& options() const;

    const OptimalQ& optimal();
    const QTable& policy_q();
    const StochasticInverse& inverse();
    const SurrogateMdp& surrogate();
    const SolveResult& optimal_solve();
    const AbstractPolicy& representative();
    const SolveResult& representative_solve();
    const UpliftedPolicy& uplifted();
    const QTable& uplifted_q();
    const GapReport& policy_gaps();
    const GapReport& optimal_gaps();
    double epsilon_b_representative();
    double epsilon_b_optimal();
    /// Every context of the deepest histories already occurs at a shallower
    /// depth, so suprema over the enumeration equal suprema over all histories.
    bool coverage_complete();

private:
    struct State;
    std::unique_ptr<State> state_;
};

/// Lemma check on a finite MDP: ε = max_s v*(s) − q*(s,π(s)) for a
/// deterministic π, then 0 ≤ v* − v^π ≤ ε/(1−γ) and 0 ≤ q* − q^π ≤ γε/(1−γ).
BoundCertificate certify_subopt_mdp(const FiniteMdp& mdp, const AbstractPolicy& pi, double gamma,
                                    double tol = 1e-12, double numerical_slack = 1e-9);

}  // namespace hgrl
