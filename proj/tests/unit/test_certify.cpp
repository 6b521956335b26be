#include <gtest/gtest.h>

#include "builders.hpp"
#include "hgrl/certify.hpp"
#include "hgrl/errors.hpp"
#include "hgrl/fixtures.hpp"
#include "oracles.hpp"

using namespace hgrl;
using namespace hgrl::testing;

namespace {

const Clause& clause(const BoundCertificate& c, const std::string& name) {
    for (const auto& x : c.clauses)
        if (x.name == name) return x;
    throw std::runtime_error("no clause " + name);
}

GridWorldSpec symmetric_grid() {
    GridWorldSpec spec;
    spec.blocked.push_back({0, 5});
    return spec;
}

}  // namespace

TEST(CertificateKind, NamesRoundTrip) {
    EXPECT_EQ(all_certificate_kinds().size(), 9u);
    for (auto k : all_certificate_kinds()) EXPECT_EQ(parse_certificate_kind(to_string(k)), k);
    EXPECT_FALSE(parse_certificate_kind("T8"));
}

TEST(Finalize, PicksTheTightestClause) {
    BoundCertificate c;
    c.clauses = {{"a", 1.0, 2.0, 0.0, true}, {"b", 1.9, 2.0, 0.0, true}};
    finalize(c);
    EXPECT_TRUE(c.pass);
    EXPECT_DOUBLE_EQ(c.lhs, 1.9);
    c.clauses.push_back({"c", 3.0, 2.0, 0.5, false});
    finalize(c);
    EXPECT_FALSE(c.pass);
    EXPECT_DOUBLE_EQ(c.slack, 0.5);
    EXPECT_DOUBLE_EQ(c.clauses[2].margin(), -0.5);
}

TEST(Uplift, IdentityMapReturnsTheAbstractChoice) {
    auto p = bandit();
    auto id = identity_map(p);
    HomomorphismIndex index(id, enumerate_histories(p, 2), 2);
    FiniteMdp m(1, 2);
    m.rows[0][0] = std::vector<Transition>{{0, 1.0, 1.0}};
    m.rows[0][1] = std::vector<Transition>{{0, 0.0, 1.0}};
    auto up = uplift_policy(AbstractPolicy::point_masses(m, {1}), index, p.alphabets());
    for (const auto& wh : index.histories()) EXPECT_EQ(up.policy(wh.history), (ActionDistribution{0.0, 1.0}));
}

TEST(Uplift, MirroredCellsTakeTheMirroredAction) {
    auto g = build_gridworld(symmetric_grid());
    HomomorphismIndex index(g.diagonal, enumerate_histories(g.process, 2), 4);
    AbstractPolicy pi;
    pi.rows.assign(g.diagonal.num_states(), {1.0, 0.0, 0.0, 0.0});
    auto up = uplift_policy(pi, index, g.process.alphabets());
    EXPECT_EQ(up.policy(g.history_at({1, 0}))[kUp], 1.0);
    EXPECT_EQ(up.policy(g.history_at({0, 1}))[kRight], 1.0);
}

TEST(Uplift, InfeasibleChoiceNamesTheHistory) {
    auto g = build_gridworld(symmetric_grid());
    HomomorphismIndex index(g.diagonal, enumerate_histories(g.process, 1), 4);
    AbstractPolicy pi;
    pi.rows.assign(g.diagonal.num_states(), {0.0, 0.0, 1.0, 0.0});
    // diagonal cells and the start only realize up and down
    try {
        uplift_policy(pi, index, g.process.alphabets());
        FAIL();
    } catch (const UpliftInfeasibleError& e) {
        EXPECT_NE(std::string(e.what()).find("left"), std::string::npos);
    }
    AbstractPolicy mixed;
    mixed.rows.assign(g.diagonal.num_states(), {0.5, 0.5, 0.0, 0.0});
    EXPECT_THROW(uplift_policy(mixed, index, g.process.alphabets()), UpliftInfeasibleError);
}

TEST(Certifier, ExactFixturePassesEverything) {
    auto fx = exact_mdp_fixture({.seed = 3});
    Certifier c(fx.process, fx.map, enumerate_histories(fx.process, 2), {0.5, 30}, fx.policy);
    for (auto k : all_certificate_kinds()) {
        auto cert = c.certify(k);
        EXPECT_TRUE(cert.pass || k == CertificateKind::T2_mdp_exact) << to_string(k);
        EXPECT_EQ(cert.hypothesis_satisfied, k != CertificateKind::T2_mdp_exact) << to_string(k);
        EXPECT_EQ(cert.inputs.at("gamma"), 0.5);
        EXPECT_EQ(cert.inputs.at("horizon"), 30.0);
    }
    auto t3 = c.certify(CertificateKind::T3_mdp_star);
    EXPECT_LE(clause(t3, "q_star_equality").lhs, clause(t3, "q_star_equality").slack);
    EXPECT_EQ(t3.hypothesis, "epsilon_mdp <= 1e-09");
}

TEST(Certifier, ExactFixtureWithAnAbstractlyUniformPolicyMeetsTheEqualityTheorem) {
    auto fx = exact_mdp_fixture({.seed = 3});
    // uniform over original actions stays uniform through the bijective action map
    Certifier c(fx.process, fx.map, enumerate_histories(fx.process, 2), {0.5, 30});
    auto t2 = c.certify(CertificateKind::T2_mdp_exact);
    EXPECT_TRUE(t2.hypothesis_satisfied);
    EXPECT_TRUE(t2.pass);
    EXPECT_NEAR(t2.inputs.at("policy_similarity"), 0.0, 1e-12);
}

TEST(Certifier, ExactFixtureAbstractValuesMatchTheGivenMdp) {
    auto fx = exact_mdp_fixture({.seed = 4});
    Certifier c(fx.process, fx.map, enumerate_histories(fx.process, 2), {0.5, 40});
    auto direct = value_iteration(fx.abstract, 0.5);
    const auto& surrogate = c.optimal_solve();
    for (std::size_t s = 0; s < direct.v.size(); ++s) EXPECT_NEAR(surrogate.v[s], direct.v[s], 1e-9);
}

TEST(Certifier, ClauseNamesAndInputsPerKind) {
    auto fx = exact_mdp_fixture({.seed = 2});
    Certifier c(fx.process, fx.map, enumerate_histories(fx.process, 2), {0.5, 20});
    auto names = [](const BoundCertificate& b) {
        std::vector<std::string> out;
        for (const auto& x : b.clauses) out.push_back(x.name);
        return out;
    };
    using V = std::vector<std::string>;
    EXPECT_EQ(names(c.certify(CertificateKind::T1_mdp_pi)), (V{"q_representative", "v_representative"}));
    EXPECT_EQ(names(c.certify(CertificateKind::T2_mdp_exact)), (V{"q_equality", "v_equality"}));
    EXPECT_EQ(names(c.certify(CertificateKind::T3_mdp_star)), (V{"q_star_equality", "v_star_equality", "uplift_optimal"}));
    EXPECT_EQ(names(c.certify(CertificateKind::T4_q_pi)), (V{"q_representative", "v_representative"}));
    EXPECT_EQ(names(c.certify(CertificateKind::T5_q_star)), (V{"q_star", "v_star", "uplift_loss", "uplift_nonnegative"}));
    EXPECT_EQ(names(c.certify(CertificateKind::T6_v_pi)), (V{"b_average_q", "v"}));
    EXPECT_EQ(names(c.certify(CertificateKind::L_qbq)), (V{"b_average_representative", "b_average_optimal"}));
    EXPECT_EQ(names(c.certify(CertificateKind::L_subopt_action)),
              (V{"q_loss", "v_loss", "q_nonnegative", "v_nonnegative"}));
    auto t4 = c.certify(CertificateKind::T4_q_pi);
    for (const char* key : {"epsilon", "epsilon_pi_rep_max", "epsilon_s", "tail", "coverage_complete"})
        EXPECT_TRUE(t4.inputs.count(key)) << key;
    auto t7 = c.certify(CertificateKind::T7_v_star);
    for (const char* key : {"epsilon", "epsilon_b", "measure_mass_max", "exact_threshold"})
        EXPECT_TRUE(t7.inputs.count(key)) << key;
}

TEST(Certifier, IdentityMapGivesZeroUpliftLoss) {
    auto rp = random_process({.seed = 31, .observations = 2, .actions = 2, .rewards = 2, .memory = 1});
    Certifier c(rp.process, identity_map(rp.process), enumerate_histories(rp.process, 2), {0.5, 40});
    auto t5 = c.certify(CertificateKind::T5_q_star);
    EXPECT_TRUE(t5.pass);
    EXPECT_NEAR(t5.inputs.at("epsilon"), 0.0, 1e-12);
    EXPECT_LE(clause(t5, "uplift_loss").lhs, 1e-9);
}

TEST(Certifier, SymmetricGridIsAnExactHomomorphism) {
    auto g = build_gridworld(symmetric_grid());
    Certifier c(g.process, g.diagonal, enumerate_histories(g.process, 4), {0.9, 300});
    EXPECT_TRUE(c.coverage_complete());
    auto t3 = c.certify(CertificateKind::T3_mdp_star);
    EXPECT_TRUE(t3.hypothesis_satisfied);
    EXPECT_TRUE(t3.pass);
}

TEST(Certifier, DefaultGridIsNotExactAndSaysSo) {
    GridWorldSpec spec;
    auto g = build_gridworld(spec);
    Certifier c(g.process, g.diagonal, enumerate_histories(g.process, 4), {0.9, 300});
    auto t3 = c.certify(CertificateKind::T3_mdp_star);
    EXPECT_FALSE(t3.hypothesis_satisfied);
    EXPECT_GT(t3.inputs.at("epsilon_mdp"), 0.0);
    EXPECT_TRUE(c.certify(CertificateKind::T5_q_star).pass);
}

TEST(Certifier, CoverageNeedsEnoughDepth) {
    auto g = build_gridworld(symmetric_grid());
    Certifier shallow(g.process, g.diagonal, enumerate_histories(g.process, 1), {0.9, 50});
    EXPECT_FALSE(shallow.coverage_complete());
}

TEST(Certifier, QUniformBoundOnARandomProcess) {
    auto rp = random_process({.seed = 44, .observations = 2, .actions = 2, .rewards = 2, .memory = 1});
    DiscountConfig cfg{0.5, 40};
    auto map = build_q_uniform_map(rp.process, 0.1, cfg);
    Certifier c(rp.process, map, enumerate_histories(rp.process, 3), cfg);
    auto t5 = c.certify(CertificateKind::T5_q_star);
    EXPECT_TRUE(t5.pass);
    EXPECT_LE(t5.inputs.at("epsilon"), 0.1 + 1e-9);
    // 4ε/(1−γ)² = 1.6 at ε = 0.1, γ = 0.5
    EXPECT_LE(clause(t5, "uplift_loss").lhs, 1.6 + 1e-9);
}

TEST(SuboptLemma, GreedyPolicyHasNoLoss) {
    auto m = random_mdp(7, 5, 3);
    auto vi = value_iteration(m, 0.9);
    auto cert = certify_subopt_mdp(m, vi.policy, 0.9);
    EXPECT_TRUE(cert.pass);
    EXPECT_NEAR(cert.inputs.at("epsilon"), 0.0, 1e-9);
}

TEST(SuboptLemma, WorstPolicyStillWithinTheBound) {
    auto m = random_mdp(8, 5, 3);
    auto vi = value_iteration(m, 0.7);
    std::vector<std::optional<std::size_t>> worst;
    for (std::size_t s = 0; s < 5; ++s) {
        std::size_t w = 0;
        for (std::size_t b = 1; b < 3; ++b)
            if (vi.q[s][b] < vi.q[s][w]) w = b;
        worst.push_back(w);
    }
    auto cert = certify_subopt_mdp(m, AbstractPolicy::point_masses(m, worst), 0.7);
    EXPECT_TRUE(cert.pass);
    EXPECT_GT(cert.inputs.at("epsilon"), 0.0);
}

TEST(SuboptLemma, RejectsStochasticPolicies) {
    auto m = random_mdp(9, 2, 2);
    AbstractPolicy mixed{{{0.5, 0.5}, {0.5, 0.5}}};
    EXPECT_THROW(certify_subopt_mdp(m, mixed, 0.5), InvalidModelError);
}
