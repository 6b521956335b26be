#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hgrl/abstraction.hpp"
#include "hgrl/mdp_solver.hpp"
#include "hgrl/process.hpp"
#include "hgrl/rational.hpp"
#include "hgrl/values.hpp"

namespace hgrl {

/// normalized = scale·raw + offset, with scale > 0.
struct RewardTransform {
    Rational scale{1};
    Rational offset{0};

    Rational apply(const Rational& raw) const { return scale * raw + offset; }
    /// Converts a normalized discounted value back to raw reward units.
    double value_to_raw(double value, double gamma) const;
    bool identity() const { return scale == Rational(1) && offset == Rational(0); }

    /// Identity when every raw reward already lies in [0,1]; otherwise the
    /// min-max map onto [0,1].
    static RewardTransform fit(const std::vector<Rational>& raw);
};

// ---------------------------------------------------------------- grid world

struct Cell {
    int x = 0;
    int y = 0;

    friend auto operator<=>(const Cell&, const Cell&) = default;
};

enum GridAction : Action { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

/// Replaces the move of one action at one cell.
struct TransitionOverride {
    Cell cell;
    Action action = kUp;
    Cell target;
    Rational reward;
};

struct GridWorldSpec {
    int width = 6;
    int height = 6;
    std::vector<Cell> blocked = {{2, 5}, {4, 4}, {2, 3}, {3, 2}, {0, 2}, {5, 2}, {2, 0}, {5, 0}};
    Cell goal{5, 5};
    Rational r_goal{1};
    Rational r_step{-1, 20};
    /// Probability that a move leaves the agent in place.
    Rational slip{0};
    /// Start cell; when absent the first percept places the agent uniformly on
    /// a free non-goal cell.
    std::optional<Cell> start;
    std::vector<TransitionOverride> overrides;

    bool is_blocked(Cell c) const;
    bool inside(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
    /// Throws InvalidModelError on a malformed layout.
    void validate() const;
};

struct GridWorld {
    GridWorldSpec spec;
    OriginalProcess process;
    /// Mirror merge across the main diagonal.
    HomomorphismMap diagonal;
    RewardTransform transform;

    Observation observation_of(Cell c) const { return static_cast<Observation>(c.y * spec.width + c.x); }
    Cell cell_of(Observation o) const { return {static_cast<int>(o) % spec.width, static_cast<int>(o) / spec.width}; }
    /// Any history whose current cell is c.
    History history_at(Cell c) const;
};

/// Grid process (memory 1, observation = current cell) plus the diagonal map.
/// The transform defaults to RewardTransform::fit over all raw rewards.
GridWorld build_gridworld(const GridWorldSpec& spec, std::optional<RewardTransform> transform = std::nullopt);

/// Raw-reward value iteration over cells; index y·width + x. Blocked cells
/// hold 0.
std::vector<double> gridworld_values(const GridWorldSpec& spec, double gamma, double tol = 1e-12);

struct ModifiedGridWorld {
    GridWorld base;
    GridWorld modified;
    Cell cell;
    /// V*(up target) − V*(down target) of the base world, raw units.
    Rational delta;
    Rational r_up;
    Rational r_down;
};

/// Swaps the up and down targets at `cell` and sets r_up = r_step + Δγ,
/// r_down = r_step − Δγ so the optimal action values at the cell are
/// unchanged. Both worlds share one reward transform.
ModifiedGridWorld build_modified_gridworld(const GridWorldSpec& base, double gamma, Cell cell = {4, 2});

// ------------------------------------------------------------- region chains

struct Region {
    std::string name;
    std::vector<Observation> observations;
    /// Abstract action block: 0 = α (original actions 0,1), 1 = β (2,3).
    int block = 0;
};

struct RegionChainSpec {
    int case_id = 1;
    double gamma = 0.5;
    double epsilon = 0.0;
    double epsilon_prime = 0.0;
    std::vector<Region> regions;
    std::vector<std::vector<Rational>> p;
    std::vector<Rational> r;
    /// Region index → (abstract state, abstract action) names.
    std::vector<std::pair<std::string, std::string>> region_to_class;
};

/// Realization over A = O = {1,2,3,4}: the environment (memory 1) draws the
/// next observation and the policy (memory 2) the next action block so that
/// the region of (o, a) moves according to the regional matrix.
struct RegionChain {
    RegionChainSpec spec;
    OriginalProcess process;
    HistoryPolicy policy;
    HomomorphismMap map;
    RewardTransform transform;
    /// Closed-form regional action values as printed alongside each case.
    std::vector<double> closed_form;

    /// Region of the pair (current observation of h, a).
    std::size_t region_of(const History& h, Action a) const;
    std::vector<std::vector<double>> p_double() const;
    std::vector<double> r_double() const;
};

/// case 1|2|3; requires γ ∈ [0,1), ε ∈ [0,1], ε′ ∈ [0,1/2].
RegionChain build_region_chain(int case_id, double gamma, double epsilon = 0.0, double epsilon_prime = 0.0);

// ---------------------------------------------------------- random corpora

struct RandomProcessOptions {
    std::uint64_t seed = 0;
    std::size_t observations = 2;
    std::size_t actions = 2;
    std::size_t rewards = 2;
    std::size_t memory = 1;
};

struct RandomProcess {
    OriginalProcess process;
    /// Full-support policy with the same memory as the process.
    HistoryPolicy policy;
};

/// Seeded kernel whose rows are drawn from a flat Dirichlet keyed by
/// (seed, context, action), so the result does not depend on query order.
RandomProcess random_process(const RandomProcessOptions& options);

struct ExactMdpOptions {
    std::uint64_t seed = 0;
    std::size_t states = 3;
    std::size_t actions = 2;
    /// Observations per abstract state.
    std::size_t split = 2;
    std::size_t rewards = 3;
};

struct ExactMdpFixture {
    OriginalProcess process;
    HomomorphismMap map;
    /// Abstract kernel p(s′, r | s, b) the process refines.
    FiniteMdp abstract;
    /// Random full-support memory-1 policy.
    HistoryPolicy policy;
};

/// Memory-1 process whose observations refine the states of a random abstract
/// MDP. The action map is a per-observation rotation, so ψ is an exact MDP
/// homomorphism with a bijective action map at every history.
ExactMdpFixture exact_mdp_fixture(const ExactMdpOptions& options);

/// Random finite MDP with rewards in [0,1] for solver-level property tests.
FiniteMdp random_mdp(std::uint64_t seed, std::size_t states, std::size_t actions);

/// Buckets the optimal action values of every reachable context greedily into
/// intervals of width ≤ ε_target (plus a 1e-12 tie tolerance). The state of a
/// history is its per-action bucket signature and the abstract action of
/// (h,a) is the bucket of Q*(h,a). Keyed by context; unknown contexts throw
/// DomainError.
HomomorphismMap build_q_uniform_map(const OriginalProcess& process, double epsilon_target, const DiscountConfig& cfg);

}  // namespace hgrl
