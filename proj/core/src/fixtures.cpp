#include "hgrl/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <set>

#include "hgrl/errors.hpp"

namespace hgrl {

double RewardTransform::value_to_raw(double value, double gamma) const {
    return (value - offset.to_double() / (1.0 - gamma)) / scale.to_double();
}

RewardTransform RewardTransform::fit(const std::vector<Rational>& raw) {
    if (raw.empty()) return {};
    auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    if (*lo >= Rational(0) && *hi <= Rational(1)) return {};
    if (*lo == *hi) return {Rational(1), -*lo};
    const Rational scale = Rational(1) / (*hi - *lo);
    return {scale, -*lo * scale};
}

namespace {

std::vector<Rational> sorted_unique(std::vector<Rational> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

RewardId reward_id(const Alphabets& alphabets, const Rational& value) {
    auto id = alphabets.find_reward(value);
    if (!id) throw InvalidModelError("reward " + value.to_string() + " missing from alphabet");
    return *id;
}

// Order-independent stream for one (seed, tag, context, action) key.
std::mt19937_64 keyed_rng(std::uint64_t seed, std::uint64_t tag, const History& h, std::uint64_t extra) {
    std::vector<std::uint32_t> key = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(extra),
                                      static_cast<std::uint32_t>(h.size())};
    for (const auto& s : h.steps()) {
        key.push_back(s.action);
        key.push_back(s.observation);
        key.push_back(s.reward);
    }
    std::seed_seq seq(key.begin(), key.end());
    return std::mt19937_64(seq);
}

std::vector<double> dirichlet(std::mt19937_64& rng, std::size_t n, double floor = 0.0) {
    std::exponential_distribution<double> draw(1.0);
    std::vector<double> w(n);
    double total = 0.0;
    for (double& x : w) total += (x = draw(rng) + floor);
    for (double& x : w) x /= total;
    return w;
}

std::vector<Rational> reward_grid(std::size_t n) {
    if (n == 0) throw InvalidModelError("reward alphabet must be non-empty");
    if (n == 1) return {Rational(1, 2)};
    std::vector<Rational> out;
    for (std::size_t i = 0; i < n; ++i)
        out.emplace_back(static_cast<std::int64_t>(i), static_cast<std::int64_t>(n - 1));
    return out;
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t n, std::size_t base = 0) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + base));
    return out;
}

// ---------------------------------------------------------------- grid world

struct Move {
    Cell target;
    Rational reward;
    Rational probability;
};

std::string cell_name(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

Cell shifted(Cell c, Action a) {
    switch (a) {
        case kUp: return {c.x, c.y + 1};
        case kDown: return {c.x, c.y - 1};
        case kLeft: return {c.x - 1, c.y};
        default: return {c.x + 1, c.y};
    }
}

// Raw-reward successors of (c, a) for a free cell c.
std::vector<Move> grid_moves(const GridWorldSpec& spec, Cell c, Action a) {
    if (c == spec.goal) return {{c, spec.r_goal, Rational(1)}};
    Cell target = shifted(c, a);
    Rational reward = spec.r_step;
    bool overridden = false;
    for (const auto& o : spec.overrides) {
        if (o.cell == c && o.action == a) {
            target = o.target;
            reward = o.reward;
            overridden = true;
        }
    }
    if (!overridden) {
        if (!spec.inside(target) || spec.is_blocked(target)) target = c;
        else if (target == spec.goal) reward = spec.r_goal;
    }
    std::vector<Move> out;
    const Rational go = Rational(1) - spec.slip;
    if (go > Rational(0)) out.push_back({target, reward, go});
    if (spec.slip > Rational(0)) out.push_back({c, spec.r_step, spec.slip});
    return out;
}

std::vector<Rational> raw_rewards(const GridWorldSpec& spec) {
    std::vector<Rational> raw = {spec.r_step, spec.r_goal};
    for (const auto& o : spec.overrides) raw.push_back(o.reward);
    return raw;
}

std::vector<Cell> free_cells(const GridWorldSpec& spec) {
    std::vector<Cell> out;
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x)
            if (!spec.is_blocked({x, y})) out.push_back({x, y});
    return out;
}

bool has_mirror(const GridWorldSpec& spec, Cell c) { return spec.inside({c.y, c.x}); }

// Lower-half representative of c's mirror class.
Cell canonical(const GridWorldSpec& spec, Cell c) {
    if (c.y > c.x && has_mirror(spec, c)) return {c.y, c.x};
    return c;
}

Action mirrored(Action a) {
    switch (a) {
        case kUp: return kRight;
        case kRight: return kUp;
        case kDown: return kLeft;
        default: return kDown;
    }
}

HomomorphismMap diagonal_map(const GridWorldSpec& spec) {
    const int w = spec.width;
    auto state_of_cell = std::make_shared<std::map<Cell, AbstractState>>();
    std::vector<std::string> names = {"start"};
    std::map<Cell, std::vector<Cell>> classes;
    for (Cell c : free_cells(spec)) classes[canonical(spec, c)].push_back(c);
    for (const auto& [rep, members] : classes) {
        std::string name;
        for (Cell m : members) name += (name.empty() ? "" : "|") + cell_name(m);
        for (Cell m : members) state_of_cell->emplace(m, static_cast<AbstractState>(names.size()));
        names.push_back(name);
    }
    auto cell_of = [w](const History& h) { return Cell{static_cast<int>(h.back().observation) % w,
                                                        static_cast<int>(h.back().observation) / w}; };
    return HomomorphismMap(
        std::move(names), {"up", "down", "left", "right"},
        [state_of_cell, cell_of](const History& h) -> AbstractState {
            if (h.empty()) return 0;
            auto it = state_of_cell->find(cell_of(h));
            if (it == state_of_cell->end()) throw DomainError("diagonal map: history ends in a blocked cell");
            return it->second;
        },
        [spec, cell_of](const History& h, Action a) -> AbstractAction {
            if (h.empty()) return kUp;
            const Cell c = cell_of(h);
            if (c.x == c.y) return (a == kUp || a == kRight) ? kUp : kDown;
            return canonical(spec, c) == c ? a : mirrored(a);
        },
        1, "diagonal");
}

}  // namespace

bool GridWorldSpec::is_blocked(Cell c) const { return std::find(blocked.begin(), blocked.end(), c) != blocked.end(); }

void GridWorldSpec::validate() const {
    if (width < 1 || height < 1) throw InvalidModelError("grid dimensions must be positive");
    for (Cell c : blocked)
        if (!inside(c)) throw InvalidModelError("blocked cell " + cell_name(c) + " outside the grid");
    if (!inside(goal) || is_blocked(goal)) throw InvalidModelError("goal must be a free cell");
    if (slip < Rational(0) || slip >= Rational(1)) throw InvalidModelError("slip must lie in [0, 1)");
    if (start && (!inside(*start) || is_blocked(*start)))
        throw InvalidModelError("start must be a free cell");
    for (const auto& o : overrides) {
        if (!inside(o.cell) || is_blocked(o.cell) || !inside(o.target) || is_blocked(o.target))
            throw InvalidModelError("override touches a blocked or outside cell");
        if (o.action > kRight) throw InvalidModelError("override action out of range");
    }
    auto free = free_cells(*this);
    if (!start && std::none_of(free.begin(), free.end(), [&](Cell c) { return c != goal; }))
        throw InvalidModelError("grid has no free non-goal cell");
}

History GridWorld::history_at(Cell c) const {
    const Observation o = observation_of(c);
    for (const auto& [context, rows] : process.table())
        if (!context.empty() && context.back().observation == o) return context;
    throw DomainError("cell " + cell_name(c) + " is not reachable");
}

GridWorld build_gridworld(const GridWorldSpec& spec, std::optional<RewardTransform> transform) {
    spec.validate();
    const RewardTransform t = transform.value_or(RewardTransform::fit(raw_rewards(spec)));
    std::vector<Rational> rewards;
    for (const auto& r : raw_rewards(spec)) rewards.push_back(t.apply(r));
    std::vector<std::string> obs;
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x) obs.push_back(cell_name({x, y}));
    Alphabets alphabets({"up", "down", "left", "right"}, std::move(obs), sorted_unique(rewards));

    const int w = spec.width;
    std::vector<Cell> starts;
    if (spec.start) starts.push_back(*spec.start);
    else
        for (Cell c : free_cells(spec))
            if (c != spec.goal) starts.push_back(c);

    auto kernel = [spec, t, alphabets, w, starts](const History& context, Action a) {
        OutcomeDistribution out;
        auto obs_of = [w](Cell c) { return static_cast<Observation>(c.y * w + c.x); };
        if (context.empty()) {
            const RewardId r = reward_id(alphabets, t.apply(spec.r_step));
            for (Cell c : starts) out.push_back({{obs_of(c), r}, 1.0 / static_cast<double>(starts.size())});
            return out;
        }
        const Observation o = context.back().observation;
        const Cell c{static_cast<int>(o) % w, static_cast<int>(o) / w};
        for (const auto& m : grid_moves(spec, c, a))
            out.push_back({{obs_of(m.target), reward_id(alphabets, t.apply(m.reward))}, m.probability.to_double()});
        return out;
    };
    auto process = OriginalProcess::from_kernel(alphabets, kernel, 1);
    return GridWorld{spec, std::move(process), diagonal_map(spec), t};
}

std::vector<double> gridworld_values(const GridWorldSpec& spec, double gamma, double tol) {
    spec.validate();
    const int w = spec.width;
    FiniteMdp mdp(static_cast<std::size_t>(w * spec.height), 4);
    for (Cell c : free_cells(spec)) {
        for (Action a = 0; a < 4; ++a) {
            std::vector<Transition> row;
            for (const auto& m : grid_moves(spec, c, a))
                row.push_back({static_cast<std::size_t>(m.target.y * w + m.target.x), m.reward.to_double(),
                               m.probability.to_double()});
            mdp.rows[static_cast<std::size_t>(c.y * w + c.x)][a] = std::move(row);
        }
    }
    return value_iteration(mdp, gamma, tol).v;
}

ModifiedGridWorld build_modified_gridworld(const GridWorldSpec& base, double gamma, Cell cell) {
    base.validate();
    if (!base.inside(cell) || base.is_blocked(cell) || cell == base.goal)
        throw InvalidModelError("modified cell must be a free non-goal cell");
    const Cell up = shifted(cell, kUp);
    const Cell down = shifted(cell, kDown);
    if (!base.inside(up) || base.is_blocked(up) || !base.inside(down) || base.is_blocked(down) || up == base.goal ||
        down == base.goal)
        throw InvalidModelError("modified cell needs free non-goal cells above and below");

    const auto v = gridworld_values(base, gamma);
    const double dv = v[static_cast<std::size_t>(up.y * base.width + up.x)] -
                      v[static_cast<std::size_t>(down.y * base.width + down.x)];
    const Rational delta = Rational::approximate(dv);
    const Rational shift = Rational::approximate(gamma * dv);
    const Rational r_up = base.r_step + shift;
    const Rational r_down = base.r_step - shift;

    GridWorldSpec modified = base;
    modified.overrides.push_back({cell, kUp, down, r_up});
    modified.overrides.push_back({cell, kDown, up, r_down});
    const auto transform = RewardTransform::fit(raw_rewards(modified));
    return ModifiedGridWorld{build_gridworld(base, transform), build_gridworld(modified, transform), cell, delta, r_up,
                             r_down};
}

// ------------------------------------------------------------- region chains

namespace {

struct RegionTable {
    // region index per (observation, block)
    std::size_t at[4][2];
};

RegionTable region_table(const std::vector<Region>& regions) {
    RegionTable t{};
    for (Observation o = 0; o < 4; ++o)
        for (int b = 0; b < 2; ++b) {
            std::size_t hits = 0;
            for (std::size_t j = 0; j < regions.size(); ++j) {
                const auto& r = regions[j];
                if (r.block == b && std::count(r.observations.begin(), r.observations.end(), o)) {
                    t.at[o][b] = j;
                    ++hits;
                }
            }
            if (hits != 1) throw InvalidModelError("regions do not partition the observation-action grid");
        }
    return t;
}

constexpr Observation kStartObservation = 2;  // the percept "3"

int block_of(Action a) { return a < 2 ? 0 : 1; }

}  // namespace

std::size_t RegionChain::region_of(const History& h, Action a) const {
    const Observation o = h.empty() ? kStartObservation : h.back().observation;
    return region_table(spec.regions).at[o][block_of(a)];
}

std::vector<std::vector<double>> RegionChain::p_double() const {
    std::vector<std::vector<double>> out;
    for (const auto& row : spec.p) {
        out.emplace_back();
        for (const auto& x : row) out.back().push_back(x.to_double());
    }
    return out;
}

std::vector<double> RegionChain::r_double() const {
    std::vector<double> out;
    for (const auto& x : spec.r) out.push_back(x.to_double());
    return out;
}

RegionChain build_region_chain(int case_id, double gamma, double epsilon, double epsilon_prime) {
    if (case_id < 1 || case_id > 3) throw InvalidModelError("region chain case must be 1, 2 or 3");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidModelError("gamma must lie in [0, 1)");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidModelError("epsilon must lie in [0, 1]");
    if (!(epsilon_prime >= 0.0 && epsilon_prime <= 0.5)) throw InvalidModelError("epsilon' must lie in [0, 1/2]");

    const Rational g = Rational::approximate(gamma);
    const Rational e = Rational::approximate(epsilon);
    const Rational ep = Rational::approximate(epsilon_prime);
    const Rational z(0), one(1), half(1, 2), quarter(1, 4);

    RegionChainSpec spec;
    spec.case_id = case_id;
    spec.gamma = gamma;
    spec.epsilon = epsilon;
    spec.epsilon_prime = epsilon_prime;
    const Region r1{"R1", {2, 3}, 0}, r4a{"R4a", {1}, 0}, r4b{"R4b", {0}, 0};
    if (case_id == 1) {
        spec.regions = {r1, {"R2", {2, 3}, 1}, {"R3", {0, 1}, 1}, r4a, r4b};
        spec.p = {{z, one, z, z, z}, {z, z, one, z, z}, {z, z, z, half, half}, {one, z, z, z, z},
                  {half, z, z, quarter, quarter}};
        spec.r = {z, z, z, g, z};
    } else if (case_id == 2) {
        spec.regions = {r1, {"R2", {2, 3}, 1}, {"R3a", {1}, 1}, {"R3b", {0}, 1}, r4a, r4b};
        spec.p = {{z, one, z, z, z, z},       {z, z, half, half, z, z}, {z, z, z, z, half, half},
                  {z, z, z, z, half, half},   {one, z, z, z, z, z},     {half, z, z, z, quarter, quarter}};
        spec.r = {z, z, z, e, g, z};
    } else {
        spec.regions = {r1, {"R2a", {3}, 1}, {"R2b", {2}, 1}, {"R3a", {1}, 1}, {"R3b", {0}, 1}, r4a, r4b};
        spec.p = {{ep, half, half - ep, z, z, z, z}, {z, z, z, half, half, z, z}, {z, z, z, half, half, z, z},
                  {z, z, z, z, z, half, half},        {z, z, z, z, z, half, half}, {one, z, z, z, z, z, z},
                  {half, z, z, z, z, quarter, quarter}};
        spec.r = {z, z, z, z, e, g, z};
    }
    for (const auto& region : spec.regions)
        spec.region_to_class.emplace_back(region.observations.front() >= 2 ? "Y" : "X",
                                          region.block == 0 ? "alpha" : "beta");

    const double c1 = 2.0 / (1.0 - gamma * gamma * gamma);
    const double c2 = (gamma * gamma * epsilon + 4.0) / (2.0 * (1.0 - gamma * gamma * gamma));
    const double gg = (1.0 - epsilon_prime) / (1.0 - gamma * epsilon_prime);
    const double c3 = (4.0 + gamma * gamma * epsilon * gg) / (2.0 * (1.0 - gamma * gamma * gamma * gg));
    std::vector<double> closed;
    if (case_id == 1) closed = {c1 - 2.0, gamma * gamma * c1, gamma * c1, c1, c1};
    else if (case_id == 2)
        closed = {c2 - 2.0, gamma * epsilon / 2.0 + gamma * gamma * c2, gamma * c2, gamma * c2 + epsilon, c2, c2};
    else
        closed = {gamma * gamma * gg * (epsilon / 2.0 + gamma * c3),
                  gamma * epsilon / 2.0 + gamma * gamma * c3,
                  gamma * epsilon / 2.0 + gamma * gamma * c3,
                  gamma * c3,
                  gamma * c3 + epsilon,
                  c3,
                  c3};

    Alphabets alphabets({"1", "2", "3", "4"}, {"1", "2", "3", "4"}, sorted_unique(spec.r));
    const RegionTable table = region_table(spec.regions);
    const auto regions = spec.regions;
    std::vector<std::vector<double>> p;
    for (const auto& row : spec.p) {
        p.emplace_back();
        for (const auto& x : row) p.back().push_back(x.to_double());
    }
    // Mass P_ij/|obs(j)| that region i sends to observation o inside region j.
    auto share = [p, regions](std::size_t i, std::size_t j, Observation o) {
        const auto& obs = regions[j].observations;
        if (!std::count(obs.begin(), obs.end(), o)) return 0.0;
        return p[i][j] / static_cast<double>(obs.size());
    };
    std::vector<RewardId> reward_of;
    for (const auto& r : spec.r) reward_of.push_back(reward_id(alphabets, r));

    auto kernel = [table, share, reward_of, n = regions.size()](const History& context, Action a) {
        const Observation o = context.empty() ? kStartObservation : context.back().observation;
        const std::size_t i = table.at[o][block_of(a)];
        OutcomeDistribution out;
        for (Observation next = 0; next < 4; ++next) {
            double mass = 0.0;
            for (std::size_t j = 0; j < n; ++j) mass += share(i, j, next);
            out.push_back({{next, reward_of[i]}, mass});
        }
        return out;
    };
    auto process = OriginalProcess::from_kernel(alphabets, kernel, 1);

    auto rule = [table, share, regions](const History& h) -> ActionDistribution {
        if (h.empty()) return {0.5, 0.5, 0.0, 0.0};
        const std::size_t n = h.size();
        const Observation prev = n >= 2 ? h[n - 2].observation : kStartObservation;
        const std::size_t i = table.at[prev][block_of(h.back().action)];
        const Observation o = h.back().observation;
        double mass[2] = {0.0, 0.0};
        for (std::size_t j = 0; j < regions.size(); ++j) mass[regions[j].block] += share(i, j, o);
        const double total = mass[0] + mass[1];
        if (total <= 0.0) return {0.25, 0.25, 0.25, 0.25};
        const double alpha = mass[0] / total / 2.0, beta = mass[1] / total / 2.0;
        return {alpha, alpha, beta, beta};
    };
    HistoryPolicy policy(4, rule, 2, "region-chain-" + std::to_string(case_id));

    HomomorphismMap map(
        {"X", "Y"}, {"alpha", "beta"},
        [](const History& h) -> AbstractState {
            const Observation o = h.empty() ? kStartObservation : h.back().observation;
            return o >= 2 ? 1 : 0;
        },
        [](const History&, Action a) -> AbstractAction { return static_cast<AbstractAction>(block_of(a)); }, 1,
        "regions");

    return RegionChain{std::move(spec), std::move(process), std::move(policy), std::move(map), RewardTransform{},
                       std::move(closed)};
}

// ---------------------------------------------------------- random corpora

RandomProcess random_process(const RandomProcessOptions& options) {
    const auto& o = options;
    if (o.observations == 0 || o.actions == 0) throw InvalidModelError("random process needs non-empty alphabets");
    Alphabets alphabets(numbered("a", o.actions), numbered("o", o.observations), reward_grid(o.rewards));
    const std::size_t n_out = o.observations * o.rewards;
    auto kernel = [o, n_out](const History& context, Action a) {
        auto rng = keyed_rng(o.seed, 1, context, a);
        auto w = dirichlet(rng, n_out);
        OutcomeDistribution out;
        for (std::size_t k = 0; k < n_out; ++k)
            out.push_back({{static_cast<Observation>(k / o.rewards), static_cast<RewardId>(k % o.rewards)}, w[k]});
        return out;
    };
    auto process = OriginalProcess::from_kernel(alphabets, kernel, o.memory);
    auto rule = [o](const History& h) -> ActionDistribution {
        auto rng = keyed_rng(o.seed, 2, h.suffix(o.memory), 0);
        return dirichlet(rng, o.actions, 0.1);
    };
    HistoryPolicy policy(o.actions, rule, o.memory, "random:" + std::to_string(o.seed));
    return RandomProcess{std::move(process), std::move(policy)};
}

ExactMdpFixture exact_mdp_fixture(const ExactMdpOptions& options) {
    const auto& o = options;
    if (o.states == 0 || o.actions == 0 || o.split == 0) throw InvalidModelError("exact MDP fixture needs sizes ≥ 1");
    const auto rewards = reward_grid(o.rewards);
    const std::size_t n_obs = o.states * o.split;

    // Abstract kernel p(s′, r | s, b) as dense weights over s′·R + r.
    std::vector<std::vector<std::vector<double>>> p(o.states);
    std::mt19937_64 rng(o.seed ^ 0x9e3779b97f4a7c15ULL);
    for (auto& rows : p)
        for (std::size_t b = 0; b < o.actions; ++b) rows.push_back(dirichlet(rng, o.states * o.rewards));

    FiniteMdp abstract(o.states, o.actions);
    for (std::size_t s = 0; s < o.states; ++s)
        for (std::size_t b = 0; b < o.actions; ++b) {
            std::vector<Transition> row;
            for (std::size_t k = 0; k < o.states * o.rewards; ++k)
                row.push_back({k / o.rewards, rewards[k % o.rewards].to_double(), p[s][b][k]});
            abstract.rows[s][b] = std::move(row);
        }

    Alphabets alphabets(numbered("a", o.actions), numbered("o", n_obs), rewards);
    auto last_obs = [](const History& h) -> Observation { return h.empty() ? 0 : h.back().observation; };
    auto g = [o, last_obs](const History& h, Action a) {
        return static_cast<AbstractAction>((a + last_obs(h) % o.actions) % o.actions);
    };
    auto kernel = [o, p, g, last_obs](const History& context, Action a) {
        const std::size_t s = last_obs(context) / o.split;
        const std::size_t b = g(context, a);
        OutcomeDistribution out;
        for (std::size_t s2 = 0; s2 < o.states; ++s2) {
            // split(o′ | o, a) within the successor state's observations
            History key({{a, last_obs(context), 0}});
            auto rng = keyed_rng(o.seed, 3, key, s2);
            auto split = dirichlet(rng, o.split, 0.1);
            for (std::size_t r = 0; r < o.rewards; ++r)
                for (std::size_t k = 0; k < o.split; ++k)
                    out.push_back({{static_cast<Observation>(s2 * o.split + k), static_cast<RewardId>(r)},
                                   p[s][b][s2 * o.rewards + r] * split[k]});
        }
        return out;
    };
    auto process = OriginalProcess::from_kernel(alphabets, kernel, 1);
    HomomorphismMap map(
        numbered("s", o.states), numbered("b", o.actions),
        [o, last_obs](const History& h) { return static_cast<AbstractState>(last_obs(h) / o.split); },
        [g](const History& h, Action a) { return g(h, a); }, 1, "exact-mdp");
    auto rule = [o](const History& h) -> ActionDistribution {
        auto rng = keyed_rng(o.seed, 4, h.suffix(1), 0);
        return dirichlet(rng, o.actions, 0.1);
    };
    HistoryPolicy policy(o.actions, rule, 1, "random-memory-1");
    return ExactMdpFixture{std::move(process), std::move(map), std::move(abstract), std::move(policy)};
}

FiniteMdp random_mdp(std::uint64_t seed, std::size_t states, std::size_t actions) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    FiniteMdp mdp(states, actions);
    for (std::size_t s = 0; s < states; ++s)
        for (std::size_t b = 0; b < actions; ++b) {
            auto w = dirichlet(rng, states);
            std::vector<Transition> row;
            for (std::size_t s2 = 0; s2 < states; ++s2) row.push_back({s2, unit(rng), w[s2]});
            mdp.rows[s][b] = std::move(row);
        }
    return mdp;
}

HomomorphismMap build_q_uniform_map(const OriginalProcess& process, double epsilon_target, const DiscountConfig& cfg) {
    cfg.validate();
    if (!(epsilon_target >= 0.0)) throw InvalidModelError("target gap must be non-negative");
    const auto memory = process.memory_bound();
    if (!memory) throw InvalidModelError("Q-uniform map builder needs a memory-bounded process");
    const auto contexts = reachable_contexts(process);
    ValueEngine engine(process, std::nullopt, cfg.gamma);
    std::vector<std::vector<double>> rows;
    std::vector<double> all;
    for (const auto& c : contexts) {
        rows.push_back(engine.q_row(c, cfg.horizon));
        all.insert(all.end(), rows.back().begin(), rows.back().end());
    }
    std::sort(all.begin(), all.end());
    std::vector<double> starts;
    for (double x : all)
        if (starts.empty() || x > starts.back() + epsilon_target + 1e-12) starts.push_back(x);
    auto bucket = [&starts](double x) {
        return static_cast<AbstractAction>(std::upper_bound(starts.begin(), starts.end(), x) - starts.begin() - 1);
    };

    struct Entry {
        AbstractState state;
        std::vector<AbstractAction> actions;
    };
    auto lookup = std::make_shared<std::map<History, Entry>>();
    std::map<std::vector<AbstractAction>, AbstractState> signatures;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        std::vector<AbstractAction> sig;
        for (double x : rows[i]) sig.push_back(bucket(x));
        auto [it, fresh] = signatures.emplace(sig, static_cast<AbstractState>(names.size()));
        if (fresh) {
            std::string name = "q[";
            for (std::size_t k = 0; k < sig.size(); ++k) name += (k ? "," : "") + std::to_string(sig[k]);
            names.push_back(name + "]");
        }
        lookup->emplace(contexts[i], Entry{it->second, std::move(sig)});
    }
    const std::size_t k = *memory;
    const auto alphabets = process.alphabets();
    auto find = [lookup, k, alphabets](const History& h) -> const Entry& {
        auto it = lookup->find(h.suffix(k));
        if (it == lookup->end()) throw DomainError("Q-uniform map: unreachable context " + h.to_string(alphabets));
        return it->second;
    };
    return HomomorphismMap(
        std::move(names), numbered("q", starts.size()), [find](const History& h) { return find(h).state; },
        [find](const History& h, Action a) { return find(h).actions.at(a); }, k, "q-uniform");
}

}  // namespace hgrl
