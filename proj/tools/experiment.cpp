#include "experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "hgrl/errors.hpp"

namespace hgrl::experiment {

namespace {

const std::set<std::string> kSpecKeys = {"schema_version", "environment", "environment_options", "map",
                                         "policy",         "inverse_mode", "gamma",               "horizon",
                                         "depth",          "tolerance",   "seed",                "certificates",
                                         "outputs"};

[[noreturn]] void fail(const std::string& message) { throw SpecError(message); }

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

// Integers built in code are signed even when non-negative.
bool is_count(const json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0); }

std::uint64_t parse_seed(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        auto v = std::stoull(text, &used);
        if (used != text.size()) fail("bad " + what + " '" + text + "'");
        return v;
    } catch (const std::logic_error&) {
        fail("bad " + what + " '" + text + "'");
    }
}

Rational rational_of(const json& v, const std::string& what) {
    try {
        if (v.is_string()) return Rational::parse(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
        if (v.is_number()) return Rational::parse(v.dump());
    } catch (const std::exception& e) {
        fail(what + ": " + e.what());
    }
    fail(what + " must be a number or a rational string");
}

double probability_of(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return Rational::parse(v.get<std::string>()).to_double();
    fail("probability must be a number or a rational string");
}

Cell cell_of(const json& v, const std::string& what) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
        fail(what + " must be [x, y]");
    return {v[0].get<int>(), v[1].get<int>()};
}

template <class T>
T option(const json& options, const char* key, T fallback) {
    if (!options.contains(key)) return fallback;
    try {
        return options.at(key).get<T>();
    } catch (const json::exception&) {
        fail(std::string("environment option '") + key + "' has the wrong type");
    }
}

GridWorldSpec grid_spec(const json& options) {
    GridWorldSpec g;
    static const std::set<std::string> keys = {"width", "height", "blocked", "goal", "r_goal",
                                               "r_step", "slip", "start", "cell"};
    for (const auto& [k, v] : options.items())
        if (!keys.count(k)) fail("unknown grid option '" + k + "'");
    g.width = option(options, "width", g.width);
    g.height = option(options, "height", g.height);
    if (options.contains("blocked")) {
        if (!options["blocked"].is_array()) fail("blocked must be a list of cells");
        g.blocked.clear();
        for (const auto& c : options["blocked"]) g.blocked.push_back(cell_of(c, "blocked cell"));
    }
    if (options.contains("goal")) g.goal = cell_of(options["goal"], "goal");
    if (options.contains("start")) g.start = cell_of(options["start"], "start");
    if (options.contains("r_goal")) g.r_goal = rational_of(options["r_goal"], "r_goal");
    if (options.contains("r_step")) g.r_step = rational_of(options["r_step"], "r_step");
    if (options.contains("slip")) g.slip = rational_of(options["slip"], "slip");
    return g;
}

json step_to_json(const Step& s, const Alphabets& a) {
    return json::array({a.actions()[s.action], a.observations()[s.observation], a.reward(s.reward).to_string()});
}

History history_from_json(const json& steps, const Alphabets& a) {
    if (!steps.is_array()) fail("context must be a list of [action, observation, reward]");
    std::vector<Step> out;
    for (const auto& s : steps) {
        if (!s.is_array() || s.size() != 3 || !s[0].is_string() || !s[1].is_string())
            fail("context step must be [action, observation, reward]");
        auto act = a.find_action(s[0].get<std::string>());
        auto obs = a.find_observation(s[1].get<std::string>());
        auto rew = a.find_reward(rational_of(s[2], "context reward"));
        if (!act || !obs || !rew) fail("context step names an unknown symbol");
        out.push_back({*act, *obs, *rew});
    }
    return History(std::move(out));
}

std::vector<std::string> string_list(const json& v, const std::string& what) {
    if (!v.is_array()) fail(what + " must be a list of strings");
    std::vector<std::string> out;
    for (const auto& x : v) {
        if (!x.is_string()) fail(what + " must be a list of strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

std::string inverse_mode_name(InverseMode m) { return m == InverseMode::uniform ? "uniform" : "visitation"; }

json solve_json(const SolveResult& r) { return {{"iterations", r.iterations}, {"residual", r.residual}}; }

json transform_json(const RewardTransform& t) {
    return {{"scale", t.scale.to_string()}, {"offset", t.offset.to_string()}};
}

// Named fixture bundle before the map and policies are chosen.
struct Environment {
    std::string name;
    OriginalProcess process;
    std::optional<HistoryPolicy> fixture_policy;
    std::optional<HomomorphismMap> fixture_map;
    std::string default_map = "identity";
    RewardTransform transform;
    std::optional<GridWorld> grid;
    std::optional<ModifiedGridWorld> modified;
    std::optional<RegionChain> chain;
};

Environment resolve_environment(const ExperimentSpec& spec) {
    const auto& opts = spec.environment_options;
    if (spec.environment.is_object()) {
        if (!opts.empty()) fail("environment_options apply to named fixtures only");
        return {"inline", process_from_json(spec.environment), std::nullopt, std::nullopt, "identity", {}, {}, {}, {}};
    }
    const std::string name = spec.environment.get<std::string>();
    if (name == "gridworld") {
        auto g = build_gridworld(grid_spec(opts));
        if (opts.contains("cell")) fail("option 'cell' applies to gridworld-modified only");
        Environment env{name, g.process, std::nullopt, g.diagonal, "diagonal", g.transform, g, {}, {}};
        return env;
    }
    if (name == "gridworld-modified") {
        json base = opts;
        Cell cell{4, 2};
        if (base.contains("cell")) {
            cell = cell_of(base["cell"], "cell");
            base.erase("cell");
        }
        auto m = build_modified_gridworld(grid_spec(base), spec.gamma, cell);
        return {name, m.modified.process, std::nullopt, m.modified.diagonal, "diagonal", m.modified.transform,
                m.modified, m, {}};
    }
    if (starts_with(name, "region-chain-")) {
        const std::string id = name.substr(13);
        if (id != "1" && id != "2" && id != "3") fail("unknown region chain '" + name + "'");
        for (const auto& [k, v] : opts.items())
            if (k != "epsilon" && k != "epsilon_prime") fail("unknown region chain option '" + k + "'");
        auto c = build_region_chain(std::stoi(id), spec.gamma, option(opts, "epsilon", 0.1),
                                    option(opts, "epsilon_prime", 0.1));
        return {name, c.process, c.policy, c.map, "regions", c.transform, {}, {}, c};
    }
    if (starts_with(name, "random:")) {
        for (const auto& [k, v] : opts.items())
            if (k != "observations" && k != "actions" && k != "rewards" && k != "memory")
                fail("unknown random option '" + k + "'");
        RandomProcessOptions o;
        o.seed = spec.seed.value_or(parse_seed(name.substr(7), "seed"));
        o.observations = option<std::size_t>(opts, "observations", 2);
        o.actions = option<std::size_t>(opts, "actions", 2);
        o.rewards = option<std::size_t>(opts, "rewards", 2);
        o.memory = option<std::size_t>(opts, "memory", 1);
        auto r = random_process(o);
        return {"random:" + std::to_string(o.seed), r.process, r.policy, std::nullopt, "identity", {}, {}, {}, {}};
    }
    if (starts_with(name, "exact-mdp:")) {
        for (const auto& [k, v] : opts.items())
            if (k != "states" && k != "actions" && k != "split" && k != "rewards")
                fail("unknown exact-mdp option '" + k + "'");
        ExactMdpOptions o;
        o.seed = spec.seed.value_or(parse_seed(name.substr(10), "seed"));
        o.states = option<std::size_t>(opts, "states", 3);
        o.actions = option<std::size_t>(opts, "actions", 2);
        o.split = option<std::size_t>(opts, "split", 2);
        o.rewards = option<std::size_t>(opts, "rewards", 3);
        auto x = exact_mdp_fixture(o);
        return {"exact-mdp:" + std::to_string(o.seed), x.process, x.policy, x.map, "exact", {}, {}, {}, {}};
    }
    fail("unknown environment '" + name + "'");
}

HistoryPolicy resolve_policy(const std::string& name, const Environment& env, const DiscountConfig& cfg) {
    const std::size_t na = env.process.alphabets().num_actions();
    if (name == "uniform") return HistoryPolicy::uniform(na);
    if (name == "fixture") {
        if (!env.fixture_policy) fail("environment '" + env.name + "' has no fixture policy");
        return *env.fixture_policy;
    }
    if (name == "optimal") return optimal_q(env.process, {}, cfg).greedy;
    fail("unknown policy '" + name + "'");
}

HomomorphismMap resolve_map(const json& spec_map, const Environment& env, const DiscountConfig& cfg) {
    if (spec_map.is_object()) return map_from_json(spec_map, env.process.alphabets());
    const std::string name = spec_map.is_null() ? env.default_map : spec_map.get<std::string>();
    if (name == "identity") {
        if (!env.process.memory_bound()) fail("identity map needs a memory-bounded environment");
        return identity_map(env.process);
    }
    if (starts_with(name, "q-uniform:")) {
        double eps = 0.0;
        try {
            std::size_t used = 0;
            eps = std::stod(name.substr(10), &used);
            if (used != name.size() - 10) throw std::invalid_argument("trailing");
        } catch (const std::logic_error&) {
            fail("bad q-uniform width in '" + name + "'");
        }
        if (!env.process.memory_bound()) fail("q-uniform map needs a memory-bounded environment");
        return build_q_uniform_map(env.process, eps, cfg);
    }
    if (name == env.default_map && env.fixture_map) return *env.fixture_map;
    fail("map '" + name + "' is not available for environment '" + env.name + "'");
}

// P_ψ(X | region) at some reachable history whose next pair lies in the region.
json region_x_probabilities(const RegionChain& chain) {
    const InducedProcess induced(chain.process, chain.map);
    json out = json::object();
    for (std::size_t j = 0; j < chain.spec.regions.size(); ++j) {
        const auto& region = chain.spec.regions[j];
        const Observation o = region.observations.front();
        const Action a = static_cast<Action>(region.block * 2);
        std::optional<History> h;
        for (const auto& [ctx, rows] : chain.process.table())
            if (!ctx.empty() && ctx.back().observation == o) {
                h = ctx;
                break;
            }
        if (!h) continue;
        double x = 0.0;
        for (const auto& w : induced.step(*h, a))
            if (w.outcome.state == 0) x += w.probability;
        out[region.name] = x;
    }
    return out;
}

json regional_comparison(const RegionChain& chain) {
    const auto sol = solve_regional_system(chain.p_double(), chain.r_double(), chain.spec.gamma, chain.closed_form);
    json regions = json::array();
    for (std::size_t i = 0; i < chain.spec.regions.size(); ++i)
        regions.push_back({{"region", chain.spec.regions[i].name},
                           {"class", {chain.spec.region_to_class[i].first, chain.spec.region_to_class[i].second}},
                           {"q", sol.q[i]},
                           {"closed_form", (*sol.closed_form)[i]},
                           {"delta", (*sol.deltas)[i]}});
    return {{"case", chain.spec.case_id},
            {"gamma", chain.spec.gamma},
            {"epsilon", chain.spec.epsilon},
            {"epsilon_prime", chain.spec.epsilon_prime},
            {"residual", sol.residual},
            {"regions", regions},
            {"p_psi_x", region_x_probabilities(chain)}};
}

json reference_grid_comparison(const GridWorld& grid, const DiscountConfig& cfg, double epsilon_q_uniform) {
    const auto v = grid_values(grid, cfg);
    const int w = grid.spec.width;
    json cells = json::array();
    for (const auto& [c, reference] : reference_grid_values()) {
        if (!grid.spec.inside(c)) continue;
        cells.push_back({{"cell", {c.x, c.y}}, {"reference", reference}, {"computed", v[static_cast<std::size_t>(c.y * w + c.x)]}});
    }
    double worst = 0.0;
    json pairs = json::array();
    for (int y = 0; y < grid.spec.height; ++y)
        for (int x = y + 1; x < grid.spec.width; ++x) {
            const Cell c{x, y}, m{y, x};
            if (!grid.spec.inside(m) || grid.spec.is_blocked(c) || grid.spec.is_blocked(m)) continue;
            const double d = std::abs(v[static_cast<std::size_t>(y * w + x)] - v[static_cast<std::size_t>(x * w + y)]);
            worst = std::max(worst, d);
            pairs.push_back({{"cell", {x, y}}, {"mirror", {y, x}}, {"deviation", d}});
        }
    // ε is measured on normalized rewards; convert the spread to raw units.
    const double raw_eps = epsilon_q_uniform / grid.transform.scale.to_double();
    return {{"cells", cells},
            {"mirror_pairs", pairs},
            {"max_mirror_deviation", worst},
            {"epsilon_q_uniform_raw", raw_eps},
            {"note", "reference values come from undisclosed parameters; shown for inspection only"}};
}

json modification_comparison(const ModifiedGridWorld& m, const DiscountConfig& cfg) {
    ValueEngine base(m.base.process, std::nullopt, cfg.gamma);
    ValueEngine mod(m.modified.process, std::nullopt, cfg.gamma);
    const History hb = m.base.history_at(m.cell);
    const History hm = m.modified.history_at(m.cell);
    const auto qb = base.q_row(hb, cfg.horizon);
    const auto qm = mod.q_row(hm, cfg.horizon);
    double tv = 0.0;
    for (Action a : {kUp, kDown}) {
        std::map<Outcome, double> diff;
        for (const auto& w : m.base.process.step(hb, a)) diff[w.outcome] += w.probability;
        for (const auto& w : m.modified.process.step(hm, a)) diff[w.outcome] -= w.probability;
        double d = 0.0;
        for (const auto& [o, x] : diff) d += std::abs(x);
        tv = std::max(tv, d / 2.0);
    }
    double dq = 0.0;
    for (std::size_t a = 0; a < qb.size(); ++a) dq = std::max(dq, std::abs(qb[a] - qm[a]));
    return {{"cell", {m.cell.x, m.cell.y}},
            {"delta", m.delta.to_string()},
            {"r_up", m.r_up.to_string()},
            {"r_down", m.r_down.to_string()},
            {"q_base", qb},
            {"q_modified", qm},
            {"max_q_difference", dq},
            {"kernel_tv", tv}};
}

}  // namespace

ExperimentSpec parse_spec(const json& document, const Overrides& overrides) {
    if (!document.is_object()) fail("experiment spec must be an object");
    for (const auto& [k, v] : document.items())
        if (!kSpecKeys.count(k)) fail("unknown spec field '" + k + "'");
    if (!document.contains("schema_version") || document["schema_version"] != kSchemaVersion)
        fail("schema_version must be " + std::to_string(kSchemaVersion));
    ExperimentSpec s;
    s.source = document;
    if (!document.contains("environment")) fail("missing environment");
    s.environment = document["environment"];
    if (!s.environment.is_string() && !s.environment.is_object()) fail("environment must be a name or a table");
    if (document.contains("environment_options")) {
        s.environment_options = document["environment_options"];
        if (!s.environment_options.is_object()) fail("environment_options must be an object");
    }
    if (document.contains("map")) {
        s.map = document["map"];
        if (!s.map.is_string() && !s.map.is_object()) fail("map must be a name or a table");
    }
    try {
        if (document.contains("policy")) s.policy = document["policy"].get<std::string>();
        if (document.contains("inverse_mode")) s.inverse_mode = document["inverse_mode"].get<std::string>();
        if (document.contains("gamma")) s.gamma = document["gamma"].get<double>();
        if (document.contains("horizon")) {
            if (!is_count(document["horizon"])) fail("horizon must be a positive integer");
            s.horizon = document["horizon"].get<std::size_t>();
        }
        if (document.contains("depth")) {
            if (!is_count(document["depth"])) fail("depth must be a non-negative integer");
            s.depth = document["depth"].get<std::size_t>();
        }
        if (document.contains("tolerance")) s.tolerance = document["tolerance"].get<double>();
        if (document.contains("seed")) {
            if (!is_count(document["seed"])) fail("seed must be a non-negative integer");
            s.seed = document["seed"].get<std::uint64_t>();
        }
        if (document.contains("outputs")) {
            const auto& out = document["outputs"];
            if (!out.is_object()) fail("outputs must be an object");
            for (const auto& [k, v] : out.items()) {
                if (k == "report") s.report_path = v.get<std::string>();
                else if (k == "grid") s.grid_path = v.get<std::string>();
                else fail("unknown output '" + k + "'");
            }
        }
    } catch (const json::exception& e) {
        fail(std::string("spec field has the wrong type: ") + e.what());
    }
    if (!document.contains("certificates") || document["certificates"] == "all") {
        s.certificates = all_certificate_kinds();
    } else {
        for (const auto& name : string_list(document["certificates"], "certificates")) {
            auto k = parse_certificate_kind(name);
            if (!k) fail("unknown certificate '" + name + "'");
            s.certificates.push_back(*k);
        }
    }

    if (overrides.horizon) s.horizon = *overrides.horizon;
    if (overrides.gamma) s.gamma = *overrides.gamma;
    if (overrides.tolerance) s.tolerance = *overrides.tolerance;
    if (overrides.seed) s.seed = *overrides.seed;

    if (!(s.gamma >= 0.0 && s.gamma < 1.0)) fail("gamma must lie in [0, 1)");
    if (s.horizon < 1) fail("horizon must be at least 1");
    if (s.depth > s.horizon) fail("depth must not exceed the horizon");
    if (!(s.tolerance > 0.0)) fail("tolerance must be positive");
    if (s.inverse_mode != "uniform" && s.inverse_mode != "visitation" && !starts_with(s.inverse_mode, "visitation:"))
        fail("inverse_mode must be uniform or visitation:<policy>");
    return s;
}

ExperimentSpec load_spec(const std::string& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) fail("cannot open spec '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(std::string("spec is not valid JSON: ") + e.what());
    }
    return parse_spec(doc, overrides);
}

Instance build_instance(const ExperimentSpec& spec) {
    const DiscountConfig cfg{spec.gamma, spec.horizon};
    Environment env = [&] {
        try {
            return resolve_environment(spec);
        } catch (const InvalidModelError& e) {
            fail(std::string("environment rejected: ") + e.what());
        }
    }();
    auto map = resolve_map(spec.map, env, cfg);
    auto policy = resolve_policy(spec.policy, env, cfg);
    std::optional<HistoryPolicy> behavior;
    InverseMode mode = InverseMode::uniform;
    if (starts_with(spec.inverse_mode, "visitation")) {
        mode = InverseMode::visitation;
        if (spec.inverse_mode.size() > 10) behavior = resolve_policy(spec.inverse_mode.substr(11), env, cfg);
    }
    return Instance{env.name, env.process, std::move(map), std::move(policy), std::move(behavior), mode,
                    env.transform, env.grid, env.modified, env.chain};
}

RunResult run_experiment(const ExperimentSpec& spec) {
    Instance inst = build_instance(spec);
    const DiscountConfig cfg{spec.gamma, spec.horizon};
    auto histories = enumerate_histories(inst.process, spec.depth);
    const std::size_t n_histories = histories.size();
    CertifyOptions options;
    options.inverse_mode = inst.inverse_mode;
    options.behavior = inst.behavior;
    options.solver_tolerance = spec.tolerance;
    Certifier certifier(inst.process, inst.map, std::move(histories), cfg, inst.policy, options);

    json certs = json::array();
    bool all_pass = true;
    for (auto kind : spec.certificates) {
        auto cert = certifier.certify(kind);
        all_pass = all_pass && cert.pass;
        certs.push_back(to_json(cert));
    }

    const auto& alphabets = inst.process.alphabets();
    json rewards = json::array();
    for (const auto& r : alphabets.rewards()) rewards.push_back(r.to_string());
    json fallback = json::array();
    for (const auto& [s, b] : certifier.inverse().fallback_cells())
        fallback.push_back({inst.map.states()[s], inst.map.abstract_actions()[b]});

    json resolved = {{"gamma", spec.gamma},       {"horizon", spec.horizon},   {"depth", spec.depth},
                     {"tolerance", spec.tolerance}, {"policy", spec.policy}, {"inverse_mode", spec.inverse_mode}};
    if (spec.seed) resolved["seed"] = *spec.seed;
    json kinds = json::array();
    for (auto k : spec.certificates) kinds.push_back(to_string(k));
    resolved["certificates"] = kinds;

    json report = {
        {"schema_version", kSchemaVersion},
        {"spec", spec.source},
        {"resolved", resolved},
        {"environment",
         {{"name", inst.environment_name},
          {"memory", inst.process.memory_bound() ? json(*inst.process.memory_bound()) : json(nullptr)},
          {"actions", alphabets.actions()},
          {"observations", alphabets.num_observations()},
          {"rewards", rewards},
          {"transform", transform_json(inst.transform)},
          {"histories", n_histories},
          {"coverage_complete", certifier.coverage_complete()},
          {"tail", cfg.tail()}}},
        {"map",
         {{"name", inst.map.name()},
          {"states", inst.map.num_states()},
          {"abstract_actions", inst.map.abstract_actions()},
          {"memory", inst.map.memory() ? json(*inst.map.memory()) : json(nullptr)}}},
        {"gaps", {{"policy", to_json(certifier.policy_gaps())}, {"optimal", to_json(certifier.optimal_gaps())}}},
        {"inverse", {{"mode", inverse_mode_name(inst.inverse_mode)}, {"fallback_cells", fallback}}},
        {"solver",
         {{"optimal", solve_json(certifier.optimal_solve())},
          {"representative", solve_json(certifier.representative_solve())}}},
        {"certificates", certs},
        {"all_pass", all_pass},
    };
    json comparisons = json::object();
    if (inst.chain) comparisons["regional"] = regional_comparison(*inst.chain);
    if (inst.grid && !inst.modified)
        comparisons["reference_grid"] = reference_grid_comparison(*inst.grid, cfg, certifier.optimal_gaps().epsilon_q_uniform);
    if (inst.modified) comparisons["modification"] = modification_comparison(*inst.modified, cfg);
    report["comparisons"] = comparisons;
    return {std::move(report), all_pass};
}

std::vector<double> grid_values(const GridWorld& grid, const DiscountConfig& cfg) {
    ValueEngine engine(grid.process, std::nullopt, cfg.gamma);
    const int w = grid.spec.width;
    std::vector<double> out(static_cast<std::size_t>(w * grid.spec.height), std::nan(""));
    for (int y = 0; y < grid.spec.height; ++y)
        for (int x = 0; x < w; ++x) {
            const Cell c{x, y};
            if (grid.spec.is_blocked(c)) continue;
            const double v = engine.v(grid.history_at(c), cfg.horizon) + cfg.tail() / 2.0;
            out[static_cast<std::size_t>(y * w + x)] = grid.transform.value_to_raw(v, cfg.gamma);
        }
    return out;
}

std::string grid_csv(const ExperimentSpec& spec) {
    Instance inst = build_instance(spec);
    if (!inst.grid) fail("grid output needs a grid-world environment");
    const auto& g = *inst.grid;
    const auto v = grid_values(g, {spec.gamma, spec.horizon});
    std::ostringstream out;
    char buf[64];
    for (int y = g.spec.height - 1; y >= 0; --y) {
        for (int x = 0; x < g.spec.width; ++x) {
            if (x) out << ',';
            const Cell c{x, y};
            if (g.spec.is_blocked(c)) {
                out << '#';
                continue;
            }
            std::snprintf(buf, sizeof buf, "%.4f", v[static_cast<std::size_t>(y * g.spec.width + x)]);
            out << (c == g.spec.goal ? "T:" : "") << buf;
        }
        out << '\n';
    }
    return out.str();
}

json process_to_json(const OriginalProcess& process) {
    const auto& a = process.alphabets();
    json rewards = json::array();
    for (const auto& r : a.rewards()) rewards.push_back(r.to_string());
    json rows = json::array();
    for (const auto& [ctx, dists] : process.table()) {
        json context = json::array();
        for (const auto& s : ctx.steps()) context.push_back(step_to_json(s, a));
        json per_action = json::array();
        for (const auto& dist : dists) {
            json outcomes = json::array();
            for (const auto& w : dist)
                outcomes.push_back({{"observation", a.observations()[w.outcome.observation]},
                                    {"reward", a.reward(w.outcome.reward).to_string()},
                                    {"probability", w.probability}});
            per_action.push_back(outcomes);
        }
        rows.push_back({{"context", context}, {"actions", per_action}});
    }
    return {{"actions", a.actions()},
            {"observations", a.observations()},
            {"rewards", rewards},
            {"memory", process.memory_bound() ? json(*process.memory_bound()) : json(nullptr)},
            {"rows", rows}};
}

OriginalProcess process_from_json(const json& t) {
    if (!t.is_object()) fail("inline environment must be an object");
    for (const char* key : {"actions", "observations", "rewards", "rows"})
        if (!t.contains(key)) fail(std::string("inline environment lacks '") + key + "'");
    std::vector<Rational> rewards;
    if (!t["rewards"].is_array()) fail("rewards must be a list");
    for (const auto& r : t["rewards"]) rewards.push_back(rational_of(r, "reward"));
    std::optional<std::size_t> memory;
    if (t.contains("memory") && !t["memory"].is_null()) {
        if (!is_count(t["memory"])) fail("memory must be a non-negative integer or null");
        memory = t["memory"].get<std::size_t>();
    }
    try {
        Alphabets a(string_list(t["actions"], "actions"), string_list(t["observations"], "observations"), rewards);
        KernelTable table;
        if (!t["rows"].is_array()) fail("rows must be a list");
        for (const auto& row : t["rows"]) {
            if (!row.is_object() || !row.contains("context") || !row.contains("actions"))
                fail("row must carry context and actions");
            History ctx = history_from_json(row["context"], a);
            std::vector<OutcomeDistribution> dists;
            if (!row["actions"].is_array()) fail("row actions must be a list");
            for (const auto& per_action : row["actions"]) {
                OutcomeDistribution d;
                if (!per_action.is_array()) fail("outcome list must be a list");
                for (const auto& o : per_action) {
                    if (!o.is_object() || !o.contains("observation") || !o.contains("reward") ||
                        !o.contains("probability"))
                        fail("outcome must carry observation, reward and probability");
                    auto obs = a.find_observation(o["observation"].get<std::string>());
                    auto rew = a.find_reward(rational_of(o["reward"], "outcome reward"));
                    if (!obs || !rew) fail("outcome names an unknown symbol");
                    d.push_back({{*obs, *rew}, probability_of(o["probability"])});
                }
                dists.push_back(std::move(d));
            }
            if (!table.emplace(std::move(ctx), std::move(dists)).second) fail("duplicate context row");
        }
        return OriginalProcess::from_table(std::move(a), std::move(table), memory);
    } catch (const InvalidModelError& e) {
        fail(std::string("inline environment rejected: ") + e.what());
    } catch (const json::exception& e) {
        fail(std::string("inline environment has the wrong type: ") + e.what());
    }
}

json map_to_json(const HomomorphismMap& map, const OriginalProcess& process) {
    if (!map.memory()) throw SpecError("only memory-bounded maps can be tabulated");
    const std::size_t k = std::max(*map.memory(), process.memory_bound().value_or(0));
    const auto& a = process.alphabets();
    json entries = json::array();
    for (const auto& ctx : reachable_contexts(process, k)) {
        json context = json::array();
        for (const auto& s : ctx.steps()) context.push_back(step_to_json(s, a));
        json actions = json::array();
        for (Action x = 0; x < a.num_actions(); ++x) actions.push_back(map.abstract_actions()[map.action_of(ctx, x)]);
        entries.push_back({{"context", context}, {"state", map.states()[map.state_of(ctx)]}, {"actions", actions}});
    }
    return {{"name", map.name()},
            {"memory", k},
            {"states", map.states()},
            {"abstract_actions", map.abstract_actions()},
            {"entries", entries}};
}

HomomorphismMap map_from_json(const json& t, const Alphabets& alphabets) {
    if (!t.is_object()) fail("inline map must be an object");
    for (const char* key : {"memory", "states", "abstract_actions", "entries"})
        if (!t.contains(key)) fail(std::string("inline map lacks '") + key + "'");
    if (!is_count(t["memory"])) fail("map memory must be a non-negative integer");
    const std::size_t k = t["memory"].get<std::size_t>();
    auto states = string_list(t["states"], "states");
    auto actions = string_list(t["abstract_actions"], "abstract_actions");
    auto index_of = [](const std::vector<std::string>& names, const std::string& n, const std::string& what) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == n) return static_cast<std::uint32_t>(i);
        fail("inline map names unknown " + what + " '" + n + "'");
    };
    struct Entry {
        AbstractState state;
        std::vector<AbstractAction> actions;
    };
    auto lookup = std::make_shared<std::map<History, Entry>>();
    if (!t["entries"].is_array()) fail("entries must be a list");
    for (const auto& e : t["entries"]) {
        if (!e.is_object() || !e.contains("context") || !e.contains("state") || !e.contains("actions"))
            fail("map entry must carry context, state and actions");
        History ctx = history_from_json(e["context"], alphabets);
        if (ctx.size() > k) fail("map context longer than the map memory");
        Entry entry{index_of(states, e["state"].get<std::string>(), "state"), {}};
        auto acts = string_list(e["actions"], "entry actions");
        if (acts.size() != alphabets.num_actions()) fail("map entry must list one abstract action per action");
        for (const auto& b : acts) entry.actions.push_back(index_of(actions, b, "abstract action"));
        if (!lookup->emplace(std::move(ctx), std::move(entry)).second) fail("duplicate map context");
    }
    auto find = [lookup, k, alphabets](const History& h) -> const Entry& {
        auto it = lookup->find(h.suffix(k));
        if (it == lookup->end()) throw DomainError("inline map has no entry for " + h.to_string(alphabets));
        return it->second;
    };
    return HomomorphismMap(
        std::move(states), std::move(actions), [find](const History& h) { return find(h).state; },
        [find](const History& h, Action a) { return find(h).actions.at(a); }, k,
        t.contains("name") ? t["name"].get<std::string>() : "inline");
}

json to_json(const BoundCertificate& cert) {
    json clauses = json::array();
    for (const auto& c : cert.clauses)
        clauses.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"slack", c.slack}, {"pass", c.pass}});
    return {{"kind", to_string(cert.kind)},
            {"pass", cert.pass},
            {"lhs", cert.lhs},
            {"rhs", cert.rhs},
            {"slack", cert.slack},
            {"hypothesis", cert.hypothesis},
            {"hypothesis_satisfied", cert.hypothesis_satisfied},
            {"inputs", cert.inputs},
            {"clauses", clauses}};
}

json to_json(const GapReport& g) {
    return {{"epsilon_mdp", g.epsilon_mdp},
            {"epsilon_q_uniform", g.epsilon_q_uniform},
            {"epsilon_v_uniform", g.epsilon_v_uniform},
            {"epsilon_max", g.epsilon_max},
            {"tail_slack", g.tail_slack},
            {"gamma", g.gamma},
            {"epsilon_q_rep", g.epsilon_q_rep},
            {"epsilon_pi_rep", g.epsilon_pi_rep},
            {"epsilon_mdp_state", g.epsilon_mdp_state},
            {"epsilon_v_state", g.epsilon_v_state}};
}

const std::vector<std::pair<Cell, double>>& reference_grid_values() {
    static const std::vector<std::pair<Cell, double>> values = {
        {{0, 0}, 1.74}, {{0, 1}, 1.94}, {{0, 3}, 2.42}, {{0, 4}, 2.70}, {{0, 5}, 2.42}, {{1, 0}, 1.94},
        {{1, 1}, 2.17}, {{1, 2}, 2.42}, {{1, 3}, 2.70}, {{1, 4}, 3.01}, {{1, 5}, 2.17}, {{2, 1}, 2.42},
        {{2, 2}, 2.17}, {{2, 4}, 3.35}, {{3, 0}, 2.42}, {{3, 1}, 2.70}, {{3, 3}, 3.35}, {{3, 4}, 3.74},
        {{3, 5}, 4.16}, {{4, 0}, 2.70}, {{4, 1}, 3.01}, {{4, 2}, 3.35}, {{4, 3}, 3.74}, {{4, 5}, 4.64},
        {{5, 1}, 2.70}, {{5, 3}, 4.16}, {{5, 4}, 4.64}, {{5, 5}, 5.16},
    };
    return values;
}

}  // namespace hgrl::experiment
