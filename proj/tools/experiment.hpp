#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hgrl/certify.hpp"
#include "hgrl/fixtures.hpp"

namespace hgrl::experiment {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Parsed experiment document. `environment` and `map` are either a fixture
/// name or an inline table.
struct ExperimentSpec {
    json source;
    json environment;
    json environment_options = json::object();
    json map;
    std::string policy = "uniform";
    std::string inverse_mode = "uniform";
    double gamma = 0.9;
    std::size_t horizon = 50;
    std::size_t depth = 3;
    double tolerance = 1e-12;
    std::optional<std::uint64_t> seed;
    std::vector<CertificateKind> certificates;
    std::optional<std::string> report_path;
    std::optional<std::string> grid_path;
};

/// Command-line overrides applied after parsing.
struct Overrides {
    std::optional<std::size_t> horizon;
    std::optional<double> gamma;
    std::optional<double> tolerance;
    std::optional<std::uint64_t> seed;
};

/// Throws SpecError on anything malformed or unresolvable.
ExperimentSpec parse_spec(const json& document, const Overrides& overrides = {});
ExperimentSpec load_spec(const std::string& path, const Overrides& overrides = {});

/// A resolved environment, map and policies.
struct Instance {
    std::string environment_name;
    OriginalProcess process;
    HomomorphismMap map;
    HistoryPolicy policy;
    std::optional<HistoryPolicy> behavior;
    InverseMode inverse_mode = InverseMode::uniform;
    RewardTransform transform;
    std::optional<GridWorld> grid;
    std::optional<ModifiedGridWorld> modified;
    std::optional<RegionChain> chain;
};

Instance build_instance(const ExperimentSpec& spec);

struct RunResult {
    json report;
    bool all_pass = false;
};

/// Runs every requested certificate and assembles the report. Nothing is
/// written to disk.
RunResult run_experiment(const ExperimentSpec& spec);

/// Per-cell optimal values in raw reward units, rows from the top. Blocked
/// cells are "#", the goal is "T:<value>". Throws SpecError for non-grid
/// environments.
std::string grid_csv(const ExperimentSpec& spec);

/// Grid values read off the history-side optimal values, raw units, indexed
/// y·width + x (NaN for blocked cells).
std::vector<double> grid_values(const GridWorld& grid, const DiscountConfig& cfg);

/// Inline table forms used by the experiment document.
json process_to_json(const OriginalProcess& process);
OriginalProcess process_from_json(const json& table);
/// Tabulates a memory-bounded map over the reachable contexts of `process`.
json map_to_json(const HomomorphismMap& map, const OriginalProcess& process);
HomomorphismMap map_from_json(const json& table, const Alphabets& alphabets);

json to_json(const BoundCertificate& cert);
json to_json(const GapReport& gaps);

/// Reference per-cell values for the default grid, keyed by (x, y). Display only.
const std::vector<std::pair<Cell, double>>& reference_grid_values();

}  // namespace hgrl::experiment
