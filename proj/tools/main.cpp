#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "experiment.hpp"
#include "hgrl/errors.hpp"

namespace {

using hgrl::experiment::json;

enum Exit { kOk = 0, kCertificateFailed = 1, kBadSpec = 2, kRuntime = 3 };

int diagnose(const char* kind, const std::exception& e, int code) {
    std::cerr << json{{"error", kind}, {"message", e.what()}}.dump() << '\n';
    return code;
}

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    return static_cast<bool>(out);
}

template <class F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const hgrl::SpecError& e) {
        return diagnose("spec", e, kBadSpec);
    } catch (const hgrl::InvalidModelError& e) {
        return diagnose("model", e, kBadSpec);
    } catch (const hgrl::SizeLimitError& e) {
        return diagnose("size_limit", e, kRuntime);
    } catch (const hgrl::UpliftInfeasibleError& e) {
        return diagnose("uplift_infeasible", e, kRuntime);
    } catch (const hgrl::DegenerateSupportError& e) {
        return diagnose("degenerate_support", e, kRuntime);
    } catch (const std::exception& e) {
        return diagnose("internal", e, kRuntime);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homomorphisms of history-based environments: surrogate MDPs and bound certificates"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string out_path;
    hgrl::experiment::Overrides overrides;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("spec", spec_path, "Experiment spec (JSON)")->required();
        cmd->add_option_function<std::size_t>("--horizon", [&](const std::size_t& v) { overrides.horizon = v; },
                                              "Truncation horizon T");
        cmd->add_option_function<double>("--gamma", [&](const double& v) { overrides.gamma = v; }, "Discount factor");
        cmd->add_option_function<double>("--tol", [&](const double& v) { overrides.tolerance = v; },
                                         "Solver tolerance");
        cmd->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { overrides.seed = v; },
                                                "Seed for random fixtures");
        cmd->add_option("--out", out_path, "Output path");
    };
    auto* run = app.add_subcommand("run", "Certify the requested bounds and write a report");
    add_common(run);
    auto* grid = app.add_subcommand("grid", "Emit per-cell optimal values of a grid world as CSV");
    add_common(grid);

    CLI11_PARSE(app, argc, argv);

    if (*run) {
        return guarded([&] {
            auto spec = hgrl::experiment::load_spec(spec_path, overrides);
            auto result = hgrl::experiment::run_experiment(spec);
            const std::string text = result.report.dump(2) + "\n";
            const std::string path = !out_path.empty() ? out_path : spec.report_path.value_or("");
            if (path.empty()) std::cout << text;
            else if (!write_file(path, text)) throw std::runtime_error("cannot write report '" + path + "'");
            for (const auto& c : result.report["certificates"])
                std::cerr << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["kind"].get<std::string>() << '\n';
            return result.all_pass ? kOk : kCertificateFailed;
        });
    }
    return guarded([&] {
        auto spec = hgrl::experiment::load_spec(spec_path, overrides);
        const std::string csv = hgrl::experiment::grid_csv(spec);
        const std::string path = !out_path.empty() ? out_path : spec.grid_path.value_or("");
        if (path.empty()) std::cout << csv;
        else if (!write_file(path, csv)) throw std::runtime_error("cannot write grid '" + path + "'");
        return kOk;
    });
}
