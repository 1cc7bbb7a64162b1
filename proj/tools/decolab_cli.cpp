// decolab command-line front end: run scenarios, list presets, print version.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "decolab/builtin_scenarios.hpp"
#include "decolab/errors.hpp"
#include "decolab/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

decolab::Scenario resolve(const std::string& target) {
    if (std::filesystem::exists(target)) return decolab::load_scenario(target);
    if (decolab::is_builtin(target)) return decolab::builtin_scenario(target);
    throw decolab::ConfigError(fmt::format("'{}' is neither a scenario file nor a built-in scenario", target));
}

std::string shortest(double v) { return fmt::format("{}", v); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decolab: decoherence of oscillator cat states in two toy system-bath models"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run a scenario file or built-in preset");
    std::string target;
    std::string out_dir = "results";
    std::optional<long long> seed;
    std::optional<int> dim;
    std::vector<double> grid;
    std::optional<double> dt;
    std::vector<std::string> overrides;
    run_cmd->add_option("scenario", target, "Scenario file (.ini/.txt/.json) or built-in name")->required();
    run_cmd->add_option("--out", out_dir, "Output directory");
    run_cmd->add_option("--seed", seed, "Random seed for stochastic models");
    run_cmd->add_option("--dim", dim, "Fock-space dimension");
    run_cmd->add_option("--grid", grid, "Wigner grid: NX NP RANGE")->expected(3);
    run_cmd->add_option("--dt", dt, "Integrator time step");
    run_cmd->add_option("--override", overrides, "Set key=value (repeatable)");

    app.add_subcommand("list", "List built-in scenarios");
    app.add_subcommand("version", "Print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (app.got_subcommand("version")) {
        fmt::print("decolab {}\n", decolab::version());
        return 0;
    }
    if (app.got_subcommand("list")) {
        fmt::print("{}", decolab::list_scenarios());
        return 0;
    }

    try {
        decolab::Scenario scenario = resolve(target);
        if (seed) scenario = scenario.with("seed", std::to_string(*seed));
        if (dim) scenario = scenario.with("dim", std::to_string(*dim));
        if (dt) scenario = scenario.with("dt", shortest(*dt));
        if (!grid.empty()) {
            scenario = scenario.with("grid_nx", shortest(grid[0]))
                           .with("grid_np", shortest(grid[1]))
                           .with("grid_range", shortest(grid[2]));
        }
        for (const std::string& item : overrides) {
            const auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw decolab::ConfigError(fmt::format("override '{}' is not key=value", item));
            }
            scenario = scenario.with(item.substr(0, eq), item.substr(eq + 1));
        }
        for (const auto& path : decolab::run(scenario, {out_dir})) fmt::print("{}\n", path.string());
        return 0;
    } catch (const decolab::ConfigError& e) {
        fmt::print(stderr, "decolab: {}: {}\n", e.name(), e.what());
        return kExitConfig;
    } catch (const decolab::Error& e) {
        fmt::print(stderr, "decolab: {}: {}\n", e.name(), e.what());
        return kExitRuntime;
    } catch (const std::exception& e) {
        fmt::print(stderr, "decolab: error: {}\n", e.what());
        return kExitRuntime;
    }
}
