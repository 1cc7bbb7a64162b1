#include "decolab/builtin_scenarios.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "decolab/errors.hpp"

namespace decolab {

namespace {

std::vector<BuiltinScenario> make_presets() {
    const std::string gravity_bath = "coupling_over_pi = 0.001\ncutoff = 1000\nbeta = 1\n";
    std::vector<BuiltinScenario> out;
    auto add = [&](std::string name, std::string provenance, std::string body) {
        out.push_back({name, provenance, "name = " + name + "\n" + body});
    };

    add("fig1", "Fig. 1: gravity-model Wigner snapshots of cats (3,-3), (3,-5), (3,-7)",
        "model = gravity\nalpha1 = 3\nsweep = alpha2: -3, -5, -7\n" + gravity_bath +
            "times = pi/2, 9pi/2, inf\nobservables = wigner, negativity\n");
    add("fig2", "Fig. 2(a,c,d): gravity-model steady-state position densities, alpha1 = 3",
        "model = gravity\nalpha1 = 3\nsweep = alpha2: -3, -5, -7\n" + gravity_bath +
            "times = inf\nobservables = pdensity\n");
    add("fig2b", "Fig. 2(b): gravity-model steady-state position density, alpha1 = -alpha2 = -5",
        "model = gravity\nalpha1 = -5\nalpha2 = 5\n" + gravity_bath + "times = inf\nobservables = pdensity\n");
    add("fig3a", "Fig. 3(a): gravity visibility vs tau, alpha = (3,-5), C/pi = 1e-4, kT/hw = 1, 3, 5",
        "model = gravity\nalpha1 = 3\nalpha2 = -5\ncoupling_over_pi = 0.0001\ncutoff = 1000\n"
        "sweep = temperature: 1, 3, 5\noverlap_count = 40\nobservables = visibility\n");
    add("fig3b", "Fig. 3(b): gravity visibility vs tau, alpha = (3,-5), kT/hw = 1, C/pi = 1e-4, 3e-4, 5e-4",
        "model = gravity\nalpha1 = 3\nalpha2 = -5\ntemperature = 1\ncutoff = 1000\n"
        "sweep = coupling_over_pi: 0.0001, 0.0003, 0.0005\noverlap_count = 40\nobservables = visibility\n");
    add("fig3c", "Fig. 3(c): gravity visibility vs tau, alpha1 = 3, alpha2 = -3, -4, -5, C/pi = 1e-4, kT/hw = 1",
        "model = gravity\nalpha1 = 3\ncoupling_over_pi = 0.0001\ntemperature = 1\ncutoff = 1000\n"
        "sweep = alpha2: -3, -4, -5\noverlap_count = 40\nobservables = visibility\n");

    const char* panels[] = {"a", "b", "c", "d"};
    const double q_inv[] = {0.003, 0.005, 0.003, 0.005};
    const double occupation[] = {3, 3, 5, 5};
    for (int k = 0; k < 4; ++k) {
        add(fmt::format("fig4{}", panels[k]),
            fmt::format("Fig. 4({}): <Re a> for alpha = 4, 1/Q = {}, n = {}; RWA, non-RWA and quantum, 3000 trajectories",
                        panels[k], q_inv[k], occupation[k]),
            fmt::format("model = qed_sde\nalpha = 4\ngamma = {}\nnbar = {}\nn_traj = 3000\nvariant = both\n"
                        "compare_quantum = true\nt_max = 200\nstride = 0.5\nseed = {}\nobservables = moments\n",
                        q_inv[k], occupation[k], 4000 + k));
    }
    for (int k = 0; k < 4; ++k) {
        add(fmt::format("fig5{}", panels[k]),
            fmt::format("Fig. 5({}): <a^+ a> for alpha = 4, 1/Q = {}, n = {}; classical (5000 trajectories) and quantum",
                        panels[k], q_inv[k], occupation[k]),
            fmt::format("model = qed_sde\nalpha = 4\ngamma = {}\nnbar = {}\nn_traj = 5000\nvariant = rwa\n"
                        "compare_quantum = true\nt_max = 200\nstride = 0.5\nseed = {}\nobservables = moments\n",
                        q_inv[k], occupation[k], 5000 + k));
    }

    add("fig6", "Fig. 6: two-photon-damped cat Wigner snapshots, alpha = 3, 1/Q = 0.001, n = 3, 5",
        "model = qed_lindblad\nalpha1 = 3\nalpha2 = -3\ngamma = 0.001\nsweep = nbar: 3, 5\n"
        "times = 0, 3pi/2, 9pi/2\nobservables = wigner, negativity\n");
    add("fig7", "Fig. 7: position density at the overlaps k = 0, 6, 42, 190; alpha = 5, 1/Q = 0.0005, n = 3",
        "model = qed_lindblad\nalpha1 = 5\nalpha2 = -5\ngamma = 0.0005\nnbar = 3\n"
        "times = pi/2, (6+1/2)pi, (42+1/2)pi, (190+1/2)pi\nobservables = pdensity, visibility\n");
    add("fig8a", "Fig. 8(a): two-photon visibility vs tau, 1/Q = 0.0003, n = 3, alpha = 3, 5, 7",
        "model = qed_lindblad\ngamma = 0.0003\nnbar = 3\nsweep = alpha1: 3, 5, 7\n"
        "overlap_count = 100\nobservables = visibility\n");
    add("fig8b", "Fig. 8(b): two-photon visibility vs tau, alpha = 3, n = 5, 1/Q = 0.001, 0.003, 0.005",
        "model = qed_lindblad\nalpha1 = 3\nnbar = 5\nsweep = gamma: 0.001, 0.003, 0.005\n"
        "overlap_count = 100\nobservables = visibility\n");
    add("fig8c", "Fig. 8(c): two-photon visibility vs tau, 1/Q = 0.0003, alpha = 3, n = 3, 5, 7",
        "model = qed_lindblad\nalpha1 = 3\ngamma = 0.0003\nsweep = nbar: 3, 5, 7\n"
        "overlap_count = 100\nobservables = visibility\n");
    return out;
}

}  // namespace

const std::vector<BuiltinScenario>& builtin_scenarios() {
    static const std::vector<BuiltinScenario> presets = make_presets();
    return presets;
}

bool is_builtin(std::string_view name) {
    const auto& all = builtin_scenarios();
    return std::any_of(all.begin(), all.end(), [&](const BuiltinScenario& b) { return b.name == name; });
}

Scenario builtin_scenario(std::string_view name) {
    for (const BuiltinScenario& b : builtin_scenarios()) {
        if (b.name == name) return parse_scenario_text(b.text);
    }
    throw ConfigError(fmt::format("unknown built-in scenario '{}'", name));
}

std::string list_scenarios() {
    std::string out;
    for (const BuiltinScenario& b : builtin_scenarios()) {
        const Scenario s = parse_scenario_text(b.text);
        std::string params;
        for (const auto& [k, v] : s.values()) {
            if (k == "name" || k == "observables") continue;
            params += fmt::format("{}{}={}", params.empty() ? "" : "; ", k, v);
        }
        out += fmt::format("{:<6} {}\n       {}\n", b.name, b.provenance, params);
    }
    return out;
}

}  // namespace decolab
