#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "decolab/scenario.hpp"

namespace decolab {

struct BuiltinScenario {
    std::string name;
    std::string provenance;  ///< which published figure panel the preset mirrors
    std::string text;        ///< scenario in key = value form
};

/// Presets fig1 ... fig8 in a stable order.
[[nodiscard]] const std::vector<BuiltinScenario>& builtin_scenarios();

/// Throws ConfigError for an unknown name.
[[nodiscard]] Scenario builtin_scenario(std::string_view name);

[[nodiscard]] bool is_builtin(std::string_view name);

/// One line per preset: name, provenance, and its defining parameters.
[[nodiscard]] std::string list_scenarios();

}  // namespace decolab
