#pragma once

// Scenario description shared by the CLI and the built-in figure presets.
//
// A scenario is a flat set of key/value pairs. Text files use
//   key = value        # comment
// and JSON files use one object with the same keys (arrays become
// comma-separated lists). Keys are validated against the chosen model.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace decolab {

enum class Model { gravity, qed_lindblad, qed_sde, qed_single_photon };
enum class Observable { wigner, pdensity, visibility, negativity, moments };

[[nodiscard]] std::string_view to_string(Model m);
[[nodiscard]] std::string_view to_string(Observable o);

class Scenario {
public:
    /// Throws ConfigError for a missing/unknown model or unknown keys.
    explicit Scenario(std::map<std::string, std::string> values);

    [[nodiscard]] const std::string& name() const { return values_.at("name"); }
    [[nodiscard]] Model model() const noexcept { return model_; }
    [[nodiscard]] const std::map<std::string, std::string>& values() const noexcept { return values_; }

    [[nodiscard]] bool has(const std::string& key) const { return values_.contains(key); }
    [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] double number(const std::string& key, double fallback) const;
    [[nodiscard]] std::optional<double> number(const std::string& key) const;
    [[nodiscard]] long integer(const std::string& key, long fallback) const;
    [[nodiscard]] bool flag(const std::string& key, bool fallback) const;
    [[nodiscard]] std::complex<double> complex(const std::string& key, std::complex<double> fallback) const;
    [[nodiscard]] std::vector<std::string> list(const std::string& key) const;

    [[nodiscard]] std::set<Observable> observables() const;

    /// Sampling instants: `times` (expressions such as 9pi/2 or inf), else
    /// 0..t_max in steps of `stride`, else the first `overlap_count`
    /// instants pi (k + 1/2).
    [[nodiscard]] std::vector<double> times() const;

    /// Returns a copy with key = value set (validated like the original).
    [[nodiscard]] Scenario with(const std::string& key, const std::string& value) const;

    /// One scenario per value of the `sweep = key: v1, v2, ...` entry (or
    /// just this one when there is no sweep), each with a suffix label.
    [[nodiscard]] std::vector<std::pair<std::string, Scenario>> expand_sweep() const;

    /// Canonical "key=value\n" listing, sorted by key.
    [[nodiscard]] std::string canonical() const;
    /// FNV-1a 64-bit hash of canonical(), as 16 hex digits.
    [[nodiscard]] std::string hash() const;

    /// Keys accepted for a model.
    [[nodiscard]] static const std::set<std::string>& allowed_keys(Model m);

private:
    std::map<std::string, std::string> values_;
    Model model_;
};

/// Parses "key = value" text. Throws ConfigError on malformed lines.
[[nodiscard]] Scenario parse_scenario_text(std::string_view text);
/// Parses a JSON object. Throws ConfigError on malformed input.
[[nodiscard]] Scenario parse_scenario_json(std::string_view text);
/// Reads a file; JSON when the extension is .json or the content starts with '{'.
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

/// Evaluates a time expression: numbers, pi, inf, + - * / ( ) and implicit
/// multiplication ("9pi/2"). Throws ConfigError on malformed input.
[[nodiscard]] double parse_time_expression(std::string_view text);

/// Parses "3", "-5", "1.5+2i", "2i". Throws ConfigError.
[[nodiscard]] std::complex<double> parse_complex(std::string_view text);

}  // namespace decolab
