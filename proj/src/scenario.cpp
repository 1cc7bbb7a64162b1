#include "decolab/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "decolab/errors.hpp"

namespace decolab {

std::string_view to_string(Model m) {
    switch (m) {
        case Model::gravity: return "gravity";
        case Model::qed_lindblad: return "qed_lindblad";
        case Model::qed_sde: return "qed_sde";
        case Model::qed_single_photon: return "qed_single_photon";
    }
    return "unknown";
}

std::string_view to_string(Observable o) {
    switch (o) {
        case Observable::wigner: return "wigner";
        case Observable::pdensity: return "pdensity";
        case Observable::visibility: return "visibility";
        case Observable::negativity: return "negativity";
        case Observable::moments: return "moments";
    }
    return "unknown";
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

Model parse_model(const std::string& text) {
    if (text == "gravity") return Model::gravity;
    if (text == "qed_lindblad") return Model::qed_lindblad;
    if (text == "qed_sde") return Model::qed_sde;
    if (text == "qed_single_photon") return Model::qed_single_photon;
    throw ConfigError(fmt::format("unknown model '{}'", text));
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
        throw ConfigError(fmt::format("key '{}': '{}' is not a finite number", key, text));
    }
    return v;
}

const std::set<std::string> kCommonKeys{"name",   "description", "source",   "model",    "observables",
                                        "times",  "t_max",       "stride",   "overlap_count", "dim",
                                        "grid_nx", "grid_np", "grid_range",  "x_points", "x_range",  "sweep", "seed"};

std::set<std::string> with_common(std::initializer_list<const char*> extra) {
    std::set<std::string> keys = kCommonKeys;
    for (const char* k : extra) keys.insert(k);
    return keys;
}

/// Recursive-descent evaluator for time expressions.
class TimeParser {
public:
    explicit TimeParser(std::string_view text) : s_(text) {}

    double parse() {
        const double v = expression();
        skip();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return v;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(std::string_view why) const {
        throw ConfigError(fmt::format("time expression '{}': {}", s_, why));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool starts_factor() {
        skip();
        if (pos_ >= s_.size()) return false;
        const char c = s_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' || std::isalpha(static_cast<unsigned char>(c));
    }

    double expression() {
        double v = term();
        while (true) {
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }
    double term() {
        double v = unary();
        while (true) {
            if (eat('*')) v *= unary();
            else if (eat('/')) {
                const double d = unary();
                if (d == 0.0) fail("division by zero");
                v /= d;
            } else if (starts_factor()) v *= unary();  // implicit product, as in 9pi
            else return v;
        }
    }
    double unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return primary();
    }
    double primary() {
        skip();
        if (eat('(')) {
            const double v = expression();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
            std::size_t end = pos_;
            while (end < s_.size() && std::isalpha(static_cast<unsigned char>(s_[end]))) ++end;
            const std::string_view word = s_.substr(pos_, end - pos_);
            pos_ = end;
            if (word == "pi") return std::numbers::pi;
            if (word == "inf") return std::numeric_limits<double>::infinity();
            fail(fmt::format("unknown name '{}'", word));
        }
        std::size_t end = pos_;
        while (end < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.')) ++end;
        if (end < s_.size() && (s_[end] == 'e' || s_[end] == 'E') && end + 1 < s_.size() &&
            (std::isdigit(static_cast<unsigned char>(s_[end + 1])) || s_[end + 1] == '-' || s_[end + 1] == '+')) {
            end += 2;
            while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end]))) ++end;
        }
        if (end == pos_) fail("expected a number");
        const std::string number(s_.substr(pos_, end - pos_));
        pos_ = end;
        char* stop = nullptr;
        const double v = std::strtod(number.c_str(), &stop);
        if (stop != number.c_str() + number.size()) fail(fmt::format("bad number '{}'", number));
        return v;
    }
};

}  // namespace

const std::set<std::string>& Scenario::allowed_keys(Model m) {
    static const std::set<std::string> gravity =
        with_common({"alpha1", "alpha2", "coupling_over_pi", "cutoff", "beta", "temperature", "include_kerr_phase",
                     "include_freq_shift", "decay_form"});
    static const std::set<std::string> lindblad =
        with_common({"alpha", "alpha1", "alpha2", "gamma", "nbar", "omega", "dt", "frame"});
    static const std::set<std::string> sde =
        with_common({"alpha", "gamma", "nbar", "theta", "omega", "dt", "n_traj", "variant", "nonrwa_mode", "calculus",
                     "compare_quantum", "quantum_dim", "average_from"});
    switch (m) {
        case Model::gravity: return gravity;
        case Model::qed_lindblad:
        case Model::qed_single_photon: return lindblad;
        case Model::qed_sde: return sde;
    }
    return gravity;
}

Scenario::Scenario(std::map<std::string, std::string> values) : values_(std::move(values)), model_(Model::gravity) {
    const auto it = values_.find("model");
    if (it == values_.end()) throw ConfigError("scenario has no 'model' key");
    model_ = parse_model(it->second);
    if (!values_.contains("name")) values_["name"] = "scenario";
    const auto& allowed = allowed_keys(model_);
    for (const auto& [key, value] : values_) {
        if (!allowed.contains(key)) {
            throw ConfigError(fmt::format("unknown key '{}' for model {}", key, to_string(model_)));
        }
    }
    if (has("sweep")) {
        const std::string spec = values_.at("sweep");
        const auto colon = spec.find(':');
        if (colon == std::string::npos) throw ConfigError("key 'sweep': expected 'key: v1, v2, ...'");
        const std::string swept = trim(spec.substr(0, colon));
        if (!allowed.contains(swept) || swept == "sweep" || swept == "model") {
            throw ConfigError(fmt::format("key 'sweep': cannot sweep unknown key '{}'", swept));
        }
    }
    (void)observables();
}

std::string Scenario::text(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::optional<double> Scenario::number(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return parse_double(key, it->second);
}

double Scenario::number(const std::string& key, double fallback) const { return number(key).value_or(fallback); }

long Scenario::integer(const std::string& key, long fallback) const {
    const auto v = number(key);
    if (!v) return fallback;
    if (*v != std::floor(*v)) throw ConfigError(fmt::format("key '{}': expected an integer", key));
    return static_cast<long>(*v);
}

bool Scenario::flag(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(fmt::format("key '{}': '{}' is not a boolean", key, v));
}

std::complex<double> Scenario::complex(const std::string& key, std::complex<double> fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return parse_complex(it->second);
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("key '{}': {}", key, e.what()));
    }
}

std::vector<std::string> Scenario::list(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return {};
    std::vector<std::string> items = split(it->second, ',');
    std::erase_if(items, [](const std::string& s) { return s.empty(); });
    return items;
}

std::set<Observable> Scenario::observables() const {
    std::set<Observable> out;
    for (const std::string& item : list("observables")) {
        if (item == "wigner") out.insert(Observable::wigner);
        else if (item == "pdensity") out.insert(Observable::pdensity);
        else if (item == "visibility") out.insert(Observable::visibility);
        else if (item == "negativity") out.insert(Observable::negativity);
        else if (item == "moments") out.insert(Observable::moments);
        else throw ConfigError(fmt::format("key 'observables': unknown observable '{}'", item));
    }
    return out;
}

std::vector<double> Scenario::times() const {
    std::vector<double> out;
    if (has("times")) {
        for (const std::string& item : list("times")) {
            const double t = parse_time_expression(item);
            if (t < 0.0) throw ConfigError(fmt::format("key 'times': negative time '{}'", item));
            out.push_back(t);
        }
        if (!std::is_sorted(out.begin(), out.end())) throw ConfigError("key 'times': values must be nondecreasing");
    } else if (has("t_max")) {
        const double t_max = parse_time_expression(text("t_max", "0"));
        const double stride = parse_time_expression(text("stride", "1"));
        if (!(stride > 0.0) || !std::isfinite(t_max) || t_max < 0.0) throw ConfigError("invalid t_max/stride");
        const auto count = static_cast<long>(std::floor(t_max / stride + 1e-9));
        for (long k = 0; k <= count; ++k) out.push_back(static_cast<double>(k) * stride);
    } else if (has("overlap_count")) {
        const long count = integer("overlap_count", 0);
        if (count < 1) throw ConfigError("key 'overlap_count' must be positive");
        for (long k = 0; k < count; ++k) out.push_back(std::numbers::pi * (static_cast<double>(k) + 0.5));
    }
    if (out.empty()) throw ConfigError("scenario specifies no sampling times (times, t_max or overlap_count)");
    return out;
}

Scenario Scenario::with(const std::string& key, const std::string& value) const {
    auto copy = values_;
    copy[key] = value;
    return Scenario(std::move(copy));
}

std::vector<std::pair<std::string, Scenario>> Scenario::expand_sweep() const {
    if (!has("sweep")) return {{"", *this}};
    const std::string spec = values_.at("sweep");
    const auto colon = spec.find(':');
    const std::string key = trim(spec.substr(0, colon));
    std::vector<std::pair<std::string, Scenario>> out;
    for (const std::string& value : split(spec.substr(colon + 1), ',')) {
        if (value.empty()) continue;
        auto copy = values_;
        copy.erase("sweep");
        copy[key] = value;
        std::string label = key + "=" + value;
        std::replace_if(label.begin(), label.end(), [](char c) { return !(std::isalnum(static_cast<unsigned char>(c)) || c == '=' || c == '.' || c == '-' || c == '_'); }, '_');
        out.emplace_back(std::move(label), Scenario(std::move(copy)));
    }
    if (out.empty()) throw ConfigError("key 'sweep': no values");
    return out;
}

std::string Scenario::canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
    return out;
}

std::string Scenario::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

Scenario parse_scenario_text(std::string_view text) {
    std::map<std::string, std::string> values;
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty() || body.front() == ';') continue;
        if (body.front() == '[' && body.back() == ']') continue;  // section headers carry no meaning
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected 'key = value'", number));
        const std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty()) throw ConfigError(fmt::format("line {}: empty key", number));
        if (values.contains(key)) throw ConfigError(fmt::format("line {}: duplicate key '{}'", number, key));
        values[key] = value;
    }
    return Scenario(std::move(values));
}

namespace {

std::string json_scalar(const std::string& key, const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw ConfigError(fmt::format("key '{}': unsupported JSON value", key));
}

}  // namespace

Scenario parse_scenario_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(fmt::format("malformed JSON: {}", e.what()));
    }
    if (!doc.is_object()) throw ConfigError("scenario JSON must be an object");
    std::map<std::string, std::string> values;
    for (const auto& [key, v] : doc.items()) {
        if (v.is_array()) {
            std::string joined;
            for (const auto& item : v) joined += (joined.empty() ? "" : ", ") + json_scalar(key, item);
            values[key] = joined;
        } else {
            values[key] = json_scalar(key, v);
        }
    }
    return Scenario(std::move(values));
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ConfigError(fmt::format("cannot read scenario file '{}'", path.string()));
    std::ostringstream buffer;
    buffer << file.rdbuf();
    const std::string content = buffer.str();
    const std::string head = trim(content);
    if (path.extension() == ".json" || (!head.empty() && head.front() == '{')) return parse_scenario_json(content);
    return parse_scenario_text(content);
}

double parse_time_expression(std::string_view text) { return TimeParser(text).parse(); }

std::complex<double> parse_complex(std::string_view text) {
    std::string s;
    for (const char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }
    if (s.empty()) throw ConfigError("empty complex number");
    if (s.back() != 'i' && s.back() != 'j') return {parse_double("complex", s), 0.0};

    s.pop_back();
    // Split before the sign that starts the imaginary part (skipping exponent signs).
    std::size_t split_at = 0;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split_at = k;
            break;
        }
    }
    const std::string re = s.substr(0, split_at);
    std::string im = s.substr(split_at);
    if (im.empty() || im == "+") im = "1";
    if (im == "-") im = "-1";
    return {re.empty() ? 0.0 : parse_double("complex", re), parse_double("complex", im)};
}

}  // namespace decolab
