#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epsweep/errors.hpp"
#include "epsweep/model.hpp"
#include "epsweep/scenarios.hpp"

namespace epsweep {

/// Which diagnostic column groups go into the CSV.
struct OutputSelection {
    bool energies = true;    // E
    bool half_widths = true; // G2
    bool rigidity = true;    // r
    bool norms = true;       // A
    bool mixing = true;      // b2
    std::optional<std::string> dir;

    friend bool operator==(const OutputSelection&, const OutputSelection&) = default;
};

struct ScenarioConfig {
    /// Set when the config names a registry preset.
    std::optional<std::string> scenario;
    ModelSpec spec;
    Grid grid;
    OutputSelection output;

    /// Registry name, or "custom" for inline specs.
    std::string label() const { return scenario.value_or("custom"); }

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct ConfigIssue {
    enum class Kind { Parse, Validation };
    Kind kind;
    int line; // 0 when not tied to a line
    std::string field;
    std::string message;
};

/// Every problem found in a config, not only the first.
class ConfigError : public ValidationError {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

/// Parses the sectioned key = value format (see docs/config-format.md).
/// Throws ConfigError carrying all parse and validation issues.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);

/// Inverse of parse_config: parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

} // namespace epsweep
