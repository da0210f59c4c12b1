#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arps/experiments.hpp"
#include "arps/plants.hpp"
#include "arps/timescale.hpp"

namespace arps {

enum class KeyKind { Real, Integer, Boolean, Choice, RealList, RealOrAuto };

struct ConfigKey {
    const char* name;
    KeyKind kind;
    const char* default_value;
    const char* choices;  // '|'-separated, Choice keys only
    const char* help;
};

/// Every recognised key, in documentation order.
std::span<const ConfigKey> config_keys();

/// Flat key = value configuration. Values are kept as validated strings and
/// parsed on resolution, so a dump reloads to the same state.
class Config {
public:
    Config();

    /// Throws ConfigError for unknown keys or values of the wrong type.
    void set(const std::string& key, const std::string& value);
    const std::string& get(const std::string& key) const;

    /// Scenario presets: 0 clears nothing, 1 and 2 load the hybrid-controller
    /// studies.
    void apply_scenario(int scenario);
    /// Finer sweep axes over the full standard ranges.
    void apply_dense();

    /// Reads `key = value` lines ('#' starts a comment). A scenario named in
    /// the file (or passed as override) is applied before the file's other
    /// keys. Throws ConfigError naming the path when it cannot be read.
    void load_file(const std::string& path, std::optional<int> scenario_override = {});
    void load_text(const std::string& text, const std::string& origin,
                   std::optional<int> scenario_override = {});

    /// One `key = value` line per key in documentation order.
    std::string to_text() const;
    std::vector<std::pair<std::string, std::string>> entries() const;

    double real(const std::string& key) const;
    long integer(const std::string& key) const;
    bool boolean(const std::string& key) const;
    std::vector<double> reals(const std::string& key) const;
    /// nullopt for "auto".
    std::optional<double> real_or_auto(const std::string& key) const;

private:
    std::map<std::string, std::string> values_;
};

std::vector<SimulationCase> resolve_cases(const Config& cfg);
PlantSpec resolve_plant(const Config& cfg);
DisturbanceParams resolve_disturbance(const Config& cfg);
Controller resolve_controller(const Config& cfg);

SweepGrid resolve_grid(const Config& cfg);
SweepSettings resolve_sweep(const Config& cfg);

struct AssumptionGrid {
    std::vector<double> t;
    std::vector<Vec> sigma;
};
AssumptionGrid resolve_assumption_grid(const Config& cfg);

/// Assumption grid check; true when rank holds, q < 1 and 1 + q1 > 0.
bool assumptions_hold(const AssumptionReport& r) noexcept;

OracleSettings resolve_oracle(const Config& cfg, const AssumptionReport& assumptions);

}  // namespace arps
