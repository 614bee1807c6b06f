#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ponsim/metrics.hpp"
#include "ponsim/sweep.hpp"

namespace ponsim {

/// Flat "key = value" configuration with [section] headers; '#' and ';'
/// start comments. Keys are stored as "section.key".
class ConfigFile {
  public:
    static ConfigFile parse(std::istream& in, const std::string& name);
    static ConfigFile load(const std::string& path);
    ConfigFile() = default;

    bool has(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;
    const std::map<std::string, std::string>& values() const { return values_; }

    /// Typed accessors; consumed keys are tracked so unknown ones can be
    /// reported afterwards.
    std::optional<double> get_double(const std::string& key) const;
    std::optional<int> get_int(const std::string& key) const;
    std::optional<std::vector<double>> get_double_list(const std::string& key) const;
    std::optional<std::vector<std::string>> get_string_list(const std::string& key) const;

    /// Keys never touched by any accessor; non-empty means a config error.
    std::vector<std::string> unconsumed() const;

  private:
    std::map<std::string, std::string> values_;
    mutable std::map<std::string, bool> consumed_;
};

/// Command-line overrides applied on top of the config file.
struct ScenarioOverrides {
    std::optional<std::string> format;
    std::optional<double> rb_gbps;
    std::optional<double> b3db_pct;
    std::optional<double> b20db_pct;
    std::optional<int> poles;  // switches the filters to Butterworth
    std::optional<double> dispersion_ps_nm;
    std::optional<std::string> band;
    std::optional<std::uint64_t> seed;
};

/// Resolve a single-link scenario from config + overrides. Throws
/// std::invalid_argument naming the offending key or constraint.
LinkScenario scenario_from_config(const ConfigFile& cfg, const ScenarioOverrides& ovr);

/// Resolve a sweep grid ([sweep] section) with the same override rules.
SweepGrid sweep_from_config(const ConfigFile& cfg, const ScenarioOverrides& ovr);

}  // namespace ponsim
