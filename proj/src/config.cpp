#include "ponsim/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ponsim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in, const std::string& name) {
    ConfigFile cfg;
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument(name + ":" + std::to_string(lineno) +
                                            ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(name + ":" + std::to_string(lineno) +
                                        ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument(name + ":" + std::to_string(lineno) + ": empty key");
        cfg.values_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    return parse(in, path);
}

bool ConfigFile::has(const std::string& key) const { return values_.count(key) != 0; }

std::optional<std::string> ConfigFile::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    consumed_[key] = true;
    return it->second;
}

std::optional<double> ConfigFile::get_double(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    try {
        std::size_t pos = 0;
        const double d = std::stod(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw std::invalid_argument("config key '" + key + "': not a number: " + *v);
    }
}

std::optional<int> ConfigFile::get_int(const std::string& key) const {
    auto d = get_double(key);
    if (!d) return std::nullopt;
    const int i = static_cast<int>(*d);
    if (*d != i) throw std::invalid_argument("config key '" + key + "': not an integer");
    return i;
}

std::optional<std::vector<std::string>> ConfigFile::get_string_list(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    std::vector<std::string> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::optional<std::vector<double>> ConfigFile::get_double_list(const std::string& key) const {
    auto items = get_string_list(key);
    if (!items) return std::nullopt;
    std::vector<double> out;
    for (const auto& s : *items) {
        try {
            out.push_back(std::stod(s));
        } catch (...) {
            throw std::invalid_argument("config key '" + key + "': not a number: " + s);
        }
    }
    return out;
}

std::vector<std::string> ConfigFile::unconsumed() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
        if (!consumed_.count(k)) out.push_back(k);
    return out;
}

namespace {

// The full key vocabulary across all subcommands; a config file may carry
// sections the current command does not use.
const char* const kKnownKeys[] = {
    "scenario.format",        "scenario.rb_gbps",        "scenario.prbs_seed",
    "scenario.noise_seed",    "filter.b3db_pct",         "filter.b20db_pct",
    "filter.poles",           "filter.rx_b3db_pct",      "filter.rx_b20db_pct",
    "filter.rx_poles",        "fiber.dispersion_ps_nm",  "fiber.band",
    "fiber.wavelength_nm",    "apd.responsivity_a_w",    "apd.gain",
    "apd.thermal_psd_a2_hz",  "equalizer.taps",          "equalizer.step_mu",
    "equalizer.training_symbols", "sweep.formats",       "sweep.rb_gbps",
    "sweep.b3db_pct",         "sweep.b20db_pct",         "sweep.dispersion_ps_nm",
    "sweep.band",             "sweep.poles",             "sweep.workers",
    "sweep.seed",             "sweep.out",
};

void reject_unknown_keys(const ConfigFile& cfg) {
    std::string msg;
    for (const auto& [key, value] : cfg.values()) {
        const bool known = std::any_of(std::begin(kKnownKeys), std::end(kKnownKeys),
                                       [&](const char* k) { return key == k; });
        if (!known) msg += " " + key;
    }
    if (!msg.empty()) throw std::invalid_argument("unknown config keys:" + msg);
}

struct FilterChoice {
    double b3db_pct;
    double b20db_pct;
    int poles;  // 0 = super-Gaussian
};

FilterSpec build_filter(const FilterChoice& c, double rb_hz) {
    const double f3 = c.b3db_pct / 100.0 * rb_hz;
    if (c.poles > 0) return FilterSpec::butterworth(c.poles, f3);
    if (c.b20db_pct <= c.b3db_pct)
        throw std::invalid_argument("filter: B20dB must exceed B3dB (got B3dB=" +
                                    std::to_string(c.b3db_pct) +
                                    "%, B20dB=" + std::to_string(c.b20db_pct) + "%)");
    return FilterSpec::supergaussian_from_bandwidths(f3, c.b20db_pct / 100.0 * rb_hz);
}

double resolve_wavelength(const ConfigFile& cfg, const ScenarioOverrides& ovr) {
    auto wl = cfg.get_double("fiber.wavelength_nm");
    auto band = cfg.get("fiber.band");
    if (ovr.band) band = *ovr.band;
    if (band) return band_wavelength_nm(band_from_name(*band));
    if (wl) return *wl;
    return band_wavelength_nm(Band::C);
}

}  // namespace

LinkScenario scenario_from_config(const ConfigFile& cfg, const ScenarioOverrides& ovr) {
    const std::string fmt_name =
        ovr.format.value_or(cfg.get("scenario.format").value_or("pam2"));
    const FormatKind format = format_from_name(fmt_name);
    const double rb_gbps = ovr.rb_gbps.value_or(cfg.get_double("scenario.rb_gbps").value_or(25.0));
    if (rb_gbps != 25.0 && rb_gbps != 50.0)
        throw std::invalid_argument("scenario: rb_gbps must be 25 or 50");
    const double rb_hz = rb_gbps * 1e9;

    FilterChoice tx;
    tx.b3db_pct = ovr.b3db_pct.value_or(cfg.get_double("filter.b3db_pct").value_or(120.0));
    tx.b20db_pct = ovr.b20db_pct.value_or(cfg.get_double("filter.b20db_pct").value_or(240.0));
    tx.poles = ovr.poles.value_or(cfg.get_int("filter.poles").value_or(0));

    // Optional asymmetric receiver filter (defaults to the TX one).
    FilterChoice rx = tx;
    if (auto v = cfg.get_double("filter.rx_b3db_pct")) rx.b3db_pct = *v;
    if (auto v = cfg.get_double("filter.rx_b20db_pct")) rx.b20db_pct = *v;
    if (auto v = cfg.get_int("filter.rx_poles")) rx.poles = *v;

    auto scenario = LinkScenario::make(rb_hz, format, build_filter(tx, rb_hz),
                                       build_filter(rx, rb_hz));

    scenario.fiber.dispersion_ps_nm =
        ovr.dispersion_ps_nm.value_or(cfg.get_double("fiber.dispersion_ps_nm").value_or(0.0));
    scenario.fiber.wavelength_nm = resolve_wavelength(cfg, ovr);

    if (auto v = cfg.get_double("apd.responsivity_a_w")) scenario.apd.responsivity_a_w = *v;
    if (auto v = cfg.get_double("apd.gain")) {
        scenario.apd = ApdParams::with_gain(*v, scenario.apd.responsivity_a_w,
                                            scenario.apd.thermal_psd_a2_hz);
    }
    if (auto v = cfg.get_double("apd.thermal_psd_a2_hz")) scenario.apd.thermal_psd_a2_hz = *v;

    if (auto v = cfg.get_int("equalizer.taps")) scenario.eq.taps = *v;
    if (auto v = cfg.get_double("equalizer.step_mu")) scenario.eq.step_mu = *v;
    if (auto v = cfg.get_int("equalizer.training_symbols")) scenario.eq.training_symbols = *v;

    if (auto v = cfg.get_int("scenario.prbs_seed")) scenario.prbs_seed = *v;
    if (auto v = cfg.get_int("scenario.noise_seed")) scenario.noise_seed = *v;
    if (ovr.seed) scenario.noise_seed = *ovr.seed;

    reject_unknown_keys(cfg);
    scenario.validate();
    return scenario;
}

SweepGrid sweep_from_config(const ConfigFile& cfg, const ScenarioOverrides& ovr) {
    SweepGrid grid;
    if (auto v = cfg.get_string_list("sweep.formats")) {
        grid.formats.clear();
        for (const auto& s : *v) grid.formats.push_back(format_from_name(s));
    }
    if (ovr.format) grid.formats = {format_from_name(*ovr.format)};
    if (auto v = cfg.get_double_list("sweep.rb_gbps")) grid.rb_gbps = *v;
    if (ovr.rb_gbps) grid.rb_gbps = {*ovr.rb_gbps};
    for (double rb : grid.rb_gbps)
        if (rb != 25.0 && rb != 50.0)
            throw std::invalid_argument("sweep: rb_gbps entries must be 25 or 50");
    if (auto v = cfg.get_double_list("sweep.b3db_pct")) grid.b3db_pct = *v;
    if (ovr.b3db_pct) grid.b3db_pct = {*ovr.b3db_pct};
    if (auto v = cfg.get_double_list("sweep.b20db_pct")) grid.b20db_pct = *v;
    if (ovr.b20db_pct) grid.b20db_pct = {*ovr.b20db_pct};
    if (auto v = cfg.get_double_list("sweep.dispersion_ps_nm")) grid.dispersion_ps_nm = *v;
    if (ovr.dispersion_ps_nm) grid.dispersion_ps_nm = {*ovr.dispersion_ps_nm};
    if (auto v = cfg.get("sweep.band")) grid.band = band_from_name(*v);
    if (ovr.band) grid.band = band_from_name(*ovr.band);
    if (auto v = cfg.get_int("sweep.poles")) grid.butterworth_poles = *v;
    if (ovr.poles) grid.butterworth_poles = *ovr.poles;
    if (auto v = cfg.get_int("sweep.workers")) grid.workers = *v;
    if (auto v = cfg.get_int("sweep.seed")) grid.base_seed = *v;
    if (ovr.seed) grid.base_seed = *ovr.seed;
    if (auto v = cfg.get("sweep.out")) grid.out_path = *v;

    // Receiver-side template shared by every cell.
    if (auto v = cfg.get_double("apd.responsivity_a_w")) grid.apd.responsivity_a_w = *v;
    if (auto v = cfg.get_double("apd.gain"))
        grid.apd = ApdParams::with_gain(*v, grid.apd.responsivity_a_w, grid.apd.thermal_psd_a2_hz);
    if (auto v = cfg.get_double("apd.thermal_psd_a2_hz")) grid.apd.thermal_psd_a2_hz = *v;
    if (auto v = cfg.get_int("equalizer.taps")) grid.eq.taps = *v;
    if (auto v = cfg.get_double("equalizer.step_mu")) grid.eq.step_mu = *v;
    if (auto v = cfg.get_int("equalizer.training_symbols")) grid.eq.training_symbols = *v;

    reject_unknown_keys(cfg);
    if (grid.formats.empty() || grid.rb_gbps.empty() || grid.b3db_pct.empty() ||
        (grid.b20db_pct.empty() && grid.butterworth_poles == 0) || grid.dispersion_ps_nm.empty())
        throw std::invalid_argument("sweep: empty grid axis");
    return grid;
}

}  // namespace ponsim
