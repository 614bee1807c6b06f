// Command-line front end: single-link BER/sensitivity runs, bandwidth
// sweeps with CSV output, device-response GF fitting, and the bundled
// reference tables.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <thread>

#include "ponsim/config.hpp"
#include "ponsim/filtering.hpp"
#include "ponsim/metrics.hpp"
#include "ponsim/sweep.hpp"
#include "ponsim/tables.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    ponsim::ScenarioOverrides ovr;
};

void add_scenario_flags(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "configuration file (key = value sections)");
    cmd->add_option("--format", opts.ovr.format, "modulation format")
        ->check(CLI::IsMember({"pam2", "pam4", "edb", "odb"}));
    cmd->add_option("--rb-gbps", opts.ovr.rb_gbps, "bit rate in Gb/s")
        ->check(CLI::IsMember({25.0, 50.0}));
    cmd->add_option("--b3db-pct", opts.ovr.b3db_pct, "filter B3dB, percent of Rb");
    cmd->add_option("--b20db-pct", opts.ovr.b20db_pct, "filter B20dB, percent of Rb");
    cmd->add_option("--poles", opts.ovr.poles, "Butterworth pole count (switches filter family)");
    cmd->add_option("--dispersion-ps-nm", opts.ovr.dispersion_ps_nm,
                    "accumulated chromatic dispersion");
    cmd->add_option("--band", opts.ovr.band, "wavelength band preset")
        ->check(CLI::IsMember({"O", "C", "L"}));
    cmd->add_option("--seed", opts.ovr.seed, "noise / sweep base seed");
}

ponsim::ConfigFile load_config(const CommonOpts& opts) {
    if (opts.config_path.empty()) return {};
    return ponsim::ConfigFile::load(opts.config_path);
}

void print_curve(const ponsim::SensitivityResult& res) {
    std::cout << "# rop_dbm,ber\n";
    for (const auto& [rop, ber] : res.ber_curve) std::cout << rop << "," << ber << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"25/50 Gb/s PON link simulator: filter shaping and dispersion studies"};
    app.require_subcommand(1);

    CommonOpts ber_opts, sens_opts, sweep_opts;
    double rop_dbm = -20.0;
    bool show_curve = false;
    int workers = 0;
    std::string out_path;
    bool emit_plot = false;
    std::string fit_tx, fit_rx;

    auto* cmd_ber = app.add_subcommand("ber", "bit error rate of one scenario at a fixed ROP");
    add_scenario_flags(cmd_ber, ber_opts);
    cmd_ber->add_option("--rop-dbm", rop_dbm, "received optical power")->required();

    auto* cmd_sens = app.add_subcommand("sensitivity", "ROP to reach the 1e-3 BER target");
    add_scenario_flags(cmd_sens, sens_opts);
    cmd_sens->add_flag("--curve", show_curve, "also print the sampled BER curve");

    auto* cmd_sweep = app.add_subcommand("sweep", "sensitivity/penalty sweep to CSV");
    add_scenario_flags(cmd_sweep, sweep_opts);
    cmd_sweep->add_option("--workers", workers, "parallel cells (default: hardware)");
    cmd_sweep->add_option("--out", out_path, "output CSV path");
    cmd_sweep->add_flag("--emit-plot-script", emit_plot, "write a gnuplot script next to the CSV");

    auto* cmd_fit = app.add_subcommand(
        "fit", "fit the equivalent identical-GF pair to a TX+RX device cascade");
    cmd_fit->add_option("tx", fit_tx, "TX response file (frequency_Hz magnitude_dB)")->required();
    cmd_fit->add_option("rx", fit_rx, "RX response file")->required();

    auto* cmd_tables =
        app.add_subcommand("tables", "dump the bundled reference transceiver table data");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (cmd_ber->parsed()) {
            const auto cfg = load_config(ber_opts);
            const auto scenario = ponsim::scenario_from_config(cfg, ber_opts.ovr);
            std::cout << "scenario: " << scenario.describe() << "\n";
            const auto res = ponsim::simulate_ber(scenario, rop_dbm);
            if (!res.operable) {
                std::cout << "rop_dbm=" << rop_dbm << " status=non-operable (" << res.note
                          << ")\n";
            } else {
                std::cout << "rop_dbm=" << rop_dbm << " ber=" << res.ber << "\n";
            }
        } else if (cmd_sens->parsed()) {
            const auto cfg = load_config(sens_opts);
            const auto scenario = ponsim::scenario_from_config(cfg, sens_opts.ovr);
            std::cout << "scenario: " << scenario.describe() << "\n";
            const auto res = ponsim::sensitivity(scenario);
            if (show_curve) print_curve(res);
            if (!res.converged) {
                std::cout << "status=non-operable (" << res.note << ")\n";
            } else {
                std::cout << "sensitivity_dbm=" << res.sensitivity_dbm << "\n";
                const double rb = scenario.bit_rate_hz;
                std::cout << "penalty_db="
                          << ponsim::power_penalty(res.sensitivity_dbm,
                                                   ponsim::reference_s0_dbm(rb))
                          << " (vs bundled S0 " << ponsim::reference_s0_dbm(rb) << " dBm)\n";
            }
        } else if (cmd_sweep->parsed()) {
            const auto cfg = load_config(sweep_opts);
            auto grid = ponsim::sweep_from_config(cfg, sweep_opts.ovr);
            if (workers > 0) grid.workers = workers;
            else if (grid.workers <= 1)
                grid.workers = std::max(1u, std::thread::hardware_concurrency());
            if (!out_path.empty()) grid.out_path = out_path;

            const auto rows = ponsim::run_sweep(grid, &std::cerr);
            std::ofstream csv(grid.out_path);
            if (!csv) throw std::runtime_error("cannot write CSV: " + grid.out_path);
            ponsim::write_sweep_csv(rows, csv);
            std::cout << "wrote " << rows.size() << " rows to " << grid.out_path << "\n";
            if (emit_plot) {
                const std::string script = grid.out_path + ".gp";
                std::ofstream gp(script);
                if (!gp) throw std::runtime_error("cannot write plot script: " + script);
                ponsim::write_plot_script(rows, grid.out_path, gp);
                std::cout << "wrote plot script " << script << "\n";
            }
        } else if (cmd_fit->parsed()) {
            const auto tx = ponsim::load_device_response(fit_tx);
            const auto rx = ponsim::load_device_response(fit_rx);
            const auto cascade = ponsim::cascade_responses(tx, rx);
            const auto fit = ponsim::fit_equivalent_gf(cascade.freqs_hz, cascade.mag_db);
            std::cout << "equivalent identical-GF pair: f3db_ghz=" << fit.f3db_hz / 1e9
                      << " f20db_ghz=" << fit.f20db_hz / 1e9
                      << " (rms fit error " << fit.rms_error_db << " dB)\n";
            for (double rb : {25e9, 50e9}) {
                const auto nb = ponsim::to_normalized(fit.f3db_hz, fit.f20db_hz, rb);
                std::cout << "rb_gbps=" << rb / 1e9 << " b3db_pct=" << nb.b3db_pct
                          << " b20db_pct=" << nb.b20db_pct << "\n";
            }
        } else if (cmd_tables->parsed()) {
            ponsim::dump_reference_tables(std::cout, ponsim::SweepGrid{}.b3db_pct,
                                          ponsim::SweepGrid{}.b20db_pct);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
