#include "ponsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>

#include "ponsim/tables.hpp"

namespace ponsim {

std::uint64_t derive_cell_seed(std::uint64_t base_seed, std::uint64_t cell_index) {
    // splitmix64 of base ^ (index+1); stable across platforms.
    std::uint64_t z = base_seed ^ ((cell_index + 1) * 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

struct Cell {
    FormatKind format;
    double rb_gbps;
    double b3db_pct;
    double b20db_pct;  // derived in Butterworth mode
    double dispersion_ps_nm;
    std::uint64_t seed;
};

SweepRow run_cell(const Cell& c, const SweepGrid& grid) {
    SweepRow row;
    row.format = ModFormat::make(c.format).name();
    row.rb_gbps = c.rb_gbps;
    row.b3db_pct = c.b3db_pct;
    row.b20db_pct = c.b20db_pct;
    row.dispersion_ps_nm = c.dispersion_ps_nm;
    row.wavelength_nm = band_wavelength_nm(grid.band);
    row.seed = c.seed;
    row.status = "non-operable";

    try {
        const double rb = c.rb_gbps * 1e9;
        const double f3 = c.b3db_pct / 100.0 * rb;
        FilterSpec filt = grid.butterworth_poles > 0
                              ? FilterSpec::butterworth(grid.butterworth_poles, f3)
                              : FilterSpec::supergaussian_from_bandwidths(
                                    f3, c.b20db_pct / 100.0 * rb);
        auto scenario = LinkScenario::make(rb, c.format, filt);
        scenario.fiber.dispersion_ps_nm = c.dispersion_ps_nm;
        scenario.fiber.wavelength_nm = row.wavelength_nm;
        scenario.apd = grid.apd;
        scenario.eq = grid.eq;
        scenario.noise_seed = c.seed;
        scenario.prbs_seed = static_cast<std::uint32_t>(c.seed % ((1u << 17) - 1)) + 1;

        LinkEngine engine(std::move(scenario));
        const auto sens = engine.sensitivity();
        if (sens.converged) {
            row.sensitivity_dbm = sens.sensitivity_dbm;
            row.penalty_db = power_penalty(sens.sensitivity_dbm, reference_s0_dbm(rb));
            row.status = "ok";
        }
    } catch (const std::exception&) {
        row.status = "non-operable";
    }
    return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepGrid& grid, std::ostream* log) {
    std::vector<Cell> cells;
    std::uint64_t index = 0;
    for (auto fmt : grid.formats)
        for (double rb : grid.rb_gbps)
            for (double b3 : grid.b3db_pct) {
                std::vector<double> b20_axis = grid.b20db_pct;
                if (grid.butterworth_poles > 0)
                    b20_axis = {b3 * std::pow(99.0, 1.0 / (2.0 * grid.butterworth_poles))};
                for (double b20 : b20_axis)
                    for (double disp : grid.dispersion_ps_nm) {
                        const std::uint64_t seed = derive_cell_seed(grid.base_seed, index++);
                        if (b20 <= b3) {
                            if (log)
                                *log << "skipping cell B3dB=" << b3 << "% B20dB=" << b20
                                     << "%: needs B20dB > B3dB\n";
                            continue;
                        }
                        cells.push_back({fmt, rb, b3, b20, disp, seed});
                    }
            }

    std::vector<SweepRow> rows(cells.size());
    const int workers = std::max(1, grid.workers);
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) break;
            rows[i] = run_cell(cells[i], grid);
            if (log) {
                std::lock_guard<std::mutex> lock(log_mutex);
                *log << rows[i].format << " rb=" << rows[i].rb_gbps << " b3=" << rows[i].b3db_pct
                     << " b20=" << rows[i].b20db_pct << " d=" << rows[i].dispersion_ps_nm << " -> "
                     << rows[i].status;
                if (rows[i].sensitivity_dbm) *log << " " << *rows[i].sensitivity_dbm << " dBm";
                *log << "\n";
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.format, a.rb_gbps, a.b3db_pct, a.b20db_pct, a.dispersion_ps_nm) <
               std::tie(b.format, b.rb_gbps, b.b3db_pct, b.b20db_pct, b.dispersion_ps_nm);
    });
    return rows;
}

namespace {

std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
    if (!v) return "NA";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", *v);
    return buf;
}

}  // namespace

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "format,rb_gbps,b3db_pct,b20db_pct,dispersion_ps_nm,wavelength_nm,"
           "sensitivity_dbm,penalty_db,status,seed\n";
    for (const auto& r : rows) {
        out << r.format << "," << fmt_num(r.rb_gbps) << "," << fmt_num(r.b3db_pct) << ","
            << fmt_num(r.b20db_pct) << "," << fmt_num(r.dispersion_ps_nm) << ","
            << fmt_num(r.wavelength_nm) << "," << fmt_opt(r.sensitivity_dbm) << ","
            << fmt_opt(r.penalty_db) << "," << r.status << "," << r.seed << "\n";
    }
}

void write_plot_script(const std::vector<SweepRow>& rows, const std::string& csv_path,
                       std::ostream& out) {
    // Collect the distinct (format, rb, dispersion) groups in row order.
    std::vector<std::tuple<std::string, double, double>> groups;
    for (const auto& r : rows) {
        auto key = std::make_tuple(r.format, r.rb_gbps, r.dispersion_ps_nm);
        if (std::find(groups.begin(), groups.end(), key) == groups.end()) groups.push_back(key);
    }

    out << "# Contour plots of penalty vs (B3dB, B20dB); sweep data comes from\n"
        << "# " << csv_path << " only, nothing is recomputed here.\n";
    out << "set datafile separator ','\n";
    out << "set datafile missing 'NA'\n";

    // Bundled device operating points, one datablock per technology/rate.
    auto emit_points = [&](const char* name, std::span<const ReferenceCase> cases, bool at_25g) {
        out << "$" << name << " << EOD\n";
        for (const auto& c : cases) {
            const double b3 = at_25g ? c.b3db_pct_25g : c.b3db_pct_50g;
            const double b20 = at_25g ? c.b20db_pct_25g : c.b20db_pct_50g;
            if (b3 > 0) out << b3 << "," << b20 << "\n";
        }
        out << "EOD\n";
    };
    emit_points("tech10g_at25", reference_cases_10g(), true);
    emit_points("tech10g_at50", reference_cases_10g(), false);
    emit_points("tech25g_at50", reference_cases_25g(), false);

    out << "set dgrid3d 40,40\n";
    out << "set contour base\nset view map\nunset surface\n";
    out << "set cntrparam levels incremental 0,1,12\n";
    out << "set xlabel 'B3dB [%]'\nset ylabel 'B20dB [%]'\n";
    out << "set key outside\n";

    int idx = 0;
    for (const auto& [fmt, rb, disp] : groups) {
        ++idx;
        char name[160];
        std::snprintf(name, sizeof(name), "contour_%02d_%s_%gG_%gpsnm.png", idx, fmt.c_str(), rb,
                      disp);
        out << "\nset title '" << fmt << " @ " << rb << " Gb/s, " << disp << " ps/nm, penalty [dB]'\n";
        out << "set terminal pngcairo size 800,600\n";
        out << "set output '" << name << "'\n";
        out << "splot '" << csv_path << "' "
            << "using (strcol(1) eq '" << fmt << "' && $2 == " << rb << " && $5 == " << disp
            << " ? $3 : 1/0):4:8 with lines lc rgb 'black' title 'penalty'";
        if (rb == 25.0) {
            out << ", \\\n      $tech10g_at25 using 1:2:(0) with points pt 7 title '10G devices'\n";
        } else {
            out << ", \\\n      $tech10g_at50 using 1:2:(0) with points pt 7 title '10G devices'"
                << ", \\\n      $tech25g_at50 using 1:2:(0) with points pt 9 title '25G devices'\n";
        }
    }
}

}  // namespace ponsim
