#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ponsim/channel.hpp"
#include "ponsim/metrics.hpp"

namespace ponsim {

/// Cartesian sweep over formats, bit rates, filter bandwidths and
/// accumulated dispersion. With butterworth_poles > 0 the filters are
/// Butterworth and the B20dB axis collapses to the pole-derived value.
struct SweepGrid {
    std::vector<FormatKind> formats{FormatKind::Pam2, FormatKind::Pam4, FormatKind::Edb,
                                    FormatKind::Odb};
    std::vector<double> rb_gbps{25.0};
    std::vector<double> b3db_pct{15.0, 20.0, 25.0, 30.0, 35.0, 40.0};
    std::vector<double> b20db_pct{40.0, 60.0, 80.0, 100.0, 120.0, 140.0};
    std::vector<double> dispersion_ps_nm{0.0};
    Band band = Band::C;
    int butterworth_poles = 0;  // 0 = super-Gaussian mode
    ApdParams apd{};
    EqualizerConfig eq{};
    std::uint64_t base_seed = 1;
    int workers = 1;
    std::string out_path = "sweep.csv";
};

struct SweepRow {
    std::string format;
    double rb_gbps;
    double b3db_pct;
    double b20db_pct;
    double dispersion_ps_nm;
    double wavelength_nm;
    std::optional<double> sensitivity_dbm;  // empty -> "NA"
    std::optional<double> penalty_db;
    std::string status;  // "ok" or "non-operable"
    std::uint64_t seed;
};

/// Run every grid cell (in parallel over `workers`, deterministically seeded
/// per cell) and return rows sorted by (format, Rb, B3dB, B20dB, dispersion).
/// Cells with B20dB <= B3dB are skipped with a note to `log`.
std::vector<SweepRow> run_sweep(const SweepGrid& grid, std::ostream* log = nullptr);

/// Stable CSV schema; "NA" marks missing values, '.' is the decimal mark.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

/// Gnuplot contour script over the CSV (no recomputation), one plot per
/// (format, Rb, dispersion) group, reference device points overlaid.
void write_plot_script(const std::vector<SweepRow>& rows, const std::string& csv_path,
                       std::ostream& out);

/// Deterministic per-cell seed derivation (splitmix64 over base ^ index).
std::uint64_t derive_cell_seed(std::uint64_t base_seed, std::uint64_t cell_index);

}  // namespace ponsim
