#include "ponsim/tables.hpp"

#include <array>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace ponsim {

namespace {

// 10G-class transceiver cascades, as identical-GF equivalents.
constexpr std::array<ReferenceCase, 13> kCases10g{{
    {1, "10G", "[17]", 8.9, "[17]", 7.5, 34.0, 68.0, 17.0, 34.0},
    {2, "10G", "[17]", 8.9, "[22]", 8.8, 32.8, 112.0, 16.4, 56.0},
    {3, "10G", "[17]", 8.9, "[23]", 8.1, 32.0, 136.0, 16.0, 68.0},
    {4, "10G", "[17]", 8.9, "[24]", 6.8, 29.6, 96.0, 14.8, 48.0},
    {5, "10G", "[21]", 7.7, "[17]", 7.5, 32.0, 56.0, 16.0, 28.0},
    {6, "10G", "[21]", 7.7, "[22]", 8.8, 27.6, 80.0, 13.8, 40.0},
    {7, "10G", "[21]", 7.7, "[23]", 8.1, 28.0, 96.0, 14.0, 48.0},
    {8, "10G", "[21]", 7.7, "[24]", 6.8, 26.8, 72.0, 13.4, 36.0},
    {9, "10G", "*", 9.9, "[17]", 7.5, 34.0, 70.0, 17.0, 35.0},
    {10, "10G", "*", 9.9, "[22]", 8.8, 35.2, 100.0, 17.6, 50.0},
    {11, "10G", "*", 9.9, "[23]", 8.1, 34.8, 128.0, 17.4, 64.0},
    {12, "10G", "*", 9.9, "[24]", 7.5, 31.6, 92.0, 15.8, 46.0},
    {13, "10G", "[25]", 0.0, "[25]", 0.0, 33.2, 70.0, 16.6, 35.0},
}};

// 25G-class transceiver cascades, normalized for 50 Gb/s use.
constexpr std::array<ReferenceCase, 12> kCases25g{{
    {1, "25G", "[26]", 18.9, "[28]", 15.8, 0.0, 0.0, 34.0, 60.0},
    {2, "25G", "[26]", 18.9, "[29]", 24.5, 0.0, 0.0, 40.0, 132.0},
    {3, "25G", "[26]", 18.9, "[30]", 32.0, 0.0, 0.0, 45.0, 140.0},
    {4, "25G", "[26]", 18.9, "[31]", 19.9, 0.0, 0.0, 40.0, 88.0},
    {5, "25G", "[27]", 28.2, "[28]", 15.8, 0.0, 0.0, 32.0, 58.0},
    {6, "25G", "[27]", 28.2, "[29]", 24.5, 0.0, 0.0, 50.0, 130.0},
    {7, "25G", "[27]", 28.2, "[30]", 32.0, 0.0, 0.0, 50.0, 110.0},
    {8, "25G", "[27]", 28.2, "[31]", 19.9, 0.0, 0.0, 44.0, 88.0},
    {9, "25G", "[21]", 23.9, "[28]", 15.8, 0.0, 0.0, 30.0, 58.0},
    {10, "25G", "[21]", 23.9, "[29]", 24.5, 0.0, 0.0, 42.0, 84.0},
    {11, "25G", "[21]", 23.9, "[30]", 32.0, 0.0, 0.0, 44.0, 90.0},
    {12, "25G", "[21]", 23.9, "[31]", 19.9, 0.0, 0.0, 38.0, 78.0},
}};

double nearest(std::span<const double> grid, double v) {
    double best = grid[0];
    for (double g : grid)
        if (std::abs(g - v) < std::abs(best - v)) best = g;
    return best;
}

}  // namespace

std::span<const ReferenceCase> reference_cases_10g() { return kCases10g; }
std::span<const ReferenceCase> reference_cases_25g() { return kCases25g; }

double reference_s0_dbm(double bit_rate_hz) {
    if (std::abs(bit_rate_hz - 25e9) < 1e6) return -28.1;
    if (std::abs(bit_rate_hz - 50e9) < 1e6) return -25.7;
    throw std::invalid_argument("reference_s0_dbm: anchors exist for 25 and 50 Gb/s only");
}

void dump_reference_tables(std::ostream& out, std::span<const double> grid_b3db_pct,
                           std::span<const double> grid_b20db_pct) {
    const bool with_grid = !grid_b3db_pct.empty() && !grid_b20db_pct.empty();
    out << "technology,case,tx_ref,tx_f3db_ghz,rx_ref,rx_f3db_ghz,rb_gbps,b3db_pct,b20db_pct";
    if (with_grid) out << ",nearest_b3db_pct,nearest_b20db_pct";
    out << "\n";

    auto emit = [&](const ReferenceCase& c, double rb_gbps, double b3, double b20) {
        out << c.technology << "," << c.case_id << "," << c.tx_ref << ",";
        if (c.tx_f3db_ghz > 0) out << c.tx_f3db_ghz;
        else out << "NA";
        out << "," << c.rx_ref << ",";
        if (c.rx_f3db_ghz > 0) out << c.rx_f3db_ghz;
        else out << "NA";
        out << "," << rb_gbps << "," << b3 << "," << b20;
        if (with_grid)
            out << "," << nearest(grid_b3db_pct, b3) << "," << nearest(grid_b20db_pct, b20);
        out << "\n";
    };

    for (const auto& c : kCases10g) {
        emit(c, 25.0, c.b3db_pct_25g, c.b20db_pct_25g);
        emit(c, 50.0, c.b3db_pct_50g, c.b20db_pct_50g);
    }
    for (const auto& c : kCases25g) emit(c, 50.0, c.b3db_pct_50g, c.b20db_pct_50g);

    out << "# s0_anchor,rb_gbps=25,dbm=" << reference_s0_dbm(25e9) << "\n";
    out << "# s0_anchor,rb_gbps=50,dbm=" << reference_s0_dbm(50e9) << "\n";
}

}  // namespace ponsim
