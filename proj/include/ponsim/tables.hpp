#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ponsim {

/// Published TX/RX device cascades expressed as the equivalent pair of
/// identical super-Gaussians, bit-rate normalized. The 10G-class set keeps
/// both the 25 and 50 Gb/s normalizations; the 25G-class set is normalized
/// at 50 Gb/s only (zeros mark the unused slot).
struct ReferenceCase {
    int case_id;
    const char* technology;  // "10G" or "25G"
    const char* tx_ref;      // citation key of the transmitter device
    double tx_f3db_ghz;      // 0 when the source quotes only the cascade
    const char* rx_ref;
    double rx_f3db_ghz;
    double b3db_pct_25g;
    double b20db_pct_25g;
    double b3db_pct_50g;
    double b20db_pct_50g;
};

std::span<const ReferenceCase> reference_cases_10g();
std::span<const ReferenceCase> reference_cases_25g();

/// PAM-2 back-to-back sensitivity anchor with effectively unlimited
/// bandwidth, used as the penalty reference for each bit rate.
double reference_s0_dbm(double bit_rate_hz);

/// CSV dump of the bundled data. When a positive grid is given, each row
/// also carries the nearest cell of that (B3dB, B20dB) grid.
void dump_reference_tables(std::ostream& out, std::span<const double> grid_b3db_pct = {},
                           std::span<const double> grid_b20db_pct = {});

}  // namespace ponsim
