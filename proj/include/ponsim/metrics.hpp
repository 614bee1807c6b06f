#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ponsim/channel.hpp"
#include "ponsim/equalize.hpp"
#include "ponsim/filtering.hpp"
#include "ponsim/rxchain.hpp"
#include "ponsim/txchain.hpp"

namespace ponsim {

inline constexpr double kTargetBer = 1e-3;
inline constexpr std::size_t kCountedBits = 130000;  // direct error counting window
inline constexpr double kRopScanMinDbm = -35.0;
inline constexpr double kRopScanMaxDbm = 0.0;

/// Complete experiment descriptor for one link.
struct LinkScenario {
    double bit_rate_hz;
    FormatKind format;
    FilterSpec tx_filter;
    FilterSpec rx_filter;  // defaults to the TX filter
    FiberSpec fiber{};
    ApdParams apd{};
    EqualizerConfig eq{};
    double mzm_v_pi = 2.0;
    double cw_power_w = 1e-3;
    std::uint32_t prbs_seed = 1;
    std::uint64_t noise_seed = 1;
    bool noise_enabled = true;

    static LinkScenario make(double bit_rate_hz, FormatKind format, FilterSpec tx_filter,
                             std::optional<FilterSpec> rx_filter = std::nullopt);
    void validate() const;
    std::string describe() const;
};

struct BerResult {
    double ber = 1.0;
    bool operable = true;
    std::string note;  // set when alignment/adaptation failed
};

struct SensitivityResult {
    double sensitivity_dbm = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<double, double>> ber_curve;  // (rop_dbm, ber), ascending rop
    bool converged = false;
    std::string note;
};

/// Caches the deterministic transmit/fiber front end of a scenario so that
/// repeated ROP points only redo detection, filtering and equalization.
class LinkEngine {
  public:
    explicit LinkEngine(LinkScenario scenario);
    ~LinkEngine();
    LinkEngine(LinkEngine&&) noexcept;
    LinkEngine& operator=(LinkEngine&&) noexcept;

    const LinkScenario& scenario() const;

    /// Full receive chain at one received optical power.
    BerResult ber_at(double rop_dbm);

    /// Coarse 1 dB descent to bracket the target BER, bisection to 0.1 dB,
    /// then log-linear interpolation. All points share the noise seed.
    SensitivityResult sensitivity();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot helpers over a fresh engine.
BerResult simulate_ber(const LinkScenario& scenario, double rop_dbm);
SensitivityResult sensitivity(const LinkScenario& scenario);

/// Power penalty of a sensitivity against a reference, in dB.
double power_penalty(double sensitivity_dbm, double reference_dbm);

}  // namespace ponsim
