#pragma once

#include <cstdint>

#include "ponsim/filtering.hpp"
#include "ponsim/signal.hpp"

namespace ponsim {

/// APD + TIA constants. The excess noise factor follows F = G^0.75 when the
/// gain changes; all receiver thermal contributions live in thermal_psd.
struct ApdParams {
    double responsivity_a_w = 0.8;
    double gain = 25.0;
    double excess_noise = 11.180339887498949;  // 25^0.75
    double thermal_psd_a2_hz = 1.024e-21;
    double electron_charge_c = 1.602176634e-19;

    static ApdParams with_gain(double gain, double responsivity_a_w = 0.8,
                               double thermal_psd_a2_hz = 1.024e-21);
};

/// Square-law detection with signal-dependent shot noise and thermal noise,
/// both white over the simulation band (Delta_f = sample rate):
///   i = G*R*P + n, n ~ N(0, q*G^2*F*R*P*Delta_f + N0*Delta_f) per sample.
/// Deterministic per seed; noise_enabled=false keeps only the mean term.
SampledSignal detect(const SampledSignal& power, const ApdParams& apd, std::uint64_t noise_seed,
                     bool noise_enabled = true);

/// Receiver electrical low-pass on the photocurrent.
SampledSignal rx_filter(const SampledSignal& current, const FilterSpec& spec);

}  // namespace ponsim
