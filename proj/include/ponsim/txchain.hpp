#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ponsim/signal.hpp"

namespace ponsim {

/// Samples per bit period; the simulation bandwidth is spb * Rb.
inline constexpr int kSamplesPerBit = 8;

enum class FormatKind { Pam2, Pam4, Edb, Odb };

enum class BiasMode { Quadrature, Null };

/// Modulation format descriptor: normalized drive levels, MZM bias point
/// and bits consumed per transmitted symbol.
struct ModFormat {
    FormatKind kind;
    std::vector<double> levels;  // drive amplitudes in [0,1], indexed by symbol value
    BiasMode bias_mode;
    int bits_per_symbol;

    static ModFormat make(FormatKind kind);
    const char* name() const;
};

FormatKind format_from_name(const std::string& name);

/// Mach-Zehnder drive constants. Quadrature bias uses A = Vb = Vpi/2,
/// null bias uses A = Vb = Vpi.
struct MzmParams {
    double v_pi = 2.0;        // volts (arbitrary; cancels through the chain)
    double amplitude_a = 1.0; // volts
    double bias_vb = 1.0;     // volts
    double cw_power_w = 1e-3; // laser power ahead of the modulator

    static MzmParams for_bias(BiasMode mode, double v_pi = 2.0, double cw_power_w = 1e-3);
};

/// Maximal-length PRBS of length 2^17-1 from x^17 + x^14 + 1.
/// The seed is the initial shift-register state (17 bits, nonzero).
std::vector<std::uint8_t> prbs17(std::uint32_t seed);

/// Duobinary precoder b_k = d_k XOR b_{k-1}, b_0 = 0.
std::vector<std::uint8_t> precode_db(std::span<const std::uint8_t> data);

/// Bits -> rectangular-NRZ drive waveform, normalized to [0,1], at
/// kSamplesPerBit samples per bit period (PAM-4 symbols hold two periods).
/// EDB/ODB precode internally; PAM-4 uses Gray pairs 00,01,11,10 -> 0..3.
SampledSignal map_to_drive(std::span<const std::uint8_t> bits, const ModFormat& fmt,
                           double bit_rate_hz);

/// Arccos pre-distortion that linearizes the MZM power transfer:
/// x_D = (A/pi) * arccos(1 - 2x) - Vb.
SampledSignal predistort(const SampledSignal& x, const MzmParams& p);

/// Chirp-less MZM: E = sqrt(cw_power) * cos(pi * x_F / Vpi), real field.
SampledSignal mzm_modulate(const SampledSignal& x_f, const MzmParams& p);

}  // namespace ponsim
