#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ponsim/signal.hpp"
#include "ponsim/txchain.hpp"

namespace ponsim {

/// Receiver timing recovery could not lock onto the pilot.
struct AlignmentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// LMS adaptation blew up (step size too large for the input statistics).
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EqualizerConfig {
    int taps = 20;
    int samples_per_symbol = 2;  // fractional T/2 spacing at the equalizer input
    double step_mu = 2e-3;       // on zero-mean, unit-RMS input
    int training_symbols = 60000;
    int output_delay = -1;       // tap index of the cursor; -1 = center tap
};

/// Symbol-rate training targets, normalized to unit peak.
struct PilotStream {
    FormatKind kind;
    std::vector<double> targets;
};

/// Build the pilot for the transmitted bit stream. EDB targets are the
/// add-and-delay encoding of the antipodal precoded stream ({-1,0,+1});
/// ODB targets are the antipodal data bits themselves.
PilotStream make_pilot(std::span<const std::uint8_t> bits, const ModFormat& fmt);

struct AlignedStream {
    std::vector<double> samples;  // 2 samples per symbol, samples[2n] <-> pilot n
    std::ptrdiff_t delay_samples; // circular input-sample delay that was removed
    double correlation;           // normalized peak magnitude
};

/// Decimate the received waveform to two samples per symbol at the phase
/// and circular bulk delay that maximize the cross-correlation magnitude
/// against the pilot. Peaks below 0.1 (normalized) raise AlignmentError.
AlignedStream downsample_align(const SampledSignal& current, const PilotStream& pilot);

struct FfeResult {
    std::vector<double> symbols;       // frozen-tap output, one per symbol
    std::vector<double> taps;
    std::vector<double> training_mse;  // squared error per training symbol
};

/// Direct-form fractionally spaced FFE, LMS-trained against the pilot for
/// cfg.training_symbols, then frozen over the whole (circular) stream.
/// The input is internally normalized to zero mean and unit RMS.
FfeResult ffe_lms(std::span<const double> input_2sps, const PilotStream& pilot,
                  const EqualizerConfig& cfg);

/// Threshold the equalized symbols on the pilot level grid and map back to
/// bits (inverse Gray for PAM-4, mod-2 for EDB, sign for PAM-2/ODB).
std::vector<std::uint8_t> decide_decode(std::span<const double> symbols, const ModFormat& fmt);

/// Fraction of mismatches over exactly `count` bits.
double count_ber(std::span<const std::uint8_t> rx_bits, std::span<const std::uint8_t> tx_bits,
                 std::size_t count);

}  // namespace ponsim
