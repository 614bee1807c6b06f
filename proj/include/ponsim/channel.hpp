#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "ponsim/signal.hpp"

namespace ponsim {

/// Fiber reduced to its accumulated chromatic dispersion; attenuation is
/// absorbed by the receive-power setting downstream.
struct FiberSpec {
    double dispersion_ps_nm = 0.0;  // accumulated D*L
    double wavelength_nm = 1550.0;
};

enum class Band { O, C, L };

Band band_from_name(const std::string& name);
const char* band_name(Band band);
double band_wavelength_nm(Band band);  // O: 1310, C: 1550, L: 1590

/// All-pass dispersion transfer function on a two-sided frequency grid:
/// H(f) = exp(j * pi * lambda^2 * D_tot * f^2 / c).
std::vector<std::complex<double>> dispersion_response(const FiberSpec& spec,
                                                      std::span<const double> freqs_hz);

/// Scale an optical field so its mean power equals the target, in dBm.
SampledSignal set_rop(const SampledSignal& field, double target_rop_dbm);

inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }

}  // namespace ponsim
