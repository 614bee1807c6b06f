// Independent reference computations used by the unit and acceptance
// suites. Everything here is derived from closed forms or brute-force
// numerics, never from the library code paths it is checking.
#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "ponsim/rxchain.hpp"

namespace oracles {

inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

/// Super-Gaussian (n, f0) for a (f3dB, f20dB) pair by nested bisection on
/// the profile H(f) = exp(-(1/2)(f/f0)^(2n)) itself, no log algebra.
struct GfParams {
    double order_n;
    double f0_hz;
};

inline double gf_power2(double f, double n, double f0) {
    const double h = std::exp(-0.5 * std::pow(f / f0, 2.0 * n));
    return h * h;
}

inline double gf_solve_f0(double f3, double n) {
    double lo = f3 / 100.0, hi = f3 * 100.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = std::sqrt(lo * hi);
        if (gf_power2(f3, n, mid) < 0.5) lo = mid;  // |H|^2 grows with f0
        else hi = mid;
    }
    return std::sqrt(lo * hi);
}

inline GfParams numeric_gf_params(double f3, double f20) {
    double nlo = 1e-3, nhi = 1e3;
    for (int i = 0; i < 200; ++i) {
        const double n = std::sqrt(nlo * nhi);
        const double f0 = gf_solve_f0(f3, n);
        if (gf_power2(f20, n, f0) > 0.01) nlo = n;  // steeper n pushes the tail down
        else nhi = n;
    }
    const double n = std::sqrt(nlo * nhi);
    return {n, gf_solve_f0(f3, n)};
}

/// Gaussian-Q BER for two-level detection with a midpoint threshold, the
/// decision the pilot-trained slicer realizes. Level 0 carries no light;
/// level 1 carries twice the average power. `noise_gain` folds the RX
/// filter's noise-equivalent bandwidth and the equalizer's two-sample
/// combining into the per-sample noise variances.
inline double gaussq_pam2_ber(double rop_w, const ponsim::ApdParams& apd, double delta_f_hz,
                              double noise_gain) {
    const double p1 = 2.0 * rop_w;
    const double i1 = apd.gain * apd.responsivity_a_w * p1;
    const double shot1 = apd.electron_charge_c * apd.gain * apd.gain * apd.excess_noise *
                         apd.responsivity_a_w * p1 * delta_f_hz;
    const double thermal = apd.thermal_psd_a2_hz * delta_f_hz;
    const double s1 = std::sqrt((shot1 + thermal) * noise_gain);
    const double s0 = std::sqrt(thermal * noise_gain);
    const double ith = i1 / 2.0;
    return 0.5 * (q_function((i1 - ith) / s1) + q_function(ith / s0));
}

inline double gaussq_pam2_sensitivity_dbm(const ponsim::ApdParams& apd, double delta_f_hz,
                                          double noise_gain, double target_ber = 1e-3) {
    double lo = -45.0, hi = 0.0;  // BER decreases with power
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double ber = gaussq_pam2_ber(1e-3 * std::pow(10.0, mid / 10.0), apd, delta_f_hz,
                                           noise_gain);
        if (ber > target_ber) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Mean of |H(f)|^2 over a two-sided grid: the per-sample white-noise
/// variance gain of the filter.
inline double mean_power_gain(std::span<const std::complex<double>> h) {
    double acc = 0.0;
    for (const auto& v : h) acc += std::norm(v);
    return acc / static_cast<double>(h.size());
}

/// RMS width of a power waveform, sqrt(2 <t^2>) about its centroid; equals
/// the 1/e half-width for a Gaussian pulse.
inline double gaussian_width_from_power(std::span<const double> power, double dt,
                                        double t_center_index) {
    double p_sum = 0, t_sum = 0, t2_sum = 0;
    for (std::size_t i = 0; i < power.size(); ++i) {
        const double t = (static_cast<double>(i) - t_center_index) * dt;
        p_sum += power[i];
        t_sum += t * power[i];
        t2_sum += t * t * power[i];
    }
    const double mean_t = t_sum / p_sum;
    return std::sqrt(2.0 * (t2_sum / p_sum - mean_t * mean_t));
}

}  // namespace oracles
