#include "ponsim/rxchain.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ponsim {

ApdParams ApdParams::with_gain(double gain, double responsivity_a_w, double thermal_psd_a2_hz) {
    if (!(gain > 0) || !(responsivity_a_w > 0) || !(thermal_psd_a2_hz > 0))
        throw std::invalid_argument("ApdParams: parameters must be strictly positive");
    ApdParams p;
    p.gain = gain;
    p.responsivity_a_w = responsivity_a_w;
    p.excess_noise = std::pow(gain, 0.75);
    p.thermal_psd_a2_hz = thermal_psd_a2_hz;
    return p;
}

SampledSignal detect(const SampledSignal& power, const ApdParams& apd, std::uint64_t noise_seed,
                     bool noise_enabled) {
    if (power.domain() != Domain::Power)
        throw std::invalid_argument("detect: input must be a power waveform");
    const auto& p = power.real_samples();
    const double delta_f = power.sample_rate();
    const double mean_gain = apd.gain * apd.responsivity_a_w;
    const double shot_coef =
        apd.electron_charge_c * apd.gain * apd.gain * apd.excess_noise * apd.responsivity_a_w *
        delta_f;
    const double thermal_var = apd.thermal_psd_a2_hz * delta_f;

    std::vector<double> current(p.size());
    if (!noise_enabled) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] < 0.0) throw std::invalid_argument("detect: negative power sample");
            current[i] = mean_gain * p[i];
        }
        return SampledSignal(std::move(current), delta_f, Domain::Current);
    }

    std::mt19937_64 rng(noise_seed);
    std::normal_distribution<double> unit;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0.0) throw std::invalid_argument("detect: negative power sample");
        // Independent zero-mean Gaussians add; one draw carries both the
        // shot and thermal variance of this sample.
        const double sigma = std::sqrt(shot_coef * p[i] + thermal_var);
        current[i] = mean_gain * p[i] + sigma * unit(rng);
    }
    return SampledSignal(std::move(current), delta_f, Domain::Current);
}

SampledSignal rx_filter(const SampledSignal& current, const FilterSpec& spec) {
    const auto freqs = fft_frequencies(current.size(), current.sample_rate());
    return apply_response(current, spec.response(freqs));
}

}  // namespace ponsim
