#include "ponsim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace ponsim {

namespace {
constexpr double kSpeedOfLight = 299792458.0;  // m/s
}

Band band_from_name(const std::string& name) {
    if (name == "O" || name == "o") return Band::O;
    if (name == "C" || name == "c") return Band::C;
    if (name == "L" || name == "l") return Band::L;
    throw std::invalid_argument("unknown band: " + name + " (expected O, C or L)");
}

const char* band_name(Band band) {
    switch (band) {
        case Band::O: return "O";
        case Band::C: return "C";
        case Band::L: return "L";
    }
    return "?";
}

double band_wavelength_nm(Band band) {
    switch (band) {
        case Band::O: return 1310.0;
        case Band::C: return 1550.0;
        case Band::L: return 1590.0;
    }
    throw std::invalid_argument("unknown band");
}

std::vector<std::complex<double>> dispersion_response(const FiberSpec& spec,
                                                      std::span<const double> freqs_hz) {
    if (!(spec.wavelength_nm > 0))
        throw std::invalid_argument("dispersion_response: wavelength must be positive");
    const double lambda_m = spec.wavelength_nm * 1e-9;
    const double d_s_per_m = spec.dispersion_ps_nm * 1e-3;  // ps/nm -> s/m
    const double coef = M_PI * lambda_m * lambda_m * d_s_per_m / kSpeedOfLight;

    std::vector<std::complex<double>> h(freqs_hz.size());
    for (std::size_t i = 0; i < freqs_hz.size(); ++i)
        h[i] = std::polar(1.0, coef * freqs_hz[i] * freqs_hz[i]);
    return h;
}

SampledSignal set_rop(const SampledSignal& field, double target_rop_dbm) {
    const auto& e = field.complex_samples();
    double mean = 0.0;
    for (const auto& v : e) mean += std::norm(v);
    mean /= static_cast<double>(e.size());
    if (!(mean > 0.0)) throw std::invalid_argument("set_rop: field has zero mean power");

    const double scale = std::sqrt(dbm_to_watts(target_rop_dbm) / mean);
    std::vector<std::complex<double>> out(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) out[i] = e[i] * scale;
    return SampledSignal(std::move(out), field.sample_rate(), field.domain());
}

}  // namespace ponsim
