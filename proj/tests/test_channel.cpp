#include <doctest.h>

#include <cmath>

#include "ponsim/channel.hpp"

using namespace ponsim;

TEST_CASE("zero dispersion is the identity, any dispersion is all-pass") {
    const auto freqs = fft_frequencies(256, 2e11);
    const auto h0 = dispersion_response({0.0, 1550.0}, freqs);
    for (const auto& v : h0) CHECK(std::abs(v - std::complex<double>(1.0, 0.0)) < 1e-15);

    const auto h = dispersion_response({360.0, 1550.0}, freqs);
    for (const auto& v : h) CHECK(std::abs(v) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dispersion conserves field energy") {
    const std::size_t n = 4096;
    const double fs = 2e11;
    std::vector<std::complex<double>> e(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) - n / 2.0) / fs;
        e[i] = std::exp(-t * t / (2.0 * 20e-12 * 20e-12));
    }
    SampledSignal field(e, fs, Domain::Field);
    const auto out =
        apply_response(field, dispersion_response({460.0, 1590.0}, fft_frequencies(n, fs)));
    CHECK(signal_energy(out) == doctest::Approx(signal_energy(field)).epsilon(1e-12));
}

TEST_CASE("Gaussian pulse broadening matches the closed form") {
    // Textbook oracle: a chirp-free Gaussian field of 1/e half-width T0
    // leaves a dispersive span with T1 = T0 sqrt(1 + (b2L/T0^2)^2).
    const std::size_t n = 8192;
    const double fs = 2e11;
    const double t0 = 20e-12;
    const double d_ps_nm = 360.0;
    const double lambda_nm = 1550.0;

    std::vector<std::complex<double>> e(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) - n / 2.0) / fs;
        e[i] = std::exp(-t * t / (2.0 * t0 * t0));
    }
    SampledSignal field(e, fs, Domain::Field);
    const auto out = apply_response(
        field, dispersion_response({d_ps_nm, lambda_nm}, fft_frequencies(n, fs)));

    // Measure the output 1/e half-width through the power second moment:
    // for a Gaussian, T = sqrt(2 <t^2>).
    double p_sum = 0, t_sum = 0, t2_sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) - n / 2.0) / fs;
        const double p = std::norm(out.complex_samples()[i]);
        p_sum += p;
        t_sum += t * p;
        t2_sum += t * t * p;
    }
    const double mean_t = t_sum / p_sum;
    const double var_t = t2_sum / p_sum - mean_t * mean_t;
    const double t1_measured = std::sqrt(2.0 * var_t);

    const double lambda_m = lambda_nm * 1e-9;
    const double beta2l = -d_ps_nm * 1e-3 * lambda_m * lambda_m / (2.0 * M_PI * 299792458.0);
    const double t1_expected = t0 * std::sqrt(1.0 + std::pow(beta2l / (t0 * t0), 2.0));

    CHECK(t1_measured == doctest::Approx(t1_expected).epsilon(0.01));
    CHECK(t1_expected > 1.5 * t0);  // the scenario genuinely broadens
}

TEST_CASE("set_rop pins the mean power exactly") {
    std::vector<std::complex<double>> e(64);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = (i % 2) ? 0.044 : 0.02;
    SampledSignal field(e, 1e9, Domain::Field);

    const auto at10 = set_rop(field, -10.0);
    double mean = 0;
    for (const auto& v : at10.complex_samples()) mean += std::norm(v);
    mean /= at10.size();
    CHECK(mean == doctest::Approx(1e-4).epsilon(1e-12));

    // Setting the current power is the identity; re-setting is idempotent.
    const double cur_dbm = watts_to_dbm(mean);
    const auto same = set_rop(at10, cur_dbm);
    for (std::size_t i = 0; i < e.size(); ++i)
        CHECK(std::abs(same.complex_samples()[i] - at10.complex_samples()[i]) < 1e-15);

    const auto twice = set_rop(set_rop(field, -3.0), -10.0);
    for (std::size_t i = 0; i < e.size(); ++i)
        CHECK(std::abs(twice.complex_samples()[i] - at10.complex_samples()[i]) < 1e-15);

    std::vector<std::complex<double>> zero(8, 0.0);
    CHECK_THROWS_AS((void)set_rop(SampledSignal(zero, 1e9, Domain::Field), -10.0),
                    std::invalid_argument);
}

TEST_CASE("band presets") {
    CHECK(band_wavelength_nm(Band::O) == 1310.0);
    CHECK(band_wavelength_nm(Band::C) == 1550.0);
    CHECK(band_wavelength_nm(Band::L) == 1590.0);
    CHECK(band_from_name("O") == Band::O);
    CHECK_THROWS_AS((void)band_from_name("X"), std::invalid_argument);
}
