#include <doctest.h>

#include <cmath>
#include <random>

#include "ponsim/rxchain.hpp"

using namespace ponsim;

TEST_CASE("noiseless detection is the plain gain term") {
    const double fs = 2e11;  // 25 Gb/s at 8 samples per bit
    SampledSignal p(std::vector<double>(1024, 1e-5), fs, Domain::Power);
    const auto i = detect(p, ApdParams{}, 1, /*noise_enabled=*/false);
    for (double v : i.real_samples()) CHECK(v == doctest::Approx(2.0e-4).epsilon(1e-12));
}

TEST_CASE("detected noise variance matches the shot+thermal arithmetic") {
    // At 10 uW and 25 Gb/s: sigma_s^2 = q G^2 F R P df = 1.791e-9 A^2 and
    // sigma_T^2 = N0 df = 2.048e-10 A^2, so 1.996e-9 A^2 in total.
    const double fs = 2e11;
    const std::size_t n = 1'000'000;
    const ApdParams apd{};
    SampledSignal p(std::vector<double>(n, 1e-5), fs, Domain::Power);
    const auto i = detect(p, apd, 42, true);

    const double mean_expect = apd.gain * apd.responsivity_a_w * 1e-5;
    double mean = 0;
    for (double v : i.real_samples()) mean += v;
    mean /= n;
    CHECK(mean == doctest::Approx(mean_expect).epsilon(1e-3));

    double var = 0;
    for (double v : i.real_samples()) var += (v - mean) * (v - mean);
    var /= (n - 1);

    const double shot = apd.electron_charge_c * apd.gain * apd.gain * apd.excess_noise *
                        apd.responsivity_a_w * 1e-5 * fs;
    const double thermal = apd.thermal_psd_a2_hz * fs;
    CHECK(shot == doctest::Approx(1.791e-9).epsilon(1e-3));
    CHECK(thermal == doctest::Approx(2.048e-10).epsilon(1e-12));
    CHECK(shot + thermal == doctest::Approx(1.996e-9).epsilon(1e-3));
    CHECK(var == doctest::Approx(shot + thermal).epsilon(0.01));
}

TEST_CASE("dark input leaves thermal noise only") {
    const double fs = 2e11;
    const std::size_t n = 500'000;
    SampledSignal p(std::vector<double>(n, 0.0), fs, Domain::Power);
    const auto i = detect(p, ApdParams{}, 7, true);
    double var = 0;
    for (double v : i.real_samples()) var += v * v;
    var /= n;
    CHECK(var == doctest::Approx(2.048e-10).epsilon(0.01));
}

TEST_CASE("detection is deterministic per seed and rejects negative power") {
    SampledSignal p(std::vector<double>(256, 1e-6), 2e11, Domain::Power);
    const auto a = detect(p, ApdParams{}, 123, true);
    const auto b = detect(p, ApdParams{}, 123, true);
    CHECK(a.real_samples() == b.real_samples());
    const auto c = detect(p, ApdParams{}, 124, true);
    CHECK(a.real_samples() != c.real_samples());

    std::vector<double> neg(8, 1e-6);
    neg[2] = -1e-9;
    CHECK_THROWS_AS((void)detect(SampledSignal(neg, 2e11, Domain::Power), ApdParams{}, 1, true),
                    std::invalid_argument);
}

TEST_CASE("excess noise tracks the gain power law") {
    const auto apd = ApdParams::with_gain(25.0);
    CHECK(apd.excess_noise == doctest::Approx(std::pow(25.0, 0.75)).epsilon(1e-12));
    CHECK(10.0 * std::log10(apd.excess_noise) == doctest::Approx(10.48).epsilon(1e-3));
}

TEST_CASE("an extremely wide RX filter passes the current through") {
    std::mt19937 rng(5);
    std::normal_distribution<double> dist;
    std::vector<double> v(4096);
    for (auto& x : v) x = 1e-4 + 1e-5 * dist(rng);
    SampledSignal i(v, 2e11, Domain::Current);

    const auto out = rx_filter(i, FilterSpec::supergaussian_from_bandwidths(1e14, 2e14));
    double max_rel = 0;
    for (std::size_t k = 0; k < v.size(); ++k)
        max_rel = std::max(max_rel, std::abs(out.real_samples()[k] - v[k]) / std::abs(v[k]));
    CHECK(max_rel < 1e-6);
}

TEST_CASE("filtered white noise variance follows the mean squared response") {
    const std::size_t n = 1 << 18;
    const double fs = 2e11;
    std::mt19937 rng(17);
    std::normal_distribution<double> dist(0.0, 1e-5);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    double in_var = 0;
    for (double x : v) in_var += x * x;
    in_var /= n;

    const auto spec = FilterSpec::supergaussian_from_bandwidths(30e9, 60e9);
    const auto out = rx_filter(SampledSignal(v, fs, Domain::Current), spec);
    double out_var = 0;
    for (double x : out.real_samples()) out_var += x * x;
    out_var /= n;

    // Noise-equivalent-bandwidth oracle summed on the grid.
    const auto h = spec.response(fft_frequencies(n, fs));
    double gain = 0;
    for (const auto& c : h) gain += std::norm(c);
    gain /= static_cast<double>(n);

    CHECK(out_var == doctest::Approx(in_var * gain).epsilon(0.02));
}

TEST_CASE("filtered thermal noise variance shrinks with the filter") {
    const std::size_t n = 1 << 17;
    const double fs = 2e11;
    std::mt19937 rng(23);
    std::normal_distribution<double> dist(0.0, 1e-5);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    const SampledSignal noise(v, fs, Domain::Current);

    double prev = 1e9;
    for (double f3 : {40e9, 30e9, 20e9, 10e9}) {
        const auto out = rx_filter(noise, FilterSpec::supergaussian_from_bandwidths(f3, 2 * f3));
        double var = 0;
        for (double x : out.real_samples()) var += x * x;
        var /= n;
        CHECK(var < prev);
        prev = var;
    }
}

TEST_CASE("asymmetric TX/RX pole counts are representable") {
    // A 1-pole TX with a 2-pole RX cascades to three poles in total: the
    // product magnitude follows 1/sqrt((1+u^2)(1+u^4)).
    const auto tx = FilterSpec::butterworth(1, 7e9);
    const auto rx = FilterSpec::butterworth(2, 7e9);
    for (double f : {3.5e9, 7e9, 14e9}) {
        const auto freqs = std::vector<double>{f};
        const auto ca = tx.response(freqs)[0] * rx.response(freqs)[0];
        const double u = f / 7e9;
        CHECK(std::norm(ca) ==
              doctest::Approx(1.0 / ((1.0 + u * u) * (1.0 + std::pow(u, 4.0)))).epsilon(1e-9));
    }
}
