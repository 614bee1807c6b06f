#include "ponsim/equalize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ponsim {

namespace {

std::vector<double> pam4_pilot_levels() { return {-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0}; }

}  // namespace

PilotStream make_pilot(std::span<const std::uint8_t> bits, const ModFormat& fmt) {
    PilotStream p;
    p.kind = fmt.kind;
    switch (fmt.kind) {
        case FormatKind::Pam2: {
            p.targets.reserve(bits.size());
            for (auto b : bits) p.targets.push_back(b ? 1.0 : -1.0);
            break;
        }
        case FormatKind::Pam4: {
            if (bits.size() % 2 != 0)
                throw std::invalid_argument("make_pilot: PAM-4 needs an even bit count");
            const auto levels = pam4_pilot_levels();
            static constexpr int kGrayToLevel[4] = {0, 1, 3, 2};
            p.targets.reserve(bits.size() / 2);
            for (std::size_t i = 0; i < bits.size(); i += 2)
                p.targets.push_back(levels[kGrayToLevel[(bits[i] << 1) | bits[i + 1]]]);
            break;
        }
        case FormatKind::Edb: {
            // Add-and-delay over the antipodal precoded stream, halved to
            // unit peak. The precoder's b_0 = 0 seeds the delay line at -1.
            const auto pre = precode_db(bits);
            p.targets.reserve(bits.size());
            double prev = -1.0;
            for (auto b : pre) {
                const double cur = b ? 1.0 : -1.0;
                p.targets.push_back((cur + prev) / 2.0);
                prev = cur;
            }
            break;
        }
        case FormatKind::Odb: {
            p.targets.reserve(bits.size());
            for (auto b : bits) p.targets.push_back(b ? 1.0 : -1.0);
            break;
        }
    }
    return p;
}

namespace {

// Circular cross-correlation argmax via the real-transform pair.
struct CorrPeak {
    std::ptrdiff_t lag;
    double normalized;
};

CorrPeak circular_corr_peak(std::span<const double> x, std::span<const double> ref) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> xs(n / 2 + 1), rs(n / 2 + 1);
    fft::forward_real(x, xs);
    fft::forward_real(ref, rs);
    for (std::size_t k = 0; k < xs.size(); ++k) xs[k] *= std::conj(rs[k]);
    std::vector<double> corr(n);
    fft::inverse_real(xs, corr);

    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(corr[i]) > std::abs(corr[best])) best = i;

    // inverse_real already carries the 1/n, so corr[d] = sum_t x[t] ref[t-d].
    const double ex = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
    const double er = std::inner_product(ref.begin(), ref.end(), ref.begin(), 0.0);
    const double denom = std::sqrt(ex * er);
    CorrPeak peak;
    peak.lag = static_cast<std::ptrdiff_t>(best);
    peak.normalized = denom > 0 ? std::abs(corr[best]) / denom : 0.0;
    return peak;
}

}  // namespace

AlignedStream downsample_align(const SampledSignal& current, const PilotStream& pilot) {
    const auto& x = current.real_samples();
    const std::size_t n_sym = pilot.targets.size();
    const std::size_t sps_sym = static_cast<std::size_t>(kSamplesPerBit) *
                                ModFormat::make(pilot.kind).bits_per_symbol;
    if (x.size() != n_sym * sps_sym)
        throw std::invalid_argument("downsample_align: signal shorter than the pilot span");

    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();

    // Pilot at two samples per symbol, the rate the correlation runs at.
    std::vector<double> ref(2 * n_sym);
    for (std::size_t s = 0; s < n_sym; ++s) ref[2 * s] = ref[2 * s + 1] = pilot.targets[s];

    // Score every decimation phase at the decimated rate; correlating after
    // the drop keeps the search on the samples the equalizer will actually
    // see, which steers the phase onto the open part of the eye.
    const std::size_t decim = sps_sym / 2;
    std::vector<double> stream(2 * n_sym), best_stream;
    std::size_t best_phase = 0;
    std::ptrdiff_t best_lag = 0;
    double best_norm = -1.0;
    for (std::size_t phase = 0; phase < decim; ++phase) {
        for (std::size_t m = 0; m < stream.size(); ++m)
            stream[m] = x[(phase + m * decim) % x.size()] - mean;
        const auto peak = circular_corr_peak(stream, ref);
        if (peak.normalized > best_norm) {
            best_norm = peak.normalized;
            best_phase = phase;
            best_lag = peak.lag;
            best_stream = stream;
        }
    }
    if (best_norm < 0.1)
        throw AlignmentError("downsample_align: no usable correlation peak against the pilot");

    AlignedStream out;
    out.delay_samples =
        static_cast<std::ptrdiff_t>(best_phase) + best_lag * static_cast<std::ptrdiff_t>(decim);
    out.correlation = best_norm;
    out.samples.resize(2 * n_sym);
    const std::size_t n2 = stream.size();
    const std::size_t lag = static_cast<std::size_t>(best_lag);
    for (std::size_t m = 0; m < n2; ++m) {
        out.samples[m] = best_stream[(lag + m) % n2] + mean;
    }
    return out;
}

FfeResult ffe_lms(std::span<const double> input_2sps, const PilotStream& pilot,
                  const EqualizerConfig& cfg) {
    if (cfg.taps < 1) throw std::invalid_argument("ffe_lms: need at least one tap");
    if (cfg.samples_per_symbol != 2)
        throw std::invalid_argument("ffe_lms: equalizer operates on two samples per symbol");
    if (!(cfg.step_mu > 0)) throw std::invalid_argument("ffe_lms: step size must be positive");

    const std::size_t n_sym = pilot.targets.size();
    const std::size_t n_in = input_2sps.size();
    if (n_in < 2 * n_sym || cfg.training_symbols <= 0 ||
        static_cast<std::size_t>(cfg.training_symbols) >= n_sym)
        throw std::invalid_argument("ffe_lms: input shorter than training plus evaluation span");

    // Zero-mean, unit-RMS input so the step size is format-independent.
    std::vector<double> u(n_in);
    double mean = std::accumulate(input_2sps.begin(), input_2sps.end(), 0.0) / n_in;
    double power = 0.0;
    for (std::size_t i = 0; i < n_in; ++i) {
        u[i] = input_2sps[i] - mean;
        power += u[i] * u[i];
    }
    const double rms = std::sqrt(power / n_in);
    if (!(rms > 0)) throw std::invalid_argument("ffe_lms: input has no signal");
    for (auto& v : u) v /= rms;

    const int taps = cfg.taps;
    const int cursor = cfg.output_delay >= 0 ? cfg.output_delay : taps / 2;
    if (cursor >= taps) throw std::invalid_argument("ffe_lms: output delay beyond the tap span");

    std::vector<double> w(taps, 0.0);
    w[cursor] = 1.0;

    auto tap_input = [&](std::size_t sym, int i) {
        const auto idx = static_cast<std::ptrdiff_t>(2 * sym) + (i - cursor);
        return u[static_cast<std::size_t>((idx % static_cast<std::ptrdiff_t>(n_in) +
                                           static_cast<std::ptrdiff_t>(n_in))) %
                 n_in];
    };
    auto output_at = [&](std::size_t sym) {
        double y = 0.0;
        for (int i = 0; i < taps; ++i) y += w[i] * tap_input(sym, i);
        return y;
    };

    FfeResult res;
    res.training_mse.reserve(cfg.training_symbols);

    // Training pass with divergence watchdog. The frozen taps are the
    // time-average of the last quarter of the trajectory, which strips the
    // stochastic-gradient weight noise off the converged solution.
    constexpr int kWindow = 500;
    double window_sum = 0.0;
    double baseline = -1.0;
    int over_count = 0;
    std::vector<double> w_avg(taps, 0.0);
    const int avg_from = cfg.training_symbols - cfg.training_symbols / 4;
    for (int n = 0; n < cfg.training_symbols; ++n) {
        const double y = output_at(n);
        const double e = pilot.targets[n] - y;
        if (!std::isfinite(e)) throw DivergenceError("ffe_lms: LMS error is not finite");
        const double e2 = e * e;
        res.training_mse.push_back(e2);
        window_sum += e2;
        if (n >= kWindow) window_sum -= res.training_mse[n - kWindow];
        if (n + 1 == kWindow) baseline = window_sum / kWindow;
        if (baseline > 0 && n + 1 > kWindow) {
            const double wmse = window_sum / kWindow;
            over_count = (wmse > 100.0 * baseline) ? over_count + 1 : 0;
            if (over_count >= kWindow)
                throw DivergenceError("ffe_lms: training MSE diverged");
        }
        const double g = cfg.step_mu * e;
        for (int i = 0; i < taps; ++i) w[i] += g * tap_input(n, i);
        if (n >= avg_from)
            for (int i = 0; i < taps; ++i) w_avg[i] += w[i];
    }
    const int avg_count = cfg.training_symbols - avg_from;
    if (avg_count > 0)
        for (int i = 0; i < taps; ++i) w[i] = w_avg[i] / avg_count;

    // Frozen-tap output over the whole stream.
    res.symbols.resize(n_sym);
    for (std::size_t n = 0; n < n_sym; ++n) res.symbols[n] = output_at(n);
    res.taps = std::move(w);
    return res;
}

std::vector<std::uint8_t> decide_decode(std::span<const double> symbols, const ModFormat& fmt) {
    std::vector<std::uint8_t> bits;
    switch (fmt.kind) {
        case FormatKind::Pam2:
        case FormatKind::Odb: {
            bits.reserve(symbols.size());
            for (double y : symbols) bits.push_back(y >= 0.0 ? 1 : 0);
            break;
        }
        case FormatKind::Pam4: {
            // Nearest level on the unit-peak grid, then inverse Gray.
            static constexpr std::uint8_t kLevelToGray[4][2] = {
                {0, 0}, {0, 1}, {1, 1}, {1, 0}};
            bits.reserve(symbols.size() * 2);
            for (double y : symbols) {
                int lvl;
                if (y < -2.0 / 3.0) lvl = 0;
                else if (y < 0.0) lvl = 1;
                else if (y < 2.0 / 3.0) lvl = 2;
                else lvl = 3;
                bits.push_back(kLevelToGray[lvl][0]);
                bits.push_back(kLevelToGray[lvl][1]);
            }
            break;
        }
        case FormatKind::Edb: {
            // Outer duobinary levels mean "no precoded transition" -> 0.
            bits.reserve(symbols.size());
            for (double y : symbols) bits.push_back(std::abs(y) < 0.5 ? 1 : 0);
            break;
        }
    }
    return bits;
}

double count_ber(std::span<const std::uint8_t> rx_bits, std::span<const std::uint8_t> tx_bits,
                 std::size_t count) {
    if (rx_bits.size() < count || tx_bits.size() < count)
        throw std::invalid_argument("count_ber: fewer bits than the counting window");
    std::size_t errors = 0;
    for (std::size_t i = 0; i < count; ++i) errors += (rx_bits[i] != tx_bits[i]) ? 1 : 0;
    return static_cast<double>(errors) / static_cast<double>(count);
}

}  // namespace ponsim
