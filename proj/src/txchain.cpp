#include "ponsim/txchain.hpp"

#include <cmath>
#include <stdexcept>

namespace ponsim {

ModFormat ModFormat::make(FormatKind kind) {
    switch (kind) {
        case FormatKind::Pam2:
            return {kind, {0.0, 1.0}, BiasMode::Quadrature, 1};
        case FormatKind::Pam4:
            return {kind, {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}, BiasMode::Quadrature, 2};
        case FormatKind::Edb:
            return {kind, {0.0, 1.0}, BiasMode::Quadrature, 1};
        case FormatKind::Odb:
            return {kind, {0.0, 1.0}, BiasMode::Null, 1};
    }
    throw std::invalid_argument("ModFormat: unknown kind");
}

const char* ModFormat::name() const {
    switch (kind) {
        case FormatKind::Pam2: return "pam2";
        case FormatKind::Pam4: return "pam4";
        case FormatKind::Edb: return "edb";
        case FormatKind::Odb: return "odb";
    }
    return "?";
}

FormatKind format_from_name(const std::string& name) {
    if (name == "pam2") return FormatKind::Pam2;
    if (name == "pam4") return FormatKind::Pam4;
    if (name == "edb") return FormatKind::Edb;
    if (name == "odb") return FormatKind::Odb;
    throw std::invalid_argument("unknown modulation format: " + name);
}

MzmParams MzmParams::for_bias(BiasMode mode, double v_pi, double cw_power_w) {
    MzmParams p;
    p.v_pi = v_pi;
    p.cw_power_w = cw_power_w;
    const double drive = (mode == BiasMode::Quadrature) ? v_pi / 2.0 : v_pi;
    p.amplitude_a = drive;
    p.bias_vb = drive;
    return p;
}

std::vector<std::uint8_t> prbs17(std::uint32_t seed) {
    constexpr std::uint32_t kMask = (1u << 17) - 1;
    seed &= kMask;
    if (seed == 0) throw std::invalid_argument("prbs17: seed must be a nonzero register state");

    // Fibonacci LFSR, feedback taps at delays 17 and 14.
    std::vector<std::uint8_t> bits(kMask);
    std::uint32_t state = seed;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const std::uint32_t out = (state >> 16) & 1u;
        const std::uint32_t fb = out ^ ((state >> 13) & 1u);
        bits[i] = static_cast<std::uint8_t>(out);
        state = ((state << 1) | fb) & kMask;
    }
    return bits;
}

std::vector<std::uint8_t> precode_db(std::span<const std::uint8_t> data) {
    if (data.empty()) throw std::invalid_argument("precode_db: empty bit sequence");
    std::vector<std::uint8_t> out(data.size());
    std::uint8_t prev = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        prev = static_cast<std::uint8_t>(data[i] ^ prev);
        out[i] = prev;
    }
    return out;
}

namespace {

std::vector<std::size_t> symbol_indices(std::span<const std::uint8_t> bits, const ModFormat& fmt) {
    std::vector<std::size_t> idx;
    switch (fmt.kind) {
        case FormatKind::Pam2:
            idx.assign(bits.begin(), bits.end());
            break;
        case FormatKind::Pam4: {
            if (bits.size() % 2 != 0)
                throw std::invalid_argument("map_to_drive: PAM-4 needs an even bit count");
            idx.reserve(bits.size() / 2);
            for (std::size_t i = 0; i < bits.size(); i += 2) {
                const int pair = (bits[i] << 1) | bits[i + 1];
                // Gray pairs in amplitude order: 00, 01, 11, 10.
                static constexpr int kGrayToLevel[4] = {0, 1, 3, 2};
                idx.push_back(static_cast<std::size_t>(kGrayToLevel[pair]));
            }
            break;
        }
        case FormatKind::Edb:
        case FormatKind::Odb: {
            auto pre = precode_db(bits);
            idx.assign(pre.begin(), pre.end());
            break;
        }
    }
    return idx;
}

}  // namespace

SampledSignal map_to_drive(std::span<const std::uint8_t> bits, const ModFormat& fmt,
                           double bit_rate_hz) {
    if (!(bit_rate_hz > 0)) throw std::invalid_argument("map_to_drive: bit rate must be positive");
    const auto idx = symbol_indices(bits, fmt);
    const std::size_t sps = static_cast<std::size_t>(kSamplesPerBit) * fmt.bits_per_symbol;
    std::vector<double> x(idx.size() * sps);
    for (std::size_t s = 0; s < idx.size(); ++s) {
        const double level = fmt.levels.at(idx[s]);
        for (std::size_t j = 0; j < sps; ++j) x[s * sps + j] = level;
    }
    return SampledSignal(std::move(x), kSamplesPerBit * bit_rate_hz, Domain::Electrical);
}

SampledSignal predistort(const SampledSignal& x, const MzmParams& p) {
    constexpr double tol = 1e-12;
    const auto& in = x.real_samples();
    std::vector<double> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        double v = in[i];
        if (v < -tol || v > 1.0 + tol)
            throw std::invalid_argument("predistort: drive sample outside [0,1]");
        v = std::min(1.0, std::max(0.0, v));
        out[i] = p.amplitude_a / M_PI * std::acos(1.0 - 2.0 * v) - p.bias_vb;
    }
    return SampledSignal(std::move(out), x.sample_rate(), Domain::Electrical);
}

SampledSignal mzm_modulate(const SampledSignal& x_f, const MzmParams& p) {
    const auto& in = x_f.real_samples();
    const double amp = std::sqrt(p.cw_power_w);
    std::vector<std::complex<double>> field(in.size());
    for (std::size_t i = 0; i < in.size(); ++i)
        field[i] = amp * std::cos(M_PI * in[i] / p.v_pi);
    return SampledSignal(std::move(field), x_f.sample_rate(), Domain::Field);
}

}  // namespace ponsim
