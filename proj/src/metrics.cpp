#include "ponsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ponsim {

LinkScenario LinkScenario::make(double bit_rate_hz, FormatKind format, FilterSpec tx_filter,
                                std::optional<FilterSpec> rx_filter) {
    LinkScenario s{bit_rate_hz, format, tx_filter, rx_filter.value_or(tx_filter)};
    s.validate();
    return s;
}

void LinkScenario::validate() const {
    if (!(bit_rate_hz > 0)) throw std::invalid_argument("scenario: bit rate must be positive");
    if (fiber.dispersion_ps_nm < 0)
        throw std::invalid_argument("scenario: negative accumulated dispersion");
    if (!(fiber.wavelength_nm > 0))
        throw std::invalid_argument("scenario: wavelength must be positive");
    if (!(apd.gain > 0) || !(apd.responsivity_a_w > 0) || !(apd.excess_noise > 0) ||
        !(apd.thermal_psd_a2_hz > 0) || !(apd.electron_charge_c > 0))
        throw std::invalid_argument("scenario: APD constants must be strictly positive");
    if (!(tx_filter.f20db() > tx_filter.f3db()) || !(rx_filter.f20db() > rx_filter.f3db()))
        throw std::invalid_argument("scenario: filter must have f20dB > f3dB");
    if (eq.taps < 1 || eq.training_symbols < 1 || !(eq.step_mu > 0))
        throw std::invalid_argument("scenario: bad equalizer configuration");
    if (prbs_seed == 0) throw std::invalid_argument("scenario: PRBS seed must be nonzero");
    if (!(mzm_v_pi > 0) || !(cw_power_w > 0))
        throw std::invalid_argument("scenario: MZM constants must be positive");
}

std::string LinkScenario::describe() const {
    std::ostringstream os;
    const auto fmt = ModFormat::make(format);
    os << "format=" << fmt.name() << " rb_gbps=" << bit_rate_hz / 1e9;
    const auto tx = to_normalized(tx_filter.f3db(), tx_filter.f20db(), bit_rate_hz);
    const auto rx = to_normalized(rx_filter.f3db(), rx_filter.f20db(), bit_rate_hz);
    os << " tx_filter={" << tx_filter.describe() << ", B3dB=" << tx.b3db_pct
       << "%, B20dB=" << tx.b20db_pct << "%}";
    os << " rx_filter={" << rx_filter.describe() << ", B3dB=" << rx.b3db_pct
       << "%, B20dB=" << rx.b20db_pct << "%}";
    os << " dispersion_ps_nm=" << fiber.dispersion_ps_nm
       << " wavelength_nm=" << fiber.wavelength_nm;
    os << " apd={R=" << apd.responsivity_a_w << ", G=" << apd.gain << ", F=" << apd.excess_noise
       << ", N0=" << apd.thermal_psd_a2_hz << "}";
    os << " eq={taps=" << eq.taps << ", mu=" << eq.step_mu
       << ", training=" << eq.training_symbols << "}";
    os << " prbs_seed=" << prbs_seed << " noise_seed=" << noise_seed
       << " noise=" << (noise_enabled ? "on" : "off");
    return os.str();
}

struct LinkEngine::Impl {
    LinkScenario scenario;
    ModFormat fmt;
    std::vector<std::uint8_t> bits;  // two PRBS periods
    PilotStream pilot;
    std::vector<double> power_ref;   // |E|^2 after fiber, rescaled to mean 1 W
    double sample_rate = 0.0;
    std::size_t count_symbols = 0;
    // Decimation timing is a property of the deterministic channel; lock it
    // on the first successful alignment so every ROP point shares it.
    std::optional<std::ptrdiff_t> locked_delay;

    explicit Impl(LinkScenario s) : scenario(std::move(s)), fmt(ModFormat::make(scenario.format)) {
        scenario.validate();
        build();
    }

    void build() {
        const auto prbs = prbs17(scenario.prbs_seed);
        bits.reserve(prbs.size() * 2);
        bits.insert(bits.end(), prbs.begin(), prbs.end());
        bits.insert(bits.end(), prbs.begin(), prbs.end());

        const std::size_t n_sym = bits.size() / fmt.bits_per_symbol;
        count_symbols = kCountedBits / static_cast<std::size_t>(fmt.bits_per_symbol);
        if (static_cast<std::size_t>(scenario.eq.training_symbols) + count_symbols > n_sym)
            throw std::invalid_argument(
                "scenario: training plus counting window exceeds the sequence budget");

        const auto mzm = MzmParams::for_bias(fmt.bias_mode, scenario.mzm_v_pi,
                                             scenario.cw_power_w);
        auto drive = map_to_drive(bits, fmt, scenario.bit_rate_hz);
        sample_rate = drive.sample_rate();
        auto x_d = predistort(drive, mzm);
        const auto freqs = fft_frequencies(x_d.size(), sample_rate);
        auto x_f = apply_response(x_d, scenario.tx_filter.response(freqs));
        auto field = mzm_modulate(x_f, mzm);
        if (scenario.fiber.dispersion_ps_nm != 0.0)
            field = apply_response(field, dispersion_response(scenario.fiber, freqs));

        const auto& e = field.complex_samples();
        power_ref.resize(e.size());
        double mean = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i) {
            power_ref[i] = std::norm(e[i]);
            mean += power_ref[i];
        }
        mean /= static_cast<double>(e.size());
        if (!(mean > 0)) throw std::invalid_argument("scenario: modulated field carries no power");
        for (auto& v : power_ref) v /= mean;

        pilot = make_pilot(bits, fmt);
    }

    BerResult ber(double rop_dbm) {
        BerResult out;
        const double rop_w = dbm_to_watts(rop_dbm);
        std::vector<double> p(power_ref.size());
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = power_ref[i] * rop_w;

        try {
            auto current = detect(SampledSignal(std::move(p), sample_rate, Domain::Power),
                                  scenario.apd, scenario.noise_seed, scenario.noise_enabled);
            auto filtered = rx_filter(current, scenario.rx_filter);

            AlignedStream aligned;
            if (locked_delay) {
                aligned = extract_at(filtered, *locked_delay);
            } else {
                aligned = downsample_align(filtered, pilot);
                locked_delay = aligned.delay_samples;
            }

            const auto eq = ffe_lms(aligned.samples, pilot, scenario.eq);
            const std::size_t train = scenario.eq.training_symbols;
            const std::span<const double> payload(eq.symbols.data() + train, count_symbols);
            const auto rx_bits = decide_decode(payload, fmt);
            const std::span<const std::uint8_t> tx_bits(
                bits.data() + train * fmt.bits_per_symbol, kCountedBits);
            out.ber = count_ber(rx_bits, tx_bits, kCountedBits);
        } catch (const AlignmentError& e) {
            out = BerResult{1.0, false, e.what()};
        } catch (const DivergenceError& e) {
            out = BerResult{1.0, false, e.what()};
        }
        return out;
    }

    AlignedStream extract_at(const SampledSignal& current, std::ptrdiff_t delay) const {
        const auto& x = current.real_samples();
        const std::size_t sps_sym =
            static_cast<std::size_t>(kSamplesPerBit) * fmt.bits_per_symbol;
        const std::size_t decim = sps_sym / 2;
        AlignedStream out;
        out.delay_samples = delay;
        out.correlation = 1.0;  // carried over from the locking pass
        out.samples.resize(2 * pilot.targets.size());
        const std::size_t n = x.size();
        for (std::size_t m = 0; m < out.samples.size(); ++m)
            out.samples[m] = x[(static_cast<std::size_t>(delay) + m * decim) % n];
        return out;
    }
};

LinkEngine::LinkEngine(LinkScenario scenario) : impl_(std::make_unique<Impl>(std::move(scenario))) {}
LinkEngine::~LinkEngine() = default;
LinkEngine::LinkEngine(LinkEngine&&) noexcept = default;
LinkEngine& LinkEngine::operator=(LinkEngine&&) noexcept = default;

const LinkScenario& LinkEngine::scenario() const { return impl_->scenario; }

BerResult LinkEngine::ber_at(double rop_dbm) { return impl_->ber(rop_dbm); }

namespace {

double clamped_log_ber(double ber) {
    // Floor at half an error in the counting window so interpolation stays finite.
    const double floor_ber = 0.5 / static_cast<double>(kCountedBits);
    return std::log10(std::max(ber, floor_ber));
}

}  // namespace

SensitivityResult LinkEngine::sensitivity() {
    SensitivityResult res;
    std::vector<std::pair<double, double>> curve;

    auto eval = [&](double rop) {
        const auto r = impl_->ber(rop);
        // A point the receiver cannot lock on behaves like BER ~ 0.5.
        const double ber = r.operable ? r.ber : 0.5;
        curve.emplace_back(rop, ber);
        return ber;
    };

    // Walk in 1 dB steps from the middle of the scan range to bracket the
    // target: `lo` fails it, `hi` meets it.
    double rop = -20.0;
    double ber = eval(rop);
    double lo_rop = 0, lo_ber = 0, hi_rop = 0, hi_ber = 0;
    bool bracketed = false;
    if (ber >= kTargetBer) {
        while (rop < kRopScanMaxDbm - 1e-9) {
            const double next = std::min(rop + 1.0, kRopScanMaxDbm);
            const double b = eval(next);
            if (b < kTargetBer) {
                lo_rop = rop; lo_ber = ber;
                hi_rop = next; hi_ber = b;
                bracketed = true;
                break;
            }
            rop = next;
            ber = b;
        }
        if (!bracketed) {
            res.note = "target BER not reached anywhere in the ROP scan range";
        }
    } else {
        while (rop > kRopScanMinDbm + 1e-9) {
            const double next = std::max(rop - 1.0, kRopScanMinDbm);
            const double b = eval(next);
            if (b >= kTargetBer) {
                lo_rop = next; lo_ber = b;
                hi_rop = rop; hi_ber = ber;
                bracketed = true;
                break;
            }
            rop = next;
            ber = b;
        }
        if (!bracketed) {
            res.note = "target BER already met at the bottom of the ROP scan range";
        }
    }

    if (bracketed) {
        // Bisect to 0.1 dB; keep going a little if the endpoints have not
        // tightened into the interpolation band yet.
        int evals = 0;
        auto endpoints_ok = [&] { return lo_ber <= 2e-3 && hi_ber >= 5e-4; };
        while (evals < 30 &&
               (hi_rop - lo_rop > 0.1 || (!endpoints_ok() && hi_rop - lo_rop > 0.0125))) {
            const double mid = 0.5 * (lo_rop + hi_rop);
            const double b = eval(mid);
            ++evals;
            if (b >= kTargetBer) {
                lo_rop = mid;
                lo_ber = b;
            } else {
                hi_rop = mid;
                hi_ber = b;
            }
        }
        const double llo = clamped_log_ber(lo_ber);
        const double lhi = clamped_log_ber(hi_ber);
        const double lt = std::log10(kTargetBer);
        const double t = (llo == lhi) ? 0.5 : (llo - lt) / (llo - lhi);
        res.sensitivity_dbm = lo_rop + t * (hi_rop - lo_rop);
        res.converged = true;
    }

    std::sort(curve.begin(), curve.end());
    res.ber_curve = std::move(curve);
    return res;
}

BerResult simulate_ber(const LinkScenario& scenario, double rop_dbm) {
    LinkEngine engine(scenario);
    return engine.ber_at(rop_dbm);
}

SensitivityResult sensitivity(const LinkScenario& scenario) {
    LinkEngine engine(scenario);
    return engine.sensitivity();
}

double power_penalty(double sensitivity_dbm, double reference_dbm) {
    if (!std::isfinite(sensitivity_dbm) || !std::isfinite(reference_dbm))
        throw std::invalid_argument("power_penalty: inputs must be finite");
    return sensitivity_dbm - reference_dbm;
}

}  // namespace ponsim
