#include "ponsim/filtering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace ponsim {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kTwoLn10 = 4.605170185988091;

double checked_positive(double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
    return v;
}

}  // namespace

FilterSpec FilterSpec::butterworth(int poles, double f3db_hz) {
    if (poles < 1) throw std::invalid_argument("Butterworth filter needs at least one pole");
    checked_positive(f3db_hz, "f3dB");
    return FilterSpec(Butterworth{poles, f3db_hz});
}

FilterSpec FilterSpec::supergaussian(double order_n, double f0_hz) {
    checked_positive(order_n, "super-Gaussian order");
    checked_positive(f0_hz, "f0");
    return FilterSpec(SuperGaussian{order_n, f0_hz});
}

FilterSpec FilterSpec::supergaussian_from_bandwidths(double f3db_hz, double f20db_hz) {
    const auto p = supergaussian_params(f3db_hz, f20db_hz);
    return FilterSpec(SuperGaussian{p.order_n, p.f0_hz});
}

double FilterSpec::f3db() const {
    if (is_butterworth()) return butterworth_shape().f3db_hz;
    const auto& g = supergaussian_shape();
    return g.f0_hz * std::pow(kLn2, 1.0 / (2.0 * g.order_n));
}

double FilterSpec::f20db() const {
    if (is_butterworth()) {
        const auto& b = butterworth_shape();
        return b.f3db_hz * std::pow(99.0, 1.0 / (2.0 * b.poles));
    }
    const auto& g = supergaussian_shape();
    return g.f0_hz * std::pow(kTwoLn10, 1.0 / (2.0 * g.order_n));
}

std::vector<std::complex<double>> FilterSpec::response(std::span<const double> freqs_hz) const {
    if (is_butterworth()) {
        const auto& b = butterworth_shape();
        return butterworth_response(b.poles, b.f3db_hz, freqs_hz);
    }
    const auto& g = supergaussian_shape();
    return supergaussian_response(g.order_n, g.f0_hz, freqs_hz);
}

std::string FilterSpec::describe() const {
    std::ostringstream os;
    if (is_butterworth()) {
        const auto& b = butterworth_shape();
        os << b.poles << "-pole Butterworth, f3dB=" << b.f3db_hz / 1e9 << " GHz";
    } else {
        const auto& g = supergaussian_shape();
        os << "super-Gaussian n=" << g.order_n << ", f0=" << g.f0_hz / 1e9 << " GHz";
    }
    os << " (f20dB=" << f20db() / 1e9 << " GHz)";
    return os.str();
}

SuperGaussianParams supergaussian_params(double f3db_hz, double f20db_hz) {
    checked_positive(f3db_hz, "f3dB");
    if (!(f20db_hz > f3db_hz))
        throw std::invalid_argument("supergaussian_params: f20dB must exceed f3dB");

    const double n = std::log(kTwoLn10 / kLn2) / (2.0 * std::log(f20db_hz / f3db_hz));
    const double f0 = f3db_hz / std::pow(kLn2, 1.0 / (2.0 * n));

    // The algebra is exact; round-trip failure means bad inputs (inf/nan).
    const double f3_rt = f0 * std::pow(kLn2, 1.0 / (2.0 * n));
    const double f20_rt = f0 * std::pow(kTwoLn10, 1.0 / (2.0 * n));
    if (std::abs(f3_rt - f3db_hz) > 1e-9 * f3db_hz || std::abs(f20_rt - f20db_hz) > 1e-9 * f20db_hz)
        throw std::invalid_argument("supergaussian_params: degenerate bandwidth pair");
    return {n, f0};
}

std::vector<std::complex<double>> butterworth_response(int poles, double f3db_hz,
                                                       std::span<const double> freqs_hz) {
    if (poles < 1) throw std::invalid_argument("butterworth_response: poles must be >= 1");
    checked_positive(f3db_hz, "f3dB");

    // Zero-phase magnitude profile, the same convention the super-Gaussian
    // uses, so the two families differ only in their roll-off shape. (A
    // minimum-phase realization adds band-edge group-delay distortion that
    // the symbol-rate-referenced equalizer cannot fully undo at high pole
    // counts, and the filter families stop being comparable.)
    std::vector<std::complex<double>> h(freqs_hz.size());
    for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
        const double u = freqs_hz[i] / f3db_hz;
        h[i] = 1.0 / std::sqrt(1.0 + std::pow(u * u, poles));
    }
    return h;
}

std::vector<std::complex<double>> supergaussian_response(double order_n, double f0_hz,
                                                         std::span<const double> freqs_hz) {
    checked_positive(order_n, "super-Gaussian order");
    checked_positive(f0_hz, "f0");
    std::vector<std::complex<double>> h(freqs_hz.size());
    for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
        const double u = std::abs(freqs_hz[i]) / f0_hz;
        h[i] = std::exp(-0.5 * std::pow(u, 2.0 * order_n));
    }
    return h;
}

NormalizedBandwidths to_normalized(double f3db_hz, double f20db_hz, double bit_rate_hz) {
    checked_positive(bit_rate_hz, "bit rate");
    return {100.0 * f3db_hz / bit_rate_hz, 100.0 * f20db_hz / bit_rate_hz, bit_rate_hz};
}

namespace {

// Downhill simplex in 2-D; good enough for the smooth dB-domain cost.
std::pair<std::array<double, 2>, double> nelder_mead2(
    const std::function<double(const std::array<double, 2>&)>& f, std::array<double, 2> start,
    double step, int max_iter) {
    std::array<std::array<double, 2>, 3> simplex{
        start, {start[0] + step, start[1]}, {start[0], start[1] + step}};
    std::array<double, 3> val{f(simplex[0]), f(simplex[1]), f(simplex[2])};

    for (int it = 0; it < max_iter; ++it) {
        // Order best..worst.
        std::array<int, 3> ord{0, 1, 2};
        std::sort(ord.begin(), ord.end(), [&](int a, int b) { return val[a] < val[b]; });
        const auto& best = simplex[ord[0]];
        const auto& worst = simplex[ord[2]];
        if (std::abs(val[ord[2]] - val[ord[0]]) < 1e-12 * (1.0 + std::abs(val[ord[0]]))) break;

        std::array<double, 2> centroid{(simplex[ord[0]][0] + simplex[ord[1]][0]) / 2.0,
                                       (simplex[ord[0]][1] + simplex[ord[1]][1]) / 2.0};
        auto propose = [&](double coef) {
            return std::array<double, 2>{centroid[0] + coef * (centroid[0] - worst[0]),
                                         centroid[1] + coef * (centroid[1] - worst[1])};
        };

        auto refl = propose(1.0);
        double frefl = f(refl);
        if (frefl < val[ord[0]]) {
            auto exp_pt = propose(2.0);
            double fexp = f(exp_pt);
            if (fexp < frefl) {
                simplex[ord[2]] = exp_pt;
                val[ord[2]] = fexp;
            } else {
                simplex[ord[2]] = refl;
                val[ord[2]] = frefl;
            }
        } else if (frefl < val[ord[1]]) {
            simplex[ord[2]] = refl;
            val[ord[2]] = frefl;
        } else {
            auto contr = propose(-0.5);
            double fcontr = f(contr);
            if (fcontr < val[ord[2]]) {
                simplex[ord[2]] = contr;
                val[ord[2]] = fcontr;
            } else {
                for (int i : {1, 2}) {
                    for (int d = 0; d < 2; ++d)
                        simplex[ord[i]][d] = best[d] + 0.5 * (simplex[ord[i]][d] - best[d]);
                    val[ord[i]] = f(simplex[ord[i]]);
                }
            }
        }
    }
    std::size_t ibest = std::min_element(val.begin(), val.end()) - val.begin();
    return {simplex[ibest], val[ibest]};
}

double interp_crossing(std::span<const double> x, std::span<const double> y, double target) {
    for (std::size_t i = 1; i < y.size(); ++i) {
        if ((y[i - 1] - target) * (y[i] - target) <= 0.0 && y[i] != y[i - 1]) {
            const double t = (target - y[i - 1]) / (y[i] - y[i - 1]);
            return x[i - 1] + t * (x[i] - x[i - 1]);
        }
    }
    return -1.0;
}

}  // namespace

GfFit fit_equivalent_gf(std::span<const double> freqs_hz, std::span<const double> cascade_mag_db) {
    if (freqs_hz.size() != cascade_mag_db.size() || freqs_hz.size() < 8)
        throw std::invalid_argument("fit_equivalent_gf: bad tabulated response");

    // Reference the cascade to its low-frequency level.
    const double ref = cascade_mag_db[0];
    std::vector<double> rel(cascade_mag_db.size());
    for (std::size_t i = 0; i < rel.size(); ++i) rel[i] = cascade_mag_db[i] - ref;

    const double min_db = *std::min_element(rel.begin(), rel.end());
    if (min_db > -20.0)
        throw std::invalid_argument(
            "fit_equivalent_gf: cascade never reaches -20 dB on the provided grid");

    // Fit window: everything above -25 dB of cascade attenuation.
    std::vector<double> fs, db;
    for (std::size_t i = 0; i < rel.size(); ++i) {
        if (rel[i] >= -25.0 && freqs_hz[i] >= 0.0) {
            fs.push_back(freqs_hz[i]);
            db.push_back(rel[i]);
        }
    }
    if (fs.size() < 8) throw std::invalid_argument("fit_equivalent_gf: too few in-window points");

    // A single GF attenuates half as much as the identical pair's cascade.
    // Cost over log-parameters (ln n, ln f0) keeps both positive.
    constexpr double kDbPerNat = 4.342944819032518;  // 10*log10(e)
    auto cost = [&](const std::array<double, 2>& q) {
        const double n = std::exp(q[0]);
        const double f0 = std::exp(q[1]);
        double sse = 0.0;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const double gf_db = -kDbPerNat * std::pow(fs[i] / f0, 2.0 * n);
            const double e = 2.0 * gf_db - db[i];
            sse += e * e;
        }
        return sse;
    };

    // Initial guess from the cascade's own crossings. The pair's -6.02 dB
    // point is the single filter's f3dB.
    double f3_init = interp_crossing(fs, db, -6.0205999132796239);
    if (f3_init <= 0) f3_init = fs.back() / 3.0;
    double f20_init = interp_crossing(freqs_hz, rel, -40.0);
    if (f20_init <= f3_init) f20_init = 2.0 * f3_init;
    const auto g0 = supergaussian_params(f3_init, f20_init);

    auto [q, sse] = nelder_mead2(cost, {std::log(g0.order_n), std::log(g0.f0_hz)}, 0.2, 400);
    const double n = std::exp(q[0]);
    const double f0 = std::exp(q[1]);

    GfFit fit;
    fit.f3db_hz = f0 * std::pow(kLn2, 1.0 / (2.0 * n));
    fit.f20db_hz = f0 * std::pow(kTwoLn10, 1.0 / (2.0 * n));
    fit.rms_error_db = std::sqrt(sse / static_cast<double>(fs.size()));
    return fit;
}

DeviceResponse parse_device_response(std::istream& in, const std::string& name) {
    DeviceResponse r;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double f, m;
        if (!(ls >> f)) continue;  // blank or comment-only line
        if (!(ls >> m)) {
            std::ostringstream os;
            os << name << ":" << lineno << ": expected 'frequency_Hz magnitude_dB'";
            throw std::runtime_error(os.str());
        }
        r.freqs_hz.push_back(f);
        r.mag_db.push_back(m);
    }
    if (r.freqs_hz.size() < 2)
        throw std::runtime_error(name + ": fewer than two response points");
    if (!std::is_sorted(r.freqs_hz.begin(), r.freqs_hz.end()))
        throw std::runtime_error(name + ": frequencies must be ascending");
    return r;
}

DeviceResponse load_device_response(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open device response file: " + path);
    return parse_device_response(in, path);
}

namespace {

double interp_db(const DeviceResponse& r, double f) {
    auto it = std::lower_bound(r.freqs_hz.begin(), r.freqs_hz.end(), f);
    if (it == r.freqs_hz.begin()) return r.mag_db.front();
    if (it == r.freqs_hz.end()) return r.mag_db.back();
    const std::size_t i = it - r.freqs_hz.begin();
    const double t = (f - r.freqs_hz[i - 1]) / (r.freqs_hz[i] - r.freqs_hz[i - 1]);
    return r.mag_db[i - 1] + t * (r.mag_db[i] - r.mag_db[i - 1]);
}

}  // namespace

DeviceResponse cascade_responses(const DeviceResponse& tx, const DeviceResponse& rx,
                                 std::size_t grid_points) {
    const double fmin = std::max(tx.freqs_hz.front(), rx.freqs_hz.front());
    const double fmax = std::min(tx.freqs_hz.back(), rx.freqs_hz.back());
    if (!(fmax > fmin))
        throw std::runtime_error("cascade_responses: device frequency ranges do not overlap");

    DeviceResponse out;
    out.freqs_hz.resize(grid_points);
    out.mag_db.resize(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double f = fmin + (fmax - fmin) * static_cast<double>(i) / (grid_points - 1);
        out.freqs_hz[i] = f;
        out.mag_db[i] = interp_db(tx, f) + interp_db(rx, f);
    }
    return out;
}

}  // namespace ponsim
