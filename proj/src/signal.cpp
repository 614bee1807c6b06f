#include "ponsim/signal.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ponsim {

namespace {

bool domain_is_complex(Domain d) { return d == Domain::Field; }

void check_shape(std::size_t n, double fs) {
    if (n == 0) throw std::invalid_argument("SampledSignal: empty sample vector");
    if (!(fs > 0.0)) throw std::invalid_argument("SampledSignal: sample rate must be positive");
}

}  // namespace

SampledSignal::SampledSignal(std::vector<double> samples, double sample_rate_hz, Domain domain)
    : re_(std::move(samples)), sample_rate_(sample_rate_hz), domain_(domain), complex_(false) {
    check_shape(re_.size(), sample_rate_);
    if (domain_is_complex(domain))
        throw std::invalid_argument("SampledSignal: field signals are complex-valued");
}

SampledSignal::SampledSignal(std::vector<std::complex<double>> samples, double sample_rate_hz,
                             Domain domain)
    : cx_(std::move(samples)), sample_rate_(sample_rate_hz), domain_(domain), complex_(true) {
    check_shape(cx_.size(), sample_rate_);
    if (!domain_is_complex(domain))
        throw std::invalid_argument("SampledSignal: only field signals are complex-valued");
}

std::size_t SampledSignal::size() const { return complex_ ? cx_.size() : re_.size(); }

const std::vector<double>& SampledSignal::real_samples() const {
    if (complex_) throw std::logic_error("SampledSignal: real access on complex signal");
    return re_;
}

const std::vector<std::complex<double>>& SampledSignal::complex_samples() const {
    if (!complex_) throw std::logic_error("SampledSignal: complex access on real signal");
    return cx_;
}

std::vector<double>& SampledSignal::real_samples() {
    if (complex_) throw std::logic_error("SampledSignal: real access on complex signal");
    return re_;
}

std::vector<std::complex<double>>& SampledSignal::complex_samples() {
    if (!complex_) throw std::logic_error("SampledSignal: complex access on real signal");
    return cx_;
}

std::vector<double> fft_frequencies(std::size_t n, double sample_rate_hz) {
    std::vector<double> f(n);
    const double df = sample_rate_hz / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto ki = static_cast<std::ptrdiff_t>(k);
        const auto ni = static_cast<std::ptrdiff_t>(n);
        f[k] = df * static_cast<double>(2 * ki <= ni ? ki : ki - ni);
    }
    return f;
}

namespace fft {

namespace {

// FFTW plan creation is not thread-safe; execution through the new-array
// interface is. Plans are cached per length and reused with fftw_malloc'd
// buffers so the alignment they were planned with always matches.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanSet {
    fftw_plan fwd = nullptr;   // c2c forward
    fftw_plan bwd = nullptr;   // c2c backward
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

PlanSet& plans_for(std::size_t n) {
    static std::map<std::size_t, PlanSet> cache;
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    PlanSet ps;
    auto* a = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    auto* b = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    auto* r = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    auto* h = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    ps.fwd = fftw_plan_dft_1d(static_cast<int>(n), a, b, FFTW_FORWARD, FFTW_ESTIMATE);
    ps.bwd = fftw_plan_dft_1d(static_cast<int>(n), a, b, FFTW_BACKWARD, FFTW_ESTIMATE);
    ps.r2c = fftw_plan_dft_r2c_1d(static_cast<int>(n), r, h, FFTW_ESTIMATE);
    ps.c2r = fftw_plan_dft_c2r_1d(static_cast<int>(n), h, r, FFTW_ESTIMATE);
    fftw_free(a);
    fftw_free(b);
    fftw_free(r);
    fftw_free(h);
    return cache.emplace(n, ps).first->second;
}

struct FftwBuffer {
    void* p;
    explicit FftwBuffer(std::size_t bytes) : p(fftw_malloc(bytes)) {
        if (!p) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(p); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

}  // namespace

void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
    const std::size_t n = in.size();
    if (out.size() != n) throw std::invalid_argument("fft::forward: size mismatch");
    auto& ps = plans_for(n);
    FftwBuffer bi(sizeof(fftw_complex) * n), bo(sizeof(fftw_complex) * n);
    auto* ci = static_cast<fftw_complex*>(bi.p);
    auto* co = static_cast<fftw_complex*>(bo.p);
    std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(ci));
    fftw_execute_dft(ps.fwd, ci, co);
    std::copy_n(reinterpret_cast<std::complex<double>*>(co), n, out.begin());
}

void inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
    const std::size_t n = in.size();
    if (out.size() != n) throw std::invalid_argument("fft::inverse: size mismatch");
    auto& ps = plans_for(n);
    FftwBuffer bi(sizeof(fftw_complex) * n), bo(sizeof(fftw_complex) * n);
    auto* ci = static_cast<fftw_complex*>(bi.p);
    auto* co = static_cast<fftw_complex*>(bo.p);
    std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(ci));
    fftw_execute_dft(ps.bwd, ci, co);
    const double scale = 1.0 / static_cast<double>(n);
    auto* src = reinterpret_cast<std::complex<double>*>(co);
    for (std::size_t k = 0; k < n; ++k) out[k] = src[k] * scale;
}

void forward_real(std::span<const double> in, std::span<std::complex<double>> out) {
    const std::size_t n = in.size();
    if (out.size() != n / 2 + 1) throw std::invalid_argument("fft::forward_real: size mismatch");
    auto& ps = plans_for(n);
    FftwBuffer bi(sizeof(double) * n), bo(sizeof(fftw_complex) * (n / 2 + 1));
    auto* ri = static_cast<double*>(bi.p);
    auto* co = static_cast<fftw_complex*>(bo.p);
    std::copy(in.begin(), in.end(), ri);
    fftw_execute_dft_r2c(ps.r2c, ri, co);
    std::copy_n(reinterpret_cast<std::complex<double>*>(co), n / 2 + 1, out.begin());
}

void inverse_real(std::span<const std::complex<double>> in, std::span<double> out) {
    const std::size_t n = out.size();
    if (in.size() != n / 2 + 1) throw std::invalid_argument("fft::inverse_real: size mismatch");
    auto& ps = plans_for(n);
    FftwBuffer bi(sizeof(fftw_complex) * (n / 2 + 1)), bo(sizeof(double) * n);
    auto* ci = static_cast<fftw_complex*>(bi.p);
    auto* ro = static_cast<double*>(bo.p);
    std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(ci));
    fftw_execute_dft_c2r(ps.c2r, ci, ro);  // clobbers ci, which is scratch here
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = ro[k] * scale;
}

}  // namespace fft

SampledSignal apply_response(const SampledSignal& sig,
                             std::span<const std::complex<double>> response) {
    const std::size_t n = sig.size();
    if (response.size() != n)
        throw std::invalid_argument("apply_response: response not on the signal's frequency grid");

    if (sig.is_complex()) {
        std::vector<std::complex<double>> spec(n), out(n);
        fft::forward(sig.complex_samples(), spec);
        for (std::size_t k = 0; k < n; ++k) spec[k] *= response[k];
        fft::inverse(spec, out);
        return SampledSignal(std::move(out), sig.sample_rate(), sig.domain());
    }

    // Real path: insist on a Hermitian response, then work on the half grid.
    const double tol = 1e-9;
    for (std::size_t k = 1; k < (n + 1) / 2; ++k) {
        const auto diff = response[n - k] - std::conj(response[k]);
        if (std::abs(diff) > tol * (1.0 + std::abs(response[k])))
            throw std::invalid_argument(
                "apply_response: non-Hermitian response applied to a real signal");
    }
    if (std::abs(response[0].imag()) > tol)
        throw std::invalid_argument(
            "apply_response: non-Hermitian response applied to a real signal");

    std::vector<std::complex<double>> spec(n / 2 + 1);
    fft::forward_real(sig.real_samples(), spec);
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= response[k];
    // The Nyquist bin is its own mirror image; a sampled continuous-time
    // response lands there with a stray phase, and only its real part is
    // meaningful for a real signal.
    if (n % 2 == 0) spec[n / 2] = spec[n / 2].real();
    std::vector<double> out(n);
    fft::inverse_real(spec, out);
    return SampledSignal(std::move(out), sig.sample_rate(), sig.domain());
}

double mean_power(const SampledSignal& sig) {
    if (sig.domain() != Domain::Power)
        throw std::invalid_argument("mean_power: signal does not carry power");
    const auto& p = sig.real_samples();
    double acc = 0.0;
    for (double v : p) {
        if (v < 0.0) throw std::invalid_argument("mean_power: negative power sample");
        acc += v;
    }
    return acc / static_cast<double>(p.size());
}

double signal_energy(const SampledSignal& sig) {
    double acc = 0.0;
    if (sig.is_complex()) {
        for (const auto& v : sig.complex_samples()) acc += std::norm(v);
    } else {
        for (double v : sig.real_samples()) acc += v * v;
    }
    return acc;
}

}  // namespace ponsim
