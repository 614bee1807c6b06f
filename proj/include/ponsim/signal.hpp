#pragma once

#include <complex>
#include <span>
#include <vector>

namespace ponsim {

/// What a waveform physically carries; fixes units and real/complex storage.
enum class Domain {
    Electrical,  // drive voltage, real [V]
    Field,       // optical field envelope, complex [sqrt(W)]
    Power,       // instantaneous optical power, real [W]
    Current,     // photocurrent, real [A]
};

/// Uniformly sampled waveform. Real-valued for electrical/power/current
/// signals, complex for the optical field. The sequence is treated as one
/// period of a periodic signal, so frequency-domain filtering is circular.
class SampledSignal {
  public:
    SampledSignal(std::vector<double> samples, double sample_rate_hz, Domain domain);
    SampledSignal(std::vector<std::complex<double>> samples, double sample_rate_hz, Domain domain);

    bool is_complex() const { return complex_; }
    std::size_t size() const;
    double sample_rate() const { return sample_rate_; }
    Domain domain() const { return domain_; }

    const std::vector<double>& real_samples() const;
    const std::vector<std::complex<double>>& complex_samples() const;
    std::vector<double>& real_samples();
    std::vector<std::complex<double>>& complex_samples();

  private:
    std::vector<double> re_;
    std::vector<std::complex<double>> cx_;
    double sample_rate_;
    Domain domain_;
    bool complex_;
};

/// Two-sided FFT-ordered frequency grid for an n-point signal:
/// f[k] = k*fs/n for k <= n/2, f[k] = (k-n)*fs/n above.
std::vector<double> fft_frequencies(std::size_t n, double sample_rate_hz);

/// Multiplies the signal spectrum by `response` (same FFT-ordered grid as
/// fft_frequencies) and transforms back. Length and sample rate are
/// preserved. For real signals the response must be Hermitian-symmetric.
SampledSignal apply_response(const SampledSignal& sig,
                             std::span<const std::complex<double>> response);

/// Time-average of a power waveform, in watts. Rejects negative samples.
double mean_power(const SampledSignal& sig);

/// Sum of |x_k|^2 over the sequence (Parseval bookkeeping for tests).
double signal_energy(const SampledSignal& sig);

namespace fft {

// Thin wrappers over the process-wide FFT backend. Forward transforms are
// unnormalized; inverse transforms carry the 1/n factor.
void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);
void inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);
// Real transforms use the half spectrum (n/2+1 bins).
void forward_real(std::span<const double> in, std::span<std::complex<double>> out);
void inverse_real(std::span<const std::complex<double>> in, std::span<double> out);

}  // namespace fft

}  // namespace ponsim
