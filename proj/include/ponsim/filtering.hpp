#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ponsim {

/// Electrical low-pass description. Attenuation is always measured on the
/// power response |H|^2, so f3dB is the half-power point and f20dB the
/// 1/100-power point for both families.
class FilterSpec {
  public:
    struct Butterworth {
        int poles;
        double f3db_hz;
    };
    struct SuperGaussian {
        double order_n;
        double f0_hz;
    };

    static FilterSpec butterworth(int poles, double f3db_hz);
    static FilterSpec supergaussian(double order_n, double f0_hz);
    /// Solves (n, f0) so that the profile hits the requested pair exactly.
    static FilterSpec supergaussian_from_bandwidths(double f3db_hz, double f20db_hz);

    bool is_butterworth() const { return std::holds_alternative<Butterworth>(shape_); }
    const Butterworth& butterworth_shape() const { return std::get<Butterworth>(shape_); }
    const SuperGaussian& supergaussian_shape() const { return std::get<SuperGaussian>(shape_); }

    double f3db() const;
    double f20db() const;

    /// Complex response on an arbitrary (two-sided) frequency grid. Both
    /// families are evaluated as zero-phase magnitude profiles, so they
    /// differ only in roll-off shape.
    std::vector<std::complex<double>> response(std::span<const double> freqs_hz) const;

    std::string describe() const;

  private:
    explicit FilterSpec(Butterworth b) : shape_(b) {}
    explicit FilterSpec(SuperGaussian g) : shape_(g) {}
    std::variant<Butterworth, SuperGaussian> shape_;
};

/// Solve the super-Gaussian parameters hitting (f3dB, f20dB):
/// n = ln(2 ln10 / ln2) / (2 ln(f20/f3)), f0 = f3 / (ln2)^(1/2n).
struct SuperGaussianParams {
    double order_n;
    double f0_hz;
};
SuperGaussianParams supergaussian_params(double f3db_hz, double f20db_hz);

/// Butterworth magnitude response, |H|^2 = 1 / (1 + (f/f3dB)^(2N)),
/// applied with zero phase.
std::vector<std::complex<double>> butterworth_response(int poles, double f3db_hz,
                                                       std::span<const double> freqs_hz);

/// Zero-phase super-Gaussian response, H = exp(-(1/2) (|f|/f0)^(2n)).
std::vector<std::complex<double>> supergaussian_response(double order_n, double f0_hz,
                                                         std::span<const double> freqs_hz);

/// Bit-rate-normalized bandwidths, in percent of Rb.
struct NormalizedBandwidths {
    double b3db_pct;
    double b20db_pct;
    double bit_rate_hz;
};
NormalizedBandwidths to_normalized(double f3db_hz, double f20db_hz, double bit_rate_hz);

/// Fit a pair of identical super-Gaussians to a measured TX*RX cascade
/// magnitude. Least squares in dB, uniform weight over the cascade's
/// 0..-25 dB region; returns the single filter's (f3dB, f20dB).
struct GfFit {
    double f3db_hz;
    double f20db_hz;
    double rms_error_db;  // residual over the fitted region
};
GfFit fit_equivalent_gf(std::span<const double> freqs_hz,
                        std::span<const double> cascade_mag_db);

/// Tabulated device response: two columns (frequency_Hz magnitude_dB),
/// '#' starts a comment.
struct DeviceResponse {
    std::vector<double> freqs_hz;
    std::vector<double> mag_db;
};
DeviceResponse parse_device_response(std::istream& in, const std::string& name);
DeviceResponse load_device_response(const std::string& path);

/// Cascade of two device responses resampled onto a common uniform grid
/// (linear interpolation in dB over the overlapping range).
DeviceResponse cascade_responses(const DeviceResponse& tx, const DeviceResponse& rx,
                                 std::size_t grid_points = 2000);

}  // namespace ponsim
