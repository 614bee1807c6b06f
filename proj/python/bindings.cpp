// Python bindings for the main simulator operations.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>

#include "ponsim/channel.hpp"
#include "ponsim/equalize.hpp"
#include "ponsim/filtering.hpp"
#include "ponsim/metrics.hpp"
#include "ponsim/sweep.hpp"
#include "ponsim/tables.hpp"
#include "ponsim/txchain.hpp"

namespace py = pybind11;
using namespace ponsim;

namespace {

FilterSpec filter_from_args(double rb_hz, double b3db_pct, double b20db_pct, int poles) {
    const double f3 = b3db_pct / 100.0 * rb_hz;
    if (poles > 0) return FilterSpec::butterworth(poles, f3);
    return FilterSpec::supergaussian_from_bandwidths(f3, b20db_pct / 100.0 * rb_hz);
}

LinkScenario scenario_from_kwargs(const std::string& format, double rb_gbps, double b3db_pct,
                                  double b20db_pct, int poles, double dispersion_ps_nm,
                                  const std::string& band, std::uint64_t seed,
                                  bool noise_enabled) {
    const double rb = rb_gbps * 1e9;
    auto s = LinkScenario::make(rb, format_from_name(format),
                                filter_from_args(rb, b3db_pct, b20db_pct, poles));
    s.fiber.dispersion_ps_nm = dispersion_ps_nm;
    s.fiber.wavelength_nm = band_wavelength_nm(band_from_name(band));
    s.noise_seed = seed;
    s.noise_enabled = noise_enabled;
    return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "PON physical-layer link simulator: filter shaping and dispersion studies";

    m.def("prbs17", &prbs17, py::arg("seed") = 1,
          "Maximal-length 2^17-1 bit sequence from x^17 + x^14 + 1.");
    m.def(
        "precode_db",
        [](const std::vector<std::uint8_t>& bits) { return precode_db(bits); },
        py::arg("bits"), "Duobinary XOR precoder, b[k] = d[k] ^ b[k-1].");

    m.def(
        "supergaussian_params",
        [](double f3db_hz, double f20db_hz) {
            const auto p = supergaussian_params(f3db_hz, f20db_hz);
            return py::make_tuple(p.order_n, p.f0_hz);
        },
        py::arg("f3db_hz"), py::arg("f20db_hz"),
        "Solve the super-Gaussian (n, f0) hitting the requested bandwidth pair.");
    m.def(
        "filter_response",
        [](const std::string& family, double param1, double param2,
           const std::vector<double>& freqs_hz) {
            if (family == "butterworth")
                return butterworth_response(static_cast<int>(param1), param2, freqs_hz);
            if (family == "supergaussian") return supergaussian_response(param1, param2, freqs_hz);
            throw std::invalid_argument("family must be 'butterworth' or 'supergaussian'");
        },
        py::arg("family"), py::arg("param1"), py::arg("param2"), py::arg("freqs_hz"),
        "Complex response; (poles, f3dB) for Butterworth, (n, f0) for super-Gaussian.");
    m.def(
        "fit_equivalent_gf",
        [](const std::vector<double>& freqs_hz, const std::vector<double>& cascade_mag_db) {
            const auto fit = fit_equivalent_gf(freqs_hz, cascade_mag_db);
            return py::make_tuple(fit.f3db_hz, fit.f20db_hz, fit.rms_error_db);
        },
        py::arg("freqs_hz"), py::arg("cascade_mag_db"),
        "Fit the identical-GF pair to a tabulated TX*RX cascade; returns (f3dB, f20dB, rms_dB).");

    m.def(
        "simulate_ber",
        [](const std::string& format, double rb_gbps, double rop_dbm, double b3db_pct,
           double b20db_pct, int poles, double dispersion_ps_nm, const std::string& band,
           std::uint64_t seed, bool noise) {
            const auto res = simulate_ber(scenario_from_kwargs(format, rb_gbps, b3db_pct,
                                                               b20db_pct, poles,
                                                               dispersion_ps_nm, band, seed,
                                                               noise),
                                          rop_dbm);
            py::dict d;
            d["ber"] = res.ber;
            d["operable"] = res.operable;
            d["note"] = res.note;
            return d;
        },
        py::arg("format"), py::arg("rb_gbps"), py::arg("rop_dbm"), py::arg("b3db_pct") = 120.0,
        py::arg("b20db_pct") = 240.0, py::arg("poles") = 0, py::arg("dispersion_ps_nm") = 0.0,
        py::arg("band") = "C", py::arg("seed") = 1, py::arg("noise") = true,
        "Monte Carlo BER of one link scenario at a fixed received optical power.");

    m.def(
        "sensitivity",
        [](const std::string& format, double rb_gbps, double b3db_pct, double b20db_pct,
           int poles, double dispersion_ps_nm, const std::string& band, std::uint64_t seed) {
            const auto res = sensitivity(scenario_from_kwargs(
                format, rb_gbps, b3db_pct, b20db_pct, poles, dispersion_ps_nm, band, seed, true));
            py::dict d;
            d["sensitivity_dbm"] = res.sensitivity_dbm;
            d["converged"] = res.converged;
            d["ber_curve"] = res.ber_curve;
            d["note"] = res.note;
            return d;
        },
        py::arg("format"), py::arg("rb_gbps"), py::arg("b3db_pct") = 120.0,
        py::arg("b20db_pct") = 240.0, py::arg("poles") = 0, py::arg("dispersion_ps_nm") = 0.0,
        py::arg("band") = "C", py::arg("seed") = 1,
        "Received power reaching the 1e-3 BER target, in dBm.");

    m.def("power_penalty", &power_penalty, py::arg("sensitivity_dbm"), py::arg("reference_dbm"));
    m.def("reference_s0_dbm", &reference_s0_dbm, py::arg("bit_rate_hz"),
          "Bundled PAM-2 unlimited-bandwidth back-to-back sensitivity anchor.");

    m.def(
        "reference_cases",
        [](const std::string& technology) {
            py::list rows;
            const auto cases =
                technology == "10G" ? reference_cases_10g() : reference_cases_25g();
            for (const auto& c : cases) {
                py::dict d;
                d["case_id"] = c.case_id;
                d["tx_ref"] = c.tx_ref;
                d["tx_f3db_ghz"] = c.tx_f3db_ghz;
                d["rx_ref"] = c.rx_ref;
                d["rx_f3db_ghz"] = c.rx_f3db_ghz;
                d["b3db_pct_25g"] = c.b3db_pct_25g;
                d["b20db_pct_25g"] = c.b20db_pct_25g;
                d["b3db_pct_50g"] = c.b3db_pct_50g;
                d["b20db_pct_50g"] = c.b20db_pct_50g;
                rows.append(d);
            }
            return rows;
        },
        py::arg("technology") = "10G",
        "Bundled equivalent-GF bandwidths of published device cascades.");
}
