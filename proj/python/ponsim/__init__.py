"""PON physical-layer link simulator bindings.

The heavy lifting lives in the C++ core; this package re-exports the main
operations: PRBS/precoding, filter synthesis and fitting, and the Monte
Carlo BER / sensitivity entry points.
"""

from ._core import (
    fit_equivalent_gf,
    filter_response,
    power_penalty,
    prbs17,
    precode_db,
    reference_cases,
    reference_s0_dbm,
    sensitivity,
    simulate_ber,
    supergaussian_params,
)

__all__ = [
    "fit_equivalent_gf",
    "filter_response",
    "power_penalty",
    "prbs17",
    "precode_db",
    "reference_cases",
    "reference_s0_dbm",
    "sensitivity",
    "simulate_ber",
    "supergaussian_params",
]
