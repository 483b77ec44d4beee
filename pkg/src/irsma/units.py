"""dB / dBm conversions.

All internal quantities are linear: channel gains dimensionless power
ratios, powers in watts. Conversions happen only at configuration parsing
and report formatting.
"""

import math


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def dbm_to_watts(x_dbm: float) -> float:
    return 10.0 ** ((x_dbm - 30.0) / 10.0)


def watts_to_dbm(p_watts: float) -> float:
    """Power in dBm; 0 W maps to -inf."""
    if p_watts == 0.0:
        return float("-inf")
    return 10.0 * math.log10(p_watts) + 30.0
