"""Closed-form minimum transmit powers per multiple-access scheme.

With the rate constraints active, each scheme's minimum AP power for fixed
channel gains reduces to a weighted sum of inverse gains:

    NOMA, user-1 decoded interference-free:
        (2^g1 - 1) 2^g2 s2 / gain1 + (2^g2 - 1) s2 / gain2
    NOMA, user-2 decoded interference-free:
        (2^g1 - 1) s2 / gain1 + (2^g2 - 1) 2^g1 s2 / gain2
    FDMA (half bandwidth, half noise per user):
        (2^(2 g1) - 1) s2 / (2 gain1) + (2^(2 g2) - 1) s2 / (2 gain2)
    TDMA (half time, per-user power pooling; separate phase vector per user):
        same summands as FDMA but each gain independently optimized.

Everything here is a pure function of (gains, rates, noise); the weighted
inverse form is exposed so phase optimizers can treat all schemes uniformly.
"""

import enum
from dataclasses import dataclass


class InfeasibleGainError(ValueError):
    """A channel power gain is zero or negative where a positive one is required."""


class SchemeKind(enum.Enum):
    NOMA_ORDER1 = "noma-order1"  # user 1 decoded interference-free
    NOMA_ORDER2 = "noma-order2"  # user 2 decoded interference-free
    FDMA = "fdma"
    TDMA = "tdma"


@dataclass(frozen=True)
class TargetRates:
    """Per-user target rates in bps/Hz; (0, 0) is allowed and costs no power."""

    gamma1: float
    gamma2: float

    def __post_init__(self):
        for name in ("gamma1", "gamma2"):
            g = getattr(self, name)
            if not (0.0 <= g < float("inf")):
                raise ValueError(f"{name} must be finite and >= 0")


@dataclass(frozen=True)
class NoisePower:
    """Receiver noise power, linear watts (-80 dBm is 1e-11 W)."""

    sigma2: float = 1e-11

    def __post_init__(self):
        if not self.sigma2 > 0.0:
            raise ValueError("sigma2 must be positive")


@dataclass(frozen=True)
class WeightedInverseObjective:
    """Objective a1/gain1 + a2/gain2 over the phase lattice.

    A weight of exactly 0 drops its term (single-user case); negative
    weights are rejected.
    """

    a1: float
    a2: float

    def __post_init__(self):
        if self.a1 < 0.0 or self.a2 < 0.0:
            raise ValueError("weights must be >= 0")


def _checked_gain(gain: float) -> float:
    if not gain > 0.0:
        raise InfeasibleGainError(f"channel power gain must be positive, got {gain}")
    return gain


def generic_objective(obj: WeightedInverseObjective, gain1: float, gain2: float) -> float:
    """a1/gain1 + a2/gain2; zero-weight terms contribute exactly 0."""
    term1 = 0.0 if obj.a1 == 0.0 else obj.a1 / _checked_gain(gain1)
    term2 = 0.0 if obj.a2 == 0.0 else obj.a2 / _checked_gain(gain2)
    return term1 + term2


def noma_order1_weights(rates: TargetRates, noise: NoisePower) -> WeightedInverseObjective:
    return WeightedInverseObjective(
        a1=(2.0 ** rates.gamma1 - 1.0) * 2.0 ** rates.gamma2 * noise.sigma2,
        a2=(2.0 ** rates.gamma2 - 1.0) * noise.sigma2,
    )


def noma_order2_weights(rates: TargetRates, noise: NoisePower) -> WeightedInverseObjective:
    return WeightedInverseObjective(
        a1=(2.0 ** rates.gamma1 - 1.0) * noise.sigma2,
        a2=(2.0 ** rates.gamma2 - 1.0) * 2.0 ** rates.gamma1 * noise.sigma2,
    )


def fdma_weights(rates: TargetRates, noise: NoisePower) -> WeightedInverseObjective:
    return WeightedInverseObjective(
        a1=(2.0 ** (2.0 * rates.gamma1) - 1.0) * noise.sigma2 / 2.0,
        a2=(2.0 ** (2.0 * rates.gamma2) - 1.0) * noise.sigma2 / 2.0,
    )


def noma_power_order1(gain1: float, gain2: float, rates: TargetRates, noise: NoisePower) -> float:
    """Total power with user 1 decoded free of interference (user 2 under SIC)."""
    return generic_objective(noma_order1_weights(rates, noise), gain1, gain2)


def noma_power_order2(gain1: float, gain2: float, rates: TargetRates, noise: NoisePower) -> float:
    """Total power with user 2 decoded free of interference (user 1 under SIC)."""
    return generic_objective(noma_order2_weights(rates, noise), gain1, gain2)


def noma_power(
    gain1: float, gain2: float, rates: TargetRates, noise: NoisePower
) -> tuple[float, SchemeKind]:
    """Minimum NOMA power over both decoding orders and which order attains it.

    order1 - order2 = (2^g1 - 1)(2^g2 - 1) s2 (1/gain1 - 1/gain2), so order 1
    wins exactly when gain1 >= gain2; ties go to order 1.
    """
    p1 = noma_power_order1(gain1, gain2, rates, noise)
    p2 = noma_power_order2(gain1, gain2, rates, noise)
    if p1 <= p2:
        return p1, SchemeKind.NOMA_ORDER1
    return p2, SchemeKind.NOMA_ORDER2


def fdma_power(gain1: float, gain2: float, rates: TargetRates, noise: NoisePower) -> float:
    """Total FDMA power at a shared phase configuration."""
    return generic_objective(fdma_weights(rates, noise), gain1, gain2)


def tdma_power_terms(
    gain1: float, gain2: float, rates: TargetRates, noise: NoisePower
) -> tuple[float, float]:
    """The two separable TDMA summands; gain_k may come from its own phase vector.

    Each term matches the corresponding FDMA summand; TDMA differs only in
    that the caller optimizes the two gains independently.
    """
    w = fdma_weights(rates, noise)
    term1 = 0.0 if w.a1 == 0.0 else w.a1 / _checked_gain(gain1)
    term2 = 0.0 if w.a2 == 0.0 else w.a2 / _checked_gain(gain2)
    return term1, term2
