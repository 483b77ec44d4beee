"""Channel model for the AP - IRS - two-user downlink.

Geometric path loss plus independent Rayleigh fading on every link. The IRS
has N elements grouped into M sub-surfaces; each sub-surface applies one
common discrete phase shift out of L levels. A sub-surface link coefficient
aggregates the N/M element-level contributions of that block, modelled as a
single complex Gaussian with N/M times the per-element variance (same first
and second moments as the element-wise sum).

Conventions:
  * the stored cascaded vector q_k multiplies the phase vector through its
    conjugate transpose: effective channel = q_k^H theta + h_dk;
  * the phase of the complex number 0 is taken as 0;
  * all gains/powers are linear (watts); dB only at the edges.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .units import db_to_linear

# Link identifiers for the counter-based RNG keying: draws depend only on
# (seed, trial_index, link id), so trials are order-independent.
_LINK_AP_IRS = 0
_LINK_IRS_USER1 = 1
_LINK_IRS_USER2 = 2
_LINK_AP_USER1 = 3
_LINK_AP_USER2 = 4


class DimensionError(ValueError):
    """Vector length does not match the IRS configuration."""


@dataclass(frozen=True)
class IrsConfig:
    """IRS with num_elements elements in num_subsurfaces blocks, phase_levels-ary phases."""

    num_elements: int
    num_subsurfaces: int
    phase_levels: int

    def __post_init__(self):
        if self.num_elements <= 0:
            raise ValueError("num_elements must be positive")
        if self.num_subsurfaces <= 0:
            raise ValueError("num_subsurfaces must be positive")
        if self.num_elements % self.num_subsurfaces != 0:
            raise ValueError(
                f"num_subsurfaces={self.num_subsurfaces} must divide "
                f"num_elements={self.num_elements}"
            )
        if self.phase_levels < 2:
            raise ValueError("phase_levels must be >= 2")

    @property
    def elements_per_subsurface(self) -> int:
        return self.num_elements // self.num_subsurfaces

    @property
    def phase_step(self) -> float:
        return 2.0 * np.pi / self.phase_levels


@dataclass(frozen=True)
class Geometry:
    """2-D positions (meters) of AP, IRS and the two users."""

    ap: tuple[float, float]
    irs: tuple[float, float]
    user1: tuple[float, float]
    user2: tuple[float, float]

    def __post_init__(self):
        for name, d in (
            ("ap-irs", self.ap_irs_distance),
            ("ap-user1", self.distance(self.ap, self.user1)),
            ("ap-user2", self.distance(self.ap, self.user2)),
            ("irs-user1", self.distance(self.irs, self.user1)),
            ("irs-user2", self.distance(self.irs, self.user2)),
        ):
            if d <= 0.0:
                raise ValueError(f"zero {name} distance")

    @staticmethod
    def distance(a: tuple[float, float], b: tuple[float, float]) -> float:
        return float(np.hypot(a[0] - b[0], a[1] - b[1]))

    @property
    def ap_irs_distance(self) -> float:
        return self.distance(self.ap, self.irs)

    def ap_user_distance(self, user: int) -> float:
        return self.distance(self.ap, self.user1 if user == 1 else self.user2)

    def irs_user_distance(self, user: int) -> float:
        return self.distance(self.irs, self.user1 if user == 1 else self.user2)


@dataclass(frozen=True)
class PathLossModel:
    """Distance-power law per link class, 30 dB reference loss at 1 m."""

    exponent_ap_user: float = 3.2
    exponent_irs_user: float = 2.6
    exponent_ap_irs: float = 2.5
    reference_loss_db: float = 30.0

    def __post_init__(self):
        for name in ("exponent_ap_user", "exponent_irs_user", "exponent_ap_irs"):
            if getattr(self, name) < 2.0:
                raise ValueError(f"{name} must be >= 2")
        if self.reference_loss_db <= 0.0:
            raise ValueError("reference_loss_db must be positive")

    def power_gain(self, distance_m: float, exponent: float) -> float:
        """Average linear power gain of one link at the given distance."""
        return db_to_linear(-self.reference_loss_db) * distance_m ** (-exponent)


@lru_cache(maxsize=32)
def lattice_phases(num_levels: int) -> np.ndarray:
    """The L feasible unit-modulus coefficients exp(2j*pi*l/L), l = 0..L-1.

    Canonical table: every place that maps levels to complex phases goes
    through here so that gains recompute bit-identically.
    """
    table = np.exp(2j * np.pi * np.arange(num_levels) / num_levels)
    table.flags.writeable = False
    return table


@dataclass(frozen=True)
class PhaseShiftVector:
    """M discrete phase indices; element m encodes exp(2j*pi*levels[m]/L)."""

    levels: np.ndarray
    num_levels: int

    def __post_init__(self):
        lv = np.array(self.levels, dtype=np.int64, copy=True)
        if lv.ndim != 1:
            raise ValueError("levels must be a 1-D integer vector")
        if self.num_levels < 1:
            raise ValueError("num_levels must be >= 1")
        if np.any((lv < 0) | (lv >= self.num_levels)):
            raise ValueError(f"levels must lie in [0, {self.num_levels - 1}]")
        lv.flags.writeable = False
        object.__setattr__(self, "levels", lv)

    def __len__(self) -> int:
        return self.levels.size

    @property
    def phases(self) -> np.ndarray:
        return lattice_phases(self.num_levels)[self.levels]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PhaseShiftVector)
            and self.num_levels == other.num_levels
            and np.array_equal(self.levels, other.levels)
        )


@dataclass(frozen=True)
class ChannelRealization:
    """One fading draw: cascaded vectors q1, q2 and direct gains hd1, hd2."""

    q1: np.ndarray
    q2: np.ndarray
    hd1: complex
    hd2: complex

    def __post_init__(self):
        for name in ("q1", "q2"):
            v = np.array(getattr(self, name), dtype=np.complex128, copy=True)
            if v.ndim != 1:
                raise ValueError(f"{name} must be a 1-D complex vector")
            if not np.isfinite(v).all():
                raise ValueError(f"{name} has non-finite entries")
            v.flags.writeable = False
            object.__setattr__(self, name, v)
        if self.q1.size != self.q2.size:
            raise ValueError("q1 and q2 must have equal length")

    @property
    def num_subsurfaces(self) -> int:
        return self.q1.size

    def cascaded(self, user: int) -> np.ndarray:
        return self.q1 if user == 1 else self.q2

    def direct(self, user: int) -> complex:
        return self.hd1 if user == 1 else self.hd2


def _link_rng(seed: int, trial_index: int, link_id: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial_index, link_id])


def _cn_samples(rng: np.random.Generator, n: int, variance: float) -> np.ndarray:
    """n i.i.d. circularly-symmetric complex Gaussians of the given variance."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def draw_link_coefficients(scenario, trial_index: int) -> dict:
    """Raw per-link fading draws of one trial, before cascading.

    Returns {"ap_irs": h_r, "irs_user1": g1, "irs_user2": g2,
    "ap_user1": hd1, "ap_user2": hd2}. The sub-surface vectors carry N/M
    times the element-level variance; the direct scalars are plain Rayleigh.
    """
    if trial_index < 0:
        raise ValueError("trial_index must be >= 0")
    irs, geom, plm = scenario.irs, scenario.geometry, scenario.pathloss
    m = irs.num_subsurfaces
    nbar = irs.elements_per_subsurface

    var_ap_irs = nbar * plm.power_gain(geom.ap_irs_distance, plm.exponent_ap_irs)
    links = {
        "ap_irs": _cn_samples(
            _link_rng(scenario.seed, trial_index, _LINK_AP_IRS), m, var_ap_irs
        )
    }
    for user, link, name in ((1, _LINK_IRS_USER1, "irs_user1"), (2, _LINK_IRS_USER2, "irs_user2")):
        var_iu = nbar * plm.power_gain(geom.irs_user_distance(user), plm.exponent_irs_user)
        links[name] = _cn_samples(_link_rng(scenario.seed, trial_index, link), m, var_iu)
    for user, link, name in ((1, _LINK_AP_USER1, "ap_user1"), (2, _LINK_AP_USER2, "ap_user2")):
        var_au = plm.power_gain(geom.ap_user_distance(user), plm.exponent_ap_user)
        links[name] = complex(
            _cn_samples(_link_rng(scenario.seed, trial_index, link), 1, var_au)[0]
        )
    return links


def generate_realization(scenario, trial_index: int) -> ChannelRealization:
    """Draw the fading channels of one Monte Carlo trial.

    `scenario` provides .irs, .geometry, .pathloss and .seed (see
    experiments.Scenario). Each link is Rayleigh with variance equal to its
    path-loss power gain; sub-surface coefficients carry N/M times the
    element-level variance. Deterministic in (seed, trial_index) and
    independent of any other trial.
    """
    links = draw_link_coefficients(scenario, trial_index)
    # q_k^H = g_k^H diag(h_r), hence q_k = g_k * conj(h_r)
    conj_hr = np.conj(links["ap_irs"])
    return ChannelRealization(
        q1=links["irs_user1"] * conj_hr,
        q2=links["irs_user2"] * conj_hr,
        hd1=links["ap_user1"],
        hd2=links["ap_user2"],
    )


def channel_gain(realization: ChannelRealization, theta: PhaseShiftVector, user: int) -> float:
    """Effective channel power gain |q_user^H theta + h_d,user|^2."""
    q = realization.cascaded(user)
    if len(theta) != q.size:
        raise DimensionError(
            f"phase vector length {len(theta)} != {q.size} sub-surfaces"
        )
    s = np.vdot(q, theta.phases) + realization.direct(user)
    return float(abs(s)) ** 2


def best_continuous_phases(realization: ChannelRealization, user: int) -> np.ndarray:
    """Unit-modulus vector maximizing the gain with the discrete constraint dropped.

    Element m equals exp(j(angle(h_d) + angle(q_m))): every reflected path is
    rotated onto the direct path, so the gain reaches its triangle-inequality
    ceiling (sum_m |q_m| + |h_d|)^2.
    """
    q = realization.cascaded(user)
    hd = realization.direct(user)
    u = np.exp(1j * (np.angle(hd) + np.angle(q)))
    u.flags.writeable = False
    return u


def aligned_gain_bound(realization: ChannelRealization, user: int) -> float:
    """(sum_m |q_m| + |h_d|)^2, the gain ceiling over all unit-modulus vectors."""
    q = realization.cascaded(user)
    return float(np.sum(np.abs(q)) + abs(realization.direct(user))) ** 2
