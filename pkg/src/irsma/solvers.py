"""Discrete phase-shift optimizers.

Four ways to pick lattice phase vectors for the weighted-inverse-gain
objectives of `schemes`:

  * brute force      - exhaustive scan of all L^M vectors (the oracle);
  * LA + AO          - linear-approximation start (quantized blends of the
                       two per-user continuous optima) refined by cyclic
                       per-element search;
  * RPS + AO         - random start, same refinement (baseline);
  * TDMA path        - per-user quantization of the continuous optimum
                       plus per-user refinement (the gains decouple).

Cost model: brute force performs exactly L^M objective evaluations, the LA
stage exactly B+1, one AO sweep exactly M*L single-element evaluations; an
AO run started without a known objective value spends one extra evaluation
on it. `SolverResult.evaluations` is the honest tally.
"""

import enum
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .channel import (
    ChannelRealization,
    PhaseShiftVector,
    aligned_gain_bound,
    best_continuous_phases,
    channel_gain,
    lattice_phases,
)
from .schemes import (
    NoisePower,
    SchemeKind,
    TargetRates,
    WeightedInverseObjective,
    fdma_weights,
    generic_objective,
    noma_order1_weights,
    noma_order2_weights,
    tdma_power_terms,
)


class EnumerationBudgetError(RuntimeError):
    """L^M exceeds the configured brute-force budget."""


class Method(enum.Enum):
    BRUTE_FORCE = "brute"
    LA_AO = "la-ao"
    RPS_AO = "rps-ao"


@dataclass(frozen=True)
class SolverConfig:
    """Knobs of the low-complexity solvers.

    la_steps is B: the LA initialization blends the two per-user optima at
    B+1 mixing points {0, 1/B, ..., 1}. ao_sweeps / rps_ao_sweeps cap the
    refinement after each start; a sweep that improves the objective by at
    most ao_rel_tol (relative) ends the run early, so the default 0.0 stops
    only on a zero-improvement sweep.
    """

    la_steps: int = 8
    ao_sweeps: int = 2
    rps_ao_sweeps: int = 10
    ao_rel_tol: float = 0.0
    enumeration_budget: int = 10_000_000

    def __post_init__(self):
        if self.la_steps < 1:
            raise ValueError("la_steps must be >= 1")
        if self.ao_sweeps < 0 or self.rps_ao_sweeps < 0:
            raise ValueError("sweep counts must be >= 0")
        if self.ao_rel_tol < 0.0:
            raise ValueError("ao_rel_tol must be >= 0")
        if self.enumeration_budget < 1:
            raise ValueError("enumeration_budget must be >= 1")


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class SolverResult:
    """Outcome of one scheme solve.

    total_power is recomputed from the returned phase vector(s) through
    channel_gain and the scheme closed form, so it is reproducible
    independently of kernel arithmetic. objective_trace holds the search's
    own values: the start objective followed by one entry per AO sweep
    (single entry for brute force); it is non-increasing. For NOMA both
    decoding-order runs and for TDMA both per-user runs are kept in
    sub_results.
    """

    total_power: float
    theta: PhaseShiftVector | tuple[PhaseShiftVector, PhaseShiftVector]
    decoding_order: SchemeKind | None
    objective_trace: tuple[float, ...]
    evaluations: int
    sub_results: tuple["SolverResult", ...] = ()


def _gains(realization: ChannelRealization, theta: PhaseShiftVector) -> tuple[float, float]:
    return channel_gain(realization, theta, 1), channel_gain(realization, theta, 2)


def _canonical_power(realization, weights, theta) -> float:
    g1, g2 = _gains(realization, theta)
    return generic_objective(weights, g1, g2)


def _kernel_args(realization: ChannelRealization, weights: WeightedInverseObjective):
    return (
        np.conj(realization.q1),
        np.conj(realization.q2),
        realization.hd1,
        realization.hd2,
        weights.a1,
        weights.a2,
    )


def quantize_angles(angles: np.ndarray, num_levels: int) -> np.ndarray:
    """Nearest lattice level per angle (circular distance); ties take the lower index."""
    step = 2.0 * np.pi / num_levels
    x = np.mod(np.asarray(angles, dtype=np.float64), 2.0 * np.pi)
    d = np.abs(x[:, None] - step * np.arange(num_levels)[None, :])
    d = np.minimum(d, 2.0 * np.pi - d)
    return np.argmin(d, axis=1).astype(np.int64)


def quantize_to_lattice(continuous: np.ndarray, num_levels: int) -> PhaseShiftVector:
    """Element-wise nearest discrete phase to a unit-modulus vector.

    Nearest in chordal distance |theta - u|^2, which on the unit circle is
    nearest in angle; exact midpoints resolve to the lower level index.
    """
    levels = quantize_angles(np.angle(np.asarray(continuous)), num_levels)
    return PhaseShiftVector(levels=levels, num_levels=num_levels)


def brute_force(
    realization: ChannelRealization,
    objective: WeightedInverseObjective,
    num_levels: int,
    config: SolverConfig = DEFAULT_CONFIG,
) -> SolverResult:
    """Global minimizer of the objective by exhaustive enumeration.

    Ties break to the lexicographically smallest level vector. Refuses
    lattices larger than config.enumeration_budget.
    """
    m = realization.num_subsurfaces
    total = num_levels**m
    if total > config.enumeration_budget:
        raise EnumerationBudgetError(
            f"{num_levels}^{m} = {total} candidates exceed the budget "
            f"{config.enumeration_budget}"
        )
    table = lattice_phases(num_levels)
    levels, value, evaluations = kernels.enumerate_weighted_inverse(
        *_kernel_args(realization, objective), num_levels, table
    )
    theta = PhaseShiftVector(levels=levels, num_levels=num_levels)
    return SolverResult(
        total_power=_canonical_power(realization, objective, theta),
        theta=theta,
        decoding_order=None,
        objective_trace=(value,),
        evaluations=evaluations,
    )


def _la_candidates(realization, weights, num_levels, config):
    """LA start: best of the B+1 quantized blends. Returns (levels, value, evals)."""
    table = lattice_phases(num_levels)
    args = _kernel_args(realization, weights)
    u1 = best_continuous_phases(realization, 1)
    u2 = best_continuous_phases(realization, 2)
    steps = config.la_steps
    best_levels, best_value = None, np.inf
    for i in range(steps + 1):
        eta = i / steps
        blend = eta * u1 + (1.0 - eta) * u2
        levels = quantize_angles(np.angle(blend), num_levels)
        value = kernels.evaluate_levels(levels, table, *args)
        if value < best_value:
            best_levels, best_value = levels, value
    return best_levels, best_value, steps + 1


def la_initialize(
    realization: ChannelRealization,
    weights: WeightedInverseObjective,
    num_levels: int,
    config: SolverConfig = DEFAULT_CONFIG,
) -> PhaseShiftVector:
    """Linear-approximation start vector for the weighted-inverse objective.

    Blends the per-user continuous optima at B+1 mixing points, projects
    each blend to unit modulus (phase of 0 taken as 0), quantizes to the
    lattice and keeps the candidate with the smallest objective (ties to
    the smallest mixing weight on user 1).
    """
    levels, _, _ = _la_candidates(realization, weights, num_levels, config)
    return PhaseShiftVector(levels=levels, num_levels=num_levels)


def rps_initialize(num_subsurfaces: int, num_levels: int, seed) -> PhaseShiftVector:
    """Uniform independent random level per element; deterministic in seed."""
    rng = np.random.default_rng(seed)
    levels = rng.integers(0, num_levels, size=num_subsurfaces, dtype=np.int64)
    return PhaseShiftVector(levels=levels, num_levels=num_levels)


def alternating_optimize(
    realization: ChannelRealization,
    objective: WeightedInverseObjective,
    num_levels: int,
    start: PhaseShiftVector,
    config: SolverConfig = DEFAULT_CONFIG,
    *,
    max_sweeps: int | None = None,
    start_value: float | None = None,
) -> SolverResult:
    """Cyclic per-element exhaustive refinement from `start`.

    Sweeps elements 1..M in order; each step scans all L levels of one
    element with the others fixed and keeps the incumbent on ties. Stops
    after max_sweeps (default config.ao_sweeps) or once a sweep fails to
    improve by more than ao_rel_tol relative. Never returns a vector worse
    than the start. Pass start_value when the start's objective is already
    known to avoid re-evaluating it.
    """
    table = lattice_phases(num_levels)
    args = _kernel_args(realization, objective)
    evaluations = 0
    if start_value is None:
        start_value = kernels.evaluate_levels(start.levels, table, *args)
        evaluations += 1
    sweeps = config.ao_sweeps if max_sweeps is None else max_sweeps
    levels, sweep_values, n = kernels.ao_sweeps(
        *args, num_levels, table, start.levels, start_value, sweeps, config.ao_rel_tol
    )
    evaluations += n
    theta = PhaseShiftVector(levels=levels, num_levels=num_levels)
    return SolverResult(
        total_power=_canonical_power(realization, objective, theta),
        theta=theta,
        decoding_order=None,
        objective_trace=(float(start_value), *map(float, sweep_values)),
        evaluations=evaluations,
    )


def solve_weighted(
    realization: ChannelRealization,
    weights: WeightedInverseObjective,
    num_levels: int,
    method: Method,
    config: SolverConfig = DEFAULT_CONFIG,
    rps_seed=0,
) -> SolverResult:
    """One shared-phase-vector optimization of a1/gain1 + a2/gain2."""
    if method is Method.BRUTE_FORCE:
        return brute_force(realization, weights, num_levels, config)
    if method is Method.LA_AO:
        levels, value, n_la = _la_candidates(realization, weights, num_levels, config)
        start = PhaseShiftVector(levels=levels, num_levels=num_levels)
        result = alternating_optimize(
            realization, weights, num_levels, start, config, start_value=value
        )
        return replace(result, evaluations=result.evaluations + n_la)
    if method is Method.RPS_AO:
        start = rps_initialize(realization.num_subsurfaces, num_levels, rps_seed)
        return alternating_optimize(
            realization, weights, num_levels, start, config,
            max_sweeps=config.rps_ao_sweeps,
        )
    raise ValueError(f"unknown method {method!r}")


def _child_seed(seed, k: int):
    if isinstance(seed, (list, tuple)):
        return [*seed, k]
    return [seed, k]


def solve_tdma(
    realization: ChannelRealization,
    rates: TargetRates,
    noise: NoisePower,
    num_levels: int,
    config: SolverConfig = DEFAULT_CONFIG,
    method: Method = Method.LA_AO,
    rps_seed=0,
) -> SolverResult:
    """TDMA: one phase vector per user, each optimized on its own gain.

    The default path quantizes each user's continuous optimum and refines
    it per user (cost O((2+I)ML)); brute force enumerates per user; RPS+AO
    starts each user at random. Returns both vectors and the summed power.
    """
    w = fdma_weights(rates, noise)
    per_user = (WeightedInverseObjective(w.a1, 0.0), WeightedInverseObjective(0.0, w.a2))
    subs = []
    for user, weights in ((1, per_user[0]), (2, per_user[1])):
        if method is Method.BRUTE_FORCE:
            subs.append(brute_force(realization, weights, num_levels, config))
        elif method is Method.LA_AO:
            start = quantize_to_lattice(best_continuous_phases(realization, user), num_levels)
            subs.append(
                alternating_optimize(realization, weights, num_levels, start, config)
            )
        elif method is Method.RPS_AO:
            start = rps_initialize(
                realization.num_subsurfaces, num_levels, _child_seed(rps_seed, user - 1)
            )
            subs.append(
                alternating_optimize(
                    realization, weights, num_levels, start, config,
                    max_sweeps=config.rps_ao_sweeps,
                )
            )
        else:
            raise ValueError(f"unknown method {method!r}")
    theta1, theta2 = subs[0].theta, subs[1].theta
    term1, term2 = tdma_power_terms(
        channel_gain(realization, theta1, 1),
        channel_gain(realization, theta2, 2),
        rates,
        noise,
    )
    return SolverResult(
        total_power=term1 + term2,
        theta=(theta1, theta2),
        decoding_order=None,
        objective_trace=(),
        evaluations=subs[0].evaluations + subs[1].evaluations,
        sub_results=tuple(subs),
    )


def solve_scheme(
    realization: ChannelRealization,
    scheme,
    rates: TargetRates,
    noise: NoisePower,
    num_levels: int,
    method: Method,
    config: SolverConfig = DEFAULT_CONFIG,
    rps_seed=0,
) -> SolverResult:
    """Solve one scheme end to end.

    scheme is "noma" (both decoding orders solved, better one returned;
    power ties go to order 1), "fdma", "tdma", or an explicit SchemeKind.
    For approximate methods the orders are compared by achieved power, not
    by a gain comparison at a single vector.
    """
    if scheme == "noma":
        order_runs = []
        for k, (weights, kind) in enumerate(
            (
                (noma_order1_weights(rates, noise), SchemeKind.NOMA_ORDER1),
                (noma_order2_weights(rates, noise), SchemeKind.NOMA_ORDER2),
            )
        ):
            run = solve_weighted(
                realization, weights, num_levels, method, config,
                rps_seed=_child_seed(rps_seed, k),
            )
            order_runs.append(replace(run, decoding_order=kind))
        best = order_runs[0] if order_runs[0].total_power <= order_runs[1].total_power \
            else order_runs[1]
        return replace(
            best,
            evaluations=order_runs[0].evaluations + order_runs[1].evaluations,
            sub_results=tuple(order_runs),
        )
    if scheme == "fdma" or scheme is SchemeKind.FDMA:
        return solve_weighted(
            realization, fdma_weights(rates, noise), num_levels, method, config,
            rps_seed=rps_seed,
        )
    if scheme == "tdma" or scheme is SchemeKind.TDMA:
        return solve_tdma(
            realization, rates, noise, num_levels, config, method, rps_seed=rps_seed
        )
    if scheme is SchemeKind.NOMA_ORDER1:
        run = solve_weighted(
            realization, noma_order1_weights(rates, noise), num_levels, method, config,
            rps_seed=rps_seed,
        )
        return replace(run, decoding_order=SchemeKind.NOMA_ORDER1)
    if scheme is SchemeKind.NOMA_ORDER2:
        run = solve_weighted(
            realization, noma_order2_weights(rates, noise), num_levels, method, config,
            rps_seed=rps_seed,
        )
        return replace(run, decoding_order=SchemeKind.NOMA_ORDER2)
    raise ValueError(f"unknown scheme {scheme!r}")


def objective_lower_bound(realization: ChannelRealization, weights: WeightedInverseObjective) -> float:
    """a1/gain1(u1) + a2/gain2(u2): no feasible vector can do better."""
    t1 = 0.0 if weights.a1 == 0.0 else weights.a1 / aligned_gain_bound(realization, 1)
    t2 = 0.0 if weights.a2 == 0.0 else weights.a2 / aligned_gain_bound(realization, 2)
    return t1 + t2
