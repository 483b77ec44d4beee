"""Monte Carlo comparison harness.

Runs seeded fading trials over the two deployment cases, solves every
requested scheme x method per realization, checks the theory (FDMA is never
cheaper than TDMA or NOMA at exact optima) and aggregates sweep curves into
CSV rows. Channels depend only on (seed, trial), never on the rates, so
sweep points are paired samples.
"""

import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .channel import (
    ChannelRealization,
    Geometry,
    IrsConfig,
    PathLossModel,
    channel_gain,
    generate_realization,
)
from .schemes import (
    NoisePower,
    SchemeKind,
    TargetRates,
    fdma_power,
    noma_power,
    tdma_power_terms,
)
from .solvers import DEFAULT_CONFIG, Method, SolverConfig, SolverResult, solve_scheme
from .units import watts_to_dbm

SCHEMES = ("noma", "fdma", "tdma")
METHOD_ORDER = (Method.BRUTE_FORCE, Method.LA_AO, Method.RPS_AO)
NO_IRS = "no-irs"

# Deployment constants (Fig.-2-style top view). The AP sits at the origin,
# the IRS 50 m away on the x axis. Case 1: both users 4 m from the IRS,
# mirror images across the AP-IRS line, hence exactly equidistant from the
# IRS and from the AP. Case 2: user 1 stays 4 m from the IRS; user 2 keeps
# the same AP distance but sits 30 m off the AP-IRS axis, far from the IRS.
AP_IRS_DISTANCE = 50.0
IRS_USER_DISTANCE = 4.0
CASE2_LATERAL_OFFSET = 30.0

# rps seed lane per scheme so solver restarts never share draws
_RPS_TAG = {"noma": 0, "fdma": 1, "tdma": 2}

CSV_COLUMNS = (
    "sweep_var",
    "scheme",
    "method",
    "mean_power_dbm",
    "std_dbm",
    "win_rate_vs_tdma",
    "gap_vs_bruteforce_db",
    "trials",
    "seed",
)


def build_case(case: int) -> Geometry:
    """Geometry of deployment case 1 (two near-IRS users) or 2 (one far)."""
    ap = (0.0, 0.0)
    irs = (AP_IRS_DISTANCE, 0.0)
    user1 = (AP_IRS_DISTANCE, IRS_USER_DISTANCE)
    if case == 1:
        user2 = (AP_IRS_DISTANCE, -IRS_USER_DISTANCE)
    elif case == 2:
        d_ap_user = math.hypot(AP_IRS_DISTANCE, IRS_USER_DISTANCE)
        user2 = (math.sqrt(d_ap_user**2 - CASE2_LATERAL_OFFSET**2), CASE2_LATERAL_OFFSET)
    else:
        raise ValueError(f"case must be 1 or 2, got {case!r}")
    return Geometry(ap=ap, irs=irs, user1=user1, user2=user2)


@dataclass(frozen=True)
class Scenario:
    """Everything one experiment run needs; immutable and fully seeded."""

    irs: IrsConfig = IrsConfig(num_elements=100, num_subsurfaces=5, phase_levels=8)
    geometry: Geometry = field(default_factory=lambda: build_case(1))
    pathloss: PathLossModel = PathLossModel()
    noise: NoisePower = NoisePower()
    rates: TargetRates = TargetRates(1.0, 1.0)
    trials: int = 100
    seed: int = 1
    solver: SolverConfig = DEFAULT_CONFIG

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")

    def realization(self, trial_index: int) -> ChannelRealization:
        return generate_realization(self, trial_index)


@dataclass(frozen=True)
class SweepSpec:
    """Rate grid: either a common rate for both users, or user 1's rate with
    the sum held fixed (split-rate)."""

    variable: str = "common-rate"
    grid: tuple[float, ...] = (1.0, 2.0, 3.0, 4.0, 5.0)
    sum_rate: float = 4.0

    def __post_init__(self):
        if self.variable not in ("common-rate", "split-rate"):
            raise ValueError(f"unknown sweep variable {self.variable!r}")
        if len(self.grid) == 0:
            raise ValueError("sweep grid must be nonempty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("sweep grid must be strictly ascending")
        if self.variable == "split-rate":
            if min(self.grid) < 0 or max(self.grid) > self.sum_rate:
                raise ValueError("split-rate grid must lie within [0, sum_rate]")
        elif min(self.grid) < 0:
            raise ValueError("rates must be >= 0")
        object.__setattr__(self, "grid", tuple(float(v) for v in self.grid))

    def rates_at(self, value: float) -> TargetRates:
        if self.variable == "common-rate":
            return TargetRates(value, value)
        return TargetRates(value, self.sum_rate - value)


@dataclass(frozen=True)
class ComparisonRecord:
    """Per-realization solver outcomes for every scheme x method.

    Keeps the realization itself so that violations can be dumped and the
    Proposition-2 equality predicates re-evaluated exactly.
    """

    trial_index: int
    rates: TargetRates
    realization: ChannelRealization
    results: dict
    baseline: dict
    baseline_order: SchemeKind

    def power(self, method, scheme: str) -> float:
        if method == NO_IRS:
            return self.baseline[scheme]
        return self.results[(_method_key(method), scheme)].total_power

    def result(self, method, scheme: str) -> SolverResult:
        return self.results[(_method_key(method), scheme)]

    def order(self, method) -> SchemeKind:
        if method == NO_IRS:
            return self.baseline_order
        return self.results[(_method_key(method), "noma")].decoding_order


def _method_key(method) -> str:
    return method.value if isinstance(method, Method) else str(method)


def run_trial(
    scenario: Scenario,
    trial_index: int,
    methods=METHOD_ORDER,
    rates: TargetRates | None = None,
) -> ComparisonRecord:
    """Solve all schemes with all requested methods on one fading draw."""
    rates = scenario.rates if rates is None else rates
    realization = scenario.realization(trial_index)
    num_levels = scenario.irs.phase_levels
    results = {}
    for method in methods:
        for scheme in SCHEMES:
            results[(method.value, scheme)] = solve_scheme(
                realization,
                scheme,
                rates,
                scenario.noise,
                num_levels,
                method,
                scenario.solver,
                rps_seed=[scenario.seed, trial_index, _RPS_TAG[scheme]],
            )
    # no-IRS baseline: only the direct links carry signal
    g1 = abs(realization.hd1) ** 2
    g2 = abs(realization.hd2) ** 2
    p_noma, order = noma_power(g1, g2, rates, scenario.noise)
    terms = tdma_power_terms(g1, g2, rates, scenario.noise)
    baseline = {
        "noma": p_noma,
        "fdma": fdma_power(g1, g2, rates, scenario.noise),
        "tdma": terms[0] + terms[1],
    }
    return ComparisonRecord(
        trial_index=trial_index,
        rates=rates,
        realization=realization,
        results=results,
        baseline=baseline,
        baseline_order=order,
    )


@dataclass(frozen=True)
class SweepRow:
    """One CSV row: aggregate of one (sweep value, scheme, method) cell."""

    sweep_var: float
    scheme: str
    method: str
    mean_power_dbm: float
    std_dbm: float
    win_rate_vs_tdma: float
    gap_vs_bruteforce_db: float
    trials: int
    seed: int


def _mean_gap_db(powers, reference) -> float:
    gaps = []
    for p, ref in zip(powers, reference):
        if p == 0.0 and ref == 0.0:
            gaps.append(0.0)
        else:
            gaps.append(10.0 * math.log10(p / ref))
    return float(np.mean(gaps))


def _std_dbm(powers) -> float:
    if min(powers) == max(powers):
        return 0.0
    return float(np.std([watts_to_dbm(p) for p in powers]))


def aggregate_records(
    records, sweep_value: float, methods, seed: int
) -> list[SweepRow]:
    """Fold one sweep point's records into per-(scheme, method) rows.

    Linear powers are averaged, then reported in dBm; zero mean power
    renders as -inf downstream. The brute-force gap column is NaN when
    brute force was not among the methods.
    """
    rows = []
    method_keys = [m.value for m in methods] + [NO_IRS]
    have_brute = Method.BRUTE_FORCE in methods
    for scheme in SCHEMES:
        per_method = {
            key: [r.power(key, scheme) for r in records] for key in method_keys
        }
        tdma_ref = {key: [r.power(key, "tdma") for r in records] for key in method_keys}
        brute_ref = (
            [r.power(Method.BRUTE_FORCE, scheme) for r in records] if have_brute else None
        )
        for key in method_keys:
            powers = per_method[key]
            wins = np.mean([p < t for p, t in zip(powers, tdma_ref[key])])
            gap = _mean_gap_db(powers, brute_ref) if have_brute else float("nan")
            rows.append(
                SweepRow(
                    sweep_var=sweep_value,
                    scheme=scheme,
                    method=key,
                    mean_power_dbm=watts_to_dbm(float(np.mean(powers))),
                    std_dbm=_std_dbm(powers),
                    win_rate_vs_tdma=float(wins),
                    gap_vs_bruteforce_db=gap,
                    trials=len(records),
                    seed=seed,
                )
            )
    return rows


def run_sweep(scenario: Scenario, spec: SweepSpec, methods=METHOD_ORDER) -> list[SweepRow]:
    """All sweep points x trials; channels identical across sweep points."""
    methods = tuple(methods)
    rows = []
    for value in spec.grid:
        rates = spec.rates_at(value)
        records = [
            run_trial(scenario, t, methods, rates) for t in range(scenario.trials)
        ]
        rows.extend(aggregate_records(records, value, methods, scenario.seed))
    return rows


def write_sweep_csv(rows, path) -> None:
    """Write rows atomically; floats use shortest round-trip repr."""
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(
            ",".join(
                [
                    repr(row.sweep_var),
                    row.scheme,
                    row.method,
                    repr(row.mean_power_dbm),
                    repr(row.std_dbm),
                    repr(row.win_rate_vs_tdma),
                    repr(row.gap_vs_bruteforce_db),
                    str(row.trials),
                    str(row.seed),
                ]
            )
        )
    _atomic_write(path, "\n".join(lines) + "\n")


def read_sweep_csv(path) -> list[SweepRow]:
    """Inverse of write_sweep_csv (round-trips exactly)."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if tuple(header) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {header}")
        rows = []
        for line in fh:
            parts = line.strip().split(",")
            rows.append(
                SweepRow(
                    sweep_var=float(parts[0]),
                    scheme=parts[1],
                    method=parts[2],
                    mean_power_dbm=float(parts[3]),
                    std_dbm=float(parts[4]),
                    win_rate_vs_tdma=float(parts[5]),
                    gap_vs_bruteforce_db=float(parts[6]),
                    trials=int(parts[7]),
                    seed=int(parts[8]),
                )
            )
    return rows


def _atomic_write(path, text: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass(frozen=True)
class PropositionViolation:
    trial_index: int
    kind: str
    lhs: float
    rhs: float
    record: ComparisonRecord

    def __str__(self):
        r = self.record.realization
        return (
            f"trial {self.trial_index}: {self.kind} violated "
            f"({self.lhs!r} < {self.rhs!r}); rates={self.record.rates}, "
            f"q1={r.q1!r}, q2={r.q2!r}, hd1={r.hd1!r}, hd2={r.hd2!r}"
        )


@dataclass(frozen=True)
class EqualityCase:
    """Proposition-2 equality diagnostics for one trial where P_F == P_N."""

    trial_index: int
    same_theta: bool
    gains_equal: bool
    rates_equal: bool


@dataclass(frozen=True)
class PropositionReport:
    checked: int
    rel_tol: float
    violations: tuple
    equality_cases: tuple

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "rel_tol": self.rel_tol,
            "passed": self.passed,
            "violations": [str(v) for v in self.violations],
            "equality_cases": [
                {
                    "trial_index": c.trial_index,
                    "same_theta": c.same_theta,
                    "gains_equal": c.gains_equal,
                    "rates_equal": c.rates_equal,
                }
                for c in self.equality_cases
            ],
        }

    def render(self) -> str:
        lines = [
            f"proposition check over {self.checked} realizations "
            f"(rel_tol={self.rel_tol:g})",
            f"  fdma >= tdma and fdma >= noma: "
            f"{'PASS' if self.passed else 'FAIL'}",
        ]
        for v in self.violations:
            lines.append(f"  VIOLATION {v}")
        lines.append(f"  fdma == noma coincidences: {len(self.equality_cases)}")
        for c in self.equality_cases:
            lines.append(
                f"    trial {c.trial_index}: same_theta={c.same_theta} "
                f"gains_equal={c.gains_equal} rates_equal={c.rates_equal}"
            )
        return "\n".join(lines)


def validate_propositions(records, rel_tol: float = 1e-12) -> PropositionReport:
    """Check P_F >= P_T and P_F >= P_N on every record's brute-force powers.

    Records must carry brute-force results (the propositions concern exact
    minima). Trials where P_F and P_N coincide get the Proposition-2
    equality predicates evaluated and reported.
    """
    records = list(records)
    violations = []
    equality_cases = []
    for record in records:
        p_f = record.power(Method.BRUTE_FORCE, "fdma")
        p_t = record.power(Method.BRUTE_FORCE, "tdma")
        p_n = record.power(Method.BRUTE_FORCE, "noma")
        for kind, other in (("fdma>=tdma", p_t), ("fdma>=noma", p_n)):
            if other - p_f > rel_tol * max(abs(p_f), abs(other)):
                violations.append(
                    PropositionViolation(
                        trial_index=record.trial_index,
                        kind=kind,
                        lhs=p_f,
                        rhs=other,
                        record=record,
                    )
                )
        if abs(p_f - p_n) <= rel_tol * max(abs(p_f), abs(p_n)):
            theta_f = record.result(Method.BRUTE_FORCE, "fdma").theta
            theta_n = record.result(Method.BRUTE_FORCE, "noma").theta
            g1 = channel_gain(record.realization, theta_f, 1)
            g2 = channel_gain(record.realization, theta_f, 2)
            equality_cases.append(
                EqualityCase(
                    trial_index=record.trial_index,
                    same_theta=theta_f == theta_n,
                    gains_equal=abs(g1 - g2) <= rel_tol * max(g1, g2),
                    rates_equal=record.rates.gamma1 == record.rates.gamma2,
                )
            )
    return PropositionReport(
        checked=len(records),
        rel_tol=rel_tol,
        violations=tuple(violations),
        equality_cases=tuple(equality_cases),
    )


@dataclass(frozen=True)
class Summary:
    """Aggregate statistics over a batch of records."""

    trials: int
    mean_power: dict
    percentiles: dict
    noma_win_rate_vs_tdma: dict
    mean_gap_db: dict


def summarize(records, methods=METHOD_ORDER) -> Summary:
    """Mean/percentile powers, NOMA-vs-TDMA win rates, solver gaps in dB."""
    records = list(records)
    if not records:
        raise ValueError("no records to summarize")
    methods = tuple(methods)
    method_keys = [m.value for m in methods] + [NO_IRS]
    mean_power, percentiles, win, gaps = {}, {}, {}, {}
    have_brute = Method.BRUTE_FORCE in methods
    for scheme in SCHEMES:
        for key in method_keys:
            powers = [r.power(key, scheme) for r in records]
            mean_power[(key, scheme)] = float(np.mean(powers))
            percentiles[(key, scheme)] = tuple(
                float(v) for v in np.percentile(powers, (10.0, 50.0, 90.0))
            )
            if have_brute and key != Method.BRUTE_FORCE.value:
                gaps[(key, scheme)] = _mean_gap_db(
                    powers, [r.power(Method.BRUTE_FORCE, scheme) for r in records]
                )
    for key in method_keys:
        noma = [r.power(key, "noma") for r in records]
        tdma = [r.power(key, "tdma") for r in records]
        win[key] = float(np.mean([p < t for p, t in zip(noma, tdma)]))
    return Summary(
        trials=len(records),
        mean_power=mean_power,
        percentiles=percentiles,
        noma_win_rate_vs_tdma=win,
        mean_gap_db=gaps,
    )
