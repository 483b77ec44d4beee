"""TOML scenario configuration with explicit unit suffixes.

Quantities carrying units are written as strings ("-80 dBm", "30 dB",
"4 bps/Hz", "50 m"); bare numbers are taken in the internal unit (watts,
dB, bps/Hz, meters). Unknown sections or keys are rejected so typos fail
loudly, and every error names the offending field.
"""

import sys
from dataclasses import dataclass

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .channel import Geometry, IrsConfig, PathLossModel
from .experiments import Scenario, SweepSpec, build_case
from .schemes import NoisePower, TargetRates
from .solvers import Method, SolverConfig
from .units import dbm_to_watts


class ConfigError(ValueError):
    """Configuration document is invalid; message names the field."""


# field kind -> {unit suffix: conversion to internal unit}
_UNITS = {
    "power": {"W": lambda v: v, "dBm": dbm_to_watts},
    "loss": {"dB": lambda v: v},
    "rate": {"bps/Hz": lambda v: v},
    "length": {"m": lambda v: v},
}


def _quantity(raw, field: str, kind: str) -> float:
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)
    if isinstance(raw, str):
        parts = raw.strip().rsplit(None, 1)
        if len(parts) == 2:
            number, unit = parts
            if unit not in _UNITS[kind]:
                raise ConfigError(
                    f"{field}: unit {unit!r} not valid here "
                    f"(expected one of {sorted(_UNITS[kind])})"
                )
            try:
                return _UNITS[kind][unit](float(number))
            except ValueError:
                raise ConfigError(f"{field}: cannot parse number {number!r}") from None
        raise ConfigError(f"{field}: expected '<number> <unit>', got {raw!r}")
    raise ConfigError(f"{field}: expected a number or unit string, got {type(raw).__name__}")


def _integer(raw, field: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ConfigError(f"{field}: expected an integer, got {raw!r}")
    return raw


def _point(raw, field: str) -> tuple[float, float]:
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise ConfigError(f"{field}: expected [x, y] in meters")
    return (_quantity(raw[0], field, "length"), _quantity(raw[1], field, "length"))


def _check_keys(section: dict, allowed, context: str):
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigError(f"{context}: unknown key(s) {sorted(unknown)}")


@dataclass(frozen=True)
class ParsedConfig:
    scenario: Scenario
    sweep: SweepSpec
    methods: tuple[Method, ...]


def parse_config(text: str) -> ParsedConfig:
    """Parse a TOML document into a fully validated run configuration.

    Missing sections and keys fall back to the baseline setup: 100-element
    IRS in 5 sub-surfaces with 8 phase levels, case-1 geometry, -80 dBm
    noise, 100 trials, all three solver methods.
    """
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from None
    _check_keys(doc, ("irs", "geometry", "pathloss", "noise", "rates", "run",
                      "solver", "sweep"), "top level")

    irs_sec = doc.get("irs", {})
    _check_keys(irs_sec, ("num_elements", "num_subsurfaces", "phase_levels"), "[irs]")
    try:
        irs = IrsConfig(
            num_elements=_integer(irs_sec.get("num_elements", 100), "irs.num_elements"),
            num_subsurfaces=_integer(
                irs_sec.get("num_subsurfaces", 5), "irs.num_subsurfaces"
            ),
            phase_levels=_integer(irs_sec.get("phase_levels", 8), "irs.phase_levels"),
        )
    except ValueError as exc:
        raise ConfigError(f"[irs]: {exc}") from None

    geo_sec = doc.get("geometry", {})
    _check_keys(geo_sec, ("case", "ap", "irs", "user1", "user2"), "[geometry]")
    try:
        if "case" in geo_sec:
            if any(k in geo_sec for k in ("ap", "irs", "user1", "user2")):
                raise ConfigError(
                    "geometry.case: give either a case preset or explicit positions"
                )
            geometry = build_case(_integer(geo_sec["case"], "geometry.case"))
        elif geo_sec:
            for key in ("ap", "irs", "user1", "user2"):
                if key not in geo_sec:
                    raise ConfigError(f"geometry.{key}: missing required position")
            geometry = Geometry(
                ap=_point(geo_sec["ap"], "geometry.ap"),
                irs=_point(geo_sec["irs"], "geometry.irs"),
                user1=_point(geo_sec["user1"], "geometry.user1"),
                user2=_point(geo_sec["user2"], "geometry.user2"),
            )
        else:
            geometry = build_case(1)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[geometry]: {exc}") from None

    pl_sec = doc.get("pathloss", {})
    _check_keys(
        pl_sec,
        ("exponent_ap_user", "exponent_irs_user", "exponent_ap_irs", "reference_loss"),
        "[pathloss]",
    )
    try:
        pathloss = PathLossModel(
            exponent_ap_user=float(pl_sec.get("exponent_ap_user", 3.2)),
            exponent_irs_user=float(pl_sec.get("exponent_irs_user", 2.6)),
            exponent_ap_irs=float(pl_sec.get("exponent_ap_irs", 2.5)),
            reference_loss_db=_quantity(
                pl_sec.get("reference_loss", "30 dB"), "pathloss.reference_loss", "loss"
            ),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[pathloss]: {exc}") from None

    noise_sec = doc.get("noise", {})
    _check_keys(noise_sec, ("sigma2",), "[noise]")
    try:
        noise = NoisePower(
            sigma2=_quantity(noise_sec.get("sigma2", "-80 dBm"), "noise.sigma2", "power")
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[noise]: {exc}") from None

    rates_sec = doc.get("rates", {})
    _check_keys(rates_sec, ("user1", "user2"), "[rates]")
    try:
        rates = TargetRates(
            gamma1=_quantity(rates_sec.get("user1", "1 bps/Hz"), "rates.user1", "rate"),
            gamma2=_quantity(rates_sec.get("user2", "1 bps/Hz"), "rates.user2", "rate"),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[rates]: {exc}") from None

    solver_sec = doc.get("solver", {})
    _check_keys(
        solver_sec,
        ("la_steps", "ao_sweeps", "rps_ao_sweeps", "ao_rel_tol", "enumeration_budget"),
        "[solver]",
    )
    try:
        solver = SolverConfig(
            la_steps=_integer(solver_sec.get("la_steps", 8), "solver.la_steps"),
            ao_sweeps=_integer(solver_sec.get("ao_sweeps", 2), "solver.ao_sweeps"),
            rps_ao_sweeps=_integer(
                solver_sec.get("rps_ao_sweeps", 10), "solver.rps_ao_sweeps"
            ),
            ao_rel_tol=float(solver_sec.get("ao_rel_tol", 0.0)),
            enumeration_budget=_integer(
                solver_sec.get("enumeration_budget", 10_000_000),
                "solver.enumeration_budget",
            ),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[solver]: {exc}") from None

    run_sec = doc.get("run", {})
    _check_keys(run_sec, ("trials", "seed", "methods"), "[run]")
    methods = parse_methods(run_sec.get("methods", ["brute", "la-ao", "rps-ao"]))
    try:
        scenario = Scenario(
            irs=irs,
            geometry=geometry,
            pathloss=pathloss,
            noise=noise,
            rates=rates,
            trials=_integer(run_sec.get("trials", 100), "run.trials"),
            seed=_integer(run_sec.get("seed", 1), "run.seed"),
            solver=solver,
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[run]: {exc}") from None

    sweep_sec = doc.get("sweep", {})
    _check_keys(sweep_sec, ("variable", "grid", "sum_rate"), "[sweep]")
    try:
        sweep = SweepSpec(
            variable=sweep_sec.get("variable", "common-rate"),
            grid=tuple(
                _quantity(v, "sweep.grid", "rate")
                for v in sweep_sec.get("grid", (1.0, 2.0, 3.0, 4.0, 5.0))
            ),
            sum_rate=_quantity(
                sweep_sec.get("sum_rate", "4 bps/Hz"), "sweep.sum_rate", "rate"
            ),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[sweep]: {exc}") from None

    return ParsedConfig(scenario=scenario, sweep=sweep, methods=methods)


def parse_methods(raw) -> tuple[Method, ...]:
    if isinstance(raw, str):
        raw = [part.strip() for part in raw.split(",") if part.strip()]
    methods = []
    for item in raw:
        try:
            methods.append(Method(item))
        except ValueError:
            raise ConfigError(
                f"run.methods: unknown method {item!r} "
                f"(expected {[m.value for m in Method]})"
            ) from None
    if not methods:
        raise ConfigError("run.methods: at least one method required")
    return tuple(dict.fromkeys(methods))


def load_config(path) -> ParsedConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
