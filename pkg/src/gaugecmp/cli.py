"""Command-line driver: probability sweeps to CSV, plus the gauge audit.

Scenarios
---------
vacuum-excitation   spontaneous excitation probability over a (Z, T) grid
emission            spontaneous decay probability over a (Z, T) grid
coherent            vacuum part plus a coherent Gaussian pulse contribution
cutoff-sweep        saturated probabilities against a hard frequency cutoff
gauge-audit         plain-text pass/fail gauge-invariance report

Configs are INI files with [section] key = value pairs; all lengths of
time are given in units of the inverse transition gap and cutoffs in
units of the inverse orbit radius, as the unit-bearing key names state.
Identical configs produce byte-identical CSV output regardless of the
worker count: rows are computed independently and written in grid order,
and the echoed header leaves out the output path and worker count.
"""

from __future__ import annotations

import argparse
import configparser
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .gaugeaudit import dipole_residual_sweep, invariance_report
from .hydrogenic import AtomicState, orbit_radius
from .kernels import Coupling, SwitchingProfile
from .probability import (
    CoherentGaussianPulse,
    TransitionSpec,
    asymptotic_vacuum_probability,
    emission_result,
    transition_probability,
    vacuum_probability,
)
from .quadrature import NonConvergenceError

__all__ = [
    "ConfigError",
    "RunConfig",
    "figure_preset",
    "load_config",
    "main",
    "run",
]

SCENARIOS = (
    "vacuum-excitation",
    "emission",
    "coherent",
    "cutoff-sweep",
    "gauge-audit",
)

# conservative relative bound for rows computed from the saturated
# (infinite-time) integrals, which do not report a quadrature estimate
_ASYMPTOTIC_ERROR_BOUND = 1e-10

_CSV_COLUMNS = (
    "P_dip", "P_min", "P0", "P_phi",
    "difference", "relative_difference", "quadrature_error", "status",
)


class ConfigError(ValueError):
    """A configuration problem, attributed to a field and (optionally) a line."""

    def __init__(self, field: str, message: str, line: int | None = None) -> None:
        self.field = field
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{field}: {message}")


_STATE_LABEL = re.compile(r"^(\d+)([spdfgh])([+-]?\d+)?$")
_L_LETTERS = {"s": 0, "p": 1, "d": 2, "f": 3, "g": 4, "h": 5}


def _parse_state_label(label: str, field: str) -> tuple[int, int, int]:
    match = _STATE_LABEL.match(label.strip().lower())
    if match is None:
        raise ConfigError(field, f"cannot parse state label {label!r} "
                          "(expected forms like 1s, 2p0, 2p+1, 3d-2)")
    n = int(match.group(1))
    l = _L_LETTERS[match.group(2)]
    m = int(match.group(3)) if match.group(3) else 0
    if not (n >= 1 and l < n and abs(m) <= l):
        raise ConfigError(field, f"state label {label!r} violates n > l >= |m|")
    return n, l, m


@dataclass(frozen=True)
class RunConfig:
    """One fully specified run; every field is echoed into the output."""

    scenario: str = "vacuum-excitation"
    initial: str = "1s"
    final: str = "2p0"
    mu_e: float = 1.0
    Z_values: tuple[float, ...] = (1.0,)
    T_values_in_inverse_Omega: tuple[float, ...] = (10.0,)
    Lambda_values_in_Z_over_a0: tuple[float, ...] = ()
    pulse_center_in_Omega: float = 1.0
    pulse_direction: tuple[float, float, float] = (1.0, 0.0, 0.0)
    pulse_sigma_in_Omega: tuple[float, float, float] = (0.01, 0.01, 0.01)
    pulse_polarization_index: int = 1
    pulse_amplitude_scale: float = 10.0 ** -0.5
    pulse_launch_time_in_inverse_Omega: float = 0.0
    u_max: float = 200.0
    audit_seed: int = 20260815
    audit_random_draws: int = 20
    audit_tolerance: float = 1e-10
    out: str | None = None
    workers: int = 1

    def states(self, Z: float) -> tuple[AtomicState, AtomicState]:
        n0, l0, m0 = _parse_state_label(self.initial, "[transition] initial")
        n1, l1, m1 = _parse_state_label(self.final, "[transition] final")
        return (AtomicState(n0, l0, m0, Z, self.mu_e),
                AtomicState(n1, l1, m1, Z, self.mu_e))

    def gap(self, Z: float) -> float:
        initial, final = self.states(Z)
        return final.energy - initial.energy

    def validate(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ConfigError("[run] scenario",
                              f"unknown scenario {self.scenario!r}; "
                              f"choose from {', '.join(SCENARIOS)}")
        if self.mu_e <= 0.0:
            raise ConfigError("[transition] mu_e", "must be positive")
        if not self.Z_values or any(Z <= 0.0 for Z in self.Z_values):
            raise ConfigError("[grid] Z_values", "need at least one positive value")
        if self.workers < 1:
            raise ConfigError("[run] workers", "must be at least 1")
        if self.u_max <= 0.0:
            raise ConfigError("[numerics] u_max", "must be positive")
        if self.initial == self.final:
            raise ConfigError("[transition] final", "must differ from initial")
        gap = self.gap(1.0)  # sign is Z-independent
        if self.scenario == "gauge-audit":
            if self.audit_random_draws < 1:
                raise ConfigError("[numerics] audit_random_draws", "must be >= 1")
            if self.audit_tolerance <= 0.0:
                raise ConfigError("[numerics] audit_tolerance", "must be positive")
            return
        if not self.T_values_in_inverse_Omega:
            raise ConfigError("[grid] T_values_in_inverse_Omega",
                              "need at least one value")
        n0, l0, _ = _parse_state_label(self.initial, "[transition] initial")
        n1, l1, _ = _parse_state_label(self.final, "[transition] final")
        closed_form_pair = tuple(sorted(((n0, l0), (n1, l1)))) == ((1, 0), (2, 1))
        needs_closed_form = (
            self.scenario in ("emission", "cutoff-sweep", "coherent")
            or any(math.isinf(v) for v in self.T_values_in_inverse_Omega))
        if needs_closed_form and not closed_form_pair:
            raise ConfigError("[transition] initial/final",
                              "this scenario (or an infinite T) relies on the "
                              "closed-form spectral kernels, which cover the "
                              "1s <-> 2p pair only")
        for value in self.T_values_in_inverse_Omega:
            if not value > 0.0:
                raise ConfigError("[grid] T_values_in_inverse_Omega",
                                  "values must be positive (inf allowed for "
                                  "vacuum-excitation and cutoff-sweep)")
            if math.isinf(value) and self.scenario in ("emission", "coherent"):
                raise ConfigError("[grid] T_values_in_inverse_Omega",
                                  f"inf is not meaningful for {self.scenario}")
        if self.scenario in ("vacuum-excitation", "cutoff-sweep") and gap <= 0.0:
            raise ConfigError("[transition] final",
                              "this scenario needs an upward transition "
                              "(final above initial)")
        if self.scenario == "emission" and gap >= 0.0:
            raise ConfigError("[transition] final",
                              "emission needs a downward transition "
                              "(final below initial)")
        if self.scenario == "cutoff-sweep":
            if not self.Lambda_values_in_Z_over_a0:
                raise ConfigError("[grid] Lambda_values_in_Z_over_a0",
                                  "need at least one value")
            if any(v <= 0.0 for v in self.Lambda_values_in_Z_over_a0):
                raise ConfigError("[grid] Lambda_values_in_Z_over_a0",
                                  "values must be positive")
            if len(self.T_values_in_inverse_Omega) != 1:
                raise ConfigError("[grid] T_values_in_inverse_Omega",
                                  "cutoff-sweep uses a single T value")
        if self.scenario == "coherent":
            if self.pulse_polarization_index not in (1, 2):
                raise ConfigError("[pulse] polarization_index", "must be 1 or 2")
            if self.pulse_amplitude_scale < 0.0:
                raise ConfigError("[pulse] amplitude_scale", "must be nonnegative")
            if any(s <= 0.0 for s in self.pulse_sigma_in_Omega):
                raise ConfigError("[pulse] sigma_in_Omega", "must be positive")
            if all(c == 0.0 for c in self.pulse_direction):
                raise ConfigError("[pulse] direction", "must be a nonzero vector")
            if self.pulse_center_in_Omega <= 6.0 * max(self.pulse_sigma_in_Omega):
                raise ConfigError("[pulse] center_in_Omega",
                                  "must exceed 6x the largest sigma so the "
                                  "momentum box stays at positive frequency")


# ----------------------------------------------------------------------
# INI loading
# ----------------------------------------------------------------------

def _float_value(raw: str) -> float:
    value = float(raw)
    if math.isnan(value):
        raise ValueError("nan is not a valid value")
    return value


def _float_list(raw: str) -> tuple[float, ...]:
    items = [part.strip() for part in raw.split(",") if part.strip()]
    if not items:
        raise ValueError("expected a comma-separated list of numbers")
    return tuple(_float_value(part) for part in items)


def _vector3(raw: str) -> tuple[float, float, float]:
    values = _float_list(raw)
    if len(values) != 3:
        raise ValueError("expected exactly three comma-separated numbers")
    return values


def _sigma3(raw: str) -> tuple[float, float, float]:
    values = _float_list(raw)
    if len(values) == 1:
        return (values[0],) * 3
    if len(values) == 3:
        return values
    raise ValueError("expected one value (isotropic) or three values")


_SCHEMA = {
    ("run", "scenario"): ("scenario", str.strip),
    ("run", "out"): ("out", str.strip),
    ("run", "workers"): ("workers", int),
    ("transition", "initial"): ("initial", str.strip),
    ("transition", "final"): ("final", str.strip),
    ("transition", "mu_e"): ("mu_e", _float_value),
    ("grid", "z_values"): ("Z_values", _float_list),
    ("grid", "t_values_in_inverse_omega"): ("T_values_in_inverse_Omega", _float_list),
    ("grid", "lambda_values_in_z_over_a0"): ("Lambda_values_in_Z_over_a0", _float_list),
    ("pulse", "center_in_omega"): ("pulse_center_in_Omega", _float_value),
    ("pulse", "direction"): ("pulse_direction", _vector3),
    ("pulse", "sigma_in_omega"): ("pulse_sigma_in_Omega", _sigma3),
    ("pulse", "polarization_index"): ("pulse_polarization_index", int),
    ("pulse", "amplitude_scale"): ("pulse_amplitude_scale", _float_value),
    ("pulse", "launch_time_in_inverse_omega"):
        ("pulse_launch_time_in_inverse_Omega", _float_value),
    ("numerics", "u_max"): ("u_max", _float_value),
    ("numerics", "audit_seed"): ("audit_seed", int),
    ("numerics", "audit_random_draws"): ("audit_random_draws", int),
    ("numerics", "audit_tolerance"): ("audit_tolerance", _float_value),
}

_T_RANGE_KEYS = ("t_min_in_inverse_omega", "t_max_in_inverse_omega", "t_count")
_KNOWN_SECTIONS = {"run", "transition", "grid", "pulse", "numerics"}


def _find_line(text: str, section: str, key: str | None = None) -> int | None:
    current = None
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        header = re.match(r"^\[(.+)\]$", stripped)
        if header:
            current = header.group(1).strip().lower()
            if key is None and current == section:
                return number
            continue
        if key is not None and current == section:
            if re.match(rf"^{re.escape(key)}\s*[=:]", stripped, re.IGNORECASE):
                return number
    return None


def load_config(path: str, base: RunConfig | None = None,
                expected_scenario: str | None = None) -> RunConfig:
    """Parse an INI run configuration, layered over ``base`` (or defaults)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from exc
    parser = configparser.ConfigParser(
        inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError("config", f"invalid INI syntax: {exc}") from exc

    updates: dict[str, object] = {}
    t_range: dict[str, float] = {}
    for section in parser.sections():
        section_key = section.strip().lower()
        if section_key not in _KNOWN_SECTIONS:
            raise ConfigError(f"[{section}]", "unknown section",
                              line=_find_line(text, section_key))
        for key, raw in parser.items(section):
            field_name = f"[{section}] {key}"
            line = _find_line(text, section_key, key)
            if section_key == "grid" and key in _T_RANGE_KEYS:
                try:
                    t_range[key] = _float_value(raw)
                except ValueError as exc:
                    raise ConfigError(field_name, f"invalid value {raw!r}: {exc}",
                                      line=line) from exc
                continue
            spec = _SCHEMA.get((section_key, key))
            if spec is None:
                raise ConfigError(field_name, "unknown key", line=line)
            attribute, convert = spec
            try:
                updates[attribute] = convert(raw)
            except ValueError as exc:
                raise ConfigError(field_name, f"invalid value {raw!r}: {exc}",
                                  line=line) from exc

    if t_range:
        missing = [k for k in _T_RANGE_KEYS if k not in t_range]
        if missing:
            raise ConfigError("[grid] " + ", ".join(missing),
                              "T range needs t_min/t_max/t_count together",
                              line=_find_line(text, "grid"))
        if "T_values_in_inverse_Omega" in updates:
            raise ConfigError("[grid] t_values_in_inverse_omega",
                              "give either an explicit T list or a T range, "
                              "not both", line=_find_line(text, "grid"))
        count = t_range["t_count"]
        if count != int(count) or int(count) < 1:
            raise ConfigError("[grid] t_count", "must be a positive integer",
                              line=_find_line(text, "grid", "t_count"))
        updates["T_values_in_inverse_Omega"] = tuple(
            float(v) for v in np.linspace(
                t_range["t_min_in_inverse_omega"],
                t_range["t_max_in_inverse_omega"], int(count))
        )

    if expected_scenario is not None:
        declared = updates.get("scenario")
        if declared is not None and declared != expected_scenario:
            raise ConfigError("[run] scenario",
                              f"config declares {declared!r} but the command "
                              f"line asked for {expected_scenario!r}",
                              line=_find_line(text, "run", "scenario"))
        updates.setdefault("scenario", expected_scenario)

    return replace(base if base is not None else RunConfig(), **updates)


# ----------------------------------------------------------------------
# presets
# ----------------------------------------------------------------------

def figure_preset(name: str) -> RunConfig:
    """Ready-made configurations for the standard result figures."""
    integer_Z = tuple(float(z) for z in range(1, 11))

    def t_grid(lo: float, hi: float, count: int) -> tuple[float, ...]:
        return tuple(float(v) for v in np.linspace(lo, hi, count))

    presets = {
        # saturation of the vacuum excitation probability in time
        "fig1": RunConfig(scenario="vacuum-excitation",
                          T_values_in_inverse_Omega=t_grid(0.5, 40.0, 80)),
        # saturated vacuum probabilities against the nuclear charge
        "fig2": RunConfig(scenario="vacuum-excitation", Z_values=integer_Z,
                          T_values_in_inverse_Omega=(math.inf,)),
        # emission probability growth over the direct-quadrature window
        "fig5": RunConfig(scenario="emission", initial="2p0", final="1s",
                          T_values_in_inverse_Omega=t_grid(10.0, 600.0, 60)),
        # long-time emission against the nuclear charge
        "fig6": RunConfig(scenario="emission", initial="2p0", final="1s",
                          Z_values=integer_Z,
                          T_values_in_inverse_Omega=(1.2e7,)),
        # coherent pulse arriving mid-window on top of the vacuum part
        "fig7": RunConfig(scenario="coherent",
                          T_values_in_inverse_Omega=t_grid(650.0, 1600.0, 20),
                          pulse_launch_time_in_inverse_Omega=600.0),
        # the same pulse response against the nuclear charge
        "fig8": RunConfig(scenario="coherent", Z_values=integer_Z,
                          T_values_in_inverse_Omega=(1600.0,),
                          pulse_launch_time_in_inverse_Omega=600.0),
        # saturated probabilities against a hard frequency cutoff
        "fig9": RunConfig(scenario="cutoff-sweep",
                          T_values_in_inverse_Omega=(math.inf,),
                          Lambda_values_in_Z_over_a0=(
                              0.01, 0.02, 0.05, 0.1, 0.2, 0.5,
                              1.0, 2.0, 5.0, 10.0)),
    }
    try:
        return presets[name]
    except KeyError:
        raise ConfigError(
            "preset", f"unknown preset {name!r}; choose from "
            + ", ".join(sorted(presets))) from None


# ----------------------------------------------------------------------
# row evaluation
# ----------------------------------------------------------------------

def _pulse_for(config: RunConfig, gap_abs: float) -> CoherentGaussianPulse:
    direction = np.asarray(config.pulse_direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    k0 = tuple(float(c) for c in config.pulse_center_in_Omega * gap_abs * direction)
    sigma = tuple(s * gap_abs for s in config.pulse_sigma_in_Omega)
    return CoherentGaussianPulse(
        k0=k0, sigma=sigma, lambda0=config.pulse_polarization_index,
        Tstar=config.pulse_launch_time_in_inverse_Omega / gap_abs,
        amplitude_scale=config.pulse_amplitude_scale)


def _row_values(config: RunConfig, Z: float,
                sweep: float) -> tuple[float, float, float, float, float]:
    """(P_dip, P_min, P0, P_phi, quadrature_error) at one grid point."""
    initial, final = config.states(Z)
    gap_abs = abs(config.gap(Z))
    per_coupling: dict[Coupling, tuple[float, float, float]] = {}

    if config.scenario == "cutoff-sweep":
        T_units = config.T_values_in_inverse_Omega[0]
        cutoff = sweep / orbit_radius(Z, config.mu_e)
        asymptotic = math.isinf(T_units)
        T_phys = 1.0 if asymptotic else T_units / gap_abs
        switching = SwitchingProfile(T=T_phys, Lambda=cutoff)
        for coupling in (Coupling.DIPOLE, Coupling.MINIMAL):
            spec = TransitionSpec(initial, final, coupling, switching)
            if asymptotic:
                total = asymptotic_vacuum_probability(spec, config.u_max)
                per_coupling[coupling] = (
                    total, total, _ASYMPTOTIC_ERROR_BOUND * total)
            else:
                result = vacuum_probability(spec, T_phys, config.u_max)
                per_coupling[coupling] = (result.total, result.P0, result.quad_error)
        pphi = 0.0
    else:
        T_phys = math.inf if math.isinf(sweep) else sweep / gap_abs
        for coupling in (Coupling.DIPOLE, Coupling.MINIMAL):
            spec = TransitionSpec(initial, final, coupling)
            if config.scenario == "vacuum-excitation":
                if math.isinf(T_phys):
                    total = asymptotic_vacuum_probability(spec, config.u_max)
                    per_coupling[coupling] = (
                        total, total, _ASYMPTOTIC_ERROR_BOUND * total)
                else:
                    result = vacuum_probability(spec, T_phys, config.u_max)
                    per_coupling[coupling] = (
                        result.total, result.P0, result.quad_error)
            elif config.scenario == "emission":
                result = emission_result(spec, T_phys, "auto", config.u_max)
                per_coupling[coupling] = (result.total, result.P0, result.quad_error)
            else:  # coherent
                pulse = _pulse_for(config, gap_abs)
                result = transition_probability(spec, pulse, T_phys)
                per_coupling[coupling] = (result.total, result.P0, result.quad_error)
        pphi = per_coupling[Coupling.MINIMAL][0] - per_coupling[Coupling.MINIMAL][1]

    p_dip = per_coupling[Coupling.DIPOLE][0]
    p_min = per_coupling[Coupling.MINIMAL][0]
    p0 = per_coupling[Coupling.MINIMAL][1]
    error = per_coupling[Coupling.DIPOLE][2] + per_coupling[Coupling.MINIMAL][2]
    return p_dip, p_min, p0, pphi, error


def _compute_row(task: tuple[RunConfig, float, float]) -> tuple:
    config, Z, sweep = task
    try:
        p_dip, p_min, p0, pphi, error = _row_values(config, Z, sweep)
        status = "ok"
    except NonConvergenceError as exc:
        p_dip = p_min = p0 = pphi = error = float("nan")
        status = f"failed:{type(exc).__name__}"
    difference = p_min - p_dip
    relative = difference / p_min if p_min > 0.0 else float("nan")
    return (Z, sweep, p_dip, p_min, p0, pphi, difference, relative, error, status)


def _row_tasks(config: RunConfig) -> list[tuple[RunConfig, float, float]]:
    sweep_values = (config.Lambda_values_in_Z_over_a0
                    if config.scenario == "cutoff-sweep"
                    else config.T_values_in_inverse_Omega)
    return [(config, Z, value) for Z in config.Z_values for value in sweep_values]


# ----------------------------------------------------------------------
# output assembly
# ----------------------------------------------------------------------

def _echo_lines(config: RunConfig) -> list[str]:
    lines = ["# config:"]
    for field in fields(RunConfig):
        if field.name in ("out", "workers"):
            continue  # not part of the result identity
        value = getattr(config, field.name)
        if isinstance(value, tuple):
            value = ", ".join(repr(v) for v in value)
        lines.append(f"#   {field.name} = {value}")
    return lines


_UNIT_LINES = [
    "# units:",
    "#   frequencies and energies: natural units (hbar = c = eps0 = 1, "
    "electron mass = 1)",
    "#   T columns and grids: multiples of 1/|E_final - E_initial| at the "
    "row's Z",
    "#   Lambda columns and grids: multiples of the inverse orbit radius "
    "mu_e * Z / a0",
    "#   probabilities: dimensionless; difference = P_min - P_dip; "
    "relative_difference = difference / P_min",
    "#   quadrature_error: upper bound on the numerical error of each "
    "probability column",
]


def _format_float(value: float) -> str:
    return f"{value:.17e}"


def _csv_text(config: RunConfig, rows: Sequence[tuple]) -> str:
    sweep_name = ("Lambda_in_Z_over_a0" if config.scenario == "cutoff-sweep"
                  else "T_in_inverse_Omega")
    lines = [f"# gaugecmp {config.scenario} sweep"]
    lines += _echo_lines(config)
    lines += _UNIT_LINES
    lines.append(",".join(("Z", sweep_name) + _CSV_COLUMNS))
    for row in rows:
        *values, status = row
        lines.append(",".join([_format_float(v) for v in values] + [status]))
    return "\n".join(lines) + "\n"


def _audit_text(config: RunConfig) -> tuple[str, bool]:
    report = invariance_report(
        n_random=config.audit_random_draws,
        seed=config.audit_seed,
        tolerance=config.audit_tolerance,
        Z=config.Z_values[0],
        mu_e=config.mu_e,
    )
    sweep = dipole_residual_sweep(Z=config.Z_values[0], mu_e=config.mu_e)
    slope_ok = sweep.slope > 0.0
    intercept_ok = abs(sweep.intercept) < 1e-10
    lines = ["# gaugecmp gauge-audit report"]
    lines += _echo_lines(config)
    lines.append(report.summary())
    lines.append("long-wavelength residual fit (residual vs |k| * orbit radius):")
    for lam, residual in zip(sweep.wavelength_parameters, sweep.residuals):
        lines.append(f"  retardation {lam:.3e} -> residual {residual:.6e}")
    lines.append(f"{'PASS' if slope_ok else 'FAIL'} residual-slope: "
                 f"{sweep.slope:.6e} (require > 0)")
    lines.append(f"{'PASS' if intercept_ok else 'FAIL'} residual-intercept: "
                 f"{sweep.intercept:.3e} (require < 1e-10 in magnitude)")
    passed = report.passed and slope_ok and intercept_ok
    lines.append("gauge audit " + ("PASSED" if passed else "FAILED"))
    return "\n".join(lines) + "\n", passed


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def run(config: RunConfig) -> int:
    """Execute one configured run; returns the process exit code."""
    config.validate()
    if config.scenario == "gauge-audit":
        text, passed = _audit_text(config)
        _write_output(text, config.out)
        return 0 if passed else 2
    tasks = _row_tasks(config)
    if config.workers == 1:
        rows = [_compute_row(task) for task in tasks]
    else:
        chunk = max(1, len(tasks) // (4 * config.workers))
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_compute_row, tasks, chunksize=chunk))
    _write_output(_csv_text(config, rows), config.out)
    return 2 if any(row[-1] != "ok" for row in rows) else 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="gaugecmp",
        description="Minimal- versus dipole-coupling probability sweeps and "
                    "the numerical gauge audit.")
    parser.add_argument("scenario", choices=SCENARIOS)
    parser.add_argument("--config", help="INI run configuration file")
    parser.add_argument("--preset",
                        help="figure preset (fig1, fig2, fig5, fig6, fig7, "
                             "fig8, fig9) used as the configuration base")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--workers", type=int, help="parallel worker count")
    args = parser.parse_args(argv)
    try:
        base = figure_preset(args.preset) if args.preset else None
        if base is not None and base.scenario != args.scenario:
            raise ConfigError(
                "preset", f"{args.preset} runs scenario {base.scenario!r}, "
                f"but the command line asked for {args.scenario!r}")
        if args.config:
            config = load_config(args.config, base=base,
                                 expected_scenario=args.scenario)
        else:
            config = base if base is not None else RunConfig(scenario=args.scenario)
        if args.out is not None:
            config = replace(config, out=args.out)
        if args.workers is not None:
            config = replace(config, workers=args.workers)
        config.validate()
    except ConfigError as exc:
        print(f"gaugecmp: config error: {exc}", file=sys.stderr)
        return 1
    try:
        return run(config)
    except Exception as exc:  # pragma: no cover - defensive
        print(f"gaugecmp: run failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
