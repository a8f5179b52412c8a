"""Configuration-driven command line front end.

Scenarios are JSON files; every key can also be overridden on the
command line with ``--dotted.key value`` pairs.  Subcommands:

- ``modes``   eigenmode directions, eigenvalues, cavity frequencies
- ``params``  two-level and bath parameters derived from the scenario
- ``evolve``  master-equation time series written as CSV
- ``steady``  steady-state density matrix
- ``shift``   principal-value bath frequency shift
- ``oracle``  discretized-bath decay vs the Lindblad solver at T = 0
- ``sweep``   one list-valued config key swept into a summary CSV

The summary document is JSON with floats rendered at 17 significant
digits; CSV output is UTF-8 with LF line endings and is byte-identical
across reruns of the same configuration.  Exit codes: 0 success, 1
config error, 2 numerical/guard error, 3 threshold failure.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
import time
import warnings

import numpy as np

from . import backend
from .bath_oracle import discretize_bath, evolve_single_excitation, jc_rabi_check
from .cavity_modes import CavityConfig, cavity_frequencies, check_orthonormality, solve_eigenmodes
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    StabilityGuardError,
    ThresholdError,
    TwistCavError,
)
from .hamiltonian import two_level_params
from .lindblad import (
    BathParams,
    CouplingSpectrum,
    DensityMatrix2,
    DynamicsParams,
    dynamics_from_bath,
    evolve,
    frequency_shift_result,
    steady_state,
)
from .quadrature import QuadratureSpec
from .tensor_optics import (
    UniaxialMedium,
    permittivity_lab_exact,
    permittivity_lab_first_order,
)

__all__ = ["main", "load_config", "apply_overrides"]

EVOLVE_CSV_HEADER = "t,rho_oo,rho_ee,re_rho_oe,im_rho_oe,abs_rho_oe"

#: schema of allowed configuration keys; leaves map to expected types
_SCHEMA = {
    "medium": {"n_o": float, "n_e": float, "strict": bool},
    "cavity": {"length_cm": float, "mode_index": int},
    "temperature_kelvin": float,
    "beta_delta_omega": float,
    "mechanical": {"omega_0": float, "resonant": bool},
    "spectrum": {
        "kind": str,
        "value": float,
        "q_factor": float,
        "kappa": float,
        "omega_min": float,
        "omega_max": float,
        "gamma_override": float,
    },
    "initial_state": None,  # "diagonal" or component dict, checked separately
    "time_grid": {"t_final": float, "dt": float, "stride": int},
    "twist": {"theta_0": float},
    "include_delta_shift": bool,
    "rwa": bool,
    "quadrature": {"eta": float, "nodes": int, "rel_tol": float, "max_refinements": int},
    "oracle": {
        "modes": int,
        "gamma": float,
        "delta_omega": float,
        "omega_max": float,
        "value": float,
        "t_max_gamma": float,
        "samples": int,
        "threshold": float,
    },
}

_INITIAL_STATE_KEYS = {"rho_oo", "rho_oe_re", "rho_oe_im"}


def _format_float(x: float) -> str:
    return f"{x:.17g}"


def _render(obj, indent: int = 0) -> str:
    """JSON rendering with floats at 17 significant digits."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {_render(v, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ",\n".join(f"{pad}  {_render(v, indent + 1)}" for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, complex):
        return _render([obj.real, obj.imag], indent)
    return json.dumps(str(obj))


def _validate(cfg, schema, path=""):
    if not isinstance(cfg, dict):
        raise ConfigError(f"expected an object at {path or 'top level'}, got {type(cfg).__name__}")
    for key, value in cfg.items():
        where = f"{path}.{key}" if path else key
        if key not in schema:
            raise ConfigError(f"unknown config key {where!r}")
        rule = schema[key]
        if rule is None:
            continue
        if isinstance(rule, dict):
            _validate(value, rule, where)
        elif isinstance(value, list):
            for i, item in enumerate(value):
                _check_leaf(item, rule, f"{where}[{i}]")
        else:
            _check_leaf(value, rule, where)


def _check_leaf(value, expected, where):
    if expected is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"config key {where!r} must be a number, got {value!r}")
    elif expected is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"config key {where!r} must be an integer, got {value!r}")
    elif expected is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"config key {where!r} must be a boolean, got {value!r}")
    elif expected is str:
        if not isinstance(value, str):
            raise ConfigError(f"config key {where!r} must be a string, got {value!r}")


def _validate_initial_state(cfg):
    state = cfg.get("initial_state", "diagonal")
    if isinstance(state, str):
        if state != "diagonal":
            raise ConfigError(
                f"initial_state preset {state!r} is not known; use 'diagonal' "
                "or give components"
            )
        return
    if not isinstance(state, dict) or not set(state) <= _INITIAL_STATE_KEYS:
        raise ConfigError(
            "initial_state must be 'diagonal' or an object with keys "
            f"{sorted(_INITIAL_STATE_KEYS)}"
        )
    for key, value in state.items():
        _check_leaf(value, float, f"initial_state.{key}")


def load_config(path: str) -> dict:
    """Read and validate a scenario file."""
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config file {path} is not valid JSON (line {exc.lineno}, "
            f"column {exc.colno}): {exc.msg}"
        ) from exc
    _validate(cfg, _SCHEMA)
    _validate_initial_state(cfg)
    return cfg


def _parse_override_value(raw: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def apply_overrides(cfg: dict, pairs: list[str]) -> dict:
    """Apply --dotted.key value pairs on top of a config dict."""
    if len(pairs) % 2 != 0:
        raise ConfigError(f"dangling override {pairs[-1]!r} without a value")
    for flag, raw in zip(pairs[::2], pairs[1::2]):
        if not flag.startswith("--"):
            raise ConfigError(f"expected an override flag, got {flag!r}")
        node = cfg
        parts = flag[2:].split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"override {flag!r} descends into a non-object key")
        node[parts[-1]] = _parse_override_value(raw)
    _validate(cfg, _SCHEMA)
    _validate_initial_state(cfg)
    return cfg


def _require(cfg: dict, key: str):
    node = cfg
    for part in key.split("."):
        if not isinstance(node, dict) or part not in node:
            raise ConfigError(f"missing required config key {key!r}")
        node = node[part]
    return node


def _build_medium(cfg) -> UniaxialMedium:
    n_o = _require(cfg, "medium.n_o")
    n_e = _require(cfg, "medium.n_e")
    strict = cfg["medium"].get("strict", True)
    return UniaxialMedium.from_indices(n_o, n_e, strict=strict)


def _build_cavity(cfg) -> CavityConfig:
    length = _require(cfg, "cavity.length_cm")
    mode_index = cfg.get("cavity", {}).get("mode_index", 1)
    return CavityConfig(length=length, medium=_build_medium(cfg), mode_index=mode_index)


def _mechanical_frequency(cfg, delta_omega: float) -> float:
    mech = cfg.get("mechanical", {"resonant": True})
    if "omega_0" in mech and mech.get("resonant"):
        raise ConfigError("mechanical: give omega_0 or resonant, not both")
    if "omega_0" in mech:
        return float(mech["omega_0"])
    if mech.get("resonant", True):
        return delta_omega
    raise ConfigError("mechanical: set omega_0 or resonant = true")


def _build_spectrum(cfg, coupling: float, omega_0: float) -> tuple[CouplingSpectrum, float | None]:
    """Spectrum plus optional gamma override from the config."""
    spec_cfg = cfg.get("spectrum", {})
    gamma_override = spec_cfg.get("gamma_override")
    kind = spec_cfg.get("kind", "lorentzian")
    if kind == "lorentzian":
        if "q_factor" in spec_cfg and "kappa" in spec_cfg:
            raise ConfigError("spectrum: give q_factor or kappa, not both")
        quality = None if "kappa" in spec_cfg else spec_cfg.get("q_factor", 1000.0)
        spectrum = CouplingSpectrum.lorentzian(
            coupling=coupling,
            center=omega_0,
            width=spec_cfg.get("kappa"),
            quality=quality,
            omega_max=spec_cfg.get("omega_max"),
            omega_min=spec_cfg.get("omega_min"),
        )
    elif kind == "flat":
        omega_max = spec_cfg.get("omega_max", 2.0 * omega_0)
        omega_min = spec_cfg.get("omega_min", 0.0)
        if "value" in spec_cfg:
            spectrum = CouplingSpectrum.flat(spec_cfg["value"], omega_max, omega_min)
        else:
            spectrum = CouplingSpectrum.flat_from_coupling(coupling, omega_max, omega_min)
    else:
        raise ConfigError(f"spectrum.kind must be 'flat' or 'lorentzian', got {kind!r}")
    return spectrum, gamma_override


def _build_bath(cfg, spectrum: CouplingSpectrum, delta_omega: float) -> BathParams:
    has_t = "temperature_kelvin" in cfg
    has_beta = "beta_delta_omega" in cfg
    if has_t == has_beta:
        raise ConfigError("give exactly one of temperature_kelvin or beta_delta_omega")
    if has_t:
        return BathParams(spectrum=spectrum, temperature=float(cfg["temperature_kelvin"]))
    beta = float(cfg["beta_delta_omega"])
    if beta <= 0:
        raise ConfigError(f"beta_delta_omega must be positive, got {beta}")
    return BathParams(spectrum=spectrum, beta_freq=beta / delta_omega)


def _quadrature_spec(cfg) -> QuadratureSpec | None:
    quad = cfg.get("quadrature")
    if quad is None:
        return None
    return QuadratureSpec(
        eta=quad.get("eta"),
        nodes=quad.get("nodes", 24),
        rel_tol=quad.get("rel_tol", 1e-6),
        max_refinements=quad.get("max_refinements", 48),
    )


def _initial_state(cfg) -> DensityMatrix2:
    state = cfg.get("initial_state", "diagonal")
    if state == "diagonal":
        return DensityMatrix2.diagonal_superposition()
    rho_oe = complex(state.get("rho_oe_re", 0.0), state.get("rho_oe_im", 0.0))
    return DensityMatrix2.from_components(state.get("rho_oo", 0.5), rho_oe)


class _Scenario:
    """Derived quantities shared by the physical-cavity commands."""

    def __init__(self, cfg: dict):
        self.cfg = cfg
        self.cavity = _build_cavity(cfg)
        self.frequencies = cavity_frequencies(self.cavity)
        self.delta_omega = self.frequencies.delta_omega
        self.omega_0 = _mechanical_frequency(cfg, self.delta_omega)
        self.params = two_level_params(self.cavity, self.omega_0)
        self.spectrum, self.gamma_override = _build_spectrum(
            cfg, self.params.coupling, self.omega_0
        )
        self.bath = _build_bath(cfg, self.spectrum, self.delta_omega)

    def dynamics(self) -> DynamicsParams:
        return dynamics_from_bath(
            self.bath,
            self.delta_omega,
            include_shift=self.cfg.get("include_delta_shift", False),
            quadrature=_quadrature_spec(self.cfg),
            gamma_override=self.gamma_override,
        )

    def base_summary(self, dyn: DynamicsParams) -> dict:
        out = {
            "delta_omega_rad_s": self.delta_omega,
            "omega_o_rad_s": self.frequencies.omega_o,
            "omega_e_rad_s": self.frequencies.omega_e,
            "omega_0_rad_s": self.omega_0,
            "coupling_g_rad_s": self.params.coupling,
            "coupling_ratio": abs(self.params.coupling) / self.delta_omega
            if self.delta_omega > 0
            else math.inf,
            "n_bar": dyn.n_bar,
            "gamma_rad_s": dyn.gamma,
            "delta_shift_rad_s": dyn.delta_shift,
            "total_rate_rad_s": dyn.total_rate,
            "effective_frequency_rad_s": dyn.effective_frequency,
        }
        if dyn.gamma > 0:
            rho_inf = steady_state(dyn)
            out["steady_rho_oo"] = rho_inf.rho_oo
            out["steady_rho_ee"] = rho_inf.rho_ee
        if "twist" in self.cfg:
            theta = _require(self.cfg, "twist.theta_0")
            diff = permittivity_lab_exact(
                self.cavity.medium, theta
            ) - permittivity_lab_first_order(self.cavity.medium, theta)
            out["twist_theta_0"] = theta
            out["expansion_error_frobenius"] = float(np.linalg.norm(diff))
        return out


def _time_grid(cfg, dyn: DynamicsParams) -> tuple[float, float, int]:
    grid = cfg.get("time_grid", {})
    scale = max(dyn.total_rate, abs(dyn.effective_frequency))
    if "t_final" in grid:
        t_final = float(grid["t_final"])
    else:
        if dyn.total_rate <= 0:
            raise ConfigError(
                "time_grid.t_final is required when the relaxation rate is zero"
            )
        t_final = 40.0 / dyn.total_rate
    if "dt" in grid:
        dt = float(grid["dt"])
    else:
        if scale <= 0:
            raise ConfigError("time_grid.dt is required when all rates are zero")
        dt = 0.05 / scale
    if "stride" in grid:
        stride = int(grid["stride"])
    else:
        stride = max(1, round(t_final / dt) // 400) if t_final > 0 else 1
    return t_final, dt, stride


def _min_eigenvalue(matrices: np.ndarray) -> float:
    # closed form for 2x2 Hermitian: (tr - sqrt((a-d)^2 + 4|b|^2)) / 2
    a = matrices[:, 0, 0].real
    d = matrices[:, 1, 1].real
    b = matrices[:, 0, 1]
    return float(np.min(0.5 * (a + d - np.sqrt((a - d) ** 2 + 4 * np.abs(b) ** 2))))


def _write_evolve_csv(path: str, traj) -> int:
    lines = [EVOLVE_CSV_HEADER]
    for t, rho in zip(traj.times, traj.matrices):
        oe = rho[0, 1]
        lines.append(
            ",".join(
                _format_float(v)
                for v in (t, rho[0, 0].real, rho[1, 1].real, oe.real, oe.imag, abs(oe))
            )
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return len(lines) - 1


def cmd_modes(cfg: dict, args) -> dict:
    cavity = _build_cavity(cfg)
    modes = solve_eigenmodes(cavity.wavevector, cavity.medium)
    freqs = cavity_frequencies(cavity)
    gram = check_orthonormality(modes, cavity.medium)
    report = {}
    for mode in modes.modes:
        report[mode.label] = {
            "direction_re": [v.real for v in mode.direction],
            "direction_im": [v.imag for v in mode.direction],
            "eigenvalue_cm^-2": mode.eigenvalue,
            "frequency_rad_s": mode.frequency,
        }
    return {
        "modes": report,
        "omega_o_rad_s": freqs.omega_o,
        "omega_e_rad_s": freqs.omega_e,
        "delta_omega_rad_s": freqs.delta_omega,
        "gram_deviation_from_identity": float(np.max(np.abs(gram - np.eye(3)))),
    }


def cmd_params(cfg: dict, args) -> dict:
    scenario = _Scenario(cfg)
    dyn = scenario.dynamics()
    summary = scenario.base_summary(dyn)
    summary["rwa"] = cfg.get("rwa", True)
    if not summary["rwa"] and scenario.params.coupling != 0.0:
        # quantify what the rotating-wave form discards for this scenario
        g = abs(scenario.params.coupling)
        times = np.linspace(0.0, 10.0 / g, 200)
        check = jc_rabi_check(scenario.params, 4, times)
        summary["counter_rotating_deviation"] = check.max_counter_rotating_deviation
    return summary


def cmd_evolve(cfg: dict, args) -> dict:
    scenario = _Scenario(cfg)
    dyn = scenario.dynamics()
    rho0 = _initial_state(cfg)
    t_final, dt, stride = _time_grid(cfg, dyn)
    traj = evolve(rho0, dyn, t_final, dt, stride=stride)
    rows = _write_evolve_csv(args.csv, traj)
    final = traj.matrices[-1]
    summary = scenario.base_summary(dyn)
    summary.update(
        {
            "csv_path": args.csv,
            "csv_rows": rows,
            "t_final_s": t_final,
            "dt_s": dt,
            "stride": stride,
            "final_rho_oo": final[0, 0].real,
            "final_rho_ee": final[1, 1].real,
            "final_abs_rho_oe": abs(final[0, 1]),
            "max_trace_drift": traj.max_trace_drift,
            "renormalizations": traj.renormalizations,
            "min_eigenvalue": _min_eigenvalue(traj.matrices),
        }
    )
    return summary


def cmd_steady(cfg: dict, args) -> dict:
    scenario = _Scenario(cfg)
    dyn = scenario.dynamics()
    rho_inf = steady_state(dyn)
    summary = scenario.base_summary(dyn)
    summary.update(
        {
            "rho_oo": rho_inf.rho_oo,
            "rho_ee": rho_inf.rho_ee,
            "population_ratio": rho_inf.rho_oo / rho_inf.rho_ee,
        }
    )
    return summary


def cmd_shift(cfg: dict, args) -> dict:
    scenario = _Scenario(cfg)
    result = frequency_shift_result(
        scenario.bath, scenario.delta_omega, _quadrature_spec(cfg)
    )
    return {
        "delta_omega_rad_s": scenario.delta_omega,
        "delta_shift_rad_s": result.value,
        "quadrature_eta": result.eta,
        "quadrature_refinements": result.refinements,
        "quadrature_converged": result.converged,
    }


def cmd_oracle(cfg: dict, args) -> dict:
    oracle = cfg.get("oracle", {})
    gamma_target = oracle.get("gamma", 1.0)
    delta_omega = oracle.get("delta_omega", 100.0 * gamma_target)
    omega_max = oracle.get("omega_max", 2.0 * delta_omega)
    m = oracle.get("modes", 4096)
    t_max_gamma = oracle.get("t_max_gamma", 3.0)
    samples = oracle.get("samples", 61)
    threshold = oracle.get("threshold", 0.02)

    if gamma_target <= 0:
        raise ConfigError(
            "oracle.gamma must be positive (use oracle.value = 0 for the "
            "decoupled control)"
        )
    if samples < 2:
        raise ConfigError(f"oracle.samples must be >= 2, got {samples}")
    value = oracle.get("value", gamma_target / (2.0 * math.pi))
    spectrum = CouplingSpectrum.flat(value, omega_max)
    bath = discretize_bath(spectrum, m, (0.0, omega_max))
    gamma = 2.0 * math.pi * float(spectrum.g_squared(delta_omega))

    scale = gamma if gamma > 0 else gamma_target
    times = np.linspace(0.0, t_max_gamma / scale, samples)
    result = evolve_single_excitation(bath, delta_omega, times)

    # step the Lindblad side so its sample grid is exactly `times`
    dyn = DynamicsParams(delta_omega=delta_omega, gamma=gamma, n_bar=0.0)
    guard = max(dyn.total_rate, abs(dyn.effective_frequency))
    spacing = float(times[1] - times[0])
    substeps = max(1, math.ceil(spacing * guard / 0.05))
    rho0 = DensityMatrix2(np.diag([1.0, 0.0]))
    traj = evolve(rho0, dyn, float(times[-1]), spacing / substeps, stride=substeps)
    rho_oo = traj.matrices[:, 0, 0].real

    deviation = float(np.max(np.abs(rho_oo - result.survival) / np.maximum(result.survival, 1e-12)))
    summary = {
        "gamma_rad_s": gamma,
        "delta_omega_rad_s": delta_omega,
        "bath_modes": m,
        "recurrence_time_s": bath.recurrence_time,
        "oracle_norm_drift": result.max_norm_drift,
        "max_relative_deviation": deviation,
        "threshold": threshold,
        "survival_at_end": float(result.survival[-1]),
        "lindblad_at_end": float(rho_oo[-1]),
    }
    if deviation > threshold:
        raise ThresholdError(
            f"Lindblad-vs-oracle deviation {deviation:.4g} exceeds the "
            f"threshold {threshold:g}; increase oracle.modes or widen "
            "oracle.omega_max relative to gamma"
        )
    return summary


_SWEEPABLE_SUMMARY_KEYS = [
    "delta_omega_rad_s",
    "coupling_g_rad_s",
    "n_bar",
    "gamma_rad_s",
    "delta_shift_rad_s",
    "total_rate_rad_s",
    "steady_rho_oo",
    "steady_rho_ee",
    "expansion_error_frobenius",
]


def _find_swept_key(cfg, path=""):
    found = []
    for key, value in cfg.items():
        where = f"{path}.{key}" if path else key
        if isinstance(value, dict):
            found.extend(_find_swept_key(value, where))
        elif isinstance(value, list) and where != "initial_state":
            found.append(where)
    return found


def _set_by_path(cfg, path, value):
    node = cfg
    parts = path.split(".")
    for part in parts[:-1]:
        node = node[part]
    node[parts[-1]] = value


def cmd_sweep(cfg: dict, args) -> dict:
    swept = _find_swept_key(cfg)
    if len(swept) != 1:
        raise ConfigError(
            f"sweep needs exactly one list-valued config key, found {len(swept)}: {swept}"
        )
    key = swept[0]
    node = cfg
    for part in key.split("."):
        node = node[part]
    values = node

    def cell(value) -> str:
        if value is None:
            return ""
        if isinstance(value, bool) or not isinstance(value, (int, float, np.floating)):
            return json.dumps(value)
        return _format_float(float(value))

    columns = [key] + _SWEEPABLE_SUMMARY_KEYS
    lines = [",".join(columns)]
    for value in values:
        point = copy.deepcopy(cfg)
        _set_by_path(point, key, value)
        summary = cmd_params(point, args)
        row = [cell(value)] + [cell(summary.get(col)) for col in _SWEEPABLE_SUMMARY_KEYS]
        lines.append(",".join(row))
    with open(args.csv, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return {"csv_path": args.csv, "swept_key": key, "points": len(values)}


_COMMANDS = {
    "modes": cmd_modes,
    "params": cmd_params,
    "evolve": cmd_evolve,
    "steady": cmd_steady,
    "shift": cmd_shift,
    "oracle": cmd_oracle,
    "sweep": cmd_sweep,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistcav",
        description="Torsional optomechanical cavity simulations",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("config", nargs="?", help="JSON scenario file")
        p.add_argument("--out", help="write the summary document here instead of stdout")
        if name in ("evolve", "sweep"):
            p.add_argument(
                "--csv",
                default=f"twistcav_{name}.csv",
                help="output CSV path",
            )
    return parser


def _split_overrides(argv: list[str]) -> tuple[list[str], list[str]]:
    """Separate --dotted.key value override pairs from parser arguments."""
    known_flags = {"--out", "--csv", "--help", "-h"}
    filtered, overrides = [], []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token.startswith("--") and token.split("=", 1)[0] not in known_flags:
            overrides.append(token)
            if i + 1 < len(argv):
                overrides.append(argv[i + 1])
            i += 2
        else:
            filtered.append(token)
            i += 1
    return filtered, overrides


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    filtered, extra = _split_overrides(argv)
    args = _build_parser().parse_args(filtered)
    started = time.perf_counter()
    try:
        cfg = load_config(args.config) if args.config else {}
        apply_overrides(cfg, extra)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            summary = _COMMANDS[args.command](cfg, args)
        messages = [str(w.message) for w in caught]
        for message in messages:
            print(f"warning: {message}", file=sys.stderr)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except ThresholdError as exc:
        print(f"threshold failure: {exc}", file=sys.stderr)
        return 3
    except (DomainError, StabilityGuardError, ConvergenceError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    except TwistCavError as exc:  # any other package failure
        print(f"error: {exc}", file=sys.stderr)
        return 2

    document = {
        "command": args.command,
        "backend": backend.backend_name(),
        "config": cfg,
    }
    document.update(summary)
    document["warnings"] = messages
    document["timing_seconds"] = time.perf_counter() - started
    text = _render(document) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
