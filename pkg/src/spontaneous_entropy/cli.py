"""Command-line scenario runner.

    spontaneous-entropy <scenario> [--config cfg.json] [--set key=value ...]
                        [--out DIR] [--jobs N] [--quiet] [--box-length L ...]

Each scenario writes plot-ready CSV/JSON files plus ``manifest.json`` into the
output directory. Data files contain no timestamps, so identical configs give
byte-identical data; the manifest carries the run's timestamp and timings.

Exit codes: 0 success, 1 numerical failure, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable

import numpy as np
import scipy

from . import __version__, _backend
from .classical import (
    boundary_terms,
    classical_field_entropy,
    classical_spectrum,
    damped_trajectory,
    damping_time,
    larmor_power,
    radiative_force,
)
from .dynamics import (
    IntegrationError,
    OracleSizeError,
    asymptotic_amplitudes,
    evolve,
    recurrence_scan,
)
from .entropy import emission_entropy, entropy_time_series, shell_entropy_report
from .modes import (
    MemoryCapError,
    ModeSet,
    ResolutionError,
    collective_modes,
    enumerate_1d,
    enumerate_3d,
    shell_count_estimate,
)
from .output import write_csv, write_json
from .params import (
    CONFIG_KEYS,
    ParameterError,
    PhysicalParams,
    effective_solid_angle,
    gamma_ww,
    phase_space_time,
    v0_3d,
    v0_classical,
    wavepacket_length,
)
from .spectra import FitError, bin_spectrum, fit_exponential, fit_lorentzian, mode_bin_edges

log = logging.getLogger("spontaneous_entropy")

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2

SCENARIOS = (
    "decay",
    "spectrum",
    "entropy",
    "recurrence",
    "scaling-sweep",
    "classical",
    "correspondence",
)

_TOL = {"rtol": 1e-9, "atol": 1e-12, "backend": None}
NUMERICS_DEFAULTS: dict[str, dict[str, Any]] = {
    "decay": {"window_widths": 50.0, "t_final_gamma": 5.0, "n_samples": 501,
              "fit_window_gamma": [1.0, 4.0], **_TOL},
    "spectrum": {"window_widths": 50.0, "bin_width_gamma": 0.1, "source": "asymptotic",
                 "t_final_gamma": 10.0, **_TOL},
    "entropy": {"window_widths": 50.0, "series": True, "t_final_gamma": 10.0,
                "n_samples": 101, **_TOL},
    "recurrence": {"window_widths": 50.0, "t_final_gamma": 20.0, "n_samples": 8001,
                   "threshold": 0.1, "min_prominence": 0.02, **_TOL},
    "scaling-sweep": {"window_widths": 50.0, "scales": [1.0, 2.0, 4.0], "max_shell_modes": 2e8,
                      "backend": None},
    "classical": {"r0": 1.0, "t_final_tau": 20.0, "samples_per_period": 100,
                  "window_widths": 50.0, "bin_width_tau": 0.1, "csv_stride": 10,
                  "boundary_start_tau": 1.0},
    "correspondence": {"window_widths": 50.0, "t_final_tau": 30.0, "samples_per_period": 20,
                       "bin_width_spacing": 2.0, "r0": 1.0},
}


class ConfigError(ValueError):
    """Invalid configuration; maps to exit code 2."""


NUMERICAL_ERRORS = (
    IntegrationError,
    FitError,
    ResolutionError,
    OracleSizeError,
    MemoryCapError,
    ParameterError,
    FloatingPointError,
    ValueError,
)


@dataclass
class ScenarioConfig:
    scenario: str
    params: PhysicalParams
    numerics: dict[str, Any] = field(default_factory=dict)
    sweep: list[dict[str, Any]] = field(default_factory=list)
    output_dir: Path = Path("out")

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario,
            "params": self.params.to_dict(),
            "numerics": dict(self.numerics),
            "sweep": [dict(s) for s in self.sweep],
            "output_dir": str(self.output_dir),
        }


def _check_scenario(name: str) -> str:
    if name not in SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}; valid names: {', '.join(SCENARIOS)}")
    return name


def _make_params(data: dict[str, Any], where: str = "params") -> PhysicalParams:
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected a JSON object")
    allowed = set(CONFIG_KEYS) | {"max_coupling_ratio"}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown keys {', '.join(unknown)}; allowed: {', '.join(sorted(allowed))}")
    try:
        return PhysicalParams.from_dict(data)
    except (ParameterError, TypeError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _merge_numerics(scenario: str, given: dict[str, Any], where: str = "numerics") -> dict[str, Any]:
    defaults = NUMERICS_DEFAULTS[scenario]
    if not isinstance(given, dict):
        raise ConfigError(f"{where}: expected a JSON object")
    unknown = sorted(set(given) - set(defaults))
    if unknown:
        raise ConfigError(
            f"{where}: unknown keys {', '.join(unknown)} for scenario {scenario!r}; "
            f"allowed: {', '.join(sorted(defaults))}"
        )
    return {**defaults, **given}


def build_config(
    scenario: str,
    raw: dict[str, Any] | None = None,
    *,
    param_overrides: dict[str, Any] | None = None,
    sets: list[str] | None = None,
    output_dir: str | None = None,
) -> ScenarioConfig:
    """Merge defaults, a parsed config object, per-key flags and ``--set`` pairs."""
    raw = dict(raw or {})
    known_top = {"scenario", "params", "numerics", "sweep", "output_dir"}
    unknown = sorted(set(raw) - known_top)
    if unknown:
        raise ConfigError(f"config: unknown top-level keys {', '.join(unknown)}")
    if "scenario" in raw and raw["scenario"] != scenario:
        _check_scenario(raw["scenario"])
        raise ConfigError(f"scenario: config says {raw['scenario']!r} but {scenario!r} was requested")
    params = dict(raw.get("params") or {})
    numerics = dict(raw.get("numerics") or {})
    params.update({k: v for k, v in (param_overrides or {}).items() if v is not None})
    for item in sets or []:
        key, sep, text = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"--set {item!r}: expected key=value")
        try:
            value = json.loads(text)
        except json.JSONDecodeError:
            value = text
        key = key.strip()
        if key.startswith("params."):
            params[key[7:]] = value
        elif key.startswith("numerics."):
            numerics[key[9:]] = value
        elif key in CONFIG_KEYS or key == "max_coupling_ratio":
            params[key] = value
        else:
            numerics[key] = value
    sweep = raw.get("sweep") or []
    if not isinstance(sweep, list) or not all(isinstance(s, dict) for s in sweep):
        raise ConfigError("sweep: expected a list of objects")
    merged = _merge_numerics(scenario, numerics)
    allowed_sweep = set(CONFIG_KEYS) | set(merged)
    for i, entry in enumerate(sweep):
        bad = sorted(set(entry) - allowed_sweep)
        if bad:
            raise ConfigError(f"sweep[{i}]: keys {', '.join(bad)} are not declared parameters or numerics")
    out = output_dir or raw.get("output_dir") or f"out/{scenario}"
    return ScenarioConfig(scenario, _make_params(params), merged, sweep, Path(out))


def load_config_file(path: str | Path) -> dict[str, Any]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return data


# Scenario bodies. Each takes (params, numerics, out_dir) and returns a flat
# summary of scalars; files go into out_dir.


def _mode_set(p: PhysicalParams, nm: dict, **kw) -> ModeSet:
    if p.dimension == 1:
        return enumerate_1d(p, nm["window_widths"], **kw)
    return enumerate_3d(p, nm["window_widths"])


def _amplitude_rows(ev):
    for t, c, n in zip(ev.times, ev.c0, ev.norms):
        yield t, c.real, c.imag, c.real**2 + c.imag**2, n


def _state_rows(state, m):
    for w, c in zip(m.omega, state.c_modes):
        yield w, c.real, c.imag, c.real**2 + c.imag**2


AMPLITUDE_HEADER = ("t", "re_c0", "im_c0", "p_excited", "norm")
MODE_HEADER = ("omega", "re_c", "im_c", "prob")
SPECTRUM_HEADER = ("omega_low", "omega_high", "mass")


def run_decay(p: PhysicalParams, nm: dict, out: Path) -> dict:
    m = _mode_set(p, nm)
    if m.dimension == 3:
        m = collective_modes(m)
    gamma = m.gamma
    ev = evolve(m, p, nm["t_final_gamma"] / gamma, n_samples=int(nm["n_samples"]),
                rtol=nm["rtol"], atol=nm["atol"], keep_modes=False, backend=nm["backend"])
    write_csv(out / "decay.csv", AMPLITUDE_HEADER, _amplitude_rows(ev))
    a, b = nm["fit_window_gamma"]
    fit = fit_exponential(ev.times, ev.p_excited, (a / gamma, b / gamma))
    record = {
        **fit.to_dict(),
        "gamma_target": gamma,
        "relative_error": fit.rate / gamma - 1.0,
        "norm_drift": ev.norm_drift,
        "flagged": ev.flagged,
        "n_modes": m.size,
        "n_steps": ev.n_steps,
    }
    write_json(out / "fit.json", record)
    return {"rate": fit.rate, "gamma": gamma, "relative_error": record["relative_error"],
            "norm_drift": ev.norm_drift, "n_modes": m.size}


def run_spectrum(p: PhysicalParams, nm: dict, out: Path) -> dict:
    m = _mode_set(p, nm)
    if nm["source"] == "asymptotic":
        state = asymptotic_amplitudes(m, p)
    elif nm["source"] == "evolve":
        ev = evolve(m, p, sample_times=[nm["t_final_gamma"] / m.gamma], rtol=nm["rtol"],
                    atol=nm["atol"], backend=nm["backend"])
        state = ev.final
    else:
        raise ConfigError("numerics.source: expected 'asymptotic' or 'evolve'")
    spec = bin_spectrum(state, m, nm["bin_width_gamma"] * m.gamma)
    fit = fit_lorentzian(spec)
    write_csv(out / "spectrum.csv", SPECTRUM_HEADER, spec.rows())
    write_csv(out / "modes.csv", MODE_HEADER, _state_rows(state, m))
    record = {
        **fit.to_dict(),
        "expected_hwhm": m.gamma / 2.0,
        "hwhm_relative_error": fit.hwhm / (m.gamma / 2.0) - 1.0,
        "center_relative_error": fit.center / p.omega0 - 1.0,
        "total_mass": spec.total_mass,
    }
    write_json(out / "lorentz_fit.json", record)
    return {"hwhm": fit.hwhm, "center": fit.center, "expected_hwhm": m.gamma / 2.0,
            "total_mass": spec.total_mass}


def _entropy_report(p: PhysicalParams, nm: dict):
    if p.dimension == 3:
        estimate = shell_count_estimate(p, nm["window_widths"])
        cap = float(nm.get("max_shell_modes", 2e8))
        if estimate > cap:
            raise MemoryCapError(f"about {estimate:.3g} shell modes exceeds max_shell_modes={cap:.3g}")
        return shell_entropy_report(p, nm["window_widths"], backend=nm.get("backend")), None
    m = enumerate_1d(p, nm["window_widths"])
    return emission_entropy(asymptotic_amplitudes(m, p), m), m


def run_entropy(p: PhysicalParams, nm: dict, out: Path) -> dict:
    report, m = _entropy_report(p, nm)
    write_json(out / "entropy.json", report.to_dict())
    summary = {"s_exact": report.s_exact, "n_modes": report.n_modes,
               "truncation_mass": report.truncation_mass}
    if m is not None and nm["series"]:
        ev = evolve(m, p, nm["t_final_gamma"] / m.gamma, n_samples=int(nm["n_samples"]),
                    rtol=nm["rtol"], atol=nm["atol"], backend=nm["backend"])
        series = entropy_time_series(ev, m)
        write_csv(out / "entropy_series.csv", ("t", "s_exact", "atom_term", "truncation_mass"),
                  series.rows())
        summary["s_final"] = float(series.s_exact[-1])
    return summary


def run_recurrence(p: PhysicalParams, nm: dict, out: Path) -> dict:
    if p.dimension != 1:
        raise ConfigError("recurrence: params.dimension must be 1")
    m = enumerate_1d(p, nm["window_widths"], min_modes_per_hwhm=0.0)
    t_final = nm["t_final_gamma"] / m.gamma
    ev = evolve(m, p, t_final, n_samples=int(nm["n_samples"]), rtol=nm["rtol"], atol=nm["atol"],
                keep_modes=False, backend=nm["backend"])
    revivals = recurrence_scan(m, p, threshold=nm["threshold"],
                               min_prominence=nm["min_prominence"], evolution=ev)
    write_csv(out / "population.csv", AMPLITUDE_HEADER, _amplitude_rows(ev))
    round_trip = p.box_length / p.c
    first = revivals[0].onset if revivals else None
    write_json(out / "revivals.json", {
        "round_trip_time": round_trip,
        "threshold": nm["threshold"],
        "t_final": t_final,
        "revivals": [r.__dict__ for r in revivals],
        "first_onset_over_round_trip": first / round_trip if first is not None else None,
    })
    return {"n_revivals": len(revivals), "round_trip_time": round_trip,
            "first_onset": first if first is not None else math.nan}


def run_scaling_point(p: PhysicalParams, nm: dict, out: Path) -> dict:
    report, _ = _entropy_report(p, nm)
    write_json(out / "entropy.json", report.to_dict())
    closed_form = report.s_paper_3d if report.dimension == 3 else report.s_paper_1d
    return {"box_length": p.box_length, "s_exact": report.s_exact, "s_paper": closed_form,
            "offset": report.s_exact - closed_form, "n_modes": report.n_modes,
            "mode_mass": report.mode_mass}


def run_classical(p: PhysicalParams, nm: dict, out: Path) -> dict:
    tau = damping_time(p)
    if math.isinf(tau):
        raise ConfigError("classical: params.charge_e must be non-zero")
    dt = 2.0 * math.pi / (p.omega0 * nm["samples_per_period"])
    traj = damped_trajectory(p, nm["r0"], nm["t_final_tau"] * tau, dt)
    power = larmor_power(p, traj)
    stride = max(1, int(nm["csv_stride"]))
    write_csv(out / "trajectory.csv", ("t", "re_r", "im_r"),
              ((t, re, im) for i, (t, re, im) in enumerate(traj.rows()) if i % stride == 0))
    write_csv(out / "power.csv", ("t", "p_ray", "e_mech"),
              (row for i, row in enumerate(power.rows()) if i % stride == 0))
    radiated = float(power.radiated[-1])
    loss = float(power.mechanical_loss[-1])
    bt = boundary_terms(p, traj, t_start=nm["boundary_start_tau"] * tau)
    jerk_work, visc_work = radiative_force(p, traj).cycle_average_work(p.omega0)
    spec = classical_spectrum(traj, nm["bin_width_tau"] / tau, window_widths=nm["window_widths"])
    fit = fit_lorentzian(spec)
    report = classical_field_entropy(spec, p)
    write_csv(out / "spectrum.csv", SPECTRUM_HEADER, spec.rows())
    write_json(out / "lorentz_fit.json", {**fit.to_dict(), "expected_hwhm": 0.5 / tau,
                                          "hwhm_relative_error": fit.hwhm * 2 * tau - 1.0})
    write_json(out / "entropy.json", report.to_dict())
    energy = {
        "tau": tau,
        "omega0_tau": p.omega0 * tau,
        "radiated_energy": radiated,
        "mechanical_loss": loss,
        "balance_relative_error": radiated / loss - 1.0,
        "boundary_term": bt.boundary,
        "retained_term": bt.retained,
        "boundary_ratio": bt.ratio,
        "jerk_work": jerk_work,
        "viscous_work": visc_work,
    }
    write_json(out / "energy.json", energy)
    return {"balance_relative_error": energy["balance_relative_error"],
            "boundary_ratio": bt.ratio, "hwhm": fit.hwhm, "s_exact": report.s_exact}


def run_correspondence(p: PhysicalParams, nm: dict, out: Path) -> dict:
    if p.dimension != 1:
        raise ConfigError("correspondence: params.dimension must be 1")
    tau = damping_time(p)
    if math.isinf(tau):
        raise ConfigError("correspondence: params.charge_e must be non-zero")
    m = enumerate_1d(p, nm["window_widths"], gamma_target=1.0 / tau)
    quantum = emission_entropy(asymptotic_amplitudes(m, p), m)
    dt = 2.0 * math.pi / (p.omega0 * nm["samples_per_period"])
    traj = damped_trajectory(p, nm["r0"], nm["t_final_tau"] * tau, dt)
    edges = mode_bin_edges(m, nm["bin_width_spacing"] * m.spacing)
    spec = classical_spectrum(traj, edges=edges)
    classical = classical_field_entropy(spec, p, m)
    q_spec = bin_spectrum(asymptotic_amplitudes(m, p), m, nm["bin_width_spacing"] * m.spacing)
    write_csv(out / "spectrum_classical.csv", SPECTRUM_HEADER, spec.rows())
    write_csv(out / "spectrum_quantum.csv", SPECTRUM_HEADER, q_spec.rows())
    v0c = v0_classical(p, tau)
    v0q = v0_3d(p, 0.5 / tau)
    record = {
        "gamma": 1.0 / tau,
        "s_quantum": quantum.s_exact,
        "s_classical": classical.s_exact,
        "difference": classical.s_exact - quantum.s_exact,
        "v0_classical": v0c,
        "v0_quantum": v0q,
        "v0_relative_difference": abs(v0c - v0q) / v0q,
        "quantum": quantum.to_dict(),
        "classical": classical.to_dict(),
    }
    write_json(out / "correspondence.json", record)
    return {"s_quantum": quantum.s_exact, "s_classical": classical.s_exact,
            "difference": record["difference"]}


RUNNERS: dict[str, Callable[[PhysicalParams, dict, Path], dict]] = {
    "decay": run_decay,
    "spectrum": run_spectrum,
    "entropy": run_entropy,
    "recurrence": run_recurrence,
    "scaling-sweep": run_scaling_point,
    "classical": run_classical,
    "correspondence": run_correspondence,
}


def _split_override(scenario: str, entry: dict) -> tuple[dict, dict]:
    params = {k: v for k, v in entry.items() if k in CONFIG_KEYS}
    numerics = {k: v for k, v in entry.items() if k not in CONFIG_KEYS}
    return params, numerics


def _run_point(task: tuple[str, dict, dict, str]) -> tuple[dict, float]:
    scenario, params, numerics, out = task
    t0 = time.perf_counter()
    summary = RUNNERS[scenario](PhysicalParams.from_dict(params), numerics, Path(out))
    return summary, time.perf_counter() - t0


def _sweep_points(cfg: ScenarioConfig) -> list[dict]:
    if cfg.sweep:
        return [dict(s) for s in cfg.sweep]
    if cfg.scenario == "scaling-sweep":
        base = cfg.params.box_length
        return [{"box_length": base * float(a)} for a in cfg.numerics["scales"]]
    return []


def derived_constants(p: PhysicalParams) -> dict[str, Any]:
    gamma = gamma_ww(p)
    tau = damping_time(p) if p.mass_m > 0 else math.nan
    out: dict[str, Any] = {
        "gamma": gamma,
        "linewidth_hwhm": gamma / 2.0,
        "tau_classical": tau,
        "effective_solid_angle": effective_solid_angle(p),
        "round_trip_time": p.box_length / p.c,
        "mode_spacing_1d": 2.0 * math.pi * p.c / p.box_length,
    }
    if gamma > 0:
        out["v0"] = v0_3d(p, gamma / 2.0)
        out["wavepacket_length"] = wavepacket_length(p, gamma / 2.0)
        out["phase_space_time"] = phase_space_time(p, 1.0 / gamma)
    if math.isfinite(tau) and tau > 0:
        out["v0_classical"] = v0_classical(p, tau)
    return out


def run_scenario(cfg: ScenarioConfig, *, jobs: int = 1) -> int:
    """Run one configured scenario (or sweep) and write its manifest."""
    t_start = time.perf_counter()
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    points = _sweep_points(cfg)
    timings: dict[str, Any] = {}
    if not points:
        summary, elapsed = _run_point((cfg.scenario, cfg.params.to_dict(), cfg.numerics, str(out)))
        timings["run_s"] = elapsed
        log.info("%s: %s", cfg.scenario, json.dumps(summary, sort_keys=True, default=str))
    else:
        tasks = []
        for i, entry in enumerate(points):
            over_p, over_n = _split_override(cfg.scenario, entry)
            params = {**cfg.params.to_dict(), **over_p}
            _make_params(params, where=f"sweep[{i}]")
            tasks.append((cfg.scenario, params, {**cfg.numerics, **over_n}, str(out / f"point_{i:03d}")))
        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_run_point, tasks))
        else:
            results = [_run_point(t) for t in tasks]
        rows = []
        for i, (entry, (summary, elapsed)) in enumerate(zip(points, results)):
            rows.append({"point": i, **entry, **summary})
            timings[f"point_{i:03d}_s"] = elapsed
            log.info("%s[%d]: %s", cfg.scenario, i, json.dumps(summary, sort_keys=True, default=str))
        columns = ["point"] + sorted({k for r in rows for k in r} - {"point"})
        name = "entropy_vs_L.csv" if cfg.scenario == "scaling-sweep" else "sweep.csv"
        write_csv(out / name, columns, ([r.get(c, "") for c in columns] for r in rows))
    timings["total_s"] = time.perf_counter() - t_start
    manifest = {
        "config": cfg.to_dict(),
        "derived": derived_constants(cfg.params),
        "versions": {
            "spontaneous_entropy": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        "backend": _backend.name,
        "jobs": jobs,
        "timings": timings,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "outputs": sorted(str(p.relative_to(out)) for p in out.rglob("*") if p.is_file() and p.name != "manifest.json"),
    }
    write_json(out / "manifest.json", manifest)
    return EXIT_OK


def _param_flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spontaneous-entropy",
        description="Spontaneous-emission dynamics, spectra and field entropy experiments.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="scenario", metavar="scenario")
    sub.required = True
    for name in SCENARIOS:
        sp = sub.add_parser(name, help=f"run the {name} scenario")
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a parameter or numerics key (repeatable)")
        sp.add_argument("--out", help="output directory (default out/<scenario>)")
        sp.add_argument("--jobs", type=int, default=1, help="parallel sweep workers")
        sp.add_argument("--quiet", action="store_true", help="suppress progress output")
        for key in CONFIG_KEYS:
            kind = int if key == "dimension" else float
            sp.add_argument(_param_flag(key), dest=key, type=kind, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(message)s",
        stream=sys.stderr,
    )
    try:
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        raw = load_config_file(args.config) if args.config else {}
        overrides = {k: getattr(args, k) for k in CONFIG_KEYS}
        cfg = build_config(args.scenario, raw, param_overrides=overrides, sets=args.set,
                           output_dir=args.out)
        return run_scenario(cfg, jobs=args.jobs)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NUMERICAL_ERRORS as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
