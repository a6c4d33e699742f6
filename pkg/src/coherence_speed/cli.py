"""Command-line front end for the verification suites and report runs.

Commands
--------
verify   run a named invariant suite, print one line per check
sweep    averaged-distance identity over a time grid (CSV/JSON report)
battery  two-level charging protocol time series
channel  dilation audit of a Kraus channel
qsl      speed-limit comparison along an exact evolution

Exit codes: 0 all checks pass, 1 a check failed, 2 usage/config error.
All quantities are dimensionless with hbar = 1.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone

import numpy as np
from jsonschema import ValidationError

from . import __version__
from .avgdist import BRUTE_FORCE_CAP, avg_distance_closed
from .battery import (
    BatteryConfig,
    constant_axis,
    parabola_pulse,
    rotating_axis,
    simulate_battery,
    sin2_pulse,
    sin4_pulse,
)
from .channels import (
    dilate,
    equality_gap_analysis,
    load_channel,
    qutrit_equality_channel,
    theorem3_bound,
)
from .errors import CoherenceSpeedError, TooManyLevels
from .linalg import (
    SpectralHamiltonian,
    haar_random_state,
    pure_density,
    random_density,
    unitary_exp,
    validate_state_vector,
)
from .metrics import qsl_bounds
from .report import render_report, write_report
from .schemas import validate_document
from .verification import SUITES, failures_as_dicts, run_suite

_PULSES = {"sin2": sin2_pulse, "sin4": sin4_pulse, "parabola": parabola_pulse}
_UNIT_AXES = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}


class UsageError(Exception):
    """Bad arguments or config; maps to exit code 2."""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coherence-speed",
        description="Verification-grade checks of coherence/average-distance "
                    "identities, channel bounds, battery work ceilings, and "
                    "speed limits (hbar = 1).")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="JSON config file (validated against the shipped schema)")
    common.add_argument("--seed", type=int, metavar="N",
                        help="RNG seed (fallback: config, then COHERENCE_SPEED_SEED, then 0)")
    common.add_argument("--jobs", type=int, metavar="N",
                        help="worker threads for trial loops (default: available cores)")
    common.add_argument("--out", metavar="PATH",
                        help="report file (default: stdout for report commands)")
    common.add_argument("--format", choices=("csv", "json"), dest="fmt",
                        help="report format (default csv)")
    common.add_argument("--tol", type=float, metavar="X",
                        help="tolerance override for pass/fail decisions")

    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p_verify = sub.add_parser("verify", parents=[common],
                              help="run a named invariant suite")
    p_verify.add_argument("suite", nargs="?", choices=sorted(SUITES),
                          help="suite name (or set verify.suite in the config)")
    p_verify.add_argument("--dim", type=int, metavar="N",
                          help="fix the Hilbert-space dimension for all trials")
    p_verify.add_argument("--trials", type=int, metavar="N",
                          help="trial count override for every check of the suite")

    sub.add_parser("sweep", parents=[common],
                   help="averaged-distance identity over a time grid (needs config)")
    sub.add_parser("battery", parents=[common],
                   help="two-level charging protocol time series")
    sub.add_parser("channel", parents=[common],
                   help="dilation audit of a Kraus channel")
    sub.add_parser("qsl", parents=[common],
                   help="speed-limit comparison along an exact evolution")
    return parser


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: "
                         f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    try:
        validate_document(doc, "config.schema.json")
    except ValidationError as exc:
        raise UsageError(f"config {path}: {exc.json_path}: {exc.message}") from exc
    return doc


def _resolve_seed(ns, config: dict) -> int:
    if ns.seed is not None:
        return int(ns.seed)
    if "seed" in config:
        return int(config["seed"])
    env = os.environ.get("COHERENCE_SPEED_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(
                f"COHERENCE_SPEED_SEED must be an integer, got {env!r}") from exc
    return 0


def _resolve_common(ns, config: dict):
    seed = _resolve_seed(ns, config)
    tol = ns.tol if ns.tol is not None else config.get("tolerance")
    jobs = ns.jobs if ns.jobs is not None else config.get("jobs", os.cpu_count() or 1)
    out = ns.out if ns.out is not None else config.get("out")
    fmt = ns.fmt if ns.fmt is not None else config.get("format", "csv")
    return seed, tol, int(jobs), out, fmt


def _metadata(command: str, seed: int, tol, **extra) -> dict:
    meta = {
        "generated": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "package": f"coherence-speed {__version__}",
        "command": command,
        "seed": seed,
        "tolerance": "default" if tol is None else tol,
        "units": "dimensionless, hbar=1",
    }
    meta.update(extra)
    return meta


def _state_label(spec) -> str:
    return spec if isinstance(spec, str) else json.dumps(spec, sort_keys=True)


def _pure_state(spec, dim: int, rng) -> np.ndarray:
    """Resolve a config state description to a normalized vector."""
    if spec == "ground":
        vec = np.zeros(dim, dtype=complex)
        vec[0] = 1.0
        return vec
    if spec in ("plus", "maximally-coherent"):
        return np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)
    if isinstance(spec, dict) and "amplitudes" in spec:
        vec = np.array([complex(re, im) for re, im in spec["amplitudes"]])
        if len(vec) != dim:
            raise UsageError(f"state has {len(vec)} amplitudes, expected {dim}")
        try:
            return validate_state_vector(vec)
        except CoherenceSpeedError as exc:
            raise UsageError(f"state amplitudes: {exc}") from exc
    if isinstance(spec, dict) and spec.get("haar"):
        return haar_random_state(dim, rng)
    raise UsageError("this command needs a pure state "
                     "(ground / plus / maximally-coherent / amplitudes / haar)")


def _density(spec, ham: SpectralHamiltonian, rng) -> np.ndarray:
    """Resolve a config state description to a density matrix.

    'maximally-coherent' weights the Hamiltonian's level blocks equally,
    which for a nondegenerate spectrum reduces to the uniform
    superposition.
    """
    if spec == "maximally-coherent":
        m = ham.level_count
        vec = np.zeros(ham.dim, dtype=complex)
        col = 0
        for p, b in zip(ham.decomposition.projectors,
                        ham.decomposition.block_dims):
            vec += (p @ ham.eigenvectors[:, col]) / np.sqrt(m)
            col += b
        return pure_density(vec / np.linalg.norm(vec))
    if isinstance(spec, dict) and "density_rank" in spec:
        rank = int(spec["density_rank"])
        if not 1 <= rank <= ham.dim:
            raise UsageError(f"density_rank must be in 1..{ham.dim}")
        return random_density(ham.dim, rank=rank, seed=rng)
    return pure_density(_pure_state(spec, ham.dim, rng))


def _axis(spec, tau: float):
    if isinstance(spec, str):
        if spec in _UNIT_AXES:
            return constant_axis(_UNIT_AXES[spec])
        if spec == "rotating-xy":
            return rotating_axis(tau)
        raise UsageError(f"unknown drive axis {spec!r}")
    vec = np.asarray(spec, dtype=float)
    norm = float(np.linalg.norm(vec))
    if norm < 1e-12:
        raise UsageError("drive axis must be a nonzero 3-vector")
    return constant_axis(vec / norm)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_verify(ns, config: dict) -> int:
    seed, tol, jobs, out, fmt = _resolve_common(ns, config)
    section = config.get("verify", {})
    suite = ns.suite or section.get("suite")
    if suite is None:
        raise UsageError("verify needs a suite name (argument or verify.suite in config)")
    if suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from " + ", ".join(sorted(SUITES)))
    dim = ns.dim if ns.dim is not None else section.get("dim")
    trials = ns.trials if ns.trials is not None else section.get("trials")
    results = run_suite(suite, seed=seed, trials=trials, dim=dim, tol=tol, jobs=jobs)
    for res in results:
        print(res.line())
    if out:
        rows = [{"check": r.name, "passed": r.passed, "worst": r.worst,
                 "tol": r.tol, "trials": r.trials, "detail": r.detail}
                for r in results]
        meta = _metadata("verify", seed, tol, suite=suite,
                         trials="default" if trials is None else trials,
                         dim="mixed" if dim is None else dim)
        write_report(render_report(rows, meta, fmt), out)
        print(f"report written to {out}")
    failures = failures_as_dicts(results)
    if failures:
        print(json.dumps({"failed_checks": failures}), file=sys.stderr)
        return 1
    return 0


def _cmd_sweep(ns, config: dict) -> int:
    seed, tol, jobs, out, fmt = _resolve_common(ns, config)
    tol = 1e-9 if tol is None else tol
    section = config.get("sweep")
    if section is None:
        raise UsageError("sweep needs a config file with a sweep section "
                         "(spectrum, optionally state and time grid)")
    spectrum = np.asarray(section["spectrum"], dtype=float)
    ham = SpectralHamiltonian.from_spectrum(spectrum)
    rng = np.random.default_rng(seed)
    state_spec = section.get("state", "maximally-coherent")
    rho = _density(state_spec, ham, rng)
    t0 = float(section.get("t_start", 0.0))
    t1 = float(section.get("t_stop", 2.0 * np.pi))
    steps = int(section.get("t_steps", 201))
    include_brute = (section.get("brute_force", True)
                     and ham.level_count <= BRUTE_FORCE_CAP)
    rows = []
    worst_gap = 0.0
    for t in np.linspace(t0, t1, steps):
        res = avg_distance_closed(rho, ham, float(t), include_brute=include_brute)
        row = {"t": res.t}
        if include_brute:
            row["sbar_brute"] = res.brute_force
        row["sbar_closed"] = res.closed_form
        row["coefficient"] = res.coefficient
        row["c_half"] = res.coherence
        if include_brute:
            row["gap"] = res.gap
            worst_gap = max(worst_gap, res.gap)
        rows.append(row)
    meta = _metadata("sweep", seed, tol,
                     spectrum=spectrum, dimension=ham.dim,
                     levels=ham.level_count, state=_state_label(state_spec),
                     brute_force=include_brute,
                     brute_force_cap=BRUTE_FORCE_CAP)
    write_report(render_report(rows, meta, fmt), out)
    if out:
        print(f"report written to {out}")
    if include_brute and worst_gap > tol:
        print(f"sweep: worst identity gap {worst_gap:.3e} exceeds {tol:.1e}",
              file=sys.stderr)
        return 1
    return 0


def _cmd_battery(ns, config: dict) -> int:
    seed, tol, jobs, out, fmt = _resolve_common(ns, config)
    tol = 1e-9 if tol is None else tol
    section = config.get("battery", {})
    epsilon = float(section.get("epsilon", 1.0))
    eta_max = float(section.get("eta_max", 1.0))
    tau = float(section.get("tau", 1.0))
    dt = float(section.get("dt", 1e-3))
    pulse_name = section.get("pulse", "sin2")
    axis_spec = section.get("axis", "x")
    state_spec = section.get("state", "ground")
    rng = np.random.default_rng(seed)
    psi0 = _pure_state(state_spec, 2, rng)
    bat = BatteryConfig(epsilon=epsilon, tau=tau, dt=dt,
                        pulse=_PULSES[pulse_name](eta_max, tau),
                        drive_axis=_axis(axis_spec, tau))
    records = simulate_battery(bat, psi0)
    rows = [{"t": r.t, "eta": r.pulse_value, "avg_work": r.avg_work,
             "bound": r.bound, "coherence": r.coherence,
             "cumulative_work": r.cumulative_work} for r in records]
    worst = max(abs(r.avg_work) - r.bound for r in records)
    meta = _metadata("battery", seed, tol, epsilon=epsilon, eta_max=eta_max,
                     tau=tau, dt=dt, pulse=pulse_name,
                     axis=_state_label(axis_spec), state=_state_label(state_spec))
    write_report(render_report(rows, meta, fmt), out)
    if out:
        print(f"report written to {out}")
    if worst > tol:
        print(f"battery: work exceeded its ceiling by {worst:.3e}", file=sys.stderr)
        return 1
    return 0


def _cmd_channel(ns, config: dict) -> int:
    seed, tol, jobs, out, fmt = _resolve_common(ns, config)
    tol = 1e-9 if tol is None else tol
    section = config.get("channel", {})
    channel_spec = section.get("channel", "qutrit-equality")
    if channel_spec == "qutrit-equality":
        channel = qutrit_equality_channel()
        label = "qutrit-equality"
    else:
        label = channel_spec["path"]
        try:
            channel = load_channel(label)
        except (OSError, json.JSONDecodeError, ValidationError,
                CoherenceSpeedError) as exc:
            raise UsageError(f"channel {label}: {exc}") from exc
    rng = np.random.default_rng(seed)
    psi0 = _pure_state(section.get("state", "ground"), channel.dim, rng)
    rho = pure_density(psi0)
    total = sum(k.conj().T @ k for k in channel.operators)
    completeness = float(np.max(np.abs(total - np.eye(channel.dim))))
    dilation = dilate(channel, section.get("env_dim"))
    gap_report = equality_gap_analysis(channel, rho)
    row = {"sys_dim": channel.dim, "env_dim": dilation.env_dim,
           "levels": len(dilation.levels),
           "completeness_residual": completeness,
           "system_distance": gap_report.system_distance,
           "dilated_distance": gap_report.dilated_distance,
           "gap": gap_report.gap, "witness": gap_report.witness,
           "witness_is_zero": gap_report.witness_is_zero}
    violated = False
    try:
        lhs, rhs = theorem3_bound(dilation, rho)
        row.update(avg_channel_distance=lhs, coherence_ceiling=rhs,
                   slack=rhs - lhs)
        violated = lhs > rhs + tol
    except TooManyLevels as exc:
        print(f"note: bound columns omitted ({exc})", file=sys.stderr)
    meta = _metadata("channel", seed, tol, channel=label,
                     n_kraus=len(channel.operators),
                     state=_state_label(section.get("state", "ground")))
    write_report(render_report([row], meta, fmt), out)
    if out:
        print(f"report written to {out}")
    if violated:
        print(f"channel: averaged distance exceeds the coherence ceiling "
              f"by {row['avg_channel_distance'] - row['coherence_ceiling']:.3e}",
              file=sys.stderr)
        return 1
    return 0


def _cmd_qsl(ns, config: dict) -> int:
    seed, tol, jobs, out, fmt = _resolve_common(ns, config)
    tol = 1e-9 if tol is None else tol
    section = config.get("qsl", {})
    spectrum = np.asarray(section.get("spectrum", [0.0, 1.0]), dtype=float)
    ham = SpectralHamiltonian.from_spectrum(spectrum)
    rng = np.random.default_rng(seed)
    psi0 = _pure_state(section.get("state", "plus"), ham.dim, rng)
    t0 = float(section.get("t_start", 0.0))
    t1 = float(section.get("t_stop", np.pi))
    steps = int(section.get("t_steps", 101))
    rows = []
    worst = -np.inf
    for t in np.linspace(t0, t1, steps):
        psi_t = unitary_exp(ham, float(t)) @ psi0
        bounds = qsl_bounds(psi0, ham, psi_t)
        rows.append({"t": float(t), "bures_angle": bounds.bures_angle,
                     "energy_mean": bounds.mean_energy,
                     "energy_stddev": bounds.energy_stddev,
                     "mt_time": bounds.mt_time, "ml_time": bounds.ml_time})
        if bounds.mt_time is not None:
            worst = max(worst, bounds.mt_time - t)
    meta = _metadata("qsl", seed, tol, spectrum=spectrum, dimension=ham.dim,
                     state=_state_label(section.get("state", "plus")))
    write_report(render_report(rows, meta, fmt), out)
    if out:
        print(f"report written to {out}")
    if worst > tol:
        print(f"qsl: spread-based minimum time exceeded the elapsed time "
              f"by {worst:.3e}", file=sys.stderr)
        return 1
    return 0


_COMMANDS = {
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "battery": _cmd_battery,
    "channel": _cmd_channel,
    "qsl": _cmd_qsl,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:       # argparse already printed usage/help
        return int(exc.code or 0)
    try:
        config = _load_config(ns.config) if ns.config else {}
        return _COMMANDS[ns.command](ns, config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CoherenceSpeedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
