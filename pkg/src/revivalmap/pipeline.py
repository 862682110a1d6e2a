"""Experiment harness: config in, deterministic report and plot data out.

`run_experiment` composes the stages in order -- loop areas, per-cycle
phases, correlation series, rotation parameters, analytic and empirical
gap statistics -- and cross-checks the module-level invariants as it goes
(raising `ContractViolation` when one fails, which the CLI maps to exit
code 2). There is no randomness anywhere: the same config always produces
a byte-identical report.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .coherent import (CoherentConfig, correlation_closed, correlation_fock,
                       near_revival_bound, revival_times)
from .errors import (ConfigError, ContractViolation, SearchBoundExceeded,
                     ValidationError)
from .exactfrac import dyadic_unit
from .gaps import (empirical_gaps, gap_distribution, identity_residual,
                   mean_recurrence)
from .geometry import (ParametricLoop, areas_from_phases, berry_phase,
                       euclidean_area, hyperbolic_area, loop_from_descriptor,
                       PhaseData)
from .rotation import classify_rotation, orbit_angles, rotation_params

__all__ = ["ExperimentConfig", "ExperimentReport", "run_experiment",
           "emit_plot_data", "PLOT_KINDS"]

TWO_PI = 2.0 * math.pi

# |cos(total phase) - 1| at or below this counts as an exact revival;
# anything looser is "near" and belongs to the window statistics.
EXACT_REVIVAL_TOL = 1e-12

PLOT_KINDS = ("correlation-series", "gap-histogram", "orbit-angles")


@dataclass
class ExperimentConfig:
    """Inputs of one experiment run.

    ``beta_loop`` is required (loop descriptor dict, or a path string to a
    descriptor JSON file, resolved against the config's directory);
    ``alpha_loop`` is optional and its absence means zero displacement
    area. ``iterations = 0`` skips the orbit simulation (analytic output
    only). The pipeline is seed-free.
    """

    beta_loop: Any
    omega: float = 1.0
    cycle_period: float = 1.0
    z: complex = 1.0
    epsilon: float = 0.1
    iterations: int = 10 ** 6
    alpha_loop: Any = None
    theta0: float | None = None          # default: phase of z
    classify_q_max: int = 10 ** 6
    classify_tol: float = 1e-12
    correlation_cycles: int = 100        # rows of the correlation series
    orbit_points: int = 2048             # cap on orbit-angle rows kept

    @classmethod
    def from_dict(cls, raw: dict, base_dir: Path | None = None) -> "ExperimentConfig":
        """Validate a parsed JSON object; collects all field errors at once."""
        if not isinstance(raw, dict):
            raise ConfigError(["top level: expected a JSON object"])
        problems: list[str] = []
        known = {"beta_loop", "alpha_loop", "omega", "cycle_period", "z",
                 "epsilon", "iterations", "theta0", "classify_q_max",
                 "classify_tol", "correlation_cycles", "orbit_points"}
        for key in raw:
            if key not in known:
                problems.append(f"{key}: unknown field")
        kwargs: dict[str, Any] = {}

        def take_number(name, default, check, desc):
            val = raw.get(name, default)
            try:
                val = float(val)
            except (TypeError, ValueError):
                problems.append(f"{name}: expected a number")
                return
            if not math.isfinite(val) or not check(val):
                problems.append(f"{name}: {desc}, got {val!r}")
                return
            kwargs[name] = val

        if "beta_loop" not in raw:
            problems.append("beta_loop: missing (required)")
        else:
            try:
                kwargs["beta_loop"] = _resolve_loop(raw["beta_loop"], base_dir)
            except (ValidationError, OSError, json.JSONDecodeError) as exc:
                problems.append(f"beta_loop: {exc}")
        if raw.get("alpha_loop") is not None:
            try:
                kwargs["alpha_loop"] = _resolve_loop(raw["alpha_loop"], base_dir)
            except (ValidationError, OSError, json.JSONDecodeError) as exc:
                problems.append(f"alpha_loop: {exc}")

        take_number("omega", 1.0, lambda v: v > 0, "must be positive")
        take_number("cycle_period", 1.0, lambda v: v > 0, "must be positive")
        take_number("epsilon", 0.1, lambda v: 0 < v < 0.5, "must lie in (0, 1/2)")
        if raw.get("theta0") is not None:
            take_number("theta0", None, lambda v: True, "")

        z_raw = raw.get("z", 1.0)
        try:
            kwargs["z"] = _parse_complex(z_raw)
        except ValidationError as exc:
            problems.append(f"z: {exc}")

        for name, default, lo in (("iterations", 10 ** 6, 0),
                                  ("classify_q_max", 10 ** 6, 1),
                                  ("classify_tol", None, None),
                                  ("correlation_cycles", 100, 1),
                                  ("orbit_points", 2048, 0)):
            if name == "classify_tol":
                val = raw.get(name, 1e-12)
                if not (isinstance(val, (int, float)) and val > 0):
                    problems.append("classify_tol: must be a positive number")
                else:
                    kwargs[name] = float(val)
                continue
            val = raw.get(name, default)
            if not isinstance(val, int) or isinstance(val, bool) or val < lo:
                problems.append(f"{name}: must be an integer >= {lo}")
            else:
                kwargs[name] = val

        if problems:
            raise ConfigError(problems)
        return cls(**kwargs)


def _parse_complex(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if isinstance(value, complex):
        return value
    if (isinstance(value, (list, tuple)) and len(value) == 2
            and all(isinstance(v, (int, float)) for v in value)):
        return complex(float(value[0]), float(value[1]))
    raise ValidationError("expected a number or an [re, im] pair")


def _resolve_loop(desc, base_dir: Path | None):
    if isinstance(desc, str):
        path = Path(desc)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        with open(path, "r", encoding="utf-8") as fh:
            desc = json.load(fh)
    return loop_from_descriptor(desc)


@dataclass
class ExperimentReport:
    """Structured results of `run_experiment`; serializes deterministically."""

    data: dict

    def to_json(self) -> str:
        return json.dumps(self.data, sort_keys=True, indent=2) + "\n"

    def write(self, path) -> Path:
        path = Path(path)
        path.write_text(self.to_json(), encoding="utf-8")
        return path

    @classmethod
    def from_json(cls, path) -> "ExperimentReport":
        with open(path, "r", encoding="utf-8") as fh:
            return cls(json.load(fh))

    def __getitem__(self, key):
        return self.data[key]


def _require(condition: bool, message: str):
    if not condition:
        raise ContractViolation(message)


def _exact_fracs(ks: np.ndarray, num: int, bits: int) -> np.ndarray:
    """{k * num / 2**bits} for an array of indices, exactly reduced."""
    if bits <= 64:
        mask = (np.uint64((1 << bits) - 1) if bits < 64
                else np.uint64(0xFFFFFFFFFFFFFFFF))
        residues = (ks.astype(np.uint64) * np.uint64(num)) & mask
        return residues.astype(np.float64) / float(2.0 ** bits)
    den = 1 << bits
    return np.array([((int(k) * num) % den) / den for k in ks],
                    dtype=np.float64)


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run the full pipeline and cross-validate its invariants.

    Raises `ValidationError` (bad inputs) or `ContractViolation` (a
    numerical invariant failed at runtime), with the failing pipeline
    stage named in the message.
    """
    stage = "geometry"
    try:
        return _run_experiment(config)
    except (ValidationError, ContractViolation) as exc:
        stage = getattr(exc, "pipeline_stage", None)
        if stage is None:
            raise
        raise exc.__class__(f"stage '{stage}': {exc}") from exc


class _StageMarker:
    """Attaches the current pipeline stage to escaping errors."""

    def __init__(self):
        self.name = "geometry"

    def __call__(self, name: str):
        self.name = name
        return self

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None and isinstance(exc, (ValidationError,
                                                ContractViolation)):
            if not hasattr(exc, "pipeline_stage"):
                exc.pipeline_stage = self.name
        return False


def _run_experiment(config: ExperimentConfig) -> ExperimentReport:
    stage = _StageMarker()
    # --- stage 1: loop geometry -> areas and phases -------------------
    with stage("geometry"):
        beta_loop = loop_from_descriptor(config.beta_loop)
    area_beta = hyperbolic_area(beta_loop)
    if config.alpha_loop is not None:
        alpha_loop = loop_from_descriptor(config.alpha_loop)
        area_alpha = euclidean_area(alpha_loop)
    else:
        alpha_loop = None
        area_alpha = 0.0
    phases = PhaseData(area_alpha=area_alpha, area_beta=area_beta)
    gamma0 = berry_phase(0, phases)
    gamma1 = berry_phase(1, phases)
    scale = max(1.0, abs(area_beta))
    _require(abs((gamma0 - gamma1) - area_beta) <= 1e-12 * scale,
             "phase slope gamma0 - gamma1 does not reproduce the beta-loop area")
    rt = areas_from_phases(gamma0, gamma1)
    _require(abs(rt.area_alpha - area_alpha) <= 1e-12 * max(1.0, abs(area_alpha))
             and abs(rt.area_beta - area_beta) <= 1e-12 * scale,
             "areas_from_phases does not invert the computed phases")

    # --- stage 2: coherent dynamics ----------------------------------
    ccfg = CoherentConfig(z=config.z, omega=config.omega,
                          cycle_period=config.cycle_period, phases=phases)
    z_sq = ccfg.z_abs_sq
    omega_T = ccfg.omega_T
    total_phase = omega_T + area_beta
    nearest_p = round(total_phase / TWO_PI)
    revival_residual = total_phase - TWO_PI * nearest_p
    exact_revival = abs(math.cos(total_phase) - 1.0) <= EXACT_REVIVAL_TOL

    ks = np.arange(1, config.correlation_cycles + 1)
    corr_closed = correlation_closed(z_sq, omega_T, area_beta, ks)
    corr_fock = np.array([correlation_fock(ccfg, int(k)) for k in ks])
    max_discrepancy = float(np.max(np.abs(corr_closed - corr_fock)))
    if abs(ccfg.z) <= 2.0:
        _require(max_discrepancy < 1e-10,
                 f"series correlation deviates from the closed form by "
                 f"{max_discrepancy:.3e} (tolerance 1e-10)")

    times = revival_times(config.omega, area_beta, 5)

    # --- stage 3: rotation map ----------------------------------------
    theta0 = config.theta0
    if theta0 is None:
        theta0 = math.atan2(ccfg.z.imag, ccfg.z.real)
    rparams = rotation_params(config.omega, config.cycle_period, area_beta,
                              theta0=theta0, epsilon=config.epsilon)
    rclass = classify_rotation(rparams.rotation_number,
                               q_max=config.classify_q_max,
                               tol=config.classify_tol)
    delta = rparams.frac_part

    # --- stage 4: gap statistics --------------------------------------
    bound = near_revival_bound(z_sq, config.epsilon)
    analytic = None
    analytic_error = None
    identity_res = None
    mean_analytic = None
    if rclass.kind == "irrational" and 0.0 < delta < 1.0:
        try:
            dist = gap_distribution(delta, config.epsilon,
                                    q_max=config.classify_q_max,
                                    tol=config.classify_tol)
        except (SearchBoundExceeded, ValidationError) as exc:
            analytic_error = str(exc)
        else:
            identity_res = identity_residual(dist.k1, dist.k2, delta)
            mean_analytic = mean_recurrence(dist)
            probs = dist.by_gap()
            _require(abs(sum(probs.values()) - 1.0) <= 1e-12,
                     "gap probabilities do not sum to 1")
            _require(abs(mean_analytic - 1.0 / config.epsilon) <= 1e-9,
                     "analytic mean return time is not 1/epsilon")
            _require(abs(identity_res) < 1e-9,
                     f"first-return identity residual {identity_res:.3e} "
                     "out of tolerance")
            analytic = {
                "k1": dist.k1,
                "k2": dist.k2,
                "frac_k1_delta": dist.frac_k1,
                "frac_k2_delta": dist.frac_k2,
                "gaps": [int(g) for g in sorted(probs)],
                "probabilities": [probs[g] for g in sorted(probs)],
                "mean": mean_analytic,
            }
    else:
        analytic_error = (f"rotation number classifies as {rclass.kind}; "
                          "analytic gap weights need an irrational rotation")

    empirical = None
    hits_block = None
    orbit_block = None
    if config.iterations > 0 and 0.0 < delta < 1.0:
        record = empirical_gaps(delta, config.epsilon, config.iterations)
        freqs = record.frequencies()
        if analytic is not None:
            allowed = set(analytic["gaps"])
            _require(set(freqs) <= allowed,
                     f"empirical gaps {sorted(freqs)} escape the predicted "
                     f"support {sorted(allowed)}")
        empirical = {
            "iterations": record.iterations,
            "n_hits": record.n_hits,
            "transient_discarded": record.transient_discarded,
            "gap_values": [int(g) for g in sorted(freqs)],
            "frequencies": [freqs[g] for g in sorted(freqs)],
            "mean": record.mean_gap() if record.n_gaps else None,
            "mean_stderr": (record.gap_stderr() if record.n_gaps >= 2 else None),
        }

        # correlation at each recorded near revival, against the epsilon bound;
        # cos(2 pi {k delta}) equals cos(k (omega T + area_beta)) by periodicity
        # and stays accurate at large k because {k delta} is computed exactly
        num, bits = dyadic_unit(delta)
        hit_ks = record.hit_indices
        fracs = ((hit_ks.astype(object) * num) % (1 << bits)) / float(2.0 ** bits) \
            if bits > 64 else None
        if fracs is None:
            mask = np.uint64((1 << bits) - 1) if bits < 64 else np.uint64(2 ** 64 - 1)
            residues = (hit_ks.astype(np.uint64) * np.uint64(num)) & mask
            fracs = residues.astype(np.float64) / float(2.0 ** bits)
        hit_corr = np.exp(2.0 * z_sq * (np.cos(TWO_PI * fracs) - 1.0))
        min_hit_corr = float(hit_corr.min()) if hit_corr.size else None
        if min_hit_corr is not None:
            _require(min_hit_corr > bound,
                     f"near-revival correlation {min_hit_corr!r} fell below "
                     f"the bound {bound!r}")
        hits_block = {
            "count": int(hit_ks.size),
            "min_correlation": min_hit_corr,
            "bound": bound,
            "bound_satisfied": (min_hit_corr is None or min_hit_corr > bound),
        }

        n_orbit = min(config.orbit_points, config.iterations)
        if n_orbit > 0:
            theta_series = orbit_angles(rparams.theta0,
                                        rparams.rotation_number, n_orbit)
            hit_set = set(int(k) for k in hit_ks[hit_ks <= n_orbit])
            orbit_block = {
                "k": list(range(1, n_orbit + 1)),
                "theta": [float(t) for t in theta_series],
                "is_hit": [int(k in hit_set) for k in range(1, n_orbit + 1)],
            }

    report = {
        "config": {
            "omega": config.omega,
            "cycle_period": config.cycle_period,
            "z": [ccfg.z.real, ccfg.z.imag],
            "epsilon": config.epsilon,
            "iterations": config.iterations,
            "theta0": rparams.theta0,
            "alpha_loop_points": None if alpha_loop is None else len(alpha_loop),
            "beta_loop_points": len(beta_loop),
        },
        "phases": {
            "area_alpha": area_alpha,
            "area_beta": area_beta,
            "gamma0": gamma0,
            "gamma1": gamma1,
            "orientation_convention": "counter-clockwise positive",
        },
        "revival": {
            "omega_T": omega_T,
            "total_phase_per_cycle": total_phase,
            "nearest_multiple_of_2pi": int(nearest_p),
            "residual": revival_residual,
            "exact_revival": bool(exact_revival),
            "revival_times": [float(t) for t in times],
            "stagger_shift": -area_beta / config.omega,
        },
        "rotation": {
            "rotation_number": rparams.rotation_number,
            "int_part": rparams.int_part,
            "frac_part": delta,
            "theta0": rparams.theta0,
            "epsilon": config.epsilon,
            "classification": {
                "kind": rclass.kind,
                "p": rclass.p,
                "q": rclass.q,
                "period": rclass.period,
            },
        },
        "correlation": {
            "z_abs_sq": z_sq,
            "truncation": ccfg.truncation,
            "cycles": int(config.correlation_cycles),
            "closed": [float(v) for v in corr_closed],
            "fock": [float(v) for v in corr_fock],
            "max_abs_discrepancy": max_discrepancy,
            "near_revival_bound": bound,
        },
        "gaps": {
            "epsilon": config.epsilon,
            "delta": delta,
            "analytic": analytic,
            "analytic_unavailable": analytic_error,
            "identity_residual": identity_res,
            "empirical": empirical,
        },
        "hits": hits_block,
        "orbit": orbit_block,
    }
    return ExperimentReport(report)


def emit_plot_data(report: ExperimentReport, kind: str, out_path) -> Path:
    """Write one plot-ready CSV extracted from a report.

    Kinds: "correlation-series" (k, correlation_closed, correlation_fock,
    bound), "gap-histogram" (gap, analytic_F, empirical_frequency),
    "orbit-angles" (k, theta_k, is_hit).
    """
    if kind not in PLOT_KINDS:
        raise ValidationError(
            f"unknown plot kind {kind!r}; expected one of {', '.join(PLOT_KINDS)}")
    data = report.data
    out_path = Path(out_path)
    rows: list[list] = []
    if kind == "correlation-series":
        corr = data.get("correlation")
        if not corr:
            raise ValidationError("report has no correlation series")
        header = ["k", "correlation_closed", "correlation_fock", "bound"]
        for i in range(corr["cycles"]):
            rows.append([i + 1, corr["closed"][i], corr["fock"][i],
                         corr["near_revival_bound"]])
    elif kind == "gap-histogram":
        gaps_block = data.get("gaps") or {}
        analytic = gaps_block.get("analytic")
        empirical = gaps_block.get("empirical")
        if not analytic and not empirical:
            raise ValidationError("report has no gap statistics to plot")
        header = ["gap", "analytic_F", "empirical_frequency"]
        a_map = (dict(zip(analytic["gaps"], analytic["probabilities"]))
                 if analytic else {})
        e_map = (dict(zip(empirical["gap_values"], empirical["frequencies"]))
                 if empirical else {})
        for g in sorted(set(a_map) | set(e_map)):
            rows.append([g, a_map.get(g, ""), e_map.get(g, "")])
    else:  # orbit-angles
        orbit_block = data.get("orbit")
        if not orbit_block:
            raise ValidationError(
                "report has no orbit series (run with iterations > 0)")
        header = ["k", "theta_k", "is_hit"]
        rows = [[k, t, h] for k, t, h in zip(orbit_block["k"],
                                             orbit_block["theta"],
                                             orbit_block["is_hit"])]
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return out_path
