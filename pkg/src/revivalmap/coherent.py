"""Coherent-state correlations and revival times under cyclic driving.

The state is handled purely through its Poissonian number-basis
coefficients and the per-cycle phases of the levels; no operator matrices
or position-space wavefunctions appear. After ``k`` cycles of period
``T`` the squared overlap with the initial state is

    exp(2 |z|^2 (cos(k (omega T + area_beta)) - 1)),

so exact revivals need ``omega T + area_beta`` to be a multiple of 2 pi,
and the revival times are the plain-oscillator ones shifted by the time
needed to sweep the Hannay angle. `correlation_fock` recomputes the same
quantity from a truncated coefficient sum and serves as the independent
numerical check of the closed form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .geometry import PhaseData, berry_phase

__all__ = [
    "FOCK_TAIL_TOL",
    "ADIABATIC_OMEGA_T",
    "fock_cutoff",
    "fock_coefficients",
    "CoherentConfig",
    "static_correlation",
    "correlation_closed",
    "correlation_fock",
    "phase_factorization_check",
    "revival_times",
    "near_revival_bound",
]

TWO_PI = 2.0 * math.pi

# Poisson weight allowed beyond the truncation level.
FOCK_TAIL_TOL = 1e-12

# Advisory slow-driving threshold: omega*T below this draws a warning,
# never an error (the phase formulas are exact regardless).
ADIABATIC_OMEGA_T = 10.0


def fock_cutoff(z_abs_sq: float) -> int:
    """Truncation level with Poisson tail far below `FOCK_TAIL_TOL`.

    Mean plus ten standard deviations plus a constant floor; adequate for
    amplitudes up to |z| = 4.
    """
    if z_abs_sq < 0:
        raise ValidationError("|z|^2 must be non-negative")
    return math.ceil(z_abs_sq + 10.0 * math.sqrt(z_abs_sq + 1.0) + 20.0)


def fock_coefficients(z: complex, n_max: int) -> np.ndarray:
    """Number-basis coefficients c_n = e^{-|z|^2/2} z^n / sqrt(n!) for n <= n_max.

    Uses the stable recursion c_{n+1} = c_n * z / sqrt(n+1).
    """
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")
    z = complex(z)
    c = np.empty(n_max + 1, dtype=np.complex128)
    c[0] = math.exp(-0.5 * abs(z) ** 2)
    if n_max >= 1:
        ratios = z / np.sqrt(np.arange(1, n_max + 1, dtype=np.float64))
        c[1:] = c[0] * np.cumprod(ratios)
    return c


@dataclass
class CoherentConfig:
    """Inputs for the per-cycle correlation computations.

    Attributes
    ----------
    z : complex
        Coherent amplitude (dimensionless).
    omega : float
        Oscillator angular frequency, > 0.
    cycle_period : float
        Duration T of one parameter cycle, > 0.
    phases : PhaseData
        Loop areas from the geometry stage.
    truncation : int, optional
        Number-basis cutoff; defaults to `fock_cutoff`(|z|^2).
    """

    z: complex
    omega: float
    cycle_period: float
    phases: PhaseData
    truncation: int | None = field(default=None)

    def __post_init__(self):
        self.z = complex(self.z)
        if not (self.omega > 0.0) or not math.isfinite(self.omega):
            raise ValidationError(f"omega must be positive, got {self.omega}")
        if not (self.cycle_period > 0.0) or not math.isfinite(self.cycle_period):
            raise ValidationError(
                f"cycle_period must be positive, got {self.cycle_period}")
        if self.truncation is None:
            self.truncation = fock_cutoff(abs(self.z) ** 2)
        elif self.truncation < 1:
            raise ValidationError("truncation must be a positive integer")
        if self.omega * self.cycle_period < ADIABATIC_OMEGA_T:
            warnings.warn(
                f"omega*T = {self.omega * self.cycle_period:.3g} is small; the "
                "slow-driving picture behind the per-cycle phases may be "
                "inaccurate (results are still computed exactly)",
                stacklevel=2)

    @property
    def z_abs_sq(self) -> float:
        return abs(self.z) ** 2

    @property
    def omega_T(self) -> float:
        return self.omega * self.cycle_period


def static_correlation(zeta_abs_sq: float, omega_t: float) -> float:
    """Squared autocorrelation of an undriven coherent state at phase omega*t."""
    if zeta_abs_sq < 0:
        raise ValidationError("|zeta|^2 must be non-negative")
    return math.exp(2.0 * zeta_abs_sq * (math.cos(omega_t) - 1.0))


def correlation_closed(z_abs_sq: float, omega_T: float, area_beta: float,
                       cycles: int = 1):
    """Squared overlap with the initial state after ``cycles`` parameter cycles.

    Closed form ``exp(2 |z|^2 (cos(cycles*(omega_T + area_beta)) - 1))``;
    equals 1 exactly when the total phase is a multiple of 2 pi.
    ``cycles`` may be an integer array, in which case an array is returned.
    """
    if z_abs_sq < 0:
        raise ValidationError("|z|^2 must be non-negative")
    k = np.asarray(cycles)
    if np.any(k < 1):
        raise ValidationError("cycles must be positive")
    out = np.exp(2.0 * z_abs_sq * (np.cos(k * (omega_T + area_beta)) - 1.0))
    return float(out) if k.ndim == 0 else out


def _weights_checked(config: CoherentConfig) -> np.ndarray:
    c = fock_coefficients(config.z, config.truncation)
    w = np.abs(c) ** 2
    if w.sum() < 1.0 - FOCK_TAIL_TOL:
        raise ValidationError(
            f"truncation {config.truncation} leaves a Poisson tail above "
            f"{FOCK_TAIL_TOL:g} for |z| = {abs(config.z):.3g}; "
            f"use at least {fock_cutoff(config.z_abs_sq)}")
    return w

def correlation_fock(config: CoherentConfig, cycles: int = 1) -> float:
    """Truncated-sum evaluation of the after-k-cycles correlation.

    Independent numerical oracle for `correlation_closed`: computes
    ``|sum_n |c_n|^2 exp(-i k (gamma_n - (n+1/2) omega T))|^2`` with the
    per-level phases gamma_n from `berry_phase`.
    """
    if cycles < 1:
        raise ValidationError("cycles must be positive")
    w = _weights_checked(config)
    n = np.arange(config.truncation + 1, dtype=np.float64)
    phase = berry_phase(n, config.phases) - (n + 0.5) * config.omega_T
    amp = np.sum(w * np.exp(-1j * cycles * phase))
    return float(abs(amp) ** 2)


def phase_factorization_check(config: CoherentConfig) -> float:
    """Overlap |<w|state after one cycle>| with w = z e^{-i(omega T + area_beta)}.

    One cycle multiplies the level-n coefficient by the dynamical phase
    e^{-i(n+1/2) omega T} and the geometric phase e^{+i gamma_n}; the net
    effect is a global phase times a rotation of the coherent label by
    -(omega T + area_beta). The returned modulus therefore equals 1 up to
    truncation error.
    """
    n = np.arange(config.truncation + 1, dtype=np.float64)
    gamma = berry_phase(n, config.phases)
    c = fock_coefficients(config.z, config.truncation)
    evolved = c * np.exp(-1j * ((n + 0.5) * config.omega_T - gamma))
    rotated = config.z * np.exp(-1j * (config.omega_T + config.phases.area_beta))
    c_rot = fock_coefficients(rotated, config.truncation)
    _weights_checked(config)
    return float(abs(np.vdot(c_rot, evolved)))


def revival_times(omega: float, area_beta: float, p_max: int) -> np.ndarray:
    """Cycle periods that produce exact revivals, for p = 1..p_max.

    ``T_p = 2 pi p / omega - area_beta / omega`` (positive values only):
    the undeformed revival times staggered by the time needed to cover the
    Hannay angle. Computed so that the staggered list is bit-for-bit the
    unstaggered list minus ``area_beta/omega``.
    """
    if not omega > 0:
        raise ValidationError("omega must be positive")
    if p_max < 1:
        raise ValidationError("p_max must be >= 1")
    p = np.arange(1, p_max + 1, dtype=np.float64)
    times = TWO_PI * p / omega - area_beta / omega
    times = times[times > 0.0]
    if times.size == 0:
        raise ValidationError(
            "no positive revival times for p <= p_max; increase p_max")
    return times


def near_revival_bound(z_abs_sq: float, epsilon: float) -> float:
    """Lower bound ``1 - 4 |z|^2 pi^2 eps^2`` on the correlation at a near revival."""
    if z_abs_sq < 0:
        raise ValidationError("|z|^2 must be non-negative")
    if not 0.0 < epsilon < 0.5:
        raise ValidationError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    return 1.0 - 4.0 * z_abs_sq * math.pi ** 2 * epsilon ** 2
