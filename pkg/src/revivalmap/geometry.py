"""Parameter-space loops and the geometric phases they induce.

Loops are closed polygonal chains in a complex parameter plane, traversed
in list order with an implicit edge from the last point back to the first.
Counter-clockwise traversal is the positive orientation throughout; every
area here is signed and reversing a loop negates it.

Two area functionals feed the phase formulas:

* `euclidean_area` -- plain signed area (shoelace formula), for loops of
  the displacement parameter.
* `hyperbolic_area` -- the invariant area weighted by sinh(2r)/r, for
  loops of the squeezing parameter. It is evaluated as the closed line
  integral of the potential (cosh(2r) - 1)/2 dtheta (see README for the
  derivation); the subtracted constant makes the potential vanish at the
  origin, so loops through or around the origin need no special casing.

The phase of the n-th level after one parameter cycle is an affine
function of n: ``-2 * area_alpha - (n + 1/2) * area_beta``; the slope
(the Hannay angle) is minus the hyperbolic area.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = [
    "ParametricLoop",
    "PhaseData",
    "circle_loop",
    "ellipse_loop",
    "loop_from_descriptor",
    "euclidean_area",
    "hyperbolic_area",
    "berry_phase",
    "areas_from_phases",
    "weyl_composition_phase",
]


@dataclass(frozen=True)
class ParametricLoop:
    """Closed polygonal chain in a complex parameter plane.

    Parameters
    ----------
    points : (N, 2) array_like
        Vertices as (x, y) pairs, N >= 3. The edge from the last vertex
        back to the first is implicit; do not repeat the first vertex.

    Raises
    ------
    ValidationError
        Fewer than 3 points, non-finite coordinates, or a zero-length
        edge (identical consecutive vertices, including the closing edge).
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValidationError("loop points must be an (N, 2) array of (x, y) pairs")
        if pts.shape[0] < 3:
            raise ValidationError(f"a loop needs at least 3 points, got {pts.shape[0]}")
        if not np.isfinite(pts).all():
            raise ValidationError("loop points must be finite (no NaN/inf)")
        same = (pts == np.roll(pts, -1, axis=0)).all(axis=1)
        if same.any():
            i = int(np.nonzero(same)[0][0])
            raise ValidationError(
                f"zero-length edge at index {i}: consecutive points are identical "
                "(drop a repeated closing point if the loop was stored closed)")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    def reverse(self) -> "ParametricLoop":
        """Same loop traversed the opposite way (negates both areas)."""
        return ParametricLoop(self.points[::-1].copy())


@dataclass(frozen=True)
class PhaseData:
    """The two signed loop areas that determine every cycle phase.

    ``area_alpha`` is the Euclidean area of the displacement-parameter
    loop; ``area_beta`` is the hyperbolic invariant area of the
    squeezing-parameter loop and equals the Hannay angle. Both are in
    radians (they enter phases directly).
    """

    area_alpha: float
    area_beta: float


def _orientation_sign(orientation: str) -> float:
    if orientation not in ("ccw", "cw"):
        raise ValidationError(f"orientation must be 'ccw' or 'cw', got {orientation!r}")
    return 1.0 if orientation == "ccw" else -1.0


def circle_loop(center=(0.0, 0.0), radius=1.0, n_samples=256,
                orientation="ccw") -> ParametricLoop:
    """Circle sampled at uniform angular steps, starting at angle 0."""
    center = _as_point(center, "circle center")
    if not (radius > 0.0) or not math.isfinite(radius):
        raise ValidationError(f"circle radius must be positive, got {radius}")
    if n_samples < 3:
        raise ValidationError("a circle needs n_samples >= 3")
    sgn = _orientation_sign(orientation)
    phi = sgn * 2.0 * np.pi * np.arange(n_samples) / n_samples
    pts = np.column_stack((center[0] + radius * np.cos(phi),
                           center[1] + radius * np.sin(phi)))
    return ParametricLoop(pts)


def ellipse_loop(center=(0.0, 0.0), semiaxes=(1.0, 1.0), rotation=0.0,
                 n_samples=256, orientation="ccw") -> ParametricLoop:
    """Axis-aligned ellipse rotated by `rotation`, uniformly sampled in parameter."""
    center = _as_point(center, "ellipse center")
    a, b = float(semiaxes[0]), float(semiaxes[1])
    if not (a > 0.0 and b > 0.0) or not (math.isfinite(a) and math.isfinite(b)):
        raise ValidationError(f"ellipse semiaxes must be positive, got {semiaxes}")
    if n_samples < 3:
        raise ValidationError("an ellipse needs n_samples >= 3")
    sgn = _orientation_sign(orientation)
    phi = sgn * 2.0 * np.pi * np.arange(n_samples) / n_samples
    x, y = a * np.cos(phi), b * np.sin(phi)
    c, s = math.cos(rotation), math.sin(rotation)
    pts = np.column_stack((center[0] + c * x - s * y,
                           center[1] + s * x + c * y))
    return ParametricLoop(pts)


def _as_point(obj, what: str) -> tuple[float, float]:
    if isinstance(obj, (int, float)):
        # scalar shorthand: a point on the real axis
        return float(obj), 0.0
    if isinstance(obj, complex):
        return obj.real, obj.imag
    seq = list(obj)
    if len(seq) != 2:
        raise ValidationError(f"{what} must be a scalar or an (x, y) pair")
    return float(seq[0]), float(seq[1])


def loop_from_descriptor(desc) -> ParametricLoop:
    """Build a loop from a descriptor: named primitive or explicit points.

    Accepted forms
    --------------
    * ``{"points": [[x, y], ...]}`` -- explicit polygon.
    * ``{"primitive": {"name": "circle", "center": ..., "radius": ...,
      "n_samples": ...}, "orientation": "ccw"}`` -- named primitive;
      also ``"ellipse"`` (center, semiaxes, rotation, n_samples) and
      ``"polygon"`` (vertices). Orientation defaults to "ccw".
    * a bare sequence of (x, y) pairs.
    """
    if isinstance(desc, ParametricLoop):
        return desc
    if isinstance(desc, dict):
        if ("points" in desc) == ("primitive" in desc):
            raise ValidationError(
                "loop descriptor must contain exactly one of 'points' or 'primitive'")
        if "points" in desc:
            return ParametricLoop(np.asarray(desc["points"], dtype=np.float64))
        prim = dict(desc["primitive"])
        orientation = desc.get("orientation", prim.pop("orientation", "ccw"))
        name = prim.pop("name", None)
        if name == "circle":
            return circle_loop(prim.get("center", (0.0, 0.0)),
                               prim.get("radius", 1.0),
                               prim.get("n_samples", 256),
                               orientation)
        if name == "ellipse":
            return ellipse_loop(prim.get("center", (0.0, 0.0)),
                                prim.get("semiaxes", (1.0, 1.0)),
                                prim.get("rotation", 0.0),
                                prim.get("n_samples", 256),
                                orientation)
        if name == "polygon":
            if "vertices" not in prim:
                raise ValidationError("polygon primitive needs a 'vertices' list")
            pts = np.asarray(prim["vertices"], dtype=np.float64)
            if orientation == "cw":
                pts = pts[::-1]
            return ParametricLoop(pts)
        raise ValidationError(
            f"unknown loop primitive {name!r} (expected circle, ellipse, or polygon)")
    return ParametricLoop(np.asarray(desc, dtype=np.float64))


def _loop_points(loop) -> np.ndarray:
    if not isinstance(loop, ParametricLoop):
        loop = ParametricLoop(np.asarray(loop, dtype=np.float64))
    return loop.points


def euclidean_area(loop) -> float:
    """Signed area of the closed chain (shoelace formula).

    Positive for counter-clockwise traversal; exact for polygons and
    second-order convergent for sampled smooth curves.
    """
    pts = _loop_points(loop)
    nxt = np.roll(pts, -1, axis=0)
    cross = pts[:, 0] * nxt[:, 1] - pts[:, 1] * nxt[:, 0]
    return 0.5 * float(np.sum(cross))


def hyperbolic_area(loop) -> float:
    """Signed invariant area with density sinh(2r)/r over the enclosed region.

    Evaluated as the closed line integral of (cosh(2r) - 1)/2 dtheta along
    the chain (trapezoid rule per edge, principal-branch angle increments).
    The potential vanishes at r = 0, so the result is correct for loops
    enclosing or touching the origin.

    Raises
    ------
    ValidationError
        If an edge passes exactly through the origin (it would subtend an
        angle of pi there, leaving the winding direction ambiguous).
        Edges with *both* ends at the origin cannot occur: loop validation
        rejects zero-length edges.
    """
    pts = _loop_points(loop)
    nxt = np.roll(pts, -1, axis=0)
    cross = pts[:, 0] * nxt[:, 1] - pts[:, 1] * nxt[:, 0]
    dot = pts[:, 0] * nxt[:, 0] + pts[:, 1] * nxt[:, 1]
    through_origin = (cross == 0.0) & (dot < 0.0)
    if through_origin.any():
        i = int(np.nonzero(through_origin)[0][0])
        raise ValidationError(
            f"edge {i} passes through the origin and subtends an angle of pi; "
            "resample the loop so no edge crosses the origin")
    # angle between consecutive position vectors, in (-pi, pi];
    # arctan2(0, 0) = 0 handles a vertex sitting exactly at the origin
    dtheta = np.arctan2(cross, dot)
    r_here = np.hypot(pts[:, 0], pts[:, 1])
    r_next = np.hypot(nxt[:, 0], nxt[:, 1])
    pot_here = 0.5 * (np.cosh(2.0 * r_here) - 1.0)
    pot_next = 0.5 * (np.cosh(2.0 * r_next) - 1.0)
    return float(np.sum(0.5 * (pot_here + pot_next) * dtheta))


def berry_phase(n, phases: PhaseData):
    """Cycle phase of level ``n``: ``-2*area_alpha - (n + 1/2)*area_beta``.

    Accepts a scalar or an array of level indices; radians.
    """
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise ValidationError("level index n must be non-negative")
    out = -2.0 * phases.area_alpha - (n_arr + 0.5) * phases.area_beta
    return float(out) if np.isscalar(n) or n_arr.ndim == 0 else out


def areas_from_phases(gamma0: float, gamma1: float) -> PhaseData:
    """Invert the two lowest cycle phases back to the loop areas.

    Exact affine inversion of `berry_phase` at n = 0, 1:
    ``area_alpha = (gamma1 - 3*gamma0)/4`` and ``area_beta = gamma0 - gamma1``.
    """
    return PhaseData(area_alpha=(gamma1 - 3.0 * gamma0) / 4.0,
                     area_beta=gamma0 - gamma1)


def weyl_composition_phase(alpha: complex, alpha_prime: complex) -> float:
    """Phase picked up when two displacements compose.

    Equals twice the signed area of the triangle with vertices 0,
    ``alpha_prime``, ``alpha + alpha_prime``; positive when those vertices
    run counter-clockwise.
    """
    a = complex(alpha)
    b = complex(alpha_prime)
    tip = a + b
    return b.real * tip.imag - b.imag * tip.real
