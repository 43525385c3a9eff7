"""Minkowski sums of two symplectic ellipsoids: boundary parameterization,
convexity verification, and exact capacities through the dual support norm.

The boundary of E(a,b) + E(c,d) respects the two complex factors. With
psi in [0, pi/2] it is traced by radii

    g(psi) = cos psi * (a + c^2 / (a f(psi)))
    h(psi) = sin psi * (b + d^2 / (b f(psi)))
    f(psi) = sqrt((c/a)^2 cos^2 psi + (d/b)^2 sin^2 psi)

and the moment-map image of the sum is the region under the curve
psi -> (pi g^2, pi h^2).  The dual norm of an index vector v = (v1, v2)
over that region has an exact rational branch formula: with

    D = v2 b^2 - v1 a^2,   N = v1 c^2 - v2 d^2,   f0 = N / D,

if D < 0 and f0 lies strictly inside (c/a, d/b), the norm is
pi (b^2 c^2 - a^2 d^2) v1 v2 (1/N + 1/D); otherwise it is
max(v1 pi (a+c)^2, v2 pi (b+d)^2).  Capacities are minima of these norms
over v1 + v2 = k, so every capacity computed here is an exact rational
multiple of pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .domains import (
    Ellipsoid,
    EllipsoidPair,
    IndexVector,
    ellipsoid_capacity,
    ellipsoid_norm_argmin,
)
from .exact import PiRational

__all__ = [
    "BoundaryPoint",
    "OmegaSample",
    "ConvexityReport",
    "StrictnessReport",
    "cy_boundary_point",
    "general_cy_map",
    "omega_curve",
    "convexity_check",
    "support_norm",
    "sum_capacity",
    "sum_capacity_with_argmin",
    "strictness_check",
]


@dataclass(frozen=True)
class BoundaryPoint:
    """Radial coordinates (g, h) of a boundary point of the sum at angle psi."""

    g: float
    h: float
    psi: float


@dataclass(frozen=True)
class OmegaSample:
    """One point (x1, x2) = (pi g^2, pi h^2) of the moment-image boundary curve."""

    psi: float
    x1: float
    x2: float


@dataclass(frozen=True)
class ConvexityReport:
    ok: bool
    worst_C1: float
    worst_C2: float
    grid: int


@dataclass(frozen=True)
class StrictnessReport:
    """Outcome of comparing c_k(sum) against c_k(E(a+c, b+d))."""

    strict: bool
    c_sum: PiRational
    c_inner: PiRational
    inner_argmin: IndexVector
    criterion_strict: bool
    criterion_agrees: bool


def _require_nonproportional(pair: EllipsoidPair, op: str) -> None:
    if pair.proportional:
        raise ValueError(
            f"{op} requires a non-proportional pair; a proportional sum is the "
            "ellipsoid E(a+c, b+d), use the ellipsoid operations directly"
        )


def _float_radii(pair: EllipsoidPair) -> tuple[float, float, float, float]:
    a, b, c, d = pair.radii
    return float(a), float(b), float(c), float(d)


def cy_boundary_point(psi: float, pair: EllipsoidPair) -> BoundaryPoint:
    """Boundary point of the sum at angle psi in [0, pi/2].

    Endpoints are computed from the exact radii: g(0) = a + c, h(pi/2) = b + d.
    """
    _require_nonproportional(pair, "cy_boundary_point")
    if not 0.0 <= psi <= math.pi / 2:
        raise ValueError(f"psi must lie in [0, pi/2], got {psi}")
    a, b, c, d = pair.radii
    if psi == 0.0:
        return BoundaryPoint(float(a + c), 0.0, 0.0)
    if psi == math.pi / 2:
        return BoundaryPoint(0.0, float(b + d), psi)
    af, bf, cf, df = _float_radii(pair)
    cp, sp = math.cos(psi), math.sin(psi)
    f = math.sqrt((cf / af) ** 2 * cp * cp + (df / bf) ** 2 * sp * sp)
    g = cp * (af + cf * cf / (af * f))
    h = sp * (bf + df * df / (bf * f))
    return BoundaryPoint(g, h, psi)


def general_cy_map(a1, a2, x) -> np.ndarray:
    """Boundary point of A1(B) + A2(B) at the unit vector x in R^n.

    Evaluates A1 x + A2 (A2^T A1^{-1} x / |A2^T A1^{-1} x|) in floating
    point.  Raises on a singular A1, a zero denominator vector, or a
    non-unit x (checked to 1e-12).
    """
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    x = np.asarray(x, dtype=float)
    if a1.ndim != 2 or a1.shape[0] != a1.shape[1] or a1.shape != a2.shape:
        raise ValueError(f"A1 and A2 must be equal square matrices, got {a1.shape} and {a2.shape}")
    if x.shape != (a1.shape[0],):
        raise ValueError(f"x must be a vector of length {a1.shape[0]}, got shape {x.shape}")
    if abs(np.linalg.norm(x) - 1.0) > 1e-12:
        raise ValueError(f"x must be a unit vector, |x| = {np.linalg.norm(x)!r}")
    try:
        y = np.linalg.solve(a1, x)
    except np.linalg.LinAlgError:
        raise ValueError("A1 is singular") from None
    w = a2.T @ y
    norm = np.linalg.norm(w)
    if norm == 0.0:
        raise ValueError("A2^T A1^{-1} x vanishes; the map is undefined at this x")
    return a1 @ x + a2 @ (w / norm)


def omega_curve(pair: EllipsoidPair, samples: int) -> list[OmegaSample]:
    """samples+1 moment-image boundary points at uniformly spaced psi.

    The first and last entries are exactly (pi (a+c)^2, 0) and
    (0, pi (b+d)^2) as floats of the rational radii.
    """
    _require_nonproportional(pair, "omega_curve")
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    a, b, c, d = pair.radii
    af, bf, cf, df = _float_radii(pair)
    psis = 0.5 * math.pi * np.arange(samples + 1) / samples
    x1, x2 = _kernels.omega_xy(af, bf, cf, df, psis)
    out = [OmegaSample(float(p), float(u), float(w)) for p, u, w in zip(psis, x1, x2)]
    out[0] = OmegaSample(0.0, math.pi * float((a + c) ** 2), 0.0)
    out[-1] = OmegaSample(float(psis[-1]), 0.0, math.pi * float((b + d) ** 2))
    return out


def convexity_check(pair: EllipsoidPair, grid: int) -> ConvexityReport:
    """Verify C' < 0 and C'' < 0 at grid interior angles.

    C is the function with C(pi g^2) = pi h^2 along the boundary curve.
    Closed forms are evaluated at psi = j*(pi/2)/(grid+1), j = 1..grid.
    Besides strict negativity, the structural facts are asserted: C' is a
    ratio of positive quantities with a leading minus sign, and C'' has
    the sign of g' (negative on the open quadrant).
    """
    _require_nonproportional(pair, "convexity_check")
    if grid < 1:
        raise ValueError(f"grid must be >= 1, got {grid}")
    af, bf, cf, df = _float_radii(pair)
    psis = 0.5 * math.pi * np.arange(1, grid + 1) / (grid + 1)
    c1, c2, gp = _kernels.convexity_grid(af, bf, cf, df, psis)
    signs_match = bool(np.all((c2 < 0) == (gp < 0)))
    ok = bool(np.all(c1 < 0) and np.all(c2 < 0) and np.all(gp < 0) and signs_match)
    return ConvexityReport(ok=ok, worst_C1=float(c1.max()), worst_C2=float(c2.max()), grid=grid)


def support_norm(v: IndexVector, pair: EllipsoidPair) -> PiRational:
    """Exact dual norm of v over the moment image of the sum.

    Branches on the critical point f0 = N/D described in the module
    docstring; every comparison is exact rational arithmetic.
    """
    _require_nonproportional(pair, "support_norm")
    a, b, c, d = pair.radii
    return PiRational(_support_norm_coeff(v.v1, v.v2, a, b, c, d))


def _support_norm_coeff(v1: int, v2: int, a: Fraction, b: Fraction, c: Fraction, d: Fraction) -> Fraction:
    a2, b2, c2, d2 = a * a, b * b, c * c, d * d
    D = v2 * b2 - v1 * a2
    N = v1 * c2 - v2 * d2
    if D != 0:
        f0 = N / D
        if D < 0 and c / a < f0 < d / b:
            return (b2 * c2 - a2 * d2) * v1 * v2 * (Fraction(1) / N + Fraction(1) / D)
    return max(v1 * (a + c) ** 2, v2 * (b + d) ** 2)


def sum_capacity(k: int, pair: EllipsoidPair) -> PiRational:
    """k-th capacity of E(a,b) + E(c,d)."""
    return sum_capacity_with_argmin(k, pair)[0]


def sum_capacity_with_argmin(k: int, pair: EllipsoidPair) -> tuple[PiRational, IndexVector]:
    """Capacity of the sum together with the minimizing index vector.

    Proportional pairs reduce to the ellipsoid E(a+c, b+d).  Otherwise the
    minimum runs over v1 = 0..k with ties broken toward the smallest v1;
    since every norm is at least v1 * pi (a+c)^2, the scan stops once that
    lower bound passes the current best.
    """
    if k < 1:
        raise ValueError(f"capacity index k must be a positive integer, got {k!r}")
    if pair.proportional:
        _, argmin = ellipsoid_norm_argmin(k, pair.outer_ellipsoid)
        return ellipsoid_capacity(k, pair.outer_ellipsoid), argmin
    a, b, c, d = pair.radii
    ac2 = (a + c) ** 2
    best = None
    best_v1 = 0
    for v1 in range(k + 1):
        if best is not None and v1 * ac2 >= best:
            break
        coeff = _support_norm_coeff(v1, k - v1, a, b, c, d)
        if best is None or coeff < best:
            best = coeff
            best_v1 = v1
    return PiRational(best), IndexVector(best_v1, k - best_v1)


def strictness_check(k: int, pair: EllipsoidPair) -> StrictnessReport:
    """Is c_k(sum) strictly larger than c_k(E(a+c, b+d))?

    ``strict`` is decided from the exact capacities.  The report also
    evaluates the sufficient criterion on the inner ellipsoid's minimizing
    vector v = (v1, k-v1): strictness is implied when
    (v1 c^2 - (k-v1) d^2) / ((k-v1) b^2 - v1 a^2) lies in (c/a, d/b) and
    (k-v1) b^2 < v1 a^2.
    """
    if k < 1:
        raise ValueError(f"capacity index k must be a positive integer, got {k!r}")
    a, b, c, d = pair.radii
    inner = pair.outer_ellipsoid
    c_inner = ellipsoid_capacity(k, inner)
    _, argmin = ellipsoid_norm_argmin(k, inner)
    c_sum = sum_capacity(k, pair)
    strict = c_sum.coeff > c_inner.coeff
    v1, v2 = argmin.v1, argmin.v2
    D = v2 * b * b - v1 * a * a
    N = v1 * c * c - v2 * d * d
    criterion = False
    if D < 0:
        f0 = N / D
        criterion = c / a < f0 < d / b
    return StrictnessReport(
        strict=strict,
        c_sum=c_sum,
        c_inner=c_inner,
        inner_argmin=argmin,
        criterion_strict=criterion,
        criterion_agrees=(criterion == strict),
    )
