"""Gaussian lattice sums and their symplectic duals.

For a unit-density lattice lat,

    theta_L(b; alpha)    = sum_{l in lat} exp(-pi alpha |l + b|^2)
    thetahat_L(b; alpha) = sum_{l in lat} exp(-pi alpha |l|^2) exp(2 pi i sigma(b, l))

and the symplectic Poisson summation formula gives
``theta_L(b; alpha) = thetahat_L(b; 1/alpha) / alpha``.

Every sum is truncated to a disc and the discarded mass is bounded by
counting lattice points in unit annuli (each point owns a disjoint
fundamental cell inside a slightly larger disc).
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

from .errors import CapacityError, DomainError, NonConvergence
from .lattice import Lattice2D, enumerate_points, sigma
from .special import DEFAULT_CONTROL, SeriesControl

MAX_RADIUS_GROWTH = 12


class TailBound(NamedTuple):
    radius: float
    discarded_mass_bound: float


class ThetaSum(NamedTuple):
    value: float
    tail: TailBound


def _cell_diameter(lat: Lattice2D) -> float:
    v1, v2 = lat.basis[:, 0], lat.basis[:, 1]
    return float(max(np.linalg.norm(v1 + v2), np.linalg.norm(v1 - v2)))


def tail_bound(lat: Lattice2D, scale: float, offset: float, radius: float) -> float:
    """Upper bound for sum over |l| > radius of exp(-scale (|l| - offset)^2), radius >= offset."""
    diam = _cell_diameter(lat)
    total = 0.0
    for j in range(10_000):
        r = radius + j
        count = math.pi * (r + 1.0 + diam) ** 2 * lat.density
        term = count * math.exp(-scale * (r - offset) ** 2)
        total += term
        if j > 0 and term < 1e-18 * total or term == 0.0:
            break
    return total


def certified_sum(lat: Lattice2D, scale: float, offset: float,
                  evaluate: Callable[[np.ndarray], float],
                  ctl: SeriesControl | None = None) -> tuple[float, TailBound, np.ndarray]:
    """Evaluate ``evaluate(points)`` on a disc large enough that the Gaussian
    envelope exp(-scale (|l| - offset)^2) outside it is below rel_tol * |value|.

    Returns the value, its tail certificate and the points used.
    """
    ctl = DEFAULT_CONTROL if ctl is None else ctl
    if not scale > 0:
        raise DomainError(f"Gaussian scale must be positive, got {scale}")
    radius = max(3.0, math.sqrt(math.log(1.0 / ctl.rel_tol) / scale) + offset + 2.0)
    for _ in range(MAX_RADIUS_GROWTH):
        try:
            pts = enumerate_points(lat, radius, cap=4 * ctl.max_terms)
        except CapacityError as exc:
            raise NonConvergence(f"lattice sum needs radius > {radius:.3g}: {exc}") from exc
        value = evaluate(pts)
        tail = tail_bound(lat, scale, offset, radius)
        if tail < ctl.rel_tol * abs(value):
            return value, TailBound(radius, tail), pts
        radius *= 1.5
    raise NonConvergence(f"lattice sum tail not certified up to radius {radius:.3g}")


def gaussian_lattice_sum(lat: Lattice2D, scale: float, shift=None, phase=None,
                         ctl: SeriesControl | None = None) -> ThetaSum:
    """sum_l exp(-scale |l + shift|^2) cos(2 pi sigma(phase, l)) over any lattice.

    The cosine is the real part of the modulated sum; the sine part cancels
    over +-l and is checked to do so.
    """
    shift = np.zeros(2) if shift is None else np.asarray(shift, dtype=float)
    phase = None if phase is None else np.asarray(phase, dtype=float)

    def evaluate(pts):
        d = pts + shift
        w = np.exp(-scale * np.einsum("ij,ij->i", d, d))
        if phase is None:
            return float(np.sum(w))
        arg = 2.0 * math.pi * sigma(phase, pts)
        re = float(np.sum(w * np.cos(arg)))
        im = float(np.sum(w * np.sin(arg)))
        assert abs(im) < 1e-12 * max(abs(re), 1e-300) + 1e-15 * float(np.sum(w)), im
        return re

    value, tail, _ = certified_sum(lat, scale, float(np.linalg.norm(shift)), evaluate, ctl)
    return ThetaSum(value, tail)


def _require_unit_density(lat: Lattice2D):
    if abs(lat.density - 1.0) > 1e-12:
        raise DomainError(f"lattice theta functions are defined for unit density, got {lat.density}")


def _check_alpha(alpha):
    if not (alpha > 0 and math.isfinite(alpha)):
        raise DomainError(f"alpha must be positive, got {alpha}")


def theta_lattice(lat: Lattice2D, b, alpha: float, ctl: SeriesControl | None = None) -> ThetaSum:
    """Shifted Gaussian lattice sum theta_L(b; alpha) for a unit-density lattice."""
    _require_unit_density(lat)
    _check_alpha(alpha)
    return gaussian_lattice_sum(lat, math.pi * alpha, shift=b, ctl=ctl)


def theta_lattice_dual(lat: Lattice2D, b, alpha: float, ctl: SeriesControl | None = None) -> ThetaSum:
    """Modulated Gaussian lattice sum thetahat_L(b; alpha) for a unit-density lattice."""
    _require_unit_density(lat)
    _check_alpha(alpha)
    return gaussian_lattice_sum(lat, math.pi * alpha, phase=b, ctl=ctl)


def check_functional_equation(lat: Lattice2D, b, alpha: float, ctl: SeriesControl | None = None) -> float:
    """Relative residual |theta_L(b; alpha) - thetahat_L(b; 1/alpha) / alpha| / theta_L(b; alpha)."""
    lhs = theta_lattice(lat, b, alpha, ctl).value
    rhs = theta_lattice_dual(lat, b, 1.0 / alpha, ctl).value / alpha
    return abs(lhs - rhs) / lhs
