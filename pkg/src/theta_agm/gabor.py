"""Sharp frame bounds of Gaussian Gabor systems at even integer density.

Bounds are normalized so that ``A <= 1 <= B``.  For a lattice of density
``2N`` they are the extrema over z of the adjoint-lattice character sum

    F(z) = sum_{l in lat°} exp(-pi/2 |l|^2) cos(2 pi sigma(l, z)),

whose maximum sits at z = 0.  For square, hexagonal and rectangular lattices
the extrema are theta constants (closed forms below); ``bounds_janssen_numeric``
finds them by direct extremization instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, NamedTuple

import numpy as np
from scipy.optimize import minimize

from . import agm
from .errors import ConsistencyError, DensityError, DomainError, OptimizationError
from .lattice import Lattice2D, adjoint, sigma
from .lattice_theta import certified_sum
from .special import (HEX_DECAY, PI, Nome, SeriesControl, _cubic_a, _cubic_b,
                      _theta3, _theta4, _ctl, gamma_fn)

Method = Literal["closed_form", "janssen_numeric"]

JANSSEN_SCALE = PI / 2.0
LADDER_TOL = 1e-11
DENSITY_TOL = 1e-9
# nome decay rates beyond this are not resolvable as k^2 multiples in binary64
DECAY_CAP = 1e15


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float
    density: float
    lattice_kind: str
    method: Method
    aspect: float | None = None
    minimizer: tuple[float, float] | None = field(default=None, compare=False)
    maximizer: tuple[float, float] | None = field(default=None, compare=False)

    def __post_init__(self):
        slack = 1e-12
        if not (0.0 < self.lower <= 1.0 + slack and self.upper >= 1.0 - slack):
            raise ConsistencyError(f"frame bounds must satisfy 0 < A <= 1 <= B, got A={self.lower}, B={self.upper}")

    @property
    def kappa(self) -> float:
        return self.upper / self.lower


def _positive_int(N) -> int:
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N}")
    return int(N)


def bounds_square_closed(N: int, ctl: SeriesControl | None = None) -> FrameBounds:
    """Von Neumann lattice of density 2N: A = theta_4(e^(-pi N))^2, B = theta_3(e^(-pi N))^2."""
    N, ctl = _positive_int(N), _ctl(ctl)
    d = PI * N
    return FrameBounds(_theta4(d, ctl) ** 2, _theta3(d, ctl) ** 2, 2.0 * N, "square", "closed_form", 1.0)


def bounds_hexagonal_closed(N: int, ctl: SeriesControl | None = None) -> FrameBounds:
    """Hexagonal lattice of density 2N: A = b(q^N), B = a(q^N) with q = e^(-2 pi / sqrt 3)."""
    N, ctl = _positive_int(N), _ctl(ctl)
    d = HEX_DECAY * N
    return FrameBounds(_cubic_b(d, ctl), _cubic_a(d, ctl), 2.0 * N, "hexagonal", "closed_form")


def bounds_rectangular_closed(a: float, N: int, ctl: SeriesControl | None = None) -> FrameBounds:
    """Rectangular lattice (2N)^(-1/2) (aZ x Z/a):
    A = theta_4(q^(N a^2)) theta_4(q^(N/a^2)), B likewise with theta_3, q = e^-pi."""
    if not a > 0:
        raise DomainError(f"side length a must be positive, got {a}")
    N, ctl = _positive_int(N), _ctl(ctl)
    d1, d2 = PI * N * a * a, PI * N / (a * a)
    lower = _theta4(d1, ctl) * _theta4(d2, ctl)
    upper = _theta3(d1, ctl) * _theta3(d2, ctl)
    kind = "square" if a == 1.0 else "rectangular"
    return FrameBounds(lower, upper, 2.0 * N, kind, "closed_form", float(a))


def bessel_bound(lat: Lattice2D, ctl: SeriesControl | None = None) -> float:
    """Bessel bound sum_{l in lat°} exp(-pi/2 |l|^2); always >= the sharp upper bound."""
    def total(pts):
        return float(np.sum(np.exp(-JANSSEN_SCALE * np.einsum("ij,ij->i", pts, pts))))
    value, _, _ = certified_sum(adjoint(lat), JANSSEN_SCALE, 0.0, total, ctl)
    return value


class JanssenSum:
    """F(z) on the torus R^2 / lat, parametrized by cell coordinates z = M (u, v).

    sigma(l°, M e_i) is an integer for every adjoint point, so F is the
    trigonometric polynomial sum_j w_j cos(2 pi (m_j u + n_j v)).
    """

    def __init__(self, lat: Lattice2D, ctl: SeriesControl | None = None):
        self.lattice = lat

        def total(pts):
            return float(np.sum(np.exp(-JANSSEN_SCALE * np.einsum("ij,ij->i", pts, pts))))

        self.bessel, self.tail, pts = certified_sum(adjoint(lat), JANSSEN_SCALE, 0.0, total, ctl)
        self.weights = np.exp(-JANSSEN_SCALE * np.einsum("ij,ij->i", pts, pts))
        B = lat.basis
        freq = np.column_stack([sigma(pts, B[:, 0]), sigma(pts, B[:, 1])])
        self.freq = np.round(freq)
        if np.max(np.abs(freq - self.freq)) > 1e-8:
            raise ConsistencyError("adjoint lattice does not pair integrally with the lattice")

    def __call__(self, uv) -> np.ndarray:
        uv = np.atleast_2d(uv)
        return np.cos(2.0 * PI * uv @ self.freq.T) @ self.weights

    def scalar(self, uv) -> float:
        return float(self(np.asarray(uv, dtype=float))[0])

    def to_plane(self, uv) -> np.ndarray:
        return self.lattice.basis @ (np.asarray(uv, dtype=float) % 1.0)


def _mesh_extrema(values: np.ndarray, grid: int, sign: float, count: int) -> list[tuple[int, int]]:
    """Indices of the ``count`` best strict local extrema (sign=+1 minima) on a periodic mesh."""
    V = sign * values.reshape(grid, grid)
    is_ext = np.ones_like(V, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                is_ext &= V <= np.roll(np.roll(V, di, axis=0), dj, axis=1)
    idx = np.argwhere(is_ext)
    order = np.argsort(V[is_ext], kind="stable")
    return [tuple(idx[i]) for i in order[:count]]


def _refine(janssen: JanssenSum, start, sign: float, step: float, tol: float):
    f = lambda uv: sign * janssen.scalar(uv)
    x0 = np.asarray(start, dtype=float)
    simplex = np.array([x0, x0 + [step, 0.0], x0 + [0.0, step]])
    res = minimize(f, x0, method="Nelder-Mead",
                   options={"xatol": tol, "fatol": 1e-16, "maxiter": 20_000, "initial_simplex": simplex})
    if not np.all(np.isfinite(res.x)) or res.fun > f(x0) + 1e-15:
        raise OptimizationError(f"simplex refinement diverged from {start}: {res.message}")
    return res.x % 1.0, sign * res.fun


def janssen_density(lat: Lattice2D) -> int:
    N = lat.density / 2.0
    if abs(N - round(N)) > DENSITY_TOL or round(N) < 1:
        raise DensityError(f"Janssen duality applies to densities 2N, N = 1, 2, ...; got {lat.density}")
    return int(round(N))


def bounds_janssen_numeric(lat: Lattice2D, grid: int = 32, refine_tol: float = 1e-12,
                           ctl: SeriesControl | None = None, n_refine: int = 4) -> FrameBounds:
    """Frame bounds by extremizing the adjoint-lattice character sum numerically.

    F is sampled on a grid x grid mesh of the torus, the best ``n_refine``
    local minima and the best mesh maximum are polished with Nelder-Mead.
    """
    janssen_density(lat)
    if int(grid) != grid or grid < 3:
        raise DomainError(f"grid must be an integer >= 3, got {grid}")
    janssen = JanssenSum(lat, ctl)
    u = np.arange(grid) / grid
    uu, vv = np.meshgrid(u, u, indexing="ij")
    mesh = np.column_stack([uu.ravel(), vv.ravel()])
    values = janssen(mesh)
    step = 1.0 / grid

    minima = [_refine(janssen, mesh[i * grid + j], +1.0, step, refine_tol)
              for i, j in _mesh_extrema(values, grid, +1.0, n_refine)]
    uv_min, lower = min(minima, key=lambda m: m[1])

    upper = janssen.scalar([0.0, 0.0])
    for i, j in _mesh_extrema(values, grid, -1.0, 1):
        uv_max, top = _refine(janssen, mesh[i * grid + j], -1.0, step, refine_tol)
        if top > upper * (1.0 + 1e-12):
            raise OptimizationError(f"maximum {top} found away from the origin at {uv_max} (F(0) = {upper})")

    aspect = getattr(lat, "aspect", None)
    return FrameBounds(lower, upper, lat.density, lat.kind, "janssen_numeric", aspect,
                       minimizer=tuple(janssen.to_plane(uv_min)), maximizer=(0.0, 0.0))


# ---------------------------------------------------------------------------
# AGM ladders

Kind = Literal["square", "hexagonal"]


class LadderStep(NamedTuple):
    index: int
    density: float
    closed: FrameBounds
    recursed: tuple[float, float] | None     # (A, B) from one AGM step of the previous index
    residual: float                          # max relative gap closed vs recursed
    ag_limit: float                          # ag_N(B, A), should be 1


@dataclass(frozen=True)
class BoundLadder:
    kind: str
    steps: tuple[LadderStep, ...]
    truncated: bool = False

    @property
    def bounds(self) -> list[FrameBounds]:
        return [s.closed for s in self.steps]

    @property
    def max_residual(self) -> float:
        return max((s.residual for s in self.steps), default=0.0)


def _ladder_setup(kind: str):
    if kind == "square":
        return 2, PI, bounds_square_closed, agm.ag2_step, agm.ag2
    if kind in ("hexagonal", "hex"):
        return 3, HEX_DECAY, bounds_hexagonal_closed, agm.ag3_step, agm.ag3
    raise DomainError(f"AGM ladders exist for 'square' and 'hexagonal' lattices, got {kind!r}")


def agm_bound_ladder(kind: Kind, n_max: int, ctl: SeriesControl | None = None) -> BoundLadder:
    """Bounds at densities 2^n (square) or 2 * 3^(n-1) (hexagonal), n = 1..n_max,
    each computed in closed form and by one AGM step from its predecessor."""
    n_max = _positive_int(n_max)
    order, decay, closed, step, mean = _ladder_setup(kind)
    steps = []
    prev = None
    truncated = False
    for n in range(1, n_max + 1):
        N = order ** (n - 1)
        if decay * N > DECAY_CAP:
            truncated = True
            break
        fb = closed(N, ctl)
        recursed, residual = None, 0.0
        if prev is not None:
            B1, A1 = step(prev.upper, prev.lower)
            recursed = (A1, B1)
            residual = max(abs(A1 - fb.lower) / fb.lower, abs(B1 - fb.upper) / fb.upper)
        steps.append(LadderStep(n, fb.density, fb, recursed, residual, mean(fb.upper, fb.lower)))
        prev = fb
    return BoundLadder("square" if order == 2 else "hexagonal", tuple(steps), truncated)


def agm_bound_sequence(kind: Kind, n_max: int, ctl: SeriesControl | None = None) -> list[FrameBounds]:
    """Closed-form bounds along the density ladder, verified against the AGM recursion."""
    ladder = agm_bound_ladder(kind, n_max, ctl)
    for s in ladder.steps:
        if s.residual > LADDER_TOL or abs(s.ag_limit - 1.0) > LADDER_TOL:
            raise ConsistencyError(f"{kind} ladder step {s.index}: recursion residual {s.residual:.3e}, "
                                   f"AGM limit {s.ag_limit!r}")
    return ladder.bounds


@dataclass(frozen=True)
class KappaSequence:
    lattice_kind: str
    densities: tuple[float, ...]
    kappas: tuple[float, ...]
    closed_kappas: tuple[float, ...] = ()
    truncated: bool = False


def kappa_step_square(kappa: float) -> float:
    r = math.sqrt(kappa)
    return 0.5 * (1.0 / r + r)


def kappa_step_hexagonal(kappa: float) -> float:
    return 3.0 ** (1 / 3) / 3.0 * (kappa + 2.0) * (1.0 + kappa + kappa * kappa) ** (-1 / 3)


def kappa_sequence(kind: Kind, n_max: int, ctl: SeriesControl | None = None) -> KappaSequence:
    """Condition numbers from the recursion started at sqrt 2 (square) or 2^(1/3) (hexagonal),
    checked against the closed-form B/A."""
    n_max = _positive_int(n_max)
    ladder = agm_bound_ladder(kind, n_max, ctl)
    if ladder.kind == "square":
        kappa, step = math.sqrt(2.0), kappa_step_square
    else:
        kappa, step = 2.0 ** (1 / 3), kappa_step_hexagonal
    kappas = []
    for _ in ladder.steps:
        kappas.append(kappa)
        kappa = step(kappa)
    closed = [s.closed.kappa for s in ladder.steps]
    for n, (k_rec, k_cf) in enumerate(zip(kappas, closed), start=1):
        if abs(k_rec - k_cf) > LADDER_TOL * k_cf:
            raise ConsistencyError(f"kappa recursion and closed form disagree at n={n}: {k_rec} vs {k_cf}")
    for prev, nxt in zip(kappas, kappas[1:]):
        if prev > 1.0 and not nxt < prev:
            raise ConsistencyError(f"condition numbers not decreasing: {prev} -> {nxt}")
    return KappaSequence(ladder.kind, tuple(s.density for s in ladder.steps), tuple(kappas),
                         tuple(closed), ladder.truncated)


class ConjectureConstants(NamedTuple):
    C3: float
    C4: float


def conjecture_constant(r: int) -> float:
    """C_r = 2 pi r / tan(pi / r) * Gamma(2/r)^2 / Gamma(1/r)^4."""
    return 2.0 * PI * r / math.tan(PI / r) * gamma_fn(2.0 / r) ** 2 / gamma_fn(1.0 / r) ** 4


def conjecture_constants() -> ConjectureConstants:
    c = ConjectureConstants(conjecture_constant(3), conjecture_constant(4))
    if not c.C4 > c.C3:
        raise ConsistencyError(f"expected C4 > C3, got {c}")
    return c
