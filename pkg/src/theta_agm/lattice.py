"""Planar lattices and root systems.

A :class:`Lattice2D` stores a unit-determinant generator ``M`` and a density
``alpha``; its points are ``alpha**-0.5 * M @ (k, l)``.  Any basis given to
:meth:`Lattice2D.from_basis` is normalized to that convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Literal

import numpy as np

from .errors import CapacityError, DomainError, Unsupported

LatticeKind = Literal["square", "hexagonal", "rectangular", "general"]

# standard symplectic matrix; sigma(z, w) = z . J w
J = np.array([[0.0, 1.0], [-1.0, 0.0]])
HEX_GENERATOR = math.sqrt(2.0) / 3.0**0.25 * np.array([[1.0, 0.5], [0.0, math.sqrt(3.0) / 2.0]])

DEFAULT_POINT_CAP = 2_000_000
SET_GRID = 1e-9


def sigma(z, w) -> np.ndarray:
    """Standard symplectic form z1 w2 - z2 w1 (broadcasts over leading axes)."""
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    return z[..., 0] * w[..., 1] - z[..., 1] * w[..., 0]


@dataclass(frozen=True, eq=False)
class Lattice2D:
    generator: np.ndarray
    density: float
    kind: LatticeKind = "general"
    aspect: float | None = None
    # for named families: which deep-hole offset applies, in generator coordinates
    hole: tuple[float, float] | None = field(default=None, repr=False)

    def __post_init__(self):
        M = np.array(self.generator, dtype=float)
        if M.shape != (2, 2):
            raise DomainError(f"generator must be 2x2, got shape {M.shape}")
        if not (self.density > 0 and math.isfinite(self.density)):
            raise DomainError(f"density must be positive, got {self.density}")
        det = float(np.linalg.det(M))
        if abs(abs(det) - 1.0) > 1e-12:
            raise DomainError(f"generator must have |det| = 1, got {det}; use from_basis")
        M.setflags(write=False)
        object.__setattr__(self, "generator", M)
        object.__setattr__(self, "density", float(self.density))

    @classmethod
    def from_basis(cls, basis, kind: LatticeKind = "general", aspect=None, hole=None) -> "Lattice2D":
        """Lattice B Z^2 for an arbitrary nonsingular basis matrix B (columns)."""
        B = np.asarray(basis, dtype=float)
        det = float(np.linalg.det(B))
        if det == 0.0 or not math.isfinite(det):
            raise DomainError("basis matrix is singular")
        covol = abs(det)
        return cls(B / math.sqrt(covol), 1.0 / covol, kind, aspect, hole)

    @property
    def basis(self) -> np.ndarray:
        """Actual generator alpha^(-1/2) M of the point set."""
        return self.generator / math.sqrt(self.density)

    @property
    def covolume(self) -> float:
        return 1.0 / self.density

    def point(self, k, l) -> np.ndarray:
        return self.basis @ np.array([k, l], dtype=float)

    def scaled(self, factor: float) -> "Lattice2D":
        """The lattice factor * lat."""
        return Lattice2D(self.generator, self.density / factor**2, self.kind, self.aspect, self.hole)

    def with_density(self, alpha: float) -> "Lattice2D":
        return Lattice2D(self.generator, alpha, self.kind, self.aspect, self.hole)

    def contains(self, points, tol: float = 1e-10) -> np.ndarray:
        """Boolean mask: which points have integer coordinates in this lattice."""
        coeff = np.linalg.solve(self.basis, np.atleast_2d(points).T).T
        return np.all(np.abs(coeff - np.round(coeff)) < tol, axis=-1)

    def __repr__(self):
        return f"Lattice2D(kind={self.kind!r}, density={self.density!r}, generator={self.generator.tolist()})"


def von_neumann(alpha: float = 1.0) -> Lattice2D:
    return Lattice2D(np.eye(2), alpha, "square", 1.0, (0.5, 0.5))


def hexagonal(alpha: float = 1.0) -> Lattice2D:
    return Lattice2D(HEX_GENERATOR, alpha, "hexagonal", None, (1 / 3, 1 / 3))


def rectangular(a: float, alpha: float = 1.0) -> Lattice2D:
    """alpha^(-1/2) (a Z x b Z) with b = 1/a."""
    if not a > 0:
        raise DomainError(f"side length a must be positive, got {a}")
    kind = "square" if a == 1.0 else "rectangular"
    return Lattice2D(np.diag([a, 1.0 / a]), alpha, kind, float(a), (0.5, 0.5))


def _image(lat: Lattice2D, B: np.ndarray, T: np.ndarray, aspect) -> Lattice2D:
    """Lattice with basis B whose point set is T @ lat; the deep-hole offset follows T."""
    hole = None
    if lat.hole is not None:
        hole = tuple(np.linalg.solve(B, T @ (lat.basis @ np.asarray(lat.hole))))
    return Lattice2D.from_basis(B, lat.kind, aspect, hole)


def dual(lat: Lattice2D) -> Lattice2D:
    """Euclidean dual lattice M^(-T) Z^2."""
    B = np.linalg.inv(lat.basis).T
    # in the plane the dual is the adjoint rotated back by -90 degrees, i.e. -J alpha lat
    return _image(lat, B, -lat.density * J, lat.aspect and 1.0 / lat.aspect)


def adjoint(lat: Lattice2D) -> Lattice2D:
    """Symplectic dual J M^(-T) Z^2, the lattice of commuting time-frequency shifts.

    For planar lattices this is the same point set as ``density * lat``.
    """
    B = J @ np.linalg.inv(lat.basis).T
    return _image(lat, B, lat.density * np.eye(2), lat.aspect)


def deep_hole(lat: Lattice2D) -> np.ndarray:
    """A deep hole of a named lattice: M(1/2, 1/2) for square/rectangular, M(1/3, 1/3) for hexagonal."""
    if lat.kind == "general" or lat.hole is None:
        raise Unsupported("deep holes are only tabulated for square, rectangular and hexagonal lattices")
    return lat.basis @ np.asarray(lat.hole)


def enumerate_points(lat: Lattice2D, radius: float, cap: int = DEFAULT_POINT_CAP) -> np.ndarray:
    """All lattice points with norm <= radius as an (n, 2) array, sorted by norm then angle."""
    if not radius > 0:
        raise DomainError(f"radius must be positive, got {radius}")
    B = lat.basis
    box = int(math.ceil(radius * np.linalg.norm(np.linalg.inv(B), 2))) + 1
    if (2 * box + 1) ** 2 > cap:
        raise CapacityError(f"enumerating radius {radius} needs a {(2 * box + 1) ** 2}-point box (cap {cap})")
    k = np.arange(-box, box + 1, dtype=float)
    kk, ll = np.meshgrid(k, k, indexing="ij")
    coeff = np.stack([kk.ravel(), ll.ravel()])
    pts = (B @ coeff).T
    norms = np.hypot(pts[:, 0], pts[:, 1])
    keep = norms <= radius * (1.0 + 1e-12)
    pts, norms = pts[keep], norms[keep]
    order = np.lexsort((np.arctan2(pts[:, 1], pts[:, 0]), np.round(norms, 12)))
    return pts[order]


def point_set(points, grid: float = SET_GRID) -> set[tuple[int, int]]:
    """Hashable snapshot of a point array for float-robust set comparison."""
    ij = np.round(np.atleast_2d(points) / grid).astype(np.int64)
    return {tuple(p) for p in ij}


def same_point_set(P, Q, radius: float | None = None, grid: float = SET_GRID) -> bool:
    """Set equality of two point clouds; optionally restricted to norms below radius (1 - 1e-9)."""
    P, Q = np.atleast_2d(P), np.atleast_2d(Q)
    if radius is not None:
        lim = radius * (1.0 - 1e-9)
        P = P[np.hypot(P[:, 0], P[:, 1]) <= lim]
        Q = Q[np.hypot(Q[:, 0], Q[:, 1]) <= lim]
    return len(P) == len(Q) and point_set(P, grid) == point_set(Q, grid)


# ---------------------------------------------------------------------------
# root systems

RootName = Literal["A1xA1", "D2", "B2", "C2", "A2", "G2"]
ROOT_NAMES: tuple[str, ...] = ("A1xA1", "D2", "B2", "C2", "A2", "G2")


@dataclass(frozen=True)
class AxiomVerdict:
    """Outcome of checking the four root-system axioms."""

    nonzero_spanning: bool      # (i)
    reduced_symmetric: bool     # (ii)
    reflection_closed: bool     # (iii)
    integral: bool              # (iv)

    @property
    def passed(self) -> bool:
        return all(self.as_dict().values())

    def as_dict(self) -> dict[str, bool]:
        return {"i": self.nonzero_spanning, "ii": self.reduced_symmetric,
                "iii": self.reflection_closed, "iv": self.integral}

    def failed(self) -> list[str]:
        return [k for k, ok in self.as_dict().items() if not ok]


@dataclass(frozen=True, eq=False)
class RootSystem:
    roots: np.ndarray
    name: str | None = None

    def __len__(self):
        return len(self.roots)

    def validate(self, tol: float = 1e-10) -> AxiomVerdict:
        return validate_root_system(self.roots, tol)


def _member(v, R, tol):
    return bool(np.any(np.all(np.abs(R - v) < tol, axis=1)))


def validate_root_system(roots: Iterable, tol: float = 1e-10) -> AxiomVerdict:
    R = np.atleast_2d(np.asarray(list(roots) if not isinstance(roots, np.ndarray) else roots, dtype=float))
    if R.size == 0:
        raise DomainError("root system must be nonempty")
    if R.shape[1] != 2:
        raise DomainError(f"roots must be planar vectors, got shape {R.shape}")
    norms2 = np.einsum("ij,ij->i", R, R)
    has_zero = bool(np.any(norms2 < tol**2))
    spanning = bool(np.linalg.matrix_rank(R, tol=tol) == 2)
    ax1 = not has_zero and spanning

    ax2 = all(_member(-v, R, tol) for v in R)
    if ax2 and not has_zero:
        for i, v in enumerate(R):
            for j, w in enumerate(R):
                if i != j and abs(v[0] * w[1] - v[1] * w[0]) < tol * (1.0 + norms2[i] + norms2[j]):
                    r = float(np.dot(v, w) / norms2[i])
                    if abs(abs(r) - 1.0) > tol:
                        ax2 = False

    ax3 = ax4 = not has_zero
    if not has_zero:
        for i, v in enumerate(R):
            for w in R:
                cartan = 2.0 * float(np.dot(v, w)) / norms2[i]
                if ax3 and not _member(w - cartan * v, R, tol):
                    ax3 = False
                if ax4 and abs(cartan - round(cartan)) > tol:
                    ax4 = False
    return AxiomVerdict(ax1, ax2, ax3, ax4)


def _ring(length: float, count: int, offset: float = 0.0) -> np.ndarray:
    ang = offset + 2.0 * math.pi * np.arange(count) / count
    return length * np.column_stack([np.cos(ang), np.sin(ang)])


def standard_root_system(name: str) -> RootSystem:
    """Canonical realization of one of the six planar root systems."""
    e = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
    diag = np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])
    if name == "A1xA1":
        R = e
    elif name == "D2":
        R = diag
    elif name == "B2":
        R = np.vstack([e, diag])
    elif name == "C2":
        R = np.vstack([e, 0.5 * diag])
    elif name == "A2":
        R = _ring(float(np.linalg.norm(HEX_GENERATOR[:, 0])), 6)
    elif name == "G2":
        short = float(np.linalg.norm(HEX_GENERATOR[:, 0]))
        R = np.vstack([_ring(short, 6), _ring(math.sqrt(3.0) * short, 6, math.pi / 6)])
    else:
        raise DomainError(f"unknown root system {name!r}; expected one of {ROOT_NAMES}")
    R.setflags(write=False)
    return RootSystem(R, name)


def host_lattice(name: str) -> Lattice2D:
    """The lattice that contains the named standard root system."""
    if name in ("A1xA1", "D2", "B2"):
        return von_neumann(1.0)
    if name == "C2":
        # Z^2 with the cell centres added: the 45-degree rotated square lattice of density 2
        return Lattice2D.from_basis([[0.5, 0.5], [0.5, -0.5]], "square", 1.0, (0.5, 0.5))
    if name in ("A2", "G2"):
        return hexagonal(1.0)
    raise DomainError(f"unknown root system {name!r}; expected one of {ROOT_NAMES}")
