"""Theta constants, their cubic analogues and related scalar functions.

All series are evaluated in terms of the decay rate ``d = -log(q)`` so that
nomes extremely close to 0 (``q = exp(-pi * N)`` for large ``N``) do not
underflow.  Where a direct alternating sum would cancel catastrophically
(theta_4 and the cubic ``b`` as q -> 1) the value is obtained from the
Poisson-dual positive sum instead:

    theta_4(exp(-pi t)) = t**-0.5 * theta_2(exp(-pi / t))
    b(exp(-2 pi t / sqrt 3)) = c(exp(-2 pi / (sqrt 3 t))) / t
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np
from scipy.special import digamma

from . import agm
from .errors import ConsistencyError, DomainError, NonConvergence

PI = math.pi
SQRT3 = math.sqrt(3.0)
# decay rate of the hexagonal nome exp(-2 pi / sqrt 3)
HEX_DECAY = 2.0 * PI / SQRT3


@dataclass(frozen=True)
class SeriesControl:
    rel_tol: float = 1e-14
    max_terms: int = 10**6

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise DomainError(f"max_terms must be a positive integer, got {self.max_terms}")


DEFAULT_CONTROL = SeriesControl()


class Nome:
    """A real nome 0 < q < 1, stored through its decay rate ``-log(q)``.

    ``Nome(q)`` validates q; ``Nome.from_decay(d)`` accepts any finite
    ``d > 0`` even when ``exp(-d)`` underflows in binary64.
    """

    __slots__ = ("decay",)

    def __init__(self, q: float):
        q = float(q)
        if not 0.0 < q < 1.0:
            raise DomainError(f"nome must satisfy 0 < q < 1, got {q!r}")
        object.__setattr__(self, "decay", -math.log(q))

    @classmethod
    def from_decay(cls, decay: float) -> "Nome":
        decay = float(decay)
        if not (decay > 0 and math.isfinite(decay)):
            raise DomainError(f"nome decay rate must be positive and finite, got {decay!r}")
        self = object.__new__(cls)
        object.__setattr__(self, "decay", decay)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("Nome is immutable")

    @property
    def q(self) -> float:
        return math.exp(-self.decay)

    @property
    def tau(self) -> complex:
        """Half-period ratio with q = exp(pi i tau) (purely imaginary here)."""
        return complex(0.0, self.decay / PI)

    def power(self, n: float) -> "Nome":
        """The nome q**n."""
        return Nome.from_decay(self.decay * n)

    def __eq__(self, other):
        return isinstance(other, Nome) and other.decay == self.decay

    def __hash__(self):
        return hash(("Nome", self.decay))

    def __repr__(self):
        return f"Nome(q={self.q!r})"


NomeLike = Union[float, Nome]


def as_nome(q: NomeLike) -> Nome:
    return q if isinstance(q, Nome) else Nome(q)


def _ctl(ctl):
    return DEFAULT_CONTROL if ctl is None else ctl


# ---------------------------------------------------------------------------
# one-dimensional theta series


def _theta_1d(decay: float, shift: float, alternating: bool, ctl: SeriesControl) -> float:
    """Symmetric sum over k in Z of (+-1)^k exp(-decay (k + shift)^2), shift in {0, 1/2}."""
    if shift:
        total = 0.0
        k = 0
        while True:
            term = 2.0 * math.exp(-decay * (k + 0.5) ** 2)
            total += term
            k += 1
            if term < ctl.rel_tol * total:
                return total
            if k > ctl.max_terms:
                raise NonConvergence(f"theta series exceeded {ctl.max_terms} terms")
    total = 1.0
    sign = 1.0
    k = 1
    while True:
        if alternating:
            sign = -sign
        term = 2.0 * sign * math.exp(-decay * k * k)
        total += term
        if abs(term) < ctl.rel_tol * abs(total):
            return total
        k += 1
        if k > ctl.max_terms:
            raise NonConvergence(f"theta series exceeded {ctl.max_terms} terms")


def _theta2(decay, ctl):
    return _theta_1d(decay, 0.5, False, ctl)


def _theta3(decay, ctl):
    return _theta_1d(decay, 0.0, False, ctl)


def _theta4(decay, ctl):
    if decay >= PI:
        return _theta_1d(decay, 0.0, True, ctl)
    t = decay / PI
    return _theta2(PI / t, ctl) / math.sqrt(t)


def theta2(q: NomeLike, ctl: SeriesControl | None = None) -> float:
    """theta_2(q) = sum_k q^((k + 1/2)^2)."""
    return _theta2(as_nome(q).decay, _ctl(ctl))


def theta3(q: NomeLike, ctl: SeriesControl | None = None) -> float:
    """theta_3(q) = sum_k q^(k^2)."""
    return _theta3(as_nome(q).decay, _ctl(ctl))


def theta4(q: NomeLike, ctl: SeriesControl | None = None) -> float:
    """theta_4(q) = sum_k (-1)^k q^(k^2)."""
    return _theta4(as_nome(q).decay, _ctl(ctl))


# ---------------------------------------------------------------------------
# Borwein cubic analogues


def _cubic_sum(decay: float, kind: str, ctl: SeriesControl) -> float:
    shift = 1.0 / 3.0 if kind == "c" else 0.0
    target = math.log(1.0 / ctl.rel_tol) + 10.0
    # Q(x, y) >= 3/4 max(|x|, |y|)^2 for the form x^2 + xy + y^2
    M = int(math.ceil(math.sqrt(4.0 * target / (3.0 * decay)) + 1.0))
    while True:
        if (2 * M + 1) ** 2 > ctl.max_terms:
            raise NonConvergence(
                f"cubic theta sum would need {(2 * M + 1) ** 2} terms (cap {ctl.max_terms})")
        m = np.arange(-M, M + 1, dtype=float)
        x = (m + shift)[:, None]
        y = (m + shift)[None, :]
        w = np.exp(-decay * (x * x + x * y + y * y))
        if kind == "b":
            phase = 2.0 * PI * (m[None, :] - m[:, None]) / 3.0
            value = float(np.sum(w * np.cos(phase)))
            if __debug__:
                imag = float(np.sum(w * np.sin(phase)))
                assert abs(imag) < 1e-13 * max(abs(value), 1.0), imag
        else:
            value = float(np.sum(w))
        r = np.arange(M + 1, M + 200, dtype=float)
        tail = float(np.sum(8.0 * r * np.exp(-0.75 * decay * (r - 1.0 / 3.0) ** 2)))
        if tail < ctl.rel_tol * abs(value):
            return value
        M *= 2


def _cubic_a(decay, ctl):
    return _cubic_sum(decay, "a", ctl)


def _cubic_c(decay, ctl):
    return _cubic_sum(decay, "c", ctl)


def _cubic_b(decay, ctl):
    if decay >= HEX_DECAY:
        return _cubic_sum(decay, "b", ctl)
    t = decay / HEX_DECAY
    return _cubic_c(HEX_DECAY / t, ctl) / t


def cubic_a(q: NomeLike, ctl: SeriesControl | None = None) -> float:
    """a(q) = sum_{m,n} q^(m^2 + mn + n^2)."""
    return _cubic_a(as_nome(q).decay, _ctl(ctl))


def cubic_b(q: NomeLike, ctl: SeriesControl | None = None) -> float:
    """b(q) = sum_{m,n} zeta^(n-m) q^(m^2 + mn + n^2), zeta a primitive cube root of 1."""
    return _cubic_b(as_nome(q).decay, _ctl(ctl))


def cubic_c(q: NomeLike, ctl: SeriesControl | None = None) -> float:
    """c(q): the a-sum over the lattice shifted by (1/3, 1/3)."""
    return _cubic_c(as_nome(q).decay, _ctl(ctl))


@dataclass(frozen=True)
class ThetaTriple:
    """(low, mid, high) = (theta_2^2, theta_4^2, theta_3^2) or (c, b, a)."""

    low: float
    mid: float
    high: float
    kind: Literal["quadratic", "cubic"]
    nome: Nome

    @property
    def power(self) -> int:
        return 2 if self.kind == "quadratic" else 3

    def identity_residual(self) -> float:
        """Relative defect of high^r = mid^r + low^r (r = 2 resp. 3)."""
        r = self.power
        return abs(self.high**r - self.mid**r - self.low**r) / self.high**r


def theta_triple(q: NomeLike, ctl: SeriesControl | None = None) -> ThetaTriple:
    nome, ctl = as_nome(q), _ctl(ctl)
    return ThetaTriple(_theta2(nome.decay, ctl) ** 2, _theta4(nome.decay, ctl) ** 2,
                       _theta3(nome.decay, ctl) ** 2, "quadratic", nome)


def cubic_triple(q: NomeLike, ctl: SeriesControl | None = None) -> ThetaTriple:
    nome, ctl = as_nome(q), _ctl(ctl)
    return ThetaTriple(_cubic_c(nome.decay, ctl), _cubic_b(nome.decay, ctl),
                       _cubic_a(nome.decay, ctl), "cubic", nome)


# ---------------------------------------------------------------------------
# Gamma, 2F1, K


def gamma_fn(x: float) -> float:
    """Euler's Gamma function for x > 0."""
    if not x > 0:
        raise DomainError(f"gamma_fn is defined here for x > 0 only, got {x}")
    return math.gamma(x)


def _hyp2f1_series(a, b, c, x, ctl):
    term = total = 1.0
    n = 0
    while True:
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * x
        total += term
        n += 1
        if abs(term) < ctl.rel_tol * abs(total):
            return total
        if n > ctl.max_terms:
            raise NonConvergence(f"2F1 series exceeded {ctl.max_terms} terms")


def _hyp2f1_log(a, b, y, ctl):
    """F(a, b; a + b; 1 - y) via the logarithmic expansion around x = 1."""
    log_y = math.log(y)
    pref = math.exp(math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b))
    psi1, psia, psib = float(digamma(1.0)), float(digamma(a)), float(digamma(b))
    coef = 1.0
    total = 0.0
    n = 0
    while True:
        term = coef * (2.0 * psi1 - psia - psib - log_y)
        total += term
        if n > 0 and abs(term) < ctl.rel_tol * abs(total):
            return pref * total
        psi1 += 1.0 / (n + 1)
        psia += 1.0 / (a + n)
        psib += 1.0 / (b + n)
        coef *= (a + n) * (b + n) / ((n + 1) ** 2) * y
        n += 1
        if n > ctl.max_terms:
            raise NonConvergence(f"2F1 expansion exceeded {ctl.max_terms} terms")


def hyp2f1(a: float, b: float, c: float, x: float, ctl: SeriesControl | None = None,
           *, one_minus_x: float | None = None) -> float:
    """Gauss' hypergeometric function 2F1(a, b; c; x) for a, b, c > 0, a + b <= c, 0 <= x < 1.

    For x > 1/2 in the zero-balanced case c = a + b the logarithmic
    expansion in 1 - x is used.  Pass ``one_minus_x`` when 1 - x is known to
    more precision than ``x`` itself (e.g. x = k^2 with k' tiny); x is then
    ignored.
    """
    ctl = _ctl(ctl)
    if not (a > 0 and b > 0 and c > 0):
        raise DomainError(f"2F1 parameters must be positive, got ({a}, {b}; {c})")
    if a + b > c * (1.0 + 1e-15):
        raise DomainError(f"2F1 needs a + b <= c, got a + b = {a + b}, c = {c}")
    if one_minus_x is not None:
        y = float(one_minus_x)
        if not 0.0 < y <= 1.0:
            raise DomainError(f"one_minus_x must lie in (0, 1], got {y}")
        x = 1.0 - y
    else:
        if not 0.0 <= x < 1.0:
            raise DomainError(f"2F1 argument must satisfy 0 <= x < 1, got {x}")
        y = 1.0 - x
    if x == 0.0:
        return 1.0
    if x > 0.5 and abs(c - a - b) <= 1e-15 * c:
        return _hyp2f1_log(a, b, y, ctl)
    return _hyp2f1_series(a, b, c, x, ctl)


def elliptic_k(k: float, tol: float = agm.DEFAULT_TOL) -> float:
    """Complete elliptic integral of the first kind, K(k) = (pi/2) / ag2(k', 1)."""
    if not 0.0 <= k < 1.0:
        raise DomainError(f"elliptic modulus must satisfy 0 <= k < 1, got {k}")
    return 0.5 * PI / agm.ag2(math.sqrt((1.0 - k) * (1.0 + k)), 1.0, tol)


@dataclass(frozen=True)
class EllipticModuli:
    """Modulus and its complement for signature 2 (k, k') or 3 (s, s')."""

    value: float
    complement: float
    signature: Literal[2, 3]
    nome: Nome

    @property
    def k(self) -> float:
        return self.value

    @property
    def k_prime(self) -> float:
        return self.complement

    s = k
    s_prime = k_prime

    def identity_residual(self) -> float:
        r = self.signature
        return abs(self.value**r + self.complement**r - 1.0)


def modulus_quadratic(q: NomeLike, ctl: SeriesControl | None = None) -> EllipticModuli:
    """k = theta_2^2 / theta_3^2, k' = theta_4^2 / theta_3^2."""
    t = theta_triple(q, ctl)
    return EllipticModuli(t.low / t.high, t.mid / t.high, 2, t.nome)


def modulus_cubic(q: NomeLike, ctl: SeriesControl | None = None) -> EllipticModuli:
    """s = c / a, s' = b / a."""
    t = cubic_triple(q, ctl)
    return EllipticModuli(t.low / t.high, t.mid / t.high, 3, t.nome)


# ---------------------------------------------------------------------------
# named constants

_ROUTE_TOL = 1e-10


def lemniscate_length(tol: float = agm.DEFAULT_TOL) -> float:
    """Arc length 2*varpi of the lemniscate of Bernoulli, 4 K(1/sqrt 2) / sqrt 2."""
    return 4.0 * elliptic_k(math.sqrt(0.5), tol) / math.sqrt(2.0)


def gauss_constant_routes(ctl: SeriesControl | None = None) -> dict[str, float]:
    return {
        "theta4_squared": theta4(Nome.from_decay(PI), ctl) ** 2,
        "inverse_ag2": 1.0 / agm.ag2(math.sqrt(2.0), 1.0),
        "lemniscate_ratio": lemniscate_length() / (2.0 * PI),
    }


def landau_plus_routes(ctl: SeriesControl | None = None) -> dict[str, float]:
    return {
        "gamma_ratio": gamma_fn(1 / 3) * gamma_fn(5 / 6) / gamma_fn(1 / 6),
        "half_ag3": 0.5 * agm.ag3(2.0 ** (1 / 3), 1.0),
        "inverse_twice_b": 0.5 / cubic_b(Nome.from_decay(HEX_DECAY), ctl),
    }


def route_spread(routes: dict[str, float]) -> float:
    values = list(routes.values())
    return (max(values) - min(values)) / abs(values[0])


def _agreed(routes, main, name):
    spread = route_spread(routes)
    if spread > _ROUTE_TOL:
        raise ConsistencyError(f"{name}: independent routes disagree ({spread:.3e}): {routes}")
    return routes[main]


def constant_gauss(ctl: SeriesControl | None = None) -> float:
    """Gauss' constant G = theta_4(e^-pi)^2 = 1 / ag2(sqrt 2, 1) = 2 varpi / (2 pi)."""
    return _agreed(gauss_constant_routes(ctl), "theta4_squared", "Gauss' constant")


def constant_landau_plus(ctl: SeriesControl | None = None) -> float:
    """Conjectural Landau constant Gamma(1/3) Gamma(5/6) / Gamma(1/6) = ag3(2^(1/3), 1) / 2."""
    return _agreed(landau_plus_routes(ctl), "gamma_ratio", "Landau's constant")
