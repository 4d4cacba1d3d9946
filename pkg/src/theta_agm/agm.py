"""Arithmetic-geometric means of order N.

The generic engine follows the three-sequence recursion

    a_{n+1} = (a_n + (N-1) b_n) / N,   c_{n+1} = (a_n - b_n) / N,
    b_{n+1}^N = a_{n+1}^N - c_{n+1}^N,

and records every step.  ``ag2`` and ``ag3`` are the closed two-sequence
forms for N = 2 (Gauss) and N = 3 (Borwein cubic AGM).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import DomainError, NonConvergence

DEFAULT_TOL = 1e-15
MAX_ITER = 64


@dataclass(frozen=True)
class AgmTrace:
    """Iteration history of an order-N AGM run.

    ``a_seq[0], b_seq[0]`` are the (ordered) starting values; ``c_seq[0]`` is
    the consistent ``(a0**N - b0**N) ** (1/N)``.
    """

    order: int
    a_seq: tuple[float, ...]
    b_seq: tuple[float, ...]
    c_seq: tuple[float, ...]
    limit: float
    tol: float = field(default=DEFAULT_TOL, compare=False)

    @property
    def iterations(self) -> int:
        return len(self.a_seq) - 1

    def gap_residuals(self) -> list[float]:
        """Residual of a_{n+1}^N - b_{n+1}^N = ((a_n - b_n)/N)^N at every step.

        Measured relative to a_{n+1}^N; the left side is a difference of two
        nearly equal powers, so only a scale-relative check is meaningful in
        binary64.
        """
        N = self.order
        out = []
        for n in range(self.iterations):
            a1, b1 = self.a_seq[n + 1], self.b_seq[n + 1]
            lhs = a1**N - b1**N
            rhs = ((self.a_seq[n] - self.b_seq[n]) / N) ** N
            out.append(abs(lhs - rhs) / a1**N)
        return out


def _check_start(a0: float, b0: float, tol: float) -> tuple[float, float]:
    if not (a0 > 0 and b0 > 0) or not (math.isfinite(a0) and math.isfinite(b0)):
        raise DomainError(f"AGM needs positive finite starting values, got ({a0}, {b0})")
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    return (a0, b0) if a0 >= b0 else (b0, a0)


def agm_general(n_order: int, a0: float, b0: float, tol: float = DEFAULT_TOL) -> AgmTrace:
    """Run the order-``n_order`` AGM from (a0, b0) and return the full trace.

    Starting values are swapped if given in increasing order.  Iteration
    stops once ``|a_n - b_n| < tol * a_n``; the reported limit is one more
    arithmetic step of the final pair.
    """
    if int(n_order) != n_order or n_order < 2:
        raise DomainError(f"AGM order must be an integer >= 2, got {n_order}")
    N = int(n_order)
    a, b = _check_start(a0, b0, tol)
    c = (a**N - b**N) ** (1.0 / N)
    a_seq, b_seq, c_seq = [a], [b], [c]
    while not abs(a - b) < tol * a:
        if len(a_seq) > MAX_ITER:
            raise NonConvergence(f"order-{N} AGM did not converge in {MAX_ITER} steps")
        b_prev = b
        a, c = (a + (N - 1) * b) / N, (a - b) / N
        assert a >= c, "a_n >= c_n must hold for a0 >= b0 > 0"
        # a_n - c_n equals b_{n-1} exactly, so factor a^N - c^N instead of
        # subtracting two close powers
        b = (b_prev * sum(a ** (N - 1 - j) * c**j for j in range(N))) ** (1.0 / N)
        a_seq.append(a)
        b_seq.append(b)
        c_seq.append(c)
    limit = (a + (N - 1) * b) / N
    return AgmTrace(N, tuple(a_seq), tuple(b_seq), tuple(c_seq), limit, tol)


def ag2_step(a: float, b: float) -> tuple[float, float]:
    return (a + b) / 2.0, math.sqrt(a * b)


def ag3_step(a: float, b: float) -> tuple[float, float]:
    return (a + 2.0 * b) / 3.0, (b * (a * a + a * b + b * b) / 3.0) ** (1.0 / 3.0)


def _iterate(step: Callable[[float, float], tuple[float, float]], weight: float,
             a0: float, b0: float, tol: float) -> float:
    a, b = _check_start(a0, b0, tol)
    for _ in range(MAX_ITER):
        if abs(a - b) < tol * a:
            return (a + weight * b) / (1.0 + weight)
        a, b = step(a, b)
    raise NonConvergence(f"AGM did not converge in {MAX_ITER} steps")


def ag2(a0: float, b0: float, tol: float = DEFAULT_TOL) -> float:
    """Gauss' arithmetic-geometric mean of two positive numbers."""
    return _iterate(ag2_step, 1.0, a0, b0, tol)


def ag3(a0: float, b0: float, tol: float = DEFAULT_TOL) -> float:
    """Borwein cubic AGM: a <- (a + 2b)/3, b <- (b (a^2 + ab + b^2)/3)^(1/3)."""
    return _iterate(ag3_step, 2.0, a0, b0, tol)
