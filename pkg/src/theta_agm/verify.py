"""Catalogue of numerical identity checks, grouped into suites.

Each check reports the worst residual over its sample set next to the
tolerance it must meet.  ``run_suite("all")`` is what ``theta-agm verify``
prints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
from scipy.integrate import quad

from . import agm, gabor, lattice, lattice_theta, special
from .special import HEX_DECAY, PI, Nome, SeriesControl

SUITES = ("theta", "cubic", "agm", "lattice", "gabor")

Q_GRID = tuple(round(0.05 * i, 2) for i in range(1, 19)) + (math.exp(-PI),)
LIMIT_GRID = (0.05, 0.1, 0.2, 0.4, 0.6, 0.8, math.exp(-PI), math.exp(-HEX_DECAY))


@dataclass(frozen=True)
class Check:
    name: str
    suite: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tol)


def _rel(x: float, y: float) -> float:
    return abs(x - y) / max(abs(x), abs(y))


def _worst(f: Callable[[float], float], samples: Iterable) -> float:
    return max(f(s) for s in samples)


def theta_checks(ctl: SeriesControl | None = None) -> list[Check]:
    th2 = lambda q: special.theta2(q, ctl)
    th3 = lambda q: special.theta3(q, ctl)
    th4 = lambda q: special.theta4(q, ctl)

    def inversion(q):
        m = special.modulus_quadratic(q, ctl)
        return _rel(special.hyp2f1(0.5, 0.5, 1.0, m.k**2, ctl, one_minus_x=m.k_prime**2), th3(q) ** 2)

    def k_agm(k):
        quadrature, _ = quad(lambda p: 1.0 / math.sqrt(1.0 - (k * math.sin(p)) ** 2), 0.0, PI / 2,
                             epsabs=0.0, epsrel=1e-13)
        return _rel(special.elliptic_k(k), quadrature)

    s = "theta"
    return [
        Check("jacobi quartic theta3^4 = theta2^4 + theta4^4", s,
              _worst(lambda q: special.theta_triple(q, ctl).identity_residual(), Q_GRID), 1e-11),
        Check("duplication 2 theta3(q^2)^2 = theta3^2 + theta4^2", s,
              _worst(lambda q: _rel(2 * th3(q * q) ** 2, th3(q) ** 2 + th4(q) ** 2), Q_GRID), 1e-11),
        Check("duplication 2 theta2(q^2)^2 = theta3^2 - theta4^2", s,
              _worst(lambda q: _rel(2 * th2(q * q) ** 2, th3(q) ** 2 - th4(q) ** 2), Q_GRID), 1e-11),
        Check("duplication theta3 theta4 = theta4(q^2)^2", s,
              _worst(lambda q: _rel(th3(q) * th4(q), th4(q * q) ** 2), Q_GRID), 1e-11),
        Check("modulus k^2 + k'^2 = 1", s,
              _worst(lambda q: special.modulus_quadratic(q, ctl).identity_residual(), Q_GRID), 1e-12),
        Check("inversion 2F1(1/2,1/2;1;k^2) = theta3^2", s, _worst(inversion, Q_GRID), 1e-10),
        Check("K(k) via AGM equals quadrature", s,
              _worst(k_agm, [0.1 * i for i in range(10)]), 1e-10),
    ]


def cubic_checks(ctl: SeriesControl | None = None) -> list[Check]:
    a = lambda q: special.cubic_a(q, ctl)
    b = lambda q: special.cubic_b(q, ctl)
    c = lambda q: special.cubic_c(q, ctl)
    hexq = Nome.from_decay(HEX_DECAY)

    def signature3(q):
        m = special.modulus_cubic(q, ctl)
        return _rel(special.hyp2f1(1 / 3, 2 / 3, 1.0, m.s**3, ctl, one_minus_x=m.s_prime**3), a(q))

    s = "cubic"
    return [
        Check("cubic identity a^3 = b^3 + c^3", s,
              _worst(lambda q: special.cubic_triple(q, ctl).identity_residual(), Q_GRID), 1e-11),
        Check("triplication 3 a(q^3) = a + 2 b", s,
              _worst(lambda q: _rel(3 * a(q**3), a(q) + 2 * b(q)), Q_GRID), 1e-11),
        Check("triplication 3 c(q^3) = a - b", s,
              _worst(lambda q: _rel(3 * c(q**3), a(q) - b(q)), Q_GRID), 1e-11),
        Check("cubic modulus s^3 + s'^3 = 1", s,
              _worst(lambda q: special.modulus_cubic(q, ctl).identity_residual(), Q_GRID), 1e-12),
        Check("signature 3: 2F1(1/3,2/3;1;s^3) = a", s, _worst(signature3, Q_GRID), 1e-10),
        Check("b = c at q = exp(-2 pi / sqrt 3)", s, _rel(b(hexq), c(hexq)), 1e-12),
        Check("a = 2^(1/3) b at q = exp(-2 pi / sqrt 3)", s, _rel(a(hexq), 2 ** (1 / 3) * b(hexq)), 1e-12),
    ]


def agm_checks(ctl: SeriesControl | None = None) -> list[Check]:
    def gauss_formula(ab):
        x, y = ab
        cc = 0.5 * (x + y + 1)
        rhs = math.sqrt(PI) * special.gamma_fn(cc) / (special.gamma_fn(0.5 * (x + 1)) * special.gamma_fn(0.5 * (y + 1)))
        return _rel(special.hyp2f1(x, y, cc, 0.5, ctl), rhs)

    g = special.gamma_fn
    legendre = _rel(g(1 / 3), 2 ** (-2 / 3) / math.sqrt(PI) * g(1 / 6) * g(2 / 3))
    rng = np.random.default_rng(20231)
    pairs = rng.uniform(0.1, 10.0, size=(20, 2))

    def homogeneous(p):
        x, y = p
        return max(_rel(agm.ag2(s * x, s * y), s * agm.ag2(x, y)) for s in (0.5, 3.0)) + \
            max(_rel(agm.ag3(s * x, s * y), s * agm.ag3(x, y)) for s in (0.5, 3.0))

    def engines(p):
        x, y = p
        return max(_rel(agm.ag2(x, y), agm.agm_general(2, x, y).limit),
                   _rel(agm.ag3(x, y), agm.agm_general(3, x, y).limit))

    s = "agm"
    return [
        Check("Gauss: ag2(theta3^2, theta4^2) = 1", s,
              _worst(lambda q: abs(agm.ag2(special.theta3(q, ctl) ** 2, special.theta4(q, ctl) ** 2) - 1), LIMIT_GRID), 1e-11),
        Check("Borwein: ag3(a, b) = 1", s,
              _worst(lambda q: abs(agm.ag3(special.cubic_a(q, ctl), special.cubic_b(q, ctl)) - 1), LIMIT_GRID), 1e-11),
        Check("homogeneity of ag2 and ag3", s, _worst(homogeneous, pairs), 1e-13),
        Check("closed ag2/ag3 equal generic order-N engine", s, _worst(engines, pairs), 1e-13),
        Check("Gauss constant: three routes agree", s, special.route_spread(special.gauss_constant_routes(ctl)), 1e-10),
        Check("Landau constant: three routes agree", s, special.route_spread(special.landau_plus_routes(ctl)), 1e-10),
        Check("ag3(2^(1/3), 1) = 2 L+", s,
              _rel(agm.ag3(2 ** (1 / 3), 1.0), 2 * g(1 / 3) * g(5 / 6) / g(1 / 6)), 1e-10),
        Check("2F1 Gamma formula at x = 1/2", s,
              _worst(gauss_formula, [(1 / 3, 2 / 3), (0.5, 0.5), (0.25, 0.75)]), 1e-10),
        Check("Legendre duplication at z = 1/6", s, legendre, 1e-12),
    ]


def lattice_checks(ctl: SeriesControl | None = None) -> list[Check]:
    checks = []
    s = "lattice"
    for name in lattice.ROOT_NAMES:
        R = lattice.standard_root_system(name)
        verdict = R.validate()
        checks.append(Check(f"root system {name} satisfies axioms (i)-(iv)", s, float(not verdict.passed), 0.0))
        inside = lattice.host_lattice(name).contains(R.roots)
        checks.append(Check(f"root system {name} lies in its host lattice", s, float(not inside.all()), 0.0))

    Z, H = lattice.von_neumann(1.0), lattice.hexagonal(1.0)
    rng = np.random.default_rng(7)
    samples = [(rng.uniform(-1, 1, 2), math.exp(rng.uniform(math.log(0.25), math.log(4.0)))) for _ in range(20)]
    for lat, label in ((Z, "Z^2"), (H, "hexagonal")):
        checks.append(Check(f"functional equation on {label}", s,
                            _worst(lambda p: lattice_theta.check_functional_equation(lat, p[0], p[1], ctl), samples), 1e-10))
    for lat in (lattice.von_neumann(2.0), lattice.hexagonal(2.0), lattice.rectangular(2.0, 1.0)):
        same = lattice.same_point_set(lattice.enumerate_points(lattice.adjoint(lattice.adjoint(lat)), 5.0),
                                      lattice.enumerate_points(lat, 5.0), 5.0)
        checks.append(Check(f"adjoint is an involution ({lat.kind}, density {lat.density:g})", s, float(not same), 0.0))

    q, hq = Nome.from_decay(PI), Nome.from_decay(HEX_DECAY)
    c0 = lattice.deep_hole(H)
    pairs = [
        (lattice_theta.theta_lattice(Z, (0, 0), 1.0, ctl).value, special.theta3(q, ctl) ** 2),
        (lattice_theta.theta_lattice(Z, (0.5, 0.5), 1.0, ctl).value, special.theta2(q, ctl) ** 2),
        (lattice_theta.theta_lattice_dual(Z, (0.5, 0.5), 1.0, ctl).value, special.theta4(q, ctl) ** 2),
        (lattice_theta.theta_lattice(H, (0, 0), 1.0, ctl).value, special.cubic_a(hq, ctl)),
        (lattice_theta.theta_lattice_dual(H, c0, 1.0, ctl).value, special.cubic_b(hq, ctl)),
        (lattice_theta.theta_lattice(H, c0, 1.0, ctl).value, special.cubic_c(hq, ctl)),
    ]
    checks.append(Check("lattice sums reproduce theta constants and a, b, c", s,
                        max(_rel(x, y) for x, y in pairs), 1e-12))
    return checks


def gabor_checks(ctl: SeriesControl | None = None) -> list[Check]:
    s = "gabor"
    sq = gabor.agm_bound_ladder("square", 7, ctl)
    hx = gabor.agm_bound_ladder("hexagonal", 6, ctl)
    checks = [
        Check("square bounds obey ag2 along densities 2^n", s, sq.max_residual, 1e-11),
        Check("hexagonal bounds obey ag3 along densities 2*3^n", s, hx.max_residual, 1e-11),
        Check("ag2(B, A) = 1 along the square ladder", s, max(abs(t.ag_limit - 1) for t in sq.steps), 1e-11),
        Check("ag3(B, A) = 1 along the hexagonal ladder", s, max(abs(t.ag_limit - 1) for t in hx.steps), 1e-11),
    ]
    ks = gabor.kappa_sequence("square", 6, ctl)
    kh = gabor.kappa_sequence("hexagonal", 5, ctl)
    checks.append(Check("kappa_1x1(2) = sqrt 2", s, abs(ks.kappas[0] - math.sqrt(2)) + abs(ks.closed_kappas[0] - math.sqrt(2)), 1e-12))
    checks.append(Check("kappa_2(2) = 2^(1/3)", s, abs(kh.kappas[0] - 2 ** (1 / 3)) + abs(kh.closed_kappas[0] - 2 ** (1 / 3)), 1e-12))
    checks.append(Check("kappa -> 1 (square n=6, hexagonal n=5)", s, max(ks.kappas[-1] - 1, kh.kappas[-1] - 1), 1e-12))

    numeric = []
    for N in (1, 2, 3):
        d = 2.0 * N
        numeric.append((gabor.bounds_janssen_numeric(lattice.von_neumann(d), ctl=ctl), gabor.bounds_square_closed(N, ctl)))
        numeric.append((gabor.bounds_janssen_numeric(lattice.hexagonal(d), ctl=ctl), gabor.bounds_hexagonal_closed(N, ctl)))
        numeric.append((gabor.bounds_janssen_numeric(lattice.rectangular(math.sqrt(2), d), ctl=ctl),
                        gabor.bounds_rectangular_closed(math.sqrt(2), N, ctl)))
    checks.append(Check("Janssen extremization matches closed forms (densities 2, 4, 6)", s,
                        max(max(abs(x.lower - y.lower), abs(x.upper - y.upper)) for x, y in numeric), 1e-8))

    bessel = max(y.upper - gabor.bessel_bound(lattice.von_neumann(y.density) if y.lattice_kind == "square" else
                                              lattice.hexagonal(y.density) if y.lattice_kind == "hexagonal" else
                                              lattice.rectangular(y.aspect, y.density), ctl)
                 for _, y in numeric)
    checks.append(Check("Bessel domination B <= B~", s, max(bessel, 0.0), 1e-13))

    def rect(a):
        worst = 0.0
        for n in (1, 2, 3):
            lo = gabor.bounds_rectangular_closed(a, 2 ** (n - 1), ctl)
            hi = gabor.bounds_rectangular_closed(a, 2 ** n, ctl)
            worst = max(worst, _rel(hi.lower, math.sqrt(lo.lower * lo.upper)))
        return worst

    checks.append(Check("rectangular A(2^(n+1)) = sqrt(A B)(2^n)", s, _worst(rect, (math.sqrt(2), 2.0)), 1e-10))
    c = gabor.conjecture_constants()
    checks.append(Check("C4 > C3", s, float(not c.C4 > c.C3), 0.0))
    return checks


_SUITE_FUNCS = {"theta": theta_checks, "cubic": cubic_checks, "agm": agm_checks,
                "lattice": lattice_checks, "gabor": gabor_checks}


def run_suite(name: str = "all", ctl: SeriesControl | None = None) -> list[Check]:
    if name == "all":
        return [c for s in SUITES for c in _SUITE_FUNCS[s](ctl)]
    try:
        return _SUITE_FUNCS[name](ctl)
    except KeyError:
        raise special.DomainError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}") from None
