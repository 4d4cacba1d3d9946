import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from theta_agm import agm, gabor, lattice, special
from theta_agm.errors import ConsistencyError, DensityError, DomainError

GAUSS = 0.834627


class TestClosedForms:
    def test_square_density_two(self):
        fb = gabor.bounds_square_closed(1)
        assert fb.lower == pytest.approx(GAUSS, abs=5e-6)
        assert fb.upper == pytest.approx(math.sqrt(2) * fb.lower, rel=1e-13)
        assert fb.upper == pytest.approx(1.180340, abs=5e-6)
        assert fb.method == "closed_form"

    def test_square_density_four(self):
        one, two = gabor.bounds_square_closed(1), gabor.bounds_square_closed(2)
        assert two.lower == pytest.approx(math.sqrt(one.lower * one.upper), rel=1e-13)
        assert two.upper == pytest.approx((one.lower + one.upper) / 2, rel=1e-13)
        assert two.lower == pytest.approx(special.theta4(math.exp(-2 * math.pi)) ** 2, rel=1e-13)
        assert two.upper == pytest.approx(special.theta3(math.exp(-2 * math.pi)) ** 2, rel=1e-13)
        assert two.lower == pytest.approx(special.constant_gauss() * 2**0.25, rel=1e-13)
        assert two.upper == pytest.approx(1.007483, abs=5e-6)

    def test_hexagonal_density_two(self):
        fb = gabor.bounds_hexagonal_closed(1)
        assert fb.lower == pytest.approx(0.920371, abs=5e-6)
        assert fb.lower == pytest.approx(1 / (2 * special.constant_landau_plus()), rel=1e-12)
        assert fb.upper == pytest.approx(2 ** (1 / 3) * fb.lower, rel=1e-13)

    def test_hexagonal_density_six(self):
        one, three = gabor.bounds_hexagonal_closed(1), gabor.bounds_hexagonal_closed(3)
        B, A = agm.ag3_step(one.upper, one.lower)
        assert three.upper == pytest.approx(B, rel=1e-11)
        assert three.lower == pytest.approx(A, rel=1e-11)
        assert three.upper == pytest.approx(1.000112, abs=5e-6)

    def test_large_densities(self):
        sq = gabor.bounds_square_closed(64)
        assert abs(sq.lower - 1) < 1e-10 and abs(sq.upper - 1) < 1e-10
        hx = gabor.bounds_hexagonal_closed(27)
        assert abs(hx.lower - 1) < 1e-9 and abs(hx.upper - 1) < 1e-9

    def test_rectangular_reduces_to_square(self):
        r, s = gabor.bounds_rectangular_closed(1.0, 1), gabor.bounds_square_closed(1)
        assert (r.lower, r.upper) == (s.lower, s.upper)

    def test_rectangular_root_two(self):
        fb = gabor.bounds_rectangular_closed(math.sqrt(2), 1)
        th4 = special.theta4
        assert fb.lower == pytest.approx(th4(math.exp(-2 * math.pi)) * th4(math.exp(-math.pi / 2)), rel=1e-13)

    @pytest.mark.parametrize("a", [math.sqrt(2), 2.0])
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_rectangular_geometric_mean(self, a, n):
        lo, hi = gabor.bounds_rectangular_closed(a, 2 ** (n - 1)), gabor.bounds_rectangular_closed(a, 2**n)
        assert hi.lower == pytest.approx(math.sqrt(lo.lower * lo.upper), rel=1e-10)

    @pytest.mark.parametrize("N", [0, -1, 1.5])
    def test_bad_N(self, N):
        with pytest.raises(DomainError):
            gabor.bounds_square_closed(N)

    def test_bracket_is_enforced(self):
        with pytest.raises(ConsistencyError):
            gabor.FrameBounds(1.2, 1.5, 2.0, "square", "closed_form")

    @given(st.integers(1, 40), st.floats(0.5, 3.0))
    @settings(max_examples=40, deadline=None)
    def test_brackets_identity(self, N, a):
        for fb in (gabor.bounds_square_closed(N), gabor.bounds_hexagonal_closed(N),
                   gabor.bounds_rectangular_closed(a, N)):
            assert 0 < fb.lower <= 1 <= fb.upper
            assert fb.kappa >= 1


class TestJanssen:
    @pytest.mark.parametrize("N", [1, 2, 3])
    def test_matches_closed_forms(self, N):
        d = 2.0 * N
        pairs = [(lattice.von_neumann(d), gabor.bounds_square_closed(N)),
                 (lattice.hexagonal(d), gabor.bounds_hexagonal_closed(N)),
                 (lattice.rectangular(math.sqrt(2), d), gabor.bounds_rectangular_closed(math.sqrt(2), N))]
        for lat, closed in pairs:
            num = gabor.bounds_janssen_numeric(lat)
            assert num.method == "janssen_numeric"
            assert abs(num.lower - closed.lower) < 1e-8 and abs(num.upper - closed.upper) < 1e-8

    def test_rectangular_two(self):
        num = gabor.bounds_janssen_numeric(lattice.rectangular(2.0, 2.0))
        closed = gabor.bounds_rectangular_closed(2.0, 1)
        assert abs(num.lower - closed.lower) < 1e-8 and abs(num.upper - closed.upper) < 1e-8

    @pytest.mark.parametrize("lat", [lattice.von_neumann(2.0), lattice.hexagonal(2.0), lattice.hexagonal(4.0)])
    def test_minimizer_is_deep_hole(self, lat):
        num = gabor.bounds_janssen_numeric(lat)
        hole = lattice.deep_hole(lat)
        pts = lattice.enumerate_points(lat, 4.0)
        dist = np.min(np.linalg.norm(pts + hole - np.asarray(num.minimizer), axis=1))
        assert dist < 1e-6
        assert num.maximizer == (0.0, 0.0)

    def test_janssen_sum_at_origin_is_bessel_bound(self):
        for lat in (lattice.von_neumann(2.0), lattice.hexagonal(4.0), lattice.rectangular(2.0, 6.0)):
            janssen = gabor.JanssenSum(lat)
            assert janssen.scalar([0.0, 0.0]) == pytest.approx(gabor.bessel_bound(lat), rel=1e-13)

    @pytest.mark.parametrize("density", [3.0, 1.0, 2.5])
    def test_density_rejected(self, density):
        with pytest.raises(DensityError):
            gabor.bounds_janssen_numeric(lattice.von_neumann(density))

    def test_coarse_grid_still_converges(self):
        num = gabor.bounds_janssen_numeric(lattice.hexagonal(2.0), grid=8)
        assert abs(num.lower - gabor.bounds_hexagonal_closed(1).lower) < 1e-8


class TestBessel:
    def test_square_equality(self):
        assert gabor.bessel_bound(lattice.von_neumann(2.0)) == pytest.approx(gabor.bounds_square_closed(1).upper,
                                                                            rel=1e-13)

    def test_domination(self):
        for N in (1, 2, 3):
            assert gabor.bounds_hexagonal_closed(N).upper <= gabor.bessel_bound(lattice.hexagonal(2.0 * N)) * (1 + 1e-13)

    def test_any_density(self):
        assert gabor.bessel_bound(lattice.von_neumann(1.0)) > 1


class TestLadders:
    def test_square_ladder(self):
        ladder = gabor.agm_bound_ladder("square", 8)
        assert [s.density for s in ladder.steps] == [2.0**n for n in range(1, 9)]
        assert ladder.max_residual < 1e-11
        assert all(abs(s.ag_limit - 1) < 1e-11 for s in ladder.steps)
        A, B = ladder.steps[1].recursed
        assert B == pytest.approx(1.007483, abs=5e-6)
        assert A == pytest.approx(0.992546, abs=5e-6)

    def test_hexagonal_ladder(self):
        ladder = gabor.agm_bound_ladder("hexagonal", 6)
        assert [s.density for s in ladder.steps] == [2.0 * 3 ** (n - 1) for n in range(1, 7)]
        assert ladder.max_residual < 1e-11
        assert ladder.steps[1].closed.upper == pytest.approx(1.000112, abs=5e-6)

    def test_sequence_returns_bounds(self):
        seq = gabor.agm_bound_sequence("hex", 3)
        assert len(seq) == 3 and all(isinstance(b, gabor.FrameBounds) for b in seq)

    @pytest.mark.parametrize("kind,power", [("square", 1.8), ("hexagonal", 1.8)])
    def test_convergence_order(self, kind, power):
        steps = gabor.agm_bound_ladder(kind, 6).steps
        gaps = [1 - s.closed.lower for s in steps]
        for g0, g1 in zip(gaps, gaps[1:]):
            if 1e-7 < g0 < 0.1:
                assert g1 <= g0**power

    def test_truncation_flag(self):
        ladder = gabor.agm_bound_ladder("square", 60)
        assert ladder.truncated
        assert len(ladder.steps) < 60

    def test_unknown_kind(self):
        with pytest.raises(DomainError):
            gabor.agm_bound_ladder("triangle", 2)


class TestKappa:
    def test_square(self):
        seq = gabor.kappa_sequence("square", 6)
        assert seq.kappas[0] == pytest.approx(math.sqrt(2), abs=1e-12)
        assert seq.kappas[1] == pytest.approx((2**-0.25 + 2**0.25) / 2, rel=1e-14)
        assert seq.kappas[1] == pytest.approx(1.015052, abs=5e-6)
        assert abs(seq.kappas[5] - 1) < 1e-12

    def test_hexagonal(self):
        seq = gabor.kappa_sequence("hexagonal", 5)
        assert seq.kappas[0] == pytest.approx(2 ** (1 / 3), abs=1e-12)
        assert abs(seq.kappas[4] - 1) < 1e-12
        assert np.allclose(seq.kappas, seq.closed_kappas, rtol=1e-11)

    @pytest.mark.parametrize("kind", ["square", "hexagonal"])
    def test_decreasing(self, kind):
        k = gabor.kappa_sequence(kind, 6).kappas
        assert all(b < a for a, b in zip(k, k[1:]) if a > 1)
        assert all(x >= 1 for x in k)

    @given(st.floats(1.0, 5.0))
    @settings(max_examples=40, deadline=None)
    def test_recursions_contract(self, kappa):
        for step in (gabor.kappa_step_square, gabor.kappa_step_hexagonal):
            nxt = step(kappa)
            assert 1 - 1e-15 <= nxt <= kappa * (1 + 1e-15)


def test_conjecture_constants():
    c = gabor.conjecture_constants()
    assert c.C3 == pytest.approx(0.387438, abs=5e-6)
    assert c.C4 == pytest.approx(0.456947, abs=5e-6)
    assert c.C4 > c.C3
