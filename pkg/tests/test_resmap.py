import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casimir_duomode import slowamp
from casimir_duomode.cavity import NU_CUBICAL
from casimir_duomode.resmap import (
    DetuningPoint,
    RegionKind,
    abc_normalized,
    classify,
    eta_critical,
    hyperbola_bounds,
    resonance_widths,
    sweep_grid,
)

NU = NU_CUBICAL


class TestDetuningPoint:
    def test_derived_quantities(self):
        pt = DetuningPoint(1.5, 2.0)
        assert pt.eta == pytest.approx(2.0 - 6.0)
        assert pt.gamma == pytest.approx(2.0 - 4.5)


class TestClassify:
    def test_origin_is_symmetric(self):
        v = classify(DetuningPoint(0.0, 0.0), NU)
        assert v.kind is RegionKind.SYMMETRIC_RESONANCE
        assert v.increment == pytest.approx(0.5, rel=1e-12)
        assert v.diagnostics[2] < 0

    def test_asymmetric_special_point(self):
        v = classify(DetuningPoint(1.0, 3.0 - NU / 2.0), NU)
        assert v.kind is RegionKind.ASYMMETRIC_RESONANCE
        assert v.increment == pytest.approx(1.0 - 2.0 / NU, abs=20.0 / NU**2)

    def test_quiet_point(self):
        v = classify(DetuningPoint(0.0, 5.0), NU)
        assert v.kind is RegionKind.NO_GENERATION
        assert v.increment == 0.0
        a, b, c = v.diagnostics
        assert b > 0 and c > 0
        assert slowamp.lambda_pair(a, b)[0].real == 0.0

    def test_requires_large_nu(self):
        with pytest.raises(ValueError):
            classify(DetuningPoint(0.0, 0.0), 0.9)

    def test_boundary_tie_is_quiet(self):
        # on the hyperbola b = 0 exactly: gamma = nu/(2(1 - dt))
        dt = 2.0
        gamma = NU / (2.0 * (1.0 - dt))
        pt = DetuningPoint(dt, gamma + 3.0 * dt)
        a, b, c = abc_normalized(pt, NU)
        assert abs(b) < 1e-9
        assert classify(pt, NU).kind is RegionKind.NO_GENERATION

    def test_verdict_matches_eigenvalue_sign(self):
        rng = np.random.default_rng(5)
        for _ in range(2000):
            pt = DetuningPoint(float(rng.uniform(-6, 6)), float(rng.uniform(-6, 6)))
            v = classify(pt, NU)
            a, b, _ = abc_normalized(pt, NU)
            lam = slowamp.lambda_pair(a, b)[0].real
            assert (v.kind is not RegionKind.NO_GENERATION) == (lam > 1e-12)


class TestEtaCritical:
    def test_on_axis_root(self):
        # quadratic-in-eta^2 closed form as the independent oracle
        ec = eta_critical(0.0, NU)
        A, C = 2.0 + 2.0 * NU, 1.0 - 2.0 * NU
        root = math.sqrt((-A + math.sqrt(A * A - 4.0 * C)) / 2.0)
        assert ec.exact == pytest.approx(root, abs=1e-10)
        assert ec.exact == pytest.approx(0.9447475198, abs=1e-9)
        assert ec.approx == 1.0

    def test_large_nu_approaches_one(self):
        ec = eta_critical(0.0, 1e6)
        assert ec.exact == pytest.approx(1.0, abs=1e-5)

    def test_large_detuning_scaling(self):
        dt = 50.0
        ec = eta_critical(dt, NU)
        assert ec.approx == pytest.approx(math.sqrt(NU / (2 * dt * dt)), rel=4e-3)

    def test_approx_error_shrinks_with_nu(self):
        for nu in (20.0, 50.0, 200.0):
            ec = eta_critical(0.0, nu)
            assert abs(ec.exact - ec.approx) <= 5.0 / nu

    def test_exact_is_sign_change_of_c(self):
        for dt in (-3.0, -0.5, 0.0, 1.7, 4.0):
            ec = eta_critical(dt, NU)
            assert ec.exact is not None
            pt_in = DetuningPoint(dt, 4.0 * dt + 0.95 * ec.exact)
            pt_out = DetuningPoint(dt, 4.0 * dt + 1.05 * ec.exact)
            assert abc_normalized(pt_in, NU)[2] < 0
            assert abc_normalized(pt_out, NU)[2] > 0


class TestHyperbolaBounds:
    def test_rays_on_axis(self):
        gb = hyperbola_bounds(0.0, NU)
        assert gb.intervals == ((-math.inf, -25.0 / 3.0), (25.0 / 3.0, math.inf))
        assert not gb.pole

    def test_interval_beyond_one(self):
        gb = hyperbola_bounds(2.0, NU)
        (lo, hi), = gb.intervals
        assert lo == pytest.approx(-25.0 / 3.0)
        assert hi == pytest.approx(-25.0 / 9.0)

    def test_pole_flagged(self):
        gb = hyperbola_bounds(1.0, NU)
        assert gb.pole
        assert gb.intervals == ((-math.inf, -0.25 * NU),)

    @given(dt=st.floats(-5.0, 5.0), scale=st.floats(0.05, 0.95))
    @settings(max_examples=200)
    def test_membership_iff_b_negative(self, dt, scale):
        if abs(abs(dt) - 1.0) < 1e-3:
            return
        gb = hyperbola_bounds(dt, NU)
        lo, hi = gb.intervals[-1] if dt <= -1.0 else gb.intervals[0]
        if math.isinf(lo):
            gamma_in = hi - 1.0
            gamma_out = hi + 1.0
        elif math.isinf(hi):
            gamma_in = lo + 1.0
            gamma_out = lo - 1.0
        else:
            gamma_in = lo + scale * (hi - lo)
            gamma_out = hi + 1.0
        for gamma, inside in ((gamma_in, True), (gamma_out, False)):
            b = abc_normalized(DetuningPoint(dt, gamma + 3.0 * dt), NU)[1]
            assert (b < 0) == inside
            assert gb.contains(gamma) == inside

    def test_boundary_has_vanishing_b(self):
        for dt in (-2.4, -0.3, 0.8, 3.1):
            gb = hyperbola_bounds(dt, NU)
            for lo, hi in gb.intervals:
                for gamma in (lo, hi):
                    if math.isinf(gamma):
                        continue
                    b = abc_normalized(DetuningPoint(dt, gamma + 3.0 * dt), NU)[1]
                    assert abs(b) <= 1e-9


class TestWidths:
    def test_symmetric_at_zero(self):
        w = resonance_widths(NU, big_delta_t=0.0)
        assert (w.width_left, w.width_right) == (1.0, 1.0)
        assert w.sigma == 0.0

    @given(bdt=st.floats(-500.0, 500.0))
    @settings(max_examples=200)
    def test_width_sum_is_two(self, bdt):
        w = resonance_widths(NU, big_delta_t=bdt)
        assert w.width_left + w.width_right == pytest.approx(2.0, abs=1e-12)

    def test_vertical_width(self):
        w = resonance_widths(NU, delta_t=2.0)
        assert w.gamma_big_delta == pytest.approx(NU / 3.0, rel=1e-14)
        assert resonance_widths(NU, delta_t=0.5).gamma_big_delta is None

    def test_widths_match_direct_hyperbola_intersections(self):
        # independent oracle: solve both quadratics 2(dt -+ 1) gamma + nu = 0
        # along the horizontal line big_delta_t = const
        bdt = 7.0
        rootsA = np.roots([6.0, -2.0 * (bdt + 3.0), 2.0 * bdt - NU])
        rootsB = np.roots([6.0, -2.0 * (bdt - 3.0), -(2.0 * bdt + NU)])
        w = resonance_widths(NU, big_delta_t=bdt)
        right = abs(rootsA.max() - rootsB.max())
        left = abs(rootsA.min() - rootsB.min())
        assert w.width_right == pytest.approx(right, abs=1e-9)
        assert w.width_left == pytest.approx(left, abs=1e-9)

    def test_small_width_scaling_far_out(self):
        # the smaller width falls off as 3 nu/(bdt^2 - 9), consistent with
        # the direct intersections (the quoted 3 nu/(4 bdt^2) coefficient
        # does not match the sigma formula's own expansion)
        bdt = 500.0
        w = resonance_widths(NU, big_delta_t=bdt)
        assert w.width_right == pytest.approx(3.0 * NU / (bdt**2 - 9.0), rel=1e-3)


class TestSweep:
    def test_deterministic_and_thread_safe(self):
        a = sweep_grid((-6, 6), (-6, 6), 31, NU)
        b = sweep_grid((-6, 6), (-6, 6), 31, NU, workers=3)
        assert np.array_equal(a.increments, b.increments)
        assert all(
            a.kinds[i, j] is b.kinds[i, j]
            for i in range(31)
            for j in range(31)
        )

    def test_symmetric_cells_have_negative_c(self):
        sw = sweep_grid((-6, 6), (-6, 6), 41, NU)
        for i in range(41):
            for j in range(41):
                if sw.kinds[i, j] is RegionKind.SYMMETRIC_RESONANCE:
                    assert sw.c[i, j] < 0

    def test_increment_decays_to_band_edge(self):
        eta_c = eta_critical(0.0, NU).exact
        etas = np.linspace(0.0, eta_c * 0.999, 30)
        incs = [classify(DetuningPoint(0.0, float(e)), NU).increment for e in etas]
        assert incs[0] == pytest.approx(0.5, rel=1e-12)
        assert all(x > y - 1e-12 for x, y in zip(incs, incs[1:]))
        assert incs[-1] < 0.05
        beyond = classify(DetuningPoint(0.0, float(eta_c) + 1e-3), NU)
        assert beyond.kind is RegionKind.NO_GENERATION

    def test_compensation_line_increment_matches_approximation(self):
        from casimir_duomode.slowamp import increment_symmetric_line

        for dt in (0.0, 1.0, 2.5, 4.0):
            inc = classify(DetuningPoint(dt, 4.0 * dt), NU).increment
            approx = increment_symmetric_line(dt, NU).real
            assert abs(inc - approx) / approx <= 3.0 / NU

    def test_resolution_validated(self):
        with pytest.raises(ValueError):
            sweep_grid((-1, 1), (-1, 1), 1, NU)
