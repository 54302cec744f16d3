import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rootflow import dynamics, spectral
from rootflow.dynamics import PositivityError
from rootflow.spectral import PeriodicGrid, RealField

from conftest import positive_band_limited_field, smooth_positive_field


class TestCoefficients:
    def test_constant_field(self, grid):
        c = 1.5
        u = RealField(grid, np.full(grid.n, c))
        co = dynamics.coefficients(u, 0.0)
        assert np.abs(co.V.values).max() < 1e-12
        assert np.abs(co.gamma.values - 1.0 / (np.pi * c)).max() < 1e-12
        assert np.abs(co.rho.values - c).max() < 1e-12

    def test_delta_enters_denominator(self, grid):
        u = RealField(grid, np.full(grid.n, 1.0))
        co = dynamics.coefficients(u, 0.5)
        assert np.abs(co.gamma.values - 1.0 / (np.pi * 1.5)).max() < 1e-12
        assert np.abs(co.rho.values - np.sqrt(1.5)).max() < 1e-12

    @given(seed=st.integers(0, 2**16), delta=st.sampled_from([0.0, 1e-3, 1e-1]))
    @settings(max_examples=30, deadline=None)
    def test_pointwise_bounds(self, seed, delta):
        # gamma <= 1/(pi min u) and |V| <= 1/(2 pi min u): the quotients
        # u/(u^2+v^2) and v/(u^2+v^2) are maximized on the circle u = const
        grid = PeriodicGrid(128)
        u = positive_band_limited_field(grid, np.random.default_rng(seed), floor=0.5)
        co = dynamics.coefficients(u, delta)
        c0 = u.min()
        assert co.gamma.max() <= 1.0 / (np.pi * c0) + 1e-12
        assert np.abs(co.V.values).max() <= 1.0 / (2.0 * np.pi * c0) + 1e-12
        assert co.rho.min() >= np.sqrt(delta + c0**2) - 1e-12

    def test_rejects_nonpositive_at_delta_zero(self, grid):
        u = RealField(grid, np.cos(grid.points))
        with pytest.raises(PositivityError):
            dynamics.coefficients(u, 0.0)
        # a positive delta makes the same field admissible
        dynamics.coefficients(u, 1e-2)

    def test_rejects_negative_delta(self, grid):
        u = RealField(grid, np.ones(grid.n))
        with pytest.raises(ValueError):
            dynamics.coefficients(u, -1e-3)


class TestTendencies:
    def test_flux_form_is_mean_zero(self, grid, rng):
        u = positive_band_limited_field(grid, rng)
        out = dynamics.tendency_flux(u)
        assert abs(out.mean()) < 1e-15

    def test_flux_equals_rational_form(self, grid, rng):
        # chain rule: d/dx arctan(v/u) = (u v' - v u')/(u^2+v^2), and
        # (Hu)' = Lu; the identity only holds to spectral-tail accuracy,
        # so the field must be analytic, not merely band-limited
        u = smooth_positive_field(grid, rng)
        a = dynamics.tendency_flux(u).values
        b = dynamics.tendency_regularized(u, 0.0).values
        assert np.abs(a - b).max() < 1e-10

    def test_nonlinear_tendency_dispatches_to_flux(self, grid, rng):
        u = positive_band_limited_field(grid, rng)
        a = dynamics.nonlinear_tendency(u, 0.0).values
        b = dynamics.tendency_flux(u).values
        assert np.array_equal(a, b)

    def test_regularized_adds_viscosity(self, grid, rng):
        u = positive_band_limited_field(grid, rng)
        delta = 1e-2
        base = dynamics.nonlinear_tendency(u, delta).values
        full = dynamics.tendency_regularized(u, delta).values
        uxx = spectral.derivative(spectral.derivative(u)).values
        assert np.abs(full - base - delta * uxx).max() < 1e-13

    def test_constant_is_steady(self, grid):
        u = RealField(grid, np.full(grid.n, 2.0))
        for delta in (0.0, 1e-2):
            out = dynamics.tendency_regularized(u, delta)
            assert np.abs(out.values).max() < 1e-12

    def test_delta_zero_limit(self, grid, rng):
        u = smooth_positive_field(grid, rng, floor=1.0)
        ref = dynamics.nonlinear_tendency(u, 0.0).values
        err = [
            np.abs(dynamics.nonlinear_tendency(u, d).values - ref).max()
            for d in (1e-4, 1e-6, 1e-8)
        ]
        assert err[2] < err[0]
        assert err[2] < 1e-6

    def test_dealias_close_to_plain_on_smooth_field(self, grid, rng):
        # a field band-limited to n/8 has no aliased products at 3/2 padding,
        # so both evaluations agree up to the rational nonlinearity's own
        # spectral tail
        u = positive_band_limited_field(grid, rng, floor=1.0, kband=8)
        for delta in (0.0, 1e-2):
            a = dynamics.nonlinear_tendency(u, delta, dealias=False).values
            b = dynamics.nonlinear_tendency(u, delta, dealias=True).values
            assert np.abs(a - b).max() < 1e-8

    def test_tendency_positivity_guard(self, grid):
        u = RealField(grid, np.full(grid.n, 1e-12))
        with pytest.raises(PositivityError):
            dynamics.tendency_flux(u)
        with pytest.raises(PositivityError):
            dynamics.nonlinear_tendency(u, 0.0)


class TestLinearization:
    def test_small_perturbation_tendency(self, grid):
        # around u = c the equation linearizes to w_t + (1/(pi c)) L w = 0
        c, eps = 1.0, 1e-6
        x = grid.points
        u = RealField(grid, c + eps * np.cos(3 * x))
        out = dynamics.tendency_flux(u).values
        expect = -(1.0 / (np.pi * c)) * eps * 3.0 * np.cos(3 * x)
        assert np.abs(out - expect).max() < 1e-10 * eps / 1e-6
