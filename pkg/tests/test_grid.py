"""Spectral differentiation, quadrature, norms, and serialization."""

import numpy as np
import pytest

from gkdvlab.grid import (Field, Grid, field_from_csv, field_to_csv, integrate,
                          localized_h1, norms, read_snapshot, spectral_derivative,
                          translate, weighted_sobolev_norm, write_snapshot)
from gkdvlab.exact import soliton


@pytest.fixture(scope="module")
def grid():
    return Grid(L=60.0, N=2048)


class TestGridValidation:
    def test_power_of_two(self):
        with pytest.raises(ValueError):
            Grid(L=10.0, N=1000)

    def test_minimum_size(self):
        with pytest.raises(ValueError):
            Grid(L=10.0, N=8)

    def test_box_measure(self):
        g = Grid(L=40.0, N=256)
        assert integrate(Field(g, np.ones(g.N))) == pytest.approx(80.0, abs=1e-12)


class TestFieldValidation:
    def test_rejects_nan(self, grid):
        values = np.zeros(grid.N)
        values[3] = np.nan
        with pytest.raises(ValueError):
            Field(grid, values)

    def test_immutable(self, grid):
        u = Field.zeros(grid)
        with pytest.raises(ValueError):
            u.values[0] = 1.0

    def test_grid_mismatch_rejected(self, grid):
        other = Grid(L=50.0, N=2048)
        u = soliton(1.0, 2, grid)
        with pytest.raises(ValueError):
            from gkdvlab.exact import pde_residual
            from gkdvlab.nonlinearity import PolyNonlinearity
            pde_residual(lambda t: u, PolyNonlinearity({2: 1.0}), 0.0, 1e-4, other)


class TestSpectralDerivative:
    def test_single_mode_exact(self, grid):
        u = Field.from_function(grid, lambda x: np.sin(np.pi * x / grid.L))
        du = spectral_derivative(u, 1)
        expected = (np.pi / grid.L) * np.cos(np.pi * grid.x / grid.L)
        assert np.abs(du.values - expected).max() <= 1e-12

    def test_constant(self, grid):
        u = Field(grid, np.full(grid.N, 2.5))
        for order in (1, 2, 3, 4):
            assert np.abs(spectral_derivative(u, order).values).max() <= 1e-12

    def test_sech2_second_derivative(self):
        g = Grid(L=40.0, N=1024)
        u = Field.from_function(g, lambda x: 1 / np.cosh(x) ** 2)
        d2 = spectral_derivative(u, 2)
        s, t = 1 / np.cosh(g.x), np.tanh(g.x)
        analytic = 2 * s**2 * (3 * t**2 - 1)
        assert np.abs(d2.values - analytic).max() <= 1e-8

    def test_composition_matches_second_order(self, grid):
        rng = np.random.default_rng(7)
        uh = np.zeros(grid.N // 2 + 1, dtype=complex)
        uh[1:40] = rng.standard_normal(39) + 1j * rng.standard_normal(39)
        u = Field(grid, np.fft.irfft(uh, n=grid.N))
        twice = spectral_derivative(spectral_derivative(u, 1), 1)
        second = spectral_derivative(u, 2)
        assert np.abs(twice.values - second.values).max() <= 1e-10

    def test_derivative_integrates_to_zero(self, grid):
        u = Field.from_function(grid, lambda x: np.exp(-((x - 3) ** 2) / 8))
        assert abs(integrate(spectral_derivative(u, 1))) <= 1e-13

    def test_order_bounds(self, grid):
        u = Field.zeros(grid)
        with pytest.raises(ValueError):
            spectral_derivative(u, 5)


class TestIntegrate:
    def test_zero(self, grid):
        assert integrate(Field.zeros(grid)) == 0.0

    def test_sech2(self):
        g = Grid(L=40.0, N=1024)
        u = Field.from_function(g, lambda x: 1 / np.cosh(x) ** 2)
        assert integrate(u) == pytest.approx(2 * np.tanh(40.0), abs=1e-12)

    def test_full_period_mode(self, grid):
        u = Field.from_function(grid, lambda x: np.cos(np.pi * x / grid.L))
        assert abs(integrate(u)) <= 1e-13

    def test_parseval(self, grid):
        rng = np.random.default_rng(11)
        u = Field(grid, rng.standard_normal(grid.N))
        physical = integrate(Field(grid, u.values**2))
        uh = np.fft.rfft(u.values)
        weights = np.full(uh.size, 2.0)
        weights[0] = 1.0
        weights[-1] = 1.0
        spectral = (2 * grid.L / grid.N**2) * float((weights * np.abs(uh) ** 2).sum())
        assert physical == pytest.approx(spectral, rel=1e-12)


class TestNorms:
    def test_zero(self, grid):
        nm = norms(Field.zeros(grid))
        assert nm.L1 == nm.L2 == nm.H1 == nm.Linf == 0.0

    def test_kdv_soliton_values(self, grid):
        q = soliton(1.0, 2, grid)
        nm = norms(q)
        assert nm.L1 == pytest.approx(6.0, rel=1e-12)
        assert nm.L2**2 == pytest.approx(6.0, rel=1e-12)
        # int Q_x^2 = 6/5 for the unit-speed quadratic soliton
        assert nm.H1**2 == pytest.approx(7.2, rel=1e-10)
        assert nm.Linf == pytest.approx(1.5, rel=1e-12)


class TestWeightedSobolev:
    def test_zero(self, grid):
        assert weighted_sobolev_norm(Field.zeros(grid), 2, 1.0) == 0.0

    def test_r0_collapses_to_h1(self, grid):
        u = Field.from_function(grid, lambda x: np.exp(-(x**2) / 10))
        assert weighted_sobolev_norm(u, 1, 0.0) == pytest.approx(norms(u).H1, rel=1e-14)

    def test_self_convergence(self):
        # the |x| weight (r = 1/2) is only C0 at the origin, so the uniform
        # rule converges at second order rather than spectrally
        vals = []
        for n in (2048, 4096, 8192):
            g = Grid(L=60.0, N=n)
            u = Field.from_function(g, lambda x: 1 / np.cosh(x))
            vals.append(weighted_sobolev_norm(u, 0, 0.5))
        coarse = abs(vals[1] - vals[0])
        fine = abs(vals[2] - vals[1])
        assert fine <= 1e-4
        assert coarse / fine == pytest.approx(4.0, rel=0.2)

    def test_self_convergence_smooth_weight(self):
        # integer r keeps the weight smooth and the quadrature spectral
        vals = []
        for n in (4096, 8192):
            g = Grid(L=60.0, N=n)
            u = Field.from_function(g, lambda x: 1 / np.cosh(x))
            vals.append(weighted_sobolev_norm(u, 0, 1.0))
        assert abs(vals[0] - vals[1]) <= 1e-10

    def test_weighted_term_positive(self, grid):
        u = Field.from_function(grid, lambda x: np.exp(-(x**2) / 10))
        assert weighted_sobolev_norm(u, 0, 1.0) > norms(u).L2


class TestLocalizedH1:
    def test_zero_field(self, grid):
        assert localized_h1(Field.zeros(grid), -5.0, 5.0) == 0.0

    def test_full_box_collapses_to_h1(self, grid):
        u = Field.from_function(grid, lambda x: np.exp(-(x**2) / 10))
        full = localized_h1(u, -grid.L, grid.L)
        assert full == pytest.approx(norms(u).H1, rel=1e-12)

    def test_far_soliton_tail(self):
        g = Grid(L=60.0, N=2048)
        u = soliton(1.0, 2, g, center=30.0)
        assert localized_h1(u, -5.0, 5.0) <= 1e-6

    def test_monotone_in_interval(self, grid):
        rng = np.random.default_rng(3)
        uh = np.zeros(grid.N // 2 + 1, dtype=complex)
        uh[1:30] = rng.standard_normal(29)
        u = Field(grid, np.fft.irfft(uh, n=grid.N))
        inner = localized_h1(u, -3.0, 4.0)
        outer = localized_h1(u, -10.0, 10.0)
        assert inner <= outer + 1e-12

    def test_degenerate_interval_is_zero(self, grid):
        u = Field.from_function(grid, lambda x: np.exp(-(x**2)))
        assert localized_h1(u, 0.0, 0.0) == 0.0

    def test_rejects_reversed_interval(self, grid):
        with pytest.raises(ValueError):
            localized_h1(Field.zeros(grid), 3.0, -3.0)

    def test_fractional_cells_vary_smoothly(self, grid):
        u = Field.from_function(grid, lambda x: np.exp(-(x**2) / 20))
        vals = [localized_h1(u, -5.0, 5.0 + eps)
                for eps in np.linspace(0, grid.dx, 5)]
        diffs = np.abs(np.diff(vals))
        assert diffs.max() < 1e-3  # no cell-snapping jumps


class TestTranslate:
    def test_round_trip(self, grid):
        u = soliton(1.0, 2, grid)
        back = translate(translate(u, 7.3), -7.3)
        assert np.abs(back.values - u.values).max() <= 1e-12

    def test_matches_recentred_soliton(self, grid):
        shifted = translate(soliton(1.0, 2, grid), 10.0)
        direct = soliton(1.0, 2, grid, center=10.0)
        assert np.abs(shifted.values - direct.values).max() <= 1e-10


class TestSerialization:
    def test_csv_round_trip(self, grid, tmp_path):
        u = soliton(1.0, 2, grid)
        path = tmp_path / "field.csv"
        field_to_csv(u, path)
        back = field_from_csv(path)
        assert back.grid == u.grid
        assert np.abs(back.values - u.values).max() == 0.0

    def test_snapshot_round_trip(self, grid, tmp_path):
        u = soliton(2.0, 3, grid)
        path = tmp_path / "field.bin"
        write_snapshot(u, path)
        back = read_snapshot(path)
        assert back.grid == u.grid
        assert np.array_equal(back.values, u.values)

    def test_snapshot_layout(self, grid, tmp_path):
        # N as int64, L as float64, then N little-endian doubles
        u = Field.zeros(grid)
        path = tmp_path / "layout.bin"
        write_snapshot(u, path)
        raw = path.read_bytes()
        assert len(raw) == 16 + 8 * grid.N
        assert int.from_bytes(raw[:8], "little") == grid.N
