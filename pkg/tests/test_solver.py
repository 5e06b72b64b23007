"""Time stepping: accuracy, conservation, dealiasing, and failure paths."""

import numpy as np
import pytest

from gkdvlab.grid import Field, Grid, norms, translate
from gkdvlab.nonlinearity import PolyNonlinearity
from gkdvlab.exact import soliton
from gkdvlab.solver import (CflWarning, NonFiniteError, SolverConfig,
                            TrajectoryRecorder, conserved, evolve, step)

KDV = PolyNonlinearity({2: 1.0})


@pytest.fixture(scope="module")
def grid():
    return Grid(L=60.0, N=2048)


def l2_diff(u, v):
    return float(np.sqrt(u.grid.dx * ((u.values - v.values) ** 2).sum()))


def h1_diff(u, v):
    from gkdvlab.grid import spectral_derivative
    d = Field(u.grid, u.values - v.values)
    dx = spectral_derivative(d, 1)
    return float(np.sqrt(u.grid.dx * ((d.values**2) + dx.values**2).sum()))


class TestConserved:
    def test_zero(self, grid):
        c = conserved(Field.zeros(grid), KDV)
        assert c.I1 == c.I2 == c.I3 == 0.0

    def test_kdv_soliton(self, grid):
        c = conserved(soliton(1.0, 2, grid), KDV)
        assert c.I1 == pytest.approx(6.0, rel=1e-12)
        assert c.I2 == pytest.approx(6.0, rel=1e-12)
        # I3 = (1/2)(6/5) - (1/3) int Q^3 = 0.6 - 2.4
        assert c.I3 == pytest.approx(-1.8, rel=1e-10)


class TestStep:
    def test_linear_phase_advance(self, grid):
        # at 1e-10 amplitude the nonlinearity is negligible and the
        # integrating factor reproduces the dispersive phase exactly
        kappa = grid.wavenumbers[17]
        u0 = Field(grid, 1e-10 * np.sin(kappa * grid.x))
        u = u0
        T, dt = 0.5, 1e-3
        for _ in range(int(T / dt)):
            u = step(u, KDV, dt)
        expected = 1e-10 * np.sin(kappa * (grid.x + kappa**2 * T))
        assert np.abs(u.values - expected).max() <= 1e-19

    def test_soliton_single_step(self, grid):
        dt = 1e-3
        u1 = step(soliton(1.0, 2, grid), KDV, dt)
        exact = translate(soliton(1.0, 2, grid), dt)
        assert h1_diff(u1, exact) <= 1e-9

    def test_nonfinite_surfaces(self, grid):
        u = Field(grid, 1e3 * np.exp(-grid.x**2))
        with pytest.raises(NonFiniteError):
            v = u
            for _ in range(50):
                v = step(v, KDV, 1e-2)


class TestEvolve:
    def test_zero_initial_data(self, grid):
        cfg = SolverConfig(dt=1e-3, t_end=0.1, output_stride=20)
        series = evolve(Field.zeros(grid), KDV, cfg)
        assert series.status == "ok"
        for name in ("I1", "I2", "I3", "Omega", "Lambda", "h1_local"):
            assert np.abs(series.column(name)).max() == 0.0

    def test_conservation_drift(self, grid):
        cfg = SolverConfig(dt=1e-3, t_end=2.0, output_stride=500)
        series = evolve(soliton(1.0, 2, grid), KDV, cfg)
        for name in ("I1", "I2", "I3"):
            col = series.column(name)
            assert np.abs(col - col[0]).max() / abs(col[0]) <= 1e-10

    def test_traveling_wave(self, grid):
        # the evolved soliton equals its translate by cT in H1
        from gkdvlab.solver import _Stepper
        T, dt, c = 5.0, 2e-3, 1.0
        u0 = soliton(c, 2, grid)
        st = _Stepper(grid, KDV, dt, 2.0 / 3.0)
        uh = np.fft.rfft(u0.values)
        for _ in range(int(round(T / dt))):
            uh = st.step_hat(uh)
        assert h1_diff(st.to_field(uh), translate(u0, c * T)) <= 1e-6

    def test_evolve_reaches_t_end(self, grid):
        T = 2.0
        cfg = SolverConfig(dt=1e-3, t_end=T, output_stride=2000)
        u0 = soliton(1.0, 2, grid)
        series = evolve(u0, KDV, cfg)
        assert series.status == "ok"
        assert series.times[-1] == pytest.approx(T)

    def test_time_reversal_symmetry(self, grid):
        # u(t,x) -> u(-t,-x) maps solutions to solutions: evolve, reflect,
        # evolve again, reflect back; this recovers the initial state
        u0 = Field(grid, 0.3 * np.exp(-(grid.x**2) / 8))
        cfg = SolverConfig(dt=1e-3, t_end=1.0, output_stride=1000)

        def final_field(u_start):
            from gkdvlab.solver import _Stepper
            st = _Stepper(grid, KDV, cfg.dt, cfg.dealias)
            uh = np.fft.rfft(u_start.values)
            for _ in range(int(round(cfg.t_end / cfg.dt))):
                uh = st.step_hat(uh)
            return st.to_field(uh)

        def reflect(u):
            return Field(grid, u.values[::-1].copy())

        forward = final_field(u0)
        back = final_field(reflect(forward))
        assert l2_diff(reflect(back), u0) <= 1e-7

    def test_leak_flag_warns_not_halts(self):
        g = Grid(L=20.0, N=256)
        u0 = soliton(1.0, 2, g, center=0.0)  # tails ~ e^-19 at the edge
        cfg = SolverConfig(dt=5e-4, t_end=2.0, output_stride=400,
                           leak_threshold=1e-12)
        series = evolve(u0, KDV, cfg)
        assert series.status == "boundary-leak"
        assert series.first_leak_time is not None
        assert len(series.rows) == 11  # warn-and-continue records everything

    def test_strict_leak_halts(self):
        g = Grid(L=20.0, N=256)
        u0 = soliton(1.0, 2, g, center=0.0)
        cfg = SolverConfig(dt=5e-4, t_end=2.0, output_stride=400,
                           leak_threshold=1e-12, strict_leak=True)
        series = evolve(u0, KDV, cfg)
        assert series.status == "boundary-leak-halt"
        assert len(series.rows) < 11

    def test_nonfinite_carries_partial_series(self, grid):
        u0 = Field(grid, 50.0 * np.exp(-grid.x**2))
        cfg = SolverConfig(dt=5e-2, t_end=10.0, output_stride=1)
        with pytest.raises(NonFiniteError) as err:
            evolve(u0, KDV, cfg)
        assert err.value.series is not None
        assert err.value.series.status == "nonfinite-halt"

    def test_cfl_guard_warns(self, grid):
        cfg = SolverConfig(dt=1e-2, t_end=0.02, output_stride=1)
        with pytest.warns(CflWarning):
            evolve(Field.zeros(grid), KDV, cfg)

    def test_rejects_non_integer_step_count(self, grid):
        cfg = SolverConfig(dt=3e-3, t_end=1.0, output_stride=10)
        with pytest.raises(ValueError):
            evolve(Field.zeros(grid), KDV, cfg)

    def test_observer_columns(self, grid):
        cfg = SolverConfig(dt=1e-3, t_end=0.01, output_stride=5)
        series = evolve(soliton(1.0, 2, grid), KDV, cfg,
                        observers=[lambda u, t: {"peak": float(u.values.max())}])
        assert series.column("peak")[0] == pytest.approx(1.5, rel=1e-12)


class TestDealiasing:
    def test_quadratic_product_alias_free(self, grid):
        # with the 2/3 mask, squaring a field supported on |n| <= N/3
        # produces no spurious modes beyond the resolved band
        rng = np.random.default_rng(5)
        n_half = grid.N // 2
        keep = grid.N // 6
        uh = np.zeros(n_half + 1, dtype=complex)
        uh[1:keep] = rng.standard_normal(keep - 1) * 1e-2
        u = Field(grid, np.fft.irfft(uh, n=grid.N))
        stepped = step(u, KDV, 1e-6)
        out_h = np.fft.rfft(stepped.values)
        # modes beyond 2*keep arise only from aliasing; the mask kills them
        # down to transform roundoff
        tail = np.abs(out_h[2 * keep + 2:])
        assert tail.max() <= 1e-15 * np.abs(out_h).max()

    def test_exact_product_in_band(self, grid):
        # the pseudo-spectral square of a band-limited field agrees with the
        # exact convolution inside the retained band
        rng = np.random.default_rng(9)
        n_half = grid.N // 2
        keep = grid.N // 8
        uh = np.zeros(n_half + 1, dtype=complex)
        uh[1:keep] = (rng.standard_normal(keep - 1)
                      + 1j * rng.standard_normal(keep - 1)) * 1e-3
        u = np.fft.irfft(uh, n=grid.N)
        direct = np.fft.rfft(u**2)
        padded = np.fft.rfft(np.fft.irfft(
            np.concatenate([uh, np.zeros(n_half)]), n=2 * grid.N) ** 2)[:n_half + 1] * 2
        assert np.abs(direct - padded)[:2 * keep].max() <= 1e-18


class TestDtRefinement:
    def test_drift_shrinks_by_rk4_order(self, grid):
        # truncation-dominated regime: halving dt cuts the conservation
        # drift by ~16x (never below the roundoff floor)
        u0 = soliton(1.0, 2, grid)
        drifts = []
        for dt in (8e-3, 4e-3):
            cfg = SolverConfig(dt=dt, t_end=2.0, output_stride=int(0.5 / dt))
            series = evolve(u0, KDV, cfg)
            col = series.column("I2")
            drifts.append(np.abs(col - col[0]).max() / abs(col[0]))
        assert drifts[0] / drifts[1] >= 10.0
