"""Moment identities, weighted functionals, scaling weight, Kato integrands."""

import math

import numpy as np
import pytest

from gkdvlab.exact import BreatherParams, mkdv_breather, soliton
from gkdvlab.experiments import random_localized
from gkdvlab.grid import Field, Grid, norms
from gkdvlab.nonlinearity import PolyNonlinearity
from gkdvlab.solver import SolverConfig, TrajectoryRecorder, conserved, evolve
from gkdvlab.virial import (DecayInterval, ScalingWeight, WeightProfile,
                            decay_interval, functional_I, functional_J,
                            functional_K, kato_integrands, moment_lambda,
                            moment_omega)

KDV = PolyNonlinearity({2: 1.0})
GARDNER = PolyNonlinearity({2: 1.0, 3: 0.5})
MKDV = PolyNonlinearity({3: 1.0})


@pytest.fixture(scope="module")
def grid():
    return Grid(L=60.0, N=2048)


class TestWeightProfiles:
    @pytest.mark.parametrize("kind", ["tanh", "tanh2x", "tanh3x", "sech6", "sech8"])
    def test_derivatives_by_finite_differences(self, kind):
        p = WeightProfile.make(kind)
        y = np.linspace(-4, 4, 41)
        h = 1e-5
        for fn, dfn in ((p.psi, p.dpsi), (p.dpsi, p.d2psi), (p.d2psi, p.d3psi)):
            fd = (fn(y + h) - fn(y - h)) / (2 * h)
            assert np.abs(fd - dfn(y)).max() <= 1e-7

    @pytest.mark.parametrize("kind", ["tanh", "tanh2x", "tanh3x", "sech6", "sech8"])
    def test_bounded(self, kind):
        p = WeightProfile.make(kind)
        y = np.linspace(-800, 800, 2001)  # no overflow at extreme arguments
        for fn in (p.psi, p.dpsi, p.d2psi, p.d3psi):
            v = fn(y)
            assert np.all(np.isfinite(v))
            assert np.abs(v).max() < 60.0

    def test_known_values(self):
        p = WeightProfile.make("tanh2x")
        assert p.dpsi(np.array([0.0]))[0] == pytest.approx(2.0)
        q = WeightProfile.make("tanh3x")
        assert q.dpsi(np.array([0.0]))[0] == pytest.approx(3.0)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            WeightProfile.make("cosine")


class TestScalingWeight:
    def test_values_at_e_squared(self):
        sw = ScalingWeight.at(math.e**2)
        assert sw.lam == pytest.approx(math.e / 2, rel=1e-12)
        assert sw.lam_prime == pytest.approx(0.0, abs=1e-15)

    def test_value_at_100(self):
        sw = ScalingWeight.at(100.0)
        assert sw.lam == pytest.approx(10.0 / math.log(100.0), rel=1e-12)

    def test_positivity_beyond_e_squared(self):
        for t in (8.0, 20.0, 400.0):
            sw = ScalingWeight.at(t)
            assert sw.ratio > 0 and sw.lam_prime > 0

    def test_quotient_consistency(self):
        for t in (2.0, 5.0, 37.0, 1e4):
            sw = ScalingWeight.at(t)
            assert sw.lam_prime_sq == pytest.approx(sw.ratio**2 * sw.lam**2,
                                                    rel=1e-14)

    def test_rejects_early_time(self):
        with pytest.raises(ValueError):
            ScalingWeight.at(1.5)


class TestDecayInterval:
    def test_arithmetic(self, grid):
        iv = decay_interval(math.e**2, 1.0, grid)
        assert iv.b == pytest.approx(math.e / 2, rel=1e-12)
        iv = decay_interval(100.0, 1.0, grid)
        assert iv.b == pytest.approx(10.0 / math.log(100.0), rel=1e-12)
        assert not iv.clipped

    def test_degenerate(self, grid):
        iv = decay_interval(10.0, 0.0, grid)
        assert iv == DecayInterval(0.0, 0.0, False)
        from gkdvlab.grid import localized_h1
        u = Field.from_function(grid, lambda x: np.exp(-(x**2)))
        assert localized_h1(u, iv.a, iv.b) == 0.0

    def test_clipping(self):
        g = Grid(L=2.0, N=64)
        iv = decay_interval(1e6, 5.0, g)
        assert iv.clipped and iv.b == pytest.approx(0.9 * g.L)


class TestMomentOmega:
    def test_zero(self, grid):
        res = moment_omega(Field.zeros(grid), KDV)
        assert res.value == res.rhs == 0.0

    def test_even_field_zero_moment(self, grid):
        u = Field.from_function(grid, lambda x: 1 / np.cosh(x) ** 2)
        res = moment_omega(u, KDV)
        assert abs(res.value) <= 1e-12

    def test_soliton_rhs_is_i2(self, grid):
        q = soliton(1.0, 2, grid)
        res = moment_omega(q, KDV)
        assert res.rhs == pytest.approx(6.0, rel=1e-12)
        assert res.rhs > 0  # sign-definite f drives the moment strictly up


class TestMomentLambda:
    def test_zero_field(self, grid):
        res = moment_lambda(Field.zeros(grid), KDV, 0.0)
        assert res.value == 0.0 and res.rhs == 0.0

    def test_mkdv_rhs_is_minus_6_i3(self, grid):
        # G - F/3 vanishes identically for the pure cubic
        u = Field.from_function(grid, lambda x: 0.3 * np.exp(-(x**2) / 4))
        i3 = 0.7321
        res = moment_lambda(u, MKDV, i3)
        assert res.rhs == pytest.approx(-6.0 * i3, rel=1e-14)

    def test_quintic_small_data_bound(self, grid):
        # for small data the derivative obeys rhs <= -(3/2)||u_x||^2
        f5 = PolyNonlinearity({5: 1.0})
        u = Field.from_function(grid, lambda x: 1e-2 * np.exp(-(x**2) / 8))
        scale = 1e-2 / norms(u).H1
        u = Field(grid, scale * u.values)  # H1 norm exactly 1e-2
        i3_0 = conserved(u, f5).I3
        res = moment_lambda(u, f5, i3_0)
        ux_sq = norms(u).H1**2 - norms(u).L2**2
        assert res.rhs <= -1.5 * ux_sq


class TestFunctionalDegeneracies:
    def test_zero_field(self, grid):
        z = Field.zeros(grid)
        for fn in (functional_I, functional_J, functional_K):
            res = fn(z, 10.0, KDV)
            assert res.value == 0.0 and res.rhs == 0.0

    def test_even_field_odd_weight(self, grid):
        u = Field.from_function(grid, lambda x: 1 / np.cosh(x) ** 2)
        res = functional_I(u, 10.0, KDV)
        assert abs(res.value) <= 1e-12

    def test_flat_profile_recovers_mass(self, grid):
        u = Field.from_function(grid, lambda x: 0.4 * np.exp(-(x**2) / 6))
        flat = WeightProfile.make("flat")
        res = functional_J(u, 10.0, GARDNER, flat)
        assert res.rhs == 0.0
        assert res.value == pytest.approx(0.5 * conserved(u, GARDNER).I2, rel=1e-12)

    def test_flat_profile_recovers_energy(self, grid):
        u = Field.from_function(grid, lambda x: 0.4 * np.exp(-(x**2) / 6))
        flat = WeightProfile.make("flat")
        res = functional_K(u, 10.0, GARDNER, flat)
        assert res.rhs == 0.0
        assert res.value == pytest.approx(conserved(u, GARDNER).I3, rel=1e-10)

    def test_rejects_early_diagnostic_time(self, grid):
        u = Field.zeros(grid)
        with pytest.raises(ValueError):
            functional_I(u, 1.0, KDV)

    def test_K_rejects_cubic_leading(self, grid):
        with pytest.raises(ValueError):
            functional_K(Field.zeros(grid), 10.0, MKDV)


class TestKatoIntegrands:
    def test_zero(self, grid):
        k = kato_integrands(Field.zeros(grid), 1.0, 1.0)
        assert k.sech2_u2 == k.sech4_ux2 == k.sech6_uxx2 == k.exp_all == 0.0

    def test_sech_quadrature(self, grid):
        # int sech^2(x) * sech^2(x) dx = int sech^4 = 4/3 at unit scale
        u = Field.from_function(grid, lambda x: 1 / np.cosh(x))
        k = kato_integrands(u, 1.0, 1.0)
        assert k.sech2_u2 == pytest.approx(4.0 / 3.0, rel=1e-12)

    def test_nonnegative(self, grid):
        u = random_localized(grid, 0.1, 0.5, seed=3)
        k = kato_integrands(u, 2.0, 1.0)
        assert min(k.sech2_u2, k.sech4_ux2, k.sech6_uxx2, k.exp_all) >= 0.0


def closure_residuals(series, keys):
    out = {}
    for key in keys:
        fd = series.column(f"fd_{key}")
        rhs = series.column(f"{key}_rhs")
        ok = np.isfinite(fd) & np.isfinite(rhs)
        assert ok.sum() >= 3
        out[key] = float(np.max(np.abs(fd[ok] - rhs[ok]) / (1.0 + np.abs(rhs[ok]))))
    return out


class TestIdentityClosure:
    """Core property: finite differences of every functional along a solver
    trajectory agree with the analytic right-hand sides."""

    @pytest.mark.parametrize("f,keys", [
        (KDV, ("Omega", "Lambda", "I", "J", "K")),
        (GARDNER, ("Omega", "Lambda", "I", "J", "K")),
        (MKDV, ("Omega", "Lambda")),
    ], ids=["quadratic", "quadratic-cubic", "cubic"])
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_closure_along_trajectories(self, grid, f, keys, seed):
        u0 = random_localized(grid, 0.05, 0.5, seed=seed)
        cfg = SolverConfig(dt=1e-3, t_end=2.0, output_stride=250)
        series = evolve(u0, f, cfg, recorder=TrajectoryRecorder(f))
        assert series.status == "ok"
        res = closure_residuals(series, keys)
        for key, value in res.items():
            tol = 1e-3 if key == "K" else 1e-4
            assert value <= tol, f"{key} closure residual {value:.3e} at seed {seed}"

    def test_accumulators_nondecreasing(self, grid):
        u0 = random_localized(grid, 0.05, 0.5, seed=4)
        cfg = SolverConfig(dt=1e-3, t_end=1.0, output_stride=100)
        series = evolve(u0, KDV, cfg)
        for name in ("acc_sech2_u2", "acc_sech4_ux2", "acc_sech6_uxx2", "acc_exp_all"):
            acc = series.column(name)
            assert np.all(np.diff(acc) >= -1e-15)

    def test_standing_breather_lambda_consistency(self, grid):
        # for the zero-speed breather the conserved energy vanishes, so the
        # weighted-mass moment is constant along the trajectory
        params = BreatherParams(alpha=0.7, beta=0.7 * math.sqrt(3.0))
        u0 = mkdv_breather(params, 0.0, grid)
        i3 = conserved(u0, MKDV).I3
        assert abs(i3) <= 1e-8
        cfg = SolverConfig(dt=2.5e-4, t_end=0.5, output_stride=500)
        series = evolve(u0, MKDV, cfg)
        lam = series.column("Lambda")
        assert np.abs(lam - lam[0]).max() <= 1e-6
