"""Time integration of u_t + (u_xx + f(u))_x = 0 on the periodic grid.

Classical RK4 applied to the integrating-factor form: the dispersive part
is a diagonal unitary multiplier in Fourier space and is applied exactly;
only the nonlinear flux -d/dx f(u) is time-stepped, evaluated
pseudo-spectrally with a configurable dealias mask (2/3 by default, exact
for quadratic f).  The evolve loop appends a diagnostics record every
output_stride steps, keeping the neighboring steps so each functional can
be differenced in time against its analytic right-hand side without
re-simulation.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field as dataclass_field
from typing import Callable, Iterable, Mapping, Optional

import numpy as np

from .grid import Field, Grid, localized_h1, norms
from .nonlinearity import PolyNonlinearity, antiderivative_G
from . import virial

__all__ = [
    "SolverConfig",
    "Conserved",
    "DiagnosticsSeries",
    "TrajectoryRecorder",
    "NonFiniteError",
    "CflWarning",
    "step",
    "evolve",
    "conserved",
]


class NonFiniteError(RuntimeError):
    """The time step produced non-finite values (blow-up or instability)."""

    def __init__(self, message: str, series: Optional["DiagnosticsSeries"] = None):
        super().__init__(message)
        self.series = series


class CflWarning(UserWarning):
    """Advisory: dt exceeds the configured C_cfl / k_max^3 guard."""


@dataclass(frozen=True)
class SolverConfig:
    """Time-stepping parameters.

    The CFL guard is advisory: the dispersive part is integrated exactly,
    so exceeding it costs accuracy in the nonlinear coupling, not
    stability of the linear flow.
    """

    dt: float
    t_end: float
    dealias: float = 2.0 / 3.0
    output_stride: int = 100
    leak_threshold: float = 1e-8
    cfl_constant: float = 5.0
    strict_leak: bool = False

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_end < 0:
            raise ValueError("t_end must be nonnegative")
        if not 0 < self.dealias <= 1:
            raise ValueError("dealias fraction must be in (0, 1]")
        if self.output_stride < 1:
            raise ValueError("output_stride must be at least 1")


@dataclass(frozen=True)
class Conserved:
    I1: float
    I2: float
    I3: float


def conserved(u: Field, f: PolyNonlinearity) -> Conserved:
    """Mass, momentum, and energy: int u, int u^2, int(u_x^2/2 - G(u))."""
    dx = u.grid.dx
    uh = np.fft.rfft(u.values)
    k = u.grid.wavenumbers
    mult = 1j * k
    mult[-1] = 0.0
    ux = np.fft.irfft(mult * uh, n=u.grid.N)
    G = antiderivative_G(f)
    return Conserved(
        I1=float(dx * u.values.sum()),
        I2=float(dx * (u.values**2).sum()),
        I3=float(dx * (0.5 * ux**2 - G(u.values)).sum()),
    )


class _Stepper:
    """Integrating-factor RK4 in rfft space with cached multipliers."""

    def __init__(self, grid: Grid, f: PolyNonlinearity, dt: float, dealias: float):
        self.grid = grid
        self.f = f
        self.dt = dt
        k = grid.wavenumbers
        k3 = k**3
        k3[-1] = 0.0  # freeze the Nyquist mode; the odd symbol is ambiguous there
        self.E = np.exp(1j * k3 * dt / 2.0)
        self.E2 = self.E * self.E
        ikd = 1j * k
        ikd[-1] = 0.0
        self.ikd = ikd
        self.mask = k <= dealias * k[-1] + 1e-12 * k[-1]

    def nonlinear(self, uh: np.ndarray) -> np.ndarray:
        u = np.fft.irfft(uh, n=self.grid.N)
        return -self.ikd * (self.mask * np.fft.rfft(self.f(u)))

    def step_hat(self, uh: np.ndarray) -> np.ndarray:
        dt, E, E2 = self.dt, self.E, self.E2
        with np.errstate(over="ignore", invalid="ignore"):  # blow-up is caught by isfinite
            a = self.nonlinear(uh)
            b = self.nonlinear(E * (uh + dt / 2.0 * a))
            c = self.nonlinear(E * uh + dt / 2.0 * b)
            d = self.nonlinear(E2 * uh + dt * E * c)
            return E2 * uh + dt / 6.0 * (E2 * a + 2.0 * E * (b + c) + d)

    def to_field(self, uh: np.ndarray) -> Field:
        u = np.fft.irfft(uh, n=self.grid.N)
        if not np.all(np.isfinite(u)):
            raise NonFiniteError("time step produced non-finite values")
        return Field(self.grid, u)


def _check_cfl(grid: Grid, cfg: SolverConfig) -> None:
    guard = cfg.cfl_constant / grid.k_max**3
    if cfg.dt > guard:
        warnings.warn(
            f"dt={cfg.dt:g} exceeds the advisory guard {guard:.3g} "
            f"(C_cfl={cfg.cfl_constant:g}, k_max={grid.k_max:.3g})",
            CflWarning, stacklevel=3)


def step(u: Field, f: PolyNonlinearity, dt: float, dealias: float = 2.0 / 3.0) -> Field:
    """Advance one integrating-factor RK4 step; raises NonFiniteError on blow-up."""
    st = _Stepper(u.grid, f, dt, dealias)
    return st.to_field(st.step_hat(np.fft.rfft(u.values)))


@dataclass
class DiagnosticsSeries:
    """Time-indexed diagnostic records of one trajectory, CSV-serializable."""

    columns: list[str]
    rows: list[list[float]] = dataclass_field(default_factory=list)
    status: str = "ok"
    first_leak_time: Optional[float] = None
    meta: dict = dataclass_field(default_factory=dict)

    def append(self, row: Mapping[str, float]) -> None:
        self.rows.append([float(row.get(c, math.nan)) for c in self.columns])

    def column(self, name: str) -> np.ndarray:
        try:
            idx = self.columns.index(name)
        except ValueError:
            raise KeyError(f"no diagnostics column named {name!r}") from None
        return np.array([r[idx] for r in self.rows])

    @property
    def times(self) -> np.ndarray:
        return self.column("t")

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(",".join(self.columns) + "\n")
            for row in self.rows:
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")

    def write_sidecar(self, path) -> None:
        payload = dict(self.meta)
        payload.update({
            "columns": self.columns,
            "status": self.status,
            "first_leak_time": self.first_leak_time,
        })
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


_BASE_COLUMNS = [
    "t", "t_diag", "I1", "I2", "I3", "L1", "L2", "H1", "Linf",
    "leak", "boundary_max",
    "Omega", "Omega_rhs", "fd_Omega",
    "Lambda", "Lambda_rhs", "fd_Lambda",
    "I_value", "I_rhs", "I_term_moment", "I_term_psi3", "I_term_nonlin", "fd_I",
    "J_value", "J_rhs", "J_term_moment", "J_term_grad", "J_term_phi3",
    "J_term_nonlin", "fd_J",
    "K_value", "K_rhs", "K_term_moment", "K_term_uxx2", "K_term_phi3_ux2",
    "K_term_phi3_u3", "K_term_phi3_F2", "K_term_phi1_dq_ux", "K_term_phi2_q_ux",
    "K_term_phi1_q2", "fd_K",
    "kato_sech2_u2", "kato_sech4_ux2", "kato_sech6_uxx2", "kato_exp_all",
    "acc_sech2_u2", "acc_sech4_ux2", "acc_sech6_uxx2", "acc_exp_all",
    "interval_a", "interval_b", "interval_clipped", "h1_local",
]


class TrajectoryRecorder:
    """Builds one diagnostics row per output step.

    The lambda-weighted functionals use a diagnostic clock offset so the
    scaling weight starts at t = 2 when the PDE clock starts at 0; they are
    skipped (NaN columns) unless the nonlinearity has quadratic leading
    power.  Finite differences of each functional use the two neighboring
    solver steps, so they measure the derivative of the discrete
    trajectory itself.
    """

    def __init__(self, f: PolyNonlinearity, *,
                 interval_constant: float = 1.0,
                 c0: float = 1.0,
                 profiles: Optional[Mapping[str, str]] = None,
                 diag_clock_offset: float = 2.0):
        self.f = f
        self.C = interval_constant
        self.c0 = c0
        names = {"I": "tanh", "J": "tanh2x", "K": "tanh3x"}
        names.update(profiles or {})
        self.profiles = {key: virial.WeightProfile.make(kind)
                         for key, kind in names.items()}
        self.offset = diag_clock_offset
        self.i3_0: Optional[float] = None
        self._acc = {"sech2_u2": 0.0, "sech4_ux2": 0.0, "sech6_uxx2": 0.0, "exp_all": 0.0}
        self._prev_kato: Optional[virial.KatoIntegrands] = None
        self._prev_t: Optional[float] = None

    @property
    def columns(self) -> list[str]:
        return list(_BASE_COLUMNS)

    def sidecar_meta(self) -> dict:
        return {
            "interval_constant": self.C,
            "c0": self.c0,
            "profiles": {k: p.kind for k, p in self.profiles.items()},
            "diag_clock_offset": self.offset,
            "nonlinearity": {str(m): a for m, a in sorted(self.f.coeffs.items())},
        }

    def _functionals(self, u: Field, t_diag: float):
        out = {}
        if self.f.k == 2:
            out["I"] = virial.functional_I(u, t_diag, self.f, self.profiles["I"])
            out["J"] = virial.functional_J(u, t_diag, self.f, self.profiles["J"])
            out["K"] = virial.functional_K(u, t_diag, self.f, self.profiles["K"])
        return out

    def _values_only(self, u: Field, t_diag: float) -> dict:
        """Functional values at a neighbor step (for centered differences)."""
        vals = {}
        x = u.grid.x
        dx = u.grid.dx
        vals["Omega"] = float(dx * (x * u.values).sum())
        vals["Lambda"] = float(dx * (x * u.values**2).sum())
        if self.f.k == 2 and t_diag >= 2.0 - 1e-12:
            fr = self._functionals(u, t_diag)
            vals["I"] = fr["I"].value
            vals["J"] = fr["J"].value
            vals["K"] = fr["K"].value
        return vals

    def record(self, u: Field, t: float, *, u_prev: Optional[Field], u_next: Optional[Field],
               dt: float, leak: bool, boundary_max: float) -> dict:
        with np.errstate(over="ignore", invalid="ignore"):  # huge fields near blow-up
            return self._record(u, t, u_prev=u_prev, u_next=u_next, dt=dt,
                                leak=leak, boundary_max=boundary_max)

    def _record(self, u: Field, t: float, *, u_prev: Optional[Field], u_next: Optional[Field],
                dt: float, leak: bool, boundary_max: float) -> dict:
        if self.i3_0 is None:
            self.i3_0 = conserved(u, self.f).I3
        t_diag = t + self.offset
        row: dict = {"t": t, "t_diag": t_diag, "leak": float(leak),
                     "boundary_max": boundary_max}

        cons = conserved(u, self.f)
        row.update({"I1": cons.I1, "I2": cons.I2, "I3": cons.I3})
        nm = norms(u)
        row.update({"L1": nm.L1, "L2": nm.L2, "H1": nm.H1, "Linf": nm.Linf})

        om = virial.moment_omega(u, self.f)
        row.update({"Omega": om.value, "Omega_rhs": om.rhs})
        lam = virial.moment_lambda(u, self.f, self.i3_0)
        row.update({"Lambda": lam.value, "Lambda_rhs": lam.rhs})

        for key, res in self._functionals(u, t_diag).items():
            row[f"{key}_value"] = res.value
            row[f"{key}_rhs"] = res.rhs
            prefix = "I_term_" if key == "I" else f"{key}_term_"
            mapping = {"moment": "moment", "psi3": "psi3", "nonlinear": "nonlin",
                       "grad": "grad", "phi3": "phi3",
                       "uxx2": "uxx2", "phi3_ux2": "phi3_ux2", "phi3_u3": "phi3_u3",
                       "phi3_F2": "phi3_F2", "phi1_dq_ux": "phi1_dq_ux",
                       "phi2_q_ux": "phi2_q_ux", "phi1_q2": "phi1_q2"}
            for term, value in res.terms.items():
                row[prefix + mapping[term]] = value

        if u_prev is not None and u_next is not None:
            before = self._values_only(u_prev, t_diag - dt)
            after = self._values_only(u_next, t_diag + dt)
            for key in ("Omega", "Lambda", "I", "J", "K"):
                if key in before and key in after:
                    row[f"fd_{key}"] = (after[key] - before[key]) / (2.0 * dt)

        sw = virial.ScalingWeight.at(t_diag)
        kato = virial.kato_integrands(u, sw.lam, self.c0)
        row.update({
            "kato_sech2_u2": kato.sech2_u2,
            "kato_sech4_ux2": kato.sech4_ux2,
            "kato_sech6_uxx2": kato.sech6_uxx2,
            "kato_exp_all": kato.exp_all,
        })
        if self._prev_kato is not None:
            h = t - self._prev_t
            for name in self._acc:
                a, b = getattr(self._prev_kato, name), getattr(kato, name)
                self._acc[name] += 0.5 * h * (a + b)
        self._prev_kato, self._prev_t = kato, t
        row.update({f"acc_{name}": val for name, val in self._acc.items()})

        iv = virial.decay_interval(t_diag, self.C, u.grid)
        row.update({"interval_a": iv.a, "interval_b": iv.b,
                    "interval_clipped": float(iv.clipped),
                    "h1_local": localized_h1(u, iv.a, iv.b)})
        return row


def evolve(u0: Field, f: PolyNonlinearity, cfg: SolverConfig,
           recorder: Optional[TrajectoryRecorder] = None,
           observers: Iterable[Callable[[Field, float], Mapping[str, float]]] = (),
           ) -> DiagnosticsSeries:
    """March u0 to t_end, recording diagnostics every output_stride steps.

    Boundary leak (|u| above leak_threshold on the outer 5% of the box) is
    a warning status unless strict_leak; blow-up raises NonFiniteError with
    the partial series attached.  One extra step past t_end closes the
    centered difference of the final record.
    """
    _check_cfl(u0.grid, cfg)
    recorder = recorder or TrajectoryRecorder(f)
    observers = tuple(observers)
    stepper = _Stepper(u0.grid, f, cfg.dt, cfg.dealias)
    n_steps = int(round(cfg.t_end / cfg.dt))
    if abs(n_steps * cfg.dt - cfg.t_end) > 1e-9 * max(1.0, cfg.t_end):
        raise ValueError("t_end must be an integer number of steps")

    outer = np.abs(u0.grid.x) >= 0.95 * u0.grid.L
    leak_seen = False

    series: Optional[DiagnosticsSeries] = None

    def make_series(first_row: Mapping[str, float]) -> DiagnosticsSeries:
        cols = recorder.columns + [c for c in first_row if c not in recorder.columns]
        return DiagnosticsSeries(columns=cols, meta=recorder.sidecar_meta())

    def emit(u_prev, u, u_next, n):
        nonlocal series, leak_seen
        t = n * cfg.dt
        boundary = float(np.abs(u.values[outer]).max())
        leak = boundary >= cfg.leak_threshold
        if leak and not leak_seen:
            leak_seen = True
        row = recorder.record(u, t, u_prev=u_prev, u_next=u_next, dt=cfg.dt,
                              leak=leak, boundary_max=boundary)
        for obs in observers:
            row.update(obs(u, t))
        if series is None:
            series = make_series(row)
        series.append(row)
        if leak_seen:
            series.status = "boundary-leak"
            if series.first_leak_time is None:
                series.first_leak_time = t
        return leak

    uh_prev: Optional[np.ndarray] = None
    uh = np.fft.rfft(u0.values)
    pending: Optional[tuple[Optional[np.ndarray], np.ndarray, int]] = None
    halted = False
    try:
        for n in range(n_steps + 1):
            if pending is not None:
                prev_hat, cur_hat, m = pending
                emit(None if prev_hat is None else stepper.to_field(prev_hat),
                     stepper.to_field(cur_hat), stepper.to_field(uh), m)
                pending = None
                if series.status == "boundary-leak" and cfg.strict_leak:
                    series.status = "boundary-leak-halt"
                    halted = True
                    break
            if n % cfg.output_stride == 0 or n == n_steps:
                pending = (uh_prev, uh, n)
            if n == n_steps:
                break
            uh_prev = uh
            uh = stepper.step_hat(uh)
            if not np.all(np.isfinite(uh)):
                raise NonFiniteError(f"non-finite state at step {n + 1}", series)
        if pending is not None and not halted:
            prev_hat, cur_hat, m = pending
            uh_extra = stepper.step_hat(cur_hat)  # one step past t_end for the FD
            emit(None if prev_hat is None else stepper.to_field(prev_hat),
                 stepper.to_field(cur_hat), stepper.to_field(uh_extra), m)
    except NonFiniteError as err:
        if series is None:
            raise
        series.status = "nonfinite-halt"
        raise NonFiniteError(str(err), series) from None
    assert series is not None
    return series
