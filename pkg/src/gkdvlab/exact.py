"""Closed-form reference solutions and a PDE-residual certifier.

Solitary waves for pure-power nonlinearities, the arctan-quotient breather
of the focusing cubic equation, and the two-parameter breather of the
quadratic-cubic (Gardner) equation.  Every x-derivative of an
arctan-quotient is expanded analytically; numerical differentiation is
reserved for cross-checks because the quotient cancels badly near its
peaks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .grid import Field, Grid, spectral_derivative
from .nonlinearity import PolyNonlinearity

__all__ = [
    "BreatherParams",
    "DeltaNotPositiveError",
    "soliton",
    "mkdv_breather",
    "gardner_breather",
    "standing_breather_period",
    "pde_residual",
]


class DeltaNotPositiveError(ValueError):
    """Gardner breather parameters outside the existence region."""


@dataclass(frozen=True)
class BreatherParams:
    """Oscillation rate alpha, localization rate beta, and (Gardner) mu.

    delta and gamma are the phase speeds of the internal oscillation and of
    the envelope; gamma = 0 (beta = sqrt(3) alpha) is the standing case.
    """

    alpha: float
    beta: float
    mu: Optional[float] = None

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")
        if self.mu is not None and self.mu <= 0:
            raise ValueError("mu must be positive")

    @property
    def delta(self) -> float:
        return self.alpha**2 - 3 * self.beta**2

    @property
    def gamma(self) -> float:
        return 3 * self.alpha**2 - self.beta**2

    @property
    def Delta(self) -> float:
        """Existence discriminant alpha^2 + beta^2 - 2/(9 mu) of the Gardner breather."""
        if self.mu is None:
            raise ValueError("Delta requires mu")
        return self.alpha**2 + self.beta**2 - 2.0 / (9.0 * self.mu)

    @property
    def is_standing(self) -> bool:
        # beta = sqrt(3) alpha up to float rounding
        return abs(self.gamma) <= 1e-12 * (3 * self.alpha**2 + self.beta**2)


def soliton(c: float, p: int, grid: Grid, center: float = 0.0) -> Field:
    """Solitary wave Q_c of Q'' - c Q + Q^p = 0, centered at `center`.

    Q_c(x) = [c (p+1)/2 * sech^2(sqrt(c) (p-1) x / 2)]^{1/(p-1)}.
    """
    if c <= 0:
        raise ValueError("speed c must be positive")
    if p < 2:
        raise ValueError("power p must be at least 2")
    y = grid.x - center
    sech = 1.0 / np.cosh(np.sqrt(c) * (p - 1) * y / 2.0)
    return Field(grid, (c * (p + 1) / 2.0) ** (1.0 / (p - 1)) * sech ** (2.0 / (p - 1)))


def mkdv_breather(params: BreatherParams, t: float, grid: Grid) -> Field:
    """Breather of u_t + (u_xx + u^3)_x = 0, with the x-derivative in closed form.

    B = 2 sqrt(2) d/dx arctan(beta sin(alpha y1) / (alpha cosh(beta y2))),
    y1 = x + delta t, y2 = x + gamma t.
    """
    a, b = params.alpha, params.beta
    y1 = grid.x + params.delta * t
    y2 = grid.x + params.gamma * t
    num = a * b * (a * np.cos(a * y1) * np.cosh(b * y2)
                   - b * np.sin(a * y1) * np.sinh(b * y2))
    den = a**2 * np.cosh(b * y2) ** 2 + b**2 * np.sin(a * y1) ** 2
    return Field(grid, 2.0 * math.sqrt(2.0) * num / den)


def standing_breather_period(params: BreatherParams) -> float:
    """Temporal period 2 pi / (alpha |delta|) of a zero-speed breather."""
    if params.delta == 0:
        raise ValueError("delta vanishes; the profile is steady, not periodic")
    return 2.0 * math.pi / (params.alpha * abs(params.delta))


def gardner_breather(params: BreatherParams, t: float, grid: Grid) -> Field:
    """Breather of u_t + (u_xx + u^2 + mu u^3)_x = 0.

    Exists only for Delta = alpha^2 + beta^2 - 2/(9 mu) > 0; the standing
    small-amplitude corner of parameter space violates that, which is the
    mechanism excluding small standing breathers.  cosh + sinh in the
    numerator is evaluated as exp(beta y2) to avoid cancellation.
    """
    if params.mu is None:
        raise ValueError("gardner breather requires mu")
    D = params.Delta
    if D <= 0:
        raise DeltaNotPositiveError(
            f"Delta = alpha^2 + beta^2 - 2/(9 mu) = {D:.6g} must be positive "
            f"(alpha={params.alpha:g}, beta={params.beta:g}, mu={params.mu:g})")
    a, b, mu = params.alpha, params.beta, params.mu
    y1 = grid.x + params.delta * t
    y2 = grid.x + params.gamma * t
    sab = math.sqrt(a**2 + b**2)
    sD = math.sqrt(D)
    smu = math.sqrt(mu)
    e = np.exp(b * y2)  # cosh + sinh
    G = b * sab / (a * sD) * np.sin(a * y1) - math.sqrt(2) * b * e / (3 * smu * D)
    F = (np.cosh(b * y2)
         - math.sqrt(2) * b * (a * np.cos(a * y1) - b * np.sin(a * y1)) / (3 * smu * a * sab * sD))
    Gp = b * sab / sD * np.cos(a * y1) - math.sqrt(2) * b**2 * e / (3 * smu * D)
    Fp = (b * np.sinh(b * y2)
          + math.sqrt(2) * b * (a * np.sin(a * y1) + b * np.cos(a * y1)) / (3 * smu * sab * sD))
    value = 2.0 * math.sqrt(2.0 / mu) * (Gp * F - G * Fp) / (F**2 + G**2)
    return Field(grid, value)


def pde_residual(candidate: Callable[[float], Field], f: PolyNonlinearity,
                 t: float, dt_fd: float, grid: Grid) -> Field:
    """Residual u_t + (u_xx + f(u))_x of a time-indexed field provider.

    Time derivative by centered differences at spacing dt_fd, space
    derivatives spectral.  Exact solutions give residuals at the
    FD-truncation scale O(dt_fd^2).
    """
    if dt_fd <= 0:
        raise ValueError("dt_fd must be positive")
    up = candidate(t + dt_fd)
    um = candidate(t - dt_fd)
    u = candidate(t)
    if up.grid != grid or um.grid != grid or u.grid != grid:
        raise ValueError("candidate fields must live on the given grid")
    ut = (up.values - um.values) / (2.0 * dt_fd)
    uxx = spectral_derivative(u, 2)
    flux = Field(grid, uxx.values + f(u.values))
    return Field(grid, ut + spectral_derivative(flux, 1).values)
