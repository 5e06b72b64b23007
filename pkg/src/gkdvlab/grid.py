"""Periodic spatial discretization, spectral calculus, and norm evaluators.

The real line is truncated to a uniform periodic box [-L, L); all
derivatives are Fourier-collocation derivatives and all integrals use the
uniform-weight rule, which is spectrally accurate for smooth periodic
integrands.  Box-coordinate moments and weighted norms are meaningful only
while the solution stays negligible near the seam; the solver's leak
monitor tracks that.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "Grid",
    "Field",
    "Norms",
    "spectral_derivative",
    "integrate",
    "norms",
    "weighted_sobolev_norm",
    "localized_h1",
    "translate",
    "field_to_csv",
    "field_from_csv",
    "write_snapshot",
    "read_snapshot",
]


@dataclass(frozen=True)
class Grid:
    """Uniform periodic mesh on [-L, L) with N points, N a power of two."""

    L: float
    N: int

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError("L must be positive")
        if self.N < 16 or self.N & (self.N - 1) != 0:
            raise ValueError("N must be a power of two, at least 16")

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def x(self) -> np.ndarray:
        return -self.L + self.dx * np.arange(self.N)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Nonnegative wavenumbers pi*n/L in rfft ordering, n = 0..N/2."""
        return np.pi * np.arange(self.N // 2 + 1) / self.L

    @property
    def k_max(self) -> float:
        return float(np.pi * (self.N // 2) / self.L)


@dataclass(frozen=True)
class Field:
    """Real sample vector u(x_j) on a Grid; immutable and finite."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.N,):
            raise ValueError(f"expected {self.grid.N} values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(grid, np.zeros(grid.N))

    @classmethod
    def from_function(cls, grid: Grid, fn: Callable[[np.ndarray], np.ndarray]) -> "Field":
        return cls(grid, fn(grid.x))

    def with_values(self, values: np.ndarray) -> "Field":
        return Field(self.grid, values)


def _require_same_grid(u: Field, v: Field) -> None:
    if u.grid != v.grid:
        raise ValueError("fields live on different grids")


def _deriv_multiplier(grid: Grid, order: int) -> np.ndarray:
    k = grid.wavenumbers
    mult = (1j * k) ** order
    if order % 2 == 1:
        mult = mult.copy()
        mult[-1] = 0.0  # Nyquist mode has no well-defined odd derivative
    return mult


def spectral_derivative(u: Field, order: int) -> Field:
    """Fourier-collocation d^order/dx^order, order in 1..4."""
    if not 1 <= order <= 4:
        raise ValueError("order must be between 1 and 4")
    uh = np.fft.rfft(u.values)
    out = np.fft.irfft(_deriv_multiplier(u.grid, order) * uh, n=u.grid.N)
    return Field(u.grid, out)


def integrate(u: Field) -> float:
    """dx * sum(values); on the periodic grid this is the trapezoid rule."""
    return float(u.grid.dx * u.values.sum())


@dataclass(frozen=True)
class Norms:
    L1: float
    L2: float
    H1: float
    Linf: float


def norms(u: Field) -> Norms:
    dx = u.grid.dx
    v = u.values
    l2_sq = dx * float((v**2).sum())
    ux = spectral_derivative(u, 1).values
    h1 = float(np.sqrt(l2_sq + dx * (ux**2).sum()))
    return Norms(
        L1=dx * float(np.abs(v).sum()),
        L2=float(np.sqrt(l2_sq)),
        H1=h1,
        Linf=float(np.abs(v).max()),
    )


def weighted_sobolev_norm(u: Field, s: int, r: float) -> float:
    """Norm of H^s intersected with L2(|x|^{2r} dx), in the box coordinate.

    For r = 0 the weight term is dropped so the value equals the plain H^s
    norm rather than double-counting the L2 piece.
    """
    if not 0 <= s <= 4:
        raise ValueError("s must be between 0 and 4")
    if r < 0:
        raise ValueError("r must be nonnegative")
    dx = u.grid.dx
    total = dx * float((u.values**2).sum())
    uh = np.fft.rfft(u.values)
    for j in range(1, s + 1):
        dj = np.fft.irfft(_deriv_multiplier(u.grid, j) * uh, n=u.grid.N)
        total += dx * float((dj**2).sum())
    if r > 0:
        total += dx * float((np.abs(u.grid.x) ** (2 * r) * u.values**2).sum())
    return float(np.sqrt(total))


def _interval_weights(grid: Grid, a: float, b: float) -> np.ndarray:
    """Fractional-overlap weights of each cell [x_j - dx/2, x_j + dx/2] with [a, b]."""
    half = grid.dx / 2
    lo = grid.x - half
    hi = grid.x + half
    overlap = np.minimum(hi, b) - np.maximum(lo, a)
    return np.clip(overlap / grid.dx, 0.0, 1.0)


def localized_h1(u: Field, a: float, b: float) -> float:
    """H^1 norm restricted to [a, b], with fractional endpoint-cell weighting.

    A zero-width interval integrates to zero; a > b is rejected.
    """
    if a > b:
        raise ValueError(f"interval endpoints out of order: a={a} > b={b}")
    if a == b:
        return 0.0
    if a < -u.grid.L or b > u.grid.L:
        raise ValueError("interval must lie inside the box")
    w = _interval_weights(u.grid, a, b)
    ux = spectral_derivative(u, 1).values
    return float(np.sqrt(u.grid.dx * (w * (u.values**2 + ux**2)).sum()))


def translate(u: Field, shift: float) -> Field:
    """Periodic translation u(x - shift) via a spectral phase shift."""
    uh = np.fft.rfft(u.values)
    k = u.grid.wavenumbers
    return Field(u.grid, np.fft.irfft(uh * np.exp(-1j * k * shift), n=u.grid.N))


# ---------------------------------------------------------------------------
# Serialization: CSV (x, value) and a little-endian binary snapshot.
# ---------------------------------------------------------------------------

def field_to_csv(u: Field, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "value"])
        for xj, vj in zip(u.grid.x, u.values):
            writer.writerow([f"{xj:.17g}", f"{vj:.17g}"])


def field_from_csv(path) -> Field:
    xs, vs = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:2] != ["x", "value"]:
            raise ValueError(f"unexpected CSV header {header!r}")
        for row in reader:
            xs.append(float(row[0]))
            vs.append(float(row[1]))
    n = len(xs)
    L = -xs[0]
    grid = Grid(L=L, N=n)
    if not np.allclose(grid.x, xs, rtol=0, atol=1e-12 * max(1.0, L)):
        raise ValueError("CSV x column is not a uniform periodic mesh on [-L, L)")
    return Field(grid, np.array(vs))


_SNAPSHOT_HEADER = struct.Struct("<qd")  # N, L


def write_snapshot(u: Field, path) -> None:
    with open(path, "wb") as fh:
        fh.write(_SNAPSHOT_HEADER.pack(u.grid.N, u.grid.L))
        fh.write(u.values.astype("<f8").tobytes())


def read_snapshot(path) -> Field:
    with open(path, "rb") as fh:
        n, L = _SNAPSHOT_HEADER.unpack(fh.read(_SNAPSHOT_HEADER.size))
        data = np.frombuffer(fh.read(8 * n), dtype="<f8")
    return Field(Grid(L=L, N=n), np.array(data))
