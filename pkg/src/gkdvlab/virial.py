"""Moment and virial diagnostics evaluated along trajectories.

Everything here is a pure evaluator over a single field: the two moments
(center of mass and weighted mass) with their exact time-derivative
right-hand sides, the slowly-growing scaling weight lambda(t) =
sqrt(t)/log(t), the three lambda-weighted functionals whose derivative
identities drive the local-decay argument, and the instantaneous Kato
integrands whose time integrals stay bounded.

Box-coordinate moments are meaningful only while the solution is
negligible near the periodic seam; callers consult the solver's leak flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .grid import Field, Grid, spectral_derivative
from .nonlinearity import G_minus_F_over_3, PolyNonlinearity, split_f2

__all__ = [
    "WeightProfile",
    "ScalingWeight",
    "MomentResult",
    "FunctionalResult",
    "DecayInterval",
    "KatoIntegrands",
    "moment_omega",
    "moment_lambda",
    "decay_interval",
    "functional_I",
    "functional_J",
    "functional_K",
    "kato_integrands",
]

_DIAG_T_MIN = 2.0
_T_SLOP = 1e-12


def _sech(y):
    """Overflow-safe sech: 2 e^{-|y|} / (1 + e^{-2|y|})."""
    e = np.exp(-np.abs(y))
    return 2.0 * e / (1.0 + e * e)


@dataclass(frozen=True)
class WeightProfile:
    """Bounded weight with closed-form derivatives up to order three.

    Kinds: tanh, tanh2x, tanh3x (scaled tanh), sech6, sech8, and flat
    (identically one, every derivative zero) for degeneracy checks.
    """

    kind: str
    _tanh_scale: float = 0.0
    _sech_power: int = 0

    _KINDS = ("tanh", "tanh2x", "tanh3x", "sech6", "sech8", "flat")

    @classmethod
    def make(cls, kind: str) -> "WeightProfile":
        if kind not in cls._KINDS:
            raise ValueError(f"unknown weight profile {kind!r}; choose from {cls._KINDS}")
        if kind.startswith("tanh"):
            scale = 1.0 if kind == "tanh" else float(kind[4:-1])
            return cls(kind, _tanh_scale=scale)
        if kind.startswith("sech"):
            return cls(kind, _sech_power=int(kind[4:]))
        return cls(kind)

    def psi(self, y):
        if self.kind == "flat":
            return np.ones_like(y)
        if self._tanh_scale:
            return np.tanh(self._tanh_scale * y)
        return _sech(y) ** self._sech_power

    def dpsi(self, y):
        if self.kind == "flat":
            return np.zeros_like(y)
        if self._tanh_scale:
            a = self._tanh_scale
            return a * _sech(a * y) ** 2
        m = self._sech_power
        return -m * _sech(y) ** m * np.tanh(y)

    def d2psi(self, y):
        if self.kind == "flat":
            return np.zeros_like(y)
        if self._tanh_scale:
            a = self._tanh_scale
            return -2.0 * a**2 * _sech(a * y) ** 2 * np.tanh(a * y)
        m = self._sech_power
        s = _sech(y)
        return m**2 * s**m - m * (m + 1) * s ** (m + 2)

    def d3psi(self, y):
        if self.kind == "flat":
            return np.zeros_like(y)
        if self._tanh_scale:
            a = self._tanh_scale
            s = _sech(a * y)
            return a**3 * (4.0 * s**2 - 6.0 * s**4)
        m = self._sech_power
        s = _sech(y)
        return np.tanh(y) * (-(m**3) * s**m + m * (m + 1) * (m + 2) * s ** (m + 2))


@dataclass(frozen=True)
class ScalingWeight:
    """lambda(t) = sqrt(t)/log(t) and its derivative combinations, t >= 2."""

    t: float
    lam: float
    lam_prime: float
    ratio: float          # lambda'/lambda = (1/t)(1/2 - 1/log t)
    lam_prime_sq: float

    @classmethod
    def at(cls, t: float) -> "ScalingWeight":
        if t < _DIAG_T_MIN - _T_SLOP:
            raise ValueError(f"diagnostic clock requires t >= 2, got {t}")
        log_t = math.log(t)
        lam = math.sqrt(t) / log_t
        ratio = (0.5 - 1.0 / log_t) / t
        return cls(
            t=t,
            lam=lam,
            lam_prime=ratio * lam,
            ratio=ratio,
            lam_prime_sq=(0.5 - 1.0 / log_t) ** 2 / (t * log_t**2),
        )


@dataclass(frozen=True)
class MomentResult:
    value: float
    rhs: float


@dataclass(frozen=True)
class FunctionalResult:
    value: float
    rhs: float
    terms: Mapping[str, float]


def moment_omega(u: Field, f: PolyNonlinearity) -> MomentResult:
    """First moment int x u dx and its exact derivative int f(u) dx."""
    x = u.grid.x
    return MomentResult(
        value=float(u.grid.dx * (x * u.values).sum()),
        rhs=float(u.grid.dx * f(u.values).sum()),
    )


_GMF_CACHE: dict = {}
_SPLIT_CACHE: dict = {}


def _gmf(f: PolyNonlinearity):
    key = tuple(sorted(f.coeffs.items()))
    if key not in _GMF_CACHE:
        _GMF_CACHE[key] = G_minus_F_over_3(f)
    return _GMF_CACHE[key]


def _split_parts(f: PolyNonlinearity):
    key = tuple(sorted(f.coeffs.items()))
    if key not in _SPLIT_CACHE:
        _SPLIT_CACHE[key] = split_f2(f)
    return _SPLIT_CACHE[key]


def moment_lambda(u: Field, f: PolyNonlinearity, i3_0: float) -> MomentResult:
    """Weighted mass int x u^2 dx; derivative -6 (I3(u0) + int (G - F/3))."""
    x = u.grid.x
    gmf = _gmf(f)
    return MomentResult(
        value=float(u.grid.dx * (x * u.values**2).sum()),
        rhs=-6.0 * (i3_0 + float(u.grid.dx * gmf(u.values).sum())),
    )


@dataclass(frozen=True)
class DecayInterval:
    a: float
    b: float
    clipped: bool


def decay_interval(t: float, C: float, grid: Grid) -> DecayInterval:
    """The growing interval (-C lambda(t), C lambda(t)), clipped to 0.9 box."""
    if C < 0:
        raise ValueError("C must be nonnegative")
    half = C * ScalingWeight.at(abs(t)).lam if C > 0 else 0.0
    limit = 0.9 * grid.L
    clipped = half > limit
    half = min(half, limit)
    return DecayInterval(-half, half, clipped)


def functional_I(u: Field, t: float, f: PolyNonlinearity,
                 profile: Optional[WeightProfile] = None) -> FunctionalResult:
    """int psi(x/lambda) u dx, with the three-term derivative identity.

    rhs = - (lambda'/lambda) int (x/lambda) psi'(x/lambda) u
          + (1/lambda^3)     int psi'''(x/lambda) u
          + (1/lambda)       int psi'(x/lambda) (u^2 + f2(u)).
    """
    profile = profile or WeightProfile.make("tanh")
    sw = ScalingWeight.at(t)
    f2, _ = _split_parts(f)
    dx = u.grid.dx
    y = u.grid.x / sw.lam
    v = u.values
    value = float(dx * (profile.psi(y) * v).sum())
    dp = profile.dpsi(y)
    terms = {
        "moment": -sw.ratio * float(dx * (y * dp * v).sum()),
        "psi3": float(dx * (profile.d3psi(y) * v).sum()) / sw.lam**3,
        "nonlinear": float(dx * (dp * (v**2 + f2(v))).sum()) / sw.lam,
    }
    return FunctionalResult(value, sum(terms.values()), terms)


def functional_J(u: Field, t: float, f: PolyNonlinearity,
                 profile: Optional[WeightProfile] = None) -> FunctionalResult:
    """(1/2) int phi(x/lambda) u^2 dx with its four-term derivative identity.

    rhs = - (lambda'/2 lambda) int (x/lambda) phi' u^2
          - (3/2 lambda)       int phi' (u_x)^2
          + (1/2 lambda^3)     int phi''' u^2
          + (1/lambda)         int phi' ((2/3) u^3 + u f2(u) - F2(u)),
    the nonlinear integrand kept exactly in that printed form.
    """
    profile = profile or WeightProfile.make("tanh2x")
    sw = ScalingWeight.at(t)
    f2, F2 = _split_parts(f)
    dx = u.grid.dx
    y = u.grid.x / sw.lam
    v = u.values
    ux = spectral_derivative(u, 1).values
    value = 0.5 * float(dx * (profile.psi(y) * v**2).sum())
    dp = profile.dpsi(y)
    terms = {
        "moment": -0.5 * sw.ratio * float(dx * (y * dp * v**2).sum()),
        "grad": -1.5 / sw.lam * float(dx * (dp * ux**2).sum()),
        "phi3": 0.5 / sw.lam**3 * float(dx * (profile.d3psi(y) * v**2).sum()),
        "nonlinear": float(dx * (dp * (2.0 / 3.0 * v**3 + v * f2(v) - F2(v))).sum()) / sw.lam,
    }
    return FunctionalResult(value, sum(terms.values()), terms)


def functional_K(u: Field, t: float, f: PolyNonlinearity,
                 profile: Optional[WeightProfile] = None) -> FunctionalResult:
    """(1/2) int phi(x/lambda) ((u_x)^2 - (2/3) u^3 - 2 F2(u)) dx.

    For the flat profile this is the conserved energy.  The derivative
    identity has eight terms, returned individually: the moment term, the
    second-derivative dissipation term, three phi''' terms (on (u_x)^2, u^3
    and F2(u)), two mixed terms coupling u_x to q = u^2 + f2(u) through
    phi' and phi'', and the quadratic flux term -(1/2 lambda) int phi' q^2.
    """
    profile = profile or WeightProfile.make("tanh3x")
    sw = ScalingWeight.at(t)
    f2, F2 = _split_parts(f)
    dx = u.grid.dx
    y = u.grid.x / sw.lam
    v = u.values
    ux = spectral_derivative(u, 1).values
    uxx = spectral_derivative(u, 2).values
    q = v**2 + f2(v)
    qx = spectral_derivative(Field(u.grid, q), 1).values
    density = ux**2 - 2.0 / 3.0 * v**3 - 2.0 * F2(v)
    value = 0.5 * float(dx * (profile.psi(y) * density).sum())
    dp = profile.dpsi(y)
    d3p = profile.d3psi(y)
    terms = {
        "moment": -0.5 * sw.ratio * float(dx * (y * dp * density).sum()),
        "uxx2": -1.5 / sw.lam * float(dx * (dp * uxx**2).sum()),
        "phi3_ux2": 0.5 / sw.lam**3 * float(dx * (d3p * ux**2).sum()),
        "phi3_u3": float(dx * (d3p * v**3).sum()) / (3.0 * sw.lam**3),
        "phi3_F2": float(dx * (d3p * F2(v)).sum()) / sw.lam**3,
        "phi1_dq_ux": 2.0 / sw.lam * float(dx * (dp * qx * ux).sum()),
        "phi2_q_ux": 2.0 / sw.lam**2 * float(dx * (profile.d2psi(y) * q * ux).sum()),
        "phi1_q2": -0.5 / sw.lam * float(dx * (dp * q**2).sum()),
    }
    return FunctionalResult(value, sum(terms.values()), terms)


@dataclass(frozen=True)
class KatoIntegrands:
    """Instantaneous spatial integrals whose time integrals stay bounded.

    The three lambda-scaled ones carry the 1/lambda prefactor their time
    integrals are stated with; exp_all does not.
    """

    sech2_u2: float
    sech4_ux2: float
    sech6_uxx2: float
    exp_all: float


def kato_integrands(u: Field, lam: float, c0: float) -> KatoIntegrands:
    """Evaluate the four local-smoothing integrands at scale lambda = lam.

    Taking lam directly (rather than a time) keeps the evaluator usable
    both along trajectories, where lam = lambda(t), and in standalone
    quadrature checks at unit scale.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    if c0 <= 0:
        raise ValueError("c0 must be positive")
    dx = u.grid.dx
    y = u.grid.x / lam
    sech = _sech(y)
    v = u.values
    ux = spectral_derivative(u, 1).values
    uxx = spectral_derivative(u, 2).values
    expw = np.exp(-c0 * np.abs(u.grid.x))
    return KatoIntegrands(
        sech2_u2=float(dx * (sech**2 * v**2).sum()) / lam,
        sech4_ux2=float(dx * (sech**4 * ux**2).sum()) / lam,
        sech6_uxx2=float(dx * (sech**6 * uxx**2).sum()) / lam,
        exp_all=float(dx * (expw * (v**2 + ux**2 + uxx**2)).sum()),
    )
