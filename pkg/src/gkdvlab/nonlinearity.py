"""Polynomial nonlinearities f(u) = sum_m a_m u^m with m >= 2.

Provides the antiderivative calculus used by the moment identities
(G = int f, F = int s f'(s) ds, the combination G - F/3, and the
quadratic-leading split f = u^2 + f2), exact sign analysis over the
reals, and a structural classifier that reports which breather-exclusion
mechanism applies to a given nonlinearity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

import numpy as np

__all__ = [
    "Polynomial",
    "PolyNonlinearity",
    "SignVerdict",
    "Mechanism",
    "TheoremReport",
    "eval_f",
    "antiderivative_G",
    "antiderivative_F",
    "G_minus_F_over_3",
    "split_f2",
    "sign_definiteness",
    "classify_theorem",
]


def _horner(coeffs: Mapping[int, float], s):
    """Evaluate sum a_m s^m by dense Horner from the top power down."""
    if not coeffs:
        return np.zeros_like(s) if isinstance(s, np.ndarray) else 0.0
    deg = max(coeffs)
    acc = np.zeros_like(s, dtype=float) if isinstance(s, np.ndarray) else 0.0
    for m in range(deg, -1, -1):
        acc = acc * s + coeffs.get(m, 0.0)
    return acc


@dataclass(frozen=True)
class Polynomial:
    """Sparse real polynomial, mapping power -> coefficient."""

    coeffs: Mapping[int, float]

    def __post_init__(self):
        clean = {int(m): float(a) for m, a in self.coeffs.items() if a != 0.0}
        if any(m < 0 for m in clean):
            raise ValueError("negative powers are not supported")
        object.__setattr__(self, "coeffs", clean)

    def __call__(self, s):
        return _horner(self.coeffs, s)

    def derivative(self) -> "Polynomial":
        return Polynomial({m - 1: m * a for m, a in self.coeffs.items() if m >= 1})

    def degree(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    def coefficient(self, m: int) -> float:
        return self.coeffs.get(m, 0.0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))


@dataclass(frozen=True)
class PolyNonlinearity:
    """f(s) = sum_{m>=2} a_m s^m with nonzero coefficient at the lowest power k.

    k >= 2 is the leading low-order power; the remainder vanishes faster
    than |s|^k near zero, which is what the sign and moment arguments use.
    """

    coeffs: Mapping[int, float]
    k: int = -1  # filled in __post_init__

    def __post_init__(self):
        clean = {int(m): float(a) for m, a in self.coeffs.items() if a != 0.0}
        if not clean:
            raise ValueError("nonlinearity must have at least one nonzero coefficient")
        if min(clean) < 2:
            raise ValueError("all powers must be >= 2")
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "k", min(clean))

    @classmethod
    def from_config(cls, spec: Mapping[str, float]) -> "PolyNonlinearity":
        """Build from a JSON-style map of power (string or int) to coefficient."""
        return cls({int(m): float(a) for m, a in spec.items()})

    @classmethod
    def pure_power(cls, p: int, coefficient: float = 1.0) -> "PolyNonlinearity":
        return cls({p: coefficient})

    def __call__(self, s):
        return _horner(self.coeffs, s)

    def as_polynomial(self) -> Polynomial:
        return Polynomial(self.coeffs)

    def degree(self) -> int:
        return max(self.coeffs)

    def coefficient(self, m: int) -> float:
        return self.coeffs.get(m, 0.0)


def eval_f(f: PolyNonlinearity, s):
    """f(s), scalar or ndarray, by Horner."""
    return f(s)


def antiderivative_G(f: PolyNonlinearity) -> Polynomial:
    """G with G' = f and G(0) = 0: coefficient a_m/(m+1) at power m+1."""
    return Polynomial({m + 1: a / (m + 1) for m, a in f.coeffs.items()})


def antiderivative_F(f: PolyNonlinearity) -> Polynomial:
    """F with F' (u) = u f'(u) pointwise and F(0) = 0.

    Equivalently F(u) = int_0^u s f'(s) ds = u f(u) - G(u); for a monomial
    a_m u^m the coefficient at power m+1 is m a_m/(m+1).
    """
    return Polynomial({m + 1: m * a / (m + 1) for m, a in f.coeffs.items()})


def G_minus_F_over_3(f: PolyNonlinearity) -> Polynomial:
    """G(u) - F(u)/3; vanishes identically iff f is a pure cubic."""
    G = antiderivative_G(f)
    F = antiderivative_F(f)
    powers = set(G.coeffs) | set(F.coeffs)
    return Polynomial({m: G.coefficient(m) - F.coefficient(m) / 3.0 for m in powers})


def split_f2(f: PolyNonlinearity) -> tuple[Polynomial, Polynomial]:
    """Split f = s^2 + f2 for quadratic-leading f; returns (f2, F2).

    F2 is the antiderivative of f2 with F2(0) = 0.  The split (and the
    weighted functionals built on it) only makes sense when k = 2.
    """
    if f.k != 2:
        raise ValueError(f"quadratic-leading split requires k=2, got k={f.k}")
    f2 = Polynomial({m: a for m, a in f.coeffs.items() if m != 2} | (
        {} if f.coefficient(2) == 1.0 else {2: f.coefficient(2) - 1.0}))
    F2 = Polynomial({m + 1: a / (m + 1) for m, a in f2.coeffs.items()})
    return f2, F2


# ---------------------------------------------------------------------------
# Exact sign analysis.
#
# Coefficients are lifted from doubles to exact rationals, so every sign
# decision below is exact for the lifted polynomial.  Roots are isolated by
# Sturm sign-variation counts on dyadic intervals and refined to width 1e-12.
# ---------------------------------------------------------------------------

_RootPoly = list[Fraction]  # dense, index = power


def _poly_trim(p: _RootPoly) -> _RootPoly:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_eval(p: _RootPoly, s: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * s + c
    return acc


def _poly_deriv(p: _RootPoly) -> _RootPoly:
    return _poly_trim([i * c for i, c in enumerate(p)][1:])


def _poly_divmod(a: _RootPoly, b: _RootPoly) -> tuple[_RootPoly, _RootPoly]:
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and _poly_trim(list(a)):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - len(b)
        factor = a[-1] / b[-1]
        q[shift] = factor
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a.pop()
    return _poly_trim(q), _poly_trim(a)


def _poly_gcd(a: _RootPoly, b: _RootPoly) -> _RootPoly:
    a, b = list(a), list(b)
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _sturm_chain(p: _RootPoly) -> list[_RootPoly]:
    chain = [list(p), _poly_deriv(p)]
    while chain[-1]:
        _, r = _poly_divmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return [q for q in chain if q]


def _variations(chain: list[_RootPoly], s: Fraction) -> int:
    signs = []
    for q in chain:
        v = _poly_eval(q, s)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _count_roots(chain, lo: Fraction, hi: Fraction) -> int:
    # number of distinct roots in (lo, hi]
    return _variations(chain, lo) - _variations(chain, hi)


def _isolate_roots(p: _RootPoly, lo: Fraction, hi: Fraction,
                   width: Fraction = Fraction(1, 10**12)) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals (a, b], each holding one distinct root of squarefree p."""
    chain = _sturm_chain(p)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = _count_roots(chain, a, b)
        if n == 0:
            continue
        if n == 1 and b - a <= width:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        stack.append((a, mid))
        stack.append((mid, b))
    return sorted(out)


def _lift(coeffs: Mapping[int, float], degree: int) -> _RootPoly:
    p = [Fraction(0)] * (degree + 1)
    for m, a in coeffs.items():
        p[m] = Fraction(a)
    return _poly_trim(p)


@dataclass(frozen=True)
class SignVerdict:
    """Outcome of a sign-definiteness query.

    kind is one of 'nonnegative-everywhere', 'nonpositive-everywhere' or
    'sign-changing'; a witness with f(witness) of the violating (negative)
    sign is attached exactly when the sign changes.
    """

    kind: str
    witness: Optional[float] = None

    @property
    def is_sign_definite(self) -> bool:
        return self.kind != "sign-changing"


def sign_definiteness(f: PolyNonlinearity, bound: Optional[float] = None) -> SignVerdict:
    """Decide whether f keeps one sign on the reals (or on |s| <= bound).

    Writes f(s) = s^k g(s) with g(0) != 0, isolates the distinct real roots
    of g exactly, and samples the sign of f once inside every maximal
    sign-constant cell.  All arithmetic is exact over rationals lifted from
    the double coefficients.
    """
    g = {m - f.k: Fraction(a) for m, a in f.coeffs.items()}
    gp = _poly_trim([g.get(i, Fraction(0)) for i in range(max(g) + 1)])
    sqfree = _poly_divmod(gp, _poly_gcd(gp, _poly_deriv(gp)))[0] if len(gp) > 2 else list(gp)

    lead = gp[-1]
    cauchy = Fraction(1) + max(abs(c) for c in gp) / abs(lead)
    if bound is not None:
        if bound <= 0:
            raise ValueError("bound must be positive")
        lo, hi = -Fraction(bound), Fraction(bound)
        span_lo, span_hi = lo, hi
    else:
        lo, hi = -cauchy, cauchy
        span_lo, span_hi = lo - 1, hi + 1

    roots = _isolate_roots(sqfree, lo, hi) if len(sqfree) >= 2 else []
    # partition points of f's sign cells: 0 plus the isolated roots of g
    cuts: list[tuple[Fraction, Fraction]] = sorted(roots + [(Fraction(0), Fraction(0))])
    samples: list[Fraction] = [span_lo, span_hi]
    for (a1, b1), (a2, b2) in zip(cuts, cuts[1:]):
        if a2 > b1:
            samples.append((b1 + a2) / 2)
    if cuts[0][0] > span_lo:
        samples.append((span_lo + cuts[0][0]) / 2)
    if cuts[-1][1] < span_hi:
        samples.append((cuts[-1][1] + span_hi) / 2)

    fp = _lift(f.coeffs, f.degree())

    def exact_sign(s: Fraction) -> int:
        v = _poly_eval(fp, s)
        return 0 if v == 0 else (1 if v > 0 else -1)

    in_domain = [s for s in samples if bound is None or abs(s) <= Fraction(bound)]
    neg = [s for s in in_domain if exact_sign(s) < 0]
    pos = [s for s in in_domain if exact_sign(s) > 0]

    # cells touching zero: f ~ a_k s^k there, exactly, regardless of how
    # close the nearest root of g sits
    a_k = 1 if f.coefficient(f.k) > 0 else -1
    near_witness: Optional[Fraction] = None
    for sg, side in ((a_k, 1), (a_k * (-1) ** f.k, -1)):
        d = Fraction(1) if bound is None else min(Fraction(1), Fraction(bound))
        hit = None
        for _ in range(4000):  # halving reaches below the nearest root of g
            if exact_sign(side * d) == sg:
                hit = side * d
                break
            d /= 2
        if hit is None:
            continue
        if sg > 0:
            pos.append(hit)
        else:
            neg.append(hit)
            near_witness = hit

    if neg and pos:
        if near_witness is not None:
            # canonical scale-free witness adjacent to zero, e.g. -1 for a cubic
            return SignVerdict("sign-changing", float(near_witness))
        # otherwise the float-sturdiest one: most negative double evaluation
        witness = min((float(eval_f(f, float(s))), float(s)) for s in neg)[1]
        return SignVerdict("sign-changing", witness)
    if neg:
        return SignVerdict("nonpositive-everywhere")
    return SignVerdict("nonnegative-everywhere")


# ---------------------------------------------------------------------------
# Structural classification of breather-exclusion mechanisms.
# ---------------------------------------------------------------------------

MECHANISM_SIGN_DEFINITE = "sign-definite-first-moment"
MECHANISM_EVEN_POWER = "even-leading-power-small-solutions"
MECHANISM_HIGH_POWER = "high-leading-power-small-solutions"
MECHANISM_CUBIC_QUINTIC = "cubic-quintic-energy-sign"


@dataclass(frozen=True)
class Mechanism:
    """One applicable exclusion mechanism plus its runtime hypotheses."""

    name: str
    description: str
    conditions: tuple[str, ...] = ()


@dataclass(frozen=True)
class TheoremReport:
    sign_verdict: SignVerdict
    mechanisms: tuple[Mechanism, ...]

    @property
    def mechanism_names(self) -> tuple[str, ...]:
        return tuple(m.name for m in self.mechanisms)

    @property
    def excludes_breathers_structurally(self) -> bool:
        """True when some mechanism applies with no smallness hypothesis."""
        return any(not m.conditions for m in self.mechanisms)


def classify_theorem(f: PolyNonlinearity) -> TheoremReport:
    """Report which exclusion mechanisms the structure of f satisfies.

    Smallness thresholds (sup-in-time H^1 bounds) are never decided here;
    they are returned as named runtime conditions for the experiment layer
    to check against a configured epsilon.
    """
    verdict = sign_definiteness(f)
    found: list[Mechanism] = []
    if verdict.is_sign_definite:
        found.append(Mechanism(
            MECHANISM_SIGN_DEFINITE,
            "f has one sign, so d/dt of the first moment = integral of f(u) "
            "is one-signed and the moment is strictly monotone",
        ))
    if f.k % 2 == 0:
        found.append(Mechanism(
            MECHANISM_EVEN_POWER,
            "even leading power makes f(u) one-signed for small solutions, "
            "so the first moment is strictly monotone",
            ("sup_t H1 norm below a structure-dependent epsilon",),
        ))
    if f.k >= 5:
        found.append(Mechanism(
            MECHANISM_HIGH_POWER,
            "leading power >= 5 makes the weighted-mass moment strictly "
            "decreasing for small solutions",
            ("sup_t H1 norm below a structure-dependent epsilon",),
        ))
    beta = f.coefficient(5)
    if (f.k == 3 and f.coefficient(3) > 0 and f.coefficient(4) == 0.0 and beta != 0.0):
        energy_cond = ("initial energy I3(u0) >= 0" if beta < 0
                       else "initial energy I3(u0) <= 0")
        found.append(Mechanism(
            MECHANISM_CUBIC_QUINTIC,
            f"cubic plus quintic term (beta={beta:g}) drives the weighted-mass "
            "moment strictly monotone when the energy sign cooperates",
            (energy_cond, "sup_t H1 norm below a structure-dependent epsilon"),
        ))
    return TheoremReport(verdict, tuple(found))
