"""Distributions of sums of independent integer variables.

Exact convolution works on :class:`IntDist`; float convolution uses dense
numpy arrays over the contiguous support window (no FFT).  On top of that
sit the concentration function ``Q(X) = max_x P(X = x)``, the sign search
comparing ``Q(X_1 + ... + X_n)`` with ``max_a Q(a_1 X_1+ + ... + a_n X_n+)``,
and the local limit ratio ``Q(S_n) * sqrt(2 pi n Var X)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Union

import numpy as np

from .dist import IntDist, lattice_span, reflect, variance
from .errors import DegenerateLattice, ExactTooLarge, TooManyPatterns, ValidationError
from .rearrange import plus_rearrangement

__all__ = [
    "FloatPMF",
    "ConcentrationReport",
    "SignSearchReport",
    "LltScanRow",
    "DEFAULT_EXACT_BITS",
    "DEFAULT_SIGN_BUDGET",
    "convolve",
    "self_convolve",
    "to_float_pmf",
    "concentration",
    "compare_concentration",
    "llt_ratio",
    "llt_scan",
]

DEFAULT_EXACT_BITS = 2**16
DEFAULT_SIGN_BUDGET = 2**20


@dataclass(frozen=True)
class FloatPMF:
    """Dense double-precision PMF: ``probs[i] = P(X = offset + i)``."""

    offset: int
    probs: np.ndarray

    @property
    def total_mass(self) -> float:
        return math.fsum(self.probs)

    @property
    def mass_drift(self) -> float:
        return abs(self.total_mass - 1.0)

    def __len__(self) -> int:
        return len(self.probs)


@dataclass(frozen=True)
class ConcentrationReport:
    argmax_x: int
    q_max: Union[Fraction, float]
    mode: str


@dataclass(frozen=True)
class SignSearchReport:
    lhs_q: Fraction
    best_signs: tuple[int, ...]
    rhs_q_best: Fraction
    all_plus_q: Fraction
    inequality_holds: bool
    patterns_searched: int


@dataclass(frozen=True)
class LltScanRow:
    n: int
    q_n: float
    ratio: float


def convolve(d1: IntDist, d2: IntDist) -> IntDist:
    acc: dict[int, Fraction] = {}
    for x, p in d1.atoms:
        for y, q in d2.atoms:
            acc[x + y] = acc.get(x + y, 0) + p * q
    return IntDist(tuple(sorted(acc.items())))


def to_float_pmf(d: IntDist) -> FloatPMF:
    lo, hi = d.atoms[0][0], d.atoms[-1][0]
    arr = np.zeros(hi - lo + 1)
    for x, p in d.atoms:
        arr[x - lo] = float(p)
    return FloatPMF(lo, arr)


def _predicted_bits(d: IntDist, n: int) -> float:
    denom = math.lcm(*(p.denominator for p in d.probs))
    return n * math.log2(denom) if denom > 1 else 0.0


def _power(base, n, mul):
    result = None
    while n:
        if n & 1:
            result = base if result is None else mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def _float_mul(a: FloatPMF, b: FloatPMF) -> FloatPMF:
    return FloatPMF(a.offset + b.offset, np.convolve(a.probs, b.probs))


def self_convolve(
    d: IntDist, n: int, mode: str = "exact", bit_budget: int = DEFAULT_EXACT_BITS
) -> Union[IntDist, FloatPMF]:
    """Distribution of the sum of ``n`` independent copies of ``d``.

    ``mode="exact"`` refuses with :class:`ExactTooLarge` when the common
    denominator of the result would need more than ``bit_budget`` bits.
    """
    if n < 1:
        raise ValidationError("n must be a positive integer")
    if mode == "exact":
        bits = _predicted_bits(d, n)
        if bits > bit_budget:
            raise ExactTooLarge(f"~{bits:.0f}-bit denominators exceed the {bit_budget}-bit budget")
        return _power(d, n, convolve)
    if mode == "float":
        return _power(to_float_pmf(d), n, _float_mul)
    raise ValidationError(f"unknown mode {mode!r}")


def concentration(d: Union[IntDist, FloatPMF]) -> ConcentrationReport:
    """Largest point mass; ties go to the smallest ``x``."""
    if isinstance(d, FloatPMF):
        i = int(np.argmax(d.probs))
        return ConcentrationReport(d.offset + i, float(d.probs[i]), "float")
    best_x, best_p = d.atoms[0]
    for x, p in d.atoms[1:]:
        if p > best_p:
            best_x, best_p = x, p
    return ConcentrationReport(best_x, best_p, "exact")


def _sum_all(ds: list[IntDist]) -> IntDist:
    return reduce(convolve, ds)


def compare_concentration(
    ds: list[IntDist], max_sign_patterns_budget: int = DEFAULT_SIGN_BUDGET, signs: str = "search"
) -> SignSearchReport:
    """Compare ``Q(sum X_i)`` with the best ``Q(sum a_i X_i+)`` over sign patterns.

    The comparison is reported, not asserted.  With ``signs="all-plus"``
    only the pattern ``(1, ..., 1)`` is tried.  Ties between patterns go to
    the lexicographically smallest sign vector.
    """
    if not ds:
        raise ValidationError("need at least one distribution")
    n = len(ds)
    if signs == "search":
        if 2**n > max_sign_patterns_budget:
            raise TooManyPatterns(f"2^{n} sign patterns exceed the budget {max_sign_patterns_budget}")
        patterns = product((-1, 1), repeat=n)
    elif signs == "all-plus":
        patterns = [(1,) * n]
    else:
        raise ValidationError(f"unknown sign mode {signs!r}")

    lhs_q = concentration(_sum_all(ds)).q_max
    pluses = [plus_rearrangement(d) for d in ds]
    flipped = [reflect(d) for d in pluses]
    all_plus_q = concentration(_sum_all(pluses)).q_max

    best_q = None
    best_signs: tuple[int, ...] = ()
    searched = 0
    for pattern in patterns:
        searched += 1
        parts = [pl if s == 1 else fl for s, pl, fl in zip(pattern, pluses, flipped)]
        q = concentration(_sum_all(parts)).q_max
        if best_q is None or q > best_q:
            best_q, best_signs = q, tuple(pattern)
    return SignSearchReport(
        lhs_q=lhs_q,
        best_signs=best_signs,
        rhs_q_best=best_q,
        all_plus_q=all_plus_q,
        inequality_holds=lhs_q <= best_q,
        patterns_searched=searched,
    )


def llt_ratio(d: IntDist, n: int) -> LltScanRow:
    """``Q(S_n) * sqrt(2 pi n Var X)`` for the ``n``-fold sum, computed in float."""
    span = lattice_span(d)
    var = variance(d)
    if span != 1 or var == 0:
        raise DegenerateLattice(f"lattice span {span}, variance {var}: the support must generate Z")
    q = concentration(self_convolve(d, n, "float")).q_max
    return LltScanRow(n, q, q * math.sqrt(2 * math.pi * n * float(var)))


def llt_scan(d: IntDist, ns: list[int]) -> list[LltScanRow]:
    return [llt_ratio(d, n) for n in ns]
