"""Dispersion functionals ``D_f(X) = min_a E f(|X - a|)`` and their minimizers.

Identity and square costs have closed forms (mean absolute deviation about
the median, variance) computed in exact rationals.  General powers
``f(x) = x**p`` with ``p >= 1`` go through a golden-section search on the
support hull, evaluated in extended precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

import mpmath

from .dist import (
    IntDist,
    MedianInterval,
    equivalent_up_to_translation_reflection,
    mad_median,
    mean,
    median_set,
    variance,
)
from .errors import ChainViolation, ParseError
from .rearrange import plus_order, plus_rearrangement

__all__ = [
    "DispersionFunction",
    "IDENTITY",
    "SQUARE",
    "DispersionResult",
    "MainInequalityReport",
    "ProofChainTrace",
    "expected_f_deviation",
    "dispersion",
    "check_main_inequality",
    "nearest_integer_distance",
    "w_vector",
    "proof_chain",
    "GOLDEN_TOL",
    "FLOAT_EQ_TOL",
]

Number = Union[int, Fraction, float]

GOLDEN_TOL = 1e-12
FLOAT_EQ_TOL = 1e-9
_MP_DPS = 40


@dataclass(frozen=True)
class DispersionFunction:
    """Non-decreasing cost ``f`` with ``f(0) = 0``.

    ``kind`` is ``"identity"``, ``"square"`` or ``"power"``; the exponent
    ``p`` is only used (and required, ``p >= 1``) for powers.
    """

    kind: str
    p: Fraction | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("identity", "square", "power"):
            raise ValueError(f"unknown dispersion function {self.kind!r}")
        if self.kind == "power":
            if self.p is None or self.p < 1:
                raise ValueError("power exponent must be >= 1")
            object.__setattr__(self, "p", Fraction(self.p))
        elif self.p is not None:
            raise ValueError(f"{self.kind} takes no exponent")

    @classmethod
    def power(cls, p: Any) -> DispersionFunction:
        if isinstance(p, float):
            p = Fraction(p).limit_denominator(10**9)
        return cls("power", Fraction(p))

    @classmethod
    def parse(cls, name: str) -> DispersionFunction:
        """Parse ``identity``, ``square`` or ``power:<p>`` (p may be ``3`` or ``3/2``)."""
        name = name.strip().lower()
        if name in ("identity", "square"):
            return cls(name)
        if name.startswith("power:"):
            raw = name.split(":", 1)[1]
            try:
                p = Fraction(raw)
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad power exponent {raw!r}") from exc
            if p < 1:
                raise ParseError("power exponent must be >= 1")
            return cls("power", p)
        raise ParseError(f"unknown dispersion function {name!r}")

    @property
    def name(self) -> str:
        if self.kind == "power":
            return f"power:{self.p}"
        return self.kind

    @property
    def exact(self) -> bool:
        return self.kind != "power"

    @property
    def strictness_eligible(self) -> bool:
        # positive derivative on (0, inf) and f'(0+) = 0
        return self.kind == "square" or (self.kind == "power" and self.p > 1)

    def __call__(self, t: Number) -> Number:
        if self.kind == "identity":
            return t
        if self.kind == "square":
            return t * t
        return float(t) ** float(self.p)


IDENTITY = DispersionFunction("identity")
SQUARE = DispersionFunction("square")


@dataclass(frozen=True)
class DispersionResult:
    value: Number
    minimizers: MedianInterval
    exact: bool
    tolerance: float = 0.0


@dataclass(frozen=True)
class MainInequalityReport:
    d_f_x: Number
    d_f_x_plus: Number
    holds: bool
    equality: bool
    equivalence_explains_equality: bool


@dataclass(frozen=True)
class ProofChainTrace:
    a: Number
    a_prime: Number
    p_vec: tuple
    v_vec: tuple
    v_sorted_vec: tuple
    w_vec: tuple
    dot_pv: Number
    dot_pv_sorted: Number
    dot_pw: Number


def _is_rational(a: Any) -> bool:
    return isinstance(a, (int, Fraction)) and not isinstance(a, bool)


def _to_mpf(a: Number):
    if isinstance(a, Fraction):
        return mpmath.mpf(a.numerator) / a.denominator
    return mpmath.mpf(a)


def _mp_power(p: Fraction):
    if p.denominator == 1:
        return int(p)
    return _to_mpf(p)


def _mp_objective(d: IntDist, p: Fraction):
    e = _mp_power(p)
    weights = [(mpmath.mpf(x), _to_mpf(q)) for x, q in d.atoms]

    def objective(a):
        return mpmath.fsum(w * abs(x - a) ** e for x, w in weights)

    return objective


def expected_f_deviation(d: IntDist, f: DispersionFunction, a: Number) -> Number:
    """``E f(|X - a|)``; exact when ``f`` is identity/square and ``a`` is rational."""
    if f.kind == "power":
        with mpmath.workdps(_MP_DPS):
            return float(_mp_objective(d, f.p)(_to_mpf(a)))
    if _is_rational(a):
        return sum((p * f(abs(x - a)) for x, p in d.atoms), Fraction(0))
    a = float(a)
    return math.fsum(float(p) * f(abs(x - a)) for x, p in d.atoms)


def _golden_section(objective, lo, hi, tol):
    """Minimize a convex function on ``[lo, hi]`` until the bracket is narrower than ``tol``."""
    invphi = (mpmath.sqrt(5) - 1) / 2
    c = hi - invphi * (hi - lo)
    e = lo + invphi * (hi - lo)
    fc, fe = objective(c), objective(e)
    while hi - lo > tol:
        if fc <= fe:
            hi, e, fe = e, c, fc
            c = hi - invphi * (hi - lo)
            fc = objective(c)
        else:
            lo, c, fc = c, e, fe
            e = lo + invphi * (hi - lo)
            fe = objective(e)
    return (lo + hi) / 2


def dispersion(d: IntDist, f: DispersionFunction) -> DispersionResult:
    if f.kind == "identity":
        return DispersionResult(mad_median(d), median_set(d), exact=True)
    if f.kind == "square":
        m = mean(d)
        return DispersionResult(variance(d), MedianInterval(m, m), exact=True)

    lo, hi = d.atoms[0][0], d.atoms[-1][0]
    if lo == hi:
        return DispersionResult(0.0, MedianInterval(float(lo), float(lo)), exact=False,
                                tolerance=GOLDEN_TOL)
    with mpmath.workdps(_MP_DPS):
        objective = _mp_objective(d, f.p)
        a = _golden_section(objective, mpmath.mpf(lo), mpmath.mpf(hi), mpmath.mpf(GOLDEN_TOL))
        value = float(objective(a))
    a = float(a)
    return DispersionResult(value, MedianInterval(a, a), exact=False, tolerance=GOLDEN_TOL)


def check_main_inequality(d: IntDist, f: DispersionFunction) -> MainInequalityReport:
    """Compare ``D_f(X)`` with ``D_f(X+)``.

    Exact costs compare rationals with no tolerance; power costs declare
    equality when the values differ by at most ``FLOAT_EQ_TOL``.
    """
    plus = plus_rearrangement(d)
    dx = dispersion(d, f).value
    dplus = dispersion(plus, f).value
    if f.exact:
        holds = dplus <= dx
        equality = dplus == dx
    else:
        holds = dplus <= dx + FLOAT_EQ_TOL
        equality = abs(dx - dplus) <= FLOAT_EQ_TOL
    return MainInequalityReport(
        d_f_x=dx,
        d_f_x_plus=dplus,
        holds=holds,
        equality=equality,
        equivalence_explains_equality=equivalent_up_to_translation_reflection(d, plus),
    )


def nearest_integer_distance(a: Number) -> Number:
    """Distance from ``a`` to the nearest integer, in ``[0, 1/2]``."""
    fl = math.floor(a)
    return min(a - fl, fl + 1 - a)


def w_vector(n: int, a_prime: Number, f: DispersionFunction) -> tuple:
    """Costs of the ideal placement: ``f(a'), f(1-a'), f(1+a'), f(2-a'), ...`` (length ``n``)."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    for i in range(n):
        if i == 0:
            t = a_prime
        elif i % 2:
            t = (i + 1) // 2 - a_prime
        else:
            t = i // 2 + a_prime
        out.append(f(t))
    return tuple(out)


def _dot(u, v, exact):
    if exact:
        return sum((a * b for a, b in zip(u, v)), Fraction(0))
    return math.fsum(float(a) * float(b) for a, b in zip(u, v))


def proof_chain(d: IntDist, f: DispersionFunction, a: Number) -> ProofChainTrace:
    """Trace ``p.v >= p.v' >= p.w`` for the centering value ``a``.

    ``p`` lists probabilities non-increasingly (ties by ascending value),
    ``v`` the costs ``f(|x - a|)`` of the matching atoms, ``v'`` is ``v``
    sorted non-decreasingly and ``w`` the costs of the ideal placement at
    distance ``a' = nearest_integer_distance(a)``.  ``p.w`` equals
    ``E f(|X+ - a'|)``.  Raises :class:`ChainViolation` if the chain breaks.
    """
    exact = f.exact and _is_rational(a)
    if _is_rational(a):
        a = Fraction(a)
    else:
        a = float(a)
    order = plus_order(d)
    p_vec = tuple(p for _, p in order)
    v_vec = tuple(f(abs(x - a)) for x, _ in order)
    v_sorted = tuple(sorted(v_vec))
    a_prime = nearest_integer_distance(a)
    w = w_vector(len(d), a_prime, f)
    dot_pv = _dot(p_vec, v_vec, exact)
    dot_pvs = _dot(p_vec, v_sorted, exact)
    dot_pw = _dot(p_vec, w, exact)

    slack = 0 if exact else 1e-12 * (1 + abs(dot_pv))
    if not (dot_pv + slack >= dot_pvs and dot_pvs + slack >= dot_pw):
        raise ChainViolation(f"chain broken: {dot_pv} >= {dot_pvs} >= {dot_pw} fails")
    for vs, wi in zip(v_sorted, w):
        if vs + slack < wi:
            raise ChainViolation(f"v' component {vs} below w component {wi}")
    return ProofChainTrace(
        a=a,
        a_prime=a_prime,
        p_vec=p_vec,
        v_vec=v_vec,
        v_sorted_vec=v_sorted,
        w_vec=w,
        dot_pv=dot_pv,
        dot_pv_sorted=dot_pvs,
        dot_pw=dot_pw,
    )
