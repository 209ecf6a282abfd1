"""Exhaustive placement of a probability multiset onto an integer window.

For a fixed multiset of probabilities, every way of putting them on distinct
integers of a finite window is enumerated and scored.  The plus
rearrangement must attain the global minimum of ``D_f``, and for square
cost every global minimizer must be a translate or reflection of it.

Scoring uses integer weights over a common denominator, so the comparisons
are exact without building a ``Fraction`` per assignment.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .dispersion import DispersionFunction, dispersion
from .dist import IntDist, equivalent_up_to_translation_reflection, make_dist
from .errors import BadMass, BadWindow, TooLarge, ValidationError
from .rearrange import plus_rearrangement

__all__ = [
    "DEFAULT_BUDGET",
    "OracleReport",
    "assignment_bound",
    "count_distinct_assignments",
    "enumerate_assignments",
    "multiset_permutations",
    "verify_theorem",
]

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class OracleReport:
    num_assignments: int
    min_value: Fraction
    minimizers: list[IntDist]
    plus_form_value: Fraction
    theorem_holds: bool
    equality_cases_all_equivalent: bool


def multiset_permutations(items: Sequence) -> Iterator[tuple]:
    """Distinct permutations of ``items`` in lexicographic order."""
    a = sorted(items)
    n = len(a)
    while True:
        yield tuple(a)
        i = n - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1:] = reversed(a[i + 1:])


def assignment_bound(n: int, width: int) -> int:
    """``C(width, n) * n!``, the assignment count before deduplication."""
    return math.comb(width, n) * math.factorial(n)


def count_distinct_assignments(probs: Sequence[Fraction], width: int) -> int:
    mult = 1
    for c in _multiplicities(probs):
        mult *= math.factorial(c)
    return assignment_bound(len(probs), width) // mult


def _multiplicities(probs: Sequence[Fraction]) -> list[int]:
    counts: dict[Fraction, int] = {}
    for p in probs:
        counts[p] = counts.get(p, 0) + 1
    return list(counts.values())


def _check_inputs(probs: Sequence[Fraction], window: tuple[int, int], budget: int) -> int:
    if not probs:
        raise BadMass("empty probability multiset")
    if any(p <= 0 for p in probs):
        raise BadMass("probabilities must be positive")
    if sum(probs) != 1:
        raise BadMass(f"probabilities sum to {sum(probs)}, not 1")
    lo, hi = window
    width = hi - lo + 1
    if width < len(probs):
        raise BadWindow(f"window [{lo}, {hi}] has fewer than {len(probs)} integers")
    if budget <= 0:
        raise ValidationError("budget must be positive")
    bound = assignment_bound(len(probs), width)
    if bound > budget:
        raise TooLarge(f"{bound} assignments exceed the budget of {budget}")
    return width


def _raw_assignments(weights: Sequence, window: tuple[int, int]):
    lo, hi = window
    perms = list(multiset_permutations(weights))
    for values in combinations(range(lo, hi + 1), len(weights)):
        for perm in perms:
            yield values, perm


def enumerate_assignments(
    probs: Sequence[Fraction], window: tuple[int, int], budget: int = DEFAULT_BUDGET
) -> Iterator[IntDist]:
    """Every distinct distribution placing ``probs`` on distinct integers of ``window``.

    ``window`` is an inclusive ``(lo, hi)`` pair.  Raises :class:`TooLarge`
    up front when ``C(width, N) * N!`` exceeds ``budget``.
    """
    probs = [Fraction(p) for p in probs]
    _check_inputs(probs, window, budget)
    return (
        IntDist(tuple(zip(values, perm)))
        for values, perm in _raw_assignments(probs, window)
    )


def _score_square(values, weights, total):
    s1 = s2 = 0
    for x, w in zip(values, weights):
        s1 += w * x
        s2 += w * x * x
    return total * s2 - s1 * s1


def _score_identity(values, weights, total):
    cum = 0
    m = values[-1]
    for x, w in zip(values, weights):
        cum += w
        if 2 * cum >= total:
            m = x
            break
    return sum(w * abs(x - m) for x, w in zip(values, weights))


def verify_theorem(
    probs: Sequence[Fraction],
    window: tuple[int, int],
    f: DispersionFunction,
    budget: int = DEFAULT_BUDGET,
) -> OracleReport:
    if not f.exact:
        raise ValidationError("the oracle only supports exact costs (identity, square)")
    probs = [Fraction(p) for p in probs]
    _check_inputs(probs, window, budget)

    denom = math.lcm(*(p.denominator for p in probs))
    weights = [int(p * denom) for p in probs]
    if f.kind == "square":
        score, scale = _score_square, denom * denom
    else:
        score, scale = _score_identity, denom

    count = 0
    best = None
    argmin: list[tuple] = []
    for values, perm in _raw_assignments(weights, window):
        count += 1
        s = score(values, perm, denom)
        if best is None or s < best:
            best = s
            argmin = [(values, perm)]
        elif s == best:
            argmin.append((values, perm))

    min_value = Fraction(best, scale)
    minimizers = [
        make_dist((x, Fraction(w, denom)) for x, w in zip(values, perm))
        for values, perm in argmin
    ]
    plus = plus_rearrangement(make_dist(zip(range(len(probs)), probs)))
    plus_value = dispersion(plus, f).value
    return OracleReport(
        num_assignments=count,
        min_value=min_value,
        minimizers=minimizers,
        plus_form_value=plus_value,
        theorem_holds=plus_value <= min_value,
        equality_cases_all_equivalent=all(
            equivalent_up_to_translation_reflection(m, plus) for m in minimizers
        ),
    )
