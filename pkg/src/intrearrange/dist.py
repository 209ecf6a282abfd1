"""Finite integer-supported distributions with exact rational probabilities."""

from __future__ import annotations

import json
import math
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Any, Union

from .errors import BadMass, DuplicateValue, ParseError

__all__ = [
    "IntDist",
    "MedianInterval",
    "make_dist",
    "translate",
    "reflect",
    "canonical_form",
    "equivalent_up_to_translation_reflection",
    "mean",
    "variance",
    "median_set",
    "mad_median",
    "lattice_span",
    "dist_from_json",
    "dist_to_json",
    "dist_from_obj",
    "dist_to_obj",
    "parse_fraction",
]

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class IntDist:
    """A probability mass function on finitely many integers.

    ``atoms`` is a tuple of ``(value, prob)`` pairs with strictly increasing
    values, strictly positive ``Fraction`` probabilities, and total mass
    exactly 1.  Use :func:`make_dist` to build one from unsorted input.
    """

    atoms: tuple[tuple[int, Fraction], ...]

    def __post_init__(self) -> None:
        _validate(self.atoms)

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(x for x, _ in self.atoms)

    @property
    def probs(self) -> tuple[Fraction, ...]:
        return tuple(p for _, p in self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __getitem__(self, x: int) -> Fraction:
        for v, p in self.atoms:
            if v == x:
                return p
        return Fraction(0)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.atoms)

    def sorted_probs(self) -> list[Fraction]:
        """Probabilities ordered non-increasingly."""
        return sorted(self.probs, reverse=True)

    def __str__(self) -> str:
        body = ", ".join(f"{x}: {p}" for x, p in self.atoms)
        return "{" + body + "}"


@dataclass(frozen=True)
class MedianInterval:
    """Closed interval ``[lo, hi]``; a single point when ``lo == hi``."""

    lo: Any
    hi: Any

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, a: Any) -> bool:
        return self.lo <= a <= self.hi


def _validate(atoms: tuple[tuple[int, Fraction], ...]) -> None:
    if not atoms:
        raise BadMass("distribution has no atoms")
    prev = None
    for x, p in atoms:
        if not isinstance(x, int) or isinstance(x, bool):
            raise TypeError(f"support value {x!r} is not an integer")
        if not isinstance(p, Fraction):
            raise TypeError(f"probability {p!r} is not a Fraction")
        if prev is not None:
            if x == prev:
                raise DuplicateValue(f"value {x} appears twice")
            if x < prev:
                raise ValueError("atoms must be sorted by value")
        prev = x
        if p <= 0:
            raise BadMass(f"probability {p} at {x} is not positive")
    total = sum(p for _, p in atoms)
    if total != 1:
        raise BadMass(f"probabilities sum to {total}, not 1")


def make_dist(atoms: Iterable[tuple[int, Rational]] | Mapping[int, Rational]) -> IntDist:
    """Build an :class:`IntDist` from ``(value, prob)`` pairs in any order.

    >>> make_dist([(1, Fraction(1, 2)), (0, Fraction(1, 2))])
    IntDist(atoms=((0, Fraction(1, 2)), (1, Fraction(1, 2))))
    """
    if isinstance(atoms, Mapping):
        pairs = list(atoms.items())
    else:
        pairs = list(atoms)
    seen = set()
    for x, _ in pairs:
        if x in seen:
            raise DuplicateValue(f"value {x} appears twice")
        seen.add(x)
    norm = []
    for x, p in pairs:
        if isinstance(p, float):
            raise TypeError("float probabilities are not accepted")
        norm.append((int(x), Fraction(p)))
    norm.sort(key=lambda a: a[0])
    return IntDist(tuple(norm))


def translate(d: IntDist, k: int) -> IntDist:
    return IntDist(tuple((x + k, p) for x, p in d.atoms))


def reflect(d: IntDist) -> IntDist:
    return IntDist(tuple((-x, p) for x, p in reversed(d.atoms)))


def canonical_form(d: IntDist) -> tuple[tuple[int, Fraction], ...]:
    """Representative of ``d`` modulo integer translation and reflection.

    Both ``d`` and its reflection are shifted so the smallest support
    value is 0; the lexicographically smaller atom sequence wins.
    """
    fwd = translate(d, -d.atoms[0][0]).atoms
    r = reflect(d)
    bwd = translate(r, -r.atoms[0][0]).atoms
    return min(fwd, bwd)


def equivalent_up_to_translation_reflection(d1: IntDist, d2: IntDist) -> bool:
    if len(d1) != len(d2):
        return False
    return canonical_form(d1) == canonical_form(d2)


def mean(d: IntDist) -> Fraction:
    return sum((x * p for x, p in d.atoms), Fraction(0))


def variance(d: IntDist) -> Fraction:
    m = mean(d)
    return sum((x * x * p for x, p in d.atoms), Fraction(0)) - m * m


def median_set(d: IntDist) -> MedianInterval:
    """All medians ``m`` with ``P(X <= m) >= 1/2`` and ``P(X >= m) >= 1/2``.

    The lower end is the first atom where the CDF reaches 1/2.  If the CDF
    equals 1/2 exactly there, every point up to the next atom is a median too.
    """
    half = Fraction(1, 2)
    cdf = Fraction(0)
    for i, (x, p) in enumerate(d.atoms):
        cdf += p
        if cdf >= half:
            lo = Fraction(x)
            if cdf == half and i + 1 < len(d.atoms):
                return MedianInterval(lo, Fraction(d.atoms[i + 1][0]))
            return MedianInterval(lo, lo)
    raise AssertionError("unreachable: total mass is 1")


def mad_median(d: IntDist) -> Fraction:
    """Mean absolute deviation around a median (any median gives the same value)."""
    m = median_set(d).lo
    return sum((abs(x - m) * p for x, p in d.atoms), Fraction(0))


def lattice_span(d: IntDist) -> int:
    """gcd of support differences; 0 for a point mass."""
    x0 = d.atoms[0][0]
    return reduce(math.gcd, (x - x0 for x, _ in d.atoms[1:]), 0)


# --- JSON interchange ------------------------------------------------------

_FRACTION_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def parse_fraction(s: Any) -> Fraction:
    """Parse an exact fraction string such as ``"3/8"``; floats are rejected."""
    if not isinstance(s, str):
        raise ParseError(f"probability must be a fraction string, got {s!r}")
    if not _FRACTION_RE.match(s):
        raise ParseError(f"not an exact fraction: {s!r}")
    try:
        return Fraction(s.replace(" ", ""))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not an exact fraction: {s!r}") from exc


def dist_from_obj(obj: Any) -> IntDist:
    if not isinstance(obj, dict) or not isinstance(obj.get("atoms"), list):
        raise ParseError('expected an object with an "atoms" list')
    pairs = []
    for atom in obj["atoms"]:
        if not isinstance(atom, dict) or "x" not in atom or "p" not in atom:
            raise ParseError(f"malformed atom {atom!r}")
        x = atom["x"]
        if not isinstance(x, int) or isinstance(x, bool):
            raise ParseError(f"support value must be an integer, got {x!r}")
        pairs.append((x, parse_fraction(atom["p"])))
    return make_dist(pairs)


def dist_to_obj(d: IntDist) -> dict:
    return {"atoms": [{"x": x, "p": str(p)} for x, p in d.atoms]}


def dist_from_json(text: str) -> IntDist:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return dist_from_obj(obj)


def dist_to_json(d: IntDist) -> str:
    return json.dumps(dist_to_obj(d))
