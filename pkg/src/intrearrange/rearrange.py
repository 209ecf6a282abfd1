"""The integer symmetric-decreasing rearrangement ``X -> X+``."""

from __future__ import annotations

from fractions import Fraction

from .dist import IntDist, make_dist

__all__ = ["plus_position", "plus_order", "plus_rearrangement", "is_plus_form"]


def plus_position(i: int) -> int:
    """Integer receiving the ``i``-th largest probability (0-based): 0, 1, -1, 2, -2, ..."""
    if i % 2:
        return (i + 1) // 2
    return -(i // 2)


def plus_order(d: IntDist) -> list[tuple[int, Fraction]]:
    """Atoms sorted by probability descending, ties broken by value ascending."""
    return sorted(d.atoms, key=lambda a: (-a[1], a[0]))


def plus_rearrangement(d: IntDist) -> IntDist:
    return make_dist((plus_position(i), p) for i, (_, p) in enumerate(plus_order(d)))


def is_plus_form(d: IntDist) -> bool:
    return plus_rearrangement(d) == d
