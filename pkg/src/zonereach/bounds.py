"""Arithmetic on clock-difference bounds.

A bound is a pair (value, strictness) standing for ``expr < value`` or
``expr <= value``.  We pack the pair into a single int::

    raw = 2 * value + (0 if strict else 1)

so that plain integer comparison is exactly the bound order: a strict
bound is tighter than the weak bound with the same value, and lower
values are tighter than higher ones.  ``min`` then picks the tighter of
two bounds, which is what shortest-path closure needs in its inner loop.

The unbounded case is the sentinel ``INF``, always treated as weak.
Python ints never overflow, so the only arithmetic hazard is letting
the sentinel take part in an addition; ``add`` guards against that.
"""

from __future__ import annotations

# Large enough that no finite bound in any realistic network reaches it
# (values stay within a few times the largest scaled constant).
INF = 1 << 60

ZERO_LE = 1  # bound(0, strict=False): the canonical diagonal entry


def bound(value: int, strict: bool) -> int:
    """Pack a finite bound into its raw encoding."""
    return 2 * value + (0 if strict else 1)


def add(a: int, b: int) -> int:
    """Bound addition: values add, strict wins, INF absorbs."""
    if a == INF or b == INF:
        return INF
    return ((a >> 1) + (b >> 1)) << 1 | (a & b & 1)


def value(raw: int) -> int:
    return raw >> 1


def is_strict(raw: int) -> bool:
    return not raw & 1


def negated(raw: int) -> int:
    """Raw encoding of the complement of a bound.

    not(e <= v) is -e < -v and not(e < v) is -e <= -v, so the complement
    flips both the sign of the value and the strictness.  Undefined for
    INF, whose complement would be the empty constraint.
    """
    if raw == INF:
        raise ValueError("the unbounded bound has no complement")
    return bound(-(raw >> 1), strict=bool(raw & 1))
