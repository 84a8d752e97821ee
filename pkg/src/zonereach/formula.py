"""Zones as conjunctions of difference inequalities, projected by
Fourier-Motzkin elimination.

This backend keeps a zone as a flat list of atoms ``pos - neg < c`` or
``pos - neg <= c`` (either side may be absent, coefficients are +/-1)
plus a ground-false flag.  Emptiness, entailment and projection all go
through variable elimination: to remove a variable, every lower bound
on it is paired with every upper bound, the variable cancels, and a
variable-free combination either drops out (trivially true) or marks
the whole formula false.

It deliberately shares no zone logic with the matrix backend; the two
are developed against the same semantics and cross-checked in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .bounds import INF, ZERO_LE, add, bound, negated, value
from .model import ClockConstraint, ClockId

# Fresh variable standing for the elapsed delay while computing the
# future closure; the quote keeps it out of the identifier namespace.
_DELAY = ClockId("'delay", -1)


class LinearAtom(NamedTuple):
    """``pos - neg  (<|<=)  value``, with a missing side read as 0."""

    pos: Optional[ClockId]
    neg: Optional[ClockId]
    bnd: int  # raw bound encoding, see bounds.py


@dataclass(frozen=True)
class Formula:
    clocks: tuple[ClockId, ...]
    atoms: tuple[LinearAtom, ...]
    is_false: bool = False

    @classmethod
    def from_constraint(cls, c: ClockConstraint, clocks: Sequence[ClockId]) -> "Formula":
        clocks = tuple(clocks)
        known = set(clocks)
        items: list[LinearAtom] = []
        for atom in c.atoms:
            if not isinstance(atom.const, int):
                raise ValueError(f"non-integer constant {atom.const!r}; scale the network first")
            if atom.lhs not in known or (atom.rhs is not None and atom.rhs not in known):
                raise ValueError(f"atom {atom} mentions a clock outside the scope")
            p, n, c0 = atom.lhs, atom.rhs, atom.const
            if atom.op in ("<", "<="):
                items.append(LinearAtom(p, n, bound(c0, strict=atom.op == "<")))
            elif atom.op in (">", ">="):
                items.append(LinearAtom(n, p, bound(-c0, strict=atom.op == ">")))
            elif atom.op == "=":
                items.append(LinearAtom(p, n, bound(c0, strict=False)))
                items.append(LinearAtom(n, p, bound(-c0, strict=False)))
            else:
                raise ValueError(f"unknown operator {atom.op!r}")
        return make_formula(clocks, items)

    @cached_property
    def closed_cells(self) -> Optional[tuple[int, ...]]:
        return _closed_cells(self)


def make_formula(
    clocks: tuple[ClockId, ...], items: Iterable[LinearAtom], is_false: bool = False
) -> Formula:
    """Normalize an atom list into a ``Formula``.

    Adds the implicit non-negativity atom for every clock in scope,
    evaluates variable-free atoms, and keeps only the tightest bound
    per (pos, neg) pair.  The per-pair minimum is a set-preserving
    cleanup; without it the quadratic growth of elimination compounds
    across exploration steps.
    """
    if is_false:
        return Formula(clocks, (), True)
    tightest: dict[tuple[Optional[ClockId], Optional[ClockId]], int] = {
        (None, clock): ZERO_LE for clock in clocks
    }
    for pos, neg, bnd in items:
        if bnd == INF:
            continue
        if pos == neg:  # variable-free: 0 (<|<=) value
            if bnd < ZERO_LE:
                return Formula(clocks, (), True)
            continue
        key = (pos, neg)
        held = tightest.get(key)
        if held is None or bnd < held:
            tightest[key] = bnd
    atoms = tuple(LinearAtom(p, n, b) for (p, n), b in tightest.items())
    return Formula(clocks, atoms)


def _eliminate(atoms: Iterable[LinearAtom], var: ClockId) -> Optional[list[LinearAtom]]:
    """One Fourier-Motzkin step; None signals a ground contradiction."""
    lowers: list[LinearAtom] = []
    uppers: list[LinearAtom] = []
    rest: list[LinearAtom] = []
    for a in atoms:
        if a.neg == var:
            lowers.append(a)
        elif a.pos == var:
            uppers.append(a)
        else:
            rest.append(a)
    for lo in lowers:
        for up in uppers:
            combined = add(lo.bnd, up.bnd)
            if lo.pos == up.neg:  # variable-free combination
                if combined < ZERO_LE:
                    return None
                continue
            rest.append(LinearAtom(lo.pos, up.neg, combined))
    return rest


def fm_exists(f: Formula, variables: Sequence[ClockId]) -> Formula:
    """Exact projection: the result describes the solutions of ``f``
    with the given clocks forgotten."""
    variables = tuple(variables)
    for v in variables:
        if v not in f.clocks and v != _DELAY:
            raise ValueError(f"clock {v.name!r} is not in scope")
    remaining = tuple(c for c in f.clocks if c not in variables)
    if f.is_false:
        return Formula(remaining, (), True)
    work: Iterable[LinearAtom] = f.atoms
    for v in variables:
        work = _eliminate(work, v)
        if work is None:
            return Formula(remaining, (), True)
    return make_formula(remaining, work)


def fm_intersect(f1: Formula, f2: Formula) -> Formula:
    if f1.clocks != f2.clocks:
        raise ValueError("formulas over different scopes")
    if f1.is_false or f2.is_false:
        return Formula(f1.clocks, (), True)
    return make_formula(f1.clocks, f1.atoms + f2.atoms)


def fm_reset(f: Formula, resets: Sequence[ClockId]) -> Formula:
    """Project the reset clocks away, then pin each to zero."""
    projected = fm_exists(f, resets)
    if projected.is_false:
        return Formula(f.clocks, (), True)
    pinned = list(projected.atoms)
    for r in resets:
        pinned.append(LinearAtom(r, None, ZERO_LE))
        pinned.append(LinearAtom(None, r, ZERO_LE))
    return make_formula(f.clocks, pinned)


def fm_elapse(f: Formula) -> Formula:
    """Future closure: substitute x -> x - delay for a fresh delay >= 0,
    then eliminate the delay."""
    if f.is_false:
        return f
    shifted: list[LinearAtom] = [LinearAtom(None, _DELAY, ZERO_LE)]
    for pos, neg, bnd in f.atoms:
        if pos is None:
            shifted.append(LinearAtom(_DELAY, neg, bnd))
        elif neg is None:
            shifted.append(LinearAtom(pos, _DELAY, bnd))
        else:
            shifted.append(LinearAtom(pos, neg, bnd))
    work = _eliminate(shifted, _DELAY)
    if work is None:
        return Formula(f.clocks, (), True)
    return make_formula(f.clocks, work)


def fm_is_empty(f: Formula) -> bool:
    if f.is_false:
        return True
    return fm_exists(f, f.clocks).is_false


def fm_entails(f: Formula, atom: LinearAtom) -> bool:
    """Does every solution of ``f`` satisfy the atom?

    Checked by conjoining the complement of the atom (still a single
    difference inequality) and testing emptiness, which is complete;
    scanning projected bounds would miss combinations of one-sided
    bounds that only together imply a difference.
    """
    for side in (atom.pos, atom.neg):
        if side is not None and side not in f.clocks:
            raise ValueError(f"clock {side.name!r} is not in scope")
    if atom.bnd == INF or f.is_false:
        return True
    flipped = LinearAtom(atom.neg, atom.pos, negated(atom.bnd))
    return fm_is_empty(make_formula(f.clocks, f.atoms + (flipped,), f.is_false))


def fm_equiv(f1: Formula, f2: Formula) -> bool:
    """Set equality via mutual entailment of each other's atoms."""
    if f1.clocks != f2.clocks:
        raise ValueError("formulas over different scopes")
    e1, e2 = fm_is_empty(f1), fm_is_empty(f2)
    if e1 or e2:
        return e1 == e2
    return all(fm_entails(f1, a) for a in f2.atoms) and all(
        fm_entails(f2, a) for a in f1.atoms
    )


def _closed_cells(f: Formula) -> Optional[tuple[int, ...]]:
    """The tightest derivable bound for every clock pair, arranged like
    a closed difference-bound matrix; None when the formula is empty.

    Single-clock bounds come from projecting onto that clock alone
    (elimination contracts every derivation path into a direct atom).
    A pair bound is the tighter of the direct atom in the projection
    onto the pair and the combination of the two one-sided bounds,
    which covers derivations that pass through zero.
    """
    if fm_is_empty(f):
        return None
    n = len(f.clocks)
    size = n + 1
    grid = [INF] * (size * size)
    for i in range(size):
        grid[i * size + i] = ZERO_LE
    position = {clock: i + 1 for i, clock in enumerate(f.clocks)}
    for x, i in position.items():
        projected = fm_exists(f, tuple(c for c in f.clocks if c != x))
        for a in projected.atoms:
            if a.pos == x and a.neg is None:
                grid[i * size] = min(grid[i * size], a.bnd)
            elif a.pos is None and a.neg == x:
                grid[i] = min(grid[i], a.bnd)
    clocks = list(position.items())
    for ai in range(len(clocks)):
        for bi in range(ai + 1, len(clocks)):
            (x, i), (y, j) = clocks[ai], clocks[bi]
            projected = fm_exists(f, tuple(c for c in f.clocks if c not in (x, y)))
            for a in projected.atoms:
                if a.pos == x and a.neg == y:
                    grid[i * size + j] = min(grid[i * size + j], a.bnd)
                elif a.pos == y and a.neg == x:
                    grid[j * size + i] = min(grid[j * size + i], a.bnd)
            grid[i * size + j] = min(grid[i * size + j], add(grid[i * size], grid[j]))
            grid[j * size + i] = min(grid[j * size + i], add(grid[j * size], grid[i]))
    return tuple(grid)


def fm_extrapolate(f: Formula, k: Mapping[ClockId, int]) -> Formula:
    """Coarsen beyond the per-clock maximum constants.

    The widening rules must see the tightest derivable bounds, not the
    literal atom list: dropping a loose syntactic atom can otherwise
    widen past what the constants justify.  So the closed bounds are
    computed first and the rules applied to those.
    """
    cells = f.closed_cells
    if cells is None:
        return Formula(f.clocks, (), True)
    size = len(f.clocks) + 1
    limit = [0] + [k[c] for c in f.clocks]
    sides: list[Optional[ClockId]] = [None, *f.clocks]
    items = []
    for i in range(size):
        for j in range(size):
            if i == j:
                continue
            raw = cells[i * size + j]
            if raw == INF:
                continue
            if i > 0 and value(raw) > limit[i]:
                continue
            if j > 0 and value(raw) < -limit[j]:
                raw = bound(-limit[j], strict=True)
            items.append(LinearAtom(sides[i], sides[j], raw))
    return make_formula(f.clocks, items)


def fm_includes(f1: Formula, f2: Formula) -> bool:
    """Does ``f1`` contain ``f2``?  Every atom of the container must be
    entailed by the contained formula."""
    if f1.clocks != f2.clocks:
        raise ValueError("formulas over different scopes")
    if fm_is_empty(f2):
        return True
    return all(fm_entails(f2, a) for a in f1.atoms)
