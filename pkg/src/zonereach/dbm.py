"""Difference-bound matrices: canonical zone representation.

A zone over clocks x1..xn is an (n+1) x (n+1) matrix of bounds, index 0
being the constant-zero reference clock; entry (i, j) bounds xi - xj.
Bounds use the raw integer encoding of ``bounds``.  Matrices are kept
row-major in a flat tuple.

Every ``Dbm`` handed out by this module is canonical: the matrix is
closed under the triangle inequality (shortest paths), so structural
equality of the cell tuple coincides with equality of the zones, the
most-constrained form is unique, and inclusion is a cellwise check.
The empty zone is a distinguished marker (``cells is None``) rather
than some arbitrary inconsistent matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .bounds import INF, ZERO_LE, add, bound, is_strict, value
from .model import Atom, ClockConstraint, ClockId


def _close(grid: list[int], size: int) -> bool:
    """Floyd-Warshall closure in place; False when the zone is empty."""
    for k in range(size):
        krow = k * size
        for i in range(size):
            ik = grid[i * size + k]
            if ik == INF:
                continue
            irow = i * size
            for j in range(size):
                kj = grid[krow + j]
                if kj == INF:
                    continue
                through = ((ik >> 1) + (kj >> 1)) << 1 | (ik & kj & 1)
                if through < grid[irow + j]:
                    grid[irow + j] = through
    for i in range(size):
        if grid[i * size + i] < ZERO_LE:
            return False
    return True


def _universe(size: int) -> list[int]:
    # Row 0 at (0, <=) keeps every clock non-negative; everything else free.
    grid = [INF] * (size * size)
    for j in range(size):
        grid[j] = ZERO_LE
    for i in range(size):
        grid[i * size + i] = ZERO_LE
    return grid


@dataclass(frozen=True)
class Dbm:
    clocks: tuple[ClockId, ...]
    cells: tuple[int, ...] | None  # None is the empty-zone marker

    # -- construction ------------------------------------------------

    @classmethod
    def universe(cls, clocks: Sequence[ClockId]) -> "Dbm":
        clocks = tuple(clocks)
        return cls(clocks, tuple(_universe(len(clocks) + 1)))

    @classmethod
    def from_bounds(cls, clocks: Sequence[ClockId], grid: Iterable[int]) -> "Dbm":
        """Close an explicit bound grid; the empty marker on inconsistency."""
        clocks = tuple(clocks)
        size = len(clocks) + 1
        work = list(grid)
        if len(work) != size * size:
            raise ValueError("grid size does not match the clock list")
        if not _close(work, size):
            return cls(clocks, None)
        return cls(clocks, tuple(work))

    @classmethod
    def from_constraint(cls, c: ClockConstraint, clocks: Sequence[ClockId]) -> "Dbm":
        clocks = tuple(clocks)
        size = len(clocks) + 1
        index = {clock: i + 1 for i, clock in enumerate(clocks)}
        grid = _universe(size)

        def tighten(i: int, j: int, raw: int) -> None:
            if raw < grid[i * size + j]:
                grid[i * size + j] = raw

        for atom in c.atoms:
            if not isinstance(atom.const, int):
                raise ValueError(f"non-integer constant {atom.const!r}; scale the network first")
            try:
                i = index[atom.lhs]
                j = index[atom.rhs] if atom.rhs is not None else 0
            except KeyError as missing:
                raise ValueError(f"unknown clock {missing.args[0]!r}") from None
            n = atom.const
            if atom.op == "<":
                tighten(i, j, bound(n, strict=True))
            elif atom.op == "<=":
                tighten(i, j, bound(n, strict=False))
            elif atom.op == ">":
                tighten(j, i, bound(-n, strict=True))
            elif atom.op == ">=":
                tighten(j, i, bound(-n, strict=False))
            elif atom.op == "=":
                tighten(i, j, bound(n, strict=False))
                tighten(j, i, bound(-n, strict=False))
            else:
                raise ValueError(f"unknown operator {atom.op!r}")
        if not _close(grid, size):
            return cls(clocks, None)
        return cls(clocks, tuple(grid))

    # -- basic queries -----------------------------------------------

    @property
    def empty(self) -> bool:
        return self.cells is None

    def is_empty(self) -> bool:
        return self.cells is None

    def _index(self, clock: ClockId) -> int:
        try:
            return self.clocks.index(clock) + 1
        except ValueError:
            raise ValueError(f"unknown clock {clock.name!r}") from None

    def cell(self, i: int, j: int) -> int:
        if self.cells is None:
            raise ValueError("the empty zone has no cells")
        return self.cells[i * (len(self.clocks) + 1) + j]

    def canonicalize(self) -> "Dbm":
        """Re-close; a fixpoint for anything this module hands out."""
        if self.cells is None:
            return self
        return Dbm.from_bounds(self.clocks, self.cells)

    def _require_same_clocks(self, other: "Dbm") -> None:
        if self.clocks != other.clocks:
            raise ValueError("zones over different clock lists")

    # -- zone operations ----------------------------------------------

    def intersect(self, other: "Dbm") -> "Dbm":
        self._require_same_clocks(other)
        if self.cells is None or other.cells is None:
            return Dbm(self.clocks, None)
        merged = [min(a, b) for a, b in zip(self.cells, other.cells)]
        size = len(self.clocks) + 1
        if not _close(merged, size):
            return Dbm(self.clocks, None)
        return Dbm(self.clocks, tuple(merged))

    def reset(self, resets: Sequence[ClockId]) -> "Dbm":
        """Set the given clocks to zero (the other dimensions keep their
        relations, i.e. assignment, not intersection with x = 0)."""
        if self.cells is None:
            return self
        size = len(self.clocks) + 1
        grid = list(self.cells)
        for clock in resets:
            r = self._index(clock)
            for j in range(size):
                grid[r * size + j] = grid[j]          # row 0 entry (0 - xj)
                grid[j * size + r] = grid[j * size]   # column 0 entry (xj - 0)
            grid[r * size + r] = ZERO_LE
        if not _close(grid, size):  # resets keep closure; belt and braces
            return Dbm(self.clocks, None)
        return Dbm(self.clocks, tuple(grid))

    def elapse(self) -> "Dbm":
        """Future closure: every point shifted by every non-negative delay.

        Dropping the upper bounds (column 0) of a closed matrix keeps it
        closed, so no re-closure is needed.
        """
        if self.cells is None:
            return self
        size = len(self.clocks) + 1
        grid = list(self.cells)
        for i in range(1, size):
            grid[i * size] = INF
        return Dbm(self.clocks, tuple(grid))

    def includes(self, other: "Dbm") -> bool:
        """Does this zone contain ``other`` as a set?"""
        self._require_same_clocks(other)
        if other.cells is None:
            return True
        if self.cells is None:
            return False
        return all(o <= s for s, o in zip(self.cells, other.cells))

    def is_equivalent(self, other: "Dbm") -> bool:
        self._require_same_clocks(other)
        return self.cells == other.cells

    def extrapolate(self, k: Mapping[ClockId, int]) -> "Dbm":
        """Coarsen beyond the per-clock maximum constants.

        Upper bounds above k(xi) become unbounded and lower bounds below
        -k(xj) are clamped to strictly-beyond-k(xj); the result is
        re-closed.  Zones that only differ beyond the constants collapse
        to the same matrix, which is what makes exploration finite.
        """
        if self.cells is None:
            return self
        size = len(self.clocks) + 1
        limit = [0] + [k[c] for c in self.clocks]
        grid = list(self.cells)
        for i in range(size):
            for j in range(size):
                if i == j:
                    continue
                raw = grid[i * size + j]
                if raw == INF:
                    continue
                if i > 0 and value(raw) > limit[i]:
                    grid[i * size + j] = INF
                elif j > 0 and value(raw) < -limit[j]:
                    grid[i * size + j] = bound(-limit[j], strict=True)
        _close(grid, size)  # widening a non-empty zone cannot empty it
        return Dbm(self.clocks, tuple(grid))

    def eliminate(self, clock: ClockId) -> "Dbm":
        """Existentially quantify one clock.

        On a closed matrix, deleting the row and column is the exact
        projection, and the minor of a closed matrix is closed.
        """
        x = self._index(clock)
        remaining = tuple(c for c in self.clocks if c != clock)
        if self.cells is None:
            return Dbm(remaining, None)
        size = len(self.clocks) + 1
        keep = [i for i in range(size) if i != x]
        grid = tuple(self.cells[i * size + j] for i in keep for j in keep)
        return Dbm(remaining, grid)

    def to_constraint(self) -> ClockConstraint:
        """Atoms describing the zone exactly; ``true`` for the universe.

        One atom per finite off-diagonal cell, skipping the plain
        non-negativity entries, which every zone carries implicitly.
        An empty zone is rendered as the conventional contradiction
        ``x < 0`` on the first clock.
        """
        if self.cells is None:
            if not self.clocks:
                raise ValueError("cannot express the empty zone without clocks")
            return ClockConstraint((Atom(self.clocks[0], None, "<", 0),))
        size = len(self.clocks) + 1
        atoms = []
        for i in range(1, size):
            xi = self.clocks[i - 1]
            raw = self.cells[i * size]
            if raw != INF:
                atoms.append(Atom(xi, None, "<" if is_strict(raw) else "<=", value(raw)))
            raw = self.cells[i]
            if raw != INF and raw != ZERO_LE:
                atoms.append(Atom(xi, None, ">" if is_strict(raw) else ">=", -value(raw)))
        for i in range(1, size):
            for j in range(1, size):
                if i == j:
                    continue
                raw = self.cells[i * size + j]
                if raw != INF:
                    atoms.append(
                        Atom(
                            self.clocks[i - 1],
                            self.clocks[j - 1],
                            "<" if is_strict(raw) else "<=",
                            value(raw),
                        )
                    )
        return ClockConstraint(tuple(atoms))
