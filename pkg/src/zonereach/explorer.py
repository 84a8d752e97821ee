"""On-the-fly reachability over the synchronized product.

A search state pairs a location vector with a zone.  Stored zones are
closed under delay, so they hold every valuation reachable by letting
time pass within the current invariants; the goal test on a stored
zone therefore already accounts for a trailing delay.  Successors are
computed per label: the automata listing the label in their alphabet
all move (every combination of their enabled transitions), the rest
stay.  The zone pipeline per combination is

    guards -> reset -> target invariants -> elapse -> target
    invariants -> extrapolation

where the double invariant intersection is exact because invariants
are convex.

The search is a plain worklist (LIFO or FIFO).  Each new state is
goal-tested before the visited check, so a goal is reported even when
the state would have been pruned.  Visited states are pruned either by
zone equality or by inclusion in an already-stored zone; with
extrapolation switched on the zone lattice per location vector is
finite and the search terminates.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Hashable, Iterator, Mapping, Optional, Protocol, Sequence

from . import formula as fm
from .dbm import Dbm
from .model import (
    ClockConstraint,
    ClockId,
    LabelId,
    LocationId,
    Network,
    Query,
    StatePattern,
    max_constants,
)

LocationVector = tuple[LocationId, ...]


class ZoneBackend(Protocol):
    clocks: tuple[ClockId, ...]

    def from_constraint(self, c: ClockConstraint): ...
    def intersect(self, a, b): ...
    def reset(self, z, clocks: Sequence[ClockId]): ...
    def elapse(self, z): ...
    def is_empty(self, z) -> bool: ...
    def includes(self, a, b) -> bool: ...
    def is_equivalent(self, a, b) -> bool: ...
    def extrapolate(self, z, k: Mapping[ClockId, int]): ...
    def fingerprint(self, z) -> Hashable: ...


class DbmBackend:
    """Zones as canonical difference-bound matrices."""

    def __init__(self, clocks: Sequence[ClockId]):
        self.clocks = tuple(clocks)

    def from_constraint(self, c: ClockConstraint) -> Dbm:
        return Dbm.from_constraint(c, self.clocks)

    def intersect(self, a: Dbm, b: Dbm) -> Dbm:
        return a.intersect(b)

    def reset(self, z: Dbm, clocks: Sequence[ClockId]) -> Dbm:
        return z.reset(clocks)

    def elapse(self, z: Dbm) -> Dbm:
        return z.elapse()

    def is_empty(self, z: Dbm) -> bool:
        return z.is_empty()

    def includes(self, a: Dbm, b: Dbm) -> bool:
        return a.includes(b)

    def is_equivalent(self, a: Dbm, b: Dbm) -> bool:
        return a.is_equivalent(b)

    def extrapolate(self, z: Dbm, k: Mapping[ClockId, int]) -> Dbm:
        return z.extrapolate(k)

    def fingerprint(self, z: Dbm) -> Hashable:
        return z.cells


class FormulaBackend:
    """Zones as inequality conjunctions under Fourier-Motzkin.

    Visited-set comparisons go through the tightest-bounds form of a
    formula (itself obtained by eliminations), which is canonical, so
    equality and inclusion are cheap cellwise checks there.
    """

    def __init__(self, clocks: Sequence[ClockId]):
        self.clocks = tuple(clocks)

    def from_constraint(self, c: ClockConstraint) -> fm.Formula:
        return fm.Formula.from_constraint(c, self.clocks)

    def intersect(self, a: fm.Formula, b: fm.Formula) -> fm.Formula:
        return fm.fm_intersect(a, b)

    def reset(self, z: fm.Formula, clocks: Sequence[ClockId]) -> fm.Formula:
        return fm.fm_reset(z, clocks)

    def elapse(self, z: fm.Formula) -> fm.Formula:
        return fm.fm_elapse(z)

    def is_empty(self, z: fm.Formula) -> bool:
        return fm.fm_is_empty(z)

    def includes(self, a: fm.Formula, b: fm.Formula) -> bool:
        ca, cb = a.closed_cells, b.closed_cells
        if cb is None:
            return True
        if ca is None:
            return False
        return all(y <= x for x, y in zip(ca, cb))

    def is_equivalent(self, a: fm.Formula, b: fm.Formula) -> bool:
        return a.closed_cells == b.closed_cells

    def extrapolate(self, z: fm.Formula, k: Mapping[ClockId, int]) -> fm.Formula:
        return fm.fm_extrapolate(z, k)

    def fingerprint(self, z: fm.Formula) -> Hashable:
        return z.closed_cells


def make_backend(name: str, clocks: Sequence[ClockId]) -> ZoneBackend:
    if name == "dbm":
        return DbmBackend(clocks)
    if name == "formula":
        return FormulaBackend(clocks)
    raise ValueError(f"unknown backend {name!r}")


@dataclass(frozen=True)
class StateZone:
    locations: LocationVector
    zone: object


class Verdict(Enum):
    REACHABLE = "True"
    UNREACHABLE = "False"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass
class SearchOptions:
    backend: str = "dbm"
    order: str = "dfs"  # "dfs" | "bfs"
    subsumption: str = "include"  # "include" | "equal"
    extrapolate: bool = True
    max_zones: Optional[int] = None
    max_seconds: Optional[float] = None

    def __post_init__(self):
        if self.order not in ("dfs", "bfs"):
            raise ValueError(f"unknown order {self.order!r}")
        if self.subsumption not in ("include", "equal"):
            raise ValueError(f"unknown subsumption mode {self.subsumption!r}")


@dataclass
class SearchStats:
    stored: int = 0
    popped: int = 0
    seconds: float = 0.0


@dataclass
class ExploreResult:
    verdict: Verdict
    witness: Optional[tuple[LabelId, ...]]
    stats: SearchStats
    reason: Optional[str] = None


def _invariant_zone(net: Network, backend: ZoneBackend, vector: LocationVector, cache: dict):
    zone = cache.get(vector)
    if zone is None:
        atoms = []
        for aut, loc in zip(net.automata, vector):
            atoms.extend(aut.invariants[loc].atoms)
        zone = backend.from_constraint(ClockConstraint(tuple(atoms)))
        cache[vector] = zone
    return zone


def init_zone(net: Network, source: StatePattern, backend: ZoneBackend, cache: Optional[dict] = None):
    """Source constraint restricted to the source invariants, before delay."""
    if cache is None:
        cache = {}
    zone = backend.from_constraint(source.constraint)
    return backend.intersect(zone, _invariant_zone(net, backend, source.locations, cache))


def _delay_close(net: Network, backend: ZoneBackend, vector: LocationVector, zone, cache: dict):
    inv = _invariant_zone(net, backend, vector, cache)
    return backend.intersect(backend.elapse(zone), inv)


def successors(
    net: Network,
    state: StateZone,
    backend: ZoneBackend,
    k: Mapping[ClockId, int],
    extrapolate: bool = True,
    invariant_cache: Optional[dict] = None,
) -> Iterator[tuple[LabelId, StateZone]]:
    """All label moves from a state, in declaration order.

    Labels follow the global declaration list; for each label the
    participating automata contribute their enabled transitions in
    declaration order and every combination is taken.
    """
    if invariant_cache is None:
        invariant_cache = {}
    for label in net.labels:
        participants = [i for i, aut in enumerate(net.automata) if label in aut.alphabet]
        if not participants:
            continue
        outgoing = []
        for i in participants:
            candidates = [
                t
                for t in net.automata[i].transitions
                if t.label == label and t.source == state.locations[i]
            ]
            if not candidates:
                outgoing = None
                break
            outgoing.append(candidates)
        if outgoing is None:
            continue
        for combo in product(*outgoing):
            guard_atoms = []
            resets: list[ClockId] = []
            vector = list(state.locations)
            for i, t in zip(participants, combo):
                guard_atoms.extend(t.guard.atoms)
                resets.extend(c for c in t.resets if c not in resets)
                vector[i] = t.target
            vector = tuple(vector)
            zone = backend.intersect(
                state.zone, backend.from_constraint(ClockConstraint(tuple(guard_atoms)))
            )
            if backend.is_empty(zone):
                continue
            zone = backend.reset(zone, resets)
            zone = backend.intersect(
                zone, _invariant_zone(net, backend, vector, invariant_cache)
            )
            if backend.is_empty(zone):
                continue
            zone = _delay_close(net, backend, vector, zone, invariant_cache)
            if extrapolate:
                zone = backend.extrapolate(zone, k)
            yield label, StateZone(vector, zone)


def is_goal(state: StateZone, target: StatePattern, backend: ZoneBackend) -> bool:
    """Exact location match plus non-empty overlap with the constraint."""
    if state.locations != target.locations:
        return False
    return not backend.is_empty(
        backend.intersect(state.zone, backend.from_constraint(target.constraint))
    )


class _Visited:
    """Per-location-vector store with equality or inclusion pruning."""

    def __init__(self, backend: ZoneBackend, mode: str):
        self.backend = backend
        self.mode = mode
        self.keys: set = set()
        self.zones: dict[LocationVector, list] = {}
        self.count = 0

    def subsumed(self, state: StateZone) -> bool:
        if self.mode == "equal":
            return (state.locations, self.backend.fingerprint(state.zone)) in self.keys
        bucket = self.zones.get(state.locations)
        if not bucket:
            return False
        return any(self.backend.includes(old, state.zone) for old in bucket)

    def add(self, state: StateZone) -> None:
        self.count += 1
        if self.mode == "equal":
            self.keys.add((state.locations, self.backend.fingerprint(state.zone)))
        else:
            self.zones.setdefault(state.locations, []).append(state.zone)


@dataclass
class _Node:
    state: StateZone
    parent: Optional["_Node"]
    label: Optional[LabelId]


def _trace(node: _Node) -> tuple[LabelId, ...]:
    labels = []
    while node.parent is not None:
        labels.append(node.label)
        node = node.parent
    labels.reverse()
    return tuple(labels)


def explore(net: Network, query: Query, options: Optional[SearchOptions] = None) -> ExploreResult:
    """Decide whether the target of the query is reachable from its source.

    True and False verdicts are definitive for the abstraction in use;
    hitting a zone or time limit yields the inconclusive verdict
    instead, with the reason recorded.
    """
    if options is None:
        options = SearchOptions()
    started = time.monotonic()
    deadline = None if options.max_seconds is None else started + options.max_seconds
    backend = make_backend(options.backend, net.clocks)
    k = max_constants(net, query)
    stats = SearchStats()
    invariant_cache: dict = {}

    def result(verdict, witness=None, reason=None):
        stats.seconds = time.monotonic() - started
        return ExploreResult(verdict, witness, stats, reason)

    zone = init_zone(net, query.source, backend, invariant_cache)
    if backend.is_empty(zone):
        return result(Verdict.UNREACHABLE)
    zone = _delay_close(net, backend, query.source.locations, zone, invariant_cache)
    if options.extrapolate:
        zone = backend.extrapolate(zone, k)
    root = _Node(StateZone(query.source.locations, zone), None, None)
    if is_goal(root.state, query.target, backend):
        return result(Verdict.REACHABLE, witness=())

    visited = _Visited(backend, options.subsumption)
    visited.add(root.state)
    stats.stored += 1
    worklist: deque[_Node] = deque([root])
    while worklist:
        if deadline is not None and time.monotonic() > deadline:
            return result(Verdict.INCONCLUSIVE, reason="time limit exceeded")
        node = worklist.pop() if options.order == "dfs" else worklist.popleft()
        stats.popped += 1
        batch = list(successors(net, node.state, backend, k, options.extrapolate, invariant_cache))
        if options.order == "dfs":
            # Reversed so the first-generated successor is explored first.
            batch.reverse()
        for label, succ in batch:
            child = _Node(succ, node, label)
            if is_goal(succ, query.target, backend):
                return result(Verdict.REACHABLE, witness=_trace(child))
            if visited.subsumed(succ):
                continue
            if options.max_zones is not None and visited.count >= options.max_zones:
                return result(Verdict.INCONCLUSIVE, reason="zone limit exceeded")
            visited.add(succ)
            stats.stored += 1
            worklist.append(child)
    return result(Verdict.UNREACHABLE)


def replay_witness(
    net: Network, query: Query, labels: Sequence[LabelId], options: Optional[SearchOptions] = None
) -> bool:
    """Check a label sequence: following exactly these labels from the
    source must end in a state satisfying the target."""
    if options is None:
        options = SearchOptions()
    backend = make_backend(options.backend, net.clocks)
    k = max_constants(net, query)
    cache: dict = {}
    zone = init_zone(net, query.source, backend, cache)
    if backend.is_empty(zone):
        return False
    zone = _delay_close(net, backend, query.source.locations, zone, cache)
    if options.extrapolate:
        zone = backend.extrapolate(zone, k)
    frontier = [StateZone(query.source.locations, zone)]
    for wanted in labels:
        frontier = [
            succ
            for state in frontier
            for label, succ in successors(net, state, backend, k, options.extrapolate, cache)
            if label == wanted
        ]
        if not frontier:
            return False
    return any(is_goal(state, query.target, backend) for state in frontier)
