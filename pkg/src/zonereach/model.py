"""Core types for networks of timed automata.

A network is a finite set of automata that move jointly: a label fires
only if every automaton whose alphabet contains it takes one of its
transitions with that label at the same instant, while the remaining
automata stay put.  Clocks are shared, advance at rate one, and are
compared against integer constants (rational inputs are scaled to
integers by ``normalize_constants``).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import lcm
from typing import Mapping, NamedTuple, Optional, Union


class ClockId(NamedTuple):
    name: str
    index: int


class LocationId(NamedTuple):
    name: str
    index: int


class LabelId(NamedTuple):
    name: str
    index: int


COMPARISON_OPS = ("<", "<=", "=", ">=", ">")

Number = Union[int, Fraction]


class Atom(NamedTuple):
    """One comparison: ``lhs op const`` or ``lhs - rhs op const``."""

    lhs: ClockId
    rhs: Optional[ClockId]
    op: str
    const: Number

    def mentions(self, clock: ClockId) -> bool:
        return self.lhs == clock or self.rhs == clock

    def holds(self, valuation: Mapping[ClockId, Number]) -> bool:
        left = valuation[self.lhs]
        if self.rhs is not None:
            left = left - valuation[self.rhs]
        if self.op == "<":
            return left < self.const
        if self.op == "<=":
            return left <= self.const
        if self.op == "=":
            return left == self.const
        if self.op == ">=":
            return left >= self.const
        if self.op == ">":
            return left > self.const
        raise ValueError(f"unknown comparison {self.op!r}")


@dataclass(frozen=True)
class ClockConstraint:
    """Conjunction of atoms; the empty conjunction is ``true``."""

    atoms: tuple[Atom, ...] = ()

    @property
    def is_true(self) -> bool:
        return not self.atoms

    def holds(self, valuation: Mapping[ClockId, Number]) -> bool:
        return all(atom.holds(valuation) for atom in self.atoms)


TRUE = ClockConstraint()


@dataclass(frozen=True)
class Transition:
    source: LocationId
    label: LabelId
    guard: ClockConstraint
    resets: tuple[ClockId, ...]
    target: LocationId


@dataclass(frozen=True)
class Automaton:
    locations: tuple[LocationId, ...]
    alphabet: tuple[LabelId, ...]
    invariants: Mapping[LocationId, ClockConstraint]
    transitions: tuple[Transition, ...]


@dataclass(frozen=True)
class Network:
    name: str
    clocks: tuple[ClockId, ...]
    locations: tuple[LocationId, ...]
    labels: tuple[LabelId, ...]
    automata: tuple[Automaton, ...]
    scale: int = 1

    def initial_like(self) -> dict[ClockId, Fraction]:
        return {clock: Fraction(0) for clock in self.clocks}


@dataclass(frozen=True)
class StatePattern:
    """A location vector plus a clock constraint, one side of a query."""

    locations: tuple[LocationId, ...]
    constraint: ClockConstraint


@dataclass(frozen=True)
class Query:
    source: StatePattern
    target: StatePattern


class ValidationError(Exception):
    def __init__(self, diagnostics: list[str]):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = diagnostics


def _check_declarations(kind: str, ids: tuple, out: list[str]) -> None:
    seen: dict[str, int] = {}
    for pos, ident in enumerate(ids):
        if ident.name in seen:
            out.append(f"duplicate {kind} name {ident.name!r}")
        seen[ident.name] = pos
        if ident.index != pos:
            out.append(f"{kind} {ident.name!r} has ordinal {ident.index}, expected {pos}")


def _check_constraint(c: ClockConstraint, clocks: set[ClockId], where: str, out: list[str]) -> None:
    for atom in c.atoms:
        if atom.lhs not in clocks:
            out.append(f"{where}: undeclared clock {atom.lhs.name!r}")
        if atom.rhs is not None:
            if atom.rhs not in clocks:
                out.append(f"{where}: undeclared clock {atom.rhs.name!r}")
            if atom.rhs == atom.lhs:
                out.append(f"{where}: difference atom compares {atom.lhs.name!r} with itself")
        if atom.op not in COMPARISON_OPS:
            out.append(f"{where}: unknown operator {atom.op!r}")
        if not isinstance(atom.const, (int, Fraction)):
            out.append(f"{where}: non-rational constant {atom.const!r}")


def network_diagnostics(net: Network) -> list[str]:
    """Every structural violation in the network, empty when well formed."""
    out: list[str] = []
    _check_declarations("clock", net.clocks, out)
    _check_declarations("location", net.locations, out)
    _check_declarations("label", net.labels, out)
    clocks = set(net.clocks)
    locations = set(net.locations)
    labels = set(net.labels)

    claimed: dict[LocationId, int] = {}
    for idx, aut in enumerate(net.automata):
        where = f"automaton {idx}"
        for loc in aut.locations:
            if loc not in locations:
                out.append(f"{where}: location {loc.name!r} not in the global declaration")
            if loc in claimed:
                out.append(f"{where}: location {loc.name!r} also belongs to automaton {claimed[loc]}")
            claimed[loc] = idx
        for lab in aut.alphabet:
            if lab not in labels:
                out.append(f"{where}: label {lab.name!r} not in the global declaration")
        own = set(aut.locations)
        for loc in aut.locations:
            if loc not in aut.invariants:
                out.append(f"{where}: location {loc.name!r} has no invariant entry")
        for loc in aut.invariants:
            if loc not in own:
                out.append(f"{where}: invariant for foreign location {loc.name!r}")
        for loc, inv in aut.invariants.items():
            _check_constraint(inv, clocks, f"{where}, invariant of {loc.name}", out)
        for t in aut.transitions:
            where_t = f"{where}, transition {t.source.name}--{t.label.name}->{t.target.name}"
            if t.source not in own:
                out.append(f"{where_t}: source not in this automaton")
            if t.target not in own:
                out.append(f"{where_t}: target not in this automaton")
            if t.label not in set(aut.alphabet):
                out.append(f"{where_t}: label not in this automaton's alphabet")
            _check_constraint(t.guard, clocks, where_t, out)
            if len(set(t.resets)) != len(t.resets):
                out.append(f"{where_t}: repeated clock in reset list")
            for r in t.resets:
                if r not in clocks:
                    out.append(f"{where_t}: reset of undeclared clock {r.name!r}")
    return out


def validate(net: Network) -> Network:
    """Return the network unchanged, or raise with every violation listed."""
    diagnostics = network_diagnostics(net)
    if diagnostics:
        raise ValidationError(diagnostics)
    return net


def _scaled_constraint(c: ClockConstraint, factor: int) -> ClockConstraint:
    atoms = []
    for atom in c.atoms:
        const = atom.const * factor
        if const != int(const):
            raise ValueError(f"constant {atom.const} does not scale to an integer by {factor}")
        atoms.append(atom._replace(const=int(const)))
    return ClockConstraint(tuple(atoms))


def _constraint_denominator(c: ClockConstraint) -> int:
    return lcm(*(Fraction(a.const).denominator for a in c.atoms)) if c.atoms else 1


def normalize_constants(net: Network) -> Network:
    """Scale every constant to an integer, recording the multiplier.

    The verdict of a reachability question is invariant under scaling
    all constants (and implicitly all clock rates) by a common positive
    factor, so the checker only ever works on integer constants.
    Already-integral networks pass through with scale 1.
    """
    denominators = [1]
    for aut in net.automata:
        for inv in aut.invariants.values():
            denominators.append(_constraint_denominator(inv))
        for t in aut.transitions:
            denominators.append(_constraint_denominator(t.guard))
    factor = lcm(*denominators)
    automata = []
    for aut in net.automata:
        automata.append(
            replace(
                aut,
                invariants={loc: _scaled_constraint(inv, factor) for loc, inv in aut.invariants.items()},
                transitions=tuple(
                    replace(t, guard=_scaled_constraint(t.guard, factor)) for t in aut.transitions
                ),
            )
        )
    return replace(net, automata=tuple(automata), scale=net.scale * factor)


def scale_constraint(c: ClockConstraint, net: Network) -> ClockConstraint:
    """Bring a query-side constraint onto the network's integer scale.

    Raises ValueError when a constant cannot be represented at that
    scale (for example 0.5 against a network whose scale is 1).
    """
    return _scaled_constraint(c, net.scale)


def max_constants(net: Network, query: Query | None = None) -> dict[ClockId, int]:
    """Per-clock maximum constant over guards, invariants and the query.

    The magnitude of the constant is what matters for the coarsening of
    zones, so negative constants contribute their absolute value.  A
    clock never compared anywhere gets 0.
    """
    k = {clock: 0 for clock in net.clocks}

    def feed(c: ClockConstraint) -> None:
        for atom in c.atoms:
            magnitude = abs(int(atom.const))
            if magnitude > k[atom.lhs]:
                k[atom.lhs] = magnitude
            if atom.rhs is not None and magnitude > k[atom.rhs]:
                k[atom.rhs] = magnitude

    for aut in net.automata:
        for inv in aut.invariants.values():
            feed(inv)
        for t in aut.transitions:
            feed(t.guard)
    if query is not None:
        feed(query.source.constraint)
        feed(query.target.constraint)
    return k


def automaton_of_label(net: Network, label: LabelId) -> list[int]:
    """Indices of the automata that synchronize on the label."""
    return [i for i, aut in enumerate(net.automata) if label in aut.alphabet]
