"""Reader and printer for the textual network format.

The format is word-oriented: lists of identifiers end in ``nil``,
constraints are ``atom ^ ... ^ true``, automata are parenthesized
blocks terminated by ``.``, and ``//`` starts a comment.  A query is
``go(loc.loc.nil/constraint, loc.loc.nil/constraint)`` with the
location vector matching the automata positionally.

Identifiers may contain ``-``, so ``X-Y`` in a constraint is read as a
single word first and split into a clock difference only when the whole
word is not itself a declared clock.

``parse_spec`` returns a validated network with constants scaled to
integers; syntax problems raise ``ParseError`` with line/column
positions, structural problems raise ``model.ValidationError``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .model import (
    Atom,
    Automaton,
    ClockConstraint,
    ClockId,
    LabelId,
    LocationId,
    Network,
    Query,
    StatePattern,
    Transition,
    normalize_constants,
    scale_constraint,
    validate,
)


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}, col {self.col}: {self.message}"


class ParseError(Exception):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(str(d) for d in diagnostics))
        self.diagnostics = diagnostics


class Token(NamedTuple):
    kind: str  # "word" | "op" | "punct" | "eof"
    text: str
    line: int
    col: int


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*)
  | (?P<word>[A-Za-z0-9_\-]+)
  | (?P<op><=|>=|<|>|=)
  | (?P<punct>[().,:/^])
    """,
    re.VERBOSE,
)

RESERVED = frozenset({"nil", "true"})


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(
                [Diagnostic(line, pos - line_start + 1, f"unexpected character {text[pos]!r}")]
            )
        kind = m.lastgroup
        piece = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, piece, line, pos - line_start + 1))
        newlines = piece.count("\n")
        if newlines:
            line += newlines
            line_start = pos + piece.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


_INT = re.compile(r"-?\d+$")
_DIGITS = re.compile(r"\d+$")


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, tok: Token, message: str):
        raise ParseError([Diagnostic(tok.line, tok.col, message)])

    def expect_word(self, what: str) -> Token:
        tok = self.advance()
        if tok.kind != "word":
            self.fail(tok, f"expected {what}, found {tok.text!r}" if tok.text else f"expected {what}, found end of input")
        return tok

    def expect_punct(self, mark: str) -> Token:
        tok = self.advance()
        if tok.kind != "punct" or tok.text != mark:
            found = repr(tok.text) if tok.text else "end of input"
            self.fail(tok, f"expected {mark!r}, found {found}")
        return tok

    def expect_keyword(self, word: str) -> Token:
        tok = self.advance()
        if tok.kind != "word" or tok.text != word:
            found = repr(tok.text) if tok.text else "end of input"
            self.fail(tok, f"expected {word!r}, found {found}")
        return tok

    # -- shared pieces --------------------------------------------------

    def identifier_list(self, what: str) -> list[Token]:
        """Words up to and including the closing ``nil``."""
        items = []
        while True:
            tok = self.expect_word(f"{what} or 'nil'")
            if tok.text == "nil":
                return items
            if tok.text in RESERVED:
                self.fail(tok, f"{tok.text!r} is reserved and cannot name a {what}")
            items.append(tok)

    def number(self) -> Fraction:
        tok = self.expect_word("a number")
        if not _INT.match(tok.text):
            self.fail(tok, f"expected a number, found {tok.text!r}")
        whole = int(tok.text)
        # A terminating decimal arrives as three tokens: digits '.' digits.
        if (
            self.peek().kind == "punct"
            and self.peek().text == "."
            and self.pos + 1 < len(self.tokens)
            and self.tokens[self.pos + 1].kind == "word"
            and _DIGITS.match(self.tokens[self.pos + 1].text)
        ):
            self.advance()
            frac_tok = self.advance()
            frac = Fraction(int(frac_tok.text), 10 ** len(frac_tok.text))
            sign = -1 if tok.text.startswith("-") else 1
            return Fraction(whole) + sign * frac
        return Fraction(whole)

    def clock_sides(self, clocks: dict[str, ClockId]) -> tuple[ClockId, Optional[ClockId]]:
        """The clock (or clock difference) on the left of a comparison.

        Hyphens are legal inside identifiers, so ``X-Y`` only denotes a
        difference when the whole word is not a declared clock but both
        halves around some hyphen are.
        """
        tok = self.expect_word("a clock")
        word = tok.text
        if word in clocks:
            lhs = clocks[word]
            nxt = self.peek()
            if nxt.kind == "word" and nxt.text == "-":
                self.advance()
                rhs_tok = self.expect_word("a clock")
                if rhs_tok.text not in clocks:
                    self.fail(rhs_tok, f"unknown clock {rhs_tok.text!r}")
                return lhs, clocks[rhs_tok.text]
            if nxt.kind == "word" and nxt.text.startswith("-") and nxt.text[1:] in clocks:
                self.advance()
                return lhs, clocks[nxt.text[1:]]
            return lhs, None
        if word.endswith("-") and word[:-1] in clocks:
            rhs_tok = self.expect_word("a clock")
            if rhs_tok.text not in clocks:
                self.fail(rhs_tok, f"unknown clock {rhs_tok.text!r}")
            return clocks[word[:-1]], clocks[rhs_tok.text]
        for cut in range(1, len(word)):
            if word[cut] == "-" and word[:cut] in clocks and word[cut + 1 :] in clocks:
                return clocks[word[:cut]], clocks[word[cut + 1 :]]
        self.fail(tok, f"unknown clock {word!r}")

    def constraint(self, clocks: dict[str, ClockId]) -> ClockConstraint:
        atoms = []
        while True:
            tok = self.peek()
            if tok.kind == "word" and tok.text == "true":
                self.advance()
                return ClockConstraint(tuple(atoms))
            lhs, rhs = self.clock_sides(clocks)
            op_tok = self.advance()
            if op_tok.kind != "op":
                found = repr(op_tok.text) if op_tok.text else "end of input"
                self.fail(op_tok, f"expected a comparison operator, found {found}")
            const = self.number()
            atoms.append(Atom(lhs, rhs, op_tok.text, const))
            self.expect_punct("^")

    def location_vector(self, what: str) -> list[Token]:
        """``loc.loc. ... .nil`` with at least one location."""
        items = []
        while True:
            tok = self.expect_word(f"{what} or 'nil'")
            if tok.text == "nil":
                if not items:
                    self.fail(tok, "a location vector needs at least one location")
                return items
            items.append(tok)
            self.expect_punct(".")

    # -- the specification ----------------------------------------------

    def specification(self) -> Network:
        self.expect_keyword("specification")
        name = self.expect_word("a specification name")
        self.expect_keyword("Clocks")
        clock_tokens = self.identifier_list("clock")
        self.expect_keyword("States")
        location_tokens = self.identifier_list("location")
        self.expect_keyword("Labels")
        label_tokens = self.identifier_list("label")

        clocks = tuple(ClockId(t.text, i) for i, t in enumerate(clock_tokens))
        locations = tuple(LocationId(t.text, i) for i, t in enumerate(location_tokens))
        labels = tuple(LabelId(t.text, i) for i, t in enumerate(label_tokens))
        clock_map = {c.name: c for c in clocks}
        location_map = {l.name: l for l in locations}
        label_map = {l.name: l for l in labels}

        def resolve_location(tok: Token) -> LocationId:
            if tok.text not in location_map:
                self.fail(tok, f"undeclared location {tok.text!r}")
            return location_map[tok.text]

        def resolve_label(tok: Token) -> LabelId:
            if tok.text not in label_map:
                self.fail(tok, f"undeclared label {tok.text!r}")
            return label_map[tok.text]

        self.expect_keyword("Automata")
        automata = []
        while True:
            tok = self.peek()
            if tok.kind == "word" and tok.text == "nil":
                self.advance()
                break
            self.expect_punct("(")
            self.expect_keyword("Locations")
            own_locations = tuple(resolve_location(t) for t in self.identifier_list("location"))
            self.expect_keyword("Labels")
            own_labels = tuple(resolve_label(t) for t in self.identifier_list("label"))
            self.expect_keyword("Invariants")
            invariants = {}
            while True:
                tok = self.peek()
                if tok.kind == "word" and tok.text == "nil":
                    self.advance()
                    break
                loc_tok = self.expect_word("a location or 'nil'")
                self.expect_punct(":")
                invariants[resolve_location(loc_tok)] = self.constraint(clock_map)
            self.expect_keyword("Transitions")
            transitions = []
            while True:
                tok = self.peek()
                if tok.kind == "word" and tok.text == "nil":
                    self.advance()
                    break
                source = resolve_location(self.expect_word("a location or 'nil'"))
                self.expect_punct(",")
                label = resolve_label(self.expect_word("a label"))
                self.expect_punct(":")
                guard = self.constraint(clock_map)
                self.expect_punct(",")
                resets = []
                for t in self.identifier_list("clock"):
                    if t.text not in clock_map:
                        self.fail(t, f"unknown clock {t.text!r}")
                    resets.append(clock_map[t.text])
                resets = tuple(resets)
                self.expect_punct(",")
                target = resolve_location(self.expect_word("a location"))
                self.expect_punct(".")
                transitions.append(Transition(source, label, guard, resets, target))
            self.expect_punct(")")
            self.expect_punct(".")
            automata.append(Automaton(own_locations, own_labels, invariants, tuple(transitions)))
        self.expect_keyword("end")
        tok = self.peek()
        if tok.kind != "eof":
            self.fail(tok, f"unexpected trailing input {tok.text!r}")
        return Network(name.text, clocks, locations, labels, tuple(automata))

    # -- queries ----------------------------------------------------------

    def query(self, net: Network) -> Query:
        self.expect_keyword("go")
        self.expect_punct("(")
        source = self.state_pattern(net)
        self.expect_punct(",")
        target = self.state_pattern(net)
        self.expect_punct(")")
        tok = self.peek()
        if tok.kind != "eof":
            self.fail(tok, f"unexpected trailing input {tok.text!r}")
        return Query(source, target)

    def state_pattern(self, net: Network) -> StatePattern:
        vector_tokens = self.location_vector("a location")
        if len(vector_tokens) != len(net.automata):
            tok = vector_tokens[0]
            self.fail(
                tok,
                f"expected {len(net.automata)} locations in the vector, "
                f"found {len(vector_tokens)}",
            )
        vector = []
        for i, tok in enumerate(vector_tokens):
            candidates = {l.name: l for l in net.automata[i].locations}
            if tok.text not in candidates:
                self.fail(tok, f"{tok.text!r} is not a location of automaton {i}")
            vector.append(candidates[tok.text])
        self.expect_punct("/")
        clock_map = {c.name: c for c in net.clocks}
        raw = self.constraint(clock_map)
        try:
            constraint = scale_constraint(raw, net)
        except ValueError as err:
            tok = self.peek()
            self.fail(tok, str(err))
        return StatePattern(tuple(vector), constraint)


def parse_spec(text: str) -> Network:
    """Parse, validate and integer-scale a network specification."""
    parser = _Parser(_tokenize(text))
    return normalize_constants(validate(parser.specification()))


def parse_query(text: str, net: Network) -> Query:
    """Parse one ``go(...)`` query against a parsed network."""
    parser = _Parser(_tokenize(text))
    return parser.query(net)


# -- printing --------------------------------------------------------------


def _decimal(value: Fraction) -> str:
    """Exact decimal rendering; only terminating fractions ever reach it."""
    if value.denominator == 1:
        return str(value.numerator)
    k = 1
    while (10**k) % value.denominator:
        k += 1
    digits = abs(value.numerator) * (10**k) // value.denominator
    whole, frac = divmod(digits, 10**k)
    sign = "-" if value.numerator < 0 else ""
    return f"{sign}{whole}.{str(frac).zfill(k)}"


def _format_constraint(c: ClockConstraint, scale: int) -> str:
    parts = []
    for atom in c.atoms:
        left = atom.lhs.name if atom.rhs is None else f"{atom.lhs.name}-{atom.rhs.name}"
        parts.append(f"{left}{atom.op}{_decimal(Fraction(atom.const, scale))}")
    parts.append("true")
    return " ^ ".join(parts)


def _format_vector(locations) -> str:
    return ".".join(l.name for l in locations) + ".nil"


def _idlist(ids) -> str:
    return " ".join([*(x.name for x in ids), "nil"])


def pretty_print(obj, net: Network | None = None) -> str:
    """Render a ``Network`` or ``Query`` back to parsable text.

    Constants are divided back by the network scale, so parsing the
    output reproduces a structurally equal value.  Queries need the
    network for its scale.
    """
    if isinstance(obj, Query):
        if net is None:
            raise ValueError("printing a query needs the network it was parsed against")
        return (
            f"go({_format_vector(obj.source.locations)}/"
            f"{_format_constraint(obj.source.constraint, net.scale)}, "
            f"{_format_vector(obj.target.locations)}/"
            f"{_format_constraint(obj.target.constraint, net.scale)})"
        )
    if not isinstance(obj, Network):
        raise TypeError(f"cannot print {type(obj).__name__}")
    net = obj
    out = [f"specification {net.name}"]
    out.append("Clocks " + _idlist(net.clocks))
    out.append("States " + _idlist(net.locations))
    out.append("Labels " + _idlist(net.labels))
    out.append("Automata")
    for aut in net.automata:
        out.append("  ( Locations " + _idlist(aut.locations))
        out.append("    Labels " + _idlist(aut.alphabet))
        out.append("    Invariants")
        for loc in aut.locations:
            if loc in aut.invariants:
                out.append(f"      {loc.name} : {_format_constraint(aut.invariants[loc], net.scale)}")
        out.append("      nil")
        out.append("    Transitions")
        for t in aut.transitions:
            out.append(
                f"      {t.source.name} , {t.label.name} : "
                f"{_format_constraint(t.guard, net.scale)}, {_idlist(t.resets)}, {t.target.name} ."
            )
        out.append("      nil")
        out.append("  ) .")
    out.append("  nil")
    out.append("end")
    return "\n".join(out) + "\n"
