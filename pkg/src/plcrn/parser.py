"""Line-oriented ``.crn`` reaction network format.

::

    # pre-industrial carbon cycle
    species X1 X2 X3
    reaction R1: X1 + 2 X2 -> 2 X1 + X2 ; k = 1
    reaction R3: X2 <=> X3 ; k = 1, 2
    orders R1: X1 = 1, X2 = 1/2

``<=>`` expands to a forward reaction with the given label and a backward
reaction labelled ``<label>_rev``. Reactions without an ``orders`` line get
mass-action kinetic orders; species missing from an ``orders`` line get 0.
See docs/crn_format.md for the full grammar.
"""

from __future__ import annotations

import math
import re
import warnings
from fractions import Fraction
from os import PathLike

from .linalg import RatMatrix
from .model import KineticSystem, Network, is_plrdk


class CrnParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class CrnSyntaxError(CrnParseError):
    pass


class DuplicateLabel(CrnParseError):
    pass


class UnknownSpecies(CrnParseError):
    pass


class UnknownReaction(CrnParseError):
    pass


class NonPositiveRate(CrnParseError):
    pass


class PlrdkWarning(UserWarning):
    """Reactions with the same reactant complex carry different kinetic orders."""


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_COEF = re.compile(r"\d+(?:\.\d+)?(?:/\d+)?")
_ORDER = re.compile(r"[+-]?\d+(?:\.\d+)?(?:/\d+)?")
_FLOAT = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


class _Line:
    def __init__(self, text: str, lineno: int):
        self.text = text
        self.lineno = lineno
        self.pos = 0

    def error(self, msg: str, cls=CrnSyntaxError, pos: int | None = None):
        return cls(msg, self.lineno, (self.pos if pos is None else pos) + 1)

    def ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.ws()
        return self.pos >= len(self.text)

    def peek(self, literal: str) -> bool:
        self.ws()
        return self.text.startswith(literal, self.pos)

    def expect(self, literal: str) -> None:
        if not self.peek(literal):
            raise self.error(f"expected {literal!r}")
        self.pos += len(literal)

    def match(self, pattern: re.Pattern, what: str) -> tuple[str, int]:
        self.ws()
        mo = pattern.match(self.text, self.pos)
        if not mo:
            raise self.error(f"expected {what}")
        start = self.pos
        self.pos = mo.end()
        return mo.group(0), start


class _Reaction:
    def __init__(self, label, lhs, rhs, k, lineno, col):
        self.label, self.lhs, self.rhs, self.k = label, lhs, rhs, k
        self.lineno, self.col = lineno, col


def _parse_complex(ln: _Line, species: dict[str, int]) -> dict[int, Fraction]:
    ln.ws()
    mo = _COEF.match(ln.text, ln.pos)
    if mo and mo.group(0) == "0" and not _IDENT.match(ln.text[mo.end():].lstrip(" \t")):
        ln.pos = mo.end()
        return {}
    terms: dict[int, Fraction] = {}
    while True:
        ln.ws()
        coef = Fraction(1)
        if _COEF.match(ln.text, ln.pos):
            tok, _ = ln.match(_COEF, "coefficient")
            coef = Fraction(tok)
        name, start = ln.match(_IDENT, "species name")
        if name not in species:
            raise ln.error(f"unknown species {name!r}", UnknownSpecies, start)
        idx = species[name]
        terms[idx] = terms.get(idx, Fraction(0)) + coef
        if not ln.peek("+"):
            return {i: q for i, q in terms.items() if q != 0}
        ln.expect("+")


def _parse_rate(ln: _Line) -> float:
    tok, start = ln.match(_FLOAT, "rate constant")
    value = float(tok)
    if not value > 0 or not math.isfinite(value):
        raise ln.error(f"rate constant must be positive, got {tok}", NonPositiveRate, start)
    return value


def parse_network(text: str) -> KineticSystem:
    """Parse ``.crn`` source into a validated :class:`KineticSystem`."""
    species: dict[str, int] = {}
    reactions: list[_Reaction] = []
    orders: list[tuple[_Line, str, int, list[tuple[str, int, Fraction]]]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        ln = _Line(body, lineno)
        if ln.at_end():
            continue
        kw, _ = ln.match(_IDENT, "a statement keyword")
        if kw == "species":
            if ln.at_end():
                raise ln.error("species statement needs at least one name")
            while not ln.at_end():
                name, start = ln.match(_IDENT, "species name")
                if name in species:
                    raise ln.error(f"species {name!r} declared twice", DuplicateLabel, start)
                species[name] = len(species)
        elif kw == "reaction":
            label, lcol = ln.match(_IDENT, "reaction label")
            ln.expect(":")
            lhs = _parse_complex(ln, species)
            if ln.peek("<=>"):
                ln.expect("<=>")
                reversible = True
            elif ln.peek("->"):
                ln.expect("->")
                reversible = False
            else:
                raise ln.error("expected '->' or '<=>'")
            rhs = _parse_complex(ln, species)
            if lhs == rhs:
                raise ln.error("reactant and product complexes are identical", pos=lcol)
            ks = [1.0, 1.0] if reversible else [1.0]
            if not ln.at_end():
                ln.expect(";")
                ln.expect("k")
                ln.expect("=")
                ks[0] = _parse_rate(ln)
                if reversible:
                    ln.expect(",")
                    ks[1] = _parse_rate(ln)
            if not ln.at_end():
                raise ln.error("unexpected trailing text")
            reactions.append(_Reaction(label, lhs, rhs, ks[0], lineno, lcol + 1))
            if reversible:
                reactions.append(_Reaction(label + "_rev", rhs, lhs, ks[1], lineno, lcol + 1))
        elif kw == "orders":
            label, lcol = ln.match(_IDENT, "reaction label")
            ln.expect(":")
            entries = []
            while True:
                name, start = ln.match(_IDENT, "species name")
                if name not in species:
                    raise ln.error(f"unknown species {name!r}", UnknownSpecies, start)
                if any(e[0] == name for e in entries):
                    raise ln.error(f"species {name!r} listed twice", pos=start)
                ln.expect("=")
                tok, _ = ln.match(_ORDER, "rational kinetic order")
                entries.append((name, start, Fraction(tok)))
                if ln.at_end():
                    break
                ln.expect(",")
            orders.append((ln, label, lcol, entries))
        else:
            raise ln.error(f"unknown statement {kw!r}", pos=0)

    if not reactions:
        raise CrnSyntaxError("no reactions declared", len(text.splitlines()) or 1, 1)
    seen: dict[str, _Reaction] = {}
    for rx in reactions:
        if rx.label in seen:
            raise DuplicateLabel(f"duplicate reaction label {rx.label!r}", rx.lineno, rx.col)
        seen[rx.label] = rx

    net = Network.build(list(species), [(rx.label, rx.lhs, rx.rhs) for rx in reactions])
    rows = [net.complexes[r.reactant].vector(net.m) for r in net.reactions]
    position = {label: j for j, label in enumerate(net.labels)}
    done: set[str] = set()
    for ln, label, lcol, entries in orders:
        if label not in position:
            raise UnknownReaction(f"orders for undeclared reaction {label!r}", ln.lineno, lcol + 1)
        if label in done:
            raise DuplicateLabel(f"second orders statement for {label!r}", ln.lineno, lcol + 1)
        done.add(label)
        row = [Fraction(0)] * net.m
        for name, _, value in entries:
            row[species[name]] = value
        rows[position[label]] = row

    sys = KineticSystem(net, RatMatrix.from_rows(rows, cols=net.m), [rx.k for rx in reactions])
    if not is_plrdk(sys):
        warnings.warn("kinetics is not reactant-determined; T-matrix based checks will fail",
                      PlrdkWarning, stacklevel=2)
    return sys


def load_network(path: str | PathLike) -> KineticSystem:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_complex(net: Network, c: int) -> str:
    terms = net.complexes[c].terms
    if not terms:
        return "0"
    names = net.species_names
    return " + ".join(names[i] if q == 1 else f"{_fmt_rational(q)} {names[i]}" for i, q in terms)


def serialize_network(sys: KineticSystem) -> str:
    """Render a system as ``.crn`` text that parses back to an equal system."""
    net = sys.network
    out = ["species " + " ".join(net.species_names)]
    for j, rx in enumerate(net.reactions):
        out.append(f"reaction {rx.label}: {_fmt_complex(net, rx.reactant)} -> "
                   f"{_fmt_complex(net, rx.product)} ; k = {float(sys.k[j])!r}")
    for j, rx in enumerate(net.reactions):
        row = sys.F.row(j)
        if list(row) == net.complexes[rx.reactant].vector(net.m):
            continue
        names = net.species_names
        entries = [f"{names[i]} = {_fmt_rational(q)}" for i, q in enumerate(row) if q != 0]
        if not entries:
            entries = [f"{names[0]} = 0"]
        out.append(f"orders {rx.label}: " + ", ".join(entries))
    return "\n".join(out) + "\n"
