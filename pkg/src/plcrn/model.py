"""Reaction networks, power-law kinetic systems and the matrices built from them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from .linalg import RatMatrix, as_fraction, rank


class NotReactantDetermined(ValueError):
    """Raised when an operation needs PL-RDK kinetics and the system lacks it."""


@dataclass(frozen=True)
class Species:
    index: int
    name: str


@dataclass(frozen=True)
class Complex:
    """Nonnegative rational combination of species, zero terms omitted."""

    terms: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def from_mapping(cls, coefficients: Mapping[int, object]) -> "Complex":
        items = []
        for idx, c in coefficients.items():
            c = as_fraction(c)
            if c < 0:
                raise ValueError(f"negative stoichiometric coefficient {c} for species {idx}")
            if c != 0:
                items.append((int(idx), c))
        return cls(tuple(sorted(items)))

    @property
    def coefficients(self) -> dict[int, Fraction]:
        return dict(self.terms)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.terms)

    def vector(self, m: int) -> list[Fraction]:
        v = [Fraction(0)] * m
        for i, c in self.terms:
            v[i] = c
        return v

    def format(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, c in self.terms:
            parts.append(names[i] if c == 1 else f"{c} {names[i]}")
        return " + ".join(parts)


@dataclass(frozen=True)
class Reaction:
    reactant: int
    product: int
    label: str = ""

    def __post_init__(self):
        if self.reactant == self.product:
            raise ValueError(f"reaction {self.label!r}: reactant and product complexes coincide")


@dataclass(frozen=True)
class Network:
    species: tuple[Species, ...]
    complexes: tuple[Complex, ...]
    reactions: tuple[Reaction, ...]

    def __post_init__(self):
        names = [s.name for s in self.species]
        if len(set(names)) != len(names):
            raise ValueError("species names must be unique")
        if [s.index for s in self.species] != list(range(len(self.species))):
            raise ValueError("species indices must be contiguous from 0")
        if not self.reactions:
            raise ValueError("a network needs at least one reaction")
        if len(set(self.complexes)) != len(self.complexes):
            raise ValueError("duplicate complexes")
        used = set()
        for rx in self.reactions:
            for c in (rx.reactant, rx.product):
                if not 0 <= c < len(self.complexes):
                    raise ValueError(f"complex index {c} out of range")
                used.add(c)
        if used != set(range(len(self.complexes))):
            raise ValueError("every complex must appear in some reaction")
        for cx in self.complexes:
            if any(i >= len(self.species) for i in cx.support):
                raise ValueError("complex refers to an unknown species")
        labels = [rx.label for rx in self.reactions]
        if len(set(labels)) != len(labels):
            raise ValueError("reaction labels must be unique")

    @classmethod
    def build(cls, species: Sequence[str],
              reactions: Iterable[tuple[str, Mapping[int, object], Mapping[int, object]]]) -> "Network":
        """Build a network from (label, reactant map, product map) triples.

        Complexes are deduplicated and numbered by first appearance.
        """
        complexes: list[Complex] = []
        index: dict[Complex, int] = {}
        rxs = []

        def intern(mapping):
            cx = Complex.from_mapping(mapping)
            if cx not in index:
                index[cx] = len(complexes)
                complexes.append(cx)
            return index[cx]

        for label, lhs, rhs in reactions:
            a = intern(lhs)
            b = intern(rhs)
            rxs.append(Reaction(a, b, label))
        return cls(tuple(Species(i, s) for i, s in enumerate(species)), tuple(complexes), tuple(rxs))

    @property
    def m(self) -> int:
        return len(self.species)

    @property
    def n(self) -> int:
        return len(self.complexes)

    @property
    def r(self) -> int:
        return len(self.reactions)

    @property
    def species_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.species)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(rx.label for rx in self.reactions)

    def reaction_vector(self, j: int) -> list[Fraction]:
        rx = self.reactions[j]
        y = self.complexes[rx.reactant].vector(self.m)
        yp = self.complexes[rx.product].vector(self.m)
        return [b - a for a, b in zip(y, yp)]

    def format_reaction(self, j: int) -> str:
        rx = self.reactions[j]
        names = self.species_names
        return f"{self.complexes[rx.reactant].format(names)} -> {self.complexes[rx.product].format(names)}"


@dataclass(frozen=True)
class Decomposition:
    """Partition of the reaction indices ``0..r-1`` into blocks."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(j) for j in b)) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not blocks or any(not b for b in blocks):
            raise ValueError("a decomposition needs at least one block and no empty blocks")
        flat = [j for b in blocks for j in b]
        if sorted(flat) != list(range(len(flat))):
            raise ValueError("blocks must partition the reaction indices 0..r-1")

    @classmethod
    def trivial(cls, r: int) -> "Decomposition":
        return cls((tuple(range(r)),))

    @property
    def alpha(self) -> int:
        return len(self.blocks)

    @property
    def r(self) -> int:
        return sum(len(b) for b in self.blocks)

    def block_of(self, j: int) -> int:
        for i, b in enumerate(self.blocks):
            if j in b:
                return i
        raise IndexError(j)

    def labels(self, net: Network) -> list[list[str]]:
        return [[net.reactions[j].label for j in b] for b in self.blocks]


def _check_decomposition(net: Network, d: Decomposition) -> None:
    if d.r != net.r:
        raise ValueError(f"decomposition covers {d.r} reactions, network has {net.r}")


@dataclass(frozen=True)
class KineticSystem:
    """A network with power-law kinetics: rate_i(x) = k_i * prod_j x_j ** F[i, j]."""

    network: Network
    F: RatMatrix
    k: np.ndarray = field(repr=False)

    def __post_init__(self):
        k = np.array(self.k, dtype=float).reshape(-1)
        k.setflags(write=False)
        object.__setattr__(self, "k", k)
        net = self.network
        if self.F.shape != (net.r, net.m):
            raise ValueError(f"kinetic order matrix must be {net.r}x{net.m}, got {self.F.shape}")
        if k.shape != (net.r,):
            raise ValueError(f"need {net.r} rate constants, got {k.size}")
        if not np.all(np.isfinite(k)) or np.any(k <= 0):
            raise ValueError("rate constants must be finite and strictly positive")

    @classmethod
    def mass_action(cls, network: Network, k: Sequence[float]) -> "KineticSystem":
        rows = [network.complexes[rx.reactant].vector(network.m) for rx in network.reactions]
        return cls(network, RatMatrix.from_rows(rows, cols=network.m), k)

    def with_rates(self, k: Sequence[float]) -> "KineticSystem":
        return KineticSystem(self.network, self.F, k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KineticSystem):
            return NotImplemented
        return (self.network == other.network and self.F == other.F
                and np.array_equal(self.k, other.k))

    def __hash__(self):
        return hash((self.network, self.F, tuple(self.k)))


def stoichiometric_matrix(net: Network) -> RatMatrix:
    """m x r matrix whose column j is the reaction vector y' - y."""
    return RatMatrix.from_columns([net.reaction_vector(j) for j in range(net.r)], rows=net.m)


def molecularity_matrix(net: Network) -> RatMatrix:
    """m x n matrix of complex coefficients (one column per complex)."""
    return RatMatrix.from_columns([c.vector(net.m) for c in net.complexes], rows=net.m)


def incidence_matrix(net: Network) -> RatMatrix:
    """n x r matrix with -1 at the reactant and +1 at the product of each reaction."""
    cols = []
    for rx in net.reactions:
        col = [0] * net.n
        col[rx.reactant] = -1
        col[rx.product] = 1
        cols.append(col)
    return RatMatrix.from_columns(cols, rows=net.n)


def linkage_classes(net: Network) -> list[list[int]]:
    """Connected components of the undirected complex graph, ordered by smallest member."""
    g = nx.Graph()
    g.add_nodes_from(range(net.n))
    g.add_edges_from((rx.reactant, rx.product) for rx in net.reactions)
    return sorted((sorted(c) for c in nx.connected_components(g)), key=lambda c: c[0])


def deficiency(net: Network) -> int:
    delta = net.n - len(linkage_classes(net)) - rank(stoichiometric_matrix(net))
    if delta < 0:
        raise RuntimeError(f"negative deficiency {delta}; network data is inconsistent")
    return delta


def is_plrdk(sys: KineticSystem) -> bool:
    seen: dict[int, tuple] = {}
    for i, rx in enumerate(sys.network.reactions):
        row = sys.F.row(i)
        if seen.setdefault(rx.reactant, row) != row:
            return False
    return True


def _require_plrdk(sys: KineticSystem) -> None:
    if not is_plrdk(sys):
        raise NotReactantDetermined(
            "reactions sharing a reactant complex have different kinetic-order rows")


def reactant_complexes(net: Network, reactions: Iterable[int] | None = None) -> list[int]:
    """Distinct reactant complexes in order of first appearance."""
    idx = range(net.r) if reactions is None else sorted(reactions)
    out: list[int] = []
    for j in idx:
        c = net.reactions[j].reactant
        if c not in out:
            out.append(c)
    return out


def _order_row(sys: KineticSystem, complex_index: int) -> tuple[Fraction, ...]:
    for i, rx in enumerate(sys.network.reactions):
        if rx.reactant == complex_index:
            return sys.F.row(i)
    raise ValueError(f"complex {complex_index} is not a reactant")


def t_matrix(sys: KineticSystem) -> tuple[RatMatrix, list[int]]:
    """Kinetic-order vectors as columns, one per distinct reactant complex."""
    _require_plrdk(sys)
    cols = reactant_complexes(sys.network)
    return RatMatrix.from_columns([_order_row(sys, c) for c in cols], rows=sys.network.m), cols


def t_hat_columns(net: Network, d: Decomposition) -> list[tuple[int, int]]:
    """(block, reactant complex) pairs indexing the columns of the global T-hat.

    A complex that is a reactant in several blocks gets one column per block,
    so the global matrix is the column concatenation of the block matrices.
    """
    _check_decomposition(net, d)
    pairs: list[tuple[int, int]] = []
    for j, rx in enumerate(net.reactions):
        p = (d.block_of(j), rx.reactant)
        if p not in pairs:
            pairs.append(p)
    return pairs


def shared_reactants(net: Network, d: Decomposition) -> list[int]:
    """Reactant complexes that occur as reactants in more than one block."""
    blocks: dict[int, set[int]] = {}
    for b, c in t_hat_columns(net, d):
        blocks.setdefault(c, set()).add(b)
    return sorted(c for c, bs in blocks.items() if len(bs) > 1)


def t_hat_matrix(sys: KineticSystem, d: Decomposition) -> RatMatrix:
    """T stacked over the block-membership rows; (m + alpha) rows."""
    _require_plrdk(sys)
    pairs = t_hat_columns(sys.network, d)
    cols = []
    for b, c in pairs:
        cols.append(list(_order_row(sys, c)) + [int(b == i) for i in range(d.alpha)])
    return RatMatrix.from_columns(cols, rows=sys.network.m + d.alpha)


def t_hat_sub(sys: KineticSystem, d: Decomposition, i: int) -> RatMatrix:
    """T restricted to the reactant complexes of block ``i`` with a row of ones appended."""
    _require_plrdk(sys)
    _check_decomposition(sys.network, d)
    if not 0 <= i < d.alpha:
        raise IndexError(f"block {i} out of range")
    cols = reactant_complexes(sys.network, d.blocks[i])
    return RatMatrix.from_columns([list(_order_row(sys, c)) + [1] for c in cols],
                                  rows=sys.network.m + 1)


def laplacian(sys: KineticSystem, reactions: Iterable[int] | None = None) -> RatMatrix:
    """Kirchhoff matrix: +k at (product, reactant), -k at (reactant, reactant).

    ``reactions`` restricts the graph to a subset of the reactions.
    """
    n = sys.network.n
    keep = range(sys.network.r) if reactions is None else reactions
    a = [[Fraction(0)] * n for _ in range(n)]
    for j in keep:
        kappa, rx = sys.k[j], sys.network.reactions[j]
        kappa = Fraction(float(kappa))
        a[rx.product][rx.reactant] += kappa
        a[rx.reactant][rx.reactant] -= kappa
    return RatMatrix.from_rows(a, cols=n)
