"""Stoichiometrically independent decompositions and the T-hat rank test."""

from __future__ import annotations

from dataclasses import dataclass, replace

import networkx as nx
from networkx.algorithms.isomorphism import MultiDiGraphMatcher

from .linalg import RatMatrix, rank, solve
from .model import (Decomposition, KineticSystem, Network, shared_reactants,
                    stoichiometric_matrix, t_hat_matrix, t_hat_sub)


@dataclass(frozen=True)
class IndependenceReport:
    decomposition: Decomposition
    rank_whole: int
    rank_blocks: tuple[int, ...]
    stoich_independent: bool
    t_hat_rank_whole: int | None = None
    t_hat_rank_blocks: tuple[int, ...] | None = None
    t_hat_independent: bool | None = None
    shared_reactants: tuple[int, ...] = ()

    @property
    def conditions_hold(self) -> bool:
        return self.stoich_independent and bool(self.t_hat_independent)


def _block_matrix(n_mat: RatMatrix, block) -> RatMatrix:
    return n_mat.select_columns(block)


def finest_independent_decomposition(net: Network) -> Decomposition:
    """Finest independent decomposition via the coordinate graph of a reaction basis.

    A basis of reaction vectors is picked greedily in reaction order; each
    remaining reaction is expanded in that basis and linked to every basis
    reaction with a nonzero coefficient. Connected components are the blocks.
    """
    n_mat = stoichiometric_matrix(net)
    basis: list[int] = []
    for j in range(net.r):
        if rank(_block_matrix(n_mat, basis + [j])) > len(basis):
            basis.append(j)

    g = nx.Graph()
    g.add_nodes_from(range(net.r))
    b_mat = _block_matrix(n_mat, basis)
    for j in range(net.r):
        if j in basis:
            continue
        sol = solve(b_mat, n_mat.column(j))
        assert sol is not None, "basis does not span the reaction vectors"
        used = [basis[t] for t, c in enumerate(sol.particular) if c != 0]
        g.add_edges_from((j, b) for b in used)
        g.add_edges_from(zip(used, used[1:]))

    blocks = sorted((sorted(c) for c in nx.connected_components(g)), key=lambda c: c[0])
    d = Decomposition(tuple(tuple(b) for b in blocks))
    assert verify_independence(net, d).stoich_independent
    return d


def verify_independence(net: Network, d: Decomposition) -> IndependenceReport:
    n_mat = stoichiometric_matrix(net)
    whole = rank(n_mat)
    parts = tuple(rank(_block_matrix(n_mat, b)) for b in d.blocks)
    return IndependenceReport(d, whole, parts, whole == sum(parts))


def verify_t_hat_independence(sys: KineticSystem, d: Decomposition) -> IndependenceReport:
    """Stoichiometric and T-hat ranks of ``d``; raises NotReactantDetermined without PL-RDK."""
    report = verify_independence(sys.network, d)
    whole = rank(t_hat_matrix(sys, d))
    parts = tuple(rank(t_hat_sub(sys, d, i)) for i in range(d.alpha))
    return replace(report, t_hat_rank_whole=whole, t_hat_rank_blocks=parts,
                   t_hat_independent=whole == sum(parts),
                   shared_reactants=tuple(shared_reactants(sys.network, d)))


def block_graph(net: Network, block) -> nx.MultiDiGraph:
    """Directed multigraph on the complexes of one block, one edge per reaction."""
    g = nx.MultiDiGraph()
    for j in block:
        rx = net.reactions[j]
        g.add_edge(rx.reactant, rx.product)
    return g


def subnetworks_identical(net: Network, d: Decomposition, i: int, j: int) -> bool:
    """Whether blocks i and j are isomorphic as complex-reaction graphs.

    Rate constants and kinetic orders are ignored.
    """
    gi, gj = block_graph(net, d.blocks[i]), block_graph(net, d.blocks[j])
    if gi.number_of_edges() != gj.number_of_edges() or len(gi) != len(gj):
        return False
    return MultiDiGraphMatcher(gi, gj).is_isomorphic()
