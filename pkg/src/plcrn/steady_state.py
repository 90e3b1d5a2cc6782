"""Positive steady states of power-law systems.

Numerical search happens in log coordinates ``x = exp(u)`` so every iterate
is a positive concentration vector. Residuals are measured species by
species relative to the total magnitude of the terms that feed each
species, which makes the test invariant under rescaling of the rates and
blind to the trivial ``x -> 0`` limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares

from .decomposition import (IndependenceReport, finest_independent_decomposition,
                            verify_independence, verify_t_hat_independence)
from .model import (Decomposition, KineticSystem, _require_plrdk, is_plrdk, laplacian,
                    molecularity_matrix, reactant_complexes, stoichiometric_matrix)

DEFAULT_SEED = 20240229


class NotBinomial(ValueError):
    """Block steady states are not given by a single binomial equation."""


class InconsistentSystem(ValueError):
    """The stacked log-linear system of the merge construction has no solution."""


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-10
    starts: int = 64
    max_iter: int = 200
    seed: int = DEFAULT_SEED
    box: float = 3.0


@dataclass(frozen=True)
class BlockSolution:
    found: bool
    x: np.ndarray | None
    residual: float
    start: int | None = None


@dataclass(frozen=True)
class MonomialFamily:
    """One-parameter family ``x_j = C_j * tau ** d_j``."""

    C: np.ndarray
    d: tuple[Fraction, ...]
    free_index: int | None

    def __call__(self, tau: float) -> np.ndarray:
        return self.C * np.power(float(tau), np.array([float(e) for e in self.d]))


@dataclass(frozen=True)
class MergeResult:
    x: np.ndarray
    gamma: np.ndarray
    linear_residual: float


@dataclass(frozen=True)
class Verdict:
    conditions_hold: bool
    plrdk: bool
    report: IndependenceReport
    per_block: list[BlockSolution]
    whole: str
    witness: np.ndarray | None = None
    direct: BlockSolution | None = None
    notes: list[str] = field(default_factory=list)


class _Kernel:
    """Float data for fast residual evaluation on a subset of reactions."""

    def __init__(self, sys: KineticSystem, reactions: Sequence[int] | None = None):
        idx = np.arange(sys.network.r) if reactions is None else np.asarray(sorted(reactions), dtype=int)
        N = stoichiometric_matrix(sys.network).to_numpy()[:, idx]
        active = np.any(N != 0, axis=1)
        self.N = N[active]
        self.absN = np.abs(self.N)
        self.mask = self.N != 0
        self.F = sys.F.to_numpy()[idx]
        self.logk = np.log(sys.k[idx])

    def residual(self, u: np.ndarray) -> np.ndarray:
        return self._eval(u)[0]

    def jacobian(self, u: np.ndarray) -> np.ndarray:
        return self._eval(u)[1]

    def _eval(self, u):
        E = self.logk + self.F @ u
        Emax = np.where(self.mask, E[None, :], -np.inf).max(axis=1)
        W = np.where(self.mask, np.exp(np.minimum(E[None, :] - Emax[:, None], 0.0)), 0.0)
        f = (self.N * W).sum(axis=1)
        s = (self.absN * W).sum(axis=1)
        r = f / s
        J = ((self.N - r[:, None] * self.absN) / s[:, None] * W) @ self.F
        return r, J


class _Stacked:
    def __init__(self, kernels: list[_Kernel]):
        self.kernels = kernels

    def residual(self, u):
        return np.concatenate([k.residual(u) for k in self.kernels])

    def jacobian(self, u):
        return np.vstack([k.jacobian(u) for k in self.kernels])


def reaction_rates(sys: KineticSystem, x) -> np.ndarray:
    """Power-law rates ``k_i * prod_j x_j ** F_ij``."""
    u = np.log(_positive(x, sys.network.m))
    return np.exp(np.log(sys.k) + sys.F.to_numpy() @ u)


def _positive(x, m: int) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape != (m,):
        raise ValueError(f"expected {m} concentrations, got {x.size}")
    if np.any(~(x > 0)):
        raise ValueError("concentrations must be strictly positive")
    return x


def factor_map(sys: KineticSystem, x) -> np.ndarray:
    """Monomial ``x ** F_row`` for each reactant complex, 0 for the rest."""
    _require_plrdk(sys)
    u = np.log(_positive(x, sys.network.m))
    F = sys.F.to_numpy()
    theta = np.zeros(sys.network.n)
    for i, rx in enumerate(sys.network.reactions):
        theta[rx.reactant] = np.exp(F[i] @ u)
    return theta


def sfrf(sys: KineticSystem, x, complex_form: bool = False,
         reactions: Sequence[int] | None = None) -> np.ndarray:
    """Species formation rate ``N K(x)``, or ``Y L theta(x)`` with ``complex_form``.

    ``reactions`` restricts the sum to a subset of reactions (a subnetwork
    keeps the full species vector).
    """
    net = sys.network
    if complex_form:
        Y = molecularity_matrix(net).to_numpy()
        L = laplacian(sys, reactions).to_numpy()
        return Y @ (L @ factor_map(sys, x))
    rates = reaction_rates(sys, x)
    N = stoichiometric_matrix(net).to_numpy()
    if reactions is not None:
        keep = np.zeros(net.r, dtype=bool)
        keep[list(reactions)] = True
        rates = np.where(keep, rates, 0.0)
    return N @ rates


def relative_residual(sys: KineticSystem, x, reactions: Sequence[int] | None = None) -> float:
    """max over species of |f_a(x)| / sum_i |N_ai| K_i(x); 0 for species no reaction touches."""
    kern = _Kernel(sys, reactions)
    if kern.N.shape[0] == 0:
        return 0.0
    u = np.log(_positive(x, sys.network.m))
    return float(np.max(np.abs(kern.residual(u))))


def sfrf_jacobian(sys: KineticSystem, x) -> np.ndarray:
    """Analytic ``df_a/dx_b = sum_i N_ai K_i(x) F_ib / x_b``."""
    x = _positive(x, sys.network.m)
    rates = reaction_rates(sys, x)
    N = stoichiometric_matrix(sys.network).to_numpy()
    F = sys.F.to_numpy()
    return (N * rates) @ F / x[None, :]


def _multistart(problem, m: int, cfg: SolverConfig) -> BlockSolution:
    rng = np.random.default_rng(cfg.seed)
    starts = rng.uniform(-cfg.box, cfg.box, size=(cfg.starts, m))
    best = BlockSolution(False, None, np.inf)
    for s, u0 in enumerate(starts):
        try:
            res = least_squares(problem.residual, u0, jac=problem.jacobian, method="trf",
                                xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=cfg.max_iter)
        except (ValueError, FloatingPointError):
            continue
        # starts that run off to 0 or infinity are not positive steady states
        if np.max(np.abs(res.x)) > 700:
            continue
        x = np.exp(res.x)
        if np.any(x <= 0):
            continue
        err = float(np.max(np.abs(problem.residual(res.x)))) if res.fun.size else 0.0
        if err < best.residual:
            best = BlockSolution(err <= cfg.tol, x, err, s)
        if err <= cfg.tol:
            break
    return best


def solve_reactions(sys: KineticSystem, reactions: Sequence[int] | None = None,
                    cfg: SolverConfig = SolverConfig()) -> BlockSolution:
    """Multi-start search for a positive zero of the SFRF of ``reactions``.

    Starts are drawn uniformly from ``[-box, box]^m`` in log space and
    processed in order; the first start whose relative residual is within
    ``cfg.tol`` wins, otherwise the lowest-residual attempt is returned
    with ``found=False``.
    """
    kern = _Kernel(sys, reactions)
    if kern.N.shape[0] == 0:
        return BlockSolution(True, np.ones(sys.network.m), 0.0, None)
    return _multistart(kern, sys.network.m, cfg)


def solve_subnetwork(sys: KineticSystem, d: Decomposition, i: int,
                     cfg: SolverConfig = SolverConfig()) -> BlockSolution:
    return solve_reactions(sys, d.blocks[i], cfg)


def find_common_steady_state(sys: KineticSystem, d: Decomposition,
                             cfg: SolverConfig = SolverConfig()) -> BlockSolution:
    """Search for x zeroing every block SFRF at once (stacked residuals)."""
    kernels = [k for k in (_Kernel(sys, b) for b in d.blocks) if k.N.shape[0]]
    if not kernels:
        return BlockSolution(True, np.ones(sys.network.m), 0.0, None)
    return _multistart(_Stacked(kernels), sys.network.m, cfg)


def binomial_parametrization(sys: KineticSystem, d: Decomposition, i: int) -> MonomialFamily:
    """Monomial family of positive steady states of a two-reaction binomial block.

    The block must consist of reactions a, b with ``v_b = -c v_a`` for some
    ``c > 0``; its steady states then satisfy
    ``(F_a - F_b) . ln x = ln(c k_b / k_a)``. The highest-index species with
    a nonzero exponent is the free parameter, the lowest-index one is solved
    for, and species outside the support are held at 1.
    """
    net = sys.network
    block = d.blocks[i]
    if len(block) != 2:
        raise NotBinomial(f"block {i} has {len(block)} reactions, need 2")
    a, b = block
    va, vb = net.reaction_vector(a), net.reaction_vector(b)
    piv = next(t for t, e in enumerate(va) if e != 0)
    c = -vb[piv] / va[piv]
    if c <= 0 or any(y != -c * x for x, y in zip(va, vb)):
        raise NotBinomial(f"reaction vectors of block {i} are not opposite")

    g = [p - q for p, q in zip(sys.F.row(a), sys.F.row(b))]
    log_rhs = float(np.log(float(c)) + np.log(sys.k[b]) - np.log(sys.k[a]))
    m = net.m
    support = [j for j, e in enumerate(g) if e != 0]
    C = np.ones(m)
    expo = [Fraction(0)] * m
    if not support:
        if log_rhs != 0.0:
            raise NotBinomial(f"block {i}: equal kinetic orders but inconsistent constants")
        expo[m - 1] = Fraction(1)
        return MonomialFamily(C, tuple(expo), m - 1)

    dep = support[0]
    if len(support) > 1:
        free = support[-1]
    else:
        others = [j for j in range(m) if j != dep]
        free = others[-1] if others else None
    if free is not None:
        expo[free] = Fraction(1)
    C[dep] = np.exp(log_rhs / float(g[dep]))
    if free is not None:
        expo[dep] = -g[free] / g[dep]
    return MonomialFamily(C, tuple(expo), free)


def merge_steady_states(sys: KineticSystem, d: Decomposition,
                        witnesses: Sequence[np.ndarray], tol: float = 1e-9) -> MergeResult:
    """Combine one positive steady state per block into a whole-network one.

    Solves the stacked system with one row per (block i, reactant complex y)
    ``F_y . u + w_i = ln theta_y(witness_i)`` and returns ``x = exp(u)`` with
    scalings ``gamma_i = exp(-w_i)`` so that ``gamma_i * v_i = theta_i(x)``.
    """
    _require_plrdk(sys)
    net = sys.network
    if len(witnesses) != d.alpha:
        raise ValueError(f"need {d.alpha} block witnesses, got {len(witnesses)}")
    m = net.m
    F = sys.F.to_numpy()
    rows, rhs = [], []
    for i, block in enumerate(d.blocks):
        theta = factor_map(sys, witnesses[i])
        for c in reactant_complexes(net, block):
            j = next(t for t, rx in enumerate(net.reactions) if rx.reactant == c)
            row = np.zeros(m + d.alpha)
            row[:m] = F[j]
            row[m + i] = 1.0
            rows.append(row)
            rhs.append(np.log(theta[c]))
    A, bvec = np.array(rows), np.array(rhs)
    z, *_ = np.linalg.lstsq(A, bvec, rcond=None)
    resid = float(np.linalg.norm(A @ z - bvec))
    if resid > tol * max(1.0, float(np.linalg.norm(bvec))):
        raise InconsistentSystem(f"stacked log-linear system has residual {resid:.3e}")
    return MergeResult(np.exp(z[:m]), np.exp(-z[m:]), resid)


def existence_verdict(sys: KineticSystem, cfg: SolverConfig = SolverConfig(),
                      merge_tol: float = 1e-8) -> Verdict:
    """Decide existence of positive steady states through the finest decomposition.

    ``whole`` is ``"nonempty"`` when a merged witness was checked,
    ``"no_witness_found"`` when a block search failed, and
    ``"conditions_not_met"`` when the rank conditions fail; in the last case
    a direct whole-network search is attached as ``direct``.
    """
    net = sys.network
    d = finest_independent_decomposition(net)
    plrdk = is_plrdk(sys)
    report = verify_t_hat_independence(sys, d) if plrdk else verify_independence(net, d)
    per_block = [solve_subnetwork(sys, d, i, cfg) for i in range(d.alpha)]
    notes = []
    if report.shared_reactants:
        notes.append("reactant complexes shared between blocks: "
                     + ", ".join(net.complexes[c].format(net.species_names)
                                 for c in report.shared_reactants))
    if not report.conditions_hold:
        if not plrdk:
            notes.append("kinetics is not reactant-determined")
        return Verdict(False, plrdk, report, per_block, "conditions_not_met",
                       direct=solve_reactions(sys, None, cfg), notes=notes)
    if not all(b.found for b in per_block):
        return Verdict(True, plrdk, report, per_block, "no_witness_found", notes=notes)
    try:
        merged = merge_steady_states(sys, d, [b.x for b in per_block])
    except InconsistentSystem as exc:
        notes.append(str(exc))
        return Verdict(True, plrdk, report, per_block, "no_witness_found", notes=notes)
    if relative_residual(sys, merged.x) > merge_tol:
        notes.append("merged point failed the residual check")
        return Verdict(True, plrdk, report, per_block, "no_witness_found", notes=notes)
    return Verdict(True, plrdk, report, per_block, "nonempty", witness=merged.x, notes=notes)
