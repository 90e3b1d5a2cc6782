"""Reversible chains X0 <=> X1 <=> ... <=> Xn with power-law kinetics.

Every species is the reactant of the reactions leaving it, so a single
kinetic order ``f[i]`` per species makes the system reactant-determined.
The positive steady states form the one-parameter family

    x_i = (k'_i ... k'_{n-1} / k_i ... k_{n-1}) ** (1 / f_i) * tau ** (f_n / f_i)
    x_n = tau
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .decomposition import (IndependenceReport, finest_independent_decomposition,
                            verify_t_hat_independence)
from .linalg import RatMatrix, as_fraction
from .model import KineticSystem, Network


@dataclass(frozen=True)
class ChainSpec:
    n: int
    f: tuple[Fraction, ...]
    k: tuple[float, ...]
    kp: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(as_fraction(v) for v in self.f))
        object.__setattr__(self, "k", tuple(float(v) for v in self.k))
        object.__setattr__(self, "kp", tuple(float(v) for v in self.kp))
        if self.n < 1:
            raise ValueError("a chain needs at least one reversible pair")
        if len(self.f) != self.n + 1:
            raise ValueError(f"need {self.n + 1} kinetic orders, got {len(self.f)}")
        if len(self.k) != self.n or len(self.kp) != self.n:
            raise ValueError(f"need {self.n} forward and {self.n} backward rate constants")
        if any(v == 0 for v in self.f):
            raise ValueError("kinetic orders must be nonzero")
        if any(not (v > 0 and np.isfinite(v)) for v in self.k + self.kp):
            raise ValueError("rate constants must be positive and finite")

    @classmethod
    def mass_action(cls, k: Sequence[float], kp: Sequence[float]) -> "ChainSpec":
        return cls(len(k), (1,) * (len(k) + 1), tuple(k), tuple(kp))


def make_chain(spec: ChainSpec) -> KineticSystem:
    """Reactions ordered R0, R0_rev, R1, R1_rev, ... with Ri: Xi -> X(i+1)."""
    n = spec.n
    names = [f"X{i}" for i in range(n + 1)]
    reactions, rows, k = [], [], []
    for i in range(n):
        reactions.append((f"R{i}", {i: 1}, {i + 1: 1}))
        reactions.append((f"R{i}_rev", {i + 1: 1}, {i: 1}))
        fwd = [0] * (n + 1)
        fwd[i] = spec.f[i]
        bwd = [0] * (n + 1)
        bwd[i + 1] = spec.f[i + 1]
        rows += [fwd, bwd]
        k += [spec.k[i], spec.kp[i]]
    net = Network.build(names, reactions)
    return KineticSystem(net, RatMatrix.from_rows(rows, cols=n + 1), k)


def chain_parametrization(spec: ChainSpec, tau: float) -> np.ndarray:
    """Closed-form positive steady state with ``x_n = tau``; rate products in log space."""
    if not tau > 0:
        raise ValueError("tau must be positive")
    n = spec.n
    log_ratio = np.log(spec.kp) - np.log(spec.k)
    tail = np.concatenate([np.cumsum(log_ratio[::-1])[::-1], [0.0]])
    f = np.array([float(v) for v in spec.f])
    return np.exp(tail / f + (f[n] / f) * np.log(tau))


def chain_parametrization_exact(spec: ChainSpec, tau) -> list[Fraction]:
    """Exact rational evaluation of the closed form.

    Only defined when every exponent ``1/f_i`` and ``f_n/f_i`` is an integer
    (mass action in particular); rate constants are taken at their exact
    binary values.
    """
    tau = as_fraction(tau)
    n = spec.n
    out = []
    for i in range(n + 1):
        e1, e2 = 1 / spec.f[i], spec.f[n] / spec.f[i]
        if e1.denominator != 1 or e2.denominator != 1:
            raise ValueError(f"exponents for X{i} are not integers")
        ratio = Fraction(1)
        for j in range(i, n):
            ratio *= Fraction(spec.kp[j]) / Fraction(spec.k[j])
        out.append(ratio ** int(e1) * tau ** int(e2))
    return out


def chain_t_hat_check(spec: ChainSpec) -> IndependenceReport:
    sys = make_chain(spec)
    return verify_t_hat_independence(sys, finest_independent_decomposition(sys.network))
