"""Numbered exit criteria.

Each test carries ``@pytest.mark.acceptance(number, title)``; the conftest
hook prints one ``criterion N PASS|FAIL`` line per test at the end of the run.
Run just these with ``pytest tests/test_acceptance.py -m acceptance``.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from plcrn import (Decomposition, finest_independent_decomposition, molecularity_matrix, laplacian,
                   stoichiometric_matrix, verify_independence, verify_t_hat_independence)
from plcrn.chain import ChainSpec, chain_parametrization, chain_parametrization_exact, make_chain
from plcrn.fixtures import carbon_cycle, reversible_pair, toy_system
from plcrn.model import reactant_complexes
from plcrn.steady_state import (SolverConfig, factor_map, find_common_steady_state, merge_steady_states,
                                reaction_rates, relative_residual, solve_reactions, solve_subnetwork)
from oracles import max_independent_blocks, random_network

PAIRS = Decomposition(((0, 1), (2, 3)))
ORDERS = [Fraction(v) for v in (1, -1, 2, -2, Fraction(1, 2), Fraction(1, 3), 3)]


class Clock:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def log_uniform(rng, size, lo=1e-2, hi=1e2):
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size=size))


@pytest.mark.acceptance(1, "carbon cycle T-hat ranks 4 = 2 + 2")
@pytest.mark.parametrize("f", [(1, 2, 1, 1), (Fraction(1, 2), Fraction(-3, 4), 2, Fraction(5, 3))])
def test_carbon_cycle_ranks(f):
    with Clock() as clk:
        rep = verify_t_hat_independence(carbon_cycle(f=f), PAIRS)
    assert rep.t_hat_rank_whole == 4
    assert rep.t_hat_rank_blocks == (2, 2)
    assert rep.t_hat_independent
    assert clk.elapsed < 1.0


@pytest.mark.acceptance(2, "toy network T-hat ranks 3 < 2 + 2")
def test_toy_ranks():
    with Clock() as clk:
        rep = verify_t_hat_independence(toy_system(), PAIRS)
    assert rep.t_hat_rank_whole == 3
    assert rep.t_hat_rank_blocks == (2, 2)
    assert not rep.t_hat_independent
    assert clk.elapsed < 1.0


@pytest.mark.acceptance(3, "fixtures decompose into {R1,R2},{R3,R4} with ranks (1,1) of 2")
def test_fixture_decompositions():
    for sys in (carbon_cycle(), toy_system()):
        d = finest_independent_decomposition(sys.network)
        assert d.labels(sys.network) == [["R1", "R2"], ["R3", "R4"]]
        rep = verify_independence(sys.network, d)
        assert rep.rank_whole == 2 and rep.rank_blocks == (1, 1) and rep.stoich_independent


@pytest.mark.acceptance(4, "chain closed form residual <= 1e-9 for n = 1..10 (1000 instances, < 10 s)")
def test_chain_residual_suite():
    rng = np.random.default_rng(4)
    worst = 0.0
    with Clock() as clk:
        for n in range(1, 11):
            for _ in range(100):
                f = tuple(rng.choice(ORDERS, size=n + 1))
                spec = ChainSpec(n, f, tuple(log_uniform(rng, n)), tuple(log_uniform(rng, n)))
                x = chain_parametrization(spec, float(log_uniform(rng, None)))
                worst = max(worst, relative_residual(make_chain(spec), x))
    assert worst <= 1e-9
    assert clk.elapsed < 10.0


@pytest.mark.acceptance(5, "mass-action chain closed form is exact in rational arithmetic (n <= 10)")
def test_mass_action_exact():
    rng = np.random.default_rng(5)
    for n in range(1, 11):
        # dyadic rates so the float inputs are exact rationals
        k = tuple(float(v) / 8 for v in rng.integers(1, 64, size=n))
        kp = tuple(float(v) / 8 for v in rng.integers(1, 64, size=n))
        tau = Fraction(int(rng.integers(1, 20)), int(rng.integers(1, 20)))
        x = chain_parametrization_exact(ChainSpec.mass_action(k, kp), tau)
        for i in range(n + 1):
            prod = Fraction(1)
            for j in range(i, n):
                prod *= Fraction(kp[j]) / Fraction(k[j])
            assert x[i] == prod * tau
        # every reversible pair is balanced exactly, so the SFRF vanishes exactly
        for i in range(n):
            assert Fraction(k[i]) * x[i] == Fraction(kp[i]) * x[i + 1]


def _merge_trial(sys, d):
    wit = []
    for i in range(d.alpha):
        sol = solve_subnetwork(sys, d, i)
        if not sol.found:
            return False
        wit.append(sol.x)
    merged = merge_steady_states(sys, d, wit)
    if relative_residual(sys, merged.x) > 1e-8:
        return False
    theta = factor_map(sys, merged.x)
    for i, block in enumerate(d.blocks):
        tw = factor_map(sys, wit[i])
        for c in reactant_complexes(sys.network, block):
            if abs(merged.gamma[i] * tw[c] - theta[c]) > 1e-8 * theta[c]:
                return False
    return True


@pytest.mark.acceptance(6, "merging block witnesses succeeds in >= 95% of 100 trials (< 30 s)")
def test_merge_construction():
    rng = np.random.default_rng(6)
    ok = 0
    with Clock() as clk:
        for t in range(100):
            n = t % 6
            if n == 0:
                sys = carbon_cycle(k=tuple(log_uniform(rng, 4)))
            else:
                f = tuple(rng.choice(ORDERS, size=n + 1))
                sys = make_chain(ChainSpec(n, f, tuple(log_uniform(rng, n)), tuple(log_uniform(rng, n))))
            d = finest_independent_decomposition(sys.network)
            ok += _merge_trial(sys, d)
    assert ok >= 95, f"{ok}/100 trials merged"
    assert clk.elapsed < 30.0


@pytest.mark.acceptance(7, "toy network: witness iff k2/k1 = (k4/k3)^6 (50 generic rate vectors, < 60 s)")
def test_toy_existence_dichotomy():
    with Clock() as clk:
        sol = solve_reactions(toy_system(k=(1, 64, 1, 2)), cfg=SolverConfig(tol=1e-9))
        assert sol.found and sol.residual <= 1e-9

        rng = np.random.default_rng(7)
        cfg = SolverConfig(tol=1e-10, starts=64)
        hits = []
        for _ in range(50):
            k = log_uniform(rng, 4)
            sol = solve_reactions(toy_system(k=tuple(k)), cfg=cfg)
            if sol.found:
                hits.append((tuple(k), sol.residual))
    assert not hits, hits
    assert clk.elapsed < 60.0


@pytest.mark.acceptance(8, "N K(x) = Y L theta(x) to 1e-12 on all fixtures at 100 points each")
def test_dual_form():
    rng = np.random.default_rng(8)
    for sys in (carbon_cycle(k=(0.7, 1.3, 2.9, 0.4)), toy_system(k=(1.5, 0.2, 3.0, 0.8)), reversible_pair()):
        N = stoichiometric_matrix(sys.network).to_numpy()
        YL = molecularity_matrix(sys.network).to_numpy() @ laplacian(sys).to_numpy()
        for _ in range(100):
            x = log_uniform(rng, sys.network.m)
            rates = reaction_rates(sys, x)
            species_form = N @ rates
            complex_form = YL @ factor_map(sys, x)
            scale = np.abs(N) @ rates
            assert np.max(np.abs(species_form - complex_form) / scale) <= 1e-12


@pytest.mark.acceptance(9, "finest decomposition matches the exhaustive oracle on 200 random networks")
def test_decomposition_oracle():
    rng = np.random.default_rng(9)
    with Clock() as clk:
        for _ in range(200):
            net = random_network(rng, max_species=4, max_reactions=6)
            d = finest_independent_decomposition(net)
            assert verify_independence(net, d).stoich_independent
            assert d.alpha == max_independent_blocks(net)
    assert clk.elapsed < 60.0


@pytest.mark.acceptance(10, "common zeros of the block SFRFs are zeros of the whole SFRF")
def test_block_zeros_are_whole_zeros():
    for sys in (carbon_cycle(), toy_system(), reversible_pair()):
        d = finest_independent_decomposition(sys.network)
        points = 0
        for seed in range(10):
            sol = find_common_steady_state(sys, d, SolverConfig(tol=1e-12, seed=seed, starts=16))
            if not sol.found:
                continue
            if max(relative_residual(sys, sol.x, reactions=b) for b in d.blocks) > 1e-10:
                continue
            points += 1
            assert relative_residual(sys, sol.x) <= 1e-9
        assert points > 0
