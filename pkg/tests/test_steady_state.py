import numpy as np
import pytest

from plcrn import Decomposition, KineticSystem, Network, RatMatrix, finest_independent_decomposition
from plcrn.fixtures import carbon_cycle, reversible_pair, toy_system
from plcrn.model import reactant_complexes
from plcrn.steady_state import (InconsistentSystem, NotBinomial, SolverConfig, binomial_parametrization,
                                existence_verdict, factor_map, find_common_steady_state,
                                merge_steady_states, reaction_rates, relative_residual, sfrf,
                                sfrf_jacobian, solve_reactions, solve_subnetwork)
from oracles import direct_sfrf

PAIRS = Decomposition(((0, 1), (2, 3)))
FAST = SolverConfig(starts=16)


def test_factor_map_toy(toy):
    # complexes: 2X, X, 2Y, X+2Y, X+Y, Y
    np.testing.assert_allclose(factor_map(toy, [1, 1]), [1, 0, 1, 0, 1, 1])
    assert factor_map(toy, [8, 1])[4] == pytest.approx(2.0)


def test_reaction_rates(carbon):
    np.testing.assert_allclose(reaction_rates(carbon.with_rates([2, 3, 5, 7]), [2, 3, 4]),
                               [2 * 2 * 3, 3 * 4 * 3, 5 * 3, 7 * 4])


def test_sfrf_examples():
    np.testing.assert_allclose(sfrf(reversible_pair(k=(1, 1)), [2, 1]), [-1, 1])
    np.testing.assert_allclose(sfrf(reversible_pair(k=(2, 6)), [3, 1]), [0, 0], atol=1e-14)
    np.testing.assert_allclose(sfrf(toy_system(), [1, 1]), [0, 0], atol=1e-14)


def test_rejects_nonpositive_points(pair):
    with pytest.raises(ValueError):
        sfrf(pair, [1, 0])
    with pytest.raises(ValueError):
        sfrf(pair, [1, 1, 1])


@pytest.mark.parametrize("make", [carbon_cycle, toy_system, reversible_pair])
def test_dual_form_and_direct_oracle(make):
    sys = make()
    rng = np.random.default_rng(11)
    for _ in range(20):
        x = np.exp(rng.uniform(-2, 2, size=sys.network.m))
        f = sfrf(sys, x)
        scale = max(1.0, np.abs(f).max())
        assert np.abs(sfrf(sys, x, complex_form=True) - f).max() / scale <= 1e-12
        assert np.abs(direct_sfrf(sys, x) - f).max() / scale <= 1e-12


def test_restricted_sfrf_sums_to_whole(carbon):
    x = [0.7, 1.9, 3.1]
    parts = sum(sfrf(carbon, x, reactions=b) for b in PAIRS.blocks)
    np.testing.assert_allclose(parts, sfrf(carbon, x), rtol=1e-14)
    np.testing.assert_allclose(sfrf(carbon, x, complex_form=True, reactions=(2, 3)),
                               sfrf(carbon, x, reactions=(2, 3)), rtol=1e-13)


@pytest.mark.parametrize("make", [carbon_cycle, toy_system])
def test_jacobian_matches_finite_differences(make):
    sys = make(k=(1.3, 0.4, 2.2, 0.9))
    x = np.array([0.8, 1.7, 1.2][:sys.network.m])
    J = sfrf_jacobian(sys, x)
    h = 1e-6
    for b in range(sys.network.m):
        e = np.zeros_like(x)
        e[b] = h * x[b]
        fd = (sfrf(sys, x + e) - sfrf(sys, x - e)) / (2 * h * x[b])
        np.testing.assert_allclose(J[:, b], fd, rtol=1e-6, atol=1e-8)


def test_relative_residual_is_scale_free(pair):
    assert relative_residual(pair, [3, 1]) == pytest.approx(0.0, abs=1e-15)
    # one reaction dominating gives residual 1
    assert relative_residual(pair, [1e6, 1e-6]) == pytest.approx(1.0, abs=1e-9)


def test_solve_subnetwork_examples():
    toy = toy_system(k=(1, 4, 1, 1))
    sol = solve_subnetwork(toy, PAIRS, 0)
    assert sol.found and sol.x[0] / sol.x[1] == pytest.approx(2.0, rel=1e-8)
    sol = solve_reactions(reversible_pair(k=(2, 6)))
    assert sol.found and sol.x[0] / sol.x[1] == pytest.approx(3.0, rel=1e-8)


def test_one_way_reaction_has_no_positive_steady_state():
    net = Network.build(["X", "Y"], [("R1", {0: 1}, {1: 1})])
    sol = solve_reactions(KineticSystem.mass_action(net, [1.0]), cfg=FAST)
    assert not sol.found
    assert sol.residual == pytest.approx(1.0)


def test_solver_is_deterministic(carbon):
    a = solve_reactions(carbon, cfg=FAST)
    b = solve_reactions(carbon, cfg=FAST)
    assert a.start == b.start
    np.testing.assert_array_equal(a.x, b.x)


@pytest.mark.parametrize("block", [0, 1])
def test_binomial_families_toy(block):
    sys = toy_system(k=(1.5, 0.3, 2.0, 0.7))
    fam = binomial_parametrization(sys, PAIRS, block)
    rng = np.random.default_rng(block)
    for tau in np.exp(rng.uniform(-3, 3, size=50)):
        assert relative_residual(sys, fam(tau), reactions=PAIRS.blocks[block]) <= 1e-9


def test_binomial_family_closed_forms():
    k = (1.5, 0.3, 2.0, 0.7)
    sys = toy_system(k=k)
    # block 1: x = sqrt(k2/k1) y ; block 2: x = (k4/k3)^3 y
    x, y = binomial_parametrization(sys, PAIRS, 0)(2.0)
    assert x / y == pytest.approx(np.sqrt(k[1] / k[0]))
    x, y = binomial_parametrization(sys, PAIRS, 1)(2.0)
    assert x / y == pytest.approx((k[3] / k[2]) ** 3)


def test_binomial_rejects_non_binomial(carbon):
    with pytest.raises(NotBinomial):
        binomial_parametrization(carbon, Decomposition(((0, 1, 2, 3),)), 0)
    net = Network.build(["X", "Y", "Z"], [("a", {0: 1}, {1: 1}), ("b", {1: 1}, {2: 1})])
    with pytest.raises(NotBinomial):
        binomial_parametrization(KineticSystem.mass_action(net, [1, 1]), Decomposition(((0, 1),)), 0)


def _gamma_mismatch(sys, d, witnesses, merged):
    """max over blocks/reactant complexes of |gamma_i theta_y(w_i) - theta_y(x)| relative."""
    theta_x = factor_map(sys, merged.x)
    worst = 0.0
    for i, block in enumerate(d.blocks):
        theta_w = factor_map(sys, witnesses[i])
        for c in reactant_complexes(sys.network, block):
            worst = max(worst, abs(merged.gamma[i] * theta_w[c] - theta_x[c]) / theta_x[c])
    return worst


def test_merge_carbon_random_rates():
    rng = np.random.default_rng(5)
    for _ in range(10):
        sys = carbon_cycle(k=tuple(np.exp(rng.uniform(-2, 2, size=4))))
        wit = [solve_subnetwork(sys, PAIRS, i).x for i in range(2)]
        merged = merge_steady_states(sys, PAIRS, wit)
        assert relative_residual(sys, merged.x) <= 1e-8
        assert _gamma_mismatch(sys, PAIRS, wit, merged) <= 1e-8


def test_merge_toy_generic_is_inconsistent():
    sys = toy_system(k=(1.0, 2.0, 1.0, 3.0))
    wit = [solve_subnetwork(sys, PAIRS, i).x for i in range(2)]
    with pytest.raises(InconsistentSystem):
        merge_steady_states(sys, PAIRS, wit)


def test_merge_needs_one_witness_per_block(carbon):
    with pytest.raises(ValueError):
        merge_steady_states(carbon, PAIRS, [np.ones(3)])


@pytest.mark.parametrize("make", [carbon_cycle, reversible_pair,
                                  lambda: toy_system(k=(1, 64, 1, 2))])
def test_block_zeros_are_whole_zeros(make):
    sys = make()
    d = finest_independent_decomposition(sys.network)
    common = find_common_steady_state(sys, d)
    assert common.found
    for b in d.blocks:
        assert relative_residual(sys, common.x, reactions=b) <= 1e-10
    assert relative_residual(sys, common.x) <= 1e-9


def test_whole_zeros_are_block_zeros_when_independent():
    sys = carbon_cycle(k=(0.5, 2.0, 3.0, 0.25))
    sol = solve_reactions(sys)
    assert sol.found
    for b in PAIRS.blocks:
        assert relative_residual(sys, sol.x, reactions=b) <= 1e-8


def test_verdicts():
    v = existence_verdict(carbon_cycle(), FAST)
    assert v.conditions_hold and v.whole == "nonempty"
    assert relative_residual(carbon_cycle(), v.witness) <= 1e-8

    v = existence_verdict(reversible_pair(), FAST)
    assert v.whole == "nonempty"

    v = existence_verdict(toy_system(k=(1.0, 2.0, 1.0, 3.0)), FAST)
    assert not v.conditions_hold and v.whole == "conditions_not_met"
    assert all(b.found for b in v.per_block)
    assert not v.direct.found

    v = existence_verdict(toy_system(k=(1, 64, 1, 2)), FAST)
    assert v.whole == "conditions_not_met" and v.direct.found


def test_verdict_non_plrdk_falls_back_to_stoichiometric_check():
    net = Network.build(["A", "B"], [("R1", {0: 1}, {1: 1}), ("R2", {0: 1}, {1: 2}),
                                     ("R3", {1: 1}, {0: 1})])
    sys = KineticSystem(net, RatMatrix.from_rows([[1, 0], [2, 0], [0, 1]]), [1, 1, 1])
    v = existence_verdict(sys, FAST)
    assert not v.plrdk and v.whole == "conditions_not_met"
    assert any("reactant-determined" in n for n in v.notes)
