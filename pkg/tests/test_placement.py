import itertools

import numpy as np
import pytest

from gbc_deploy.centrality import CandidateIndex, group_betweenness_direct
from gbc_deploy.graph import Graph, all_pairs, parse_edge_list
from gbc_deploy.oracle import all_shortest_paths, pb_enumeration_oracle
from gbc_deploy.placement import (
    DeploymentProblem,
    InternalConsistencyError,
    PlacementError,
    contribution_of,
    initial_state,
    place_to_coverage,
    two_phase_place,
    update,
)

from conftest import random_graphs, random_split


def full_state(g, deployed=()):
    idx = CandidateIndex.build(deployed, [v for v in range(g.n) if v not in deployed], g.n)
    return initial_state(all_pairs(g), idx)


def test_update_star_centre(star):
    state = update(full_state(star), 0)
    assert np.all(state.matrices.pb_m == 0)
    sm = state.matrices.sigma_m
    for x, y in itertools.permutations(range(1, 4), 2):
        assert sm[x, y] == 0
    assert state.gbc_m == pytest.approx(12)


def test_update_p3_middle(p3):
    state = update(full_state(p3), 1)
    assert state.matrices.sigma_m[0, 2] == 0
    assert state.matrices.pb_m[0, 0] == pytest.approx(0)
    spd = all_pairs(p3)
    assert state.matrices.pb_m[0, 0] == pytest.approx(
        group_betweenness_direct(p3, spd, [0, 1]) - group_betweenness_direct(p3, spd, [1])
    )


def test_update_isolated_node():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3)])
    before = update(full_state(g), 1)
    after = update(before, 4)
    assert after.gbc_m == before.gbc_m
    keep = np.ones(5, dtype=bool)
    keep[4] = False
    assert np.array_equal(after.matrices.pb_m[np.ix_(keep, keep)], before.matrices.pb_m[np.ix_(keep, keep)])
    assert np.array_equal(
        after.matrices.sigma_m[np.ix_(keep, keep)], before.matrices.sigma_m[np.ix_(keep, keep)]
    )


def test_update_does_not_mutate_input(c4):
    state = full_state(c4)
    pb = state.matrices.pb_m.copy()
    update(state, 0)
    assert np.array_equal(state.matrices.pb_m, pb)
    assert state.members == []


def test_update_errors(c4):
    idx = CandidateIndex.build([], [0, 1], 4)
    state = update(initial_state(all_pairs(c4), idx), 0)
    with pytest.raises(PlacementError) as err:
        update(state, 0)
    assert err.value.code == "V_ALREADY_EXCLUDED"
    with pytest.raises(PlacementError) as err:
        update(state, 3)
    assert err.value.code == "V_NOT_IN_INDEX"
    with pytest.raises(PlacementError):
        contribution_of(state, 3)


def test_negative_drift_is_an_error(c4):
    state = full_state(c4)
    state.matrices.pb_m[1, 2] = -1.0
    with pytest.raises(InternalConsistencyError):
        update(state, 0)


def test_two_phase_fig1(fig1):
    problem = DeploymentProblem.all_candidates(fig1, [1], budget=1)
    assert two_phase_place(problem).picks == [3]


def test_two_phase_zero_budget(fig1):
    res = two_phase_place(DeploymentProblem.all_candidates(fig1, [1], budget=0))
    assert res.picks == []
    assert res.gbc_final == res.gbc_initial
    assert res.gbc_initial == pytest.approx(group_betweenness_direct(fig1, all_pairs(fig1), [1]))


def test_two_phase_star(star):
    res = two_phase_place(DeploymentProblem.all_candidates(star, budget=1))
    assert res.picks == [0]
    assert res.marginal == pytest.approx([12])
    assert res.coverage_final == pytest.approx(1.0)


def test_problem_validation(c4):
    with pytest.raises(PlacementError) as err:
        DeploymentProblem(c4, frozenset([0]), frozenset([1]), budget=2)
    assert err.value.code == "BUDGET_EXCEEDS_CANDIDATES"
    with pytest.raises(PlacementError) as err:
        DeploymentProblem(c4, frozenset([0]), frozenset([0, 1]), budget=1)
    assert err.value.code == "OVERLAP"
    with pytest.raises(PlacementError):
        DeploymentProblem(c4, frozenset(), frozenset([0]), budget=1, coverage_target=0.5)
    with pytest.raises(PlacementError):
        DeploymentProblem(c4, frozenset(), frozenset([0]), coverage_target=1.5)


def test_coverage_zero(c4):
    res = place_to_coverage(DeploymentProblem.all_candidates(c4, coverage_target=0.0))
    assert res.picks == [] and res.target_met


def test_coverage_star(star):
    res = place_to_coverage(DeploymentProblem.all_candidates(star, coverage_target=1.0))
    assert res.picks == [0] and res.target_met


def test_coverage_c4(c4):
    spd = all_pairs(c4)
    # no single node covers all 12 ordered pairs, a pair of opposite nodes does
    assert max(group_betweenness_direct(c4, spd, [v]) for v in range(4)) < 12
    res = place_to_coverage(DeploymentProblem.all_candidates(c4, coverage_target=1.0))
    assert len(res.picks) == 2 and res.target_met
    assert res.picks == [0, 2]


def test_coverage_unreachable_target():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    res = place_to_coverage(DeploymentProblem(g, frozenset(), frozenset([0]), coverage_target=0.9))
    assert res.picks == [0]
    assert res.target_met is False


def test_contribution_of(star):
    spd = all_pairs(star)
    state = full_state(star)
    for v in range(4):
        from gbc_deploy.centrality import betweenness

        assert contribution_of(state, v) == pytest.approx(betweenness(spd, v))
    state = update(state, 0)
    assert contribution_of(state, 1) == pytest.approx(0)


def test_fig1_three_is_best_after_one(fig1):
    state = update(full_state(fig1, [1]), 1)
    gains = {v: contribution_of(state, v) for v in range(6) if v != 1}
    assert max(gains, key=gains.get) == 3


def test_incremental_invariants():
    rng = np.random.default_rng(17)
    for g in random_graphs(60, seed=99):
        spd = all_pairs(g)
        deployed, cands = random_split(g, rng)
        idx = CandidateIndex.build(deployed, cands, g.n)
        state = initial_state(spd, idx)
        tol = 1e-9 * g.n * (g.n - 1)
        paths = all_shortest_paths(g)
        pos = idx.position
        for v in [int(x) for x in rng.permutation(list(idx.nodes))]:
            old = state
            gain = contribution_of(old, v)
            state = update(old, v)
            assert state.gbc_m == pytest.approx(old.gbc_m + gain)
            assert state.gbc_m >= old.gbc_m
            direct = group_betweenness_direct(g, spd, state.members)
            assert state.gbc_m == pytest.approx(direct, rel=1e-6, abs=1e-12)
            assert np.all(state.matrices.pb_m <= old.matrices.pb_m + 1e-9)
            assert np.all(state.matrices.sigma_m <= old.matrices.sigma_m + 1e-9)
            for u in state.members:
                assert not state.matrices.pb_m[pos[u]].any()
                assert not state.matrices.pb_m[:, pos[u]].any()
                assert not state.matrices.sigma_m[pos[u]].any()
                assert not state.matrices.sigma_m[:, pos[u]].any()
            # subadditivity over a random set of the remaining nodes
            rest = [x for x in idx.nodes if x not in state.members]
            a = [x for x in rest if rng.random() < 0.5]
            joint = group_betweenness_direct(g, spd, state.members + a) - direct
            assert sum(contribution_of(state, x) for x in a) >= joint - tol
        x, y = idx.nodes[0], idx.nodes[-1]
        assert state.matrices.pb_m[pos[x], pos[y]] == pytest.approx(
            pb_enumeration_oracle(g, x, y, state.members, paths), abs=tol
        )


def test_phase_one_order_invariance():
    rng = np.random.default_rng(4)
    for g in random_graphs(30, seed=7):
        spd = all_pairs(g)
        deployed, cands = random_split(g, rng)
        idx = CandidateIndex.build(deployed, cands, g.n)
        base = initial_state(spd, idx)
        a, b = base, base
        for v in deployed:
            a = update(a, v)
        for v in reversed(deployed):
            b = update(b, v)
        assert np.allclose(a.matrices.pb_m, b.matrices.pb_m, atol=1e-9)
        assert np.allclose(a.matrices.sigma_m, b.matrices.sigma_m, atol=1e-9)


def test_determinism():
    g = random_graphs(1, seed=123)[0]
    runs = [two_phase_place(DeploymentProblem.all_candidates(g, budget=3)) for _ in range(3)]
    assert all(r.picks == runs[0].picks and r.marginal == runs[0].marginal for r in runs)


def test_result_bookkeeping():
    for g in random_graphs(20, seed=31):
        k = min(3, g.n)
        res = two_phase_place(DeploymentProblem.all_candidates(g, budget=k))
        assert res.gbc_final == pytest.approx(res.gbc_initial + sum(res.marginal), abs=1e-9 * g.n * g.n)
        assert all(m >= 0 for m in res.marginal)
        assert 0 <= res.coverage_initial <= res.coverage_final <= 1


def test_definitional_init_gives_same_picks():
    for g in random_graphs(10, seed=41):
        k = min(2, g.n)
        a = two_phase_place(DeploymentProblem.all_candidates(g, budget=k))
        b = two_phase_place(DeploymentProblem.all_candidates(g, budget=k), method="definitional")
        assert a.picks == b.picks
