import random

import pytest

from futgame.dp import solve_deterministic, value_recursion
from futgame.errors import InfeasibleError
from futgame.oracle import brute_force_dp, simulate
from futgame.trajectory import check_conservation
from helpers import random_scenario, scenario_a


def test_value_recursion():
    assert value_recursion(10, [5, -2, 0]) == 15
    assert value_recursion(10, [-2]) == 8
    assert value_recursion(0, [0]) == 0
    with pytest.raises(InfeasibleError):
        value_recursion(0, [])


def test_scenario_a():
    sol = solve_deterministic(scenario_a())
    assert sol.optimal_value == 48
    assert sol.control_sequence == ((1,), (-1,))
    assert [r.wealth for r in sol.trajectory.steps] == [(14,), (33,), (48,)]
    assert sol.trajectory.terminal_efficiency == (28,)


def test_scenario_a_without_trade_requirement():
    sc = scenario_a(require_trade_at_start=False)
    sol = solve_deterministic(sc)
    assert sol.optimal_value == 48
    assert sol.control_sequence == ((1,), (-1,))
    idle_first = [simulate(sc, [((0,),), ((u,),)], (0,)) for u in (-1, 0, 1)]
    assert max(v[0] for v in idle_first) <= 34


def test_scenario_a_unaffordable():
    with pytest.raises(InfeasibleError):
        solve_deterministic(scenario_a(agents=[{"id": 0, "initial_capital": 5}]))


def test_bellman_consistency():
    rng = random.Random(7)
    for _ in range(20):
        sc = random_scenario(rng, 1, 2, 4, impact=rng.random() < 0.5)
        try:
            sol = solve_deterministic(sc)
        except InfeasibleError:
            continue
        for key, entry in sol.value_function.entries.items():
            if not entry.branches:
                continue
            for u, child, v in entry.branches:
                assert sol.value_function[child].value == v
            live = [v for _, _, v in entry.branches if v is not None]
            assert entry.value == (max(live) if live else None)


def test_replay_and_conservation_random():
    rng = random.Random(11)
    for _ in range(30):
        sc = random_scenario(rng, 1, 2, 4, impact=True)
        try:
            sol = solve_deterministic(sc)
        except InfeasibleError:
            continue
        check_conservation(sol.trajectory, sc)
        joints = [(u,) for u in sol.control_sequence]
        assert simulate(sc, joints, (0,)) == (sol.optimal_value,)
        assert all(w[0] >= 0 for w in (r.wealth for r in sol.trajectory.steps[:-1]))


def test_monotone_in_capital():
    rng = random.Random(3)
    for _ in range(15):
        sc = random_scenario(rng, 1, 2, 3)
        values = []
        for k in (0, 10, 25, 60, 120):
            try:
                values.append(solve_deterministic(
                    sc.replace(agents=[{"id": 0, "initial_capital": k}])).optimal_value)
            except InfeasibleError:
                values.append(None)
        feasible = [v for v in values if v is not None]
        assert feasible == sorted(feasible)
        # once feasible, stays feasible
        if None in values and feasible:
            assert values.index(feasible[0]) > max(i for i, v in enumerate(values) if v is None)


def test_others_policy_moves_prices():
    sc = scenario_a(
        agents=[{"id": 0, "initial_capital": 20}, {"id": 1, "initial_capital": 20}],
        operator={"kind": "linear_impact", "alpha": [3], "drift": [0], "floor": [1]},
        initial_prices=[100],
    )
    pushing = [((0,), (1,)), ((0,), (1,))]
    sol = solve_deterministic(sc, 0, pushing)
    ref = brute_force_dp(sc, 0, pushing)
    assert (sol.optimal_value, sol.control_sequence) == (ref.optimal_value, ref.control_sequence)
    assert sol.trajectory.steps[0].joint[1] == (1,)
