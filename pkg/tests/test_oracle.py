import random

import pytest

from futgame.compromise import solve_game
from futgame.errors import CapExceeded, InfeasibleError
from futgame.oracle import brute_force_dp, brute_force_game
from futgame.report import dumps_structured
from helpers import random_scenario, scenario_a, scenario_b


def test_brute_force_dp_scenario_a():
    sol = brute_force_dp(scenario_a())
    assert sol.optimal_value == 48
    assert sol.control_sequence == ((1,), (-1,))


def test_brute_force_dp_infeasible():
    with pytest.raises(InfeasibleError):
        brute_force_dp(scenario_a(agents=[{"id": 0, "initial_capital": 5}]))


def test_flat_prices_no_trade():
    sc = scenario_a(
        horizon_f=2,
        operator={"kind": "exogenous", "path": [[100], [100]]},
        require_trade_at_start=False,
    )
    sol = brute_force_dp(sc)
    assert sol.optimal_value == 20
    assert sol.control_sequence == ((0,),)


def test_cap():
    with pytest.raises(CapExceeded):
        brute_force_dp(scenario_a(), cap=8)
    with pytest.raises(CapExceeded):
        brute_force_game(scenario_b(), cap=8)


def test_brute_force_game_b():
    sc = scenario_b()
    per_step = brute_force_game(sc, "per_step")
    assert per_step.terminal_wealth == (39, 39)
    assert dumps_structured(per_step) == dumps_structured(solve_game(sc))
    normal = brute_force_game(sc, "normal_form")
    assert normal.control_sequence == per_step.control_sequence


def test_brute_force_game_a():
    assert brute_force_game(scenario_a(), "per_step").terminal_wealth == (48,)


def test_single_step_modes_agree():
    rng = random.Random(5)
    checked = 0
    for _ in range(40):
        sc = random_scenario(rng, 2, 1, 2)
        try:
            a = brute_force_game(sc, "per_step")
        except InfeasibleError:
            continue
        b = brute_force_game(sc, "normal_form")
        assert a.control_sequence == b.control_sequence
        checked += 1
    assert checked >= 10


def test_impact_games_agree_with_solver():
    rng = random.Random(21)
    for _ in range(15):
        sc = random_scenario(rng, 2, 1, 3, impact=True)
        try:
            expected = dumps_structured(brute_force_game(sc))
        except InfeasibleError:
            with pytest.raises(InfeasibleError):
                solve_game(sc)
            continue
        assert dumps_structured(solve_game(sc)) == expected


def test_three_agent_game_agrees():
    rng = random.Random(2)
    for _ in range(5):
        sc = random_scenario(rng, 3, 1, 3, impact=True)
        try:
            expected = dumps_structured(brute_force_game(sc))
        except InfeasibleError:
            continue
        assert dumps_structured(solve_game(sc)) == expected
