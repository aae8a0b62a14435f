import random

from futgame.scenario import Scenario, scenario_from_dict

SCENARIO_A = {
    "horizon_f": 3,
    "contracts": [{"id": 0, "q": 10, "margin_m": 5, "commission_p": 1, "max_position": 1}],
    "agents": [{"id": 0, "initial_capital": 20}],
    "initial_prices": [100],
    "operator": {"kind": "exogenous", "path": [[100], [102], [101]]},
}

SCENARIO_B = {
    "horizon_f": 2,
    "contracts": [{"id": 0, "q": 10, "margin_m": 5, "commission_p": 1, "max_position": 1}],
    "agents": [{"id": 0, "initial_capital": 20}, {"id": 1, "initial_capital": 20}],
    "initial_prices": [100],
    "operator": {"kind": "exogenous", "path": [[100], [102]]},
}


def scenario_a(**changes) -> Scenario:
    return scenario_from_dict({**SCENARIO_A, **changes})


def scenario_b(**changes) -> Scenario:
    return scenario_from_dict({**SCENARIO_B, **changes})


def random_scenario(
    rng: random.Random,
    n_agents: int,
    max_contracts: int,
    max_horizon: int,
    impact: bool = False,
    max_position: int = 1,
) -> Scenario:
    s = rng.randint(1, max_contracts)
    f = rng.randint(2, max_horizon)
    contracts = [
        {
            "id": j,
            "q": rng.randint(1, 10),
            "margin_m": rng.randint(0, 10),
            "commission_p": rng.randint(0, 4),
            "max_position": max_position,
        }
        for j in range(s)
    ]
    x1 = [rng.randint(20, 120) for _ in range(s)]
    if impact:
        operator = {
            "kind": "linear_impact",
            "alpha": [rng.randint(0, 6) for _ in range(s)],
            "drift": [rng.randint(-4, 4) for _ in range(s)],
            "floor": [rng.randint(1, 15) for _ in range(s)],
        }
    else:
        path = [x1]
        for _ in range(f - 1):
            path.append([max(1, x + rng.randint(-6, 6)) for x in path[-1]])
        operator = {"kind": "exogenous", "path": path}
    return scenario_from_dict(
        {
            "horizon_f": f,
            "contracts": contracts,
            "agents": [
                {"id": i, "initial_capital": rng.randint(0, 80)} for i in range(n_agents)
            ],
            "initial_prices": x1,
            "operator": operator,
            "require_trade_at_start": rng.random() < 0.7,
            "enforce_terminal_nonneg": rng.random() < 0.8,
        }
    )
