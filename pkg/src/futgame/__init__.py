"""Deterministic futures-market game engine.

Single-agent dynamic programming and an n-agent compromise-solution game over
one-period futures contracts, with exact integer money accounting.
"""

__version__ = "0.1.0"

from futgame.compromise import (
    CompromiseResult,
    PayoffTable,
    compromise_set,
    guaranteed_income,
    ideal_point,
    regret_of_profile,
    select_compromise,
    solve_game,
)
from futgame.dp import DpSolution, solve_deterministic, value_recursion
from futgame.errors import CapExceeded, InfeasibleError
from futgame.market import (
    ContractSpec,
    Exogenous,
    LinearImpact,
    MarketState,
    basis,
    step_prices,
)
from futgame.oracle import brute_force_dp, brute_force_game
from futgame.scenario import Scenario, ScenarioError, load_scenario, scenario_from_dict
from futgame.trajectory import Trajectory, check_conservation

__all__ = [
    "CapExceeded",
    "CompromiseResult",
    "ContractSpec",
    "DpSolution",
    "Exogenous",
    "InfeasibleError",
    "LinearImpact",
    "MarketState",
    "PayoffTable",
    "Scenario",
    "ScenarioError",
    "Trajectory",
    "basis",
    "brute_force_dp",
    "brute_force_game",
    "check_conservation",
    "compromise_set",
    "guaranteed_income",
    "ideal_point",
    "load_scenario",
    "regret_of_profile",
    "scenario_from_dict",
    "select_compromise",
    "solve_deterministic",
    "solve_game",
    "step_prices",
    "value_recursion",
]
