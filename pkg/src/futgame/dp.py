"""Finite-horizon dynamic programming for one agent against fixed opponents.

The state at step ``k`` is the market price vector, the previous price vector
(needed to settle the open position), the agent's free capital and the
position opened at ``k - 1``. Values are the best terminal wealth reachable
from a state; they are filled by a memoized depth-first pass from the initial
state, which visits exactly the reachable states.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from futgame.errors import InfeasibleError
from futgame.market import Control, JointControl, MarketState, step_prices
from futgame.scenario import Scenario
from futgame.trajectory import Trajectory, check_conservation, replay
from futgame.wealth import (
    AgentState,
    admissible_controls,
    entry_cost,
    settlement_revenue,
    step_wealth,
    terminal_wealth,
    zero_control,
)

StateKey = tuple  # (step, prices, prev_prices | None, free_capital, open_position)


@dataclass(frozen=True)
class ValueEntry:
    value: int | None
    argmax: Control | None
    # (control, successor key, successor value); infeasible successors have value None
    branches: tuple[tuple[Control, StateKey, int | None], ...] = ()


@dataclass
class ValueFunction:
    entries: dict[StateKey, ValueEntry] = field(default_factory=dict)

    def __getitem__(self, key: StateKey) -> ValueEntry:
        return self.entries[key]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class DpSolution:
    optimal_value: int
    control_sequence: tuple[Control, ...]
    trajectory: Trajectory
    value_function: ValueFunction


def value_recursion(prior_value: int, deltas: Iterable[int]) -> int:
    """Best value over a step: prior value plus the largest admissible increment."""
    deltas = list(deltas)
    if not deltas:
        raise InfeasibleError("no admissible control at this node")
    return prior_value + max(deltas)


def default_policy(scenario: Scenario) -> list[JointControl]:
    idle = tuple(zero_control(scenario.n_contracts) for _ in scenario.agents)
    return [idle] * (scenario.horizon_f - 1)


def _substitute(joint: JointControl, agent_index: int, control: Control) -> JointControl:
    return joint[:agent_index] + (control,) + joint[agent_index + 1 :]


def solve_deterministic(
    scenario: Scenario,
    agent_index: int = 0,
    others_policy: Sequence[JointControl] | None = None,
) -> DpSolution:
    """Maximize one agent's terminal wealth with the other agents' controls fixed.

    Args:
        scenario: Validated scenario.
        agent_index: The focal agent.
        others_policy: One joint control per decision step; the focal agent's
            slot is overwritten. Defaults to every other agent idle.

    Returns:
        The optimal value and the canonically smallest maximizing sequence.

    Raises:
        InfeasibleError: if no control sequence is feasible.
    """
    f = scenario.horizon_f
    contracts = scenario.contracts
    if not 0 <= agent_index < scenario.n_agents:
        raise IndexError(f"agent_index {agent_index} out of range")
    policy = list(others_policy) if others_policy is not None else default_policy(scenario)
    if len(policy) != f - 1:
        raise ValueError(f"others_policy must cover {f - 1} steps, got {len(policy)}")
    vf = ValueFunction()

    def visit(state: MarketState, prev: MarketState | None, capital: int, held: Control) -> StateKey:
        k = state.step
        key = (k, state.prices, prev.prices if prev else None, capital, held)
        if key in vf.entries:
            return key
        settle = settlement_revenue(held, prev, state, contracts) if prev else 0

        if k == f:
            w = terminal_wealth(capital, settle)
            feasible = w >= 0 or not scenario.enforce_terminal_nonneg
            vf.entries[key] = ValueEntry(value=w if feasible else None, argmax=None)
            return key

        controls = admissible_controls(
            AgentState(capital, held), settle, contracts,
            is_first_step=(k == 1),
            require_trade_at_start=scenario.require_trade_at_start,
        )
        branches = []
        for u in controls:
            joint = _substitute(policy[k - 1], agent_index, u)
            nxt = step_prices(state, joint, scenario.operator, f, scenario.cash_path)
            w = step_wealth(capital, settle, entry_cost(u, contracts))
            child = visit(nxt, state, w, u)
            branches.append((u, child, vf.entries[child].value))

        live = [(u, v) for u, _, v in branches if v is not None]
        if not live:
            vf.entries[key] = ValueEntry(value=None, argmax=None, branches=tuple(branches))
            return key
        value = value_recursion(capital, (v - capital for _, v in live))
        # controls come in canonical order, so the first maximizer is the smallest
        argmax = next(u for u, v in live if v == value)
        vf.entries[key] = ValueEntry(value=value, argmax=argmax, branches=tuple(branches))
        return key

    root = visit(scenario.initial_state(), None, scenario.agents[agent_index].initial_capital,
                 zero_control(scenario.n_contracts))
    if vf[root].value is None:
        raise InfeasibleError(f"agent {agent_index}: no feasible control sequence")

    sequence = []
    key = root
    while vf[key].argmax is not None:
        entry = vf[key]
        sequence.append(entry.argmax)
        key = next(child for u, child, _ in entry.branches if u == entry.argmax)

    joints = [_substitute(policy[k], agent_index, u) for k, u in enumerate(sequence)]
    traj = replay(scenario, joints, agents=(agent_index,))
    check_conservation(traj, scenario)
    if traj.terminal_wealth[0] != vf[root].value:
        raise AssertionError("replayed terminal wealth differs from the DP value")
    return DpSolution(
        optimal_value=vf[root].value,
        control_sequence=tuple(sequence),
        trajectory=traj,
        value_function=vf,
    )
