"""Trajectories: the per-step record produced by the solvers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from futgame.market import JointControl, MarketState, step_prices
from futgame.scenario import Scenario
from futgame.wealth import (
    commission_paid,
    efficiency,
    entry_cost,
    price_change_pnl,
    settlement_revenue,
    step_wealth,
    terminal_wealth,
    zero_control,
)


class ConservationError(AssertionError):
    """A trajectory's terminal wealth disagrees with the closed-form identity."""


@dataclass(frozen=True)
class CompromiseDiagnostics:
    step: int
    ideal_point: tuple[int, ...]
    regrets: tuple[int, ...]
    set_indices: tuple[int, ...]
    selected: int
    selected_payoff: tuple[int, ...]
    profiles: tuple[JointControl, ...] = ()
    payoffs: tuple[tuple[int, ...], ...] = ()

    @property
    def set_size(self) -> int:
        return len(self.set_indices)


@dataclass(frozen=True)
class StepRecord:
    step: int
    state: MarketState
    joint: JointControl
    wealth: tuple[int, ...]


@dataclass(frozen=True)
class Trajectory:
    """States, controls and wealths from step 1 through the horizon.

    ``agents`` lists the agent indices whose wealth is tracked (all agents for
    the game, the focal agent for single-agent DP); ``joint`` in each step
    always carries every agent's control. The last step has all-zero controls.
    """

    agents: tuple[int, ...]
    initial_capital: tuple[int, ...]
    steps: tuple[StepRecord, ...]
    diagnostics: tuple[CompromiseDiagnostics, ...] | None = None

    @property
    def terminal_wealth(self) -> tuple[int, ...]:
        return self.steps[-1].wealth

    @property
    def terminal_efficiency(self) -> tuple[int, ...]:
        return tuple(
            efficiency(w, k) for w, k in zip(self.terminal_wealth, self.initial_capital)
        )

    @property
    def control_sequence(self) -> tuple[JointControl, ...]:
        """Decision controls for steps 1..f-1."""
        return tuple(rec.joint for rec in self.steps[:-1])


def replay(
    scenario: Scenario,
    joint_sequence: Sequence[JointControl],
    agents: Sequence[int] | None = None,
    diagnostics: Sequence[CompromiseDiagnostics] | None = None,
) -> Trajectory:
    """Simulate a joint-control sequence from the scenario's initial state.

    No feasibility pruning happens here; wealths are reported as computed.
    """
    f = scenario.horizon_f
    if len(joint_sequence) != f - 1:
        raise ValueError(f"need {f - 1} joint controls, got {len(joint_sequence)}")
    agents = tuple(range(scenario.n_agents)) if agents is None else tuple(agents)
    contracts = scenario.contracts
    idle = tuple(zero_control(scenario.n_contracts) for _ in range(scenario.n_agents))

    state = scenario.initial_state()
    wealth = [scenario.agents[i].initial_capital for i in agents]
    held = [zero_control(scenario.n_contracts) for _ in agents]
    prev_state: MarketState | None = None
    steps = []
    for k in range(1, f + 1):
        joint = tuple(joint_sequence[k - 1]) if k < f else idle
        for a, i in enumerate(agents):
            settle = (
                settlement_revenue(held[a], prev_state, state, contracts)
                if prev_state is not None
                else 0
            )
            if k < f:
                wealth[a] = step_wealth(wealth[a], settle, entry_cost(joint[i], contracts))
                held[a] = joint[i]
            else:
                wealth[a] = terminal_wealth(wealth[a], settle)
        steps.append(StepRecord(step=k, state=state, joint=joint, wealth=tuple(wealth)))
        if k < f:
            prev_state = state
            state = step_prices(
                state, joint, scenario.operator, f, scenario.cash_path
            )
    return Trajectory(
        agents=agents,
        initial_capital=tuple(scenario.agents[i].initial_capital for i in agents),
        steps=tuple(steps),
        diagnostics=tuple(diagnostics) if diagnostics is not None else None,
    )


def check_conservation(trajectory: Trajectory, scenario: Scenario) -> None:
    """Verify terminal wealth = capital - commissions + price P&L, exactly.

    Margins are paid on entry and refunded on settlement, so they drop out.
    """
    contracts = scenario.contracts
    steps = trajectory.steps
    for a, i in enumerate(trajectory.agents):
        expected = trajectory.initial_capital[a]
        for t in range(len(steps) - 1):
            control = steps[t].joint[i]
            expected -= commission_paid(control, contracts)
            expected += price_change_pnl(
                control, steps[t].state.prices, steps[t + 1].state.prices, contracts
            )
        actual = trajectory.terminal_wealth[a]
        if actual != expected:
            raise ConservationError(
                f"agent {i}: terminal wealth {actual} != conserved value {expected}"
            )
