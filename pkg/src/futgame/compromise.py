"""Compromise-solution selection and the backward-procedure game solver.

For a table of profiles with payoff vectors, the ideal point holds each
agent's best payoff over all profiles, a profile's regret is the largest
shortfall from that ideal, and the compromise set is the profiles of minimum
regret. When several profiles tie, one is picked by a deterministic rule.

The game is solved node by node from the horizon backwards: every joint
control at a node is scored with the payoff vector already chosen in its
subgame, and the compromise pick at the root chains down into a single
trajectory.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from futgame.errors import InfeasibleError
from futgame.market import JointControl, MarketState, step_prices
from futgame.scenario import Scenario
from futgame.trajectory import (
    CompromiseDiagnostics,
    Trajectory,
    check_conservation,
    replay,
)
from futgame.wealth import (
    AgentState,
    admissible_controls,
    entry_cost,
    settlement_revenue,
    step_wealth,
    terminal_wealth,
)


@dataclass(frozen=True)
class PayoffTable:
    profiles: tuple
    payoffs: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.profiles) != len(self.payoffs):
            raise ValueError("one payoff vector per profile is required")
        widths = {len(p) for p in self.payoffs}
        if len(widths) > 1:
            raise ValueError("payoff vectors must all have the same length")

    def __len__(self) -> int:
        return len(self.payoffs)


@dataclass(frozen=True)
class CompromiseResult:
    ideal_point: tuple[int, ...]
    regrets: tuple[int, ...]
    set_indices: tuple[int, ...]
    selected: int | None = None


def ideal_point(table: PayoffTable) -> tuple[int, ...]:
    if not len(table):
        raise ValueError("empty payoff table")
    return tuple(max(column) for column in zip(*table.payoffs))


def regret_of_profile(payoffs: Sequence[int], ideal: Sequence[int]) -> int:
    if len(payoffs) != len(ideal):
        raise ValueError("payoff and ideal vectors differ in length")
    return max(m - w for m, w in zip(ideal, payoffs))


def compromise_set(table: PayoffTable) -> CompromiseResult:
    ideal = ideal_point(table)
    regrets = tuple(regret_of_profile(w, ideal) for w in table.payoffs)
    best = min(regrets)
    members = tuple(k for k, r in enumerate(regrets) if r == best)
    return CompromiseResult(ideal_point=ideal, regrets=regrets, set_indices=members)


def _rank(rule: str, payoff: Sequence[int], ideal: Sequence[int], index: int) -> tuple:
    if rule == "leximin_regret":
        shortfalls = sorted((m - w for m, w in zip(ideal, payoff)), reverse=True)
        return (tuple(-d for d in shortfalls), sum(payoff), -index)
    if rule == "maximin":
        return (min(payoff), sum(payoff), -index)
    if rule == "utilitarian":
        return (sum(payoff), min(payoff), -index)
    if rule == "canonical":
        return (-index,)
    raise ValueError(f"unknown tie-break rule {rule!r}")


def select_compromise(
    result: CompromiseResult, table: PayoffTable, rule: str = "leximin_regret"
) -> int:
    """Pick one member of the compromise set.

    Members already share the same worst shortfall from the ideal point. The
    default ``leximin_regret`` rule then compares the remaining shortfalls
    from worst to best, then prefers the larger payoff total, then the
    earliest profile in canonical order. Every stage is unchanged by adding a
    constant to one agent's payoffs or by scaling all payoffs by a positive
    factor.

    ``maximin`` ranks by the raw payoff of the worst-off agent, then total,
    then order; it is not shift-invariant. ``utilitarian`` ranks by total
    first and ``canonical`` by order alone.
    """
    if not result.set_indices:
        raise ValueError("empty compromise set")
    ideal = result.ideal_point
    return max(
        result.set_indices, key=lambda k: _rank(rule, table.payoffs[k], ideal, k)
    )


def compromise(table: PayoffTable, rule: str = "leximin_regret") -> CompromiseResult:
    result = compromise_set(table)
    chosen = select_compromise(result, table, rule)
    return CompromiseResult(result.ideal_point, result.regrets, result.set_indices, chosen)


@dataclass(frozen=True)
class _Node:
    """A solved decision node; ``joint`` and ``child`` are None at the horizon."""

    state: MarketState
    payoff: tuple[int, ...]
    joint: JointControl | None = None
    child: "_Node | None" = None
    table: PayoffTable | None = None
    result: CompromiseResult | None = None


class _GameSolver:
    def __init__(self, scenario: Scenario) -> None:
        self.sc = scenario
        self.memo: dict[tuple, _Node | None] = {}

    def candidates(self, state, capitals, settles) -> list[tuple[JointControl, tuple[int, ...]]]:
        """Joint controls in canonical order with each agent's resulting wealth."""
        sc = self.sc
        per_agent = []
        idle = (0,) * sc.n_contracts
        for capital, settle in zip(capitals, settles):
            per_agent.append(
                admissible_controls(
                    AgentState(capital, idle), settle, sc.contracts,
                    is_first_step=(state.step == 1),
                    require_trade_at_start=sc.require_trade_at_start,
                )
            )
        out = []
        for joint in itertools.product(*per_agent):
            wealth = tuple(
                step_wealth(capital, settle, entry_cost(u, sc.contracts))
                for capital, settle, u in zip(capitals, settles, joint)
            )
            out.append((tuple(joint), wealth))
        return out

    def settle_all(self, state, prev, held) -> tuple[int, ...]:
        if prev is None:
            return (0,) * self.sc.n_agents
        return tuple(settlement_revenue(h, prev, state, self.sc.contracts) for h in held)

    def child_state(self, state: MarketState, joint: JointControl) -> MarketState:
        sc = self.sc
        return step_prices(state, joint, sc.operator, sc.horizon_f, sc.cash_path)

    def solve(self, state, prev, capitals, held) -> _Node | None:
        key = (state.step, state.prices, prev.prices if prev else None, capitals, held)
        if key not in self.memo:
            self.memo[key] = self._solve(state, prev, capitals, held)
        return self.memo[key]

    def _solve(self, state, prev, capitals, held) -> _Node | None:
        sc = self.sc
        settles = self.settle_all(state, prev, held)
        if state.step == sc.horizon_f:
            final = tuple(terminal_wealth(c, s) for c, s in zip(capitals, settles))
            if sc.enforce_terminal_nonneg and min(final) < 0:
                return None
            return _Node(state=state, payoff=final)
        children = [
            (joint, self.solve(self.child_state(state, joint), state, wealth, joint))
            for joint, wealth in self.candidates(state, capitals, settles)
        ]
        return self.resolve(state, children)

    def resolve(self, state, children) -> _Node | None:
        live = [(joint, node) for joint, node in children if node is not None]
        if not live:
            return None
        table = PayoffTable(
            profiles=tuple(j for j, _ in live), payoffs=tuple(n.payoff for _, n in live)
        )
        result = compromise(table, self.sc.tie_break)
        joint, node = live[result.selected]
        return _Node(state=state, payoff=node.payoff, joint=joint, child=node,
                     table=table, result=result)


def _solve_root(scenario: Scenario, workers: int) -> _Node:
    solver = _GameSolver(scenario)
    state = scenario.initial_state()
    capitals = scenario.capitals
    cands = solver.candidates(state, capitals, (0,) * scenario.n_agents)

    def branch(item):
        joint, wealth = item
        # each branch gets its own memo so no state is shared between threads
        return joint, _GameSolver(scenario).solve(
            solver.child_state(state, joint), state, wealth, joint
        )

    if workers > 1 and len(cands) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            children = list(pool.map(branch, cands))
    else:
        children = [
            (joint, solver.solve(solver.child_state(state, joint), state, wealth, joint))
            for joint, wealth in cands
        ]
    root = solver.resolve(state, children)
    if root is None:
        raise InfeasibleError("no feasible joint control at the first step")
    return root


def root_table(scenario: Scenario) -> tuple[PayoffTable, CompromiseResult]:
    """The first-step payoff table (continuation payoffs) and its compromise."""
    root = _solve_root(scenario, workers=1)
    return root.table, root.result


def solve_game(scenario: Scenario, workers: int = 1) -> Trajectory:
    """Solve the multi-step game by backward compromise selection.

    Args:
        scenario: Validated scenario; its ``tie_break`` picks the selection rule.
        workers: Threads used to evaluate first-step branches. The result does
            not depend on this value.

    Returns:
        The selected trajectory with per-step compromise diagnostics.

    Raises:
        InfeasibleError: if no first-step joint control leads to a feasible end.
    """
    root = _solve_root(scenario, workers)
    joints, diags = [], []
    node = root
    while node.joint is not None:
        joints.append(node.joint)
        diags.append(
            CompromiseDiagnostics(
                step=node.state.step,
                ideal_point=node.result.ideal_point,
                regrets=node.result.regrets,
                set_indices=node.result.set_indices,
                selected=node.result.selected,
                selected_payoff=node.payoff,
                profiles=node.table.profiles,
                payoffs=node.table.payoffs,
            )
        )
        node = node.child
    traj = replay(scenario, joints, diagnostics=diags)
    check_conservation(traj, scenario)
    if traj.terminal_wealth != root.payoff:
        raise AssertionError("replayed payoffs differ from the backward pass")
    return traj


@dataclass(frozen=True)
class GuaranteedIncome:
    realized: tuple[int, ...]
    literal: tuple[int, ...]


def guaranteed_income(scenario: Scenario, trajectory: Trajectory) -> GuaranteedIncome:
    """Per-agent income guarantees for a solved trajectory.

    ``realized`` is the terminal wealth on the compromise trajectory.
    ``literal`` is capital entering the last step plus, over the profiles
    available at the last decision node, the minimum of the largest
    settlement any agent receives.
    """
    realized = trajectory.terminal_wealth
    if not trajectory.diagnostics or not trajectory.diagnostics[-1].profiles:
        return GuaranteedIncome(realized=realized, literal=realized)
    last = trajectory.diagnostics[-1]
    rec = trajectory.steps[last.step - 1]
    capital_before_horizon = rec.wealth
    worst = None
    for joint in last.profiles:
        nxt = step_prices(rec.state, joint, scenario.operator, scenario.horizon_f)
        settles = [
            settlement_revenue(joint[i], rec.state, nxt, scenario.contracts)
            for i in trajectory.agents
        ]
        top = max(settles)
        worst = top if worst is None else min(worst, top)
    return GuaranteedIncome(
        realized=realized, literal=tuple(k + worst for k in capital_before_horizon)
    )
