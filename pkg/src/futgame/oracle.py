"""Exhaustive reference solvers for small scenarios.

These enumerate the raw position grid and simulate forward. They share the
accounting formulas' inputs (contracts, operator) with the real solvers but
none of their search code: no memoization, no admissible-set helper, and
their own compromise selection in per-step mode. Agreement between the two
is the point.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from futgame.compromise import PayoffTable, compromise_set, select_compromise
from futgame.dp import DpSolution, ValueFunction, default_policy
from futgame.errors import CapExceeded, InfeasibleError
from futgame.market import MarketState, step_prices
from futgame.scenario import Scenario
from futgame.trajectory import CompromiseDiagnostics, Trajectory, replay

DEFAULT_CAP = 10**6


def _grid(scenario: Scenario) -> list[tuple[int, ...]]:
    axes = [range(-c.max_position, c.max_position + 1) for c in scenario.contracts]
    return [tuple(p) for p in itertools.product(*axes)]


def _next_prices(scenario: Scenario, step: int, prices, joint) -> tuple[int, ...]:
    state = MarketState(step=step, prices=tuple(prices))
    return step_prices(state, joint, scenario.operator, scenario.horizon_f).prices


def _cost(scenario: Scenario, u) -> int:
    return sum(abs(c) * (s.margin_m + s.commission_p) for c, s in zip(u, scenario.contracts))


def _payout(scenario: Scenario, u, p0, p1) -> int:
    return sum(
        abs(c) * s.margin_m + c * (b - a) * s.q
        for c, s, a, b in zip(u, scenario.contracts, p0, p1)
    )


def simulate(scenario: Scenario, joints, checked: Sequence[int]) -> tuple[int, ...] | None:
    """Terminal wealth of the ``checked`` agents, or None on any violation."""
    sc = scenario
    f = sc.horizon_f
    wealth = {i: sc.agents[i].initial_capital for i in checked}
    prices = tuple(sc.initial_prices)
    prev = None
    for k in range(1, f + 1):
        for i in checked:
            if prev is not None:
                wealth[i] += _payout(sc, joints[k - 2][i], prev, prices)
            if k < f:
                u = joints[k - 1][i]
                if k == 1 and sc.require_trade_at_start and not any(u):
                    return None
                wealth[i] -= _cost(sc, u)
                if wealth[i] < 0:
                    return None
            elif wealth[i] < 0 and sc.enforce_terminal_nonneg:
                return None
        if k < f:
            prev, prices = prices, _next_prices(sc, k, prices, joints[k - 1])
    return tuple(wealth[i] for i in checked)


def brute_force_dp(
    scenario: Scenario,
    agent_index: int = 0,
    others_policy=None,
    cap: int = DEFAULT_CAP,
) -> DpSolution:
    """Try every control sequence for one agent and keep the best.

    Ties go to the lexicographically smallest sequence, which is the order the
    enumeration produces, so only a strictly better value replaces the incumbent.
    """
    f = scenario.horizon_f
    n = scenario.n_agents
    grid = _grid(scenario)
    total = len(grid) ** (f - 1)
    if total > cap:
        raise CapExceeded(f"{total} sequences exceed cap {cap}")
    policy = list(others_policy) if others_policy is not None else default_policy(scenario)

    def joints_for(seq):
        return [
            tuple(seq[k] if i == agent_index else policy[k][i] for i in range(n))
            for k in range(f - 1)
        ]

    best_value, best_seq = None, None
    for seq in itertools.product(grid, repeat=f - 1):
        outcome = simulate(scenario, joints_for(seq), (agent_index,))
        if outcome is not None and (best_value is None or outcome[0] > best_value):
            best_value, best_seq = outcome[0], seq
    if best_value is None:
        raise InfeasibleError(f"agent {agent_index}: no feasible control sequence")

    return DpSolution(
        optimal_value=best_value,
        control_sequence=tuple(best_seq),
        trajectory=replay(scenario, joints_for(best_seq), agents=(agent_index,)),
        value_function=ValueFunction(),
    )


def _pick(payoffs: list[tuple[int, ...]], rule: str) -> tuple[int, tuple[int, ...], list[int], list[int]]:
    """Naive compromise: returns (index, ideal, regrets, members)."""
    n = len(payoffs[0])
    ideal = [max(p[i] for p in payoffs) for i in range(n)]
    regrets = [max(ideal[i] - p[i] for i in range(n)) for p in payoffs]
    lowest = min(regrets)
    members = [k for k in range(len(payoffs)) if regrets[k] == lowest]

    def key(k: int):
        p = payoffs[k]
        if rule == "leximin_regret":
            worst_first = sorted([ideal[i] - p[i] for i in range(n)], reverse=True)
            return (worst_first, -sum(p))
        if rule == "maximin":
            return (-min(p), -sum(p))
        if rule == "utilitarian":
            return (-sum(p), -min(p))
        return ()

    def better(a: int, b: int) -> bool:
        return key(a) < key(b)

    chosen = members[0]
    for k in members[1:]:
        if better(k, chosen):
            chosen = k
    return chosen, tuple(ideal), regrets, members


def _count_check(scenario: Scenario, cap: int) -> None:
    per_step = len(_grid(scenario)) ** scenario.n_agents
    total = per_step ** (scenario.horizon_f - 1)
    if total > cap:
        raise CapExceeded(f"{total} joint sequences exceed cap {cap}")


def _per_step(scenario: Scenario, step, prices, prev, prev_joint, wealth):
    """Returns (payoff, [joint per remaining step], [diag per remaining step]) or None."""
    sc = scenario
    n = sc.n_agents
    f = sc.horizon_f
    available = list(wealth)
    if prev is not None:
        for i in range(n):
            available[i] += _payout(sc, prev_joint[i], prev, prices)
    if step == f:
        if sc.enforce_terminal_nonneg and min(available) < 0:
            return None
        return tuple(available), [], []

    grid = _grid(sc)
    options = []
    for joint in itertools.product(grid, repeat=n):
        if step == 1 and sc.require_trade_at_start and not all(any(u) for u in joint):
            continue
        after = [available[i] - _cost(sc, joint[i]) for i in range(n)]
        if min(after) < 0:
            continue
        nxt = _next_prices(sc, step, prices, joint)
        sub = _per_step(sc, step + 1, nxt, prices, joint, after)
        if sub is not None:
            options.append((joint, sub))
    if not options:
        return None
    payoffs = [sub[0] for _, sub in options]
    k, ideal, regrets, members = _pick(payoffs, sc.tie_break)
    joint, (payoff, tail, tail_diag) = options[k]
    diag = CompromiseDiagnostics(
        step=step,
        ideal_point=ideal,
        regrets=tuple(regrets),
        set_indices=tuple(members),
        selected=k,
        selected_payoff=payoff,
        profiles=tuple(j for j, _ in options),
        payoffs=tuple(payoffs),
    )
    return payoff, [joint] + tail, [diag] + tail_diag


def brute_force_game(
    scenario: Scenario, mode: str = "per_step", cap: int = DEFAULT_CAP
) -> Trajectory:
    """Reference game solution by full enumeration.

    ``per_step`` picks a compromise at every node of the unmemoized game tree.
    ``normal_form`` scores whole joint-control sequences and picks once.
    """
    _count_check(scenario, cap)
    sc = scenario
    if mode == "per_step":
        out = _per_step(sc, 1, tuple(sc.initial_prices), None, None, sc.capitals)
        if out is None:
            raise InfeasibleError("no feasible joint control at the first step")
        _, joints, diags = out
        return replay(sc, joints, diagnostics=diags)
    if mode != "normal_form":
        raise ValueError(f"unknown mode {mode!r}")

    grid = _grid(sc)
    step_joints = list(itertools.product(grid, repeat=sc.n_agents))
    everyone = tuple(range(sc.n_agents))
    profiles, payoffs = [], []
    for seq in itertools.product(step_joints, repeat=sc.horizon_f - 1):
        outcome = simulate(sc, seq, everyone)
        if outcome is not None:
            profiles.append(seq)
            payoffs.append(outcome)
    if not profiles:
        raise InfeasibleError("no feasible joint-control sequence")
    table = PayoffTable(profiles=tuple(profiles), payoffs=tuple(payoffs))
    result = compromise_set(table)
    chosen = select_compromise(result, table, sc.tie_break)
    diag = CompromiseDiagnostics(
        step=1,
        ideal_point=result.ideal_point,
        regrets=result.regrets,
        set_indices=result.set_indices,
        selected=chosen,
        selected_payoff=payoffs[chosen],
    )
    return replay(sc, list(profiles[chosen]), diagnostics=[diag])
