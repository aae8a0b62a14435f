"""Per-agent wealth accounting for one-period futures positions.

A control is a tuple of signed integers, one per contract: ``+k`` is long k
contracts, ``-k`` short k, ``0`` no contract. Every contract lives exactly one
step, so the position opened at step ``t`` is settled at ``t + 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from futgame.market import Control, ContractSpec, DimensionError, MarketState


@dataclass(frozen=True)
class AgentState:
    free_capital: int
    open_position: Control

    def __post_init__(self) -> None:
        if self.free_capital < 0:
            raise ValueError("free_capital must be >= 0")


def zero_control(n_contracts: int) -> Control:
    return (0,) * n_contracts


def _check_dims(control: Control, contracts: Sequence[ContractSpec]) -> None:
    if len(control) != len(contracts):
        raise DimensionError(
            f"control has {len(control)} entries, expected {len(contracts)}"
        )


def entry_cost(control: Control, contracts: Sequence[ContractSpec]) -> int:
    """Margin plus commission paid to open ``control``."""
    _check_dims(control, contracts)
    return sum(abs(c) * spec.entry_unit for c, spec in zip(control, contracts))


def commission_paid(control: Control, contracts: Sequence[ContractSpec]) -> int:
    _check_dims(control, contracts)
    return sum(abs(c) * spec.commission_p for c, spec in zip(control, contracts))


def price_change_pnl(
    position: Control,
    prices_prev: Sequence[int],
    prices_now: Sequence[int],
    contracts: Sequence[ContractSpec],
) -> int:
    """Gain or loss from price movement alone, without the returned margin."""
    _check_dims(position, contracts)
    if not len(prices_prev) == len(prices_now) == len(contracts):
        raise DimensionError("price vectors must have one entry per contract")
    return sum(
        c * (now - prev) * spec.q
        for c, prev, now, spec in zip(position, prices_prev, prices_now, contracts)
    )


def settlement_revenue(
    position: Control,
    prices_prev: MarketState,
    prices_now: MarketState,
    contracts: Sequence[ContractSpec],
) -> int:
    """Money received when ``position`` expires: margins back plus price P&L.

    The result is negative when the loss on the position exceeds the margin
    being returned.
    """
    if prices_now.step != prices_prev.step + 1:
        raise ValueError(
            f"settlement needs consecutive steps, got {prices_prev.step} -> {prices_now.step}"
        )
    margins = sum(abs(c) * spec.margin_m for c, spec in zip(position, contracts))
    return margins + price_change_pnl(
        position, prices_prev.prices, prices_now.prices, contracts
    )


def step_wealth(prev_wealth: int, settlement: int, new_entry_cost: int) -> int:
    """Income at the end of an intermediate step.

    A negative result is returned as-is; callers prune it as infeasible.
    """
    return prev_wealth + settlement - new_entry_cost


def terminal_wealth(prev_wealth: int, settlement: int) -> int:
    return prev_wealth + settlement


def efficiency(wealth: int, initial_capital: int) -> int:
    return wealth - initial_capital


def control_grid(contracts: Sequence[ContractSpec]) -> list[Control]:
    """Every control within the position bounds, in canonical order."""
    axes = [range(-spec.max_position, spec.max_position + 1) for spec in contracts]
    return [tuple(c) for c in itertools.product(*axes)]


def admissible_controls(
    agent: AgentState,
    settlement_pending: int,
    contracts: Sequence[ContractSpec],
    is_first_step: bool,
    require_trade_at_start: bool = True,
) -> list[Control]:
    """Controls the agent can afford without ending the step below zero.

    On the first step with ``require_trade_at_start`` the empty control is
    excluded, so at least one contract must be opened. The result is in
    canonical (lexicographic) order and may be empty.
    """
    if agent.free_capital < 0:
        raise ValueError("free_capital must be >= 0")
    available = agent.free_capital + settlement_pending
    if available < 0:
        return []
    units = [spec.entry_unit for spec in contracts]
    out = []
    for control in control_grid(contracts):
        cost = sum(abs(c) * u for c, u in zip(control, units))
        if step_wealth(agent.free_capital, settlement_pending, cost) < 0:
            continue
        if is_first_step and require_trade_at_start and not any(control):
            continue
        out.append(control)
    return out
