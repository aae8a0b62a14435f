"""Market state, contract constants and price-transition operators.

All money and prices are integers in minor units (e.g. cents).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

Control = tuple[int, ...]
JointControl = tuple[Control, ...]

PRICE_FLOOR = 1


class DimensionError(ValueError):
    """Raised when vectors that must line up do not."""


class HorizonExhausted(ValueError):
    """Raised when a transition is requested past the last step."""


@dataclass(frozen=True)
class ContractSpec:
    id: int
    q: int
    margin_m: int
    commission_p: int
    max_position: int = 1

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError(f"contract {self.id}: q must be >= 1")
        if self.margin_m < 0:
            raise ValueError(f"contract {self.id}: margin_m must be >= 0")
        if self.commission_p < 0:
            raise ValueError(f"contract {self.id}: commission_p must be >= 0")
        if self.max_position < 1:
            raise ValueError(f"contract {self.id}: max_position must be >= 1")

    @property
    def entry_unit(self) -> int:
        """Money paid up front per contract: margin plus commission."""
        return self.margin_m + self.commission_p


@dataclass(frozen=True)
class MarketState:
    step: int
    prices: tuple[int, ...]
    cash_prices: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if any(x < PRICE_FLOOR for x in self.prices):
            raise ValueError(f"prices must be >= {PRICE_FLOOR}, got {self.prices}")
        if self.cash_prices is not None and len(self.cash_prices) != len(self.prices):
            raise DimensionError("cash_prices must have one entry per contract")


@dataclass(frozen=True)
class Exogenous:
    """Prices follow a fixed table, one row per step, whatever the agents do."""

    path: tuple[tuple[int, ...], ...]

    @property
    def horizon(self) -> int:
        return len(self.path)

    def row(self, step: int) -> tuple[int, ...]:
        return self.path[step - 1]


@dataclass(frozen=True)
class LinearImpact:
    """Next price = max(floor, price + drift + alpha * net signed volume)."""

    alpha: tuple[int, ...]
    drift: tuple[int, ...]
    floor: tuple[int, ...]

    def __post_init__(self) -> None:
        if not len(self.alpha) == len(self.drift) == len(self.floor):
            raise DimensionError("alpha, drift and floor must have equal length")
        if any(v < PRICE_FLOOR for v in self.floor):
            raise ValueError(f"floor entries must be >= {PRICE_FLOOR}")


TransitionOperator = Union[Exogenous, LinearImpact]


def net_volume(joint: JointControl, n_contracts: int) -> tuple[int, ...]:
    """Sum of signed positions over agents, per contract."""
    volume = [0] * n_contracts
    for control in joint:
        if len(control) != n_contracts:
            raise DimensionError(
                f"control {control} has {len(control)} entries, expected {n_contracts}"
            )
        for j, c in enumerate(control):
            volume[j] += c
    return tuple(volume)


def step_prices(
    state: MarketState,
    joint: JointControl,
    op: TransitionOperator,
    horizon: int,
    cash_path: Sequence[Sequence[int]] | None = None,
) -> MarketState:
    """Advance the market by one step under the joint control.

    Args:
        state: Current market state; not modified.
        joint: One control per agent.
        op: Transition operator.
        horizon: Number of steps ``f``; the state at ``f`` is terminal.
        cash_path: Optional per-step cash price table carried into the new state.

    Returns:
        The state at ``state.step + 1``.
    """
    if state.step >= horizon:
        raise HorizonExhausted(f"no transition from step {state.step} (horizon {horizon})")
    s = len(state.prices)
    volume = net_volume(joint, s)
    nxt = state.step + 1

    if isinstance(op, Exogenous):
        prices = op.row(nxt)
        if len(prices) != s:
            raise DimensionError("exogenous path row width differs from price vector")
    elif isinstance(op, LinearImpact):
        if len(op.alpha) != s:
            raise DimensionError("impact coefficients differ from price vector")
        prices = tuple(
            max(op.floor[j], state.prices[j] + op.drift[j] + op.alpha[j] * volume[j])
            for j in range(s)
        )
    else:
        raise TypeError(f"unknown transition operator {type(op).__name__}")

    cash = tuple(cash_path[nxt - 1]) if cash_path is not None else None
    return MarketState(step=nxt, prices=tuple(prices), cash_prices=cash)


def basis(cash_price: int, futures_price: int) -> int:
    """Cash price minus futures price; negative means the cash good is at a discount."""
    return cash_price - futures_price
