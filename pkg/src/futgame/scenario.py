"""Scenario documents: schema, validation and (de)serialization.

A scenario is a single JSON document. Every money and price field is an
integer in minor units; floats are rejected.

Example::

    {
      "horizon_f": 3,
      "contracts": [{"id": 0, "q": 10, "margin_m": 5, "commission_p": 1,
                     "max_position": 1}],
      "agents": [{"id": 0, "initial_capital": 20}],
      "initial_prices": [100],
      "operator": {"kind": "exogenous", "path": [[100], [102], [101]]},
      "require_trade_at_start": true,
      "enforce_terminal_nonneg": true,
      "tie_break": "leximin_regret"
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from futgame.market import (
    PRICE_FLOOR,
    ContractSpec,
    Exogenous,
    LinearImpact,
    MarketState,
    TransitionOperator,
)

TIE_BREAKS = ("leximin_regret", "maximin", "utilitarian", "canonical")


class ScenarioError(ValueError):
    """Malformed or invalid scenario document."""


@dataclass(frozen=True)
class Agent:
    id: int
    initial_capital: int


@dataclass(frozen=True)
class Scenario:
    horizon_f: int
    contracts: tuple[ContractSpec, ...]
    agents: tuple[Agent, ...]
    initial_prices: tuple[int, ...]
    operator: TransitionOperator
    require_trade_at_start: bool = True
    enforce_terminal_nonneg: bool = True
    tie_break: str = "leximin_regret"
    cash_path: tuple[tuple[int, ...], ...] | None = field(default=None)

    @property
    def n_agents(self) -> int:
        return len(self.agents)

    @property
    def n_contracts(self) -> int:
        return len(self.contracts)

    @property
    def capitals(self) -> tuple[int, ...]:
        return tuple(a.initial_capital for a in self.agents)

    def initial_state(self) -> MarketState:
        cash = self.cash_path[0] if self.cash_path is not None else None
        return MarketState(step=1, prices=self.initial_prices, cash_prices=cash)

    def replace(self, **changes: Any) -> "Scenario":
        return scenario_from_dict({**scenario_to_dict(self), **changes})


def _int(value: Any, where: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{where} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ScenarioError(f"{where} must be >= {minimum}")
    return value


def _bool(value: Any, where: str) -> bool:
    if not isinstance(value, bool):
        raise ScenarioError(f"{where} must be true or false")
    return value


def _vector(value: Any, where: str, length: int, minimum: int | None = None) -> tuple[int, ...]:
    if not isinstance(value, list):
        raise ScenarioError(f"{where} must be a list")
    if len(value) != length:
        raise ScenarioError(f"{where} must have {length} entries, got {len(value)}")
    return tuple(_int(v, f"{where}[{k}]", minimum) for k, v in enumerate(value))


def _table(value: Any, where: str, rows: int, width: int) -> tuple[tuple[int, ...], ...]:
    if not isinstance(value, list):
        raise ScenarioError(f"{where} must be a list of rows")
    if len(value) != rows:
        raise ScenarioError(f"{where} must have horizon_f rows ({rows}), got {len(value)}")
    return tuple(
        _vector(row, f"{where}[{k}]", width, PRICE_FLOOR) for k, row in enumerate(value)
    )


def _require(doc: dict, key: str, where: str = "") -> Any:
    if key not in doc:
        raise ScenarioError(f"missing field {where}{key}")
    return doc[key]


def scenario_from_dict(doc: Any) -> Scenario:
    """Validate a decoded document and build a :class:`Scenario`.

    Raises:
        ScenarioError: naming the first violated constraint.
    """
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be an object")
    f = _int(_require(doc, "horizon_f"), "horizon_f", 2)

    raw_contracts = _require(doc, "contracts")
    if not isinstance(raw_contracts, list) or not raw_contracts:
        raise ScenarioError("contracts must be a non-empty list")
    contracts = []
    for j, c in enumerate(raw_contracts):
        where = f"contracts[{j}]"
        if not isinstance(c, dict):
            raise ScenarioError(f"{where} must be an object")
        cid = _int(c.get("id", j), f"{where}.id")
        if cid != j:
            raise ScenarioError(f"{where}.id must be {j} (ids are contiguous from 0)")
        contracts.append(
            ContractSpec(
                id=cid,
                q=_int(_require(c, "q", f"{where}."), f"{where}.q", 1),
                margin_m=_int(_require(c, "margin_m", f"{where}."), f"{where}.margin_m", 0),
                commission_p=_int(
                    _require(c, "commission_p", f"{where}."), f"{where}.commission_p", 0
                ),
                max_position=_int(c.get("max_position", 1), f"{where}.max_position", 1),
            )
        )
    s = len(contracts)

    raw_agents = _require(doc, "agents")
    if not isinstance(raw_agents, list) or not raw_agents:
        raise ScenarioError("agents must be a non-empty list")
    agents = []
    for i, a in enumerate(raw_agents):
        where = f"agents[{i}]"
        if not isinstance(a, dict):
            raise ScenarioError(f"{where} must be an object")
        aid = _int(a.get("id", i), f"{where}.id")
        if aid != i:
            raise ScenarioError(f"{where}.id must be {i} (ids are contiguous from 0)")
        capital = _int(
            _require(a, "initial_capital", f"{where}."), f"{where}.initial_capital", 0
        )
        agents.append(Agent(id=aid, initial_capital=capital))

    raw_op = _require(doc, "operator")
    if not isinstance(raw_op, dict):
        raise ScenarioError("operator must be an object")
    kind = raw_op.get("kind")
    op: TransitionOperator
    if kind == "exogenous":
        path = _table(_require(raw_op, "path", "operator."), "operator.path", f, s)
        op = Exogenous(path=path)
    elif kind == "linear_impact":
        op = LinearImpact(
            alpha=_vector(_require(raw_op, "alpha", "operator."), "operator.alpha", s),
            drift=_vector(_require(raw_op, "drift", "operator."), "operator.drift", s),
            floor=_vector(
                raw_op.get("floor", [PRICE_FLOOR] * s), "operator.floor", s, PRICE_FLOOR
            ),
        )
    else:
        raise ScenarioError(
            f"operator.kind must be 'exogenous' or 'linear_impact', got {kind!r}"
        )

    if "initial_prices" in doc:
        x1 = _vector(doc["initial_prices"], "initial_prices", s, PRICE_FLOOR)
        if isinstance(op, Exogenous) and x1 != op.path[0]:
            raise ScenarioError("initial_prices must equal operator.path[0]")
    elif isinstance(op, Exogenous):
        x1 = op.path[0]
    else:
        raise ScenarioError("missing field initial_prices")

    cash_path = None
    if doc.get("cash_path") is not None:
        cash_path = _table(doc["cash_path"], "cash_path", f, s)

    tie_break = doc.get("tie_break", "leximin_regret")
    if tie_break not in TIE_BREAKS:
        raise ScenarioError(f"tie_break must be one of {', '.join(TIE_BREAKS)}")

    return Scenario(
        horizon_f=f,
        contracts=tuple(contracts),
        agents=tuple(agents),
        initial_prices=x1,
        operator=op,
        require_trade_at_start=_bool(
            doc.get("require_trade_at_start", True), "require_trade_at_start"
        ),
        enforce_terminal_nonneg=_bool(
            doc.get("enforce_terminal_nonneg", True), "enforce_terminal_nonneg"
        ),
        tie_break=tie_break,
        cash_path=cash_path,
    )


def scenario_to_dict(scenario: Scenario) -> dict[str, Any]:
    op = scenario.operator
    if isinstance(op, Exogenous):
        op_doc: dict[str, Any] = {"kind": "exogenous", "path": [list(r) for r in op.path]}
    else:
        op_doc = {
            "kind": "linear_impact",
            "alpha": list(op.alpha),
            "drift": list(op.drift),
            "floor": list(op.floor),
        }
    doc: dict[str, Any] = {
        "horizon_f": scenario.horizon_f,
        "contracts": [
            {
                "id": c.id,
                "q": c.q,
                "margin_m": c.margin_m,
                "commission_p": c.commission_p,
                "max_position": c.max_position,
            }
            for c in scenario.contracts
        ],
        "agents": [
            {"id": a.id, "initial_capital": a.initial_capital} for a in scenario.agents
        ],
        "initial_prices": list(scenario.initial_prices),
        "operator": op_doc,
        "require_trade_at_start": scenario.require_trade_at_start,
        "enforce_terminal_nonneg": scenario.enforce_terminal_nonneg,
        "tie_break": scenario.tie_break,
    }
    if scenario.cash_path is not None:
        doc["cash_path"] = [list(r) for r in scenario.cash_path]
    return doc


def load_scenario(path: str | Path) -> Scenario:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: not valid JSON ({exc})") from exc
    return scenario_from_dict(doc)


def save_scenario(scenario: Scenario, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(scenario), indent=2) + "\n")
