"""Trajectory serialization: canonical JSON and CSV rows."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any

from futgame.scenario import Scenario
from futgame.trajectory import Trajectory, check_conservation


def _lists(joint) -> list[list[int]]:
    return [list(u) for u in joint]


def trajectory_to_dict(trajectory: Trajectory) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "agents": list(trajectory.agents),
        "initial_capital": list(trajectory.initial_capital),
        "steps": [],
        "terminal": {
            "wealth": list(trajectory.terminal_wealth),
            "efficiency": list(trajectory.terminal_efficiency),
        },
    }
    for rec in trajectory.steps:
        entry: dict[str, Any] = {
            "step": rec.step,
            "prices": list(rec.state.prices),
            "controls": _lists(rec.joint),
            "wealth": list(rec.wealth),
        }
        if rec.state.cash_prices is not None:
            entry["cash_prices"] = list(rec.state.cash_prices)
        doc["steps"].append(entry)
    if trajectory.diagnostics:
        doc["diagnostics"] = [
            {
                "step": d.step,
                "ideal_point": list(d.ideal_point),
                "regrets": list(d.regrets),
                "compromise_set": list(d.set_indices),
                "compromise_set_size": d.set_size,
                "selected": d.selected,
                "selected_payoff": list(d.selected_payoff),
                **({"profiles": [_lists(j) for j in d.profiles]} if d.profiles else {}),
                **({"payoffs": [list(p) for p in d.payoffs]} if d.payoffs else {}),
            }
            for d in trajectory.diagnostics
        ]
    return doc


def dumps_structured(trajectory: Trajectory) -> str:
    return json.dumps(trajectory_to_dict(trajectory), indent=2) + "\n"


def dumps_tabular(trajectory: Trajectory) -> str:
    """One row per (step, tracked agent): step, agent, prices, own control, wealth."""
    s = len(trajectory.steps[0].state.prices)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["step", "agent"]
        + [f"price_{j}" for j in range(s)]
        + [f"control_{j}" for j in range(s)]
        + ["wealth"]
    )
    for rec in trajectory.steps:
        for a, i in enumerate(trajectory.agents):
            writer.writerow(
                [rec.step, i, *rec.state.prices, *rec.joint[i], rec.wealth[a]]
            )
    return buf.getvalue()


def write_trajectory(
    trajectory: Trajectory,
    path: str | Path,
    format: str = "structured",
    scenario: Scenario | None = None,
) -> None:
    """Write a trajectory as JSON (``structured``) or CSV (``tabular``).

    When ``scenario`` is given the conservation identity is checked first.
    """
    if scenario is not None:
        check_conservation(trajectory, scenario)
    if format == "structured":
        text = dumps_structured(trajectory)
    elif format == "tabular":
        text = dumps_tabular(trajectory)
    else:
        raise ValueError(f"unknown format {format!r}")
    Path(path).write_text(text)
