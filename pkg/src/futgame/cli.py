"""Command-line entry point: ``futgame <subcommand> --scenario FILE``."""

from __future__ import annotations

import argparse
import sys

from futgame import __version__
from futgame.compromise import root_table, solve_game
from futgame.dp import solve_deterministic
from futgame.errors import CapExceeded, InfeasibleError
from futgame.oracle import brute_force_dp, brute_force_game
from futgame.report import dumps_structured, write_trajectory
from futgame.scenario import ScenarioError, load_scenario

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_INFEASIBLE = 4


def _fmt(values) -> str:
    return "(" + ", ".join(str(v) for v in values) + ")"


def _signed(control) -> str:
    return "(" + ", ".join(f"{c:+d}" if c else "0" for c in control) + ")"


def _cmd_solve_dp(args) -> int:
    sc = load_scenario(args.scenario)
    if not 0 <= args.agent < sc.n_agents:
        print(f"error: agent {args.agent} not in scenario", file=sys.stderr)
        return EXIT_USAGE
    sol = solve_deterministic(sc, args.agent)
    if args.out:
        write_trajectory(sol.trajectory, args.out, args.format, scenario=sc)
    seq = ", ".join(_signed(u) for u in sol.control_sequence)
    print(f"agent {args.agent} terminal wealth {sol.optimal_value} sequence [{seq}]")
    return EXIT_OK


def _cmd_solve_game(args) -> int:
    sc = load_scenario(args.scenario)
    traj = solve_game(sc, workers=args.threads)
    if args.out:
        write_trajectory(traj, args.out, args.format, scenario=sc)
    print(f"terminal payoffs {_fmt(traj.terminal_wealth)}")
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    sc = load_scenario(args.scenario)
    table, result = root_table(sc)
    members = set(result.set_indices)
    print("index,profile,payoffs,regret,in_compromise_set")
    for k, (joint, payoff) in enumerate(zip(table.profiles, table.payoffs)):
        profile = " ".join(_signed(u) for u in joint)
        flag = "*" if k == result.selected else ("yes" if k in members else "")
        print(f"{k},{profile},{_fmt(payoff)},{result.regrets[k]},{flag}")
    print(
        f"ideal point {_fmt(result.ideal_point)}; compromise set {sorted(members)}; "
        f"selected {result.selected}; terminal payoffs {_fmt(table.payoffs[result.selected])}"
    )
    return EXIT_OK


def _cmd_verify(args) -> int:
    sc = load_scenario(args.scenario)
    mode = args.mode.replace("-", "_")
    mismatches = []
    for i in range(sc.n_agents):
        try:
            fast = solve_deterministic(sc, i)
        except InfeasibleError:
            fast = None
        try:
            slow = brute_force_dp(sc, i)
        except InfeasibleError:
            slow = None
        if (fast is None) != (slow is None) or (
            fast is not None
            and (fast.optimal_value, fast.control_sequence)
            != (slow.optimal_value, slow.control_sequence)
        ):
            mismatches.append(
                f"dp agent {i}: solver "
                f"{None if fast is None else (fast.optimal_value, fast.control_sequence)} "
                f"!= oracle {None if slow is None else (slow.optimal_value, slow.control_sequence)}"
            )
    ours, theirs = solve_game(sc), brute_force_game(sc, mode)
    if mode == "per_step" and dumps_structured(ours) != dumps_structured(theirs):
        mismatches.append("game: solver trajectory differs from per-step oracle")
    elif mode == "normal_form" and ours.control_sequence != theirs.control_sequence:
        mismatches.append(
            f"game: backward selection {_fmt(ours.terminal_wealth)} "
            f"!= normal-form selection {_fmt(theirs.terminal_wealth)}"
        )
    if mismatches:
        for line in mismatches:
            print(f"MISMATCH {line}")
        return EXIT_MISMATCH
    print(f"verify ok ({args.mode}): solvers agree with the oracle")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="futgame", description="Futures-market DP and compromise-game solver"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        if output:
            p.add_argument("--out", help="write the trajectory here")
            p.add_argument(
                "--format", choices=["structured", "tabular"], default="structured"
            )

    p = sub.add_parser("solve-dp", help="single-agent dynamic programming")
    common(p)
    p.add_argument("--agent", type=int, default=0)
    p.set_defaults(func=_cmd_solve_dp)

    p = sub.add_parser("solve-game", help="n-agent compromise game")
    common(p)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_solve_game)

    p = sub.add_parser("enumerate", help="first-step payoff table and compromise set")
    common(p, output=False)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("verify", help="compare solvers with the brute-force oracle")
    common(p, output=False)
    p.add_argument("--mode", choices=["per-step", "normal-form"], default="per-step")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
