"""Command-line interface: parameter sweeps and checks as CSV or JSON lines.

Exit codes: 0 success, 2 invalid arguments, 3 numerical failure or a bound
violation that the library treats as an internal inconsistency.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import criteria, keyrate, statezoo, steering
from .constants import FUR_MAX_ZX, SCENARIO1_BOUND, VERDICT_SLACK
from .errors import DegenerateConditionError, InvalidArgumentError, NumericalFailureError
from .measure import Direction, X, Y, Z
from .optimizer import DEFAULT_GRID_STEP, DEFAULT_REFINE_ITERS, maximize_over_directions
from .qcore import bloch_to_state
from .report import SweepRecord, format_records

log = logging.getLogger("finesteer")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3


class UsageError(Exception):
    pass


class BoundViolation(Exception):
    pass


def parse_direction(text: str) -> Direction:
    """'x', '-z', or 'theta,phi' in radians."""
    if "," in text:
        try:
            theta, phi = (float(t) for t in text.split(","))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad direction {text!r}") from exc
        return Direction(theta, phi)
    try:
        return Direction.axis(text)
    except InvalidArgumentError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _grid(lo: float, hi: float, steps: int, name: str) -> list[float]:
    if not (0.0 <= lo <= hi <= 1.0) or steps < 1:
        raise UsageError(f"need 0 <= {name}-min <= {name}-max <= 1 and steps >= 1")
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def _map(fn, items, workers):
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def cmd_fur(args):
    def objective(d):
        return steering.fur_game_value(bloch_to_state(d.vector), args.p, args.q, args.win)

    analytic, bloch = steering.fur_game_max(args.p, args.q, args.win)
    res = maximize_over_directions(objective, 1, args.grid_step, args.refine_iters)
    return [{
        "analytic": analytic,
        "optimized": res.best_value,
        "difference": res.best_value - analytic,
        "bloch_x": float(bloch[0]),
        "bloch_y": float(bloch[1]),
        "bloch_z": float(bloch[2]),
        "opt_theta": res.best_directions[0].theta,
        "opt_phi": res.best_directions[0].phi,
        "evaluations": res.evaluations,
    }]


def cmd_werner(args):
    setting = steering.SteeringSetting.same_basis()

    def row(p):
        rho = statezoo.werner(p)
        return SweepRecord.build("p", p, steering.steering_functional(rho, setting), criteria.chsh_max(rho),
                                 args.tolerance)

    return _map(row, _grid(args.p_min, args.p_max, args.steps, "p"), args.workers)


def cmd_pure(args):
    setting = steering.SteeringSetting.same_basis()

    def row(alpha):
        rho = statezoo.pure_alpha_density(alpha)
        chsh = criteria.chsh_max(rho)
        try:
            if args.mode == "samebasis":
                value = steering.steering_functional(rho, setting)
            else:
                if alpha in (0.0, 1.0):
                    raise DegenerateConditionError("product state: no steering direction is informative")
                value = steering.max_steering_functional(
                    rho, grid_step=args.grid_step, refine_iters=args.refine_iters).value
        except DegenerateConditionError as exc:
            log.warning("alpha=%g: functional undefined (%s)", alpha, exc)
            value = math.nan
        return SweepRecord.build("alpha", alpha, value, chsh, args.tolerance)

    return _map(row, _grid(args.alpha_min, args.alpha_max, args.steps, "alpha"), args.workers)


def cmd_monogamy(args):
    if args.family == "random":
        if args.seed is None:
            raise UsageError("--seed is required for the random family")
        if args.trials < 1:
            raise UsageError("--trials must be at least 1")
        states = keyrate.random_tripartite_states(args.trials, args.seed)
    else:
        kind = {"ghz": "ghz", "w": "w", "product": "product_extension"}[args.family]
        states = [statezoo.tripartite_family(kind, alpha=args.alpha)]
    trials = keyrate.monogamy_stress(states, args.grid_step, args.refine_iters, args.workers)
    worst = max(t.average for t in trials)
    log.warning("max average %.10g over %d trial(s); bound %.10g", worst, len(trials), SCENARIO1_BOUND)
    rows = [{"trial": t.index, "t_ab": t.t_ab, "t_bc": t.t_bc, "average": t.average, "satisfied": t.satisfied}
            for t in trials]
    if not all(t.satisfied for t in trials):
        raise BoundViolation(rows)
    return rows


def _keyrate_state(args):
    if args.state == "ghz":
        return statezoo.tripartite_family("ghz")
    if args.state == "product":
        return statezoo.tripartite_family("product_extension", alpha=args.param)
    return statezoo.dephased_bell_purification(args.param)


def cmd_keyrate(args):
    note = (f"linear bound is the formula value; published reference {keyrate.PUBLISHED_LINEAR_BOUND} "
            "differs from it")
    if args.state is None:
        k = 0.0 if args.k is None else args.k
        try:
            logratio, linear = keyrate.key_rate_bounds(k)
        except InvalidArgumentError as exc:
            raise UsageError(str(exc)) from exc
        return [{"k": k, "logratio_bits": logratio, "linear_bits": linear,
                 "published_rate": keyrate.PUBLISHED_MAX_RATE,
                 "published_linear": keyrate.PUBLISHED_LINEAR_BOUND, "note": note}]
    rho = _keyrate_state(args)
    ts = keyrate.optimize_parties(rho, grid_step=args.grid_step, refine_iters=args.refine_iters)
    ts = keyrate.TripartiteSetting(alice_s=ts.alice_s, alice_t=ts.alice_t)
    if args.charlie == "worst":
        ts = keyrate.worst_case_charlie(rho, ts)
    rep = keyrate.key_rate_report(rho, ts)
    return [{"state": args.state, "param": args.param, "t_ab": rep.t_ab, "t_bc": rep.t_bc,
             "k": rep.k_violation, "rate_exact_bits": rep.rate_exact_bits,
             "logratio_bits": rep.rate_logratio_bits, "linear_bits": rep.rate_linear_bound_bits,
             "published_rate": keyrate.PUBLISHED_MAX_RATE,
             "published_linear": keyrate.PUBLISHED_LINEAR_BOUND, "note": note}]


def cmd_saunders(args):
    dirs = [Z, X, Y][: args.n]
    c_n = criteria.saunders_bound(dirs)
    return [{"n": args.n, "bound": c_n, "werner_threshold_p": c_n,
             "werner_lhs_at_p1": criteria.saunders_lhs(statezoo.werner(1.0), dirs)}]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default=argparse.SUPPRESS)
    common.add_argument("--tolerance", type=float, default=argparse.SUPPRESS,
                        help="verdict slack (default %g)" % VERDICT_SLACK)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS, help="also write the output to this file")
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="finesteer", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=["json", "csv"], default="csv")
    parser.add_argument("--tolerance", type=float, default=VERDICT_SLACK)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default=None)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def opt_args(p):
        p.add_argument("--grid-step", type=float, default=DEFAULT_GRID_STEP)
        p.add_argument("--refine-iters", type=int, default=DEFAULT_REFINE_ITERS)

    p = sub.add_parser("fur", parents=[common], help="single-qubit game maximum")
    p.add_argument("--p", type=parse_direction, default=Z)
    p.add_argument("--q", type=parse_direction, default=X)
    p.add_argument("--win", type=int, choices=[0, 1], default=0)
    opt_args(p)
    p.set_defaults(func=cmd_fur)

    p = sub.add_parser("werner", parents=[common], help="sweep the Werner family")
    p.add_argument("--p-min", type=float, default=0.0)
    p.add_argument("--p-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p.set_defaults(func=cmd_werner)

    p = sub.add_parser("pure", parents=[common], help="sweep sqrt(a)|00> + sqrt(1-a)|11>")
    p.add_argument("--alpha-min", type=float, default=0.0)
    p.add_argument("--alpha-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--mode", choices=["optimal", "samebasis"], default="samebasis")
    opt_args(p)
    p.set_defaults(func=cmd_pure)

    p = sub.add_parser("monogamy", parents=[common], help="monogamy of the steering functional")
    p.add_argument("--family", choices=["ghz", "w", "product", "random"], default="ghz")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--alpha", type=float, default=0.5)
    opt_args(p)
    p.set_defaults(func=cmd_monogamy)

    p = sub.add_parser("keyrate", parents=[common], help="key-rate bounds from the violation k")
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--state", choices=["ghz", "product", "dephased"], default=None)
    p.add_argument("--param", type=float, default=1.0, help="alpha (product) or Phi+ weight (dephased)")
    p.add_argument("--charlie", choices=["fixed", "worst"], default="worst")
    opt_args(p)
    p.set_defaults(func=cmd_keyrate)

    p = sub.add_parser("saunders", parents=[common], help="linear n-setting criterion bound")
    p.add_argument("--n", type=int, choices=[2, 3], default=2)
    p.set_defaults(func=cmd_saunders)
    return parser


def _emit(text: str, out: str | None) -> None:
    sys.stdout.write(text)
    sys.stdout.flush()
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    if args.workers < 1:
        parser.error("--workers must be at least 1")
    try:
        records = args.func(args)
    except (UsageError, InvalidArgumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except BoundViolation as exc:
        _emit(format_records(exc.args[0], args.format), args.out)
        print("error: monogamy bound exceeded", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(format_records(records, args.format), args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
