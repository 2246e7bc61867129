"""Command-line front end.

Subcommands:

    lingame analyze <game> [--strategy S]     full value/bound report
    lingame chsh --players N --outcomes D     analytic vs numeric bound
    lingame diew <game> [--strategy S]        entanglement witness report
    lingame separable <game>                  additive-separability check
    lingame boxes run <function> [--shots K] [--seed S]
    lingame boxes reduce <function>

Common flags: --json (machine-readable report), --cap N (enumeration
cap), --tolerance EPS (agreement/witness margin), --threads T (bound
computation; the LINGAME_THREADS environment variable supplies a
default).  Exit codes: 0 success, 1 validation or usage error, 2
enumeration cap exceeded.

JSON reports carry a versioned ``schema`` field, sorted keys, and floats
rounded to 10 significant digits; they contain no timings, so identical
inputs and seeds give byte-identical output.  Human-readable output
rounds to 6 significant digits and includes wall-clock timings.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import boxworld, diew, games, qbounds, values
from .errors import (GameFormatError, NoThresholdError, ResourceLimitError,
                     ValidationError)
from .strategies import load_strategy, strategy_behavior
from .tolerances import WITNESS_MARGIN

SCHEMA = "lingame/1"


class _Parser(argparse.ArgumentParser):
    # usage errors must exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _round_floats(value):
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return float(f"{value:.10g}")
    if isinstance(value, dict):
        return {k: _round_floats(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_floats(v) for v in value]
    raise TypeError(f"cannot serialize {type(value)!r}")


def _emit(args, doc, human_lines):
    if args.json:
        doc = dict(doc)
        doc["schema"] = SCHEMA
        text = json.dumps(_round_floats(doc), sort_keys=True, indent=2)
        sys.stdout.write(text + "\n")
    else:
        for line in human_lines:
            sys.stdout.write(line + "\n")
    return 0


def parse_report(text):
    """Parse a --json report back into a dict (integration-test hook)."""
    doc = json.loads(text)
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise GameFormatError(f"not a {SCHEMA} report")
    return doc


def _fraction_fields(frac):
    return {"rational": str(frac), "value": float(frac)}


def _element_str(element):
    return ",".join(str(v) for v in element)


def _witness_json(strategy):
    return [[list(e) for e in per_player] for per_player in strategy.outputs]


def _group_label(game):
    label = "x".join(f"Z{d}" for d in game.group.orders)
    if game.field is not None and game.field.r > 1:
        label += f" (GF({game.field.p}^{game.field.r}))"
    return label


def _partition_json(report):
    rows = []
    for part in report.partitions:
        rows.append({
            "players": list(part.players),
            "norms": {_element_str(k): v for k, v in part.norms.items()},
            "raw": part.raw,
            "value": part.value,
        })
    return rows


def _biseparable_json(report):
    rows = []
    for part in report.partitions:
        rows.append({
            "lone": part.lone,
            "assignment": [list(a) for a in part.assignment],
            "norms": {_element_str(k): v for k, v in part.norms.items()},
            "raw": part.raw,
            "value": part.value,
        })
    return {"bound": report.bound, "raw": report.raw_bound,
            "best_lone": report.best_lone, "partitions": rows}


def _cap_kw(args):
    # None means each operation keeps its own default cap
    return {} if args.cap is None else {"cap": args.cap}


def _strategy_section(game, strategy, bound_value, margin):
    observed = games.success_probability(game, strategy_behavior(strategy, game))
    section = {"success": observed}
    if bound_value is not None:
        gap = observed - bound_value
        verdict = (diew.Verdict.GENUINE_TRIPARTITE_ENTANGLEMENT
                   if gap > margin else diew.Verdict.INCONCLUSIVE)
        section["verdict"] = verdict.name
        section["gap"] = gap
        try:
            section["visibility_threshold"] = diew.visibility_threshold(
                game, observed, bound=bound_value)
        except NoThresholdError:
            section["visibility_threshold"] = None
    return section


def _load_game(path):
    try:
        return games.load_game(path)
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e.strerror}") from None


def _load_strategy(path):
    try:
        return load_strategy(path)
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e.strerror}") from None


def _load_function(path):
    try:
        return boxworld.load_function(path)
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e.strerror}") from None


def cmd_analyze(args):
    game = _load_game(args.game)
    timings = {}

    t0 = time.perf_counter()
    classical = values.classical_value(game, **_cap_kw(args))
    timings["classical"] = time.perf_counter() - t0
    ns_value, _ = values.no_signaling_value(game)
    t0 = time.perf_counter()
    bound = qbounds.quantum_bound(game, threads=args.threads)
    timings["quantum_bound"] = time.perf_counter() - t0

    doc = {
        "command": "analyze",
        "game": {
            "hash": games.game_hash(game),
            "players": game.players,
            "group": list(game.group.orders),
            "questions": list(game.question_counts),
        },
        "classical": {**_fraction_fields(classical.value),
                      "witness": _witness_json(classical.strategy)},
        "no_signaling": float(ns_value),
        "quantum_bound": {
            "value": bound.bound,
            "raw": bound.raw_bound,
            "best_partition": list(bound.best_partition),
            "partitions": _partition_json(bound),
        },
    }
    human = [
        f"game            {args.game}",
        f"hash            {doc['game']['hash'][:16]}",
        f"players         {game.players}   group {_group_label(game)}   "
        f"questions {','.join(map(str, game.question_counts))}",
        f"classical       {float(classical.value):.6g} "
        f"({classical.value})   [{timings['classical']:.3f} s]",
        f"no-signaling    {float(ns_value):.6g}",
        f"quantum bound   {bound.bound:.6g} (raw {bound.raw_bound:.6g}, "
        f"partition {{{','.join(map(str, bound.best_partition))}}})   "
        f"[{timings['quantum_bound']:.3f} s]",
    ]

    sandwich_ok = float(classical.value) <= bound.bound + 1e-9
    if game.players == 3:
        t0 = time.perf_counter()
        svet = values.svetlichny_value(game, **_cap_kw(args))
        timings["svetlichny"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        bisep = diew.biseparable_bound(game, **_cap_kw(args))
        timings["biseparable"] = time.perf_counter() - t0
        doc["svetlichny"] = _fraction_fields(svet)
        doc["biseparable"] = _biseparable_json(bisep)
        sandwich_ok = (sandwich_ok
                       and float(classical.value) <= bisep.bound + 1e-9
                       and bisep.bound <= bound.bound + 1e-9)
        human.append(f"svetlichny      {float(svet):.6g} ({svet})   "
                     f"[{timings['svetlichny']:.3f} s]")
        human.append(f"biseparable     {bisep.bound:.6g} "
                     f"(lone player {bisep.best_lone})   "
                     f"[{timings['biseparable']:.3f} s]")
    doc["sandwich_ok"] = bool(sandwich_ok)
    human.append(f"sandwich        {'ok' if sandwich_ok else 'VIOLATED'}")

    if args.strategy:
        strategy = _load_strategy(args.strategy)
        bisep_bound = doc.get("biseparable", {}).get("bound")
        section = _strategy_section(game, strategy, bisep_bound,
                                    args.tolerance)
        doc["strategy"] = section
        human.append(f"strategy        success {section['success']:.6g}")
        if "verdict" in section:
            human.append(f"                verdict {section['verdict']} "
                         f"(gap {section['gap']:.6g})")
        if section.get("visibility_threshold") is not None:
            human.append(f"                visibility threshold "
                         f"{section['visibility_threshold']:.6g}")
    return _emit(args, doc, human)


def cmd_chsh(args):
    analytic = qbounds.chsh_bound_analytic(args.players, args.outcomes)
    game = games.chsh_game(args.players, args.outcomes)
    t0 = time.perf_counter()
    bound = qbounds.quantum_bound(game, threads=args.threads)
    elapsed = time.perf_counter() - t0
    agreement = abs(bound.bound - analytic) <= args.tolerance
    doc = {
        "command": "chsh",
        "players": args.players,
        "outcomes": args.outcomes,
        "analytic_bound": analytic,
        "numeric_bound": bound.bound,
        "agreement": bool(agreement),
        "game_hash": games.game_hash(game),
        "partitions": _partition_json(bound),
    }
    human = [
        f"players         {args.players}   outcomes {args.outcomes}",
        f"analytic bound  {analytic:.6g}",
        f"numeric bound   {bound.bound:.6g}   [{elapsed:.3f} s]",
        f"agreement       {'ok' if agreement else 'MISMATCH'} "
        f"(tolerance {args.tolerance:g})",
    ]
    return _emit(args, doc, human)


def cmd_diew(args):
    game = _load_game(args.game)
    t0 = time.perf_counter()
    report = diew.biseparable_bound(game, **_cap_kw(args))
    elapsed = time.perf_counter() - t0
    doc = {
        "command": "diew",
        "game": {"hash": games.game_hash(game),
                 "players": game.players,
                 "group": list(game.group.orders),
                 "questions": list(game.question_counts)},
        "biseparable": _biseparable_json(report),
    }
    human = [
        f"game            {args.game}",
        f"biseparable     {report.bound:.6g} (raw {report.raw_bound:.6g}, "
        f"lone player {report.best_lone})   [{elapsed:.3f} s]",
    ]
    if args.strategy:
        strategy = _load_strategy(args.strategy)
        observed = games.success_probability(
            game, strategy_behavior(strategy, game))
        result = diew.witness_verdict(game, min(observed, 1.0),
                                      margin=args.tolerance, report=report)
        doc["strategy"] = {"success": observed,
                           "verdict": result.verdict.name,
                           "gap": result.gap}
        human.append(f"strategy        success {observed:.6g}")
        human.append(f"verdict         {result.verdict.value} "
                     f"(gap {result.gap:.6g})")
        try:
            threshold = diew.visibility_threshold(game, observed,
                                                  bound=report.bound)
            doc["strategy"]["visibility_threshold"] = threshold
            human.append(f"visibility      threshold {threshold:.6g}")
        except NoThresholdError:
            doc["strategy"]["visibility_threshold"] = None
    return _emit(args, doc, human)


def cmd_separable(args):
    game = _load_game(args.game)
    t0 = time.perf_counter()
    report = values.separability_check(game)
    elapsed = time.perf_counter() - t0
    doc = {"command": "separable",
           "game": {"hash": games.game_hash(game),
                    "players": game.players,
                    "group": list(game.group.orders),
                    "questions": list(game.question_counts)},
           "separable": report.separable}
    human = [f"game            {args.game}",
             f"separable       {'yes' if report.separable else 'no'}   "
             f"[{elapsed:.3f} s]"]
    if report.separable:
        doc["offsets"] = [[list(report.offsets[i][x])
                           for x in range(game.question_counts[i])]
                          for i in range(game.players)]
        doc["constant"] = list(report.constant)
        doc["witness"] = _witness_json(report.strategy)
        human.append("                a winning classical strategy exists")
    return _emit(args, doc, human)


def cmd_boxes_run(args):
    table = _load_function(args.function)
    rng = np.random.default_rng(args.seed)
    runs = []
    correct = True
    t0 = time.perf_counter()
    for _ in range(args.shots):
        flat = tuple(int(v) for v in rng.integers(0, table.d,
                                                  size=table.variables))
        transcript = boxworld.cc_protocol(table, flat, rng)
        expected = table.value(flat)
        correct = correct and transcript.result == expected
        runs.append({"inputs": list(flat), "expected": expected,
                     **transcript.as_dict()})
    elapsed = time.perf_counter() - t0
    doc = {"command": "boxes run",
           "d": table.d,
           "arities": list(table.arities),
           "seed": args.seed,
           "shots": args.shots,
           "boxes_per_run": runs[0]["boxes_used"] if runs else 0,
           "dits_per_run": runs[0]["dits_communicated"] if runs else 0,
           "all_correct": bool(correct),
           "runs": runs}
    human = [
        f"function        {args.function} (d={table.d}, "
        f"arities {','.join(map(str, table.arities))})",
        f"shots           {args.shots} (seed {args.seed})",
        f"boxes per run   {doc['boxes_per_run']}",
        f"dits per run    {doc['dits_per_run']}",
        f"all correct     {'yes' if correct else 'NO'}   [{elapsed:.3f} s]",
    ]
    return _emit(args, doc, human)


def cmd_boxes_reduce(args):
    table = _load_function(args.function)
    t0 = time.perf_counter()
    reduction = boxworld.reduce_to_pr(table)
    elapsed = time.perf_counter() - t0
    doc = {"command": "boxes reduce",
           "d": table.d,
           "arities": list(table.arities),
           "reducible": reduction is not None}
    if reduction is None:
        human = [f"function        {args.function}",
                 f"reducible       no   [{elapsed:.3f} s]"]
    else:
        doc["reduction"] = {"order": list(reduction.order),
                            "lambda": reduction.lam,
                            "g": list(reduction.g),
                            "h": list(reduction.h),
                            "s": list(reduction.s)}
        human = [
            f"function        {args.function}",
            f"reducible       yes   [{elapsed:.3f} s]",
            f"derivative      order {','.join(map(str, reduction.order))}",
            f"lambda          {reduction.lam}",
            f"g coefficients  {','.join(map(str, reduction.g))}",
            f"h coefficients  {','.join(map(str, reduction.h))}",
            f"s coefficients  {','.join(map(str, reduction.s))}",
        ]
    return _emit(args, doc, human)


def _default_threads():
    raw = os.environ.get("LINGAME_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="machine-readable report on stdout")
    common.add_argument("--cap", type=int, default=None,
                        help="enumeration cap override")
    common.add_argument("--tolerance", type=float, default=WITNESS_MARGIN,
                        help="agreement/witness margin (default 1e-9)")
    common.add_argument("--threads", type=int, default=None,
                        help="threads for bound computation "
                             "(default: LINGAME_THREADS or 1)")

    parser = _Parser(prog="lingame",
                     description="Linear nonlocal games over finite "
                                 "Abelian groups: values, bounds, "
                                 "witnesses and box protocols.")
    sub = parser.add_subparsers(dest="subcommand", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common],
                       help="full value and bound report for a game file")
    p.add_argument("game")
    p.add_argument("--strategy", default=None,
                   help="strategy file to evaluate against the game")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("chsh", parents=[common],
                       help="analytic vs numeric bound for the additive "
                            "pairwise-product game")
    p.add_argument("--players", type=int, required=True)
    p.add_argument("--outcomes", type=int, required=True)
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("diew", parents=[common],
                       help="biseparable bound and witness verdict")
    p.add_argument("game")
    p.add_argument("--strategy", default=None)
    p.set_defaults(func=cmd_diew)

    p = sub.add_parser("separable", parents=[common],
                       help="additive-separability check")
    p.add_argument("game")
    p.set_defaults(func=cmd_separable)

    boxes = sub.add_parser("boxes", help="nonlocal box protocols")
    boxes_sub = boxes.add_subparsers(dest="boxcommand", required=True,
                                     parser_class=_Parser)
    p = boxes_sub.add_parser("run", parents=[common],
                             help="run the communication protocol")
    p.add_argument("function")
    p.add_argument("--shots", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_boxes_run)
    p = boxes_sub.add_parser("reduce", parents=[common],
                             help="search for a PR-box reduction")
    p.add_argument("function")
    p.set_defaults(func=cmd_boxes_reduce)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", None) is None:
        args.threads = _default_threads()
    try:
        return args.func(args)
    except ResourceLimitError as e:
        print(f"lingame: resource cap exceeded: {e}", file=sys.stderr)
        return 2
    except (GameFormatError, ValidationError, NoThresholdError) as e:
        print(f"lingame: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
