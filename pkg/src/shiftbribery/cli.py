"""Command-line workbench: ``shiftbribery {winners,bribe,crosscheck,generate,bench}``.

Exit codes: 0 success or feasible, 10 infeasible, 11 inconclusive, 2 usage error
or no applicable solver, 64 unreadable input.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bench import SUITES, format_table, run_bench
from .bribery import STRATEGIES, dispatch_solver
from .crosscheck import CrosscheckConfig, run_crosscheck
from .errors import BriberyError, NoApplicableSolver, ParseError, PreconditionViolated
from .reductions import (
    gen_borda_from_mis,
    gen_greedy_approval_cc_from_setcover,
    gen_kborda_from_clique,
)
from .rules import RULE_KINDS, RuleSpec, borda_scores, greedy_cc, t_approval_scores, winning_committee
from .textio import format_instance, parse_election, parse_graph, parse_instance, parse_set_cover, run_record

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 10
EXIT_INCONCLUSIVE = 11
EXIT_PARSE = 64

OUTCOME_EXIT = {"feasible": EXIT_OK, "infeasible": EXIT_INFEASIBLE, "inconclusive": EXIT_INCONCLUSIVE}


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _rule(text: str) -> RuleSpec:
    try:
        return RuleSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError("epsilon must be positive")
    return value


# -- winners ---------------------------------------------------------------------


def cmd_winners(args, out) -> int:
    election = parse_election(_read(args.election))
    rule, k = args.rule, args.k
    if not 1 <= k <= election.m:
        raise UsageError(f"k must lie in [1, {election.m}]")
    t = rule.approval_threshold(election.m, k)
    if t is not None and t > election.m:
        raise UsageError(f"approval threshold {t} exceeds {election.m} candidates")
    names = election.candidates
    record = {"rule": str(rule), "k": k}
    if rule.is_greedy:
        g = greedy_cc(election, k, t)
        record["rounds"] = [
            {"round": j + 1, "candidate": names[c], "gain": gain} for j, (c, gain) in enumerate(zip(g.members, g.gains))
        ]
        record["committee"] = [names[c] for c in g.committee]
        members = set(g.committee)
        record["members"] = {name: i in members for i, name in enumerate(names)}
    else:
        scores = borda_scores(election) if t is None else t_approval_scores(election, t)
        record["scores"] = dict(zip(names, scores))
        verdict = {}
        for i, name in enumerate(names):
            witness = winning_committee(election, rule, k, i)
            verdict[name] = witness is not None
        record["members"] = verdict
    if args.json:
        out.write(json.dumps(record) + "\n")
        return EXIT_OK
    out.write(f"rule {rule}, k={k}\n")
    if "rounds" in record:
        for r in record["rounds"]:
            out.write(f"round {r['round']}: {r['candidate']} (gain {r['gain']})\n")
    for name in names:
        score = f"  score {record['scores'][name]}" if "scores" in record else ""
        out.write(f"{name}: {'member' if record['members'][name] else 'not a member'}{score}\n")
    return EXIT_OK


# -- bribe -----------------------------------------------------------------------


def cmd_bribe(args, out) -> int:
    if args.strategy == "fptas" and args.epsilon is None:
        raise UsageError("strategy fptas needs --epsilon")
    if args.strategy == "xp_shifts" and args.smax is None:
        raise UsageError("strategy xp_shifts needs --smax")
    base = None if args.instance == "-" else Path(args.instance).parent
    instance = parse_instance(_read(args.instance), base)
    report = dispatch_solver(instance, args.strategy, epsilon=args.epsilon, s_max=args.smax)
    out.write(run_record(instance, report, __version__, include_timing=not args.no_timing) + "\n")
    return OUTCOME_EXIT[report.outcome]


# -- crosscheck ------------------------------------------------------------------


def cmd_crosscheck(args, out) -> int:
    rules = tuple(RULE_KINDS) if args.rules == "all" else tuple(x.strip() for x in args.rules.split(","))
    unknown = [r for r in rules if r not in RULE_KINDS]
    if unknown:
        raise UsageError(f"unknown rule kind(s): {', '.join(unknown)}")
    if args.trials < 0 or args.m_max < 1 or args.n_max < 1 or args.jobs < 1:
        raise UsageError("--trials must be >= 0; --m-max, --n-max and --jobs must be >= 1")
    if args.m_max > 6 or args.n_max > 6:
        raise UsageError("--m-max and --n-max are limited to 6 by the oracle guard")
    cfg = CrosscheckConfig(
        trials=args.trials, seed=args.seed, m_max=args.m_max, n_max=args.n_max, rules=rules, jobs=args.jobs
    )

    failing = []

    def emit(line):
        if args.verbose:
            out.write(line + "\n")
        elif '"ok": false' in line:
            # the failing record carries the offending instance for replay
            failing.append(line)

    summary = run_crosscheck(cfg, emit)
    for line in failing:
        out.write(line + "\n")
    out.write(summary.to_line() + "\n")
    return EXIT_OK if summary.ok else 1


# -- generate ----------------------------------------------------------------------


def cmd_generate(args, out) -> int:
    text = _read(args.source_file)
    if args.source == "mis":
        graph = parse_graph(text)
        instance = gen_borda_from_mis(graph, args.h)
        header = f"generated from a colored graph (multicolored independent set), h={args.h}"
    elif args.source == "clique":
        graph = parse_graph(text)
        instance = gen_kborda_from_clique(graph, args.h)
        header = f"generated from a graph (clique), h={args.h}"
    else:
        inst = parse_set_cover(text, args.h)
        instance = gen_greedy_approval_cc_from_setcover(inst, args.t)
        header = f"generated from a set system (set cover), h={args.h}, t={args.t}"
    header += f"\nbudget {instance.budget}"
    out.write(format_instance(instance, header))
    return EXIT_OK


# -- bench ------------------------------------------------------------------------


def cmd_bench(args, out) -> int:
    if args.repeat < 1:
        raise UsageError("--repeat must be at least 1")
    rows = run_bench(args.suite, args.repeat)
    if args.json:
        for row in rows:
            out.write(json.dumps(row.to_record()) + "\n")
    else:
        out.write(format_table(rows))
    return EXIT_OK


# -- entry point --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shiftbribery", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("winners", help="winning-committee membership of every candidate")
    p.add_argument("election", help="election file, or - for standard input")
    p.add_argument("--rule", type=_rule, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_winners)

    p = sub.add_parser("bribe", help="solve one Shift Bribery instance")
    p.add_argument("instance", help="instance file, or - for standard input")
    p.add_argument("--strategy", choices=STRATEGIES, default="auto")
    p.add_argument("--epsilon", type=_fraction)
    p.add_argument("--smax", type=int)
    p.add_argument("--no-timing", action="store_true", help="omit elapsed_ms for byte-stable output")
    p.set_defaults(func=cmd_bribe)

    p = sub.add_parser("crosscheck", help="compare every applicable solver with the oracle")
    p.add_argument("--rules", default="all", help="comma-separated rule kinds, or 'all'")
    p.add_argument("--m-max", type=int, default=5)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--verbose", action="store_true", help="one line per trial")
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("generate", help="materialize a hardness construction")
    p.add_argument("source", choices=("mis", "clique", "setcover"))
    p.add_argument("source_file")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--t", type=int, default=3)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="timing and node counts per solver")
    p.add_argument("--suite", choices=SUITES, default="minimal")
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except (UsageError, NoApplicableSolver, PreconditionViolated) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except BriberyError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
