"""Command line interface.

Subcommands: check (evaluate a formula), monitor (stream a trace), probability
(exact completion probability), next (conditional next-outcome distribution),
laws (replay the law registry), enumerate (list admissible assignments), and
explain (per-node evaluation trace). All output is deterministic; probabilities
print as reduced fractions.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analysis import (
    check_compatibility,
    completion_probability,
    completion_probability_weighted,
    next_outcome_distribution,
)
from .core import FreqLogicError, count_admissible, iter_admissible, load_model_file
from .formula import (
    BlackBox,
    Circle,
    Next,
    Star,
    WhiteBox,
    parse,
)
from .laws import check_all_laws, check_law, list_laws, random_models
from .monitor import Monitor, MonitorConfig, load_trace
from .semantics import OBSERVED, Engine, EvalContext, Evaluator, Member, explain


def _engine(args) -> Engine:
    return Engine(args.engine)


def _parse_selector(text: str):
    if text == "observed":
        return OBSERVED
    if text.startswith("member:"):
        return Member(tuple(s.strip() for s in text[len("member:"):].split(",")))
    raise FreqLogicError(
        f"bad selector {text!r}: expected 'observed' or 'member:a,b,...'"
    )


def _modal_root(f):
    if isinstance(f, WhiteBox):
        return "box", f.operand, 1
    if isinstance(f, Circle):
        return "circ", f.operand, 1
    if isinstance(f, BlackBox):
        return "bbox", f.operand, 1
    if isinstance(f, Star):
        return "star", f.operand, 1
    if isinstance(f, Next):
        return "next", f.operand, f.steps
    raise FreqLogicError("--max needs a modal operator at the top of the formula")


def cmd_check(args) -> int:
    model = load_model_file(args.model)
    f = parse(args.formula)
    selector = _parse_selector(args.selector)
    ev = Evaluator(model, _engine(args))
    value = ev.evaluate(f, args.world, selector)
    print("true" if value else "false")
    if args.max:
        op, operand, steps = _modal_root(f)
        print(f"max index: {ev.max_index(op, operand, args.world, selector, steps)}")
    return 0 if value else 1


def cmd_explain(args) -> int:
    model = load_model_file(args.model)
    f = parse(args.formula)
    selector = _parse_selector(args.selector)
    ctx = EvalContext(model, args.world, selector)
    print(explain(ctx, f, _engine(args)))
    return 0


def _fractions(d: dict) -> dict:
    return {k: str(v) for k, v in d.items()}


def cmd_monitor(args) -> int:
    model = load_model_file(args.model)
    if model.observed:
        print(
            "note: the model file's obs line is ignored; the trace drives the monitor",
            file=sys.stderr,
        )
    with open(args.trace, encoding="utf-8") as fh:
        trace = load_trace(fh.read(), args.csv_column)
    mon = Monitor(
        model.spec,
        model.weights,
        MonitorConfig(debug_check=not args.no_debug_check),
    )
    jsonl = args.format == "jsonl"
    for outcome in trace:
        report = mon.ingest(outcome)
        if jsonl:
            print(
                json.dumps(
                    {
                        "step": report.step,
                        "outcome": report.outcome,
                        "observed_freq": _fractions(report.observed_freq),
                        "compatible": report.compatible,
                        "completion_prob": str(report.completion_prob),
                        "next_dist": None
                        if report.next_dist is None
                        else _fractions(report.next_dist),
                        "first_violation": report.first_violation,
                    },
                    sort_keys=True,
                )
            )
        else:
            status = "ok" if report.compatible else "VIOLATION"
            dist = (
                " next " + " ".join(f"{p}={q}" for p, q in report.next_dist.items())
                if report.next_dist
                else ""
            )
            print(
                f"step {report.step:>3} {report.outcome:<10} {status:<9} "
                f"P(complete)={report.completion_prob}{dist}"
            )
    if mon.step == model.spec.n:
        summary = mon.finalize()
        if jsonl:
            print(
                json.dumps(
                    {
                        "summary": True,
                        "steps": summary.steps,
                        "member": summary.member,
                        "final_freq": _fractions(summary.final_freq),
                        "first_violation": summary.first_violation,
                    },
                    sort_keys=True,
                )
            )
        else:
            verdict = "realizes the target frequencies" if summary.member else "misses the target frequencies"
            print(f"series complete: {verdict}")
    elif not jsonl:
        print(f"trace covers {mon.step} of {model.spec.n} trials")
    return 1 if mon.first_violation is not None else 0


def cmd_probability(args) -> int:
    model = load_model_file(args.model)
    m = args.world if args.world is not None else len(model.observed)
    if model.weights is not None:
        print(completion_probability_weighted(model, m))
    else:
        print(completion_probability(model, m))
    return 0


def cmd_next(args) -> int:
    model = load_model_file(args.model)
    m = args.world if args.world is not None else len(model.observed)
    verdict = check_compatibility(model, m)
    if not verdict.compatible:
        print(
            f"no admissible completion after world {m} "
            f"(atom {verdict.witness_atom} is over target)",
            file=sys.stderr,
        )
        return 2
    for p, q in next_outcome_distribution(model, m).items():
        print(f"{p} {q}")
    return 0


def cmd_enumerate(args) -> int:
    model = load_model_file(args.model)
    total = count_admissible(model.spec)
    if total > 10**7:
        print(f"warning: {total} admissible assignments", file=sys.stderr)
    shown = 0
    for assignment in iter_admissible(model.spec):
        if shown >= args.limit:
            break
        print(",".join(assignment))
        shown += 1
    if total > shown:
        print(f"({total - shown} of {total} omitted)", file=sys.stderr)
    return 0


def cmd_laws(args) -> int:
    known = {law_id for law_id, _, _ in list_laws()}
    if args.law in (None, "all"):
        selected = [law_id for law_id, _, _ in list_laws()]
    else:
        selected = [s.strip() for s in args.law.split(",")]
        for law_id in selected:
            if law_id not in known:
                raise FreqLogicError(f"no law registered under {law_id!r}")

    if args.random is not None:
        seed, count = args.random
        models = random_models(seed, count)
        origin = f"{count} random models (seed {seed})"
    elif args.model is not None:
        models = [load_model_file(args.model)]
        origin = args.model
    else:
        raise FreqLogicError("provide a model file or --random SEED COUNT")

    engine = _engine(args)
    expected = {law_id for law_id, _, exp in list_laws() if exp}
    positive = [law_id for law_id in selected if law_id in expected]
    negative = [law_id for law_id in selected if law_id not in expected]

    all_ok = True
    if positive:
        gathered = {law_id: [] for law_id in positive}
        for i, model in enumerate(models):
            for report in check_all_laws(model, positive, engine):
                gathered[report.law_id].append((i, report))
        for law_id in positive:
            rows = gathered[law_id]
            bad = [(i, r) for i, r in rows if not r.passed]
            instances = sum(r.instances for _, r in rows)
            if bad:
                all_ok = False
                i, r = bad[0]
                print(f"FAIL {law_id}  instances={instances}  model #{i + 1} of {origin}")
                print(f"     {r.counterexample}")
            else:
                print(f"pass {law_id}  instances={instances}  over {origin}")
    for law_id in negative:
        # Non-laws are existential: they are refuted on their pinned witness
        # model, whatever models were requested.
        report = check_law(law_id, None, engine)
        if report.passed:
            all_ok = False
            print(f"FAIL {law_id}  expected a counterexample on the witness model")
        else:
            print(f"pass {law_id}  refuted as expected: {report.counterexample}")
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freqlogic",
        description="Exact model checking and monitoring of frequency formulas "
        "over finite event series",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_engine(p):
        p.add_argument(
            "--engine",
            choices=[e.value for e in Engine],
            default=Engine.ACCELERATED.value,
            help="evaluation engine (default accelerated)",
        )

    p = sub.add_parser("check", help="evaluate a formula at a world")
    p.add_argument("model", help="model file")
    p.add_argument("formula", help="formula text")
    p.add_argument("--world", type=int, required=True, help="1-based world index")
    p.add_argument(
        "--selector",
        default="observed",
        help="'observed' (default) or 'member:a,b,...'",
    )
    p.add_argument("--max", action="store_true", help="also print the largest satisfied index")
    add_engine(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("explain", help="show why a formula holds or fails")
    p.add_argument("model", help="model file")
    p.add_argument("formula", help="formula text")
    p.add_argument("--world", type=int, required=True)
    p.add_argument("--selector", default="observed")
    add_engine(p)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("monitor", help="stream a trace through the monitor")
    p.add_argument("model", help="model file (spec and optional weights)")
    p.add_argument("trace", help="trace file, one outcome per line")
    p.add_argument("--format", choices=["table", "jsonl"], default="table")
    p.add_argument("--csv-column", type=int, default=None, help="take outcomes from this comma-separated column")
    p.add_argument("--no-debug-check", action="store_true", help="skip the from-scratch probability cross-check")
    p.set_defaults(func=cmd_monitor)

    p = sub.add_parser("probability", help="exact completion probability of the observed prefix")
    p.add_argument("model", help="model file")
    p.add_argument("--world", type=int, default=None, help="prefix length (default: all observed)")
    p.set_defaults(func=cmd_probability)

    p = sub.add_parser("next", help="conditional distribution of the next outcome")
    p.add_argument("model", help="model file")
    p.add_argument("--world", type=int, default=None, help="prefix length (default: all observed)")
    p.set_defaults(func=cmd_next)

    p = sub.add_parser("laws", help="replay registered laws against models")
    p.add_argument("model", nargs="?", default=None, help="model file")
    p.add_argument("--law", default=None, help="comma-separated law ids (default all)")
    p.add_argument(
        "--random",
        nargs=2,
        type=int,
        metavar=("SEED", "COUNT"),
        default=None,
        help="check on a deterministic random model family",
    )
    p.add_argument(
        "--engine",
        choices=[e.value for e in Engine],
        default=Engine.REFERENCE.value,
        help="evaluation engine (default reference)",
    )
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser("enumerate", help="list admissible assignments")
    p.add_argument("model", help="model file")
    p.add_argument("--limit", type=int, default=1000, help="print at most this many (default 1000)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("list-laws", help="print the law registry")
    p.set_defaults(func=cmd_list_laws)

    return parser


def cmd_list_laws(args) -> int:
    for law_id, summary, expected in list_laws():
        kind = "law    " if expected else "non-law"
        print(f"{kind} {law_id:<34} {summary}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FreqLogicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
