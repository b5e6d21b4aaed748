"""Command-line front end.

Exit codes: 0 success, 2 unreadable or invalid input, 3 enumeration guard hit.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import io
from .ceei import build_s_prime, ceei_test
from .core import CapacityError, DomainError, Instance, utilities
from .efficiency import EfficiencyLevel, efficiency_level, find_dominating_via_cycle, find_dominator
from .experiments import GeneratorConfig, run_experiment
from .fairness import FairnessLevel, fairness_report
from .sequences import enumerate_relation, execute_sequence, frustrating_residual, sequence_of

EXIT_INPUT = 2
EXIT_CAPACITY = 3


def _read(path: str, what: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise io.ParseError(f"cannot read {what} file {path!r}: {exc.strerror}") from None


def _instance(args) -> Instance:
    return io.parse_instance(_read(args.instance, "instance"))


def _fmt_set(objs) -> str:
    return "{" + ",".join(str(o + 1) for o in sorted(objs)) + "}"


def _fmt_seq(seq) -> str:
    return "<" + ", ".join(str(a + 1) for a in seq) + ">"


def _fmt_prices(prices) -> str:
    exact = ", ".join(str(p) for p in prices)
    approx = ", ".join(f"{float(p):.6g}" for p in prices)
    return f"({exact})  ~ ({approx})"


def _emit(args, report: dict, lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(io.to_jsonable(report), indent=2))
    else:
        print("\n".join(lines))


def cmd_analyze(args) -> int:
    inst = _instance(args)
    alloc = io.parse_allocation(_read(args.allocation, "allocation"), inst)
    eff = efficiency_level(inst, alloc)
    prices = ceei_test(inst, alloc)
    fair = fairness_report(inst, alloc, ceei_decider=lambda _i, _a: prices)
    report = {
        "allocation": alloc.to_one_based(),
        "utilities": list(utilities(inst, alloc)),
        "efficiency": eff.name,
        "fairness": fair["level"],
        "thresholds": fair["agents"],
    }
    lines = [
        f"allocation: {alloc}",
        "utilities: " + ", ".join(str(u) for u in utilities(inst, alloc)),
        f"efficiency: {eff.name}, fairness: {fair['level']}",
    ]
    seq = sequence_of(inst, alloc)
    if seq is not None:
        report["sequence"] = [a + 1 for a in seq]
        lines.append(f"generating sequence: {_fmt_seq(seq)}")
    else:
        residual = frustrating_residual(inst, alloc)
        cycle, dominator = find_dominating_via_cycle(inst, alloc)
        report["frustrating_domain"] = sorted(o + 1 for o in cycle.objects)
        report["residual_domain"] = sorted(o + 1 for o in residual)
        report["trading_cycle"] = cycle.to_json()
        report["dominator"] = dominator.to_one_based()
        lines += [
            f"frustrating domain: {_fmt_set(cycle.objects)} (sequencing stalls on {_fmt_set(residual)})",
            f"trading cycle: {cycle}",
            f"dominated by: {dominator}  utilities "
            + ", ".join(str(u) for u in utilities(inst, dominator)),
        ]
    if eff == EfficiencyLevel.SnP:
        dominator = find_dominator(inst, alloc)
        report["dominator"] = dominator.to_one_based()
        lines.append(
            f"dominated by: {dominator}  utilities " + ", ".join(str(u) for u in utilities(inst, dominator))
        )
    if prices is not None:
        report["prices"] = io.prices_to_json(prices)
        lines.append(f"CEEI prices: {_fmt_prices(prices)}")
    lines.append("agent  utility  MFS  PFS  mFS")
    for row in fair["agents"]:
        lines.append(
            f"{row['agent']:>5}  {row['utility']}  {row['maxmin_share']}  "
            f"{row['proportional_share']}  {row['minmax_share']}"
        )
    _emit(args, report, lines)
    return 0


def cmd_sequence(args) -> int:
    inst = _instance(args)
    path = Path(args.sequence)
    if path.suffix == ".json" or path.exists():
        seq = io.parse_sequence(_read(args.sequence, "sequence"), inst)
    else:
        try:
            picks = [int(tok) for tok in args.sequence.replace(",", " ").split()]
        except ValueError:
            raise io.ParseError(f"sequence: cannot parse {args.sequence!r}") from None
        seq = io.parse_picks(picks, inst)
    allocs = sorted(execute_sequence(inst, seq), key=lambda a: a.to_one_based())
    report = {"sequence": [a + 1 for a in seq], "allocations": [a.to_one_based() for a in allocs]}
    lines = [f"sequence {_fmt_seq(seq)} generates {len(allocs)} allocation(s):"]
    lines += [f"  {a}" for a in allocs]
    _emit(args, report, lines)
    return 0


def cmd_ceei(args) -> int:
    inst = _instance(args)
    alloc = io.parse_allocation(_read(args.allocation, "allocation"), inst)
    if args.dump_system:
        sys.stderr.write(build_s_prime(inst, alloc).dump())
    prices = ceei_test(inst, alloc)
    report = {"ceei": prices is not None, "prices": io.prices_to_json(prices) if prices else None}
    lines = [f"CEEI prices: {_fmt_prices(prices)}" if prices is not None else "not CEEI"]
    _emit(args, report, lines)
    return 0


def cmd_enumerate(args) -> int:
    inst = _instance(args)
    relation = enumerate_relation(inst)
    report = io.relation_to_json(relation)
    lines = [f"{_fmt_seq(s)} -> {a}" for s, a in relation.edges()]
    lines.append(f"{len(relation.pairs)} edges")
    _emit(args, report, lines)
    return 0


def cmd_experiment(args) -> int:
    data = json.loads(_read(args.config, "config")) if args.config else {}
    if not isinstance(data, dict):
        raise io.ParseError("config: expected a JSON object")
    if args.seed is not None:
        data["seed"] = args.seed
    num_instances = int(args.instances or data.get("num_instances", 20))
    try:
        config = GeneratorConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise io.ParseError(f"config: {exc}") from None
    report = run_experiment(config, num_instances, workers=args.workers)
    paths = report.write(args.out_dir)
    agg = report.aggregate()["mean"]
    lines = [
        f"{num_instances} {config.model} instances, {config.num_agents} agents x {config.num_objects} objects",
        "mean counts (rows: efficiency, columns: fairness)",
        "       " + "".join(f"{f.name:>10}" for f in FairnessLevel),
    ]
    for e in EfficiencyLevel:
        lines.append(f"{e.name:>6} " + "".join(f"{agg[e, f]:>10.2f}" for f in FairnessLevel))
    lines += [f"wrote {p}" for p in paths.values()]
    _emit(args, {"files": {k: str(v) for k, v in paths.items()}, **report.to_json()}, lines)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pickseq", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.set_defaults(func=func)
        return p

    p = add("analyze", cmd_analyze, "efficiency and fairness of an allocation")
    p.add_argument("--instance", required=True)
    p.add_argument("--allocation", required=True)

    p = add("sequence", cmd_sequence, "allocations generated by a picking sequence")
    p.add_argument("--instance", required=True)
    p.add_argument("--sequence", required=True, help="JSON file or comma-separated agents, e.g. 2,1,2")

    p = add("ceei", cmd_ceei, "exact CEEI test")
    p.add_argument("--instance", required=True)
    p.add_argument("--allocation", required=True)
    p.add_argument("--dump-system", action="store_true", help="print the price system to stderr")

    p = add("enumerate", cmd_enumerate, "the relation between sequences and allocations")
    p.add_argument("--instance", required=True)

    p = add("experiment", cmd_experiment, "classify all allocations of random instances")
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--instances", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-dir", default="results")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (io.ParseError, DomainError, IndexError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
