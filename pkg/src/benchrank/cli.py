"""Command-line interface.

Verbs:
    model validate|show     check or pretty-print a model file
    elicit utility|capacity derive model parameters from a session file or prompts
    bench run               run a benchmark family, write record documents
    bench qscore            run the Q-score protocol
    ingest                  load a records document into the store
    score                   evaluate stored/provided alternatives (canonical JSON)
    explain                 contrastive explanation for one alternative
    report                  ranked table (markdown or canonical JSON)
    serve                   run the HTTP API (and the UI, when built)

The store root comes from --store or the BENCHRANK_STORE environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional

from .elicitation import (
    CapacitySession,
    IntensityLabel,
    UtilitySession,
    check_consistency,
    derive_capacity,
    derive_utility_function,
    gap_name,
    parse_gap,
    session_from_doc,
)
from .errors import ConsistencyError, SolverFailure, ValidationError
from .explanation import hierarchical_explanation
from .jsonutil import canonical_json
from .mcda import (
    CriteriaTree,
    MeasurementProfile,
    Node,
    NodeKind,
    load_model,
    save_model,
)
from .service.records import BenchmarkRecord, parse_ingest_document
from .service.report import build_profiles, evaluate_and_report
from .service.store import Store, default_store_root


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def _store(args: argparse.Namespace) -> Store:
    return Store(args.store if args.store else default_store_root())


def _load_model_arg(args: argparse.Namespace) -> CriteriaTree:
    if getattr(args, "model", None):
        return load_model(args.model)
    if getattr(args, "model_id", None):
        return _store(args).load_model(args.model_id)
    raise ValidationError("provide --model FILE or --model-id ID")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


# -- model -------------------------------------------------------------------

def _cmd_model_validate(args: argparse.Namespace) -> int:
    tree = load_model(args.path)
    leaves = tree.leaves()
    print(
        f"ok: {len(tree.nodes)} nodes, {len(leaves)} criteria, "
        f"root {tree.root!r}, scope {tree.scope_label!r}"
    )
    return 0


def _cmd_model_show(args: argparse.Namespace) -> int:
    tree = load_model(args.path)

    def walk(node_id: str, depth: int) -> None:
        node = tree.node(node_id)
        pad = "  " * depth
        if node.kind is NodeKind.CRITERION:
            u = node.utility
            anchors = f"bad={u.bad_value:g} good={u.good_value:g}"
            print(f"{pad}{node.id}  [{u.metric_id}, {u.direction.value}, {anchors}]")
        else:
            print(f"{pad}{node.id}  (aggregation over {len(node.choquet.children)})")
            for child in node.choquet.children:
                walk(child, depth + 1)

    walk(tree.root, 0)
    return 0


# -- elicit --------------------------------------------------------------------

_LABEL_PROMPT = "/".join(gap_name(label) for label in IntensityLabel)


def _ask(prompt: str) -> str:
    # prompts go to stderr so stdout stays clean JSON even when piped
    print(prompt, end="", file=sys.stderr, flush=True)
    return input()


def _prompt_gaps(count: int, allow_tie: bool) -> List[Optional[IntensityLabel]]:
    gaps: List[Optional[IntensityLabel]] = []
    extra = "/Tie" if allow_tie else ""
    for i in range(count):
        while True:
            raw = _ask(f"gap {i + 1}/{count} ({_LABEL_PROMPT}{extra}): ").strip()
            try:
                gap = parse_gap(raw)
            except ValidationError as exc:
                print(f"  {exc}", file=sys.stderr)
                continue
            if gap is None and not allow_tie:
                print("  ties are not allowed here", file=sys.stderr)
                continue
            gaps.append(gap)
            break
    return gaps


def _interactive_utility_session(args: argparse.Namespace) -> UtilitySession:
    metric = args.metric or _ask("metric id: ").strip()
    raw = _ask("metric values, worst to best, comma separated: ")
    elements = tuple(float(x) for x in raw.replace(",", " ").split())
    good = float(_ask(f"satisficing (Good) value among {elements}: "))
    print("label the gain in satisfaction between consecutive values", file=sys.stderr)
    gaps = _prompt_gaps(len(elements) - 1, allow_tie=False)
    return UtilitySession(metric, elements, tuple(gaps), good)  # type: ignore[arg-type]


def _interactive_capacity_session(args: argparse.Namespace) -> CapacitySession:
    node_id = args.node or _ask("aggregation node id: ").strip()
    raw = args.children or _ask("children ids, comma separated: ")
    children = tuple(c.strip() for c in raw.replace(",", " ").split())
    patterns = [frozenset()]
    patterns += [frozenset({c}) for c in children]
    if len(children) > 2:
        patterns += [
            frozenset({a, b})
            for i, a in enumerate(children)
            for b in children[i + 1 :]
        ]
    patterns.append(frozenset(children))
    print(
        "fictitious alternatives (Good on the listed children, Bad elsewhere):",
        file=sys.stderr,
    )
    for i, p in enumerate(patterns):
        name = ",".join(sorted(p)) if p else "(none: all-Bad)"
        print(f"  [{i}] {name}", file=sys.stderr)
    order = _ask("rank them worst to best as indices, e.g. 0 2 1 3: ")
    ranking = tuple(patterns[int(i)] for i in order.replace(",", " ").split())
    print("label the gap between consecutive ranked alternatives", file=sys.stderr)
    gaps = _prompt_gaps(len(ranking) - 1, allow_tie=True)
    return CapacitySession(node_id, children, ranking, tuple(gaps))


def _write_into_model(args: argparse.Namespace, node_id: str, payload, kind) -> int:
    tree = load_model(args.model)
    if node_id not in tree.nodes:
        return _fail(f"model has no node {node_id!r}")
    node = tree.nodes[node_id]
    if node.kind is not kind:
        return _fail(f"node {node_id!r} has kind {node.kind.value}")
    nodes = dict(tree.nodes)
    nodes[node_id] = Node(node.id, node.kind, node.label, payload)
    updated = CriteriaTree(
        nodes=nodes,
        root=tree.root,
        scope_label=tree.scope_label,
        metric_aggregation=tree.metric_aggregation,
    )
    save_model(updated, args.out or args.model)
    print(f"updated node {node_id!r} in {args.out or args.model}", file=sys.stderr)
    return 0


def _cmd_elicit_utility(args: argparse.Namespace) -> int:
    if args.session:
        doc = json.loads(Path(args.session).read_text(encoding="utf-8"))
        session = session_from_doc(doc)
        if not isinstance(session, UtilitySession):
            return _fail("session file is not a utility session")
    else:
        session = _interactive_utility_session(args)
    violations = check_consistency(session)
    if violations:
        for v in violations:
            print(f"violation[{v.code}]: {v.message}", file=sys.stderr)
        return 1
    function = derive_utility_function(session)
    doc = {
        "metric_id": function.metric_id,
        "direction": function.direction.value,
        "breakpoints": [[v, u] for v, u in function.breakpoints],
        "bad_index": function.bad_index,
        "good_index": function.good_index,
    }
    print(canonical_json(doc), end="")
    if args.model:
        node = args.node
        if node is None:
            return _fail("--model requires --node to know where to store the utility")
        return _write_into_model(args, node, function, NodeKind.CRITERION)
    return 0


def _cmd_elicit_capacity(args: argparse.Namespace) -> int:
    if args.session:
        doc = json.loads(Path(args.session).read_text(encoding="utf-8"))
        session = session_from_doc(doc)
        if not isinstance(session, CapacitySession):
            return _fail("session file is not a capacity session")
    else:
        session = _interactive_capacity_session(args)
    violations = check_consistency(session)
    if violations:
        for v in violations:
            print(f"violation[{v.code}]: {v.message}", file=sys.stderr)
        return 1
    params = derive_capacity(session)
    doc = {
        "singletons": dict(params.singleton_weights),
        "min_pairs": [
            {"pair": list(k), "weight": w} for k, w in sorted(params.min_weights.items())
        ],
        "max_pairs": [
            {"pair": list(k), "weight": w} for k, w in sorted(params.max_weights.items())
        ],
    }
    print(canonical_json(doc), end="")
    if args.model:
        node = args.node or session.node_id
        return _write_into_model(args, node, params, NodeKind.AGGREGATION)
    return 0


# -- bench ---------------------------------------------------------------------

def _parse_sizes(text: str) -> List[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.replace(",", " ").split()]


def _cmd_bench_run(args: argparse.Namespace) -> int:
    from .bench import SolverSpec, gen_instance, solve

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = SolverSpec(
        method=args.solver,
        budget=args.budget,
        command=tuple(args.adapter.split()) if args.adapter else (),
    )
    alternative = args.alternative or f"local:{args.solver}"
    records = []
    for size in _parse_sizes(args.sizes):
        params: Dict[str, object] = (
            {"N": size} if args.family == "factorization" else {"n": size}
        )
        for seed in range(args.seeds):
            instance = gen_instance(args.family, params, seed)
            if instance.problem is None:
                continue
            start = time.perf_counter()
            result = solve(instance.problem, spec, seed=seed)
            elapsed = time.perf_counter() - start
            metrics = {"objective": result.objective}
            if args.family == "maxcut":
                metrics["n"] = float(size)
                metrics["best_cut"] = result.objective
            record = BenchmarkRecord(
                alternative_id=alternative,
                family=args.family,
                instance=instance.descriptor,
                seed=seed,
                metrics=metrics,
                timestamp=_now(),
                provenance="local",
                wall_clock_s=elapsed,
                energy_j=result.energy_j,
            )
            records.append(record)
            name = f"{args.family}-{size}-{args.solver}-{seed}.json"
            (out_dir / name).write_text(canonical_json(record.to_doc()), encoding="utf-8")
    index = {"schema_version": 1, "records": [r.to_doc() for r in records]}
    (out_dir / "records.json").write_text(canonical_json(index), encoding="utf-8")
    print(f"wrote {len(records)} records to {out_dir}", file=sys.stderr)
    return 0


def _cmd_bench_qscore(args: argparse.Namespace) -> int:
    from .bench import QScoreConfig, SolverSpec, qscore

    cfg = QScoreConfig(
        sizes=tuple(_parse_sizes(args.sizes)),
        instances_per_size=args.instances,
        solver_budget=args.budget,
        seed=args.seed,
    )
    spec = SolverSpec(
        method=args.solver,
        budget=args.budget,
        command=tuple(args.adapter.split()) if args.adapter else (),
    )
    try:
        outcome = qscore(spec, cfg, repeats_per_instance=args.repeats)
    except SolverFailure as exc:
        return _fail(str(exc))
    doc = {
        "qscore": outcome.score,
        "solver": args.solver,
        "threshold": cfg.beta_threshold,
        "sizes": [
            {
                "n": s.n,
                "mean_best_cut": s.mean_best_cut,
                "beta": s.beta,
                "passed": s.passed,
                "instances": len(s.runs),
            }
            for s in outcome.sizes
        ],
    }
    print(canonical_json(doc), end="")
    if args.out:
        Path(args.out).write_text(canonical_json(doc), encoding="utf-8")
    return 0


# -- store-facing verbs ----------------------------------------------------------

def _cmd_ingest(args: argparse.Namespace) -> int:
    doc = json.loads(Path(args.document).read_text(encoding="utf-8"))
    report = _store(args).append_records(parse_ingest_document(doc))
    print(canonical_json(report.to_doc()), end="")
    return 0 if not report.rejected or args.allow_rejects else 1


def _parse_profile_args(specs: List[str]) -> List[MeasurementProfile]:
    profiles = []
    for spec in specs:
        # name=metric:value,metric:value
        name, _, rest = spec.partition("=")
        values = {}
        for pair in rest.split(","):
            metric, _, value = pair.partition(":")
            values[metric.strip()] = float(value)
        profiles.append(MeasurementProfile(name.strip(), values))
    return profiles


def _cmd_score(args: argparse.Namespace) -> int:
    tree = _load_model_arg(args)
    records = _store(args).load_records() if args.use_store else []
    profiles, warnings = build_profiles(tree, records)
    by_id = {p.alternative_id: p for p in profiles}
    for profile in _parse_profile_args(args.profile):
        by_id[profile.alternative_id] = profile
    report = evaluate_and_report(tree, profiles=list(by_id.values()))
    doc = report.to_doc()
    doc["warnings"] = sorted(set(doc["warnings"]) | set(warnings))
    print(canonical_json(doc), end="")
    return 0


def _cmd_explain(args: argparse.Namespace) -> int:
    tree = _load_model_arg(args)
    records = _store(args).load_records() if args.use_store else []
    profiles, _ = build_profiles(tree, records)
    by_id = {p.alternative_id: p for p in profiles}
    for profile in _parse_profile_args(args.profile):
        by_id[profile.alternative_id] = profile
    if args.alternative not in by_id:
        return _fail(f"no evaluable profile for {args.alternative!r}")
    report = hierarchical_explanation(
        tree, by_id[args.alternative], args.reference, list(by_id.values())
    )
    if args.format == "json":
        print(canonical_json(report.to_doc()), end="")
        return 0
    print(f"explanation of {args.alternative!r} vs {report.reference_kind.value}")
    print(f"{'node':<24}{'contribution':>14}{'share':>10}")
    for node_id in sorted(report.contributions):
        contribution = report.contributions[node_id]
        share = report.percentages[node_id]
        rendered = "-" if share is None else f"{share:.1f}%"
        print(f"{node_id:<24}{contribution:>14.6f}{rendered:>10}")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    tree = _load_model_arg(args)
    records = _store(args).load_records() if args.use_store else []
    report = evaluate_and_report(tree, records=records)
    if args.format == "json":
        print(report.to_json(), end="")
    else:
        print(report.to_markdown(), end="")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service.api import serve_api

    serve_api(
        args.store if args.store else default_store_root(),
        host=args.host,
        port=args.port,
        static_dir=Path(args.static) if args.static else None,
    )
    return 0


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="benchrank",
        description="application benchmarks + multi-criteria backend ranking",
    )
    parser.add_argument(
        "--store",
        default=None,
        help="store root (default: $BENCHRANK_STORE or ./benchrank-store)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_store_arg(p: argparse.ArgumentParser) -> None:
        # also accepted after the subcommand; SUPPRESS keeps the global value
        # intact when the per-command flag is absent
        p.add_argument("--store", default=argparse.SUPPRESS, help=argparse.SUPPRESS)

    model = sub.add_parser("model", help="model file operations").add_subparsers(
        dest="subcommand", required=True
    )
    validate = model.add_parser("validate")
    validate.add_argument("path")
    validate.set_defaults(func=_cmd_model_validate)
    show = model.add_parser("show")
    show.add_argument("path")
    show.set_defaults(func=_cmd_model_show)

    elicit = sub.add_parser("elicit", help="derive model parameters").add_subparsers(
        dest="subcommand", required=True
    )
    utility = elicit.add_parser("utility")
    utility.add_argument("--session", help="session file (omit for interactive)")
    utility.add_argument("--metric", help="metric id (interactive mode)")
    utility.add_argument("--model", help="model file to update")
    utility.add_argument("--node", help="criterion node id to receive the utility")
    utility.add_argument("--out", help="write the updated model here")
    utility.set_defaults(func=_cmd_elicit_utility)
    capacity = elicit.add_parser("capacity")
    capacity.add_argument("--session", help="session file (omit for interactive)")
    capacity.add_argument("--node", help="aggregation node id")
    capacity.add_argument("--children", help="children ids (interactive mode)")
    capacity.add_argument("--model", help="model file to update")
    capacity.add_argument("--out", help="write the updated model here")
    capacity.set_defaults(func=_cmd_elicit_capacity)

    bench = sub.add_parser("bench", help="run benchmark families").add_subparsers(
        dest="subcommand", required=True
    )
    run = bench.add_parser("run")
    run.add_argument("--family", required=True)
    run.add_argument("--solver", default="simulated_annealing")
    run.add_argument("--sizes", required=True, help="a..b or comma list")
    run.add_argument("--seeds", type=int, default=3, help="seeds (instances) per size")
    run.add_argument("--budget", type=int, default=20_000)
    run.add_argument("--adapter", help="external solver command")
    run.add_argument("--alternative", help="alternative id for the records")
    run.add_argument("--out", required=True)
    run.set_defaults(func=_cmd_bench_run)
    qs = bench.add_parser("qscore")
    qs.add_argument("--solver", default="simulated_annealing")
    qs.add_argument("--sizes", default="5,10,15,20,25,30")
    qs.add_argument("--instances", type=int, default=30)
    qs.add_argument("--budget", type=int, default=20_000)
    qs.add_argument("--repeats", type=int, default=1)
    qs.add_argument("--seed", type=int, default=0)
    qs.add_argument("--adapter", help="external solver command")
    qs.add_argument("--out")
    qs.set_defaults(func=_cmd_bench_qscore)

    ingest = sub.add_parser("ingest", help="load a records document")
    add_store_arg(ingest)
    ingest.add_argument("document")
    ingest.add_argument("--allow-rejects", action="store_true")
    ingest.set_defaults(func=_cmd_ingest)

    def add_eval_args(p: argparse.ArgumentParser) -> None:
        add_store_arg(p)
        p.add_argument("--model", help="model file")
        p.add_argument("--model-id", help="stored model id")
        p.add_argument(
            "--no-store",
            dest="use_store",
            action="store_false",
            help="ignore stored records",
        )
        p.add_argument(
            "--profile",
            action="append",
            default=[],
            help="inline profile: name=metric:value,metric:value",
        )

    score = sub.add_parser("score", help="evaluate alternatives (canonical JSON)")
    add_eval_args(score)
    score.set_defaults(func=_cmd_score)

    explain = sub.add_parser("explain", help="contrastive explanation")
    add_eval_args(explain)
    explain.add_argument("--alternative", required=True)
    explain.add_argument("--reference", choices=("worst", "ideal"), default="worst")
    explain.add_argument("--format", choices=("table", "json"), default="table")
    explain.set_defaults(func=_cmd_explain)

    report = sub.add_parser("report", help="ranked report")
    add_eval_args(report)
    report.add_argument("--format", choices=("markdown", "json"), default="markdown")
    report.set_defaults(func=_cmd_report)

    serve = sub.add_parser("serve", help="run the HTTP API")
    add_store_arg(serve)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8711)
    serve.add_argument("--static", help="directory of built UI assets to serve")
    serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, ConsistencyError) as exc:
        rc = _fail(str(exc))
        if isinstance(exc, ConsistencyError):
            for v in exc.violations:
                print(f"violation[{v.code}]: {v.message}", file=sys.stderr)
        return rc
    except KeyError as exc:
        return _fail(f"not found: {exc.args[0]!r}")
    except FileNotFoundError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
