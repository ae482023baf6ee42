"""Command line front end: analyze trials, manage stores, synthesize cohorts.

Exit codes: 0 success, 1 analysis error, 2 I/O or configuration error.
Structured (--json) output is byte-identical to the corresponding service
response.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from .analysis import MatchResult, ParamState, rank_categories
from .config import DEFAULT_EPSILON, EngineConfig
from .eks import (
    DemographicFilter,
    KnowledgeStore,
    PatientRecord,
    apply_patient,
    load_store,
    override_range,
    patient_record_to_doc,
    reset_category,
    save_store,
)
from .errors import GaitError, InvalidRange, NotFound, PersistenceError, VersionError
from .grf import process_trial
from .synth import CohortConfig, generate_cohort_files
from .trial import Gender, load_trial
from .wire import canonical_dumps, match_payload, tree_payload

_SUMMARY_GLYPHS = {
    ParamState.IN_RANGE: "#",
    ParamState.OUT_OF_RANGE: "o",
    ParamState.NO_DATA: ".",
}


def parse_filter_args(specs: list[str]) -> DemographicFilter:
    """--filter gender=female | age=lo:hi | height=lo:hi | mass=lo:hi."""
    genders = None
    intervals: dict[str, tuple[float, float] | None] = {
        "age": None,
        "height": None,
        "mass": None,
    }
    for spec in specs:
        if "=" not in spec:
            raise InvalidRange(f"bad filter '{spec}'; expected key=value")
        key, _, value = spec.partition("=")
        key = key.strip().lower()
        if key == "gender":
            try:
                genders = frozenset(
                    Gender(g.strip()) for g in value.split(",") if g.strip()
                )
            except ValueError as exc:
                raise InvalidRange(f"unknown gender in '{spec}'") from exc
        elif key in intervals:
            lo_raw, _, hi_raw = value.partition(":")
            try:
                lo = float(lo_raw) if lo_raw.strip() else float("-inf")
                hi = float(hi_raw) if hi_raw.strip() else float("inf")
            except ValueError as exc:
                raise InvalidRange(f"bad interval in '{spec}'") from exc
            intervals[key] = (lo, hi)
        else:
            raise InvalidRange(f"unknown filter key '{key}'")
    return DemographicFilter(
        genders=genders,
        age=intervals["age"],
        body_height_cm=intervals["height"],
        body_mass_kg=intervals["mass"],
    )


def _read_store(path: str) -> KnowledgeStore:
    return load_store(path)


def _print_match_table(results: list[MatchResult]) -> None:
    print(f"{'rank':>4}  {'category':<12} {'score':>14} {'used':>4}  summary")
    for rank, r in enumerate(results, start=1):
        glyphs = "".join(_SUMMARY_GLYPHS[s] for s in r.summary)
        print(f"{rank:>4}  {r.category_name:<12} {r.score:>14.6g} {r.n_used:>4}  {glyphs}")


def cmd_analyze(args: argparse.Namespace) -> int:
    store = _read_store(args.store)
    trial = load_trial(args.trial)
    config = EngineConfig(epsilon=args.epsilon)
    _, _, stps = process_trial(trial, config)
    demo_filter = parse_filter_args(args.filter)
    results = rank_categories(stps, store, demo_filter, args.epsilon)
    if args.json:
        sys.stdout.write(canonical_dumps(match_payload(results)))
    else:
        print(f"patient {trial.patient_meta.id}: best match -> {results[0].category_name}")
        _print_match_table(results)
    return 0


def _print_tree(store: KnowledgeStore) -> None:
    print("EKS")
    for node in tree_payload(store)["categories"]:
        marker = " [manual]" if node["has_manual_override"] else ""
        norm = " (norm)" if node["is_norm"] else ""
        print(f"  {node['name']}{norm} ({node['n_patients']}){marker}")
        for patient in node["patients"]:
            print(f"    - {patient['id']}")


def _finish_store_command(store: KnowledgeStore, args: argparse.Namespace) -> int:
    save_store(store, args.store)
    if args.json:
        sys.stdout.write(canonical_dumps(tree_payload(store)))
    else:
        _print_tree(store)
    return 0


def cmd_store_show_tree(args: argparse.Namespace) -> int:
    store = _read_store(args.store)
    if args.json:
        sys.stdout.write(canonical_dumps(tree_payload(store)))
    else:
        _print_tree(store)
    return 0


def cmd_store_apply(args: argparse.Namespace) -> int:
    store = _read_store(args.store)
    trial = load_trial(args.trial)
    _, _, stps = process_trial(trial, EngineConfig())
    subset = None
    if args.subset:
        try:
            subset = {int(x) for x in args.subset.split(",") if x.strip()}
        except ValueError:
            raise InvalidRange(f"--subset must be comma-separated ids: {args.subset!r}")
    record = PatientRecord(
        meta=trial.patient_meta,
        stps=stps,
        added_at=datetime.now(timezone.utc).isoformat(),
    )
    store = apply_patient(store, args.category, record, subset)
    return _finish_store_command(store, args)


def cmd_store_reset(args: argparse.Namespace) -> int:
    store = reset_category(_read_store(args.store), args.category)
    return _finish_store_command(store, args)


def cmd_store_override(args: argparse.Namespace) -> int:
    store = override_range(
        _read_store(args.store), args.category, args.stp, args.min, args.max
    )
    return _finish_store_command(store, args)


def cmd_store_export(args: argparse.Namespace) -> int:
    """Export one stored patient (meta + STP values; raw signals are not kept)."""
    store = _read_store(args.store)
    category = store.category(args.category)
    record = next((p for p in category.patients if p.meta.id == args.patient), None)
    if record is None:
        raise NotFound(f"patient '{args.patient}' not in category '{args.category}'")
    text = json.dumps(patient_record_to_doc(record), indent=1)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def cmd_synth_cohort(args: argparse.Namespace) -> int:
    config = CohortConfig.from_file(args.config) if args.config else CohortConfig()
    paths = generate_cohort_files(
        args.out,
        n_norm=args.norm,
        n_per_category=args.per_category,
        seed=args.seed,
        config=config,
    )
    for label, path in paths.items():
        print(f"{label}: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaitbench")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="rank a trial against a store")
    analyze.add_argument("trial", help="trial file (JSON)")
    analyze.add_argument("--store", required=True, help="knowledge store file")
    analyze.add_argument(
        "--filter",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="gender=f[,m] | age=lo:hi | height=lo:hi | mass=lo:hi (repeatable)",
    )
    analyze.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    analyze.add_argument("--json", action="store_true", help="canonical wire output")
    analyze.set_defaults(func=cmd_analyze)

    store = sub.add_parser("store", help="inspect or mutate a store file")
    store_sub = store.add_subparsers(dest="store_command", required=True)

    show = store_sub.add_parser("show-tree", help="print categories and members")
    show.add_argument("--store", required=True)
    show.add_argument("--json", action="store_true")
    show.set_defaults(func=cmd_store_show_tree)

    apply_p = store_sub.add_parser("apply", help="add a trial's patient to a category")
    apply_p.add_argument("--store", required=True)
    apply_p.add_argument("--trial", required=True)
    apply_p.add_argument("--category", required=True)
    apply_p.add_argument("--subset", help="comma-separated stp ids to apply")
    apply_p.add_argument("--json", action="store_true")
    apply_p.set_defaults(func=cmd_store_apply)

    reset = store_sub.add_parser("reset", help="recompute ranges, clear overrides")
    reset.add_argument("--store", required=True)
    reset.add_argument("--category", required=True)
    reset.add_argument("--json", action="store_true")
    reset.set_defaults(func=cmd_store_reset)

    override = store_sub.add_parser("override", help="set a manual range")
    override.add_argument("--store", required=True)
    override.add_argument("--category", required=True)
    override.add_argument("--stp", type=int, required=True)
    override.add_argument("--min", type=float, required=True)
    override.add_argument("--max", type=float, required=True)
    override.add_argument("--json", action="store_true")
    override.set_defaults(func=cmd_store_override)

    export = store_sub.add_parser(
        "export-patient", help="dump one stored patient's record as JSON"
    )
    export.add_argument("--store", required=True)
    export.add_argument("--category", required=True)
    export.add_argument("--patient", required=True)
    export.add_argument("--out", help="write to a file instead of stdout")
    export.set_defaults(func=cmd_store_export)

    synth = sub.add_parser("synth-cohort", help="generate a synthetic store + trials")
    synth.add_argument("--norm", type=int, default=489)
    synth.add_argument("--per-category", type=int, default=50)
    synth.add_argument("--seed", type=int, default=1)
    synth.add_argument("--out", required=True, help="output directory")
    synth.add_argument("--config", help="JSON file overriding the cohort config")
    synth.set_defaults(func=cmd_synth_cohort)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PersistenceError, VersionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GaitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
