"""Command-line entry point: ``covselect <command> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import statistics
import sys
from collections import Counter
from pathlib import Path

from .config import Config, ConfigError, parse_measure_flags
from .grader import CanonicalFault, Submission, grade, random_select, render_table
from .instrument import InstrumentationError, instrument
from .interp import InputError
from .maxtests import SEARCHES, select
from .measures import CompiledMeasure, MeasureError, MeasureSpec, render_score
from .nodes import ApiCall, walk
from .parser import MiniCSyntaxError, parse_file
from .pretty import pretty
from .summaries import MEASURE_NAMES, load_store, load_tests, summarize_corpus

log = logging.getLogger("covselect")

EXIT_OK, EXIT_USER, EXIT_INTERNAL = 0, 2, 3


class UsageError(Exception):
    pass


def _write_json(path, doc) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _load_config(args) -> Config:
    cfg = Config.load(args.config) if getattr(args, "config", None) else Config.from_dict({})
    if getattr(args, "measure", None):
        cfg.measure = parse_measure_flags(args.measure)
    if getattr(args, "search", None):
        cfg.search = args.search
    if getattr(args, "time_limit", None) is not None:
        cfg.time_limit_secs = args.time_limit
    if getattr(args, "n", None) is not None:
        cfg.n = args.n
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    return cfg


# -- commands ----------------------------------------------------------------------


def cmd_instrument(args) -> int:
    program = parse_file(args.program)
    inst = instrument(program)
    if args.emit_source:
        text = pretty(inst.as_program())
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return EXIT_OK
    calls = Counter(s.name for s in walk(inst.body) if isinstance(s, ApiCall))
    doc = {
        "program": str(args.program),
        "api_calls": dict(sorted(calls.items())),
        "guards": {str(g): n for g, n in sorted(inst.cond_sites.items())},
    }
    print(json.dumps(doc, indent=2))
    return EXIT_OK


def cmd_summarize(args) -> int:
    cfg = _load_config(args)
    program = parse_file(args.program)
    tests = load_tests(args.tests)
    if not tests:
        raise UsageError(f"no test inputs (*.json) found in {args.tests}")
    names = list(cfg.measure.names)
    if args.all_measures:
        names = list(MEASURE_NAMES)
    index = summarize_corpus(program, tests, names, args.out, cfg.step_limit)
    excluded = [t["id"] for t in index["tests"] if t["excluded"]]
    print(
        f"summarised {len(tests)} tests x {len(names)} measures into {args.out}"
        + (f"; excluded (canonical fault): {', '.join(excluded)}" if excluded else "")
    )
    return EXIT_OK


def run_selection(summary_dir, cfg: Config) -> dict:
    index, records = load_store(summary_dir)
    usable = index["usable"]
    if cfg.n > len(usable):
        raise UsageError(f"cannot select {cfg.n} tests from {len(usable)} usable tests")
    measure = CompiledMeasure(cfg.measure, records)
    result = select(measure, len(records), cfg.n, cfg.search, cfg.time_limit_secs)
    doc = result.to_json()
    doc["indices"] = doc.pop("selected")
    doc["selected"] = [usable[i] for i in doc["indices"]]
    doc["max_score"] = render_score(measure(range(len(records))))
    doc["measure"] = cfg.measure.label
    doc["search"] = cfg.search
    doc["n"] = cfg.n
    return doc


def cmd_select(args) -> int:
    cfg = _load_config(args)
    doc = run_selection(args.summary_dir, cfg)
    log_lines = doc["log"]
    _write_json(args.out, doc)
    if args.log:
        with open(args.log, "w", encoding="utf-8") as fh:
            for rec in log_lines:
                fh.write(json.dumps(rec) + "\n")
    state = "optimal" if doc["optimal"] else "best found (time limit)"
    print(f"selected {len(doc['selected'])} tests, score {doc['score']} of {doc['max_score']} ({state})")
    return EXIT_OK


def cmd_random_select(args) -> int:
    cfg = _load_config(args)
    index, _ = load_store(args.summary_dir)
    usable = index["usable"]
    if cfg.n > len(usable):
        raise UsageError(f"cannot select {cfg.n} tests from {len(usable)} usable tests")
    seed = cfg.seed if cfg.seed is not None else 0
    selected = random_select(usable, cfg.n, seed)
    _write_json(args.out, {"selected": selected, "method": "random", "seed": seed, "n": cfg.n})
    print(f"randomly selected {len(selected)} tests (seed {seed})")
    return EXIT_OK


def _load_submissions(directory) -> list:
    paths = sorted(Path(directory).glob("*.minic"))
    if not paths:
        raise UsageError(f"no submissions (*.minic) found in {directory}")
    return [Submission.from_source(p.stem, p.read_text(encoding="utf-8")) for p in paths]


def _suite_tests(suite_doc, tests_dir) -> list:
    by_id = {t.id: t for t in load_tests(tests_dir)}
    ids = suite_doc.get("selected") if isinstance(suite_doc, dict) else None
    if not isinstance(ids, list):
        raise UsageError("suite file must hold a 'selected' list of test ids")
    missing = [i for i in ids if i not in by_id]
    if missing:
        raise UsageError(f"suite refers to unknown tests: {', '.join(missing)}")
    return [by_id[i] for i in ids]


def cmd_grade(args) -> int:
    cfg = _load_config(args)
    canonical = parse_file(args.canonical)
    suite = _suite_tests(_read_json(args.suite), args.tests)
    report = grade(canonical, _load_submissions(args.submissions), suite, cfg.step_limit)
    doc = report.to_json()
    _write_json(args.out, doc)
    label = Path(args.suite).stem
    table = render_table({label: doc}, ("fail_any_rate", "pair_failure_rate"))
    Path(args.out).with_suffix(".txt").write_text(table + "\n", encoding="utf-8")
    print(table)
    return EXIT_OK


DEMO_MEASURES = ("loop", "array", "block", "size", "condition", "decision")
DEMO_LABELS = {"loop": "LC", "array": "AC", "block": "BC", "size": "Size", "condition": "CC", "decision": "DC"}


def cmd_demo(args) -> int:
    from .demo import copy_fixture

    workdir = Path(args.workdir)
    paths = copy_fixture(workdir)
    canonical = parse_file(paths["canonical"])
    tests = load_tests(paths["tests"])
    subs = _load_submissions(paths["submissions"])
    store = workdir / "summaries"
    summarize_corpus(canonical, tests, MEASURE_NAMES, store)
    index, _ = load_store(store)
    by_id = {t.id: t for t in tests}
    n = args.n
    columns = {}
    for name in DEMO_MEASURES:
        for search in args.searches:
            cfg = Config(MeasureSpec.of(name), n, args.time_limit, search)
            doc = run_selection(store, cfg)
            _write_json(workdir / "suites" / f"{name}-{search}.json", doc)
            report = grade(canonical, subs, [by_id[i] for i in doc["selected"]])
            _write_json(workdir / "reports" / f"{name}-{search}.json", report.to_json())
            label = DEMO_LABELS[name] + ("" if len(args.searches) == 1 else f"/{search[0].upper()}S")
            columns[label] = _column(report, doc["optimal"])
    runs = []
    for seed in range(args.seed, args.seed + args.random_runs):
        ids = random_select(index["usable"], n, seed)
        runs.append(grade(canonical, subs, [by_id[i] for i in ids]))
        if seed == args.seed:
            _write_json(workdir / "suites" / f"random-{seed}.json", {"selected": ids, "seed": seed})
    columns["Rnd"] = {
        "fail_any_rate": statistics.mean(r.fail_any_rate for r in runs),
        "pair_failure_rate": statistics.mean(r.pair_failure_rate for r in runs),
        "detected": round(statistics.mean(len(r.detected) for r in runs), 2),
        "optimal": "-",
    }
    table = render_table(columns, ("fail_any_rate", "pair_failure_rate", "detected", "optimal"))
    (workdir / "table.txt").write_text(table + "\n", encoding="utf-8")
    print(f"{len(subs)} submissions, {len(tests)} tests, suites of {n}; Rnd = mean over {len(runs)} seeds")
    print(table)
    return EXIT_OK


def _column(report, optimal) -> dict:
    return {
        "fail_any_rate": report.fail_any_rate,
        "pair_failure_rate": report.pair_failure_rate,
        "detected": len(report.detected),
        "optimal": "yes" if optimal else "no",
    }


# -- argument parsing -----------------------------------------------------------------


def _add_selection_flags(p, search=True):
    p.add_argument("--config", help="JSON configuration file")
    p.add_argument("--measure", action="append", metavar="NAME=WEIGHT",
                   help="measure term, repeatable; overrides the configuration")
    p.add_argument("--n", type=int, help="number of tests to select")
    if search:
        p.add_argument("--search", choices=SEARCHES)
        p.add_argument("--time-limit", type=float, dest="time_limit", metavar="SECS")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="covselect", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("instrument", help="instrument a MiniC program")
    p.add_argument("program")
    p.add_argument("--emit-source", action="store_true", help="print the instrumented program")
    p.add_argument("--out", help="write the instrumented source here instead of stdout")
    p.set_defaults(func=cmd_instrument)

    p = sub.add_parser("summarize", help="run the canonical solution and write coverage summaries")
    p.add_argument("program")
    p.add_argument("--tests", required=True, help="directory of <id>.json test inputs")
    p.add_argument("--out", required=True, help="summary store directory")
    p.add_argument("--all-measures", action="store_true", help="summarise every built-in measure")
    _add_selection_flags(p, search=False)
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("select", help="select a coverage-maximal suite")
    p.add_argument("summary_dir")
    p.add_argument("--out", required=True)
    p.add_argument("--log", help="write the per-iteration log as JSON lines")
    _add_selection_flags(p)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("random-select", help="select a random suite")
    p.add_argument("summary_dir")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    _add_selection_flags(p, search=False)
    p.set_defaults(func=cmd_random_select)

    p = sub.add_parser("grade", help="grade submissions against a suite")
    p.add_argument("canonical")
    p.add_argument("submissions", help="directory of *.minic submissions")
    p.add_argument("suite", help="suite JSON written by select or random-select")
    p.add_argument("--tests", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config", help="JSON configuration (for step_limit)")
    p.set_defaults(func=cmd_grade)

    p = sub.add_parser("demo", help="end-to-end run on the bundled fixture")
    p.add_argument("workdir")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--random-runs", type=int, default=20, dest="random_runs")
    p.add_argument("--time-limit", type=float, default=5.0, dest="time_limit")
    p.add_argument("--search", choices=SEARCHES + ("both",), default="progression")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "demo":
        args.searches = SEARCHES if args.search == "both" else (args.search,)
    try:
        return args.func(args)
    except MiniCSyntaxError as exc:
        print(f"error: syntax error at {exc}", file=sys.stderr)
    except (UsageError, ConfigError, MeasureError, InputError, InstrumentationError,
            CanonicalFault, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_USER


if __name__ == "__main__":
    sys.exit(main())
