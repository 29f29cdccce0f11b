"""Coverage summary builders and the on-disk summary store.

A builder implements the coverage summary API for one measure. The
interpreter calls one method per API event; anything a builder does not
care about falls through to the no-op defaults of :class:`SummaryBuilder`.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .instrument import InstrumentedProgram, instrument
from .interp import DEFAULT_STEP_LIMIT, InputError, TestInput, execute


@dataclass(frozen=True)
class CoverageSummary:
    measure: str
    test_id: str
    payload: dict


class SummaryBuilder:
    measure = ""

    def reset(self, program, test) -> None:
        pass

    def finish(self) -> dict:
        raise NotImplementedError

    def begin(self, kind, sid): pass
    def end(self, kind, sid): pass
    def block(self, bid): pass
    def guard(self, gid, value): pass
    def cond(self, gid, index, value): pass
    def arr_read(self, name, handle, index): pass
    def arr_write(self, name, handle, index): pass
    def call_malloc(self, size): pass


def _by_int_key(d: dict) -> dict:
    return {str(k): d[k] for k in sorted(d)}


class BlockBuilder(SummaryBuilder):
    measure = "block"

    def reset(self, program, test):
        self.covered = set()

    def block(self, bid):
        self.covered.add(bid)

    def finish(self):
        return {str(b): True for b in sorted(self.covered)}


class ArrayBuilder(SummaryBuilder):
    measure = "array"

    def reset(self, program, test):
        self.accesses = {}

    def _entry(self, name):
        # JSON keys use '_' as the function/array separator
        key = name.replace(":", "_")
        return self.accesses.setdefault(key, ({}, {}))

    def arr_read(self, name, handle, index):
        self._entry(name)[0][index] = None

    def arr_write(self, name, handle, index):
        self._entry(name)[1][index] = None

    def finish(self):
        return {
            name: {"read": sorted(reads), "write": sorted(writes)}
            for name, (reads, writes) in sorted(self.accesses.items())
        }


class LoopBuilder(SummaryBuilder):
    """Counts iterations per loop execution with a stack of counters.

    IF statements push inert frames so their guards are not mistaken for
    loop iterations. A loop execution is recorded when its END fires.
    """

    measure = "loop"

    def reset(self, program, test):
        self.stack = []
        self.counts = {}

    def begin(self, kind, sid):
        self.stack.append([kind, sid, 0])

    def guard(self, gid, value):
        if value and self.stack and self.stack[-1][0] == "WHILE":
            self.stack[-1][2] += 1

    def end(self, kind, sid):
        frame = self.stack.pop()
        assert frame[0] == kind and frame[1] == sid, "unbalanced BEGIN/END"
        if kind == "WHILE":
            per_loop = self.counts.setdefault(sid, {})
            per_loop[frame[2]] = per_loop.get(frame[2], 0) + 1

    def finish(self):
        return {str(l): _by_int_key(c) for l, c in sorted(self.counts.items())}


class DecisionBuilder(SummaryBuilder):
    measure = "decision"

    def reset(self, program, test):
        self.seen = {}

    def guard(self, gid, value):
        entry = self.seen.setdefault(gid, {"true": False, "false": False})
        entry["true" if value else "false"] = True

    def finish(self):
        return _by_int_key(self.seen)


class ConditionBuilder(SummaryBuilder):
    """Records the truth values of every COND site of each evaluated guard.

    Once a guard is evaluated all of its static sites appear in the
    payload (unevaluated ones with both flags false), so summaries of one
    program always agree on a guard's site set. Guards without COND sites
    record their GUARD value under site 0.
    """

    measure = "condition"

    def reset(self, program, test):
        self.sites = program.cond_sites if isinstance(program, InstrumentedProgram) else {}
        self.seen = {}

    def _guard_entry(self, gid):
        entry = self.seen.get(gid)
        if entry is None:
            n = self.sites.get(gid, 0)
            entry = {j: {"true": False, "false": False} for j in range(n)}
            self.seen[gid] = entry
        return entry

    def cond(self, gid, index, value):
        entry = self._guard_entry(gid)
        site = entry.setdefault(index, {"true": False, "false": False})
        site["true" if value else "false"] = True

    def guard(self, gid, value):
        entry = self._guard_entry(gid)
        if self.sites.get(gid, 0) == 0:
            site = entry.setdefault(0, {"true": False, "false": False})
            site["true" if value else "false"] = True

    def finish(self):
        return {str(g): _by_int_key(sites) for g, sites in sorted(self.seen.items())}


class SizeBuilder(SummaryBuilder):
    """Input size: number of scalar values, arrays contributing their length."""

    measure = "size"

    def reset(self, program, test):
        self.size = sum(
            len(v) if isinstance(v, list) else 1 for v in test.bindings.values()
        )

    def finish(self):
        return {"size": self.size}


BUILDERS = {
    cls.measure: cls
    for cls in (
        BlockBuilder,
        ArrayBuilder,
        LoopBuilder,
        DecisionBuilder,
        ConditionBuilder,
        SizeBuilder,
    )
}
MEASURE_NAMES = tuple(BUILDERS)


def make_builders(names) -> list:
    unknown = [n for n in names if n not in BUILDERS]
    if unknown:
        raise ValueError(f"unknown measure(s): {', '.join(unknown)}")
    return [BUILDERS[n]() for n in names]


# -- test inputs and the summary store -----------------------------------------


def load_test(path) -> TestInput:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        bindings = json.load(fh)
    if not isinstance(bindings, dict):
        raise InputError(f"{path}: test input must be a JSON object")
    return TestInput(path.stem, bindings)


def load_tests(tests_dir) -> list:
    paths = sorted(Path(tests_dir).glob("*.json"))
    return [load_test(p) for p in paths]


def write_test(tests_dir, test: TestInput) -> None:
    os.makedirs(tests_dir, exist_ok=True)
    with open(Path(tests_dir) / f"{test.id}.json", "w", encoding="utf-8") as fh:
        json.dump(test.bindings, fh)
        fh.write("\n")


def _dump(path: Path, doc) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


INDEX_FILE = "summaries.json"


def summarize_corpus(program, tests, measures, out_dir=None, step_limit=DEFAULT_STEP_LIMIT):
    """Instrument ``program`` once and summarise every test for every measure.

    ``measures`` is a list of measure names. Returns the index document;
    when ``out_dir`` is given, writes ``<measure>/<test_id>.json`` files and
    ``summaries.json``. A test on which the program faults is marked
    excluded.
    """
    if not tests:
        raise ValueError("at least one test is required")
    names = list(dict.fromkeys(measures))
    inst = instrument(program)
    entries = []
    payloads = {}
    for test in tests:
        builders = make_builders(names)
        result, summaries = execute(inst, test, builders, step_limit)
        entry = {"id": test.id, "status": result.status, "excluded": not result.ok}
        if not result.ok:
            entry["fault"] = result.fault
        entries.append(entry)
        for s in summaries:
            payloads[(s.measure, test.id)] = s.payload
    index = {
        "program": program.source_name,
        "measures": names,
        "tests": entries,
    }
    if out_dir is not None:
        out = Path(out_dir)
        for name in names:
            (out / name).mkdir(parents=True, exist_ok=True)
        for (name, test_id), payload in payloads.items():
            _dump(out / name / f"{test_id}.json", payload)
        _dump(out / INDEX_FILE, index)
    index["payloads"] = payloads
    return index


def load_store(summary_dir) -> tuple:
    """Read a summary store; returns ``(index, records)``.

    ``records`` holds one ``{measure: payload}`` dict per usable test, in
    index order, and ``index['usable']`` lists their test ids.
    """
    root = Path(summary_dir)
    with open(root / INDEX_FILE, encoding="utf-8") as fh:
        index = json.load(fh)
    usable = [t["id"] for t in index["tests"] if not t.get("excluded")]
    records = []
    for test_id in usable:
        rec = {}
        for name in index["measures"]:
            with open(root / name / f"{test_id}.json", encoding="utf-8") as fh:
                rec[name] = json.load(fh)
        records.append(rec)
    index["usable"] = usable
    return index, records
