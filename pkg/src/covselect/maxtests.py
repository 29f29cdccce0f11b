"""Fixed-size coverage-maximal subset selection with the Seesaw loop.

The optimiser alternates between an exact hitting-set solver proposing a
candidate of size ``n`` and black-box evaluations of the coverage measure.
Each candidate that does not reach full coverage yields a *core*: a set of
summaries at least one of which any better candidate must contain.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from .hitting_set import BranchAndBoundSolver, HSInstance, SolverTimeout
from .measures import render_score

log = logging.getLogger(__name__)

SEARCHES = ("linear", "progression")


class _Expired(Exception):
    pass


class Oracle:
    """Memoising wrapper around a measure ``M(indices) -> score``.

    The optimiser consults the measure only through this class.
    """

    def __init__(self, measure, n_items: int, deadline=None):
        self.measure = measure
        self.n_items = n_items
        self.deadline = deadline
        self.cache: dict = {}
        self.calls = 0

    def __call__(self, indices):
        key = frozenset(indices)
        v = self.cache.get(key)
        if v is None:
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise _Expired
            self.calls += 1
            v = self.measure(key)
            self.cache[key] = v
        return v

    def individual(self) -> list:
        return [self({i}) for i in range(self.n_items)]


def _as_oracle(measure, n_items):
    return measure if isinstance(measure, Oracle) else Oracle(measure, n_items)


def heuristic_max(measure, n_items: int, n: int) -> frozenset:
    """Greedy candidate: add the largest marginal gain, lowest index on ties.

    Once no remaining item adds anything the rest is filled by lowest index.
    """
    if not 0 <= n <= n_items:
        raise ValueError(f"cannot pick {n} of {n_items} items")
    m = _as_oracle(measure, n_items)
    chosen: set = set()
    current = m(chosen)
    while len(chosen) < n:
        best_gain, best_i = 0, None
        for i in range(n_items):
            if i in chosen:
                continue
            gain = m(chosen | {i}) - current
            if gain > best_gain:
                best_gain, best_i = gain, i
        if best_i is None:
            break
        chosen.add(best_i)
        current += best_gain
    for i in range(n_items):
        if len(chosen) >= n:
            break
        chosen.add(i)
    return frozenset(chosen)


def _increasing_order(m: Oracle, exclude) -> list:
    scores = m.individual()
    return sorted((i for i in range(m.n_items) if i not in exclude), key=lambda i: (scores[i], i))


def _check_core_pre(m: Oracle, candidate):
    if m(candidate) >= m(range(m.n_items)):
        raise ValueError("core extraction needs a candidate below full coverage")


def extract_core_linear(candidate, measure, n_items: int) -> frozenset:
    """Grow the candidate one summary at a time while its score holds.

    Summaries are tried in increasing order of individual score; the
    complement of the grown set is returned.
    """
    m = _as_oracle(measure, n_items)
    grown = set(candidate)
    _check_core_pre(m, grown)
    value = m(grown)
    for s in _increasing_order(m, grown):
        if m(grown | {s}) == value:
            grown.add(s)
    return frozenset(range(n_items)) - grown


def extract_core_progression(candidate, measure, n_items: int) -> frozenset:
    """Like :func:`extract_core_linear`, trying chunks of 1, 2, 4, ... summaries.

    A chunk that keeps the score is committed and the next chunk doubles.
    A chunk that raises it is retried from its first summary with size 1;
    a rejected single summary is skipped.
    """
    m = _as_oracle(measure, n_items)
    grown = set(candidate)
    _check_core_pre(m, grown)
    value = m(grown)
    order = _increasing_order(m, grown)
    pos, size = 0, 1
    while pos < len(order):
        chunk = order[pos : pos + size]
        if m(grown.union(chunk)) == value:
            grown.update(chunk)
            pos += len(chunk)
            size *= 2
        elif size == 1:
            pos += 1
        else:
            size = 1
    return frozenset(range(n_items)) - grown


_EXTRACTORS = {"linear": extract_core_linear, "progression": extract_core_progression}


@dataclass
class SelectionResult:
    selected: frozenset
    score: object
    optimal: bool
    iterations: int = 0
    cores_extracted: int = 0
    measure_calls: int = 0
    reason: str = ""
    log: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "selected": sorted(self.selected),
            "score": render_score(self.score),
            "optimal": self.optimal,
            "iterations": self.iterations,
            "cores_extracted": self.cores_extracted,
            "measure_calls": self.measure_calls,
            "reason": self.reason,
            "log": self.log,
        }


def select(
    measure,
    n_items: int,
    n: int,
    search: str = "progression",
    time_limit: float | None = None,
    solver=None,
    on_core=None,
) -> SelectionResult:
    """Pick ``n`` of ``n_items`` summaries maximising ``measure``.

    ``measure`` maps a frozenset of indices to a score and must be
    monotone. Returns the best candidate found; ``optimal`` is false only
    when ``time_limit`` (seconds) ran out first. ``on_core`` is called with
    ``(candidate, core)`` after every extraction.
    """
    if not 1 <= n <= n_items:
        raise ValueError(f"cannot select {n} of {n_items} summaries")
    if search not in _EXTRACTORS:
        raise ValueError(f"unknown search strategy {search!r}")
    extract = _EXTRACTORS[search]
    solver = solver or BranchAndBoundSolver()
    start = time.monotonic()
    deadline = None if time_limit is None else start + time_limit
    m = Oracle(measure, n_items, deadline)
    records: list = []
    gamma: list = []
    seen_candidates: set = set()

    def result(selected, optimal, reason):
        key = frozenset(selected)
        score = m.cache[key] if key in m.cache else measure(key)
        return SelectionResult(
            key,
            score,
            optimal,
            len(records),
            len(gamma),
            m.calls,
            reason,
            records,
        )

    try:
        best = heuristic_max(m, n_items, n)
    except _Expired:
        return result(range(n), False, "timeout")
    try:
        top = m(range(n_items))
        best_score = m(best)
        scores = tuple(m.individual())
    except _Expired:
        return result(best, False, "timeout")

    while True:
        try:
            candidate = solver.solve(HSInstance(n_items, tuple(gamma), n, scores), deadline)
        except SolverTimeout:
            return result(best, False, "timeout")
        if candidate is None:
            return result(best, True, "no more candidates")
        assert candidate not in seen_candidates, "hitting set solver repeated a candidate"
        seen_candidates.add(candidate)
        try:
            value = m(candidate)
            if value == top:
                best = candidate
                records.append(_record(len(records), candidate, value, None, start))
                return result(best, True, "full coverage")
            if value > best_score:
                best, best_score = candidate, value
            core = extract(candidate, m, n_items)
        except _Expired:
            return result(best, False, "timeout")
        assert core and core.isdisjoint(candidate), "malformed core"
        if on_core is not None:
            on_core(candidate, core)
        gamma.append(core)
        records.append(_record(len(records), candidate, value, core, start))
        log.debug("iteration %d: score %s, core size %d", len(records), value, len(core))


def _record(i, candidate, value, core, start) -> dict:
    return {
        "iteration": i + 1,
        "candidate": sorted(candidate),
        "score": render_score(value),
        "core_size": None if core is None else len(core),
        "elapsed": round(time.monotonic() - start, 6),
    }


__all__ = [
    "Oracle",
    "SelectionResult",
    "extract_core_linear",
    "extract_core_progression",
    "heuristic_max",
    "select",
]
