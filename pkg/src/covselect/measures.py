"""Coverage evaluation functions over sets of summaries.

Every measure maps a set of summary payloads to a nonnegative count and is
monotone: adding summaries never lowers the score. Weighted linear
combinations with nonnegative weights inherit monotonicity.

Summaries are handled as *records*: dicts mapping a measure name to that
measure's payload for one test.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import kernels

MEASURE_NAMES = ("block", "array", "loop", "decision", "condition", "size")


class MeasureError(ValueError):
    pass


@dataclass(frozen=True)
class MeasureSpec:
    """Weighted sum of base measures, e.g. ``0.5 * block + 0.5 * loop``."""

    terms: tuple  # of (name, Fraction)
    array_merge_rw: bool = False

    def __post_init__(self):
        if not self.terms:
            raise MeasureError("a measure needs at least one term")
        names = [n for n, _ in self.terms]
        for name, weight in self.terms:
            if name not in MEASURE_NAMES:
                raise MeasureError(f"unknown measure {name!r}")
            if weight < 0:
                raise MeasureError(f"weight of {name!r} is negative")
        if len(set(names)) != len(names):
            raise MeasureError("each measure may appear only once")
        if all(w == 0 for _, w in self.terms):
            raise MeasureError("at least one weight must be positive")

    @classmethod
    def of(cls, *names, array_merge_rw=False):
        return cls(tuple((n, Fraction(1)) for n in names), array_merge_rw)

    @classmethod
    def from_pairs(cls, pairs, array_merge_rw=False):
        terms = []
        for name, weight in pairs:
            if isinstance(weight, bool) or not isinstance(weight, (int, float, str, Fraction)):
                raise MeasureError(f"weight of {name!r} must be a number")
            terms.append((name, Fraction(str(weight)) if isinstance(weight, float) else Fraction(weight)))
        return cls(tuple(terms), array_merge_rw)

    @property
    def names(self) -> tuple:
        return tuple(n for n, _ in self.terms)

    @property
    def label(self) -> str:
        parts = []
        for name, w in self.terms:
            parts.append(name if w == 1 else f"{_render(w)}*{name}")
        return "+".join(parts)


def _render(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else float(x)
    return x


render_score = _render


# -- atom extraction -------------------------------------------------------------
#
# Each base measure (except size) reduces a payload to a set of hashable
# coverage atoms; atoms are grouped and a group scores once all its atoms
# are covered by the union over the evaluated set.


def _check_dict(payload, measure):
    if not isinstance(payload, dict):
        raise MeasureError(f"{measure} payload must be a JSON object")


def _flag(entry, key, measure):
    v = entry.get(key, False)
    if not isinstance(v, bool):
        raise MeasureError(f"{measure} payload: {key!r} must be a boolean")
    return v


def _block_atoms(payload, merge):
    _check_dict(payload, "block")
    return [("b", k) for k, v in payload.items() if v is True]


def _array_atoms(payload, merge):
    _check_dict(payload, "array")
    atoms = []
    for name, rw in payload.items():
        if not isinstance(rw, dict) or set(rw) - {"read", "write"}:
            raise MeasureError(f"array payload for {name!r} must have read/write lists")
        for kind in ("read", "write"):
            for i in rw.get(kind, []):
                if not isinstance(i, int):
                    raise MeasureError("array indices must be integers")
                atoms.append((name, i) if merge else (name, kind, i))
    return atoms


def _loop_atoms(payload, merge):
    _check_dict(payload, "loop")
    atoms = []
    for loop, counts in payload.items():
        if not isinstance(counts, dict):
            raise MeasureError(f"loop payload for {loop!r} must map counts to executions")
        for iterations, executions in counts.items():
            if not isinstance(executions, int) or executions < 0:
                raise MeasureError("loop execution counts must be nonnegative integers")
            if executions > 0:
                atoms.append((loop, str(iterations)))
    return atoms


def _decision_groups(payload):
    """guard -> set of covered truth values."""
    _check_dict(payload, "decision")
    groups = {}
    for gid, entry in payload.items():
        if not isinstance(entry, dict):
            raise MeasureError(f"decision payload for guard {gid!r} must be an object")
        groups[gid] = {tv for tv in ("true", "false") if _flag(entry, tv, "decision")}
    return groups


def _condition_groups(payload):
    """guard -> (site set, covered (site, truth value) pairs)."""
    _check_dict(payload, "condition")
    groups = {}
    for gid, sites in payload.items():
        if not isinstance(sites, dict):
            raise MeasureError(f"condition payload for guard {gid!r} must be an object")
        covered = set()
        for j, entry in sites.items():
            if not isinstance(entry, dict):
                raise MeasureError(f"condition site {gid}/{j} must be an object")
            for tv in ("true", "false"):
                if _flag(entry, tv, "condition"):
                    covered.add((j, tv))
        groups[gid] = (frozenset(sites), covered)
    return groups


def _size(payload):
    _check_dict(payload, "size")
    size = payload.get("size")
    if not isinstance(size, int) or isinstance(size, bool) or size < 0:
        raise MeasureError("size payload must hold a nonnegative integer 'size'")
    return size


class _Interner:
    def __init__(self):
        self.ids = {}
        self.group_of = []
        self.group_ids = {}
        self.group_size = []

    def group(self, key, size):
        g = self.group_ids.get(key)
        if g is None:
            g = self.group_ids[key] = len(self.group_size)
            self.group_size.append(size)
        return g

    def atom(self, key, group_key=None, group_size=1):
        a = self.ids.get(key)
        if a is None:
            g = self.group(key if group_key is None else group_key, group_size)
            a = self.ids[key] = len(self.group_of)
            self.group_of.append(g)
        return a


def _table_for(name, payloads, merge):
    """Build an :class:`AtomTable` for one base measure over ``payloads``."""
    it = _Interner()
    rows = []
    if name in ("block", "array", "loop"):
        extract = {"block": _block_atoms, "array": _array_atoms, "loop": _loop_atoms}[name]
        for p in payloads:
            rows.append(sorted({it.atom(a) for a in extract(p, merge)}))
    elif name == "decision":
        for p in payloads:
            row = set()
            for gid, tvs in _decision_groups(p).items():
                it.group(gid, 2)
                for tv in tvs:
                    row.add(it.atom((gid, tv), gid, 2))
            rows.append(sorted(row))
    elif name == "condition":
        parsed = [_condition_groups(p) for p in payloads]
        site_sets = {}
        for groups in parsed:
            for gid, (sites, _) in groups.items():
                known = site_sets.setdefault(gid, sites)
                if known != sites:
                    raise MeasureError(
                        f"condition summaries disagree on the sites of guard {gid!r}"
                    )
        for gid in sorted(site_sets, key=_sort_key):
            it.group(gid, 2 * len(site_sets[gid]))
        for groups in parsed:
            row = set()
            for gid, (sites, covered) in groups.items():
                for j, tv in covered:
                    row.add(it.atom((gid, j, tv), gid, 2 * len(sites)))
            rows.append(sorted(row))
    else:
        raise MeasureError(f"{name!r} is not an atom-based measure")
    return kernels.AtomTable(rows, it.group_of, it.group_size)


def _sort_key(k):
    return (0, int(k), "") if isinstance(k, str) and k.lstrip("-").isdigit() else (1, 0, str(k))


class CompiledMeasure:
    """A measure bound to a fixed universe of summary records.

    Calling it with a collection of record indices returns the score of
    that subset. This is the black-box oracle handed to the optimiser.
    """

    def __init__(self, spec: MeasureSpec, records):
        self.spec = spec
        self.n = len(records)
        self._parts = []
        for name, weight in spec.terms:
            try:
                payloads = [r[name] for r in records]
            except KeyError:
                raise MeasureError(f"summaries lack the {name!r} measure") from None
            if name == "size":
                self._parts.append((weight, None, [_size(p) for p in payloads]))
            else:
                table = _table_for(name, payloads, spec.array_merge_rw)
                self._parts.append((weight, table, None))

    def counts(self, indices) -> dict:
        idx = list(indices)
        out = {}
        for (name, _), (_, table, sizes) in zip(self.spec.terms, self._parts):
            out[name] = sum(sizes[i] for i in idx) if table is None else table.count(idx)
        return out

    def __call__(self, indices):
        idx = list(indices)
        total = Fraction(0)
        for weight, table, sizes in self._parts:
            if weight == 0:
                continue
            c = sum(sizes[i] for i in idx) if table is None else table.count(idx)
            total += weight * c
        return total.numerator if total.denominator == 1 else total


# -- free-standing evaluation ------------------------------------------------------


def _eval_base(name, payloads, merge=False):
    payloads = list(payloads)
    if name == "size":
        return sum(_size(p) for p in payloads)
    return _table_for(name, payloads, merge).count(range(len(payloads)))


def eval_block(payloads) -> int:
    """Number of distinct blocks executed by some summary."""
    return _eval_base("block", payloads)


def eval_array(payloads, array_merge_rw=False) -> int:
    """Distinct (array, index, read|write) interactions.

    With ``array_merge_rw`` reads and writes of one index count once.
    """
    return _eval_base("array", payloads, array_merge_rw)


def eval_loop(payloads) -> int:
    """Distinct (loop, iteration count) pairs."""
    return _eval_base("loop", payloads)


def eval_decision(payloads) -> int:
    """Guards seen both true and false across the set."""
    return _eval_base("decision", payloads)


def eval_condition(payloads) -> int:
    """Guards whose every COND site was seen both true and false."""
    return _eval_base("condition", payloads)


def eval_size(payloads) -> int:
    return _eval_base("size", payloads)


def evaluate(spec: MeasureSpec, records):
    """Score of a set of records under ``spec``."""
    records = list(records)
    if not records:
        return 0
    return CompiledMeasure(spec, records)(range(len(records)))
