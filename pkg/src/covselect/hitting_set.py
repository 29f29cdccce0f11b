"""Exact-cardinality hitting sets over accumulated cores."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import kernels
from .kernels import SolverTimeout


@dataclass(frozen=True)
class HSInstance:
    n_items: int
    cores: tuple  # of frozensets of indices < n_items
    n: int
    scores: tuple = field(default=())  # per-index preference for padding

    def __post_init__(self):
        if not 0 <= self.n <= self.n_items:
            raise ValueError(f"cannot pick {self.n} of {self.n_items} items")
        if self.scores and len(self.scores) != self.n_items:
            raise ValueError("one score per item is required")
        for core in self.cores:
            if not core:
                raise ValueError("cores must be nonempty")
            if min(core) < 0 or max(core) >= self.n_items:
                raise ValueError("core index outside the universe")

    def to_json(self) -> str:
        """Serialise for offline replay of a solver call."""
        return json.dumps(
            {
                "n_items": self.n_items,
                "n": self.n,
                "cores": [sorted(c) for c in self.cores],
                "scores": [_num(s) for s in self.scores],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> HSInstance:
        doc = json.loads(text)
        return cls(
            doc["n_items"],
            tuple(frozenset(c) for c in doc["cores"]),
            doc["n"],
            tuple(doc.get("scores", ())),
        )


def _num(x):
    try:
        return int(x) if x == int(x) else float(x)
    except (TypeError, ValueError):
        return float(x)


def hits_all(selection, cores) -> bool:
    return all(not core.isdisjoint(selection) for core in cores)


class HittingSetSolver:
    """Interface of the cost-side solver used by the optimiser.

    ``solve`` returns a set of exactly ``inst.n`` indices hitting every
    core, or ``None`` when no such set exists; it raises
    :class:`SolverTimeout` when ``deadline`` (a ``time.monotonic()``
    value) passes first.
    """

    def solve(self, inst: HSInstance, deadline=None):
        raise NotImplementedError


class BranchAndBoundSolver(HittingSetSolver):
    """Minimum hitting set by branch and bound, padded up to ``n``.

    Any superset of a hitting set is a hitting set, so a hitting set of
    size ``n`` exists iff the minimum one has at most ``n`` elements. The
    minimum set is padded with the best-scoring unused indices (lowest
    index on ties).
    """

    def solve(self, inst: HSInstance, deadline=None):
        core = kernels.min_hitting_set(inst.n_items, [sorted(c) for c in inst.cores], inst.n, deadline)
        if core is None:
            return None
        chosen = set(core)
        scores = inst.scores or (0,) * inst.n_items
        rest = sorted(
            (i for i in range(inst.n_items) if i not in chosen),
            key=lambda i: (-scores[i], i),
        )
        chosen.update(rest[: inst.n - len(chosen)])
        result = frozenset(chosen)
        assert len(result) == inst.n and hits_all(result, inst.cores)
        return result


def solve(inst: HSInstance, deadline=None):
    return BranchAndBoundSolver().solve(inst, deadline)


__all__ = [
    "BranchAndBoundSolver",
    "HSInstance",
    "HittingSetSolver",
    "SolverTimeout",
    "hits_all",
    "solve",
]
