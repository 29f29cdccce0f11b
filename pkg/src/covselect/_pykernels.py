"""Pure-Python kernels; used when the compiled extension is unavailable.

Both kernels must return exactly what their counterparts in
``_ckernels.pyx`` return, including tie-breaking.
"""
from __future__ import annotations

import time


class AtomTable:
    """Coverage atoms per summary, grouped into countable units.

    ``rows[i]`` lists the atom ids covered by summary ``i``. A group counts
    once all of its atoms are covered by the union of the selected rows.
    """

    def __init__(self, rows, group_of, group_size):
        self.n_rows = len(rows)
        self.n_atoms = len(group_of)
        masks = []
        for row in rows:
            m = 0
            for a in row:
                m |= 1 << a
            masks.append(m)
        self.masks = masks
        groups: dict = {}
        for a, g in enumerate(group_of):
            groups[g] = groups.get(g, 0) | (1 << a)
        # a group can only complete if all of its declared atoms exist
        self.group_masks = [
            groups[g] for g in sorted(groups) if 0 < group_size[g] == groups[g].bit_count()
        ]
        self.singletons = len(self.group_masks) == self.n_atoms

    def count(self, indices) -> int:
        masks = self.masks
        u = 0
        for i in indices:
            u |= masks[i]
        if self.singletons:
            return u.bit_count()
        return sum(1 for gm in self.group_masks if u & gm == gm)


class SolverTimeout(Exception):
    pass


def _greedy(masks: list) -> list:
    unhit = list(masks)
    chosen = []
    while unhit:
        counts: dict = {}
        for m in unhit:
            while m:
                low = m & -m
                e = low.bit_length() - 1
                counts[e] = counts.get(e, 0) + 1
                m ^= low
        e = min(counts, key=lambda k: (-counts[k], k))
        chosen.append(e)
        bit = 1 << e
        unhit = [m for m in unhit if not m & bit]
    return sorted(chosen)


def _bits(m: int) -> list:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out


def min_hitting_set(n_items, cores, limit, deadline=None):
    """Minimum hitting set of ``cores`` with at most ``limit`` elements.

    Returns a sorted list, or ``None`` when every hitting set is larger than
    ``limit``. Raises :class:`SolverTimeout` once ``time.monotonic()``
    passes ``deadline``.
    """
    masks = []
    seen = set()
    for c in cores:
        m = 0
        for e in c:
            if not 0 <= e < n_items:
                raise ValueError(f"core element {e} outside universe of size {n_items}")
            m |= 1 << e
        if m == 0:
            return None
        if m not in seen:
            seen.add(m)
            masks.append(m)
    if not masks:
        return []

    greedy = _greedy(masks)
    best = greedy if len(greedy) <= limit else None
    best_size = len(greedy) if best is not None else limit + 1
    nodes = 0

    def rec(chosen_mask, chosen_count, forbidden):
        nonlocal best, best_size, nodes
        nodes += 1
        if deadline is not None and nodes & 1023 == 0 and time.monotonic() > deadline:
            raise SolverTimeout
        unc = [m for m in masks if not m & chosen_mask]
        if not unc:
            if chosen_count < best_size:
                best = _bits(chosen_mask)
                best_size = chosen_count
            return
        if chosen_count + 1 >= best_size:
            return
        allowed = [m & ~forbidden for m in unc]
        if 0 in allowed:
            return
        order = sorted(range(len(unc)), key=lambda k: (allowed[k].bit_count(), k))
        used = 0
        lb = 0
        for k in order:
            if not allowed[k] & used:
                used |= allowed[k]
                lb += 1
        if chosen_count + lb >= best_size:
            return
        members = _bits(allowed[order[0]])
        degree = {e: sum((a >> e) & 1 for a in allowed) for e in members}
        members.sort(key=lambda e: (-degree[e], e))
        f = forbidden
        for e in members:
            rec(chosen_mask | (1 << e), chosen_count + 1, f)
            f |= 1 << e

    rec(0, 0, 0)
    return best
