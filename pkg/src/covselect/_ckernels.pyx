# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: atom-union counting and minimum hitting sets.

Mirrors ``_pykernels`` exactly, tie-breaking included.
"""
from libc.stdint cimport int32_t, int64_t, uint64_t
from libc.stdlib cimport calloc, free, malloc, qsort
from libc.string cimport memcpy, memset

import time
from array import array

from ._pykernels import SolverTimeout, _greedy


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef class AtomTable:
    cdef int64_t[::1] indptr
    cdef int32_t[::1] atoms
    cdef int32_t[::1] group_of
    cdef int32_t[::1] group_size
    cdef public Py_ssize_t n_rows
    cdef public Py_ssize_t n_atoms
    cdef Py_ssize_t n_groups

    def __init__(self, rows, group_of, group_size):
        ptr = array("q", [0])
        flat = array("i")
        for row in rows:
            flat.extend(row)
            ptr.append(len(flat))
        if len(flat) == 0:
            flat.append(0)
        self.indptr = ptr
        self.atoms = flat
        self.n_rows = len(rows)
        self.n_atoms = len(group_of)
        go = array("i", group_of)
        gs = array("i", group_size)
        if len(go) == 0:
            go.append(0)
        if len(gs) == 0:
            gs.append(0)
        self.group_of = go
        self.group_size = gs
        self.n_groups = len(group_size)

    def count(self, indices):
        cdef unsigned char* seen = <unsigned char*> calloc(self.n_atoms + 1, 1)
        cdef int32_t* hits = <int32_t*> calloc(self.n_groups + 1, sizeof(int32_t))
        cdef Py_ssize_t r, k, a, g
        cdef long total = 0
        if seen == NULL or hits == NULL:
            free(seen)
            free(hits)
            raise MemoryError()
        try:
            for i in indices:
                r = i
                if r < 0 or r >= self.n_rows:
                    raise IndexError(i)
                for k in range(self.indptr[r], self.indptr[r + 1]):
                    a = self.atoms[k]
                    if not seen[a]:
                        seen[a] = 1
                        g = self.group_of[a]
                        hits[g] += 1
                        if hits[g] == self.group_size[g]:
                            total += 1
        finally:
            free(seen)
            free(hits)
        return total


cdef struct KeyIdx:
    long key
    long idx


cdef int _cmp_keyidx(const void* pa, const void* pb) noexcept nogil:
    cdef const KeyIdx* a = <const KeyIdx*> pa
    cdef const KeyIdx* b = <const KeyIdx*> pb
    if a.key != b.key:
        return -1 if a.key < b.key else 1
    if a.idx != b.idx:
        return -1 if a.idx < b.idx else 1
    return 0


cdef class _Search:
    cdef int W
    cdef int C
    cdef uint64_t* cores
    cdef uint64_t* best
    cdef long best_size
    cdef long nodes
    cdef object deadline
    cdef bint timed_out

    def __dealloc__(self):
        free(self.cores)
        free(self.best)

    cdef int rec(self, uint64_t* chosen, long count, uint64_t* forbidden):
        cdef int W = self.W, C = self.C
        cdef int c, w, k, nu = 0, nm = 0, e, lb
        cdef bint hit, disjoint
        cdef int* unc = NULL
        cdef uint64_t* allowed = NULL
        cdef KeyIdx* order = NULL
        cdef KeyIdx* members = NULL
        cdef uint64_t* used = NULL
        cdef uint64_t* f = NULL
        cdef uint64_t* pick
        cdef uint64_t bits
        cdef long deg
        cdef int status = 0

        self.nodes += 1
        if self.deadline is not None and (self.nodes & 1023) == 0:
            if time.monotonic() > self.deadline:
                self.timed_out = True
                return -1

        unc = <int*> malloc(C * sizeof(int))
        if unc == NULL:
            raise MemoryError()
        try:
            for c in range(C):
                hit = False
                for w in range(W):
                    if self.cores[c * W + w] & chosen[w]:
                        hit = True
                        break
                if not hit:
                    unc[nu] = c
                    nu += 1
            if nu == 0:
                if count < self.best_size:
                    memcpy(self.best, chosen, W * sizeof(uint64_t))
                    self.best_size = count
                return 0
            if count + 1 >= self.best_size:
                return 0

            allowed = <uint64_t*> malloc(nu * W * sizeof(uint64_t))
            order = <KeyIdx*> malloc(nu * sizeof(KeyIdx))
            used = <uint64_t*> calloc(W, sizeof(uint64_t))
            f = <uint64_t*> malloc(W * sizeof(uint64_t))
            members = <KeyIdx*> malloc(W * 64 * sizeof(KeyIdx))
            if allowed == NULL or order == NULL or used == NULL or f == NULL or members == NULL:
                raise MemoryError()

            for k in range(nu):
                order[k].key = 0
                order[k].idx = k
                for w in range(W):
                    allowed[k * W + w] = self.cores[unc[k] * W + w] & ~forbidden[w]
                    order[k].key += __builtin_popcountll(allowed[k * W + w])
                if order[k].key == 0:
                    return 0

            qsort(order, nu, sizeof(KeyIdx), _cmp_keyidx)
            lb = 0
            for k in range(nu):
                pick = allowed + order[k].idx * W
                disjoint = True
                for w in range(W):
                    if pick[w] & used[w]:
                        disjoint = False
                        break
                if disjoint:
                    for w in range(W):
                        used[w] |= pick[w]
                    lb += 1
            if count + lb >= self.best_size:
                return 0

            pick = allowed + order[0].idx * W
            for w in range(W):
                bits = pick[w]
                while bits:
                    e = w * 64 + __builtin_ctzll(bits)
                    bits &= bits - 1
                    deg = 0
                    for k in range(nu):
                        if (allowed[k * W + (e >> 6)] >> (e & 63)) & 1:
                            deg += 1
                    members[nm].key = -deg
                    members[nm].idx = e
                    nm += 1
            qsort(members, nm, sizeof(KeyIdx), _cmp_keyidx)

            memcpy(f, forbidden, W * sizeof(uint64_t))
            for k in range(nm):
                e = members[k].idx
                chosen[e >> 6] |= (<uint64_t> 1) << (e & 63)
                status = self.rec(chosen, count + 1, f)
                chosen[e >> 6] &= ~((<uint64_t> 1) << (e & 63))
                if status < 0:
                    return status
                f[e >> 6] |= (<uint64_t> 1) << (e & 63)
            return 0
        finally:
            free(unc)
            free(allowed)
            free(order)
            free(used)
            free(f)
            free(members)


def min_hitting_set(n_items, cores, limit, deadline=None):
    """Minimum hitting set of ``cores`` with at most ``limit`` elements."""
    masks = []
    seen = set()
    for core in cores:
        m = 0
        for e in core:
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
    cdef _Search s = _Search()
    cdef int W = max(1, (n_items + 63) // 64)
    cdef int C = len(masks)
    cdef int c, w
    cdef uint64_t* chosen = NULL
    cdef uint64_t* forbidden = NULL
    s.W = W
    s.C = C
    s.cores = <uint64_t*> malloc(C * W * sizeof(uint64_t))
    s.best = <uint64_t*> calloc(W, sizeof(uint64_t))
    if s.cores == NULL or s.best == NULL:
        raise MemoryError()
    word_mask = (1 << 64) - 1
    for c in range(C):
        m = masks[c]
        for w in range(W):
            s.cores[c * W + w] = (m >> (64 * w)) & word_mask
    found_greedy = len(greedy) <= limit
    s.best_size = len(greedy) if found_greedy else limit + 1
    s.deadline = deadline
    s.timed_out = False
    s.nodes = 0

    chosen = <uint64_t*> calloc(W, sizeof(uint64_t))
    forbidden = <uint64_t*> calloc(W, sizeof(uint64_t))
    try:
        if chosen == NULL or forbidden == NULL:
            raise MemoryError()
        s.rec(chosen, 0, forbidden)
    finally:
        free(chosen)
        free(forbidden)
    if s.timed_out:
        raise SolverTimeout
    if s.best_size > limit:
        return None
    if found_greedy and s.best_size == len(greedy):
        # the search found nothing smaller than the greedy incumbent
        return greedy
    out = []
    for w in range(W):
        bits = s.best[w]
        b = 0
        while bits:
            if bits & 1:
                out.append(w * 64 + b)
            bits >>= 1
            b += 1
    return out
