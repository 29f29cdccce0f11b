import random

import pytest

from covselect import _pykernels, kernels

try:
    from covselect import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def random_table(rng):
    n_atoms = rng.randint(0, 40)
    n_groups = max(1, n_atoms // rng.randint(1, 3))
    group_of = [rng.randrange(n_groups) for _ in range(n_atoms)]
    group_size = [group_of.count(g) + (1 if rng.random() < 0.1 else 0) for g in range(n_groups)]
    rows = [sorted(rng.sample(range(n_atoms), rng.randint(0, n_atoms))) for _ in range(rng.randint(1, 12))]
    return rows, group_of, group_size


def count_oracle(rows, group_of, group_size, indices):
    covered = set()
    for i in indices:
        covered.update(rows[i])
    return sum(
        1
        for g, size in enumerate(group_size)
        if size > 0 and sum(1 for a in covered if group_of[a] == g) == size
    )


def random_cores(rng, n_items, max_cores=10):
    return [sorted(rng.sample(range(n_items), rng.randint(1, min(4, n_items)))) for _ in range(rng.randint(0, max_cores))]


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.parametrize("seed", range(200))
def test_python_atom_table_matches_oracle(seed):
    rng = random.Random(seed)
    rows, group_of, group_size = random_table(rng)
    t = _pykernels.AtomTable(rows, group_of, group_size)
    idx = rng.sample(range(len(rows)), rng.randint(0, len(rows)))
    assert t.count(idx) == count_oracle(rows, group_of, group_size, idx)


@needs_ext
@pytest.mark.parametrize("seed", range(200))
def test_compiled_atom_table_matches_python(seed):
    rng = random.Random(seed)
    rows, group_of, group_size = random_table(rng)
    idx = rng.sample(range(len(rows)), rng.randint(0, len(rows)))
    assert _ckernels.AtomTable(rows, group_of, group_size).count(idx) == _pykernels.AtomTable(
        rows, group_of, group_size
    ).count(idx)


@needs_ext
@pytest.mark.parametrize("seed", range(300))
def test_compiled_hitting_set_identical(seed):
    rng = random.Random(seed)
    n_items = rng.randint(1, 70)  # spans more than one 64-bit word
    cores = random_cores(rng, n_items, 15)
    limit = rng.randint(0, n_items)
    assert _ckernels.min_hitting_set(n_items, cores, limit) == _pykernels.min_hitting_set(n_items, cores, limit)


@pytest.mark.parametrize("impl", [_pykernels, pytest.param(_ckernels, marks=needs_ext)], ids=["python", "cython"])
def test_degenerate_inputs(impl):
    assert impl.min_hitting_set(3, [], 0) == []
    assert impl.min_hitting_set(3, [[]], 3) is None
    assert impl.min_hitting_set(3, [[0], [1]], 1) is None
    assert impl.min_hitting_set(3, [[0, 1], [1, 2]], 1) == [1]
    with pytest.raises(ValueError):
        impl.min_hitting_set(3, [[5]], 1)


@pytest.mark.parametrize("impl", [_pykernels, pytest.param(_ckernels, marks=needs_ext)], ids=["python", "cython"])
def test_deadline_in_past_times_out(impl):
    rng = random.Random(1)
    # large enough that the search visits well over 1024 nodes
    cores = [sorted(rng.sample(range(60), 6)) for _ in range(60)]
    with pytest.raises(kernels.SolverTimeout):
        impl.min_hitting_set(60, cores, 60, deadline=0.0)
