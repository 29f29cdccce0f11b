"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import random
import timeit

from covselect import _pykernels

try:
    from covselect import _ckernels
except ImportError:
    _ckernels = None


def atom_table_case(rng, n_rows=900, n_atoms=400, group=2):
    group_of = [a // group for a in range(n_atoms)]
    group_size = [group] * (n_atoms // group)
    rows = [sorted(rng.sample(range(n_atoms), rng.randint(5, 60))) for _ in range(n_rows)]
    queries = [rng.sample(range(n_rows), 30) for _ in range(200)]
    return rows, group_of, group_size, queries


def hitting_set_case(rng, n_items=60, n_cores=40):
    cores = [sorted(rng.sample(range(n_items), rng.randint(3, 8))) for _ in range(n_cores)]
    return n_items, cores


def bench(label, fn, repeat):
    best = min(timeit.repeat(fn, number=1, repeat=repeat))
    print(f"  {label:<8} {best * 1000:9.2f} ms")
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    impls = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    if _ckernels is None:
        print("compiled kernels not built; timing the Python fallback only")

    rng = random.Random(args.seed)
    rows, group_of, group_size, queries = atom_table_case(rng)
    print(f"AtomTable.count: {len(rows)} rows, {len(group_of)} atoms, {len(queries)} queries of 30 rows")
    times = {}
    for name, mod in impls:
        table = mod.AtomTable(rows, group_of, group_size)
        times[name] = bench(name, lambda: [table.count(q) for q in queries], args.repeat)
    if len(times) == 2:
        print(f"  speedup  {times['python'] / times['cython']:9.1f}x")

    n_items, cores = hitting_set_case(rng)
    print(f"min_hitting_set: {n_items} items, {len(cores)} cores")
    results = {}
    for name, mod in impls:
        results[name] = mod.min_hitting_set(n_items, cores, n_items)
        times[name] = bench(name, lambda: mod.min_hitting_set(n_items, cores, n_items), args.repeat)
    if len(results) == 2:
        assert results["python"] == results["cython"]
        print(f"  speedup  {times['python'] / times['cython']:9.1f}x  (minimum size {len(results['cython'])})")


if __name__ == "__main__":
    main()
