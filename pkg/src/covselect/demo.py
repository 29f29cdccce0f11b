"""Bundled demo: canonical solution, generated test pool, seeded-bug submissions."""
from __future__ import annotations

import random
import shutil
from importlib import resources
from pathlib import Path

from .interp import TestInput

FIXTURE_TESTS = 60
FIXTURE_SEED = 20211


def fixture_dir() -> Path:
    return Path(str(resources.files("covselect") / "fixtures"))


def generate_tests(count: int = FIXTURE_TESTS, seed: int = FIXTURE_SEED) -> list:
    """Random inputs ``(n, a, q)`` for the bundled canonical solution.

    Most arrays are short lists of positive values; empty arrays,
    all-negative arrays, many zeros, repeated runs and out-of-range
    queries each show up only occasionally.
    """
    rng = random.Random(seed)
    tests = []
    for k in range(count):
        shape = rng.random()
        n = rng.randint(1, 8)
        if shape < 0.03:
            n, a = 0, []
        elif shape < 0.08:
            a = [rng.randint(-20, -1) for _ in range(n)]
        elif shape < 0.13:
            a = [rng.choice([0, 0, rng.randint(1, 9)]) for _ in range(max(n, 4))]
        elif shape < 0.18:
            v = rng.randint(1, 9)
            a = [v] * max(n, 3)
        else:
            a = [rng.randint(1, 20) for _ in range(n)]
        n = len(a)
        if rng.random() < 0.1:
            q = rng.choice([-1, n, n + 3])
        else:
            q = rng.randint(0, max(n - 1, 0))
        tests.append(TestInput(f"t{k:03d}", {"n": n, "a": a, "q": q}))
    return tests


def copy_fixture(workdir) -> dict:
    """Materialise the fixture under ``workdir``; returns its paths."""
    from .summaries import write_test

    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    src = fixture_dir()
    canonical = workdir / "canonical.minic"
    shutil.copyfile(src / "canonical.minic", canonical)
    subs = workdir / "submissions"
    if subs.exists():
        shutil.rmtree(subs)
    shutil.copytree(src / "submissions", subs)
    tests_dir = workdir / "tests"
    if tests_dir.exists():
        shutil.rmtree(tests_dir)
    for t in generate_tests():
        write_test(tests_dir, t)
    return {"canonical": canonical, "submissions": subs, "tests": tests_dir}
