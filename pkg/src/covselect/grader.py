"""Run submissions against a test suite and report failure rates."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .interp import DEFAULT_STEP_LIMIT, InputError, Interpreter
from .parser import MiniCSyntaxError, parse

PASS = "pass"
FAIL_OUTPUT = "fail_output"
FAIL_RUNTIME = "fail_runtime"
FAIL_LIMIT = "fail_limit"


@dataclass
class Submission:
    id: str
    program: object = None  # Program, or None when it failed to parse
    error: str = ""

    @classmethod
    def from_source(cls, sid: str, source: str) -> Submission:
        try:
            return cls(sid, parse(source, source_name=sid))
        except MiniCSyntaxError as exc:
            return cls(sid, None, f"syntax error at {exc}")


class CanonicalFault(RuntimeError):
    pass


@dataclass
class GradeReport:
    suite: list
    submissions: list
    matrix: dict  # submission id -> list of outcomes, one per suite test
    errors: dict = field(default_factory=dict)

    def failed_tests(self, sid: str) -> int:
        return sum(o != PASS for o in self.matrix[sid])

    def submission_fail_rate(self, sid: str) -> float:
        """Percentage of suite tests this submission fails."""
        return 100.0 * self.failed_tests(sid) / len(self.suite) if self.suite else 0.0

    @property
    def detected(self) -> list:
        return [s for s in self.submissions if self.failed_tests(s)]

    @property
    def fail_any_rate(self) -> float:
        """Percentage of submissions failing at least one test."""
        if not self.submissions:
            return 0.0
        return 100.0 * len(self.detected) / len(self.submissions)

    @property
    def pair_failure_rate(self) -> float:
        """Percentage of (submission, test) pairs that fail."""
        cells = len(self.submissions) * len(self.suite)
        if not cells:
            return 0.0
        return 100.0 * sum(self.failed_tests(s) for s in self.submissions) / cells

    def to_json(self) -> dict:
        return {
            "suite": list(self.suite),
            "matrix": {s: list(self.matrix[s]) for s in self.submissions},
            "errors": dict(self.errors),
            "per_submission": {
                s: {
                    "failed_tests": self.failed_tests(s),
                    "fail_rate": round(self.submission_fail_rate(s), 2),
                }
                for s in self.submissions
            },
            "fail_any_rate": round(self.fail_any_rate, 2),
            "pair_failure_rate": round(self.pair_failure_rate, 2),
            "detected": self.detected,
        }


def _outcome(program, test, expected, step_limit) -> str:
    try:
        result = Interpreter((), step_limit).run(program, test)
    except InputError:
        return FAIL_RUNTIME
    if result.fault == "step_limit":
        return FAIL_LIMIT
    if not result.ok:
        return FAIL_RUNTIME
    return PASS if result.output == expected else FAIL_OUTPUT


def grade(canonical, submissions, suite, step_limit=DEFAULT_STEP_LIMIT) -> GradeReport:
    """Grade ``submissions`` on the tests in ``suite`` against ``canonical``.

    A submission fails a test when its printed output differs from the
    canonical output or when it faults.
    """
    expected = []
    for test in suite:
        result = Interpreter((), step_limit).run(canonical, test)
        if not result.ok:
            raise CanonicalFault(f"canonical solution faults on test {test.id!r}: {result.fault}")
        expected.append(result.output)
    matrix = {}
    errors = {}
    for sub in submissions:
        if sub.program is None:
            matrix[sub.id] = [FAIL_RUNTIME] * len(suite)
            errors[sub.id] = sub.error
            continue
        matrix[sub.id] = [
            _outcome(sub.program, t, out, step_limit) for t, out in zip(suite, expected)
        ]
    return GradeReport([t.id for t in suite], [s.id for s in submissions], matrix, errors)


def random_select(test_ids, n: int, seed) -> list:
    """Uniform sample of ``n`` test ids without replacement, in input order."""
    test_ids = list(test_ids)
    if not 0 <= n <= len(test_ids):
        raise ValueError(f"cannot pick {n} of {len(test_ids)} tests")
    picked = set(random.Random(seed).sample(range(len(test_ids)), n))
    return [t for i, t in enumerate(test_ids) if i in picked]


def render_table(columns: dict, rows=("fail_any_rate", "pair_failure_rate")) -> str:
    """Text table with one column per suite; rates as percentages."""
    labels = {"fail_any_rate": "fail-any %", "pair_failure_rate": "pair fail %", "detected": "detected"}
    names = list(columns)
    width = max([12] + [len(n) + 2 for n in names])
    head = f"{'':<14}" + "".join(f"{n:>{width}}" for n in names)
    lines = [head, "-" * len(head)]
    for row in rows:
        cells = []
        for n in names:
            v = columns[n][row]
            cells.append(f"{v:>{width}.2f}" if isinstance(v, float) else f"{v:>{width}}")
        lines.append(f"{labels.get(row, row):<14}" + "".join(cells))
    return "\n".join(lines)
