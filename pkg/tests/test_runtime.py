import json

import pytest

from covselect.instrument import instrument
from covselect.interp import InputError, Interpreter, TestInput, execute, wrap64
from covselect.parser import parse
from covselect.summaries import (
    INDEX_FILE,
    MEASURE_NAMES,
    SummaryBuilder,
    load_store,
    make_builders,
    summarize_corpus,
    write_test,
)

from progs import random_input, random_program


def run(src, **bindings):
    p = parse(src)
    return Interpreter().run(p, TestInput("t", bindings))


def payloads(program, **bindings):
    _, summaries = execute(instrument(program), TestInput("t", bindings), make_builders(MEASURE_NAMES))
    return {s.measure: s.payload for s in summaries}


# -- interpreter semantics ------------------------------------------------------------


@pytest.mark.parametrize(
    "expr, value",
    [
        ("7 / 2", 3),
        ("-7 / 2", -3),
        ("7 / -2", -3),
        ("-7 % 2", -1),
        ("7 % -2", 1),
        ("1 < 2 && 3", 1),
        ("0 || 0", 0),
        ("!5", 0),
        ("-(3)", -3),
        ("9223372036854775807 + 1", -9223372036854775808),
    ],
)
def test_integer_semantics(expr, value):
    r = run(f"print({expr});")
    assert r.ok and r.output == [value]


def test_wrap64():
    assert wrap64(2**63) == -(2**63)
    assert wrap64(-(2**63) - 1) == 2**63 - 1


def test_short_circuit_skips_side_effects():
    r = run("x = 0; y = 0 && x++; z = 1 || x++; print(x);")
    assert r.output == [0]


def test_post_increment_returns_old_value():
    assert run("x = 5; y = x--; print(y); print(x);").output == [5, 4]


@pytest.mark.parametrize(
    "src, kind",
    [
        ("input a[];\nx = a[3];", "oob_read"),
        ("input a[];\na[-1] = 2;", "oob_write"),
        ("x = 1 / 0;", "div_by_zero"),
        ("x = 1 % 0;", "div_by_zero"),
        ("b = malloc(0 - 1);", "negative_malloc"),
        ("print(q);", "uninitialized"),
        ("input a[];\nprint(a);", "type_error"),
    ],
)
def test_runtime_faults(src, kind):
    p = parse(src)
    bindings = {d.name: [1, 2, 3] if d.is_array else 0 for d in p.inputs}
    r = Interpreter().run(p, TestInput("t", bindings))
    assert r.status == "runtime_error" and r.fault == kind


def test_output_stops_at_fault():
    r = run("print(1); x = 1 / 0; print(2);")
    assert r.output == [1] and r.fault == "div_by_zero"


def test_step_limit():
    p = parse("while (1) { x = 1; }")
    r = Interpreter(step_limit=1000).run(p, TestInput("t", {}))
    assert r.fault == "step_limit"


def test_malloc_zero_initialised_and_handles_alias():
    r = run("b = malloc(3); c = b; c[1] = 4; x = b[1]; y = b[0]; print(x); print(y);")
    assert r.output == [4, 0]


def test_input_binding_checked():
    p = parse("input n, a[];\nprint(n);")
    with pytest.raises(InputError):
        Interpreter().run(p, TestInput("t", {"n": 1}))
    with pytest.raises(InputError):
        Interpreter().run(p, TestInput("t", {"n": [1], "a": [1]}))


def test_inputs_not_mutated_across_runs():
    p = parse("input a[];\na[0] = 9;")
    t = TestInput("t", {"a": [1]})
    Interpreter().run(p, t)
    assert t.bindings["a"] == [1]


# -- summaries on the running example -----------------------------------------------


def test_golden_summaries_x4(while_program):
    got = payloads(while_program, x=4, a=[0])
    loop_id = str(while_program.body[0].id)
    assert got["block"] == {"2": True}
    assert got["array"] == {"main_a": {"read": [0], "write": [0]}}
    assert got["loop"] == {loop_id: {"4": 1}}
    assert got["decision"] == {loop_id: {"true": True, "false": True}}


def test_summaries_x0(while_program):
    got = payloads(while_program, x=0, a=[0])
    assert got["block"] == {}
    assert got["array"] == {}
    assert got["loop"] == {"1": {"0": 1}}


def test_size_payload():
    p = parse("input n, a[];\nprint(n);")
    assert payloads(p, n=3, a=[1, 2, 3, 4])["size"] == {"size": 5}


def test_nested_loops_and_ifs_counted_per_loop():
    src = """
    input n;
    i = 0;
    while (i < n) {
        j = 0;
        if (i > 0) { k = 1; }
        while (j < i) { j++; }
        i++;
    }
    """
    got = payloads(parse(src), n=3)
    # outer loop id 2: one execution of 3 iterations; inner loop runs with 0, 1, 2
    assert got["loop"] == {"2": {"3": 1}, "9": {"0": 1, "1": 1, "2": 1}}


def test_condition_payload_lists_all_sites():
    p = parse("input a, b;\nif (a > 0 && b > 0) { x = 1; }")
    got = payloads(p, a=0, b=1)
    # b > 0 is never evaluated but its site is present
    assert got["condition"] == {
        "1": {"0": {"true": False, "false": True}, "1": {"true": False, "false": False}}
    }


def test_partial_summary_kept_on_fault():
    p = parse("input a[];\ni = 0;\nwhile (i < 5) { x = a[i]; i++; }")
    result, summaries = execute(instrument(p), TestInput("t", {"a": [1, 2]}), make_builders(["array", "loop"]))
    assert result.fault == "oob_read"
    by = {s.measure: s.payload for s in summaries}
    assert by["array"] == {"main_a": {"read": [0, 1], "write": []}}
    assert by["loop"] == {}  # the loop never completed


# -- properties over random programs ---------------------------------------------------


class EventLog(SummaryBuilder):
    measure = "events"

    def reset(self, program, test):
        self.events = []

    def begin(self, kind, sid):
        self.events.append(("begin", kind, sid))

    def end(self, kind, sid):
        self.events.append(("end", kind, sid))

    def guard(self, gid, value):
        self.events.append(("guard", gid, value))

    def finish(self):
        return {"events": self.events}


def _loop_oracle(events):
    """Iteration counts recomputed from the raw event log."""
    counts = {}
    open_loops = []
    for ev in events:
        if ev[0] == "begin":
            open_loops.append([ev[1], ev[2], 0])
        elif ev[0] == "guard":
            # the guard belongs to the innermost open control statement
            top = open_loops[-1]
            if top[0] == "WHILE" and top[1] == ev[1] and ev[2]:
                top[2] += 1
        else:
            kind, sid, n = open_loops.pop()
            assert (kind, sid) == (ev[1], ev[2])
            if kind == "WHILE":
                counts.setdefault(sid, []).append(n)
    return counts


@pytest.mark.parametrize("seed", range(60))
def test_loop_builder_matches_event_log(seed):
    p = instrument(random_program(seed, size=5))
    log, loop = EventLog(), make_builders(["loop"])[0]
    result, (events, summary) = execute(p, random_input(seed), [log, loop])
    events = events.payload["events"]
    depth = 0
    for ev in events:
        depth += {"begin": 1, "end": -1}.get(ev[0], 0)
        assert depth >= 0
        if ev[0] == "guard":
            assert depth > 0
    if result.ok:
        assert depth == 0
    oracle = _loop_oracle(events)
    for lid, per_count in summary.payload.items():
        runs = oracle[int(lid)]
        assert sum(per_count.values()) == len(runs)
        assert sum(int(c) * k for c, k in per_count.items()) == sum(runs)
    assert {int(k) for k in summary.payload} == set(oracle)


def _user_store(store):
    return {k: getattr(v, "data", v) for k, v in store.items() if not k.startswith("__ts_")}


@pytest.mark.parametrize("seed", range(200))
def test_instrumentation_preserves_semantics(seed):
    p = random_program(seed)
    t = random_input(seed * 7 + 1)
    plain = Interpreter().run(p, t)
    inst, _ = execute(instrument(p), t, make_builders(MEASURE_NAMES))
    assert inst.output == plain.output
    assert (inst.status, inst.fault) == (plain.status, plain.fault)
    assert _user_store(inst.store) == _user_store(plain.store)


def _covered(p):
    atoms = set()
    atoms |= {("b", k) for k in p["block"]}
    atoms |= {("a", n, kind, i) for n, rw in p["array"].items() for kind in rw for i in rw[kind]}
    atoms |= {("d", g, tv) for g, e in p["decision"].items() for tv, v in e.items() if v}
    atoms |= {("c", g, j, tv) for g, s in p["condition"].items() for j, e in s.items() for tv, v in e.items() if v}
    return atoms


@pytest.mark.parametrize("n", [0, 1, 2, 5])
def test_payloads_monotone_in_trace_length(n):
    src = """
    input n, a[];
    i = 0;
    while (i < n) {
        v = a[i];
        if (v > 2 || v < 0) { a[i] = 0; } else { a[i] = 1; }
        i++;
    }
    """
    p = parse(src)
    arr = [3, -1, 1, 2, 5, 0]
    shorter = _covered(payloads(p, n=n, a=arr))
    longer = _covered(payloads(p, n=n + 1, a=arr))
    assert shorter <= longer


# -- summary store ---------------------------------------------------------------


def test_summarize_corpus_writes_store(tmp_path, while_program):
    tests = [TestInput("t0", {"x": 0, "a": [0]}), TestInput("t4", {"x": 4, "a": [0]})]
    summarize_corpus(while_program, tests, ["loop", "block"], tmp_path)
    assert json.loads((tmp_path / "loop" / "t0.json").read_text()) == {"1": {"0": 1}}
    assert json.loads((tmp_path / "loop" / "t4.json").read_text()) == {"1": {"4": 1}}
    files = sorted(p.relative_to(tmp_path).as_posix() for p in tmp_path.rglob("*.json"))
    assert files == ["block/t0.json", "block/t4.json", "loop/t0.json", "loop/t4.json", INDEX_FILE]


def test_summarize_single_test_two_measures(tmp_path, while_program):
    summarize_corpus(while_program, [TestInput("only", {"x": 1, "a": [2]})], ["block", "array"], tmp_path)
    assert len(list(tmp_path.rglob("*.json"))) == 3


def test_summarize_is_byte_deterministic(tmp_path, while_program):
    tests = [TestInput(f"t{x}", {"x": x, "a": [1]}) for x in range(4)]
    summarize_corpus(while_program, tests, MEASURE_NAMES, tmp_path / "a")
    summarize_corpus(while_program, tests, MEASURE_NAMES, tmp_path / "b")
    for f in (tmp_path / "a").rglob("*.json"):
        assert f.read_bytes() == (tmp_path / "b" / f.relative_to(tmp_path / "a")).read_bytes()


def test_crashing_test_excluded(tmp_path):
    p = parse("input i, a[];\nx = a[i];\nprint(x);")
    tests = [TestInput("ok", {"i": 0, "a": [5]}), TestInput("bad", {"i": 3, "a": [5]})]
    for t in tests:
        write_test(tmp_path / "tests", t)
    index = summarize_corpus(p, tests, ["block"], tmp_path / "store")
    assert [t["excluded"] for t in index["tests"]] == [False, True]
    loaded, records = load_store(tmp_path / "store")
    assert loaded["usable"] == ["ok"] and len(records) == 1


def test_summarize_requires_tests(while_program):
    with pytest.raises(ValueError):
        summarize_corpus(while_program, [], ["block"])
