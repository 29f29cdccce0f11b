import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covselect.instrument import instrument
from covselect.interp import TestInput, execute
from covselect.measures import (
    CompiledMeasure,
    MeasureError,
    MeasureSpec,
    eval_array,
    eval_block,
    eval_condition,
    eval_decision,
    eval_loop,
    eval_size,
    evaluate,
)
from covselect.parser import parse
from covselect.summaries import MEASURE_NAMES, make_builders

from payloads import random_records

WHILE_ARRAY = {"main_a": {"read": [0], "write": [0]}}


def record_for(program, **bindings):
    _, summaries = execute(instrument(program), TestInput("t", bindings), make_builders(MEASURE_NAMES))
    return {s.measure: s.payload for s in summaries}


# -- base measures -------------------------------------------------------------------


def test_block():
    assert eval_block([{"2": True}]) == 1
    assert eval_block([]) == 0
    assert eval_block([{"1": True, "2": True}, {"2": True, "3": True}]) == 3


def test_array():
    assert eval_array([WHILE_ARRAY]) == 2
    assert eval_array([]) == 0
    assert eval_array([WHILE_ARRAY], array_merge_rw=True) == 1
    assert eval_array([WHILE_ARRAY, {"main_b": {"read": [0], "write": []}}]) == 3


def test_loop():
    assert eval_loop([{"3": {"4": 1}}]) == 1
    assert eval_loop([{"3": {"4": 1}}, {"3": {"0": 1}}]) == 2
    assert eval_loop([{"3": {"4": 2}}, {"3": {"4": 1}}]) == 1
    assert eval_loop([]) == 0


def test_decision():
    assert eval_decision([]) == 0
    assert eval_decision([{"1": {"true": True, "false": False}}]) == 0
    assert eval_decision([{"1": {"true": True, "false": False}}, {"1": {"true": False, "false": True}}]) == 1


def test_decision_from_while_run(while_program):
    assert eval_decision([record_for(while_program, x=4, a=[0])["decision"]]) == 1


def test_condition():
    both = {"true": True, "false": True}
    only_true = {"true": True, "false": False}
    only_false = {"true": False, "false": True}
    assert eval_condition([]) == 0
    assert eval_condition([{"1": {"0": both, "1": only_true}}, {"1": {"0": only_true, "1": only_false}}]) == 1
    assert eval_condition([{"1": {"0": both, "1": only_true}}]) == 0


def test_condition_from_and_guard():
    p = parse("input a, b;\nif (a > 0 && b > 0) { x = 1; }")
    recs = [record_for(p, a=a, b=b)["condition"] for a, b in [(1, 1), (1, 0), (0, 1)]]
    assert eval_condition(recs) == 1
    assert eval_condition(recs[:2]) == 0


def test_condition_site_mismatch_rejected():
    t = {"true": True, "false": True}
    with pytest.raises(MeasureError):
        eval_condition([{"1": {"0": t}}, {"1": {"0": t, "1": t}}])


def test_size():
    assert eval_size([]) == 0
    assert eval_size([{"size": 7}]) == 7
    assert eval_size([{"size": 7}, {"size": 5}]) == 12


# -- combinations ---------------------------------------------------------------------


def test_single_term_reduces_to_base():
    recs = [{"block": {"1": True}}, {"block": {"2": True}}]
    assert evaluate(MeasureSpec.of("block"), recs) == eval_block(r["block"] for r in recs)


def test_half_block_half_loop_on_while_run(while_program):
    spec = MeasureSpec.from_pairs([("block", 0.5), ("loop", 0.5)])
    assert evaluate(spec, [record_for(while_program, x=4, a=[0])]) == 1


def test_fractional_scores_exact():
    spec = MeasureSpec.from_pairs([("block", 0.1), ("size", 0.2)])
    assert evaluate(spec, [{"block": {"1": True}, "size": {"size": 1}}]) == Fraction(3, 10)


def test_empty_set_scores_zero():
    assert evaluate(MeasureSpec.of("size"), []) == 0


@pytest.mark.parametrize(
    "terms",
    [
        [("block", 0), ("loop", 0)],
        [("block", -1)],
        [("nope", 1)],
        [("block", 1), ("block", 2)],
        [],
        [("block", "x")],
        [("block", True)],
    ],
)
def test_invalid_specs_rejected(terms):
    with pytest.raises((MeasureError, ValueError)):
        MeasureSpec.from_pairs(terms)


def test_missing_measure_in_records():
    with pytest.raises(MeasureError):
        evaluate(MeasureSpec.of("loop"), [{"block": {}}])


@pytest.mark.parametrize(
    "payload",
    [[], {"1": 1}, {"1": {"4": -1}}, {"1": {"4": "x"}}],
)
def test_malformed_loop_payload(payload):
    with pytest.raises(MeasureError):
        eval_loop([payload])


def test_label():
    assert MeasureSpec.from_pairs([("block", 1), ("loop", 0.5)]).label == "block+0.5*loop"


# -- algebraic properties -------------------------------------------------------------

SPECS = [MeasureSpec.of(n) for n in MEASURE_NAMES] + [
    MeasureSpec.of("array", array_merge_rw=True),
    MeasureSpec.from_pairs([("block", 0.5), ("loop", 0.5)]),
    MeasureSpec.from_pairs([("decision", 2), ("condition", 1), ("size", 0.25)]),
]


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), spec_i=st.integers(0, len(SPECS) - 1), data=st.data())
def test_monotone(seed, spec_i, data):
    rng = random.Random(seed)
    records = random_records(rng, 8)
    f = CompiledMeasure(SPECS[spec_i], records)
    big = data.draw(st.sets(st.integers(0, 7)))
    small = data.draw(st.sets(st.sampled_from(sorted(big))) if big else st.just(set()))
    assert f(small) <= f(big)


@pytest.mark.parametrize("seed", range(30))
def test_union_idempotent_and_order_free(seed):
    rng = random.Random(seed)
    records = random_records(rng, 6)
    for spec in SPECS[:5]:  # size is additive by design, so excluded here
        f = CompiledMeasure(spec, records)
        idx = rng.sample(range(6), 4)
        assert f(idx) == f(idx + idx) == f(list(reversed(idx)))
        shuffled = records[:]
        rng.shuffle(shuffled)
        assert evaluate(spec, shuffled) == evaluate(spec, records)


@pytest.mark.parametrize("seed", range(20))
def test_free_functions_agree_with_compiled(seed):
    records = random_records(random.Random(seed), 5)
    f = {n: CompiledMeasure(MeasureSpec.of(n), records) for n in MEASURE_NAMES}
    evals = {
        "block": eval_block,
        "array": eval_array,
        "loop": eval_loop,
        "decision": eval_decision,
        "condition": eval_condition,
        "size": eval_size,
    }
    for name, fn in evals.items():
        assert fn(r[name] for r in records) == f[name](range(5))
