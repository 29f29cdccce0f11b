"""Coverage-driven test suite selection for MiniC programs.

Pipeline: parse and instrument the canonical solution, run it on every
test input to collect coverage summaries, pick a fixed-size suite that
maximises a monotone coverage measure, and grade submissions on it.
"""
from .grader import GradeReport, Submission, grade, random_select
from .instrument import InstrumentedProgram, instrument, instrument_expr
from .interp import ExecutionResult, TestInput, execute
from .maxtests import (
    SelectionResult,
    extract_core_linear,
    extract_core_progression,
    heuristic_max,
    select,
)
from .measures import CompiledMeasure, MeasureSpec, evaluate
from .nodes import Program, assign_ids
from .parser import MiniCSyntaxError, parse
from .pretty import pretty
from .summaries import CoverageSummary, summarize_corpus

__version__ = "0.1.0"

__all__ = [
    "CompiledMeasure",
    "CoverageSummary",
    "ExecutionResult",
    "GradeReport",
    "InstrumentedProgram",
    "MeasureSpec",
    "MiniCSyntaxError",
    "Program",
    "SelectionResult",
    "Submission",
    "TestInput",
    "assign_ids",
    "evaluate",
    "execute",
    "extract_core_linear",
    "extract_core_progression",
    "grade",
    "heuristic_max",
    "instrument",
    "instrument_expr",
    "parse",
    "pretty",
    "random_select",
    "select",
    "summarize_corpus",
]
