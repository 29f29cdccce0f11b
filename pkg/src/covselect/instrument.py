"""Source-to-source instrumentation injecting coverage summary API calls.

Control-flow statements are bracketed by ``BEGIN``/``END``, every branch
starts with ``BLOCK``, guards are wrapped in ``GUARD`` and their Boolean
sub-expressions in ``COND``; array accesses are followed by
``ARR_READ``/``ARR_WRITE`` and allocations preceded by ``CALL_MALLOC``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .nodes import (
    TEMP_PREFIX,
    ApiCall,
    ArrayRead,
    ArrayWrite,
    Binary,
    Block,
    Cond,
    Guard,
    If,
    IntLit,
    Malloc,
    Program,
    StrLit,
    Unary,
    Var,
    While,
    Assign,
    is_bool,
    is_instrumented,
)


class InstrumentationError(Exception):
    pass


@dataclass(frozen=True)
class InstrumentedProgram:
    body: tuple
    origin: Program
    # guard id -> number of static COND sites in that guard
    cond_sites: dict = field(default_factory=dict, compare=False)
    function: str = "main"

    @property
    def inputs(self) -> tuple:
        return self.origin.inputs

    def as_program(self) -> Program:
        return Program(self.body, self.origin.inputs, self.origin.source_name)


def instrument_expr(e, guard_id: int, counter: list | None = None):
    """Wrap both operands of every Boolean operator in ``COND``.

    Sites are numbered in the order their wrappers are built, i.e. inner
    operands before the operand that contains them. ``counter`` is a
    one-element list carrying the next free site index.
    """
    if counter is None:
        counter = [0]

    def cond(x):
        wrapped = Cond(guard_id, counter[0], x)
        counter[0] += 1
        return wrapped

    if isinstance(e, Binary):
        if is_bool(e.op):
            left = cond(instrument_expr(e.left, guard_id, counter))
            right = cond(instrument_expr(e.right, guard_id, counter))
        else:
            left = instrument_expr(e.left, guard_id, counter)
            right = instrument_expr(e.right, guard_id, counter)
        return Binary(e.op, left, right)
    if isinstance(e, Unary):
        inner = instrument_expr(e.operand, guard_id, counter)
        if is_bool(e.op):
            inner = cond(inner)
        return Unary(e.op, inner)
    return e


def instrument_guard(e, guard_id: int) -> tuple:
    """Instrument a full guard; returns ``(GUARD(...), number of COND sites)``.

    A guard whose top-level operator is not Boolean is itself the only
    Boolean sub-expression and is wrapped as a whole.
    """
    counter = [0]
    inner = instrument_expr(e, guard_id, counter)
    top_is_bool = isinstance(e, (Binary, Unary)) and is_bool(e.op)
    if not top_is_bool:
        inner = Cond(guard_id, counter[0], inner)
        counter[0] += 1
    return Guard(guard_id, inner), counter[0]


class _Instrumenter:
    def __init__(self, function: str):
        self.function = function
        self.fresh = 0
        self.cond_sites: dict = {}

    def temp(self, kind: str) -> str:
        self.fresh += 1
        return f"{TEMP_PREFIX}{kind}{self.fresh}"

    def static_name(self, name: str) -> StrLit:
        return StrLit(f"{self.function}:{name}")

    def block(self, b: Block) -> Block:
        out = [ApiCall("BLOCK", (IntLit(b.id),))]
        out.extend(self.stmts(b.stmts))
        return Block(tuple(out), b.id)

    def stmts(self, stmts) -> list:
        out = []
        for s in stmts:
            out.extend(self.stmt(s))
        return out

    def stmt(self, s) -> list:
        if isinstance(s, If):
            guard, sites = instrument_guard(s.guard, s.id)
            self.cond_sites[s.id] = sites
            return [
                ApiCall("BEGIN", (StrLit("IF"), IntLit(s.id))),
                If(guard, self.block(s.then), self.block(s.orelse), s.id),
                ApiCall("END", (StrLit("IF"), IntLit(s.id))),
            ]
        if isinstance(s, While):
            guard, sites = instrument_guard(s.guard, s.id)
            self.cond_sites[s.id] = sites
            return [
                ApiCall("BEGIN", (StrLit("WHILE"), IntLit(s.id))),
                While(guard, self.block(s.body), s.id),
                ApiCall("END", (StrLit("WHILE"), IntLit(s.id))),
            ]
        if isinstance(s, Block):
            return [Block(tuple(self.stmts(s.stmts)), s.id)]
        if isinstance(s, ArrayWrite):
            out, index = self.hoist(s.index, "idx")
            out.append(ArrayWrite(s.array, index, s.value, s.id))
            out.append(
                ApiCall("ARR_WRITE", (self.static_name(s.array), Var(s.array), index))
            )
            return out
        if isinstance(s, ArrayRead):
            out = []
            array = s.array
            if isinstance(array, Var) and array.name == s.target:
                # the read overwrites the handle it reads from
                aux = self.temp("aux")
                out.append(Assign(aux, array))
                array = Var(aux)
            name = s.array.name if isinstance(s.array, Var) else "<expr>"
            pre, index = self.hoist(s.index, "idx")
            out.extend(pre)
            out.append(ArrayRead(s.target, array, index, s.id))
            out.append(ApiCall("ARR_READ", (self.static_name(name), array, index)))
            return out
        if isinstance(s, Malloc):
            arg = self.temp("arg")
            return [
                Assign(arg, s.size),
                ApiCall("CALL_MALLOC", (Var(arg),)),
                Malloc(s.target, Var(arg), s.id),
            ]
        return [s]

    def hoist(self, e, kind: str) -> tuple:
        if isinstance(e, IntLit):
            return [], e
        name = self.temp(kind)
        return [Assign(name, e)], Var(name)


def instrument(program: Program, function: str = "main") -> InstrumentedProgram:
    """Instrument an uninstrumented program.

    Raises :class:`InstrumentationError` if ``program`` already contains
    coverage API calls.
    """
    if isinstance(program, InstrumentedProgram) or is_instrumented(program):
        raise InstrumentationError("program is already instrumented")
    inst = _Instrumenter(function)
    body = tuple(inst.stmts(program.body))
    return InstrumentedProgram(body, program, dict(inst.cond_sites), function)
