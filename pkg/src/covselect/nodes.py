"""AST node types for MiniC, the small C-like language handled by covselect.

Expressions and statements are frozen dataclasses so programs can be
compared structurally and shared between threads. Statements carry an
integer ``id``; freshly parsed programs are numbered in pre-order starting
at 1, nodes injected by the instrumenter carry id 0.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Iterator, Union

# Names of the coverage summary API. They are reserved in source programs.
API_NAMES = frozenset(
    {"BEGIN", "END", "BLOCK", "GUARD", "COND", "ARR_READ", "ARR_WRITE", "CALL_MALLOC"}
)
KEYWORDS = frozenset({"if", "else", "while", "print", "malloc", "input"})
TEMP_PREFIX = "__ts_"

BOOL_OPS = frozenset({"&&", "||", "!"})
BINARY_OPS = ("+", "-", "*", "/", "%", "<", "<=", ">", ">=", "==", "!=", "&&", "||")
UNARY_OPS = ("-", "!")


def is_bool(op: str) -> bool:
    return op in BOOL_OPS


# -- expressions ------------------------------------------------------------


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class StrLit:
    """String literal; only legal as an argument of an API call."""

    value: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    operand: Expr


@dataclass(frozen=True)
class Binary:
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class PostIncDec:
    name: str
    op: str  # "++" or "--"


@dataclass(frozen=True)
class Guard:
    gid: int
    expr: Expr


@dataclass(frozen=True)
class Cond:
    gid: int
    index: int
    expr: Expr


Expr = Union[IntLit, StrLit, Var, Unary, Binary, PostIncDec, Guard, Cond]


# -- statements -------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    stmts: tuple = ()
    id: int = 0


@dataclass(frozen=True)
class If:
    guard: Expr
    then: Block
    orelse: Block
    id: int = 0


@dataclass(frozen=True)
class While:
    guard: Expr
    body: Block
    id: int = 0


@dataclass(frozen=True)
class Assign:
    target: str
    value: Expr
    id: int = 0


@dataclass(frozen=True)
class ArrayWrite:
    array: str
    index: Expr
    value: Expr
    id: int = 0


@dataclass(frozen=True)
class ArrayRead:
    target: str
    array: Expr
    index: Expr
    id: int = 0


@dataclass(frozen=True)
class Malloc:
    target: str
    size: Expr
    id: int = 0


@dataclass(frozen=True)
class Print:
    value: Expr
    id: int = 0


@dataclass(frozen=True)
class ApiCall:
    name: str
    args: tuple = ()
    id: int = 0


Stmt = Union[Block, If, While, Assign, ArrayWrite, ArrayRead, Malloc, Print, ApiCall]


@dataclass(frozen=True)
class InputDecl:
    name: str
    is_array: bool = False


@dataclass(frozen=True)
class Program:
    body: tuple = ()
    inputs: tuple = ()
    source_name: str = field(default="<string>", compare=False)

    @property
    def input_names(self) -> tuple:
        return tuple(d.name for d in self.inputs)


# -- traversal helpers --------------------------------------------------------


def children(stmt) -> tuple:
    """Direct sub-statements of ``stmt``, in source order."""
    if isinstance(stmt, Block):
        return stmt.stmts
    if isinstance(stmt, If):
        return (stmt.then, stmt.orelse)
    if isinstance(stmt, While):
        return (stmt.body,)
    return ()


def walk(stmts) -> Iterator:
    """Pre-order iteration over every statement reachable from ``stmts``."""
    stack = list(reversed(stmts))
    while stack:
        s = stack.pop()
        yield s
        stack.extend(reversed(children(s)))


def walk_expr(expr) -> Iterator:
    stack = [expr]
    while stack:
        e = stack.pop()
        yield e
        if isinstance(e, Unary):
            stack.append(e.operand)
        elif isinstance(e, Binary):
            stack.extend((e.right, e.left))
        elif isinstance(e, (Guard, Cond)):
            stack.append(e.expr)


def stmt_exprs(stmt) -> tuple:
    if isinstance(stmt, (If, While)):
        return (stmt.guard,)
    if isinstance(stmt, Assign):
        return (stmt.value,)
    if isinstance(stmt, ArrayWrite):
        return (stmt.index, stmt.value)
    if isinstance(stmt, ArrayRead):
        return (stmt.array, stmt.index)
    if isinstance(stmt, Malloc):
        return (stmt.size,)
    if isinstance(stmt, Print):
        return (stmt.value,)
    if isinstance(stmt, ApiCall):
        return stmt.args
    return ()


def is_instrumented(program: Program) -> bool:
    for s in walk(program.body):
        if isinstance(s, ApiCall):
            return True
        for e in stmt_exprs(s):
            if any(isinstance(x, (Guard, Cond)) for x in walk_expr(e)):
                return True
    return False


def assign_ids(program: Program) -> Program:
    """Number statements in pre-order starting at 1.

    Every statement, including branch blocks, gets an id; the top-level
    statement list itself does not. Renumbering an already numbered program
    yields the same program.
    """
    counter = 0

    def number(s):
        nonlocal counter
        counter += 1
        sid = counter
        if isinstance(s, Block):
            return Block(tuple(number(c) for c in s.stmts), sid)
        if isinstance(s, If):
            then = number(s.then)
            orelse = number(s.orelse)
            return If(s.guard, then, orelse, sid)
        if isinstance(s, While):
            return While(s.guard, number(s.body), sid)
        return dataclasses.replace(s, id=sid)

    body = tuple(number(s) for s in program.body)
    return dataclasses.replace(program, body=body)


def strip_ids(program: Program) -> Program:
    """Copy of ``program`` with every statement id reset to 0."""

    def strip(s):
        if isinstance(s, Block):
            return Block(tuple(strip(c) for c in s.stmts), 0)
        if isinstance(s, If):
            return If(s.guard, strip(s.then), strip(s.orelse), 0)
        if isinstance(s, While):
            return While(s.guard, strip(s.body), 0)
        return dataclasses.replace(s, id=0)

    return dataclasses.replace(program, body=tuple(strip(s) for s in program.body))
