"""Canonical concrete syntax for MiniC programs."""
from __future__ import annotations

import json

from .nodes import (
    ApiCall,
    ArrayRead,
    ArrayWrite,
    Assign,
    Binary,
    Block,
    Cond,
    Guard,
    If,
    IntLit,
    Malloc,
    PostIncDec,
    Print,
    Program,
    StrLit,
    Unary,
    Var,
    While,
)
from .parser import _PRECEDENCE

INDENT = "    "


def pretty_expr(e) -> str:
    if isinstance(e, IntLit):
        return str(e.value) if e.value >= 0 else f"({e.value})"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, StrLit):
        return json.dumps(e.value)
    if isinstance(e, PostIncDec):
        return f"{e.name}{e.op}"
    if isinstance(e, Guard):
        return f"GUARD({e.gid}, {pretty_expr(e.expr)})"
    if isinstance(e, Cond):
        return f"COND({e.gid}, {e.index}, {pretty_expr(e.expr)})"
    if isinstance(e, Unary):
        inner = pretty_expr(e.operand)
        if not isinstance(e.operand, (Var, Guard, Cond)) and not (
            isinstance(e.operand, IntLit) and e.operand.value >= 0
        ):
            inner = f"({inner})"
        return f"{e.op}{inner}"
    if isinstance(e, Binary):
        prec = _PRECEDENCE[e.op]
        return f"{_operand(e.left, prec, False)} {e.op} {_operand(e.right, prec, True)}"
    raise TypeError(f"not an expression: {e!r}")


def _operand(e, prec: int, right: bool) -> str:
    text = pretty_expr(e)
    if isinstance(e, Binary):
        child = _PRECEDENCE[e.op]
        if child < prec or (right and child == prec):
            return f"({text})"
    elif isinstance(e, PostIncDec):
        return f"({text})"
    return text


def _lines(stmt, depth: int, out: list) -> None:
    pad = INDENT * depth
    if isinstance(stmt, Block):
        out.append(pad + "{")
        for s in stmt.stmts:
            _lines(s, depth + 1, out)
        out.append(pad + "}")
    elif isinstance(stmt, If):
        _if_lines(stmt, depth, pad, out)
    elif isinstance(stmt, While):
        out.append(f"{pad}while ({pretty_expr(stmt.guard)}) {{")
        for s in stmt.body.stmts:
            _lines(s, depth + 1, out)
        out.append(pad + "}")
    elif isinstance(stmt, Assign):
        out.append(f"{pad}{stmt.target} = {pretty_expr(stmt.value)};")
    elif isinstance(stmt, ArrayWrite):
        out.append(
            f"{pad}{stmt.array}[{pretty_expr(stmt.index)}] = {pretty_expr(stmt.value)};"
        )
    elif isinstance(stmt, ArrayRead):
        out.append(
            f"{pad}{stmt.target} = {pretty_expr(stmt.array)}[{pretty_expr(stmt.index)}];"
        )
    elif isinstance(stmt, Malloc):
        out.append(f"{pad}{stmt.target} = malloc({pretty_expr(stmt.size)});")
    elif isinstance(stmt, Print):
        out.append(f"{pad}print({pretty_expr(stmt.value)});")
    elif isinstance(stmt, ApiCall):
        args = ", ".join(pretty_expr(a) for a in stmt.args)
        out.append(f"{pad}{stmt.name}({args});")
    else:
        raise TypeError(f"not a statement: {stmt!r}")


def _if_lines(stmt: If, depth: int, pad: str, out: list, prefix: str = "") -> None:
    out.append(f"{pad if not prefix else ''}{prefix}if ({pretty_expr(stmt.guard)}) {{")
    for s in stmt.then.stmts:
        _lines(s, depth + 1, out)
    orelse = stmt.orelse.stmts
    if not orelse:
        out.append(pad + "}")
    elif len(orelse) == 1 and isinstance(orelse[0], If):
        # else-if chain: the wrapping block is implicit when parsed back
        out.append(pad + "} ")
        tail = len(out) - 1
        sub: list = []
        _if_lines(orelse[0], depth, pad, sub, prefix="else ")
        out[tail] += sub[0]
        out.extend(sub[1:])
    else:
        out.append(pad + "} else {")
        for s in orelse:
            _lines(s, depth + 1, out)
        out.append(pad + "}")


def pretty(program: Program) -> str:
    out: list = []
    if program.inputs:
        decls = ", ".join(d.name + ("[]" if d.is_array else "") for d in program.inputs)
        out.append(f"input {decls};")
    for s in program.body:
        _lines(s, 0, out)
    return "\n".join(out) + "\n" if out else ""
