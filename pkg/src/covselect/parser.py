"""Lexer and recursive-descent parser for MiniC."""
from __future__ import annotations

import re
from dataclasses import dataclass

from .nodes import (
    API_NAMES,
    KEYWORDS,
    TEMP_PREFIX,
    ApiCall,
    ArrayRead,
    ArrayWrite,
    Assign,
    Binary,
    Block,
    Cond,
    Guard,
    If,
    InputDecl,
    IntLit,
    Malloc,
    PostIncDec,
    Print,
    Program,
    StrLit,
    Unary,
    Var,
    While,
    assign_ids,
)


class MiniCSyntaxError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass
class Token:
    kind: str  # "int", "ident", "str", "op", "eof"
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<str>"(?:[^"\\\n]|\\.)*")
  | (?P<op>\+\+|--|\+=|-=|\*=|&&|\|\||<=|>=|==|!=|[-+*/%<>=!(){}\[\];,])
    """,
    re.VERBOSE | re.DOTALL,
)


def tokenize(source: str) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise MiniCSyntaxError(
                f"unexpected character {source[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        text = m.group()
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "comment":
            newlines = text.count("\n")
            if newlines:
                line += newlines
                line_start = pos + text.rindex("\n") + 1
        elif kind != "ws":
            tokens.append(Token(kind, text, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# Binary operator precedence, lowest first.
_PRECEDENCE = {
    "||": 1,
    "&&": 2,
    "==": 3,
    "!=": 3,
    "<": 4,
    "<=": 4,
    ">": 4,
    ">=": 4,
    "+": 5,
    "-": 5,
    "*": 6,
    "/": 6,
    "%": 6,
}

_COMPOUND = {"+=": "+", "-=": "-", "*=": "*"}


class _Parser:
    def __init__(self, source: str, instrumented: bool):
        self.tokens = tokenize(source)
        self.pos = 0
        self.instrumented = instrumented

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        return MiniCSyntaxError(message, tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text == text

    def advance(self) -> Token:
        tok = self.tok
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def identifier(self) -> str:
        tok = self.tok
        if tok.kind != "ident":
            found = tok.text or "end of input"
            raise self.error(f"expected identifier, found {found!r}")
        if tok.text in KEYWORDS:
            raise self.error(f"keyword {tok.text!r} cannot be used as a name")
        if tok.text in API_NAMES:
            raise self.error(f"{tok.text!r} is a reserved coverage API name")
        if tok.text.startswith(TEMP_PREFIX) and not self.instrumented:
            raise self.error(f"names starting with {TEMP_PREFIX!r} are reserved")
        self.advance()
        return tok.text

    # -- program structure

    def program(self) -> Program:
        inputs = []
        seen = set()
        while self.at("input"):
            self.advance()
            while True:
                tok = self.tok
                name = self.identifier()
                is_array = False
                if self.at("["):
                    self.advance()
                    self.expect("]")
                    is_array = True
                if name in seen:
                    raise self.error(f"input {name!r} declared twice", tok)
                seen.add(name)
                inputs.append(InputDecl(name, is_array))
                if not self.at(","):
                    break
                self.advance()
            self.expect(";")
        body = []
        while self.tok.kind != "eof":
            if self.at("input"):
                raise self.error("input declarations must precede statements")
            body.append(self.statement())
        return Program(tuple(body), tuple(inputs))

    def branch(self) -> Block:
        stmt = self.statement()
        if isinstance(stmt, Block):
            return stmt
        return Block((stmt,))

    def block(self) -> Block:
        self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                raise self.error("unterminated block, expected '}'")
            stmts.append(self.statement())
        self.advance()
        return Block(tuple(stmts))

    def statement(self):
        tok = self.tok
        if self.at("{"):
            return self.block()
        if self.at("if"):
            self.advance()
            self.expect("(")
            guard = self.expression()
            self.expect(")")
            then = self.branch()
            orelse = Block()
            if self.at("else"):
                self.advance()
                orelse = self.branch()
            return If(guard, then, orelse)
        if self.at("while"):
            self.advance()
            self.expect("(")
            guard = self.expression()
            self.expect(")")
            return While(guard, self.branch())
        if self.at("print"):
            self.advance()
            self.expect("(")
            value = self.expression()
            self.expect(")")
            self.expect(";")
            return Print(value)
        if tok.kind == "ident" and tok.text in API_NAMES and tok.text not in ("GUARD", "COND"):
            if not self.instrumented:
                raise self.error(f"{tok.text!r} is a reserved coverage API name")
            return self.api_call()
        if tok.kind == "ident":
            return self.assignment()
        found = tok.text or "end of input"
        raise self.error(f"expected statement, found {found!r}")

    def api_call(self) -> ApiCall:
        name = self.advance().text
        self.expect("(")
        args = []
        if not self.at(")"):
            while True:
                if self.tok.kind == "str":
                    args.append(StrLit(_unquote(self.advance().text)))
                else:
                    args.append(self.expression())
                if not self.at(","):
                    break
                self.advance()
        self.expect(")")
        self.expect(";")
        return ApiCall(name, tuple(args))

    def assignment(self):
        target = self.identifier()
        if self.at("["):
            self.advance()
            index = self.expression()
            self.expect("]")
            self.expect("=")
            value = self.expression()
            self.expect(";")
            return ArrayWrite(target, index, value)
        if self.at("++") or self.at("--"):
            op = self.advance().text
            self.expect(";")
            return Assign(target, Binary(op[0], Var(target), IntLit(1)))
        if self.tok.text in _COMPOUND and self.tok.kind == "op":
            op = _COMPOUND[self.advance().text]
            value = self.expression()
            self.expect(";")
            return Assign(target, Binary(op, Var(target), value))
        self.expect("=")
        if self.at("malloc"):
            self.advance()
            self.expect("(")
            size = self.expression()
            self.expect(")")
            self.expect(";")
            return Malloc(target, size)
        if self.tok.kind == "ident" and self.peek().text == "[":
            array = Var(self.identifier())
            self.advance()
            index = self.expression()
            self.expect("]")
            if not self.at(";"):
                raise self.error(
                    "array reads must stand alone, as in 'x = a[i];'"
                )
            self.advance()
            return ArrayRead(target, array, index)
        value = self.expression()
        self.expect(";")
        return Assign(target, value)

    # -- expressions

    def expression(self, min_prec: int = 1):
        left = self.unary()
        while self.tok.kind == "op" and _PRECEDENCE.get(self.tok.text, 0) >= min_prec:
            op = self.advance().text
            right = self.expression(_PRECEDENCE[op] + 1)
            left = Binary(op, left, right)
        return left

    def unary(self):
        if self.tok.kind == "op" and self.tok.text in ("-", "!"):
            op = self.advance().text
            return Unary(op, self.unary())
        return self.primary()

    def primary(self):
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            return IntLit(int(tok.text))
        if self.at("("):
            self.advance()
            e = self.expression()
            self.expect(")")
            return e
        if tok.kind == "ident" and tok.text in ("GUARD", "COND"):
            if not self.instrumented:
                raise self.error(f"{tok.text!r} is a reserved coverage API name")
            self.advance()
            self.expect("(")
            gid = self.int_literal()
            self.expect(",")
            if tok.text == "COND":
                index = self.int_literal()
                self.expect(",")
            e = self.expression()
            self.expect(")")
            return Guard(gid, e) if tok.text == "GUARD" else Cond(gid, index, e)
        if tok.kind == "ident":
            name = self.identifier()
            if self.at("++") or self.at("--"):
                return PostIncDec(name, self.advance().text)
            if self.at("["):
                raise self.error("array reads must stand alone, as in 'x = a[i];'")
            return Var(name)
        found = tok.text or "end of input"
        raise self.error(f"expected expression, found {found!r}")

    def int_literal(self) -> int:
        if self.tok.kind != "int":
            raise self.error("expected integer literal")
        return int(self.advance().text)


def _unquote(text: str) -> str:
    return re.sub(r"\\(.)", r"\1", text[1:-1])


def parse(source: str, *, source_name: str = "<string>", instrumented: bool = False) -> Program:
    """Parse MiniC source into a :class:`Program` with pre-order statement ids.

    With ``instrumented=True`` the coverage API calls, ``GUARD``/``COND``
    wrappers and ``__ts_`` temporaries are accepted, so pretty-printed
    instrumented programs can be read back.
    """
    program = _Parser(source, instrumented).program()
    program = assign_ids(program)
    return Program(program.body, program.inputs, source_name)


def parse_file(path) -> Program:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), source_name=str(path))
