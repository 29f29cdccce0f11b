"""Tree-walking interpreter for plain and instrumented MiniC programs."""
from __future__ import annotations

from dataclasses import dataclass, field

from .instrument import InstrumentedProgram
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
    StrLit,
    Unary,
    Var,
    While,
)

DEFAULT_STEP_LIMIT = 10**8

_MASK = (1 << 64) - 1
_SIGN = 1 << 63


def wrap64(v: int) -> int:
    return ((v + _SIGN) & _MASK) - _SIGN


class ArrayRef:
    """A heap array handle; identity is the handle, contents are ints."""

    __slots__ = ("data",)

    def __init__(self, data):
        self.data = data

    def __len__(self):
        return len(self.data)

    def __repr__(self):
        return f"ArrayRef({self.data!r})"


class RuntimeFault(Exception):
    """Raised inside the interpreter; ``kind`` names the fault class."""

    def __init__(self, kind: str, detail: str = ""):
        super().__init__(f"{kind}: {detail}" if detail else kind)
        self.kind = kind
        self.detail = detail


FAULT_KINDS = (
    "oob_read",
    "oob_write",
    "div_by_zero",
    "negative_malloc",
    "step_limit",
    "uninitialized",
    "type_error",
)


@dataclass
class TestInput:
    id: str
    bindings: dict

    __test__ = False  # keep pytest from collecting this class


class InputError(ValueError):
    pass


def bind_inputs(program, test: TestInput) -> dict:
    declared = {d.name: d.is_array for d in program.inputs}
    if set(test.bindings) != set(declared):
        missing = sorted(set(declared) - set(test.bindings))
        extra = sorted(set(test.bindings) - set(declared))
        raise InputError(
            f"test {test.id!r} does not match input declarations"
            f" (missing {missing}, unexpected {extra})"
        )
    env = {}
    for name, is_array in declared.items():
        value = test.bindings[name]
        if is_array:
            if not isinstance(value, list) or not all(
                isinstance(x, int) and not isinstance(x, bool) for x in value
            ):
                raise InputError(f"input {name!r} of test {test.id!r} must be an int list")
            env[name] = ArrayRef([wrap64(x) for x in value])
        else:
            if not isinstance(value, int) or isinstance(value, bool):
                raise InputError(f"input {name!r} of test {test.id!r} must be an int")
            env[name] = wrap64(value)
    return env


@dataclass
class ExecutionResult:
    output: list
    status: str = "ok"  # "ok" or "runtime_error"
    fault: str | None = None
    detail: str = ""
    steps: int = 0
    store: dict = field(default_factory=dict, repr=False)

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _truthy(v) -> bool:
    if isinstance(v, ArrayRef):
        raise RuntimeFault("type_error", "array used as a condition")
    return v != 0


def _div(a: int, b: int) -> int:
    if b == 0:
        raise RuntimeFault("div_by_zero")
    q = abs(a) // abs(b)
    return q if (a < 0) == (b < 0) else -q


def _mod(a: int, b: int) -> int:
    if b == 0:
        raise RuntimeFault("div_by_zero")
    return a - b * _div(a, b)


_ARITH = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _div,
    "%": _mod,
    "<": lambda a, b: int(a < b),
    "<=": lambda a, b: int(a <= b),
    ">": lambda a, b: int(a > b),
    ">=": lambda a, b: int(a >= b),
    "==": lambda a, b: int(a == b),
    "!=": lambda a, b: int(a != b),
}


class Interpreter:
    """Executes one program on one input, dispatching API events to builders."""

    def __init__(self, builders=(), step_limit: int = DEFAULT_STEP_LIMIT):
        if step_limit <= 0:
            raise ValueError("step_limit must be positive")
        self.builders = list(builders)
        self.step_limit = step_limit
        self.env: dict = {}
        self.output: list = []
        self.steps = 0
        self._exec = {
            Block: self._block,
            If: self._if,
            While: self._while,
            Assign: self._assign,
            ArrayWrite: self._array_write,
            ArrayRead: self._array_read,
            Malloc: self._malloc,
            Print: self._print,
            ApiCall: self._api,
        }

    def run(self, program, test: TestInput) -> ExecutionResult:
        self.env = bind_inputs(program, test)
        self.output = []
        self.steps = 0
        try:
            for s in program.body:
                self._exec[type(s)](s)
        except RuntimeFault as fault:
            return ExecutionResult(
                self.output, "runtime_error", fault.kind, fault.detail, self.steps, self.env
            )
        except RecursionError:
            return ExecutionResult(
                self.output, "runtime_error", "step_limit", "nesting too deep", self.steps, self.env
            )
        return ExecutionResult(self.output, "ok", None, "", self.steps, self.env)

    # -- statements

    def _tick(self):
        self.steps += 1
        if self.steps > self.step_limit:
            raise RuntimeFault("step_limit", f"exceeded {self.step_limit} steps")

    def _block(self, s: Block):
        self._tick()
        ex = self._exec
        for c in s.stmts:
            ex[type(c)](c)

    def _if(self, s: If):
        self._tick()
        branch = s.then if _truthy(self.eval(s.guard)) else s.orelse
        self._block(branch)

    def _while(self, s: While):
        self._tick()
        while _truthy(self.eval(s.guard)):
            self._block(s.body)
            self._tick()

    def _assign(self, s: Assign):
        self._tick()
        self.env[s.target] = self.eval(s.value)

    def _array(self, expr) -> ArrayRef:
        value = self.eval(expr)
        if not isinstance(value, ArrayRef):
            raise RuntimeFault("type_error", "indexing a non-array value")
        return value

    def _index(self, expr) -> int:
        return self._int(self.eval(expr))

    def _array_write(self, s: ArrayWrite):
        self._tick()
        array = self._array(Var(s.array))
        i = self._index(s.index)
        value = self.eval(s.value)
        if isinstance(value, ArrayRef):
            raise RuntimeFault("type_error", "storing an array inside an array")
        if not 0 <= i < len(array.data):
            raise RuntimeFault("oob_write", f"{s.array}[{i}] with length {len(array.data)}")
        array.data[i] = value

    def _array_read(self, s: ArrayRead):
        self._tick()
        array = self._array(s.array)
        i = self._index(s.index)
        if not 0 <= i < len(array.data):
            raise RuntimeFault("oob_read", f"index {i} with length {len(array.data)}")
        self.env[s.target] = array.data[i]

    def _malloc(self, s: Malloc):
        self._tick()
        n = self._int(self.eval(s.size))
        if n < 0:
            raise RuntimeFault("negative_malloc", str(n))
        if n > 10**7:
            raise RuntimeFault("step_limit", f"allocation of {n} cells")
        self.env[s.target] = ArrayRef([0] * n)

    def _print(self, s: Print):
        self._tick()
        self.output.append(self._int(self.eval(s.value)))

    def _api(self, s: ApiCall):
        args = [a.value if isinstance(a, StrLit) else self.eval(a) for a in s.args]
        method = s.name.lower()
        for b in self.builders:
            getattr(b, method)(*args)

    # -- expressions

    @staticmethod
    def _int(v) -> int:
        if isinstance(v, ArrayRef):
            raise RuntimeFault("type_error", "array used as an integer")
        return v

    def eval(self, e):
        t = type(e)
        if t is IntLit:
            return wrap64(e.value)
        if t is Var:
            try:
                return self.env[e.name]
            except KeyError:
                raise RuntimeFault("uninitialized", e.name) from None
        if t is Binary:
            op = e.op
            if op == "&&":
                if not _truthy(self.eval(e.left)):
                    return 0
                return int(_truthy(self.eval(e.right)))
            if op == "||":
                if _truthy(self.eval(e.left)):
                    return 1
                return int(_truthy(self.eval(e.right)))
            a = self._int(self.eval(e.left))
            b = self._int(self.eval(e.right))
            return wrap64(_ARITH[op](a, b))
        if t is Unary:
            v = self.eval(e.operand)
            if e.op == "!":
                return int(not _truthy(v))
            return wrap64(-self._int(v))
        if t is PostIncDec:
            try:
                old = self._int(self.env[e.name])
            except KeyError:
                raise RuntimeFault("uninitialized", e.name) from None
            self.env[e.name] = wrap64(old + 1 if e.op == "++" else old - 1)
            return old
        if t is Guard:
            v = self.eval(e.expr)
            truth = _truthy(v)
            for b in self.builders:
                b.guard(e.gid, truth)
            return v
        if t is Cond:
            v = self.eval(e.expr)
            truth = _truthy(v)
            for b in self.builders:
                b.cond(e.gid, e.index, truth)
            return v
        raise TypeError(f"cannot evaluate {e!r}")


def execute(program, test: TestInput, builders=(), step_limit: int = DEFAULT_STEP_LIMIT):
    """Run ``program`` on ``test``; returns ``(ExecutionResult, summaries)``.

    Each builder is reset before the run and finalised afterwards, also
    when the run ends in a runtime error, so partial coverage is kept.
    """
    from .summaries import CoverageSummary

    target = program.as_program() if isinstance(program, InstrumentedProgram) else program
    for b in builders:
        b.reset(program, test)
    result = Interpreter(builders, step_limit).run(target, test)
    summaries = [CoverageSummary(b.measure, test.id, b.finish()) for b in builders]
    return result, summaries
