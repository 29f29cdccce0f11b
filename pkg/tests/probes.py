"""Expected probe skeleton of the instrumented while example."""
from covselect.nodes import ApiCall, ArrayRead, ArrayWrite, Binary, Cond, Guard, If, StrLit, While


def skeleton(stmts):
    """API calls and statements in order, with ids erased."""
    out = []
    for s in stmts:
        if isinstance(s, ApiCall):
            args = tuple(a.value if isinstance(a, StrLit) else "#" for a in s.args)
            out.append((s.name,) + args[:1] if s.name in ("BEGIN", "END") else (s.name,))
        elif isinstance(s, While):
            out.append(("while", _guard_shape(s.guard), tuple(skeleton(s.body.stmts))))
        elif isinstance(s, If):
            out.append(("if", _guard_shape(s.guard), tuple(skeleton(s.then.stmts)), tuple(skeleton(s.orelse.stmts))))
        elif isinstance(s, (ArrayRead, ArrayWrite)):
            out.append(type(s).__name__)
    return out


def _guard_shape(e):
    if isinstance(e, Guard):
        return ("GUARD", _guard_shape(e.expr))
    if isinstance(e, Cond):
        return ("COND", _guard_shape(e.expr))
    if isinstance(e, Binary):
        return (e.op, _guard_shape(e.left), _guard_shape(e.right))
    return "."


WHILE_SKELETON = [
    ("BEGIN", "WHILE"),
    (
        "while",
        ("GUARD", ("COND", (">", ".", "."))),
        (("BLOCK",), "ArrayRead", ("ARR_READ",), "ArrayWrite", ("ARR_WRITE",)),
    ),
    ("END", "WHILE"),
]
