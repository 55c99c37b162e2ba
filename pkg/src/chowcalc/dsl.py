"""Tokenizer, parser and printer for .chow programs.

The parser checks that every identifier is defined before use, is never
redefined, and is used with the right kind (space, bundle or class).  Which
space a class lives on is only known at run time.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from .errors import UsageError


class DslError(UsageError):
    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        self.line, self.col, self.expected = line, col, tuple(sorted(set(expected)))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{line}:{col}: {message}{detail}")


STATEMENT_KEYWORDS = ("space", "bundle", "class", "print", "assert_eq", "verify")
KEYWORDS = frozenset(STATEMENT_KEYWORDS + (
    "on", "point", "proj", "projbundle", "blowup", "total", "formal", "exceptional", "center",
    "linear", "sum", "dual", "quot", "tensorline", "zeta", "chern", "segre", "pullback",
    "pushforward", "integrate", "dim", "rank",
))

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>->|[=,(){}+\-*^])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "id", "kw", "sym", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out, line, line_start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise DslError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind, value = m.lastgroup, m.group()
        col = pos - line_start + 1
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind == "id":
            out.append(Token("kw" if value in KEYWORDS else "id", value, line, col))
        elif kind in ("int", "sym"):
            out.append(Token(kind, value, line, col))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


# ---------------------------------------------------------------------------
# syntax tree; positions do not take part in equality

def _pos():
    return field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Num:
    value: int
    pos: tuple = _pos()


@dataclass(frozen=True)
class Name:
    ident: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class Zeta:
    space: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class Chern:
    degree: int
    bundle: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class Segre:
    degree: int
    bundle: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class Pullback:
    source: str
    target: str
    arg: "ClassExpr"
    pos: tuple = _pos()


@dataclass(frozen=True)
class Pushforward:
    source: str
    target: str
    arg: "ClassExpr"
    pos: tuple = _pos()


@dataclass(frozen=True)
class Integrate:
    arg: "ClassExpr"
    pos: tuple = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str  # "+", "-", "*"
    left: "ClassExpr"
    right: "ClassExpr"
    pos: tuple = _pos()


@dataclass(frozen=True)
class Neg:
    arg: "ClassExpr"
    pos: tuple = _pos()


@dataclass(frozen=True)
class Pow:
    base: "ClassExpr"
    exponent: int
    pos: tuple = _pos()


ClassExpr = Union[Num, Name, Zeta, Chern, Segre, Pullback, Pushforward, Integrate, BinOp, Neg, Pow]


@dataclass(frozen=True)
class PointSpace:
    pos: tuple = _pos()


@dataclass(frozen=True)
class ProjSpace:
    n: int
    pos: tuple = _pos()


@dataclass(frozen=True)
class ProjBundleSpace:
    base: str
    bundle: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class PointCenter:
    pos: tuple = _pos()


@dataclass(frozen=True)
class LinearCenter:
    dim: int
    pos: tuple = _pos()


@dataclass(frozen=True)
class BlowupSpace:
    base: str
    center: Union[PointCenter, LinearCenter]
    pos: tuple = _pos()


@dataclass(frozen=True)
class TotalSpaceExpr:
    base: str
    bundle: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class FormalSpace:
    dim: int
    slots: tuple[tuple[str, int], ...]
    pos: tuple = _pos()


@dataclass(frozen=True)
class ExceptionalSpace:
    blowup: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class CenterSpace:
    blowup: str
    pos: tuple = _pos()


SpaceExpr = Union[PointSpace, ProjSpace, ProjBundleSpace, BlowupSpace, TotalSpaceExpr,
                  FormalSpace, ExceptionalSpace, CenterSpace]


@dataclass(frozen=True)
class SumBundle:
    factors: tuple[ClassExpr, ...]
    pos: tuple = _pos()


@dataclass(frozen=True)
class DualBundle:
    bundle: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class QuotBundle:
    bundle: str
    sub: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class TensorLineBundle:
    bundle: str
    first_chern: ClassExpr
    pos: tuple = _pos()


@dataclass(frozen=True)
class FormalBundle:
    rank: int
    pos: tuple = _pos()


BundleExpr = Union[SumBundle, DualBundle, QuotBundle, TensorLineBundle, FormalBundle]


@dataclass(frozen=True)
class SpaceStmt:
    name: str
    expr: SpaceExpr
    pos: tuple = _pos()


@dataclass(frozen=True)
class BundleStmt:
    name: str
    space: str
    expr: BundleExpr
    pos: tuple = _pos()


@dataclass(frozen=True)
class ClassStmt:
    name: str
    expr: ClassExpr
    pos: tuple = _pos()


@dataclass(frozen=True)
class PrintStmt:
    expr: ClassExpr
    pos: tuple = _pos()


@dataclass(frozen=True)
class AssertEqStmt:
    left: ClassExpr
    right: ClassExpr
    pos: tuple = _pos()


@dataclass(frozen=True)
class VerifyStmt:
    suite: str
    params: tuple[tuple[str, Union[int, str]], ...] = ()
    pos: tuple = _pos()


Statement = Union[SpaceStmt, BundleStmt, ClassStmt, PrintStmt, AssertEqStmt, VerifyStmt]


@dataclass(frozen=True)
class Program:
    statements: tuple[Statement, ...]


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.kinds: dict[str, str] = {}
        self.formal_slots: dict[str, dict[str, int]] = {}

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, message: str, expected=(), tok: Token | None = None):
        t = tok or self.tok
        raise DslError(message, t.line, t.col, expected)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("sym", "kw") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            self.error(f"unexpected {found!r}", (text,))
        t = self.tok
        self.i += 1
        return t

    def expect_int(self) -> int:
        if self.tok.kind != "int":
            self.error(f"unexpected {self.tok.text or 'end of input'!r}", ("INT",))
        value = int(self.tok.text)
        self.i += 1
        return value

    def expect_id(self) -> Token:
        if self.tok.kind != "id":
            what = "keyword" if self.tok.kind == "kw" else "token"
            self.error(f"unexpected {what} {self.tok.text or 'end of input'!r}", ("ID",))
        t = self.tok
        self.i += 1
        return t

    def use(self, kind: str) -> str:
        t = self.expect_id()
        have = self.kinds.get(t.text)
        if have is None:
            self.error(f"unknown identifier {t.text!r}", tok=t)
        if have != kind:
            self.error(f"{t.text!r} is a {have}, but a {kind} is expected here", tok=t)
        return t.text

    def define(self, t: Token, kind: str) -> None:
        if t.text in self.kinds:
            self.error(f"{t.text!r} is already defined", tok=t)
        self.kinds[t.text] = kind

    # statements

    def program(self) -> Program:
        stmts = []
        while self.tok.kind != "eof":
            stmts.append(self.statement())
        return Program(tuple(stmts))

    def statement(self) -> Statement:
        t = self.tok
        pos = (t.line, t.col)
        if self.at("space"):
            self.i += 1
            name = self.expect_id()
            self.expect("=")
            expr = self.space_expr()
            self.define(name, "space")
            if isinstance(expr, FormalSpace):
                self.formal_slots[name.text] = dict(expr.slots)
            return SpaceStmt(name.text, expr, pos)
        if self.at("bundle"):
            self.i += 1
            name = self.expect_id()
            self.expect("on")
            space = self.use("space")
            self.expect("=")
            expr = self.bundle_expr(space, name)
            self.define(name, "bundle")
            return BundleStmt(name.text, space, expr, pos)
        if self.at("class"):
            self.i += 1
            name = self.expect_id()
            self.expect("=")
            expr = self.class_expr()
            self.define(name, "class")
            return ClassStmt(name.text, expr, pos)
        if self.at("print"):
            self.i += 1
            return PrintStmt(self.class_expr(), pos)
        if self.at("assert_eq"):
            self.i += 1
            left = self.class_expr()
            self.expect(",")
            return AssertEqStmt(left, self.class_expr(), pos)
        if self.at("verify"):
            self.i += 1
            suite = self.expect_id().text
            params = []
            if self.at("("):
                self.i += 1
                params.append(self.kv())
                while self.at(","):
                    self.i += 1
                    params.append(self.kv())
                self.expect(")")
            return VerifyStmt(suite, tuple(params), pos)
        self.error(f"unexpected {t.text or 'end of input'!r}", STATEMENT_KEYWORDS)

    def kv(self) -> tuple[str, int | str]:
        if self.tok.kind not in ("id", "kw"):
            self.error(f"unexpected {self.tok.text or 'end of input'!r}", ("ID",))
        key = self.tok.text
        self.i += 1
        self.expect("=")
        if self.tok.kind == "int":
            return key, self.expect_int()
        if self.at("-"):
            self.i += 1
            return key, -self.expect_int()
        if self.tok.kind in ("id", "kw"):
            value = self.tok.text
            self.i += 1
            return key, value
        self.error(f"unexpected {self.tok.text or 'end of input'!r}", ("INT", "ID"))

    # spaces

    def space_expr(self) -> SpaceExpr:
        t = self.tok
        pos = (t.line, t.col)
        if self.at("point"):
            self.i += 1
            return PointSpace(pos)
        if self.at("proj"):
            self.i += 1
            return ProjSpace(self.expect_int(), pos)
        if self.at("projbundle") or self.at("total"):
            ctor = ProjBundleSpace if self.at("projbundle") else TotalSpaceExpr
            self.i += 1
            self.expect("(")
            base = self.use("space")
            self.expect(",")
            bundle = self.use("bundle")
            self.expect(")")
            return ctor(base, bundle, pos)
        if self.at("blowup"):
            self.i += 1
            self.expect("(")
            base = self.use("space")
            self.expect(",")
            center = self.center_spec()
            self.expect(")")
            return BlowupSpace(base, center, pos)
        if self.at("formal"):
            self.i += 1
            self.expect("(")
            self.expect("dim")
            self.expect("=")
            dim = self.expect_int()
            slots = []
            while self.at(","):
                self.i += 1
                slot = self.expect_id()
                if slot.text in (s for s, _ in slots):
                    self.error(f"bundle slot {slot.text!r} declared twice", tok=slot)
                self.expect("=")
                slots.append((slot.text, self.expect_int()))
            self.expect(")")
            return FormalSpace(dim, tuple(slots), pos)
        if self.at("exceptional") or self.at("center"):
            ctor = ExceptionalSpace if self.at("exceptional") else CenterSpace
            self.i += 1
            self.expect("(")
            bl = self.use("space")
            self.expect(")")
            return ctor(bl, pos)
        self.error(f"unexpected {t.text or 'end of input'!r}",
                   ("point", "proj", "projbundle", "blowup", "total", "formal", "exceptional", "center"))

    def center_spec(self):
        t = self.tok
        if self.at("point"):
            self.i += 1
            return PointCenter((t.line, t.col))
        if self.at("linear"):
            self.i += 1
            self.expect("(")
            k = self.expect_int()
            self.expect(")")
            return LinearCenter(k, (t.line, t.col))
        self.error(f"unexpected {t.text or 'end of input'!r}", ("point", "linear"))

    # bundles

    def bundle_expr(self, space: str, name: Token) -> BundleExpr:
        t = self.tok
        pos = (t.line, t.col)
        if self.at("sum"):
            self.i += 1
            self.expect("{")
            factors = [self.class_expr()]
            while self.at(","):
                self.i += 1
                factors.append(self.class_expr())
            self.expect("}")
            return SumBundle(tuple(factors), pos)
        if self.at("dual"):
            self.i += 1
            self.expect("(")
            b = self.use("bundle")
            self.expect(")")
            return DualBundle(b, pos)
        if self.at("quot"):
            self.i += 1
            self.expect("(")
            a = self.use("bundle")
            self.expect(",")
            b = self.use("bundle")
            self.expect(")")
            return QuotBundle(a, b, pos)
        if self.at("tensorline"):
            self.i += 1
            self.expect("(")
            b = self.use("bundle")
            self.expect(",")
            c = self.class_expr()
            self.expect(")")
            return TensorLineBundle(b, c, pos)
        if self.at("formal"):
            self.i += 1
            self.expect("(")
            self.expect("rank")
            self.expect("=")
            rank = self.expect_int()
            self.expect(")")
            slots = self.formal_slots.get(space)
            if slots is None:
                self.error(f"formal bundles need a formal space, and {space!r} is not one", tok=t)
            if slots.get(name.text) != rank:
                self.error(f"{space!r} declares no bundle slot {name.text}={rank}", tok=t)
            return FormalBundle(rank, pos)
        self.error(f"unexpected {t.text or 'end of input'!r}", ("sum", "dual", "quot", "tensorline", "formal"))

    # classes

    def class_expr(self) -> ClassExpr:
        left = self.term()
        while self.at("+") or self.at("-"):
            t = self.tok
            self.i += 1
            left = BinOp(t.text, left, self.term(), (t.line, t.col))
        return left

    def term(self) -> ClassExpr:
        left = self.factor()
        while self.at("*"):
            t = self.tok
            self.i += 1
            left = BinOp("*", left, self.factor(), (t.line, t.col))
        return left

    def factor(self) -> ClassExpr:
        if self.at("-"):
            t = self.tok
            self.i += 1
            return Neg(self.factor(), (t.line, t.col))
        base = self.atom()
        if self.at("^"):
            t = self.tok
            self.i += 1
            return Pow(base, self.expect_int(), (t.line, t.col))
        return base

    def atom(self) -> ClassExpr:
        t = self.tok
        pos = (t.line, t.col)
        if t.kind == "int":
            return Num(self.expect_int(), pos)
        if t.kind == "id":
            return Name(self.use("class"), pos)
        if self.at("("):
            self.i += 1
            inner = self.class_expr()
            self.expect(")")
            return inner
        if self.at("zeta"):
            self.i += 1
            self.expect("(")
            s = self.use("space")
            self.expect(")")
            return Zeta(s, pos)
        if self.at("chern") or self.at("segre"):
            ctor = Chern if self.at("chern") else Segre
            self.i += 1
            self.expect("(")
            k = self.expect_int()
            self.expect(",")
            b = self.use("bundle")
            self.expect(")")
            return ctor(k, b, pos)
        if self.at("pullback") or self.at("pushforward"):
            ctor = Pullback if self.at("pullback") else Pushforward
            self.i += 1
            self.expect("(")
            src = self.use("space")
            self.expect("->")
            tgt = self.use("space")
            self.expect(",")
            arg = self.class_expr()
            self.expect(")")
            return ctor(src, tgt, arg, pos)
        if self.at("integrate"):
            self.i += 1
            self.expect("(")
            arg = self.class_expr()
            self.expect(")")
            return Integrate(arg, pos)
        self.error(f"unexpected {t.text or 'end of input'!r}",
                   ("INT", "ID", "(", "-", "zeta", "chern", "segre", "pullback", "pushforward", "integrate"))


def parse(text: str) -> Program:
    return _Parser(text).program()


# ---------------------------------------------------------------------------
# printer

_PREC = {"+": 1, "-": 1, "*": 2}


def format_class(e: ClassExpr, prec: int = 0) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Name):
        return e.ident
    if isinstance(e, Zeta):
        return f"zeta({e.space})"
    if isinstance(e, Chern):
        return f"chern({e.degree}, {e.bundle})"
    if isinstance(e, Segre):
        return f"segre({e.degree}, {e.bundle})"
    if isinstance(e, Pullback):
        return f"pullback({e.source} -> {e.target}, {format_class(e.arg)})"
    if isinstance(e, Pushforward):
        return f"pushforward({e.source} -> {e.target}, {format_class(e.arg)})"
    if isinstance(e, Integrate):
        return f"integrate({format_class(e.arg)})"
    if isinstance(e, Neg):
        return _wrap("-" + format_class(e.arg, 3), prec > 2)
    if isinstance(e, Pow):
        return _wrap(f"{format_class(e.base, 4)}^{e.exponent}", prec > 3)
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        # left-associative: the right operand needs parens at equal precedence
        text = f"{format_class(e.left, p)} {e.op} {format_class(e.right, p + 1)}"
        return _wrap(text, prec > p)
    raise TypeError(f"not a class expression: {e!r}")


def _wrap(text: str, needed: bool) -> str:
    return f"({text})" if needed else text


def format_space(e: SpaceExpr) -> str:
    if isinstance(e, PointSpace):
        return "point"
    if isinstance(e, ProjSpace):
        return f"proj {e.n}"
    if isinstance(e, ProjBundleSpace):
        return f"projbundle({e.base}, {e.bundle})"
    if isinstance(e, TotalSpaceExpr):
        return f"total({e.base}, {e.bundle})"
    if isinstance(e, BlowupSpace):
        center = "point" if isinstance(e.center, PointCenter) else f"linear({e.center.dim})"
        return f"blowup({e.base}, {center})"
    if isinstance(e, FormalSpace):
        return "formal(" + ", ".join([f"dim={e.dim}"] + [f"{n}={r}" for n, r in e.slots]) + ")"
    if isinstance(e, ExceptionalSpace):
        return f"exceptional({e.blowup})"
    if isinstance(e, CenterSpace):
        return f"center({e.blowup})"
    raise TypeError(f"not a space expression: {e!r}")


def format_bundle(e: BundleExpr) -> str:
    if isinstance(e, SumBundle):
        return "sum{" + ", ".join(format_class(f) for f in e.factors) + "}"
    if isinstance(e, DualBundle):
        return f"dual({e.bundle})"
    if isinstance(e, QuotBundle):
        return f"quot({e.bundle}, {e.sub})"
    if isinstance(e, TensorLineBundle):
        return f"tensorline({e.bundle}, {format_class(e.first_chern)})"
    if isinstance(e, FormalBundle):
        return f"formal(rank={e.rank})"
    raise TypeError(f"not a bundle expression: {e!r}")


def format_statement(s: Statement) -> str:
    if isinstance(s, SpaceStmt):
        return f"space {s.name} = {format_space(s.expr)}"
    if isinstance(s, BundleStmt):
        return f"bundle {s.name} on {s.space} = {format_bundle(s.expr)}"
    if isinstance(s, ClassStmt):
        return f"class {s.name} = {format_class(s.expr)}"
    if isinstance(s, PrintStmt):
        return f"print {format_class(s.expr)}"
    if isinstance(s, AssertEqStmt):
        return f"assert_eq {format_class(s.left)}, {format_class(s.right)}"
    if isinstance(s, VerifyStmt):
        if not s.params:
            return f"verify {s.suite}"
        return f"verify {s.suite}(" + ", ".join(f"{k}={v}" for k, v in s.params) + ")"
    raise TypeError(f"not a statement: {s!r}")


def format_program(p: Program) -> str:
    return "".join(format_statement(s) + "\n" for s in p.statements)
