"""Execute parsed .chow programs and collect a Report."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import dsl
from .cellular import linear_center
from .errors import ChowError, InvariantViolation, UsageError
from .report import Report, ReportItem, first_difference, stopwatch
from .sheaves import SheafClass, dual, line, quotient, segre, tensor_line, trivial
from .spaces import (
    Blowup,
    ChowClass,
    FormalBase,
    Point,
    ProjBundle,
    Space,
    StructuralMap,
    TotalSpace,
    blowup,
    integrate,
    projective_space,
    pullback,
    pushforward,
)
from .suites import run_suite


@dataclass
class Environment:
    spaces: dict[str, Space] = field(default_factory=dict)
    bundles: dict[str, tuple[Space, SheafClass]] = field(default_factory=dict)
    classes: dict[str, object] = field(default_factory=dict)
    blowups: list[Blowup] = field(default_factory=list)

    def lookup(self, kind: str, name: str):
        table = {"space": self.spaces, "bundle": self.bundles, "class": self.classes}[kind]
        if name not in table:
            raise UsageError(f"{kind} {name} is unavailable because its definition failed")
        return table[name]


def _descent(space: Space, ancestor: Space) -> list[StructuralMap] | None:
    """Projections leading from `space` down to `ancestor`, or None."""
    maps = []
    while space is not ancestor:
        f = space.projection()
        if f is None:
            return None
        maps.append(f)
        space = f.target
    return maps


def lift(c: ChowClass, space: Space) -> ChowClass:
    """Pull a class back to `space` along structure projections."""
    if c.space is space:
        return c
    maps = _descent(space, c.space)
    if maps is None:
        raise UsageError(f"a class on {c.space.name} cannot be used on {space.name}")
    for f in reversed(maps):
        c = pullback(f, c)
    return c


def _common(a, b):
    """Bring two values onto one space (ints stay ints when both are ints)."""
    if isinstance(a, int) and isinstance(b, int):
        return a, b
    if isinstance(a, int):
        return b.space.cls(a), b
    if isinstance(b, int):
        return a, a.space.cls(b)
    if a.space is b.space:
        return a, b
    if _descent(a.space, b.space) is not None:
        return a, lift(b, a.space)
    if _descent(b.space, a.space) is not None:
        return lift(a, b.space), b
    raise UsageError(f"classes live on unrelated spaces {a.space.name} and {b.space.name}")


class Interpreter:
    def __init__(self):
        self.env = Environment()

    # spaces

    def space(self, e: dsl.SpaceExpr, name: str) -> Space:
        env = self.env
        if isinstance(e, dsl.PointSpace):
            return Point(name)
        if isinstance(e, dsl.ProjSpace):
            return projective_space(e.n, name=name) if e.n > 0 else Point(name)
        if isinstance(e, (dsl.ProjBundleSpace, dsl.TotalSpaceExpr)):
            base = env.lookup("space", e.base)
            on, bundle = env.lookup("bundle", e.bundle)
            if on is not base:
                raise UsageError(f"bundle {e.bundle} lives on {on.name}, not on {base.name}")
            if isinstance(e, dsl.TotalSpaceExpr):
                return TotalSpace(base, bundle, name=name)
            return ProjBundle(base, bundle, var=f"z_{name}", name=name)
        if isinstance(e, dsl.BlowupSpace):
            base = env.lookup("space", e.base)
            if not (isinstance(base, ProjBundle) and isinstance(base.base, Point)
                    and base.bundle_on_base.chern == 1):
                raise UsageError(f"blowups take a projective space built with 'proj', not {base.name}")
            n = base.rank - 1
            k = 0 if isinstance(e.center, dsl.PointCenter) else e.center.dim
            bl = blowup(base, linear_center(n, k, ambient=base), name=name)
            env.blowups.append(bl)
            return bl
        if isinstance(e, dsl.FormalSpace):
            return FormalBase(e.dim, list(e.slots), name=name)
        if isinstance(e, (dsl.ExceptionalSpace, dsl.CenterSpace)):
            bl = env.lookup("space", e.blowup)
            if not isinstance(bl, Blowup):
                raise UsageError(f"{e.blowup} is not a blowup")
            return bl.exceptional if isinstance(e, dsl.ExceptionalSpace) else bl.center
        raise TypeError(e)

    # bundles

    def bundle(self, e: dsl.BundleExpr, name: str, space: Space) -> SheafClass:
        if isinstance(e, dsl.SumBundle):
            total = trivial(0, space.table, space.bound)
            for f in e.factors:
                value = self.cls(f)
                if isinstance(value, int):
                    if value != 0:
                        raise UsageError("a line factor must be 0 or a class of codimension 1")
                    part = trivial(1, space.table, space.bound)
                else:
                    c1 = lift(value, space).poly
                    if c1 and not c1.is_homogeneous(1):
                        raise UsageError(f"line factor {dsl.format_class(f)} is not of codimension 1")
                    part = line(c1) if c1 else trivial(1, space.table, space.bound)
                total = SheafClass(total.rank + 1, total.chern * part.chern)
            return total.map_chern(space.normalize)
        if isinstance(e, dsl.DualBundle):
            return dual(self._bundle_on(e.bundle, space))
        if isinstance(e, dsl.QuotBundle):
            return quotient(self._bundle_on(e.bundle, space), self._bundle_on(e.sub, space)).map_chern(space.normalize)
        if isinstance(e, dsl.TensorLineBundle):
            value = self.cls(e.first_chern)
            c1 = lift(value, space).poly if isinstance(value, ChowClass) else space.poly(value)
            if c1 and not c1.is_homogeneous(1):
                raise UsageError("tensorline needs a class of codimension 1")
            b = self._bundle_on(e.bundle, space)
            return b if not c1 else tensor_line(b, c1).map_chern(space.normalize)
        if isinstance(e, dsl.FormalBundle):
            return space.bundle(name)
        raise TypeError(e)

    def _bundle_on(self, bname: str, space: Space) -> SheafClass:
        on, b = self.env.lookup("bundle", bname)
        if on is space:
            return b
        if _descent(space, on) is None:
            raise UsageError(f"bundle {bname} lives on {on.name}, not on {space.name}")
        return b.retable(space.table, space.bound).map_chern(space.normalize)

    # classes

    def cls(self, e: dsl.ClassExpr):
        env = self.env
        if isinstance(e, dsl.Num):
            return e.value
        if isinstance(e, dsl.Name):
            return env.lookup("class", e.ident)
        if isinstance(e, dsl.Zeta):
            s = env.lookup("space", e.space)
            if not isinstance(s, ProjBundle):
                raise UsageError(f"zeta needs a projective bundle, {e.space} is not one")
            return s.zeta()
        if isinstance(e, dsl.Chern):
            on, b = env.lookup("bundle", e.bundle)
            return on.cls(b.c(e.degree))
        if isinstance(e, dsl.Segre):
            on, b = env.lookup("bundle", e.bundle)
            if e.degree > on.bound:
                return on.zero()
            return on.cls(segre(b).homogeneous(e.degree))
        if isinstance(e, (dsl.Pullback, dsl.Pushforward)):
            src, tgt = env.lookup("space", e.source), env.lookup("space", e.target)
            maps = self.resolve(src, tgt)
            value = self.cls(e.arg)
            if isinstance(e, dsl.Pullback):
                c = tgt.cls(value) if isinstance(value, int) else value
                for f in reversed(maps):
                    c = pullback(f, c)
                return c
            c = src.cls(value) if isinstance(value, int) else value
            for f in maps:
                c = pushforward(f, c)
            return c
        if isinstance(e, dsl.Integrate):
            value = self.cls(e.arg)
            return value if isinstance(value, int) else integrate(value)
        if isinstance(e, dsl.Neg):
            return -self.cls(e.arg)
        if isinstance(e, dsl.Pow):
            return self.cls(e.base) ** e.exponent
        if isinstance(e, dsl.BinOp):
            a, b = _common(self.cls(e.left), self.cls(e.right))
            if e.op == "+":
                return a + b
            if e.op == "-":
                return a - b
            return a * b
        raise TypeError(e)

    def resolve(self, src: Space, tgt: Space) -> list[StructuralMap]:
        """Maps src -> tgt: a chain of structure projections or one blowup map."""
        chain = _descent(src, tgt)
        if chain is not None:
            return chain
        for bl in self.env.blowups:
            if src is bl.exceptional and tgt is bl:
                return [bl.exceptional_inclusion()]
            if src is bl.center and tgt is bl.base:
                return [bl.center_inclusion()]
        raise UsageError(f"no structural map {src.name} -> {tgt.name}")

    # statements

    def execute(self, stmt: dsl.Statement) -> list[ReportItem]:
        env = self.env
        if isinstance(stmt, dsl.SpaceStmt):
            env.spaces[stmt.name] = self.space(stmt.expr, stmt.name)
            return []
        if isinstance(stmt, dsl.BundleStmt):
            space = env.lookup("space", stmt.space)
            env.bundles[stmt.name] = (space, self.bundle(stmt.expr, stmt.name, space))
            return []
        if isinstance(stmt, dsl.ClassStmt):
            env.classes[stmt.name] = self.cls(stmt.expr)
            return []
        if isinstance(stmt, dsl.PrintStmt):
            value = self.cls(stmt.expr)
            return [ReportItem(_title(stmt), "pass", output=str(value))]
        if isinstance(stmt, dsl.AssertEqStmt):
            a, b = _common(self.cls(stmt.left), self.cls(stmt.right))
            if isinstance(a, int):
                witness = None if a == b else {"expected": b, "actual": a}
            else:
                witness = first_difference(b, a)
            return [ReportItem(_title(stmt), "pass" if witness is None else "fail", witness=witness)]
        if isinstance(stmt, dsl.VerifyStmt):
            return run_suite(stmt.suite, dict(stmt.params))
        raise TypeError(stmt)


def _title(stmt: dsl.Statement) -> str:
    return dsl.format_statement(stmt)


def error_item(title: str, exc: BaseException, line: int | None = None) -> ReportItem:
    if isinstance(exc, InvariantViolation):
        witness = {"error": str(exc), "kind": "invariant", **exc.witness}
    elif isinstance(exc, ChowError):
        witness = {"error": str(exc), "kind": "usage"}
    else:
        witness = {"error": f"{type(exc).__name__}: {exc}", "kind": "internal"}
    if line is not None:
        witness["line"] = line
    return ReportItem(title, "error", witness=witness)


def run(program: dsl.Program) -> Report:
    """Execute statements in order; a failing statement becomes an error item and execution goes on."""
    interp = Interpreter()
    report = Report()
    for stmt in program.statements:
        with stopwatch() as clock:
            try:
                items = interp.execute(stmt)
            except Exception as exc:  # noqa: BLE001  errors are reported, never raised
                items = [error_item(_title(stmt), exc, stmt.pos[0] or None)]
        if len(items) == 1 and not items[0].millis:
            items[0].millis = clock["millis"]
        report.extend(items)
    return report


def run_text(text: str) -> Report:
    return run(dsl.parse(text))

