"""Total Chern classes of (virtual) vector bundles and the operations on them.

A SheafClass is a rank together with a total Chern class living in some
GradedPolynomial ring.  Nothing here knows about relations in a Chow ring;
callers normalize results in the space they care about.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import UsageError
from .polyring import (
    GradedPolynomial,
    VariableTable,
    generalized_binomial,
    invert_unit_series,
    retable,
)


@dataclass(frozen=True)
class SheafClass:
    rank: int
    chern: GradedPolynomial

    def __post_init__(self):
        if self.rank < 0:
            raise UsageError(f"rank {self.rank} is negative")
        if self.chern.constant_term() != 1:
            raise UsageError("a total Chern class must have constant term 1")

    @property
    def table(self) -> VariableTable:
        return self.chern.table

    @property
    def bound(self) -> int:
        return self.chern.bound

    def c(self, k: int) -> GradedPolynomial:
        """k-th Chern class (zero outside 0..bound)."""
        if k < 0 or k > self.bound:
            return GradedPolynomial.zero(self.table, self.bound)
        return self.chern.homogeneous(k)

    def top(self) -> GradedPolynomial:
        return self.c(self.rank)

    def up_to(self, k: int) -> "SheafClass":
        """Keep Chern classes of degree <= k only; enough for any c_j with j <= k."""
        return SheafClass(self.rank, self.chern.below(k))

    def retable(self, table: VariableTable, bound: int | None = None, rename=None) -> "SheafClass":
        return SheafClass(self.rank, retable(self.chern, table, bound, rename))

    def map_chern(self, fn) -> "SheafClass":
        """Apply a ring map (for instance a normal form) to the Chern polynomial."""
        return SheafClass(self.rank, fn(self.chern))


def trivial(rank: int, table: VariableTable, bound: int) -> SheafClass:
    return SheafClass(rank, GradedPolynomial.one(table, bound))


def line(first_chern: GradedPolynomial) -> SheafClass:
    if not first_chern.is_homogeneous(1):
        raise UsageError("a line bundle needs a homogeneous first Chern class of weight 1")
    return SheafClass(1, 1 + first_chern)


def direct_sum(*bundles: SheafClass) -> SheafClass:
    if not bundles:
        raise UsageError("direct_sum needs at least one summand")
    total = bundles[0].chern
    for b in bundles[1:]:
        total = total * b.chern
    return SheafClass(sum(b.rank for b in bundles), total)


def dual(e: SheafClass) -> SheafClass:
    parts = e.chern.components()
    total = GradedPolynomial.zero(e.table, e.bound)
    for w, part in parts.items():
        total = total + (part if w % 2 == 0 else -part)
    return SheafClass(e.rank, total)


def quotient(e: SheafClass, f: SheafClass) -> SheafClass:
    """Class of E/F from an exact sequence 0 -> F -> E -> E/F -> 0."""
    if f.rank > e.rank:
        raise UsageError(f"quotient rank underflow: {e.rank} - {f.rank}")
    return SheafClass(e.rank - f.rank, e.chern * invert_unit_series(f.chern))


def segre(e: SheafClass) -> GradedPolynomial:
    """Total Segre class s(E) = 1 / c(E)."""
    return invert_unit_series(e.chern)


def tensor_line(e: SheafClass, first_chern: GradedPolynomial) -> SheafClass:
    """Chern class of E tensored with the line bundle whose c1 is `first_chern`."""
    if not first_chern.is_homogeneous(1):
        raise UsageError("tensor_line needs a homogeneous class of weight 1")
    bound = e.bound
    powers = [GradedPolynomial.one(e.table, bound)]
    for _ in range(bound):
        powers.append(powers[-1] * first_chern)
    cs = [e.c(i) for i in range(bound + 1)]
    total = GradedPolynomial.zero(e.table, bound)
    for k in range(bound + 1):
        for i in range(k + 1):
            if not cs[i]:
                continue
            coeff = generalized_binomial(e.rank - i, k - i)
            if coeff:
                total = total + (cs[i] * powers[k - i]).scale(coeff)
    return SheafClass(e.rank, total)


def twisted_chern(e: SheafClass, first_chern: GradedPolynomial, k: int) -> GradedPolynomial:
    """c_k(E tensor L) alone, without forming the total class."""
    if not first_chern.is_homogeneous(1):
        raise UsageError("twisted_chern needs a homogeneous class of weight 1")
    total = GradedPolynomial.zero(e.table, e.bound)
    lpow = GradedPolynomial.one(e.table, e.bound)
    for i in range(k, -1, -1):
        coeff = generalized_binomial(e.rank - i, k - i)
        ci = e.c(i)
        if coeff and ci:
            total = total + (ci * lpow).scale(coeff)
        lpow = lpow * first_chern
    return total


def cotangent_twist_chern(e: SheafClass, k: int, zeta: GradedPolynomial) -> GradedPolynomial:
    """c_k of the twisted relative cotangent bundle of P(E) = Proj Sym E.

    `zeta` is c1(O(1)); `e` must already be pulled back to the ring of zeta.
    The result is not reduced by the relation of P(E).
    """
    if not 0 <= k <= e.rank - 1:
        raise UsageError(f"k={k} outside 0..{e.rank - 1}")
    total = GradedPolynomial.zero(e.table, e.bound)
    zpow = GradedPolynomial.one(e.table, e.bound)
    for i in range(k + 1):
        term = zpow * e.c(k - i)
        total = total + (term if i % 2 == 0 else -term)
        zpow = zpow * zeta
    return total
