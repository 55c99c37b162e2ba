"""Chow rings of towers built from a point or a formal base.

Every space owns a VariableTable and a truncation bound equal to its
dimension.  Classes are stored in normal form: a unique integer combination
of basis monomials.  Polynomial towers (no blowup anywhere below) reduce by
walking the projective-bundle relations from the top level down; anything
sitting over a blowup falls back to coefficientwise arithmetic in the base.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .errors import InvariantViolation, NotProperError, UsageError
from .polyring import (
    FIELD_MASK,
    GradedPolynomial,
    VariableTable,
    apply_map,
    format_monomial,
    monomials_of_weight,
    retable,
)
from .sheaves import SheafClass, dual, segre, trivial

DEFAULT_MAX_DIM = 12


def max_formal_dim() -> int:
    raw = os.environ.get("CHOWCALC_MAX_DIM", "")
    try:
        return int(raw) if raw else DEFAULT_MAX_DIM
    except ValueError:
        raise UsageError(f"CHOWCALC_MAX_DIM={raw!r} is not an integer") from None


# ---------------------------------------------------------------------------
# spaces


class Space:
    kind = "space"
    polynomial = True
    formal = False
    proper = True

    def __init__(self, table: VariableTable, bound: int, dim: int, base: "Space | None", name: str):
        self.table = table
        self.bound = bound
        self.dim = dim
        self.base = base
        self.name = name

    def __repr__(self) -> str:
        return f"<{self.kind} {self.name} dim={self.dim}>"

    # ring structure

    def _check_poly(self, p: GradedPolynomial) -> None:
        if p.table != self.table or p.bound != self.bound:
            raise UsageError(
                f"polynomial over {p.table!r} (bound {p.bound}) does not live on {self.name}"
            )

    def normalize(self, p: GradedPolynomial) -> GradedPolynomial:
        self._check_poly(p)
        return _tower_reduce(self, p)

    def mul(self, p: GradedPolynomial, q: GradedPolynomial) -> GradedPolynomial:
        return self.normalize(p * q)

    def basis_monomials(self, k: int) -> list[tuple[int, ...]]:
        raise NotImplementedError

    def label(self, exps: tuple[int, ...]) -> str:
        return format_monomial(exps, self.table)

    def projection(self) -> "StructuralMap | None":
        return None

    # convenience

    def poly(self, value: int = 0) -> GradedPolynomial:
        return GradedPolynomial.constant(self.table, self.bound, value)

    def cls(self, p: GradedPolynomial | int) -> "ChowClass":
        if isinstance(p, int):
            p = self.poly(p)
        return ChowClass(self, self.normalize(p), normalized=True)

    def zero(self) -> "ChowClass":
        return self.cls(0)

    def one(self) -> "ChowClass":
        return self.cls(1)

    def variable(self, name: str) -> "ChowClass":
        return self.cls(GradedPolynomial.var(self.table, name, self.bound))

    def basis(self, k: int) -> list["ChowClass"]:
        return [
            ChowClass(self, GradedPolynomial._raw(self.table, self.bound, {self.table.pack(e): 1}), True)
            for e in self.basis_monomials(k)
        ]

    def basis_ranks(self) -> list[int]:
        return [len(self.basis_monomials(k)) for k in range(self.ring_dim + 1)]

    @property
    def ring_dim(self) -> int:
        """Largest codimension that can carry a nonzero class."""
        return self.bound


class Point(Space):
    kind = "point"

    def __init__(self, name: str = "pt"):
        super().__init__(VariableTable(), 0, 0, None, name)

    def basis_monomials(self, k: int) -> list[tuple[int, ...]]:
        return [()] if k == 0 else []


class FormalBase(Space):
    """Base whose Chow ring is freely generated by Chern classes of named bundles.

    Classes of codimension above `dim_bound` are set to zero, so every identity
    verified here holds in codimension up to that bound.
    """

    kind = "formal"
    formal = True
    proper = False

    def __init__(self, dim_bound: int, bundles: Sequence[tuple[str, int]], name: str = "S"):
        cap = max_formal_dim()
        if dim_bound < 0 or dim_bound > cap:
            raise UsageError(f"formal dimension {dim_bound} outside 0..{cap} (CHOWCALC_MAX_DIM)")
        entries = []
        self.ranks: dict[str, int] = {}
        for bname, rank in bundles:
            if rank < 0:
                raise UsageError(f"bundle {bname!r} has negative rank")
            if bname in self.ranks:
                raise UsageError(f"bundle {bname!r} declared twice")
            self.ranks[bname] = rank
            for i in range(1, min(rank, dim_bound) + 1):
                entries.append((chern_name(i, bname), i))
        super().__init__(VariableTable(entries), dim_bound, dim_bound, None, name)

    def bundle(self, bname: str) -> SheafClass:
        if bname not in self.ranks:
            raise UsageError(f"{self.name} has no bundle {bname!r}")
        rank = self.ranks[bname]
        total = self.poly(1)
        for i in range(1, min(rank, self.bound) + 1):
            total = total + GradedPolynomial.var(self.table, chern_name(i, bname), self.bound)
        return SheafClass(rank, total)

    def basis_monomials(self, k: int) -> list[tuple[int, ...]]:
        if k < 0 or k > self.bound:
            return []
        cache = self.__dict__.setdefault("_basis_cache", {})
        if k not in cache:
            cache[k] = monomials_of_weight(self.table, k)
        return cache[k]


def chern_name(i: int, bundle: str) -> str:
    return f"c{i}({bundle})"


class ProjBundle(Space):
    """P(E) = Proj Sym E over `base`, with zeta = c1(O(1))."""

    kind = "proj_bundle"

    def __init__(self, base: Space, bundle: SheafClass, var: str = "z", name: str | None = None):
        if bundle.rank < 1:
            raise UsageError("cannot projectivize a bundle of rank 0")
        if bundle.table != base.table or bundle.bound != base.bound:
            raise UsageError("bundle does not live on the base space")
        r = bundle.rank
        var = base.table.fresh_name(var)
        self.rank = r
        self.zeta_name = var
        self.bundle_on_base = bundle.map_chern(base.normalize)
        table = base.table.extend([(var, 1)])
        super().__init__(table, base.bound + r - 1, base.dim + r - 1, base,
                         name or f"P({base.name})")
        self.polynomial = base.polynomial
        self.formal = base.formal
        self.proper = base.proper
        # zeta^r = sum_i (-1)^(i+1) c_i(E) zeta^(r-i)
        self.relation = [
            (i, self.bundle_on_base.c(i).scale((-1) ** (i + 1))) for i in range(1, r + 1)
        ]

    @cached_property
    def bundle(self) -> SheafClass:
        """The projectivized bundle pulled back to this space."""
        return self.bundle_on_base.retable(self.table, self.bound)

    def zeta(self) -> "ChowClass":
        return self.variable(self.zeta_name)

    def normalize(self, p: GradedPolynomial) -> GradedPolynomial:
        self._check_poly(p)
        if self.polynomial:
            return _tower_reduce(self, p)
        return self._coefficientwise(p.split_by(self.zeta_name), normalize_first=True)

    def mul(self, p: GradedPolynomial, q: GradedPolynomial) -> GradedPolynomial:
        if self.polynomial:
            return self.normalize(p * q)
        self._check_poly(p)
        self._check_poly(q)
        base = self.base
        ps = {e: base.normalize(self._down(c)) for e, c in p.split_by(self.zeta_name).items()}
        qs = {e: base.normalize(self._down(c)) for e, c in q.split_by(self.zeta_name).items()}
        prod: dict[int, GradedPolynomial] = {}
        for a, pa in ps.items():
            for b, qb in qs.items():
                if a + b > self.bound:
                    continue
                term = base.mul(pa, qb)
                prod[a + b] = prod[a + b] + term if a + b in prod else term
        return self._coefficientwise(prod, normalize_first=False)

    def _down(self, c: GradedPolynomial) -> GradedPolynomial:
        return retable(c, self.base.table, self.base.bound)

    def _coefficientwise(self, coeffs: Mapping[int, GradedPolynomial], normalize_first: bool):
        base = self.base
        work: dict[int, GradedPolynomial] = {}
        for e, c in coeffs.items():
            c = self._down(c) if c.table != base.table else c
            work[e] = base.normalize(c) if normalize_first else c
        r = self.rank
        for e in sorted((e for e in work if e >= r), reverse=True):
            a = work.pop(e)
            if not a:
                continue
            for i, coeff in self.relation:
                term = base.mul(a, coeff)
                tgt = e - i
                work[tgt] = work[tgt] + term if tgt in work else term
        out = self.poly(0)
        for e, c in work.items():
            if c:
                out = out + retable(c, self.table, self.bound).shift_by(self.zeta_name, e)
        return out

    def basis_monomials(self, k: int) -> list[tuple[int, ...]]:
        cache = self.__dict__.setdefault("_basis_cache", {})
        if k not in cache:
            cache[k] = [
                b + (e,)
                for e in range(min(self.rank - 1, k), -1, -1)
                for b in self.base.basis_monomials(k - e)
            ]
        return cache[k]

    def label(self, exps: tuple[int, ...]) -> str:
        head = self.base.label(exps[:-1])
        e = exps[-1]
        if e == 0:
            return head
        z = self.zeta_name if e == 1 else f"{self.zeta_name}^{e}"
        return z if head == "1" else f"{head}*{z}"

    def projection(self) -> "StructuralMap":
        return StructuralMap("proj_bundle", self, self.base)

    @property
    def ring_dim(self) -> int:
        return self.base.ring_dim + self.rank - 1


class TotalSpace(Space):
    """Total space of a vector bundle: same Chow ring as the base, non-proper projection."""

    kind = "total_space"
    proper = False

    def __init__(self, base: Space, bundle: SheafClass, name: str | None = None):
        if bundle.table != base.table:
            raise UsageError("bundle does not live on the base space")
        self.rank = bundle.rank
        self.bundle_on_base = bundle
        super().__init__(base.table, base.bound, base.dim + bundle.rank, base,
                         name or f"Tot({base.name})")
        self.polynomial = base.polynomial
        self.formal = base.formal

    def normalize(self, p: GradedPolynomial) -> GradedPolynomial:
        return self.base.normalize(p)

    def mul(self, p: GradedPolynomial, q: GradedPolynomial) -> GradedPolynomial:
        return self.base.mul(p, q)

    def basis_monomials(self, k: int) -> list[tuple[int, ...]]:
        return self.base.basis_monomials(k)

    def label(self, exps: tuple[int, ...]) -> str:
        return self.base.label(exps)

    def projection(self) -> "StructuralMap":
        return StructuralMap("total_space", self, self.base)

    @property
    def ring_dim(self) -> int:
        return self.base.ring_dim


# ---------------------------------------------------------------------------
# polynomial towers


class _Level:
    __slots__ = ("shift", "unit", "rank", "relation")

    def __init__(self, shift: int, unit: int, rank: int, relation: list[tuple[int, dict[int, int]]]):
        self.shift = shift
        self.unit = unit
        self.rank = rank
        self.relation = relation


def _levels(space: Space) -> tuple[list[_Level], int | None]:
    cached = space.__dict__.get("_levels_cache")
    if cached is not None:
        return cached
    levels: list[_Level] = []
    node = space
    root_bound = None
    while node is not None:
        if isinstance(node, ProjBundle):
            rel = [
                (i, retable(c, space.table, space.bound)._terms)
                for i, c in node.relation
                if c
            ]
            levels.append(
                _Level(space.table.shift(node.zeta_name), space.table.unit(node.zeta_name), node.rank, rel)
            )
        elif isinstance(node, FormalBase):
            root_bound = node.bound
        elif isinstance(node, Blowup):
            raise UsageError("internal: polynomial reduction reached a blowup")
        node = node.base
    space.__dict__["_levels_cache"] = (levels, root_bound)
    return levels, root_bound


def _reduce_level(terms: dict[int, int], level: _Level) -> dict[int, int]:
    shift, unit, r = level.shift, level.unit, level.rank
    buckets: dict[int, dict[int, int]] = {}
    low: dict[int, int] = {}
    for k, c in terms.items():
        e = (k >> shift) & FIELD_MASK
        if e < r:
            low[k] = low.get(k, 0) + c
        else:
            b = buckets.setdefault(e, {})
            b[k] = b.get(k, 0) + c
    if not buckets:
        return terms
    for e in range(max(buckets), r - 1, -1):
        bucket = buckets.pop(e, None)
        if not bucket:
            continue
        for i, rel in level.relation:
            tgt_e = e - i
            tgt = low if tgt_e < r else buckets.setdefault(tgt_e, {})
            drop = i * unit
            for k, c in bucket.items():
                if not c:
                    continue
                base_k = k - drop
                for rk, rc in rel.items():
                    nk = base_k + rk
                    tgt[nk] = tgt.get(nk, 0) + c * rc
    return {k: c for k, c in low.items() if c}


def _tower_reduce(space: Space, p: GradedPolynomial) -> GradedPolynomial:
    levels, root_bound = _levels(space)
    terms = p._terms
    for level in levels:
        terms = _reduce_level(terms, level)
    if root_bound is not None and root_bound < space.bound:
        kw = space.table.key_weight
        shifts = [lv.shift for lv in levels]
        terms = {
            k: c
            for k, c in terms.items()
            if kw(k) - sum((k >> s) & FIELD_MASK for s in shifts) <= root_bound
        }
    if terms is p._terms:
        return p
    return GradedPolynomial._raw(space.table, space.bound, terms)


# ---------------------------------------------------------------------------
# embeddings and blowups


@dataclass(frozen=True, eq=False)
class EmbeddingDatum:
    """A regular embedding of `center` into `ambient` of codimension `codim`.

    pullback_images: ambient variable name -> class on the center.
    pushforward_images: center basis monomial -> class on the ambient space.
    normal: total Chern class of the normal bundle, on the center.
    """

    ambient: Space
    center: Space
    codim: int
    pullback_images: Mapping[str, GradedPolynomial]
    pushforward_images: Mapping[tuple[int, ...], GradedPolynomial]
    normal: SheafClass

    def pull(self, alpha: GradedPolynomial) -> GradedPolynomial:
        z = self.center
        images = {n: retable(img, z.table, z.bound) for n, img in self.pullback_images.items()}
        return z.normalize(apply_map(alpha, images, table=z.table, bound=z.bound))

    def push(self, beta: GradedPolynomial) -> GradedPolynomial:
        x = self.ambient
        beta = self.center.normalize(beta)
        out = x.poly(0)
        for exps, coeff in beta.items():
            img = self.pushforward_images.get(exps)
            if img is None:
                raise InvariantViolation(f"no pushforward recorded for center monomial {exps}")
            out = out + img.scale(coeff)
        return x.normalize(out)

    @property
    def fundamental_class(self) -> GradedPolynomial:
        return self.push(self.center.poly(1))


def validate_embedding(emb: EmbeddingDatum) -> None:
    """Check grading, the projection formula, i_* i^* = [Z] and i^* i_* = c_top(N)."""
    x, z, r = emb.ambient, emb.center, emb.codim
    if emb.normal.rank != r:
        raise InvariantViolation(f"normal bundle rank {emb.normal.rank} != codim {r}")
    top = z.normalize(retable(emb.normal.c(r), z.table, z.bound))
    fund = emb.fundamental_class
    for k in range(z.ring_dim + 1):
        for b in z.basis_monomials(k):
            img = emb.pushforward_images.get(b)
            if img is None or not img.is_homogeneous(k + r):
                raise InvariantViolation(f"pushforward of {z.label(b)} is not of codim {k + r}",
                                         {"monomial": z.label(b)})
    z_basis = [m for k in range(z.ring_dim + 1) for m in z.basis_monomials(k)]
    x_basis = [m for k in range(x.ring_dim + 1) for m in x.basis_monomials(k)]
    for a in x_basis:
        alpha = GradedPolynomial.monomial(x.table, a, x.bound)
        pulled = emb.pull(alpha)
        if emb.push(pulled) != x.mul(fund, alpha):
            raise InvariantViolation("i_* i^* differs from multiplication by [Z]",
                                     {"class": x.label(a)})
        for b in z_basis:
            beta = GradedPolynomial.monomial(z.table, b, z.bound)
            if emb.push(z.mul(pulled, beta)) != x.mul(alpha, emb.push(beta)):
                raise InvariantViolation("projection formula fails",
                                         {"ambient": x.label(a), "center": z.label(b)})
    for b in z_basis:
        beta = GradedPolynomial.monomial(z.table, b, z.bound)
        if emb.pull(emb.push(beta)) != z.mul(top, beta):
            raise InvariantViolation("i^* i_* differs from multiplication by c_top(N)",
                                     {"class": z.label(b)})


class Blowup(Space):
    """Blowup of `ambient` along the center of an embedding datum.

    A class is pi^*(alpha) + j_*(eps) with eps on the exceptional divisor
    E = P(N^dual).  The j_* part is written with a weight-one marker
    variable times the variables of E, and eps only uses zeta_E powers
    up to codim - 2 once normalized.
    """

    kind = "blowup"

    def __init__(self, emb: EmbeddingDatum, marker: str = "E", name: str | None = None):
        x, z = emb.ambient, emb.center
        if not (x.proper and z.proper):
            raise UsageError("blowups need ambient and center built over a point")
        if not x.polynomial:
            raise UsageError("the ambient space of a blowup must be a polynomial tower")
        if emb.codim < 1:
            raise UsageError("center codimension must be at least 1")
        self.embedding = emb
        self.codim = emb.codim
        self.center = z
        self.exceptional = ProjBundle(z, dual(emb.normal).map_chern(z.normalize), var="zE",
                                      name=f"E({name or 'Bl'})")
        marker = x.table.fresh_name(marker)
        self.marker = marker
        e_entries = [(f"{marker}.{n}", w) for n, w in zip(self.exceptional.table.names,
                                                           self.exceptional.table.weights)]
        table = x.table.extend([(marker, 1)] + e_entries)
        super().__init__(table, x.bound, x.dim, x, name or f"Bl({x.name})")
        self.polynomial = False
        self._nx = len(x.table)
        self._normal = emb.normal.map_chern(z.normalize)

    @property
    def ambient(self) -> Space:
        return self.base

    # encoding

    def split(self, p: GradedPolynomial) -> tuple[GradedPolynomial, GradedPolynomial]:
        self._check_poly(p)
        x, e, nx = self.base, self.exceptional, self._nx
        alpha: dict[tuple[int, ...], int] = {}
        eps: dict[tuple[int, ...], int] = {}
        for exps, coeff in p.items():
            jexp = exps[nx]
            if jexp == 0 and not any(exps[nx + 1:]):
                alpha[exps[:nx]] = coeff
            elif jexp == 1 and not any(exps[:nx]):
                eps[exps[nx + 1:]] = coeff
            else:
                raise UsageError("blowup polynomial mixes ambient and exceptional variables")
        return (GradedPolynomial(x.table, alpha, x.bound), GradedPolynomial(e.table, eps, e.bound))

    def join(self, alpha: GradedPolynomial, eps: GradedPolynomial) -> GradedPolynomial:
        nx, ne = self._nx, len(self.exceptional.table)
        terms: dict[tuple[int, ...], int] = {}
        for exps, coeff in alpha.items():
            terms[exps + (0,) * (ne + 1)] = coeff
        for exps, coeff in eps.items():
            terms[(0,) * nx + (1,) + exps] = coeff
        return GradedPolynomial(self.table, terms, self.bound)

    def _lift_center(self, zpoly: GradedPolynomial) -> GradedPolynomial:
        e = self.exceptional
        return retable(zpoly, e.table, e.bound)

    def _assemble(self, alpha: GradedPolynomial, eps: GradedPolynomial) -> GradedPolynomial:
        """Rewrite j_*(zeta_E^(r-1) p^* z) through pi^* i_* z; alpha and eps normalized."""
        r, e, z = self.codim, self.exceptional, self.center
        parts = eps.split_by(e.zeta_name)
        top = parts.pop(r - 1, None)
        if top is not None and top:
            zclass = z.normalize(retable(top, z.table, z.bound))
            alpha = alpha + self.embedding.push(zclass)
            rest = e.poly(0)
            for ex, c in parts.items():
                rest = rest + c.shift_by(e.zeta_name, ex)
            for i in range(r - 1):
                corr = z.mul(retable(self._normal.c(r - 1 - i), z.table, z.bound), zclass)
                rest = rest - self._lift_center(corr).shift_by(e.zeta_name, i)
            eps = rest
        return self.join(alpha, eps)

    # ring

    def normalize(self, p: GradedPolynomial) -> GradedPolynomial:
        alpha, eps = self.split(p)
        return self._assemble(self.base.normalize(alpha), self.exceptional.normalize(eps))

    def mul(self, p: GradedPolynomial, q: GradedPolynomial) -> GradedPolynomial:
        x, e = self.base, self.exceptional
        a1, e1 = self.split(p)
        a2, e2 = self.split(q)
        alpha = x.mul(a1, a2)
        eps = e.poly(0)
        if e2:
            eps = eps + e.mul(self._lift_center(self.embedding.pull(a1)), e2)
        if e1:
            eps = eps + e.mul(e1, self._lift_center(self.embedding.pull(a2)))
            if e2:
                minus_zeta = -GradedPolynomial.var(e.table, e.zeta_name, e.bound)
                eps = eps + e.mul(e.mul(e1, e2), minus_zeta)
        return self._assemble(alpha, e.normalize(eps))

    def basis_monomials(self, k: int) -> list[tuple[int, ...]]:
        x, e, z = self.base, self.exceptional, self.center
        ne = len(e.table)
        out = [b + (0,) * (ne + 1) for b in x.basis_monomials(k)]
        for i in range(self.codim - 1):
            for zb in z.basis_monomials(k - 1 - i):
                out.append((0,) * self._nx + (1,) + zb + (i,))
        return out

    def label(self, exps: tuple[int, ...]) -> str:
        nx = self._nx
        if exps[nx] == 0:
            return self.base.label(exps[:nx])
        return f"j_*({self.exceptional.label(exps[nx + 1:])})"

    def projection(self) -> "StructuralMap":
        return StructuralMap("blowup", self, self.base)

    def exceptional_inclusion(self) -> "StructuralMap":
        return StructuralMap("exceptional_inclusion", self.exceptional, self)

    def exceptional_projection(self) -> "StructuralMap":
        return StructuralMap("proj_bundle", self.exceptional, self.center)

    def center_inclusion(self) -> "StructuralMap":
        return StructuralMap("center_inclusion", self.center, self.base, self.embedding)

    def exceptional_divisor(self) -> "ChowClass":
        """j_* 1."""
        e = self.exceptional
        return ChowClass(self, self._assemble(self.base.poly(0), e.poly(1)), True)


# ---------------------------------------------------------------------------
# classes and maps


class ChowClass:
    """A class in normal form on a specific space (compared by space identity)."""

    __slots__ = ("space", "poly")

    def __init__(self, space: Space, poly: GradedPolynomial, normalized: bool = False):
        self.space = space
        self.poly = poly if normalized else space.normalize(poly)

    def _other(self, other) -> "ChowClass":
        if isinstance(other, int):
            return self.space.cls(other)
        if not isinstance(other, ChowClass):
            raise UsageError(f"cannot combine a class with {type(other).__name__}")
        if other.space is not self.space:
            raise UsageError(f"classes live on different spaces: {self.space.name} vs {other.space.name}")
        return other

    def __add__(self, other) -> "ChowClass":
        return ChowClass(self.space, self.poly + self._other(other).poly, True)

    __radd__ = __add__

    def __sub__(self, other) -> "ChowClass":
        return ChowClass(self.space, self.poly - self._other(other).poly, True)

    def __rsub__(self, other) -> "ChowClass":
        return ChowClass(self.space, self._other(other).poly - self.poly, True)

    def __neg__(self) -> "ChowClass":
        return ChowClass(self.space, -self.poly, True)

    def __mul__(self, other) -> "ChowClass":
        if isinstance(other, int):
            return ChowClass(self.space, self.poly.scale(other), True)
        other = self._other(other)
        return ChowClass(self.space, self.space.mul(self.poly, other.poly), True)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ChowClass":
        out = self.space.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.poly == other
        if not isinstance(other, ChowClass):
            return NotImplemented
        return self.space is other.space and self.poly == other.poly

    def __hash__(self) -> int:
        return hash((id(self.space), self.poly))

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def codim_part(self, k: int) -> "ChowClass":
        return ChowClass(self.space, self.poly.homogeneous(k), True)

    def coefficients(self) -> list[tuple[str, int]]:
        """(basis label, coefficient) pairs in basis order."""
        out = []
        for k in sorted(self.poly.weights()):
            for m in self.space.basis_monomials(k):
                c = self.poly.coefficient(m)
                if c:
                    out.append((self.space.label(m), c))
        return out

    def __str__(self) -> str:
        parts = []
        for label, c in self.coefficients():
            mag = abs(c)
            body = label if mag == 1 and label != "1" else (str(mag) if label == "1" else f"{mag}*{label}")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        if not parts:
            return "0"
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return " ".join([head] + [f"{s} {b}" for s, b in parts[1:]])

    def __repr__(self) -> str:
        return f"ChowClass({self.space.name}: {self})"


PROPER_KINDS = {"proj_bundle", "blowup", "exceptional_inclusion", "center_inclusion", "leg"}


@dataclass(frozen=True, eq=False)
class StructuralMap:
    kind: str
    source: Space
    target: Space
    data: object = None

    @property
    def proper(self) -> bool:
        return self.kind in PROPER_KINDS

    def __repr__(self) -> str:
        return f"StructuralMap({self.kind}: {self.source.name} -> {self.target.name})"


def _expect(c: ChowClass, space: Space, what: str) -> None:
    if c.space is not space:
        raise UsageError(f"{what} expects a class on {space.name}, got one on {c.space.name}")


def pullback(f: StructuralMap, c: ChowClass) -> ChowClass:
    _expect(c, f.target, "pullback")
    src = f.source
    if f.kind in ("proj_bundle", "blowup", "leg"):
        # normal forms of the target stay normal after lifting
        return ChowClass(src, retable(c.poly, src.table, src.bound), True)
    if f.kind == "total_space":
        return ChowClass(src, c.poly, True)
    if f.kind == "exceptional_inclusion":
        bl: Blowup = f.target
        alpha, eps = bl.split(c.poly)
        e = bl.exceptional
        out = e.normalize(bl._lift_center(bl.embedding.pull(alpha)))
        if eps:
            minus_zeta = -GradedPolynomial.var(e.table, e.zeta_name, e.bound)
            out = out + e.mul(eps, minus_zeta)
        return ChowClass(e, out, True)
    if f.kind == "center_inclusion":
        return ChowClass(src, f.data.pull(c.poly), True)
    raise UsageError(f"unknown map kind {f.kind!r}")


def pushforward(f: StructuralMap, c: ChowClass) -> ChowClass:
    _expect(c, f.source, "pushforward")
    if not f.proper:
        raise NotProperError(f"{f.kind} projection {f.source.name} -> {f.target.name} is not proper")
    tgt = f.target
    if f.kind == "proj_bundle":
        p: ProjBundle = f.source
        coeff = c.poly.split_by(p.zeta_name).get(p.rank - 1)
        if coeff is None:
            return tgt.zero()
        return ChowClass(tgt, retable(coeff, tgt.table, tgt.bound), True)
    if f.kind == "blowup":
        alpha, _ = f.source.split(c.poly)
        return ChowClass(tgt, alpha, True)
    if f.kind == "exceptional_inclusion":
        bl: Blowup = tgt
        return ChowClass(bl, bl._assemble(bl.base.poly(0), c.poly), True)
    if f.kind == "center_inclusion":
        return ChowClass(tgt, f.data.push(c.poly), True)
    if f.kind == "leg":
        return ChowClass(tgt, _leg_push(c.poly, f.data, tgt), True)
    raise UsageError(f"unknown map kind {f.kind!r}")


def _leg_push(p: GradedPolynomial, dropped: Sequence[tuple[str, int]], target: Space) -> GradedPolynomial:
    table = p.table
    keep: dict[tuple[int, ...], int] = {}
    idx = [(table.index(n), r - 1) for n, r in dropped]
    for exps, coeff in p.items():
        if all(exps[i] == e for i, e in idx):
            stripped = list(exps)
            for i, _ in idx:
                stripped[i] = 0
            keep[tuple(stripped)] = coeff
    return retable(GradedPolynomial(table, keep, p.bound), target.table, target.bound)


def leg_map(source: Space, target: Space, dropped: Sequence[tuple[str, int]]) -> StructuralMap:
    """Projection forgetting the listed (zeta name, rank) levels of a fibre product."""
    return StructuralMap("leg", source, target, tuple(dropped))


def integrate(c: ChowClass) -> int:
    space = c.space
    while not isinstance(space, Point):
        f = space.projection()
        if f is None or not f.proper:
            raise NotProperError(f"cannot integrate over {space.name}: not proper over a point")
        c = pushforward(f, c)
        space = c.space
    return c.poly.constant_term()


def zeta_pushes(c: ChowClass, count: int) -> list[ChowClass]:
    """pi_*(zeta^t c) for t = 0..count-1."""
    p = c.space
    if not isinstance(p, ProjBundle):
        raise UsageError("needs a class on a projective bundle")
    f = p.projection()
    out = []
    for t in range(count):
        shifted = c.poly.shift_by(p.zeta_name, t)
        out.append(pushforward(f, ChowClass(p, p.normalize(shifted), True)))
    return out


def components_from_pushes(pushes: Sequence[ChowClass], chern: Sequence[ChowClass], r: int) -> list[ChowClass]:
    """sum_j (-1)^j c_j pushes[r-1-i-j] for i = 0..r-1, with c_j from `chern`."""
    out = []
    for i in range(r):
        acc = None
        for j in range(r - i):
            if j >= len(chern) or chern[j].is_zero():
                continue
            term = chern[j] * pushes[r - 1 - i - j]
            term = term if j % 2 == 0 else -term
            acc = term if acc is None else acc + term
        out.append(acc if acc is not None else pushes[0].space.zero())
    return out


def proj_components(c: ChowClass) -> list[ChowClass]:
    """All pi_{i*} c at once, sharing the pushforwards."""
    p = c.space
    if not isinstance(p, ProjBundle):
        raise UsageError("proj_components needs a class on a projective bundle")
    r = p.rank
    chern = [p.base.cls(p.bundle_on_base.c(j)) for j in range(r)]
    return components_from_pushes(zeta_pushes(c, r), chern, r)


def proj_project(c: ChowClass, i: int) -> ChowClass:
    """Component of c along zeta^i: sum_j (-1)^j c_j(E) pi_*(zeta^(r-1-i-j) c)."""
    p = c.space
    if not isinstance(p, ProjBundle):
        raise UsageError("proj_project needs a class on a projective bundle")
    if not 0 <= i < p.rank:
        raise UsageError(f"index {i} outside 0..{p.rank - 1}")
    return proj_components(c)[i]


def proj_pull(c: ChowClass, p: ProjBundle, i: int) -> ChowClass:
    """zeta^i . pi^* c."""
    return p.zeta() ** i * pullback(p.projection(), c)


def pushforward_by_segre(p: ProjBundle, poly: GradedPolynomial) -> ChowClass:
    """pi_* of an arbitrary, unreduced polynomial via pi_*(zeta^(r-1+k)) = s_k(E^dual)."""
    if not p.base.polynomial:
        raise UsageError("Segre pushforward needs a polynomial base")
    base = p.base
    s = segre(dual(p.bundle_on_base))
    out = base.poly(0)
    for a, coeff in poly.split_by(p.zeta_name).items():
        k = a - (p.rank - 1)
        if k < 0:
            continue
        out = out + base.mul(s.homogeneous(k), retable(coeff, base.table, base.bound))
    return base.cls(out)


def basis(space: Space, k: int) -> list[ChowClass]:
    return space.basis(k)


def intersection_matrix(space: Space, k: int) -> list[list[int]]:
    """Pairing CH^k x CH^(dim-k) -> Z on basis classes."""
    left = space.basis(k)
    right = space.basis(space.dim - k)
    return [[integrate(a * b) for b in right] for a in left]


# ---------------------------------------------------------------------------
# constructors


def point() -> Point:
    return Point()


def formal_base(dim_bound: int, bundles: Sequence[tuple[str, int]], name: str = "S") -> FormalBase:
    return FormalBase(dim_bound, bundles, name)


def projective_space(n: int, var: str = "h", name: str | None = None) -> Space:
    if n < 0:
        raise UsageError("projective space of negative dimension")
    pt = Point()
    if n == 0:
        return pt
    return ProjBundle(pt, trivial(n + 1, pt.table, pt.bound), var=var, name=name or f"P{n}")


def proj_bundle(base: Space, e: SheafClass, var: str = "z", name: str | None = None) -> ProjBundle:
    return ProjBundle(base, e, var, name)


def total_space(base: Space, e: SheafClass, name: str | None = None) -> TotalSpace:
    return TotalSpace(base, e, name)


def blowup(base: Space, emb: EmbeddingDatum, marker: str = "E", name: str | None = None) -> Blowup:
    if emb.ambient is not base:
        raise UsageError("embedding datum does not land in the given space")
    return Blowup(emb, marker, name)


def multiply(a: ChowClass, b: ChowClass) -> ChowClass:
    return a * b


def normalize(space: Space, p: GradedPolynomial) -> ChowClass:
    return space.cls(p)
