"""Correspondences between projective bundles over a common base.

A kernel lives on a fibre product of projective bundles over the base S.
Composition is pull-multiply-push over a triple fibre product; every leg is
a projection forgetting some projective-bundle levels.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import UsageError
from .polyring import GradedPolynomial, retable
from .sheaves import SheafClass, dual, line, quotient, twisted_chern
from .spaces import (
    ChowClass,
    FormalBase,
    ProjBundle,
    Space,
    StructuralMap,
    leg_map,
    pullback,
    pushforward,
)


class RelativeProduct:
    """P(E_1) x_S ... x_S P(E_k), each factor named by its zeta variable."""

    def __init__(self, base: Space, factors: Sequence[tuple[str, SheafClass]]):
        names = [n for n, _ in factors]
        if len(set(names)) != len(names):
            raise UsageError(f"factor names must be distinct: {names}")
        self.base = base
        self.factors: tuple[tuple[str, SheafClass], ...] = tuple(
            (n, b.map_chern(base.normalize)) for n, b in factors
        )
        space = base
        for n, b in self.factors:
            if n in space.table:
                raise UsageError(f"factor name {n!r} clashes with a variable of the base")
            space = ProjBundle(space, b.retable(space.table, space.bound), var=n,
                               name=f"{space.name}x{n}" if space is not base else f"P_{n}")
        self.space = space

    @classmethod
    def of(cls, base: Space, factors: Sequence[tuple[str, SheafClass]]) -> "RelativeProduct":
        """Cached constructor: equal factor lists over the same base give the same product."""
        cache = base.__dict__.setdefault("_product_cache", {})
        key = tuple((n, b.rank, b.map_chern(base.normalize).chern) for n, b in factors)
        if key not in cache:
            cache[key] = cls(base, factors)
        return cache[key]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.factors)

    def bundle_on_base(self, name: str) -> SheafClass:
        for n, b in self.factors:
            if n == name:
                return b
        raise UsageError(f"no factor named {name!r}")

    def rank(self, name: str) -> int:
        return self.bundle_on_base(name).rank

    def bundle(self, name: str) -> SheafClass:
        """The bundle of factor `name` pulled back to the whole product."""
        return self.bundle_on_base(name).retable(self.space.table, self.space.bound)

    def zeta(self, name: str) -> GradedPolynomial:
        self.bundle_on_base(name)
        return GradedPolynomial.var(self.space.table, name, self.space.bound)

    def sub(self, names: Sequence[str]) -> "RelativeProduct":
        keep = [(n, b) for n, b in self.factors if n in set(names)]
        if len(keep) != len(set(names)):
            raise UsageError(f"unknown factor among {list(names)}")
        return RelativeProduct.of(self.base, keep)

    def leg(self, names: Sequence[str]) -> StructuralMap:
        """Projection onto the factors in `names` (in this product's order)."""
        target = self.sub(names)
        dropped = [(n, b.rank) for n, b in self.factors if n not in set(names)]
        return leg_map(self.space, target.space, dropped)

    def base_map(self) -> StructuralMap:
        return leg_map(self.space, self.base, [(n, b.rank) for n, b in self.factors])

    def cls(self, p: GradedPolynomial) -> ChowClass:
        return self.space.cls(p)


def relative_product(base: Space, bundles: Sequence[tuple[str, SheafClass]]) -> RelativeProduct:
    return RelativeProduct.of(base, bundles)


def same_bundle(a: SheafClass, b: SheafClass) -> bool:
    return a.rank == b.rank and a.chern == b.chern


@dataclass(frozen=True, eq=False)
class Correspondence:
    """Kernel on P(source) x_S P(target), acting by push(kernel . pull)."""

    product: RelativeProduct
    source: str
    target: str
    kernel: ChowClass

    def __post_init__(self):
        if set(self.product.names) != {self.source, self.target} or self.source == self.target:
            raise UsageError("a correspondence needs a two-factor product with distinct legs")
        if self.kernel.space is not self.product.space:
            raise UsageError("kernel does not live on the product")

    @property
    def base(self) -> Space:
        return self.product.base

    def source_space(self) -> Space:
        return self.product.sub([self.source]).space

    def target_space(self) -> Space:
        return self.product.sub([self.target]).space

    def act(self, c: ChowClass) -> ChowClass:
        pulled = pullback(self.product.leg([self.source]), c)
        return pushforward(self.product.leg([self.target]), self.kernel * pulled)

    def transpose(self) -> "Correspondence":
        return Correspondence(self.product, self.target, self.source, self.kernel)

    def renamed(self, source: str, target: str) -> "Correspondence":
        """Same kernel with the legs called `source` and `target`."""
        mapping = {self.source: source, self.target: target}
        prod = RelativeProduct.of(
            self.base,
            [(mapping[n], b) for n, b in self.product.factors],
        )
        poly = retable(self.kernel.poly, prod.space.table, prod.space.bound, rename=mapping)
        return Correspondence(prod, source, target, ChowClass(prod.space, poly, True))

    def kernel_on(self, product: RelativeProduct) -> ChowClass:
        """Re-express the kernel on another product with the same named factors."""
        if set(product.names) != set(self.product.names) or product.base is not self.base:
            raise UsageError("products do not have the same factors")
        for n in product.names:
            if not same_bundle(product.bundle_on_base(n), self.product.bundle_on_base(n)):
                raise UsageError(f"factor {n!r} carries a different bundle")
        return ChowClass(product.space, retable(self.kernel.poly, product.space.table, product.space.bound), True)


def kernels_equal(g: Correspondence, h: Correspondence) -> bool:
    if (g.source, g.target) != (h.source, h.target):
        return False
    return g.kernel == h.kernel_on(g.product)


def convolve(g1: Correspondence, g2: Correspondence) -> Correspondence:
    """Kernel of g2 after g1: p13_*(p12^* g1 . p23^* g2)."""
    if g1.base is not g2.base:
        raise UsageError("correspondences live over different bases")
    b1 = g1.product.bundle_on_base(g1.target)
    b2 = g2.product.bundle_on_base(g2.source)
    if not same_bundle(b1, b2):
        raise UsageError(
            f"leg mismatch: {g1.target!r} (rank {b1.rank}) cannot feed {g2.source!r} (rank {b2.rank})"
        )
    a, c = g1.source, g2.target
    if a == c:
        raise UsageError(f"outer legs share the name {a!r}; rename one first")
    mid = g1.target
    if mid in (a, c):
        raise UsageError("middle leg name collides with an outer leg")
    triple = RelativeProduct.of(
        g1.base,
        [(a, g1.product.bundle_on_base(a)), (mid, b1), (c, g2.product.bundle_on_base(c))],
    )
    t = triple.space
    k1 = retable(g1.kernel.poly, t.table, t.bound)
    k2 = retable(g2.kernel.poly, t.table, t.bound, rename={g2.source: mid})
    prod = ChowClass(t, t.mul(k1, k2), True)
    pushed = pushforward(triple.leg([a, c]), prod)
    return Correspondence(triple.sub([a, c]), a, c, pushed)


def tangent_twisted_down(prod: RelativeProduct, name: str) -> SheafClass:
    """T(-1) of factor `name`: the cokernel of O(-1) -> E^dual."""
    e = prod.bundle(name)
    return quotient(dual(e), line(-prod.zeta(name)))


def cotangent_twisted_up(prod: RelativeProduct, name: str) -> SheafClass:
    """Omega(1) of factor `name`: the kernel of E -> O(1)."""
    e = prod.bundle(name)
    return quotient(e, line(prod.zeta(name)))


def diagonal_class(base: Space, bundle: SheafClass, names: tuple[str, str] = ("w1", "w2")) -> Correspondence:
    """Class of the diagonal of P(bundle) as c_top(O(1) on the first leg, T(-1) on the second)."""
    first, second = names
    prod = RelativeProduct.of(base, [(first, bundle), (second, bundle)])
    m = bundle.rank - 1
    t2 = tangent_twisted_down(prod, second).up_to(m)
    kernel = prod.cls(twisted_chern(t2, prod.zeta(first), m))
    return Correspondence(prod, first, second, kernel)


# ---------------------------------------------------------------------------
# standard flips


@dataclass
class FlipSetting:
    """P = P_sub(F) of rank n + 1 and P' = P_sub(F') of rank m + 1 over a formal base."""

    n: int
    m: int
    dim_bound: int
    base: FormalBase = field(init=False)

    def __post_init__(self):
        if not 0 <= self.m <= self.n:
            raise UsageError(f"flip needs 0 <= m <= n, got n={self.n}, m={self.m}")
        self.base = FormalBase(self.dim_bound, [("F", self.n + 1), ("Fp", self.m + 1)])
        self.bundle_p = dual(self.base.bundle("F"))
        self.bundle_pp = dual(self.base.bundle("Fp"))

    def product(self, p_name: str = "z", pp_name: str = "zp", p_first: bool = True) -> RelativeProduct:
        factors = [(p_name, self.bundle_p), (pp_name, self.bundle_pp)]
        return RelativeProduct.of(self.base, factors if p_first else factors[::-1])

    @property
    def p_space(self) -> ProjBundle:
        return RelativeProduct.of(self.base, [("z", self.bundle_p)]).space

    @property
    def pp_space(self) -> ProjBundle:
        return RelativeProduct.of(self.base, [("zp", self.bundle_pp)]).space

    def lower_kernel(self, p_name: str = "z", pp_name: str = "zp") -> Correspondence:
        """c_m of O_P(-1) boxtimes T_P'(-1); acts CH(P) -> CH(P')."""
        prod = self.product(p_name, pp_name)
        t = tangent_twisted_down(prod, pp_name).up_to(self.m)
        kernel = prod.cls(twisted_chern(t, -prod.zeta(p_name), self.m))
        return Correspondence(prod, p_name, pp_name, kernel)

    def upper_kernel(self, pp_name: str = "zp", p_name: str = "z") -> Correspondence:
        """c_n of T_P(-1) boxtimes O_P'(-1); acts CH(P') -> CH(P)."""
        prod = self.product(pp_name=pp_name, p_name=p_name, p_first=False)
        t = tangent_twisted_down(prod, p_name).up_to(self.n)
        kernel = prod.cls(twisted_chern(t, -prod.zeta(pp_name), self.n))
        return Correspondence(prod, pp_name, p_name, kernel)

    def phi_lower(self, c: ChowClass) -> ChowClass:
        return self.lower_kernel().act(c)

    def phi_upper(self, c: ChowClass) -> ChowClass:
        return self.upper_kernel().act(c)

    def normal_top_chern(self) -> ChowClass:
        """c_{m+1}(F' tensor O_P(-1)) on P."""
        p = self.p_space
        fp = self.base.bundle("Fp").retable(p.table, p.bound)
        zeta = GradedPolynomial.var(p.table, p.zeta_name, p.bound)
        return p.cls(twisted_chern(fp, -zeta, self.m + 1))


def flip_phi(setting: FlipSetting, direction: str, classes: Sequence[ChowClass]) -> list[ChowClass]:
    """Apply the flip correspondence: 'lower' sends CH(P) to CH(P'), 'upper' goes back."""
    if direction == "lower":
        g = setting.lower_kernel()
    elif direction == "upper":
        g = setting.upper_kernel()
    else:
        raise UsageError(f"direction must be 'lower' or 'upper', not {direction!r}")
    return [g.act(c) for c in classes]


def phi_lower_matrix(setting: FlipSetting) -> list[list[ChowClass]]:
    """Entry [i][k]: coefficient of zeta'^i in Phi_*(zeta^k), a class on the base."""
    p, pp, s = setting.p_space, setting.pp_space, setting.base
    g = setting.lower_kernel()
    zeta = p.zeta()
    cols = []
    for k in range(setting.n + 1):
        image = g.act(zeta ** k)
        parts = image.poly.split_by(pp.zeta_name)
        col = []
        for i in range(setting.m + 1):
            part = parts.get(i)
            col.append(s.zero() if part is None else s.cls(retable(part, s.table, s.bound)))
        cols.append(col)
    return [[cols[k][i] for k in range(setting.n + 1)] for i in range(setting.m + 1)]


# ---------------------------------------------------------------------------
# virtual flips


@dataclass
class VirtualFlipSetting:
    """P(G) with G of rank r + i + 1 and P(K) with K of rank i + 1 over a formal base."""

    r: int
    i: int
    dim_bound: int
    base: FormalBase = field(init=False)

    def __post_init__(self):
        if self.r < 1 or self.i < 0:
            raise UsageError("virtual flips need r >= 1 and i >= 0")
        self.base = FormalBase(self.dim_bound, [("G", self.r + self.i + 1), ("K", self.i + 1)])
        self.bundle_g = self.base.bundle("G")
        self.bundle_k = self.base.bundle("K")

    def pull_kernel(self, k_name: str = "zk", g_name: str = "zg") -> Correspondence:
        """c_i of O_P(G)(1) boxtimes Omega_P(K)(1); acts CH(P(K)) -> CH(P(G))."""
        prod = RelativeProduct.of(self.base, [(k_name, self.bundle_k), (g_name, self.bundle_g)])
        omega = cotangent_twisted_up(prod, k_name).up_to(self.i)
        kernel = prod.cls(twisted_chern(omega, prod.zeta(g_name), self.i))
        return Correspondence(prod, k_name, g_name, kernel)

    def push_kernel(self, g_name: str = "zg", k_name: str = "zk") -> Correspondence:
        """c_(r+i) of Omega_P(G)(1) boxtimes O_P(K)(1); acts CH(P(G)) -> CH(P(K))."""
        prod = RelativeProduct.of(self.base, [(g_name, self.bundle_g), (k_name, self.bundle_k)])
        top = self.r + self.i
        omega = cotangent_twisted_up(prod, g_name).up_to(top)
        kernel = prod.cls(twisted_chern(omega, prod.zeta(k_name), top))
        return Correspondence(prod, g_name, k_name, kernel)


# ---------------------------------------------------------------------------
# decomposition models


@dataclass(frozen=True)
class DecompositionModel:
    """Summands (label, space, twist) plus forward and projection maps as named recipes."""

    kind: str
    summands: tuple[tuple[str, Space, int], ...]
    forward: dict = field(default_factory=dict)
    projections: dict = field(default_factory=dict)

    def rank_function(self) -> list[int]:
        total: list[int] = []
        for _, space, twist in self.summands:
            for k, r in enumerate(space.basis_ranks()):
                idx = k + twist
                while len(total) <= idx:
                    total.append(0)
                total[idx] += r
        while total and total[-1] == 0:
            total.pop()
        return total

    def summary(self) -> list[tuple[str, int]]:
        return [(label, twist) for label, _, twist in self.summands]


def build_decomposition_model(kind: str, params: dict) -> DecompositionModel:
    """Summand list for the standard decompositions.

    proj_bundle: X, r.  cayley: X, Z, r.  blowup: X, Z, r.
    flip: X_prime, S, n, m.  projectivization: X, K, r.
    """
    def need(*keys):
        missing = [k for k in keys if k not in params]
        if missing:
            raise UsageError(f"{kind} model is missing parameters {missing}")
        return [params[k] for k in keys]

    if kind == "proj_bundle":
        x, r = need("X", "r")
        summands = [("X", x, i) for i in range(r)]
        fwd = {f"X({i})": ("pullback:pi", f"times:zeta^{i}") for i in range(r)}
        proj = {f"X({i})": (f"proj_project:{i}",) for i in range(r)}
    elif kind == "cayley":
        x, z, r = need("X", "Z", "r")
        summands = [("X", x, i) for i in range(r - 1)] + [("Z", z, r - 1)]
        fwd = {f"X({i})": ("pullback:pi", f"times:zeta^{i}", "pullback:iota") for i in range(r - 1)}
        fwd[f"Z({r - 1})"] = ("pullback:p", "pushforward:j")
        proj = {f"Z({r - 1})": ("pullback:j", "pushforward:p", f"sign:{(-1) ** (r - 1)}")}
    elif kind == "blowup":
        x, z, r = need("X", "Z", "r")
        summands = [("X", x, 0)] + [("Z", z, i) for i in range(1, r)]
        fwd = {"X(0)": ("pullback:pi",)}
        fwd.update({f"Z({i})": ("pullback:p", f"times:zeta_E^{i - 1}", "pushforward:j") for i in range(1, r)})
        proj = {"X(0)": ("pushforward:pi",)}
    elif kind == "flip":
        xp, s, n, m = need("X_prime", "S", "n", "m")
        summands = [("X'", xp, 0)] + [("S", s, k) for k in range(m + 1, n + 1)]
        fwd = {"X'(0)": ("flip_kernel:upper",)}
        fwd.update({f"S({k})": ("pullback:pi", f"times:zeta^{k - m - 1}", "pushforward:i") for k in range(m + 1, n + 1)})
        proj = {"X'(0)": ("flip_kernel:lower",)}
    elif kind == "projectivization":
        x, k_space, r = need("X", "K", "r")
        summands = [("X", x, i) for i in range(r)] + [("P(K)", k_space, r)]
        fwd = {f"X({i})": ("pullback:pi", f"times:zeta^{i}") for i in range(r)}
        fwd[f"P(K)({r})"] = ("pullback:r_minus", "pushforward:r_plus")
        proj = {f"P(K)({r})": ("pullback:r_plus", "pushforward:r_minus", f"sign:{(-1) ** r}")}
    else:
        raise UsageError(f"unknown decomposition kind {kind!r}")
    return DecompositionModel(kind, tuple(summands), fwd, proj)


def rank_generating_check(model: DecompositionModel, reference: Space) -> tuple[bool, list[int], list[int]]:
    """Compare the model's codimension rank function with the reference basis ranks."""
    got = model.rank_function()
    want = list(reference.basis_ranks())
    while want and want[-1] == 0:
        want.pop()
    return got == want, got, want


def poly_str(ranks: Sequence[int], var: str = "t") -> str:
    parts = []
    for k, r in enumerate(ranks):
        if not r:
            continue
        mono = "1" if k == 0 else (var if k == 1 else f"{var}^{k}")
        parts.append(mono if r == 1 and k else (str(r) if k == 0 else f"{r}{mono}"))
    return " + ".join(parts) if parts else "0"
