"""Built-in cellular examples: linear centers in projective space and their blowups."""
from __future__ import annotations

from .errors import UsageError
from .polyring import GradedPolynomial
from .sheaves import SheafClass, direct_sum, line, trivial
from .spaces import (
    Blowup,
    EmbeddingDatum,
    Point,
    ProjBundle,
    Space,
    blowup,
    projective_space,
    validate_embedding,
)


def linear_center(n: int, k: int, ambient: Space | None = None) -> EmbeddingDatum:
    """A linear P^k inside P^n (k = 0 is a point)."""
    if not 0 <= k < n:
        raise UsageError(f"need 0 <= k < n, got k={k}, n={n}")
    x = ambient if ambient is not None else projective_space(n)
    if not isinstance(x, ProjBundle) or x.rank != n + 1 or not isinstance(x.base, Point):
        raise UsageError("ambient must be a projective space of the right dimension")
    r = n - k
    hx = x.zeta_name
    if k == 0:
        z: Space = Point("pt")
        pull = {hx: z.poly(0)}
        push = {(): GradedPolynomial.var(x.table, hx, x.bound, n)}
        normal = trivial(r, z.table, z.bound)
    else:
        z = projective_space(k, var="hZ", name=f"P{k}")
        hz = GradedPolynomial.var(z.table, "hZ", z.bound)
        pull = {hx: hz}
        push = {(j,): GradedPolynomial.var(x.table, hx, x.bound, r + j) for j in range(k + 1)}
        normal = direct_sum(*[line(hz)] * r)
    emb = EmbeddingDatum(x, z, r, pull, push, normal)
    validate_embedding(emb)
    return emb


def blowup_linear(n: int, k: int) -> Blowup:
    emb = linear_center(n, k)
    center = "pt" if k == 0 else ("line" if k == 1 else f"P{k}")
    return blowup(emb.ambient, emb, name=f"Bl_{center}P{n}")


def blowup_point(n: int) -> Blowup:
    return blowup_linear(n, 0)


def split_bundle(base: Space, degrees: list[int], var: str = "h") -> SheafClass:
    """Direct sum of O(d) over a projective space with hyperplane variable `var`."""
    h = GradedPolynomial.var(base.table, var, base.bound)
    parts = [trivial(1, base.table, base.bound) if d == 0 else line(h.scale(d)) for d in degrees]
    return direct_sum(*parts).map_chern(base.normalize)


def scroll(k: int, degrees: list[int], var: str = "z") -> ProjBundle:
    """P(O(d_1) + ... + O(d_s)) over P^k."""
    base = projective_space(k)
    return ProjBundle(base, split_bundle(base, degrees), var=var,
                      name=f"P(O{tuple(degrees)} on P{k})")


BLOWUP_EXAMPLES = {
    "bl_pt_p2": (2, 0),
    "bl_pt_p3": (3, 0),
    "bl_line_p3": (3, 1),
}


def blowup_example(example_id: str) -> Blowup:
    if example_id not in BLOWUP_EXAMPLES:
        raise UsageError(f"unknown blowup example {example_id!r}; choose from {sorted(BLOWUP_EXAMPLES)}")
    return blowup_linear(*BLOWUP_EXAMPLES[example_id])
