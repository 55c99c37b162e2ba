"""Verification routines.  Each returns a ReportItem; none of them raises on a failed identity."""
from __future__ import annotations

import functools
import traceback

from .cellular import blowup_example, blowup_point, scroll
from .correspondences import (
    Correspondence,
    FlipSetting,
    RelativeProduct,
    VirtualFlipSetting,
    build_decomposition_model,
    convolve,
    cotangent_twisted_up,
    diagonal_class,
    kernels_equal,
    phi_lower_matrix,
    poly_str,
    rank_generating_check,
)
from .errors import ChowError, InvariantViolation
from .linalg import determinant, find_congruence, rank
from .polyring import GradedPolynomial, invert_unit_series
from .report import ReportItem, first_difference, stopwatch
from .sheaves import (
    SheafClass,
    cotangent_twist_chern,
    direct_sum,
    dual,
    line,
    quotient,
    segre,
    tensor_line,
    trivial,
    twisted_chern,
)
from .spaces import (
    ChowClass,
    FormalBase,
    Point,
    ProjBundle,
    Space,
    TotalSpace,
    components_from_pushes,
    integrate,
    intersection_matrix,
    proj_components,
    projective_space,
    pullback,
    pushforward,
    zeta_pushes,
)


def _name(base: str, **params) -> str:
    inner = ",".join(f"{k}={v}" for k, v in params.items())
    return f"{base}({inner})"


def reported(fn):
    """Turn exceptions into error items and attach the wall time."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        with stopwatch() as clock:
            try:
                item = fn(*args, **kwargs)
            except InvariantViolation as exc:
                item = ReportItem(fn.__name__, "error",
                                  witness={"error": str(exc), "kind": "invariant", **exc.witness})
            except ChowError as exc:
                item = ReportItem(fn.__name__, "error", witness={"error": str(exc), "kind": "usage"})
            except Exception as exc:  # noqa: BLE001  every failure must surface as a report item
                item = ReportItem(fn.__name__, "error", witness={
                    "error": f"{type(exc).__name__}: {exc}", "kind": "internal",
                    "where": traceback.format_exc(limit=-1).strip().splitlines()[-2].strip(),
                })
        item.millis = clock["millis"]
        return item

    return wrapper


def _verdict(name: str, witness: dict | None, **extra) -> ReportItem:
    return ReportItem(name, "pass" if witness is None else "fail", witness=witness, **extra)


def _basis_upto(space: Space, top: int) -> list[ChowClass]:
    return [b for k in range(top + 1) for b in space.basis(k)]


def _extension_base(dim: int, m: int, r: int) -> tuple[FormalBase, SheafClass, SheafClass]:
    """Formal F (rank m) and G (rank r) with E = F + G, so that c(E)/c(F) stops in degree r."""
    x = FormalBase(dim, [("F", m), ("G", r)])
    return x, x.bundle("F"), direct_sum(x.bundle("F"), x.bundle("G")).map_chern(x.normalize)


# ---------------------------------------------------------------------------
# projective bundles and their projectors


@reported
def projector_orthogonality_check(r: int, m: int, dim_bound: int | None = None) -> ReportItem:
    """Projectors of P(G), G = coker(F -> E), through the embedding into P(E).

    Checks pi_{a*} pi_b^* = delta_ab and sum_a pi_a^* pi_{a*} = Id (after pushing
    into P(E)), plus the same two identities for P(E) itself.
    """
    dim = r + m + 4 if dim_bound is None else dim_bound
    name = _name("projector_orthogonality", r=r, m=m, D=dim)
    n = m + r
    x, bundle_f, bundle_e = _extension_base(dim, m, r)
    p = ProjBundle(x, bundle_e, var="z")
    f_pi = p.projection()
    zeta = p.zeta()
    zpow = [zeta ** a for a in range(n)]
    chern_g = x.normalize(bundle_e.chern * invert_unit_series(bundle_f.chern))
    chern_g_classes = [x.cls(chern_g.homogeneous(j)) for j in range(r)]
    iota_class = p.cls(twisted_chern(dual(bundle_f).retable(p.table, p.bound),
                                      zeta.poly, m))

    def g_components(pushed_in: ChowClass) -> list[ChowClass]:
        return components_from_pushes(zeta_pushes(pushed_in, r), chern_g_classes, r)

    def rebuild(comps: list[ChowClass], space: Space) -> ChowClass:
        out = space.zero()
        for a, c in enumerate(comps):
            if not c.is_zero():
                out = out + zpow[a] * pullback(f_pi, c)
        return out

    count = 0
    for k in range(dim + 1):
        for exps in p.basis_monomials(k):
            b = exps[-1]
            alpha = x.cls(GradedPolynomial.monomial(x.table, exps[:-1], x.bound))
            y = zpow[b] * pullback(f_pi, alpha)
            count += 1
            comps = proj_components(y)
            for a, got in enumerate(comps):
                w = first_difference(alpha if a == b else x.zero(), got,
                                     lambda: f"ambient pi_{a}* of {y}")
                if w:
                    return _verdict(name, w)
            w = first_difference(y, rebuild(comps, p), lambda: f"ambient sum y={y}")
            if w:
                return _verdict(name, w)
            pushed_in = iota_class * y
            comps = g_components(pushed_in)
            if b < r:
                for a, got in enumerate(comps):
                    w = first_difference(alpha if a == b else x.zero(), got,
                                         lambda: f"sub-bundle pi_{a}* of {y}")
                    if w:
                        return _verdict(name, w)
            w = first_difference(pushed_in, iota_class * rebuild(comps, p), lambda: f"sub-bundle sum y={y}")
            if w:
                return _verdict(name, w)
    return _verdict(name, None, output=f"{count} basis classes up to codim {dim}")


@reported
def cotangent_chern_check(r: int, dim_bound: int | None = None) -> ReportItem:
    """c_k(Omega(1)) closed form against the Euler sequence, for every k <= r-1."""
    dim = r if dim_bound is None else dim_bound
    name = _name("cotangent_chern", r=r, D=dim)
    x = FormalBase(dim, [("E", r)])
    p = ProjBundle(x, x.bundle("E"), var="z")
    e = p.bundle
    zeta = GradedPolynomial.var(p.table, p.zeta_name, p.bound)
    # Omega = ker(E(-1) -> O); Omega(1) = Omega tensor O(1)
    omega = quotient(tensor_line(e, -zeta), trivial(1, p.table, p.bound)).map_chern(p.normalize)
    omega_twisted = tensor_line(omega, zeta).map_chern(p.normalize)
    e_dual = dual(e)
    for k in range(r):
        closed = p.cls(cotangent_twist_chern(e, k, zeta))
        euler = p.cls(omega_twisted.c(k))
        w = first_difference(euler, closed, lambda: f"k={k}")
        if w:
            return _verdict(name, w)
        dual_form = GradedPolynomial.zero(p.table, p.bound)
        for i in range(k + 1):
            dual_form = dual_form + (zeta ** i) * e_dual.c(k - i)
        w = first_difference(euler, p.cls(dual_form.scale((-1) ** k)), lambda: f"dual form k={k}")
        if w:
            return _verdict(name, w)
    return _verdict(name, None)


# ---------------------------------------------------------------------------
# flips and virtual flips


@reported
def flip_convolution_check(n: int, m: int, dim_bound: int | None = None) -> ReportItem:
    dim = n + m + 2 if dim_bound is None else dim_bound
    name = _name("flip_convolution", n=n, m=m, D=dim)
    st = FlipSetting(n, m, dim)
    conv = convolve(st.upper_kernel("zp1", "z"), st.lower_kernel("z", "zp2"))
    diag = diagonal_class(st.base, st.bundle_pp, ("zp1", "zp2"))
    w = first_difference(diag.kernel_on(conv.product), conv.kernel, "kernel on P' x P'")
    return _verdict(name, w)


@reported
def flip_identity_check(n: int, m: int, dim_bound: int | None = None) -> ReportItem:
    """Phi_* Phi^* = Id on every basis class of P' up to codim dim_bound."""
    dim = n + m + 1 if dim_bound is None else dim_bound
    name = _name("flip_identity", n=n, m=m, D=dim)
    st = FlipSetting(n, m, dim)
    lower, upper = st.lower_kernel(), st.upper_kernel()
    for y in _basis_upto(st.pp_space, dim):
        w = first_difference(y, lower.act(upper.act(y)), lambda: f"y={y}")
        if w:
            return _verdict(name, w)
    return _verdict(name, None)


@reported
def flip_matrix_check(n: int, m: int, dim_bound: int | None = None) -> ReportItem:
    """Phi_*(zeta^k): zero for k < n-m, leading coefficient (-1)^(m-i) at k = n-m+i."""
    dim = n + m if dim_bound is None else dim_bound
    name = _name("flip_matrix", n=n, m=m, D=dim)
    st = FlipSetting(n, m, dim)
    mat = phi_lower_matrix(st)
    s = st.base
    for i in range(m + 1):
        for k in range(n + 1):
            entry = mat[i][k]
            if k < n - m or i > k - (n - m):
                want = s.zero()
            elif i == k - (n - m):
                want = s.cls((-1) ** (m - i))
            else:
                continue
            w = first_difference(want, entry, lambda: f"row zeta'^{i}, column zeta^{k}")
            if w:
                return _verdict(name, w)
    rendered = "; ".join(
        ",".join(str(mat[i][k]) for k in range(n + 1)) for i in range(m + 1)
    )
    return _verdict(name, None, output=rendered)


@reported
def flip_vanishing_check(n: int, m: int, dim_bound: int | None = None) -> ReportItem:
    """The map gamma -> (Phi_* gamma, c_{m+1}(F' tensor O(-1)) gamma) is injective."""
    dim = n + m + 1 if dim_bound is None else dim_bound
    name = _name("flip_vanishing", n=n, m=m, D=dim)
    st = FlipSetting(n, m, dim)
    p, pp = st.p_space, st.pp_space
    lower = st.lower_kernel()
    normal_top = st.normal_top_chern()
    sizes = []
    top = min(dim, p.bound - (m + 1))
    for k in range(top + 1):
        cols = p.basis(k)
        if not cols:
            continue
        out_pp = pp.basis_monomials(k + m - n) if k + m - n >= 0 else []
        out_p = p.basis_monomials(k + m + 1)
        rows_t = []
        for gamma in cols:
            a = lower.act(gamma)
            b = normal_top * gamma
            rows_t.append([a.poly.coefficient(e) for e in out_pp] + [b.poly.coefficient(e) for e in out_p])
        rk = rank(rows_t)
        sizes.append(len(cols))
        if rk < len(cols):
            return _verdict(name, {"codim": k, "rank": rk, "columns": len(cols)})
    return _verdict(name, None, output=f"kernel zero in codim 0..{top}; column counts {sizes}")


@reported
def flip_linearity_check(n: int, m: int, dim_bound: int | None = None) -> ReportItem:
    """Phi_*(theta . gamma) = theta . Phi_*(gamma) for base classes theta."""
    dim = n + m + 1 if dim_bound is None else dim_bound
    name = _name("flip_linearity", n=n, m=m, D=dim)
    st = FlipSetting(n, m, dim)
    p, pp, s = st.p_space, st.pp_space, st.base
    lower = st.lower_kernel()
    for theta in _basis_upto(s, 2):
        t_p, t_pp = pullback(p.projection(), theta), pullback(pp.projection(), theta)
        for gamma in _basis_upto(p, 3):
            w = first_difference(t_pp * lower.act(gamma), lower.act(t_p * gamma), lambda: f"theta={theta} gamma={gamma}")
            if w:
                return _verdict(name, w)
    return _verdict(name, None)


@reported
def virtual_flip_check(r: int, i: int, dim_bound: int | None = None) -> ReportItem:
    """Psi_* Psi^* = (-1)^r Id on P(K), read off the composed kernel."""
    dim = r + i + 2 if dim_bound is None else dim_bound
    name = _name("virtual_flip", r=r, i=i, D=dim)
    vs = VirtualFlipSetting(r, i, dim)
    conv = convolve(vs.pull_kernel("zk1", "zg"), vs.push_kernel("zg", "zk2"))
    diag = diagonal_class(vs.base, vs.bundle_k, ("zk1", "zk2")).kernel_on(conv.product)
    if conv.kernel == diag:
        sign = 1
    elif conv.kernel == -diag:
        sign = -1
    else:
        return _verdict(name, first_difference(diag, conv.kernel, "composed kernel is not +-diagonal"))
    expected = (-1) ** r
    witness = None if sign == expected else {"expected_sign": expected, "actual_sign": sign}
    return _verdict(name, witness, sign=sign)


# ---------------------------------------------------------------------------
# Cayley's trick and the projectivization identities


@reported
def cayley_gamma_check(r: int, dim_bound: int | None = None) -> ReportItem:
    """p_*(c_{r-1}(Omega(1)) . p^* z) on P(N) over Z, for every basis class z.

    The sign is reported together with which of (-1)^(r-1) Id and (-1)^r Id it equals.
    """
    dim = r + 2 if dim_bound is None else dim_bound
    name = _name("cayley_gamma", r=r, D=dim)
    z_space = FormalBase(dim, [("N", r)])
    prod = RelativeProduct.of(z_space, [("z", z_space.bundle("N"))])
    p = prod.space
    omega = cotangent_twisted_up(prod, "z")
    kernel = p.cls(omega.up_to(r - 1).c(r - 1))
    closed = p.cls(cotangent_twist_chern(p.bundle, r - 1, GradedPolynomial.var(p.table, "z", p.bound)))
    w = first_difference(closed, kernel, "Omega(1) two routes")
    if w:
        return _verdict(name, w)
    f = p.projection()
    sign = None
    for zc in _basis_upto(z_space, dim):
        got = pushforward(f, kernel * pullback(f, zc))
        if sign is None:
            if got == zc:
                sign = 1
            elif got == -zc:
                sign = -1
            else:
                return _verdict(name, first_difference(zc, got, lambda: f"not a multiple of Id at z={zc}"))
        w = first_difference(zc * sign, got, lambda: f"z={zc}")
        if w:
            return _verdict(name, w)
    flags = {
        "equals_(-1)^(r-1)_Id": sign == (-1) ** (r - 1),
        "equals_(-1)^r_Id": sign == (-1) ** r,
    }
    witness = None if sign == (-1) ** (r - 1) else {"expected_sign": (-1) ** (r - 1), "actual_sign": sign}
    return _verdict(name, witness, sign=sign, flags=flags)


@reported
def gamma_orthogonality_check(r: int, m: int, dim_bound: int | None = None) -> ReportItem:
    """Local model G = coker(F -> E): pi_{a*} Gamma^* = 0, Gamma_* pi_a^* = 0, and the two
    projector formulas agree."""
    if m < 1:
        raise ValueError("gamma orthogonality needs m >= 1")
    dim = r + m + 2 if dim_bound is None else dim_bound
    name = _name("gamma_orthogonality", r=r, m=m, D=dim)
    n = m + r
    x, bundle_f, bundle_e = _extension_base(dim, m, r)
    y = RelativeProduct.of(x, [("zk", dual(bundle_f)), ("z", bundle_e)])
    pe = y.sub(["z"]).space
    pk = y.sub(["zk"]).space
    zeta_e = pe.zeta()
    chern_g = x.normalize(bundle_e.chern * invert_unit_series(bundle_f.chern))
    chern_g_classes = [x.cls(chern_g.homogeneous(j)) for j in range(r)]
    segre_f = segre(dual(bundle_f))
    iota_class = pe.cls(twisted_chern(dual(bundle_f).retable(pe.table, pe.bound), zeta_e.poly, m))
    k_class = y.cls(twisted_chern(y.bundle("z"), y.zeta("zk"), n))
    gamma_class = y.cls(twisted_chern(cotangent_twisted_up(y, "zk").up_to(m - 1), y.zeta("z"), m - 1))
    to_e, to_k = y.leg(["z"]), y.leg(["zk"])
    f_e = pe.projection()

    def g_components(pushed_in: ChowClass) -> list[ChowClass]:
        return components_from_pushes(zeta_pushes(pushed_in, r), chern_g_classes, r)

    def g_components_segre(pushed_in: ChowClass) -> list[ChowClass]:
        ambient = proj_components(pushed_in)
        out = []
        for a in range(r):
            acc = x.zero()
            for j in range(r - a):
                acc = acc + x.cls(segre_f.homogeneous(j)) * ambient[m + a + j]
            out.append(acc)
        return out

    for alpha in _basis_upto(x, dim):
        lifted = pullback(f_e, alpha)
        for b in range(r):
            pushed_in = iota_class * zeta_e ** b * lifted
            first, second = g_components(pushed_in), g_components_segre(pushed_in)
            for a in range(r):
                w = first_difference(first[a], second[a], lambda: f"projector formulas a={a} b={b} alpha={alpha}")
                if w:
                    return _verdict(name, w)
            on_y = gamma_class * pullback(to_e, zeta_e ** b * lifted)
            w = first_difference(pk.zero(), pushforward(to_k, on_y), lambda: f"Gamma_* pi_{b}^* alpha={alpha}")
            if w:
                return _verdict(name, w)
    for yk in _basis_upto(pk, dim):
        pushed_in = pushforward(to_e, k_class * gamma_class * pullback(to_k, yk))
        for a, comp in enumerate(g_components(pushed_in)):
            w = first_difference(x.zero(), comp, lambda: f"pi_{a}* Gamma^* y={yk}")
            if w:
                return _verdict(name, w)
    return _verdict(name, None)


# ---------------------------------------------------------------------------
# blowups and decomposition models


@reported
def blowup_key_formula_check(example_id: str) -> ReportItem:
    """pi^* i_* z = j_*(c_{r-1}(V) . p^* z) with V = p^*N / O(-1), for every basis z of the center."""
    name = _name("blowup_key_formula", example=example_id)
    bl = blowup_example(example_id)
    z, e, r = bl.center, bl.exceptional, bl.codim
    zeta = GradedPolynomial.var(e.table, e.zeta_name, e.bound)
    normal = bl.embedding.normal.map_chern(z.normalize).retable(e.table, e.bound)
    excess = quotient(normal, line(-zeta)).map_chern(e.normalize)
    top = e.cls(excess.c(r - 1))
    pi, i, j, p = bl.projection(), bl.center_inclusion(), bl.exceptional_inclusion(), bl.exceptional_projection()
    count = 0
    for zc in _basis_upto(z, z.ring_dim):
        lhs = pullback(pi, pushforward(i, zc))
        rhs = pushforward(j, top * pullback(p, zc))
        w = first_difference(lhs, rhs, lambda: f"z={zc}")
        if w:
            return _verdict(name, w)
        count += 1
    return _verdict(name, None, output=f"{count} center classes")


@reported
def blowup_point_plane_check() -> ReportItem:
    """Bl_pt P^2: ranks (1,2,1), (j_*1)^2 = -1, and the pairing matches the scroll P(O + O(1)) over P^1."""
    name = "blowup_point_plane"
    bl = blowup_point(2)
    ranks = bl.basis_ranks()
    if ranks != [1, 2, 1]:
        return _verdict(name, {"expected": [1, 2, 1], "actual": ranks})
    e = bl.exceptional_divisor()
    self_int = integrate(e * e)
    if self_int != -1:
        return _verdict(name, {"expected": -1, "actual": self_int, "context": "(j_*1)^2"})
    a = intersection_matrix(bl, 1)
    b = intersection_matrix(scroll(1, [0, 1]), 1)
    g = find_congruence(a, b, -2, 2)
    if g is None:
        return _verdict(name, {"context": "no GL2(Z) change with entries in [-2,2]", "blowup": a, "scroll": b})
    return _verdict(name, None, output=f"pairing {a} ~ {b} via {g}")


@reported
def projectivization_instance_check() -> ReportItem:
    """r = 1 model [(P^2,0),(pt,1)] against Bl_pt P^2, on ranks and on the maps."""
    name = "projectivization_instance"
    bl = blowup_point(2)
    x, z = bl.base, bl.center
    model = build_decomposition_model("projectivization", {"X": x, "K": z, "r": 1})
    ok, got, want = rank_generating_check(model, bl)
    if not ok:
        return _verdict(name, {"expected": want, "actual": got})
    pi, j, p = bl.projection(), bl.exceptional_inclusion(), bl.exceptional_projection()
    for k in range(bl.dim + 1):
        images = [pullback(pi, a) for a in x.basis(k)]
        images += [pushforward(j, pullback(p, c)) for c in z.basis(k - 1)] if k >= 1 else []
        mat = [[img.poly.coefficient(m) for m in bl.basis_monomials(k)] for img in images]
        if len(mat) != len(bl.basis_monomials(k)) or abs(determinant(mat)) != 1:
            return _verdict(name, {"codim": k, "matrix": mat, "context": "forward map not unimodular"})
    one = z.one()
    back = pushforward(p, pullback(j, pushforward(j, pullback(p, one))))
    if back != -one:
        return _verdict(name, {"context": "Gamma_* Gamma^* on the point", "expected": -1,
                               "actual": back.poly.constant_term()})
    return _verdict(name, None, output=poly_str(got))


def _omega_twisted_on_projective_space(k: int) -> tuple[Space, SheafClass]:
    """P^k with Omega(1) = ker(O^(k+1) -> O(1)); P^0 is a point with the zero bundle."""
    space = projective_space(k)
    if k == 0:
        return space, trivial(0, space.table, space.bound)
    h = GradedPolynomial.var(space.table, "h", space.bound)
    return space, quotient(trivial(k + 1, space.table, space.bound), line(h)).map_chern(space.normalize)


def _copies(bundle: SheafClass, count: int) -> SheafClass:
    total = bundle.chern ** count
    return SheafClass(bundle.rank * count, total)


@reported
def hom_space_check(m: int, n: int) -> ReportItem:
    """Hom(W, V) with rank W = m <= rank V = n: both total-space models against the decomposition."""
    name = _name("hom_space", m=m, n=n)
    r = n - m
    pt = Point()
    x = TotalSpace(pt, trivial(m * n, pt.table, pt.bound), name="Hom(W,V)")
    pv, omega_v = _omega_twisted_on_projective_space(n - 1)
    p_g = TotalSpace(pv, _copies(omega_v, m).map_chern(pv.normalize), name="P(G)")
    pw, omega_w = _omega_twisted_on_projective_space(m - 1)
    p_k = TotalSpace(pw, _copies(omega_w, n).map_chern(pw.normalize), name="P(K)")
    if p_g.dim != x.dim + r - 1 or p_k.dim != x.dim - 1 - r:
        return _verdict(name, {"context": "dimension bookkeeping", "dims": [x.dim, p_g.dim, p_k.dim]})
    model = build_decomposition_model("projectivization", {"X": x, "K": p_k, "r": r})
    ok, got, want = rank_generating_check(model, p_g)
    summands = 1 if r == 0 else r + 1
    if not ok or len(model.summands) != summands:
        return _verdict(name, {"expected": want, "actual": got})
    return _verdict(name, None, output=poly_str(got))


@reported
def decomposition_ranks_check(kind: str) -> ReportItem:
    """Rank functions of the standard models against independently built spaces."""
    name = _name("decomposition_ranks", kind=kind)
    if kind == "proj_bundle":
        base = projective_space(2)
        e = SheafClass(3, base.poly(1))
        ref = ProjBundle(base, e)
        model = build_decomposition_model(kind, {"X": base, "r": 3})
    elif kind == "blowup":
        ref = blowup_example("bl_line_p3")
        model = build_decomposition_model(kind, {"X": ref.base, "Z": ref.center, "r": ref.codim})
    elif kind == "flip":
        n, m = 3, 1
        pn, pm = projective_space(n), projective_space(m)
        hn = GradedPolynomial.var(pn.table, "h", pn.bound)
        hm = GradedPolynomial.var(pm.table, "h", pm.bound)
        ref = TotalSpace(pn, SheafClass(m + 1, pn.normalize((1 - hn) ** (m + 1))))
        xp = TotalSpace(pm, SheafClass(n + 1, pm.normalize((1 - hm) ** (n + 1))))
        model = build_decomposition_model(kind, {"X_prime": xp, "S": Point(), "n": n, "m": m})
    else:
        raise ValueError(f"no reference space for {kind!r}")
    ok, got, want = rank_generating_check(model, ref)
    return _verdict(name, None if ok else {"expected": want, "actual": got}, output=poly_str(got))


# ---------------------------------------------------------------------------
# convolution laws


def _point_product(ranks: dict[str, int]) -> tuple[Point, dict[str, SheafClass]]:
    pt = Point()
    return pt, {n: trivial(r, pt.table, pt.bound) for n, r in ranks.items()}


@reported
def convolution_associativity_check(a: int = 2, b: int = 3, c: int = 2, d: int = 3) -> ReportItem:
    """Exhaustive over basis kernels of P^(a-1) x P^(b-1), P^(b-1) x P^(c-1), P^(c-1) x P^(d-1)."""
    ranks = (a, b, c, d)
    name = _name("convolution_associativity", a=a, b=b, c=c, d=d)
    names = ("a", "b", "c", "d")
    pt, bundles = _point_product(dict(zip(names, ranks)))

    def basis_kernels(src: str, tgt: str):
        prod = RelativeProduct.of(pt, [(src, bundles[src]), (tgt, bundles[tgt])])
        return [Correspondence(prod, src, tgt, k)
                for w in range(prod.space.ring_dim + 1) for k in prod.space.basis(w)]

    ab, bc, cd = basis_kernels("a", "b"), basis_kernels("b", "c"), basis_kernels("c", "d")
    for g1 in ab:
        for g2 in bc:
            g12 = convolve(g1, g2)
            for g3 in cd:
                left = convolve(g12, g3)
                right = convolve(g1, convolve(g2, g3))
                if not kernels_equal(left, right):
                    w = first_difference(left.kernel, right.kernel_on(left.product),
                                         lambda: f"{g1.kernel} | {g2.kernel} | {g3.kernel}")
                    return _verdict(name, w)
    return _verdict(name, None)


@reported
def diagonal_unit_check(rank_a: int, rank_b: int, dim_bound: int = 2) -> ReportItem:
    name = _name("diagonal_unit", a=rank_a, b=rank_b, D=dim_bound)
    s = FormalBase(dim_bound, [("A", rank_a), ("B", rank_b)])
    ea, eb = s.bundle("A"), s.bundle("B")
    prod = RelativeProduct.of(s, [("a1", ea), ("b1", eb)])
    left_unit = diagonal_class(s, ea, ("a0", "a1"))
    right_unit = diagonal_class(s, eb, ("b1", "b2"))
    for d in range(dim_bound + 1):
        for k in prod.space.basis(d):
            g = Correspondence(prod, "a1", "b1", k)
            left = convolve(left_unit, g).renamed("a1", "b1")
            w = first_difference(g.kernel, left.kernel_on(prod), lambda: f"Delta then g, g={k}")
            if w:
                return _verdict(name, w)
            right = convolve(g, right_unit).renamed("a1", "b1")
            w = first_difference(g.kernel, right.kernel_on(prod), lambda: f"g then Delta, g={k}")
            if w:
                return _verdict(name, w)
    return _verdict(name, None)
