import pytest
from hypothesis import given, strategies as st

from chowcalc.cellular import blowup_example, blowup_point, linear_center, scroll, split_bundle
from chowcalc.errors import InvariantViolation, NotProperError, UsageError
from chowcalc.linalg import determinant, find_congruence
from chowcalc.polyring import GradedPolynomial
from chowcalc.sheaves import SheafClass, trivial
from chowcalc.spaces import (
    EmbeddingDatum,
    FormalBase,
    Point,
    ProjBundle,
    TotalSpace,
    integrate,
    intersection_matrix,
    proj_components,
    proj_project,
    projective_space,
    pullback,
    pushforward,
    pushforward_by_segre,
    validate_embedding,
)


def labels(space, k):
    return [space.label(m) for m in space.basis_monomials(k)]


@pytest.fixture(scope="module")
def formal_bundle():
    s = FormalBase(5, [("E", 3)])
    return ProjBundle(s, s.bundle("E"), var="z")


# projective spaces and bundles


def test_projective_space_relations():
    p2 = projective_space(2)
    h = p2.zeta()
    assert (h ** 3).is_zero()
    assert integrate(h ** 2) == 1
    assert integrate(h) == 0
    assert labels(p2, 1) == ["h"]


def test_rank_three_bundle_over_line_basis():
    p1 = projective_space(1)
    p = ProjBundle(p1, split_bundle(p1, [0, 0, 1]))
    assert labels(p, 2) == ["z^2", "h*z"]


def test_hirzebruch_relation():
    p = scroll(1, [0, 1])
    z = p.zeta()
    h = pullback(p.projection(), p.base.zeta())
    assert z * z == h * z


def test_pushforward_of_low_powers(formal_bundle):
    p = formal_bundle
    f = p.projection()
    z = p.zeta()
    assert pushforward(f, z).is_zero()
    assert pushforward(f, z ** 2) == p.base.one()


def test_pushforward_of_zeta_r_times_alpha(formal_bundle):
    p = formal_bundle
    s = p.base
    f = p.projection()
    c1 = s.cls(s.bundle("E").c(1))
    for alpha in s.basis(2):
        got = pushforward(f, p.zeta() ** 3 * pullback(f, alpha))
        assert got == c1 * alpha


def test_pushforward_of_high_powers_is_segre(formal_bundle):
    p = formal_bundle
    s = p.base
    e = s.bundle("E")
    c = [s.cls(e.c(i)) for i in range(4)]
    segres = [s.one(), c[1], c[1] ** 2 - c[2], c[1] ** 3 - 2 * c[1] * c[2] + c[3]]
    for k in range(4):
        assert pushforward(p.projection(), p.zeta() ** (2 + k)) == segres[k]


@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)), max_size=6))
def test_pushforward_agrees_with_segre_route(formal_bundle, terms):
    p = formal_bundle
    names = p.table.names
    poly = p.poly(0)
    for a, i, j, coeff in terms:
        exps = [0] * len(names)
        exps[names.index("z")] = a
        exps[names.index("c1(E)")] = i
        exps[names.index("c2(E)")] = j
        poly = poly + GradedPolynomial.monomial(p.table, tuple(exps), p.bound, coeff)
    reduced = pushforward(p.projection(), p.cls(poly))
    assert reduced == pushforward_by_segre(p, poly)


def test_projectors_on_basis(formal_bundle):
    p = formal_bundle
    f = p.projection()
    for alpha in p.base.basis(2):
        for j in range(3):
            y = p.zeta() ** j * pullback(f, alpha)
            for i in range(3):
                want = alpha if i == j else p.base.zero()
                assert proj_project(y, i) == want


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=40))
def test_projector_expansion_recovers_class(formal_bundle, coeffs):
    p = formal_bundle
    f = p.projection()
    monos = [m for k in range(4) for m in p.basis_monomials(k)]
    x = p.zero()
    for c, m in zip(coeffs, monos):
        x = x + c * p.cls(GradedPolynomial.monomial(p.table, m, p.bound))
    rebuilt = p.zero()
    for i, comp in enumerate(proj_components(x)):
        rebuilt = rebuilt + p.zeta() ** i * pullback(f, comp)
    assert rebuilt == x


def test_proj_project_index_range(formal_bundle):
    with pytest.raises(UsageError):
        proj_project(formal_bundle.zeta(), 3)


@given(st.lists(st.integers(-2, 2), min_size=4, max_size=12))
def test_normalize_is_idempotent(formal_bundle, coeffs):
    p = formal_bundle
    z = GradedPolynomial.var(p.table, "z", p.bound)
    c1 = GradedPolynomial.var(p.table, "c1(E)", p.bound)
    poly = p.poly(0)
    for i, c in enumerate(coeffs):
        poly = poly + (z ** i * c1 ** (i % 2)).scale(c)
    once = p.normalize(poly)
    assert p.normalize(once) == once
    assert once.degree_in("z") <= 2


def test_projective_bundle_formula_is_unimodular():
    p = scroll(2, [0, 1, 3])
    f = p.projection()
    for k in range(p.dim + 1):
        images = [p.zeta() ** i * pullback(f, a) for i in range(3) for a in p.base.basis(k - i)]
        mat = [[img.poly.coefficient(m) for m in p.basis_monomials(k)] for img in images]
        assert len(mat) == len(mat[0])
        assert abs(determinant(mat)) == 1


# total spaces


def test_total_space_of_point():
    pt = Point()
    t = TotalSpace(pt, trivial(4, pt.table, pt.bound))
    assert t.dim == 4
    assert t.basis_ranks() == [1]


def test_total_space_keeps_ranks_and_is_not_proper():
    p3 = projective_space(3)
    t = TotalSpace(p3, trivial(2, p3.table, p3.bound))
    assert t.basis_ranks() == p3.basis_ranks()
    assert t.dim == 5
    with pytest.raises(NotProperError):
        pushforward(t.projection(), t.one())


def test_integrate_refuses_formal_towers(formal_bundle):
    with pytest.raises(NotProperError):
        integrate(formal_bundle.zeta() ** 7)


def test_formal_base_dimension_cap(monkeypatch):
    monkeypatch.setenv("CHOWCALC_MAX_DIM", "4")
    with pytest.raises(UsageError):
        FormalBase(5, [("E", 2)])


# embeddings and blowups


def test_invalid_embedding_is_rejected():
    x = projective_space(2)
    good = linear_center(2, 1, ambient=x)
    hz = GradedPolynomial.var(good.center.table, "hZ", good.center.bound)
    wrong_normal = SheafClass(1, 1 + hz.scale(2))
    bad = EmbeddingDatum(x, good.center, 1, good.pullback_images, good.pushforward_images, wrong_normal)
    with pytest.raises(InvariantViolation):
        validate_embedding(bad)


def test_embedding_with_wrong_codim_is_rejected():
    x = projective_space(2)
    good = linear_center(2, 0, ambient=x)
    bad_push = {(): GradedPolynomial.var(x.table, "h", x.bound)}
    bad = EmbeddingDatum(x, good.center, 2, good.pullback_images, bad_push, good.normal)
    with pytest.raises(InvariantViolation):
        validate_embedding(bad)


def test_point_blowup_of_plane():
    bl = blowup_point(2)
    assert bl.basis_ranks() == [1, 2, 1]
    assert labels(bl, 1) == ["h", "j_*(1)"]
    h = pullback(bl.projection(), bl.base.zeta())
    e = bl.exceptional_divisor()
    assert e * e == -(h * h)
    assert integrate(e * e) == -1
    assert (h * e).is_zero()
    assert integrate((h - e) ** 2) == 0


def test_exceptional_self_restriction():
    bl = blowup_point(2)
    j = bl.exceptional_inclusion()
    restricted = pullback(j, pushforward(j, bl.exceptional.one()))
    assert restricted == -bl.exceptional.zeta()


def test_blowup_pushforward_kills_exceptional_part():
    bl = blowup_example("bl_line_p3")
    pi = bl.projection()
    for k in range(4):
        for a in bl.base.basis(k):
            assert pushforward(pi, pullback(pi, a)) == a
    assert pushforward(pi, bl.exceptional_divisor()).is_zero()


def test_pullback_is_multiplicative_on_blowup():
    bl = blowup_example("bl_line_p3")
    pi = bl.projection()
    for a in bl.base.basis(1):
        for b in bl.base.basis(2):
            assert pullback(pi, a) * pullback(pi, b) == pullback(pi, a * b)


def test_blowup_ranks_and_triple_intersections():
    pt3 = blowup_example("bl_pt_p3")
    e = pt3.exceptional_divisor()
    assert pt3.basis_ranks() == [1, 2, 2, 1]
    assert integrate(e ** 3) == 1
    line3 = blowup_example("bl_line_p3")
    e = line3.exceptional_divisor()
    h = pullback(line3.projection(), line3.base.zeta())
    assert line3.basis_ranks() == [1, 2, 2, 1]
    assert integrate(e ** 3) == -2
    assert integrate(h * e * e) == -1
    assert integrate(h ** 3) == 1


def test_blowup_needs_codim_two():
    x = projective_space(2)
    with pytest.raises(UsageError):
        linear_center(2, 2, ambient=x)


def _cubic_form(space, classes):
    return {(a, b, c): integrate(classes[a] * classes[b] * classes[c])
            for a in range(2) for b in range(a, 2) for c in range(b, 2)}


def _change(classes, g):
    return [sum((g[i][j] * classes[i] for i in range(2)), classes[0].space.zero()) for j in range(2)]


def _cubic_congruent(x, y, lo=-2, hi=2):
    """Search GL2(Z) for a change of the CH^1 basis of x matching the cubic forms."""
    import itertools

    cx, cy = x.basis(1), y.basis(1)
    target = _cubic_form(y, cy)
    for entries in itertools.product(range(lo, hi + 1), repeat=4):
        g = [list(entries[:2]), list(entries[2:])]
        if abs(g[0][0] * g[1][1] - g[0][1] * g[1][0]) != 1:
            continue
        if _cubic_form(x, _change(cx, g)) == target:
            return g
    return None


def test_point_blowup_of_plane_matches_hirzebruch_surface():
    a = intersection_matrix(blowup_point(2), 1)
    b = intersection_matrix(scroll(1, [0, 1]), 1)
    assert a == [[1, 0], [0, -1]]
    assert b == [[1, 1], [1, 0]]
    assert find_congruence(a, b) is not None


def test_point_blowup_of_space_matches_scroll_over_plane():
    assert _cubic_congruent(blowup_example("bl_pt_p3"), scroll(2, [0, 1])) is not None


def test_line_blowup_matches_plane_bundle_over_line():
    assert _cubic_congruent(blowup_example("bl_line_p3"), scroll(1, [0, 0, 1])) is not None
