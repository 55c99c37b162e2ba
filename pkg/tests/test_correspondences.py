import pytest
from hypothesis import given, strategies as st

from chowcalc import UsageError
from chowcalc.cellular import blowup_point, split_bundle
from chowcalc.checks import (
    cayley_gamma_check,
    convolution_associativity_check,
    diagonal_unit_check,
    flip_convolution_check,
    virtual_flip_check,
)
from chowcalc.correspondences import (
    Correspondence,
    FlipSetting,
    RelativeProduct,
    build_decomposition_model,
    convolve,
    diagonal_class,
    kernels_equal,
    poly_str,
    rank_generating_check,
)
from chowcalc.polyring import GradedPolynomial, retable
from chowcalc.sheaves import trivial
from chowcalc.spaces import FormalBase, Point, ProjBundle, projective_space, pushforward


def _point_product(*ranks):
    pt = Point("pt")
    names = [f"w{i + 1}" for i in range(len(ranks))]
    return RelativeProduct.of(pt, [(n, trivial(r, pt.table, pt.bound)) for n, r in zip(names, ranks)])


def _var(space, name):
    return GradedPolynomial.var(space.table, name, space.bound)


def test_product_of_two_lines():
    prod = _point_product(2, 2)
    assert prod.space.basis_ranks() == [1, 2, 1]
    z1, z2 = prod.cls(_var(prod.space, "w1")), prod.cls(_var(prod.space, "w2"))
    assert (z1 * z1).is_zero()
    assert str(pushforward(prod.leg(["w2"]), z1 * z2)) == "w2"
    assert str(pushforward(prod.leg(["w1"]), z1 * z2)) == "w1"
    assert pushforward(prod.leg(["w1"]), z1).is_zero()


def test_product_rejects_repeated_names():
    pt = Point("pt")
    e = trivial(2, pt.table, pt.bound)
    with pytest.raises(UsageError):
        RelativeProduct.of(pt, [("w", e), ("w", e)])


def test_cached_products_are_shared():
    pt = Point("pt")
    e = trivial(3, pt.table, pt.bound)
    assert RelativeProduct.of(pt, [("a", e)]) is RelativeProduct.of(pt, [("a", e)])


def test_diagonal_of_projective_line():
    pt = Point("pt")
    diag = diagonal_class(pt, trivial(2, pt.table, pt.bound))
    assert str(diag.kernel) == "w2 + w1"


@pytest.mark.parametrize("m", range(0, 5))
def test_diagonal_of_projective_space_is_symmetric_sum(m):
    # over a point the diagonal of P^m is sum_i w1^i w2^(m-i)
    pt = Point("pt")
    diag = diagonal_class(pt, trivial(m + 1, pt.table, pt.bound))
    sp = diag.product.space
    w1, w2 = _var(sp, "w1"), _var(sp, "w2")
    want = GradedPolynomial.zero(sp.table, sp.bound)
    for i in range(m + 1):
        want = want + w1 ** i * w2 ** (m - i)
    assert diag.kernel.poly == sp.normalize(want)


@given(st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_diagonal_acts_as_identity(coeffs):
    base = FormalBase(4, [("E", 3)])
    diag = diagonal_class(base, base.bundle("E"))
    source = diag.source_space()
    basis = [exps for k in range(3) for exps in source.basis_monomials(k)]
    poly = GradedPolynomial.zero(source.table, source.bound)
    for c, exps in zip(coeffs, basis):
        poly = poly + GradedPolynomial.monomial(source.table, exps, source.bound, c)
    x = source.cls(poly)
    image = diag.act(x)
    assert image.poly == retable(x.poly, image.space.table, image.space.bound, rename={"w1": "w2"})


def test_flip_of_lines_over_point():
    pt = Point("pt")
    e = trivial(2, pt.table, pt.bound)
    prod = RelativeProduct.of(pt, [("zp1", e), ("z", e)])
    back = RelativeProduct.of(pt, [("z", e), ("zp2", e)])
    upper = Correspondence(prod, "zp1", "z", prod.cls(_var(prod.space, "zp1") + _var(prod.space, "z")))
    lower = Correspondence(back, "z", "zp2", back.cls(_var(back.space, "z") + _var(back.space, "zp2")))
    conv = convolve(upper, lower)
    # hand expansion: p13_*((zp1 + z)(z + zp2)) keeps the z^1 part: zp1 + zp2
    assert str(conv.kernel) == "zp2 + zp1"


@pytest.mark.parametrize("n,m", [(1, 0), (1, 1), (2, 1), (3, 1), (3, 2)])
def test_flip_convolution_closed_form(n, m):
    # sum_j c_(m-j)(T(-1) on the second leg) zp1^j with c(T(-1)) = c(F') / (1 - zp2)
    st_ = FlipSetting(n, m, n + m + 2)
    conv = convolve(st_.upper_kernel("zp1", "z"), st_.lower_kernel("z", "zp2"))
    sp = conv.product.space
    fp = st_.base.bundle("Fp")
    z1, z2 = _var(sp, "zp1"), _var(sp, "zp2")
    want = GradedPolynomial.zero(sp.table, sp.bound)
    for j in range(m + 1):
        for s in range(m - j + 1):
            want = want + retable(fp.c(s), sp.table, sp.bound) * z1 ** j * z2 ** (m - j - s)
    assert conv.kernel.poly == sp.normalize(want)


def test_flip_convolution_matches_diagonal():
    assert flip_convolution_check(2, 2).status == "pass"
    assert flip_convolution_check(3, 0).status == "pass"


@pytest.mark.parametrize("r,i", [(1, 0), (1, 1), (2, 0)])
def test_virtual_flip_sign(r, i):
    item = virtual_flip_check(r, i)
    assert item.status == "pass"
    assert item.sign == (-1) ** r


@pytest.mark.parametrize("r,sign", [(2, -1), (3, 1), (4, -1)])
def test_cayley_sign_is_reported(r, sign):
    item = cayley_gamma_check(r)
    assert item.status == "pass"
    assert item.sign == sign
    assert item.flags == {"equals_(-1)^(r-1)_Id": True, "equals_(-1)^r_Id": False}


def test_convolve_rejects_leg_mismatch():
    pt = Point("pt")
    d2 = diagonal_class(pt, trivial(2, pt.table, pt.bound), ("a", "b"))
    d3 = diagonal_class(pt, trivial(3, pt.table, pt.bound), ("b", "c"))
    with pytest.raises(UsageError, match="leg mismatch"):
        convolve(d2, d3)


def test_convolve_rejects_shared_outer_names():
    pt = Point("pt")
    d = diagonal_class(pt, trivial(2, pt.table, pt.bound), ("a", "b"))
    with pytest.raises(UsageError):
        convolve(d, d.transpose())


@pytest.mark.parametrize("m", [0, 1, 2])
def test_diagonal_composed_with_itself(m):
    base = FormalBase(m + 2, [("E", m + 1)])
    e = base.bundle("E")
    d1 = diagonal_class(base, e, ("a", "b"))
    d2 = diagonal_class(base, e, ("b", "c"))
    assert kernels_equal(convolve(d1, d2), diagonal_class(base, e, ("a", "c")))


def test_renamed_kernel_keeps_polynomial():
    pt = Point("pt")
    d = diagonal_class(pt, trivial(3, pt.table, pt.bound), ("a", "b")).renamed("x", "y")
    assert str(d.kernel) == "y^2 + x*y + x^2"


def test_correspondence_needs_two_distinct_legs():
    prod = _point_product(2, 2)
    with pytest.raises(UsageError):
        Correspondence(prod, "w1", "w1", prod.cls(_var(prod.space, "w1")))


def test_associativity_and_unit_checks():
    assert convolution_associativity_check(1, 2, 2, 2).status == "pass"
    assert diagonal_unit_check(2, 3).status == "pass"


def test_cayley_summands():
    x, z = projective_space(3), Point("Z")
    model = build_decomposition_model("cayley", {"X": x, "Z": z, "r": 2})
    assert model.summary() == [("X", 0), ("Z", 1)]


def test_flip_summands():
    model = build_decomposition_model("flip", {"X_prime": Point("X'"), "S": Point("S"), "n": 2, "m": 1})
    assert model.summary() == [("X'", 0), ("S", 2)]


def test_projectivization_matches_point_blowup():
    model = build_decomposition_model("projectivization", {"X": projective_space(2), "K": Point("pt"), "r": 1})
    assert model.summary() == [("X", 0), ("P(K)", 1)]
    ok, got, want = rank_generating_check(model, blowup_point(2))
    assert ok and got == want == [1, 2, 1]
    assert poly_str(got) == "1 + 2t + t^2"


def test_proj_bundle_rank_function():
    # P(E) of rank 3 over P^1: (1 + t)(1 + t + t^2)
    line = projective_space(1)
    model = build_decomposition_model("proj_bundle", {"X": line, "r": 3})
    assert model.rank_function() == [1, 2, 2, 1]
    bundle = ProjBundle(line, split_bundle(line, [0, 1, 3]), var="z")
    assert rank_generating_check(model, bundle)[0]


def test_unknown_model_kind_and_missing_parameter():
    with pytest.raises(UsageError, match="unknown decomposition kind"):
        build_decomposition_model("surgery", {})
    with pytest.raises(UsageError, match="missing"):
        build_decomposition_model("blowup", {"X": Point("pt")})
