import pytest
from hypothesis import given, strategies as st

from chowcalc.errors import UsageError
from chowcalc.polyring import (
    GradedPolynomial,
    VariableTable,
    apply_map,
    generalized_binomial,
    invert_unit_series,
    monomials_of_weight,
    retable,
)

TABLE = VariableTable([("x", 1), ("y", 1), ("c2", 2)])
BOUND = 5


@st.composite
def polys(draw, table=TABLE, bound=BOUND, unit=False):
    terms = {}
    for _ in range(draw(st.integers(0, 6))):
        exps = tuple(draw(st.integers(0, 3)) for _ in table.names)
        terms[exps] = draw(st.integers(-4, 4))
    p = GradedPolynomial(table, terms, bound)
    if unit:
        p = p - p.constant_term() + draw(st.sampled_from([1, -1]))
    return p


def var(name, bound=BOUND, table=TABLE):
    return GradedPolynomial.var(table, name, bound)


def test_product_truncates_at_bound():
    t = VariableTable([("x", 1)])
    x2 = GradedPolynomial.var(t, "x", 2)
    assert (1 + x2) * (1 - x2) == 1 - x2 * x2
    x1 = GradedPolynomial.var(t, "x", 1)
    assert (1 + x1) * (1 - x1) == GradedPolynomial.one(t, 1)


def test_inverse_of_one_plus_x():
    t = VariableTable([("x", 1)])
    x = GradedPolynomial.var(t, "x", 3)
    assert invert_unit_series(1 + x) == 1 - x + x ** 2 - x ** 3


def test_inverse_of_chern_polynomial():
    t = VariableTable([("c1", 1), ("c2", 2)])
    c1, c2 = (GradedPolynomial.var(t, n, 2) for n in ("c1", "c2"))
    assert invert_unit_series(1 - c1 + c2) == 1 + c1 - c2 + c1 ** 2


def test_inverse_rejects_non_unit():
    with pytest.raises(UsageError):
        invert_unit_series(2 + var("x"))


def test_apply_map_sends_chern_monomial_to_power():
    src = VariableTable([("c1", 1), ("c2", 2)])
    tgt = VariableTable([("h", 1)])
    h = GradedPolynomial.var(tgt, "h", 3)
    p = GradedPolynomial.var(src, "c1", 3) * GradedPolynomial.var(src, "c2", 3)
    assert apply_map(p, {"c1": h, "c2": h * h}) == h ** 3


def test_apply_map_checks_homogeneity():
    src = VariableTable([("c2", 2)])
    tgt = VariableTable([("h", 1)])
    h = GradedPolynomial.var(tgt, "h", 3)
    with pytest.raises(UsageError):
        apply_map(GradedPolynomial.var(src, "c2", 3), {"c2": h})


def test_str_is_graded():
    t = VariableTable([("c1", 1), ("c2", 2)])
    p = 1 + GradedPolynomial.var(t, "c1", 2) - GradedPolynomial.var(t, "c2", 2) + GradedPolynomial.var(t, "c1", 2, 2)
    assert str(p) == "1 + c1 - c2 + c1^2"


def test_generalized_binomial_negative_top():
    assert generalized_binomial(-1, 3) == -1
    assert generalized_binomial(-2, 2) == 3
    assert generalized_binomial(3, 5) == 0


def test_monomials_of_weight_counts():
    t = VariableTable([("a", 1), ("b", 2), ("c", 3)])
    assert len(monomials_of_weight(t, 3)) == 3
    assert len(monomials_of_weight(t, 6)) == 7


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == GradedPolynomial.zero(TABLE, BOUND)


@given(polys(), polys(), st.integers(0, BOUND))
def test_truncation_commutes_with_product(a, b, k):
    assert (a * b).truncate(k) == a.truncate(k) * b.truncate(k)


@given(polys(unit=True))
def test_double_inverse(p):
    inv = invert_unit_series(p)
    assert p * inv == GradedPolynomial.one(TABLE, BOUND)
    assert invert_unit_series(inv) == p


@given(polys(), polys())
def test_apply_map_is_a_ring_map(a, b):
    tgt = VariableTable([("u", 1), ("v", 1)])
    u, v = (GradedPolynomial.var(tgt, n, BOUND) for n in "uv")
    images = {"x": u + v, "y": u - v, "c2": u * v}
    assert apply_map(a * b, images) == apply_map(a, images) * apply_map(b, images)
    assert apply_map(a + b, images) == apply_map(a, images) + apply_map(b, images)


@given(polys())
def test_homogeneous_parts_add_up(p):
    total = GradedPolynomial.zero(TABLE, BOUND)
    for w, part in p.components().items():
        assert part.is_homogeneous(w)
        total = total + part
    assert total == p


@given(polys())
def test_retable_round_trip(p):
    bigger = TABLE.extend([("z", 1)])
    assert retable(retable(p, bigger), TABLE) == p


@given(polys(), st.integers(0, 3))
def test_shift_by_is_multiplication(p, k):
    assert p.shift_by("x", k) == p * var("x") ** k


@given(polys())
def test_split_by_reassembles(p):
    total = GradedPolynomial.zero(TABLE, BOUND)
    for e, part in p.split_by("y").items():
        assert part.degree_in("y") == 0
        total = total + part * var("y") ** e
    assert total == p
