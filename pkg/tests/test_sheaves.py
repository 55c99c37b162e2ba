import pytest
from hypothesis import given, strategies as st

from chowcalc.errors import UsageError
from chowcalc.polyring import GradedPolynomial, VariableTable
from chowcalc.sheaves import (
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

BOUND = 6
TABLE = VariableTable([("a", 1), ("b", 1)] + [(f"e{i}", i) for i in range(1, 4)])


def v(name):
    return GradedPolynomial.var(TABLE, name, BOUND)


def generic(rank=3):
    total = 1 + sum((v(f"e{i}") for i in range(1, rank + 1)), GradedPolynomial.zero(TABLE, BOUND))
    return SheafClass(rank, total)


linear = st.tuples(st.integers(-3, 3), st.integers(-3, 3)).map(lambda ab: v("a").scale(ab[0]) + v("b").scale(ab[1]))


def test_chern_needs_unit_constant():
    with pytest.raises(UsageError):
        SheafClass(1, GradedPolynomial.constant(TABLE, BOUND, 2))


def test_line_needs_codim_one():
    with pytest.raises(UsageError):
        line(v("e2"))


def test_quotient_rank_underflow():
    with pytest.raises(UsageError):
        quotient(line(v("a")), generic(2))


def test_whitney_for_two_lines():
    s = direct_sum(line(v("a")), line(v("b")))
    assert s.rank == 2
    assert s.c(1) == v("a") + v("b")
    assert s.c(2) == v("a") * v("b")


def test_dual_flips_odd_classes():
    d = dual(generic())
    assert d.c(1) == -v("e1")
    assert d.c(2) == v("e2")
    assert d.c(3) == -v("e3")


def test_segre_is_inverse_of_chern():
    e = generic()
    assert segre(e) * e.chern == 1
    assert segre(e).homogeneous(1) == -v("e1")
    assert segre(e).homogeneous(2) == v("e1") ** 2 - v("e2")
    assert segre(dual(e)).homogeneous(3) == v("e1") ** 3 - 2 * v("e1") * v("e2") + v("e3")


def test_segre_of_a_line_is_a_geometric_series():
    s = segre(line(v("a")))
    assert [s.homogeneous(k) for k in range(4)] == [1, -v("a"), v("a") ** 2, -v("a") ** 3]


def test_quotient_undoes_direct_sum():
    e = generic()
    q = quotient(direct_sum(e, line(v("a"))), line(v("a")))
    assert q == e


@given(linear, linear)
def test_tensor_line_composes(x, y):
    e = generic()
    assert tensor_line(tensor_line(e, x), y) == tensor_line(e, x + y)


@given(linear, linear)
def test_tensor_line_on_a_line(x, y):
    assert tensor_line(line(x), y) == line(x + y)


@given(linear)
def test_tensor_line_distributes_over_sums(x):
    e, f = generic(2), line(v("b"))
    assert tensor_line(direct_sum(e, f), x) == direct_sum(tensor_line(e, x), tensor_line(f, x))


@given(linear, st.integers(0, 3))
def test_twisted_chern_matches_total_class(x, k):
    e = generic()
    assert twisted_chern(e, x, k) == tensor_line(e, x).c(k)


def test_tensor_line_of_trivial_is_power_of_line():
    x = v("a")
    t = tensor_line(trivial(3, TABLE, BOUND), x)
    assert t.chern == (1 + x) ** 3


def test_cotangent_twist_rank_two():
    e = generic(2)
    z = v("a")
    assert cotangent_twist_chern(e, 1, z) == v("e1") - z


def test_cotangent_twist_index_range():
    with pytest.raises(UsageError):
        cotangent_twist_chern(generic(2), 2, v("a"))
