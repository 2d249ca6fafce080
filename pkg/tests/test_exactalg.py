"""Z[v, 1/v] arithmetic, content splitting and exact kernels."""

import pytest
from hypothesis import given, strategies as st

from complexaj.exactalg import ExactMatrix, VLaurent, exact_kernel, vl_content_unit, vl_eval_one, vl_gcd

v = VLaurent.v()

laurents = st.dictionaries(st.integers(-5, 5), st.integers(-9, 9), max_size=5).map(VLaurent)


def test_additive_inverse():
    assert (v**2 - 1) + (1 - v**2) == VLaurent()


def test_difference_of_squares():
    assert (v - 1) * (v + 1) == v**2 - 1


def test_hand_expansion():
    assert (2 * v + 4) * (3 * v**-1) == 6 + 12 * v**-1


@pytest.mark.parametrize("p, expected", [(v**9, 1), (v**2 - 1, 0), (3 * v**-2 + 2 * v + 5, 10)])
def test_eval_one(p, expected):
    assert vl_eval_one(p) == expected


def test_content_unit():
    cont, unit, prim = vl_content_unit(-6 * v**3 - 6 * v**5)
    assert (cont, unit, prim) == (6, -(v**3), 1 + v**2)
    assert vl_content_unit(v) == (1, v, VLaurent.const(1))
    assert vl_content_unit(VLaurent.const(7)) == (7, VLaurent.const(1), VLaurent.const(1))


def test_content_of_zero_raises():
    with pytest.raises(ValueError, match="zero polynomial"):
        vl_content_unit(VLaurent())


def test_kernel_single_relation():
    (col,) = exact_kernel(ExactMatrix([[v, -1]]))
    assert all(x.is_zero() for x in ExactMatrix([[v, -1]]).apply(col))
    assert col[1] == col[0] * v


def test_kernel_identity_is_empty():
    assert exact_kernel(ExactMatrix([[1, 0], [0, 1]])) == []


def test_kernel_two_by_three():
    M = ExactMatrix([[1, 1, 0], [0, v, v]])
    basis = exact_kernel(M)
    assert len(basis) == 1
    assert all(x.is_zero() for x in M.apply(basis[0]))


@given(laurents, laurents, laurents)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(laurents, laurents)
def test_eval_one_is_a_homomorphism(a, b):
    assert vl_eval_one(a * b) == vl_eval_one(a) * vl_eval_one(b)


@given(laurents, laurents)
def test_gcd_divides(a, b):
    if a.is_zero() or b.is_zero():
        return
    g = vl_gcd(a, b)
    assert (a * b).exquo(g) * g == a * b
    assert a.exquo(g) * g == a


@given(laurents)
def test_json_round_trip(a):
    assert VLaurent.from_json(a.to_json()) == a
