"""Normal-ordered q-Weyl arithmetic."""

from hypothesis import given, settings, strategies as st

from complexaj.exactalg import VLaurent
from complexaj.qweyl import NCPoly, nc_classical_limit, nc_parse, nc_substitute_ly

mx, lx, my, ly = (NCPoly.gen(g) for g in ("mx", "lx", "my", "ly"))
q = nc_parse("q")

monos = st.tuples(*[st.integers(-2, 2)] * 4)
coefs = st.integers(-3, 3).map(VLaurent.const)
polys = st.dictionaries(monos, coefs, max_size=4).map(NCPoly)


def test_commutation():
    assert lx * mx == q * mx * lx
    assert ly * my == q * my * ly
    assert lx * my == my * lx


def test_commutation_twice():
    assert lx * mx * mx == q * q * mx * mx * lx


def test_hand_normal_ordering():
    assert (mx + lx) * (mx - lx) == mx * mx + (q - 1) * mx * lx - lx * lx


def test_parse_matches_construction():
    assert nc_parse("(mx+lx)*(mx-lx)") == (mx + lx) * (mx - lx)
    assert nc_parse("q^(1/2)*mx").coefficient((1, 0, 0, 0)) == VLaurent.v()


def test_substitute_ly():
    assert nc_substitute_ly(mx * ly * ly + lx) == mx + lx


def test_classical_limit_commutes():
    assert nc_classical_limit(lx * mx) == nc_classical_limit(mx * lx)


@settings(max_examples=60)
@given(polys, polys, polys)
def test_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(polys, polys, polys)
def test_distributive(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(polys)
def test_json_and_text_round_trip(a):
    assert NCPoly.from_json(a.to_json()) == a
    assert nc_parse(str(a)) == a
