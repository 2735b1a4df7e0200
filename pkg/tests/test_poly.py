from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from decic.catalog import Catalog, source_ring, target_ring
from decic.field import GF, QQ, QQi, extension
from decic.parse import ParseError, parse
from decic.poly import Polynomial, Ring, RingError, from_flint, monomials_of, monomials_of_degree, proportional, to_flint

R3 = Ring(QQ(), ("x", "y", "z"))
T = target_ring()


def polys(ring, max_terms=6, max_exp=3):
    K = ring.field
    if K.kind == "QQi":
        coeff = st.tuples(st.fractions(max_denominator=9), st.fractions(max_denominator=9)).map(lambda t: K(t).value)
    elif K.kind == "GF":
        coeff = st.integers(0, K.p - 1)
    elif K.kind == "EXT":
        coeff = st.lists(st.fractions(max_denominator=9), min_size=K.degree, max_size=K.degree).map(lambda xs: K(tuple(xs)).value)
    else:
        coeff = st.fractions(max_denominator=9).map(lambda q: K(q).value)
    exps = st.tuples(*[st.integers(0, max_exp)] * ring.nvars)
    return st.dictionaries(exps, coeff, max_size=max_terms).map(lambda d: Polynomial(ring, d, _normalized=False))


RINGS = [R3, Ring(QQi(), ("a", "b")), Ring(GF(13), ("a", "b")), Ring(extension([-5, 0, 1]), ("a", "b"))]


@pytest.mark.parametrize("ring", RINGS, ids=str)
@given(data=st.data())
def test_print_parse_round_trip(ring, data):
    p = data.draw(polys(ring))
    assert parse(str(p), ring) == p


@given(polys(R3), polys(R3), polys(R3))
def test_ring_laws(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == R3.zero()
    assert p * R3.zero() == R3.zero()


@given(polys(R3), polys(R3))
def test_flint_bridge_agrees(p, q):
    assert from_flint(to_flint(p) * to_flint(q), R3) == p * q


def test_parse_examples():
    G = source_ring()
    u4 = parse("4*x10*x11*x20*x21*x30*x31*x40*x41", G)
    assert u4 == Catalog().source["U4"]
    assert u4.multidegree == (2, 2, 2, 2)
    assert parse("x10 - x10", G).is_zero()
    assert parse("(x10+x11)^2", G) == parse("x10^2 + 2*x10*x11 + x11^2", G)


@pytest.mark.parametrize("text", ["", "x +", "(x", "x ^ y", "w", "1/0", "x $ y", "i"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text, R3)


def test_parse_names_and_units():
    x = R3.gen("x")
    assert parse("2*q^2", R3, {"q": x + 1}) == (x + 1) ** 2 * 2
    Ri = Ring(QQi(), ("x",))
    assert parse("(x + i)*(x - i)", Ri) == parse("x^2 + 1", Ri)
    Rt = Ring(extension([-5, 0, 1]), ("x",))
    assert parse("t^2", Rt) == Rt.constant(5)


def test_evaluate_and_partial():
    u0 = T.gen("u0")
    assert u0.evaluate([QQ()(v) for v in (1, 0, 0, 0, 0)]) == QQ()(1)
    assert (u0**2).partial("u0") == u0 * 2
    assert T.constant(7).partial("u0").is_zero()


def test_substitute():
    cat = Catalog()
    H2 = cat.target["H2"]
    u = T.gens()
    swapped = H2.substitute([u[0], u[1], u[3], u[2], u[4]])
    assert swapped == -H2
    assert H2.substitute(u) == H2
    with pytest.raises(RingError):
        H2.substitute({"u0": u[0]})


def test_proportional():
    u0, u1 = T.gen("u0"), T.gen("u1")
    assert proportional(u0 * 2, u0) == QQ()(2)
    assert proportional(u0, u1) is None
    assert proportional(T.zero(), T.zero()) == QQ()(1)
    assert proportional(T.zero(), u0) == QQ()(0)


def test_monomial_counts():
    G = source_ring()
    assert len(monomials_of((1, 1, 1, 1), G)) == 16
    assert len(monomials_of((2, 2, 2, 2), G)) == 81
    assert len(monomials_of((20, 20, 20, 20), G)) == 21**4
    assert len(monomials_of_degree(10, 5)) == 1001
    mons = monomials_of((1, 1, 1, 1), G)
    assert mons == sorted(mons, reverse=True)


def test_primitive_form():
    p = parse("-2/3*x^2 + 4/9*y", R3)
    prim = p.primitive()
    assert prim == parse("3*x^2 - 2*y", R3)
    assert proportional(p, prim) == QQ()(Fraction(-2, 9))


def test_catalog_constants_have_expected_degrees():
    cat = Catalog()
    for name in ("U0", "U1", "U2", "U3", "U4", "U5_minus", "U5_plus", "P"):
        assert cat.source[name].multidegree == (2, 2, 2, 2), name
    for name in ("F1", "F2"):
        assert cat.source[name].multidegree == (1, 1, 1, 1)
    degrees = {"H0": 1, "H1": 1, "H2": 1, "H3": 1, "H4": 1, "Q0": 2, "Q1": 2, "G0": 3, "G0_alt": 3, "G1": 3, "F0": 4, "f": 10}
    for name, d in degrees.items():
        p = cat.target[name]
        assert p.is_homogeneous() and p.total_degree() == d, name
    assert cat.target["G0"] == cat.target["G0_alt"]


def test_decic_blocks_swapped_layout_is_inhomogeneous():
    cat = Catalog()
    assert not cat.target["f_swapped"].is_homogeneous()
    assert sorted({sum(e) for e in cat.target["f_swapped"].terms}) == [8, 10, 12]
