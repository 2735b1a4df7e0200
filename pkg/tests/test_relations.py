import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decic.catalog import Catalog
from decic.field import QQ, QQi
from decic.parse import parse
from decic.poly import Polynomial, Ring, proportional
from decic.linalg import DEFAULT_OPTIONS
from decic.relations import (
    RelationError,
    expands_to_zero,
    ideal_slice,
    in_span,
    membership,
    proportional_mod_ideal,
    relation_space,
    sym_indices,
    sym_products,
)
from oracles import brute_membership, relation_dimension, to_sympy

R2 = Ring(QQ(), ("x", "y"))
R3 = Ring(QQ(), ("x", "y", "z"))


def P(text, ring=R2):
    return parse(text, ring)


def test_conic_relation():
    space = relation_space([P("x^2"), P("x*y"), P("y^2")], 2)
    assert space.dimension == 1
    rel = space.basis[0]
    assert rel.ring.variables == ("u0", "u1", "u2")
    assert proportional(rel, parse("u0*u2 - u1^2", rel.ring)) is not None
    assert expands_to_zero(rel, [P("x^2"), P("x*y"), P("y^2")])


def test_independent_forms_have_no_relations():
    for n in (1, 2, 3):
        assert relation_space([P("x"), P("y")], n).dimension == 0


def test_relation_degree_validation():
    with pytest.raises(RelationError):
        relation_space([P("x")], 0)
    with pytest.raises(RelationError):
        relation_space([P("x"), parse("x", R3)], 1)
    with pytest.raises(RelationError):
        relation_space([parse("x + i", Ring(QQi(), ("x",)))], 1)


def test_sym_counts():
    assert len(sym_indices(6, 10)) == 3003
    assert len(sym_indices(5, 10)) == 1001
    assert len(sym_indices(6, 1)) == 6
    prods = sym_products([P("x"), P("y")], 3)
    assert [str(p) for _, p in prods] == ["x^3", "x^2*y", "x*y^2", "y^3"]


forms2 = st.lists(
    st.dictionaries(st.sampled_from([(2, 0), (1, 1), (0, 2)]), st.integers(-3, 3), min_size=1, max_size=3),
    min_size=2,
    max_size=4,
)


@settings(max_examples=25)
@given(forms2, st.integers(1, 3))
def test_relation_dimension_matches_sympy(dicts, n):
    polys = [Polynomial(R2, {e: QQ().from_rational(c) for e, c in d.items()}, _normalized=False) for d in dicts]
    if any(p.is_zero() for p in polys):
        return
    exprs = [to_sympy(p)[0] for p in polys]
    syms = to_sympy(polys[0])[1]
    expected, _ = relation_dimension(exprs, syms, n)
    space = relation_space(polys, n)
    assert space.dimension == expected
    for rel in space.basis:
        assert expands_to_zero(rel, polys)


def test_evaluation_and_coefficient_methods_agree():
    cat = Catalog()
    us = [cat.source[f"U{k}"] for k in range(5)] + [cat.source["U5_minus"]]
    for n in (1, 2):
        a = relation_space(us, n, method="evaluation")
        b = relation_space(us, n, method="coefficients")
        assert a.dimension == b.dimension == 0


def test_catalog_quadrics_against_sympy():
    cat = Catalog()
    us = [cat.source[f"U{k}"] for k in range(5)] + [cat.source["U5_minus"]]
    conv = [to_sympy(u) for u in us]
    expected, _ = relation_dimension([c[0] for c in conv], conv[0][1], 2)
    assert expected == 0
    assert relation_space(us, 2).dimension == expected


def test_ideal_slice_dimensions():
    x, y, z = R3.gens()
    assert len(ideal_slice([x, y], 2)) == 5
    assert len(ideal_slice([x * y, x * z], 3)) == 5
    assert ideal_slice([], 3) == []
    with pytest.raises(RelationError):
        ideal_slice([x + 1], 2)


def test_membership_examples():
    x, y, z = R3.gens()
    cert = membership(x * y + y * z, [x, z])
    assert cert is not None and cert.verify()
    assert membership(y**2, [x, z]) is None
    cert = membership(x**3 + y**3, [x + y, x**2 - x * y + y**2])
    assert cert is not None and cert.verify()
    zero = membership(R3.zero(), [x])
    assert zero.verify()
    with pytest.raises(RelationError):
        membership(x**3, [x], bound=2)


def test_membership_over_gaussian_rationals():
    Ri = Ring(QQi(), ("x", "y"))
    f = parse("x^2 + y^2", Ri)
    assert membership(f, [parse("x + i*y", Ri)]) is not None
    assert membership(f, [parse("x + y", Ri)]) is None


small_polys = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(-3, 3), min_size=1, max_size=4
).map(lambda d: Polynomial(R2, {e: QQ().from_rational(c) for e, c in d.items()}, _normalized=False))


@settings(max_examples=25)
@given(st.lists(small_polys, min_size=1, max_size=2), st.lists(small_polys, min_size=1, max_size=2), st.booleans())
def test_membership_matches_brute_force(gens, cofs, perturb):
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return
    f = sum((c * g for c, g in zip(cofs, gens)), R2.zero())
    if perturb:
        f = f + P("x*y + 1")
    bound = max([f.total_degree(), 0] + [c.total_degree() + g.total_degree() for c, g in zip(cofs, gens) if not c.is_zero()])
    syms = to_sympy(gens[0])[1]
    expected = brute_membership(to_sympy(f, syms)[0] if not f.is_zero() else 0, [to_sympy(g, syms)[0] for g in gens], syms, bound)
    cert = membership(f, gens, bound)
    assert (cert is not None) == expected
    if cert is not None:
        assert cert.verify()


def test_proportional_mod_ideal_examples():
    x, y, z = R3.gens()
    f = x**2 * 3 + x * z
    g = x**2
    res = proportional_mod_ideal(f, g, [z])
    assert res is not None
    c, cert = res
    assert c == QQ()(3) and cert.verify()
    assert proportional_mod_ideal(y**2, x**2, [z]) is None


def test_in_span():
    x, y, z = R3.gens()
    assert in_span(x + y * 2, [x, y], DEFAULT_OPTIONS)
    assert not in_span(z, [x, y], DEFAULT_OPTIONS)
    assert in_span(R3.zero(), [], DEFAULT_OPTIONS)
    assert not in_span(x, [], DEFAULT_OPTIONS)
