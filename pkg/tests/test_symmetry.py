import pytest
from hypothesis import given
from hypothesis import strategies as st

from decic.catalog import Catalog, base_points, fixed_point_sets, source_ring
from decic.field import QQ, QQi
from decic.linalg import identity
from decic.poly import Polynomial, monomials_of
from decic.symmetry import (
    ActionError,
    GroupElement,
    ProductPoint,
    act_on_point,
    action_matrix,
    all_elements,
    apply_action,
    compose,
    gstar,
    hstar,
    identity_spec,
    isotypic_slice,
    order_of,
    orbits,
    power,
    rho1,
    rho1_g,
    rho1_h,
    rho2,
    sigma,
)

G = source_ring()
K = QQi()
DEG1 = (1, 1, 1, 1)
SPECS = [gstar(), hstar(), sigma(), rho1_g(), rho1_h()]

elements = st.sampled_from(all_elements())
specs = st.sampled_from(SPECS)


@st.composite
def forms(draw, md=DEG1):
    mons = monomials_of(md, G)
    coeffs = draw(st.lists(st.integers(-3, 3), min_size=len(mons), max_size=len(mons)))
    return Polynomial(G, {e: K.from_rational(c) for e, c in zip(mons, coeffs)}, _normalized=False)


def test_group_structure():
    assert len(all_elements()) == 16
    g, h = GroupElement(1, 0), GroupElement(0, 1)
    assert g.order() == h.order() == 4
    # h g = g^3 h
    assert h * g == GroupElement(3, 0) * h
    assert str(g * h) == "g*h"


@given(elements, elements, elements)
def test_group_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert (a * a.inverse()).is_identity()


def test_lifting_orders():
    assert order_of(gstar()) == 4
    assert order_of(hstar()) == 4
    assert order_of(sigma()) == 2
    assert order_of(rho1_g()) == 4
    assert identity_spec(K).is_identity()


def test_identity_action_matrix():
    assert action_matrix(identity_spec(K), G, DEG1) == identity(16, K)
    assert action_matrix(identity_spec(K), G, (2, 2, 2, 2)) == identity(81, K)


@given(specs, specs, forms())
def test_composition_matches_operator_product(a, b, p):
    lhs = apply_action(compose(a, b), p)
    assert lhs == apply_action(a, apply_action(b, p))
    assert action_matrix(compose(a, b), G, DEG1) == action_matrix(a, G, DEG1) @ action_matrix(b, G, DEG1)


@given(specs, forms())
def test_action_matrix_matches_apply(spec, p):
    mons = monomials_of(DEG1, G)
    v = [p.terms.get(e, K.zero) for e in mons]
    img = action_matrix(spec, G, DEG1).mul_vec(v)
    assert Polynomial(G, {e: c for e, c in zip(mons, img)}, _normalized=False) == apply_action(spec, p)


@given(forms())
def test_power_of_order_is_identity(p):
    for spec in SPECS:
        assert apply_action(power(spec, order_of(spec)), p) == p


def test_apply_action_examples():
    x10, x20 = G.gen("x10"), G.gen("x20")
    s = sigma()
    assert apply_action(s, x10) == x10
    assert apply_action(s, G.gen("x30")) == G.gen("x31")
    # g* moves the first factor into the second
    img = apply_action(gstar(), x10)
    assert img in (x20, -x20)


def test_representations_are_homomorphisms_at_degree_one():
    mats = {w: action_matrix(rho1(w), G, DEG1) for w in all_elements()}
    for a in all_elements():
        for b in all_elements():
            assert mats[a] @ mats[b] == mats[a * b]


def test_rho2_at_degree_two_sample():
    md = (2, 2, 2, 2)
    g, h = GroupElement(1, 0), GroupElement(0, 1)
    for a, b in [(g, h), (h, g), (g * h, h * h)]:
        assert action_matrix(rho2(a), G, md) @ action_matrix(rho2(b), G, md) == action_matrix(rho2(a * b), G, md)


def test_isotypic_slice_examples():
    cat = Catalog()
    U4 = cat.source["U4"]
    full = isotypic_slice([], G, DEG1)
    assert len(full) == 16
    inv = isotypic_slice([(sigma(), 1)], G, DEG1)
    assert len(inv) == 8
    for p in inv:
        assert apply_action(sigma(), p) == p
    assert apply_action(sigma(), U4) == U4


def test_points_and_orbits():
    pts = base_points(K)
    assert len(pts) == 64
    part = orbits(pts)
    assert part.sizes == [16] * 4 and part.is_free()
    sets = fixed_point_sets(K)
    assert all(len(v) == 16 for v in sets.values())
    w = GroupElement(1, 1)
    for pt in pts[:8]:
        assert act_on_point(w.inverse(), act_on_point(w, pt)) == pt


def test_point_validation():
    with pytest.raises(ActionError):
        ProductPoint.make(QQ(), [(0, 0), (1, 0), (1, 0), (1, 0)])
    with pytest.raises(ActionError):
        ProductPoint.make(QQ(), [(1, 0)] * 3)
    p = ProductPoint.make(QQ(), [(2, 4), (0, 3), (1, 0), (1, 1)])
    assert str(p) == "((1:2),(0:1),(1:0),(1:1))"
    with pytest.raises(ActionError):
        orbits([ProductPoint.make(K, [(2, 4), (0, 3), (1, 0), (1, 1)])])
