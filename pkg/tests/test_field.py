from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from decic.field import (
    GF,
    QQ,
    FieldError,
    QQi,
    ReconstructionError,
    ZeroDivisorError,
    arith,
    crt,
    extension,
    invert,
    rational_reconstruct,
    rational_reconstruction,
    reduce_mod_prime,
)

fractions = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 10**6)
SQRT5 = extension([-5, 0, 1])
CUBIC = extension([-2, 0, 0, 1])  # t^3 - 2, irreducible


def elements(K):
    if K.kind == "QQ":
        return fractions.map(K)
    if K.kind == "GF":
        return st.integers(0, K.p - 1).map(K)
    if K.kind == "QQi":
        return st.tuples(fractions, fractions).map(K)
    return st.lists(fractions, min_size=K.degree, max_size=K.degree).map(lambda xs: K(tuple(xs)))


FIELDS = [QQ(), QQi(), GF(101), SQRT5, CUBIC]


@pytest.mark.parametrize("K", FIELDS, ids=str)
@given(data=st.data())
def test_field_axioms(K, data):
    a, b, c = (data.draw(elements(K)) for _ in range(3))
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + K(0) == a and a * K(1) == a
    assert a - a == K(0)
    if not a.is_zero():
        assert a * invert(a) == K(1)
        assert (b / a) * a == b


def test_arith_examples():
    K = QQ()
    assert arith("add", K(Fraction(1, 2)), K(Fraction(1, 3))) == K(Fraction(5, 6))
    Ki = QQi()
    assert arith("mul", Ki((1, 1)), Ki((1, -1))) == Ki(2)
    t = SQRT5((0, 1))
    assert t * t == SQRT5(5)


def test_invert_examples():
    assert invert(QQ()(Fraction(2, 3))) == QQ()(Fraction(3, 2))
    Ki = QQi()
    assert invert(Ki((0, 1))) == Ki((0, -1))
    t = SQRT5((0, 1))
    assert invert(t) == SQRT5((0, Fraction(1, 5)))
    with pytest.raises(ZeroDivisionError):
        invert(QQ()(0))


def test_zero_divisor_in_reducible_extension():
    K = extension([-1, 0, 1])  # t^2 - 1 = (t-1)(t+1)
    with pytest.raises(ZeroDivisorError):
        invert(K((-1, 1)))


def test_reduce_mod_prime_examples():
    K = QQ()
    assert reduce_mod_prime(K(Fraction(5, 6)), 7).value == 2
    assert reduce_mod_prime(K(-1), 7).value == 6
    with pytest.raises(FieldError):
        reduce_mod_prime(K(Fraction(1, 2)), 2)


def test_rational_reconstruct_examples():
    primes = [10007, 10009, 10037]
    q = QQ()(Fraction(5, 6))
    residues = [(reduce_mod_prime(q, p).value, p) for p in primes]
    assert rational_reconstruct(residues) == q
    assert rational_reconstruct([(0, p) for p in primes]) == QQ()(0)
    with pytest.raises(ReconstructionError):
        rational_reconstruct([(3, 5)])
    with pytest.raises(FieldError):
        rational_reconstruct([(1, 7), (1, 7)])


@given(st.fractions(max_denominator=10**6).filter(lambda q: abs(q.numerator) < 10**6))
def test_reconstruction_round_trip(q):
    primes = [1000003, 1000033, 1000037, 1000039]
    residues = [(reduce_mod_prime(QQ()(q), p).value, p) for p in primes]
    assert rational_reconstruct(residues) == QQ()(q)


def test_crt_and_bound():
    r, m = crt([(2, 3), (3, 5), (2, 7)])
    assert (r, m) == (23, 105)
    # 2/3 is 668 mod 1001
    assert rational_reconstruction(668, 1001) == Fraction(2, 3)
    with pytest.raises(ReconstructionError):
        rational_reconstruction(23, 105)


def test_mixed_fields_rejected():
    with pytest.raises(FieldError):
        QQ()(1) + QQi()(1)


def test_printing():
    assert str(QQi()((Fraction(1, 2), -3))) == "1/2 - 3*i"
    assert str(SQRT5((0, Fraction(1, 5)))) == "1/5*t"
    assert str(GF(7)(10)) == "3"
