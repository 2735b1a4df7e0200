"""Exact coefficient fields: QQ, QQ(i), GF(p) and simple extensions QQ[t]/(m).

Every field is described by a :class:`FieldSpec`.  Arithmetic on the raw
payloads lives on the spec (``K.add(a, b)`` and friends) so that polynomial and
matrix code can work without allocating wrapper objects; :class:`FieldElement`
is the immutable public wrapper.

Payloads:

* QQ            -- ``gmpy2.mpq``
* QQ(i)         -- ``(re, im)`` pair of ``mpq``
* GF(p)         -- ``int`` in ``[0, p)``
* QQ[t]/(m)     -- tuple of ``mpq`` of length ``deg m`` (low degree first)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpq, mpz


class FieldError(ValueError):
    """Mixed-field operands or an operation the field does not support."""


class ZeroDivisorError(ZeroDivisionError):
    """A non-invertible nonzero element was met in an extension (reducible modulus)."""


class ReconstructionError(ArithmeticError):
    """Rational reconstruction found no fraction inside the bound."""


QQ_KIND = "QQ"
QQI_KIND = "QQi"
GF_KIND = "GF"
EXT_KIND = "ext"


def to_mpq(x) -> mpq:
    """Coerce an int / Fraction / mpq / 'a/b' string into an mpq."""
    if isinstance(x, type(mpq())):
        return x
    if isinstance(x, (int, type(mpz()))):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(Fraction(x).numerator, Fraction(x).denominator)
    raise FieldError(f"cannot interpret {x!r} as a rational number")


def _fmt_q(q: mpq) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# univariate helpers over QQ for the extension fields (coefficient lists, low first)


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _upoly_divmod(a: list, b: list) -> tuple[list, list]:
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [mpq(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        k = len(a) - len(b)
        q[k] = c
        for j, bj in enumerate(b):
            a[k + j] -= c * bj
        _trim(a)
    return _trim(q), a


def _upoly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _trim(out)


def _upoly_sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([mpq(x) for x in out])


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """Description of one coefficient field.

    Build instances with :func:`QQ`, :func:`QQi`, :func:`GF` or :func:`extension`.
    """

    kind: str
    p: int | None = None
    modulus: tuple | None = None  # mpq coefficients, low degree first, monic
    name_t: str = "t"

    # -- construction helpers -------------------------------------------------

    def __post_init__(self):
        if self.kind == GF_KIND:
            if self.p is None or self.p < 2 or not gmpy2.is_prime(self.p):
                raise FieldError(f"GF characteristic must be prime, got {self.p}")
        elif self.kind == EXT_KIND:
            if self.modulus is None or len(self.modulus) < 2:
                raise FieldError("extension modulus must be non-constant")
            if self.modulus[-1] != 1:
                raise FieldError("extension modulus must be stored monic")
        elif self.kind not in (QQ_KIND, QQI_KIND):
            raise FieldError(f"unknown field kind {self.kind!r}")

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == GF_KIND else 0

    @property
    def degree(self) -> int:
        """Degree of the extension over its prime field (1 for QQ and GF(p))."""
        if self.kind == EXT_KIND:
            return len(self.modulus) - 1
        return 2 if self.kind == QQI_KIND else 1

    def __str__(self) -> str:
        if self.kind == GF_KIND:
            return f"GF {self.p}"
        if self.kind == EXT_KIND:
            terms = []
            for k in range(len(self.modulus) - 1, -1, -1):
                c = self.modulus[k]
                if c == 0:
                    continue
                mono = "" if k == 0 else (self.name_t if k == 1 else f"{self.name_t}^{k}")
                terms.append((c, mono))
            return f"QQ[{self.name_t}]/({_format_linear_combination(terms)})"
        return self.kind

    # -- raw arithmetic --------------------------------------------------------

    @cached_property
    def zero(self):
        return self.from_int(0)

    @cached_property
    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        k = self.kind
        if k == QQ_KIND:
            return mpq(n)
        if k == QQI_KIND:
            return (mpq(n), mpq(0))
        if k == GF_KIND:
            return int(n) % self.p
        return (mpq(n),) + (mpq(0),) * (self.degree - 1)

    def from_rational(self, q):
        q = to_mpq(q)
        k = self.kind
        if k == QQ_KIND:
            return q
        if k == QQI_KIND:
            return (q, mpq(0))
        if k == GF_KIND:
            return reduce_rational(q, self.p)
        return (q,) + (mpq(0),) * (self.degree - 1)

    def imaginary_unit(self):
        if self.kind != QQI_KIND:
            raise FieldError(f"'i' is not an element of {self}")
        return (mpq(0), mpq(1))

    def generator(self):
        if self.kind != EXT_KIND:
            raise FieldError(f"'{self.name_t}' is not an element of {self}")
        if self.degree == 1:
            return (-self.modulus[0],)
        return (mpq(0), mpq(1)) + (mpq(0),) * (self.degree - 2)

    def is_zero(self, a) -> bool:
        k = self.kind
        if k == QQ_KIND or k == GF_KIND:
            return a == 0
        return all(x == 0 for x in a)

    def add(self, a, b):
        k = self.kind
        if k == QQ_KIND:
            return a + b
        if k == GF_KIND:
            return (a + b) % self.p
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        k = self.kind
        if k == QQ_KIND:
            return a - b
        if k == GF_KIND:
            return (a - b) % self.p
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        k = self.kind
        if k == QQ_KIND:
            return -a
        if k == GF_KIND:
            return (-a) % self.p
        return tuple(-x for x in a)

    def mul(self, a, b):
        k = self.kind
        if k == QQ_KIND:
            return a * b
        if k == GF_KIND:
            return (a * b) % self.p
        if k == QQI_KIND:
            return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])
        return self._ext_reduce(_upoly_mul(a, b))

    def _ext_reduce(self, c: list):
        m = self.modulus
        d = len(m) - 1
        c = list(c)
        for k in range(len(c) - 1, d - 1, -1):
            ck = c[k]
            if ck == 0:
                continue
            for j in range(d):
                c[k - d + j] -= ck * m[j]
            c[k] = mpq(0)
        c = c[:d] + [mpq(0)] * (d - len(c))
        return tuple(mpq(x) for x in c)

    def inv(self, a):
        k = self.kind
        if self.is_zero(a):
            raise ZeroDivisionError(f"division by zero in {self}")
        if k == QQ_KIND:
            return 1 / a
        if k == GF_KIND:
            return pow(a, -1, self.p)
        if k == QQI_KIND:
            n = a[0] * a[0] + a[1] * a[1]
            return (a[0] / n, -a[1] / n)
        return self._ext_inverse(a)

    def _ext_inverse(self, a):
        # extended Euclid: s*a + u*m = g; a is invertible iff g is a constant
        r0, r1 = list(self.modulus), _trim([mpq(x) for x in a])
        s0, s1 = [], [mpq(1)]
        while r1:
            q, r = _upoly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _upoly_sub(s0, _upoly_mul(q, s1))
        if len(r0) != 1:
            raise ZeroDivisorError(
                f"{self.to_str(a)} is a zero divisor modulo {self}; the modulus is reducible"
            )
        c = r0[0]
        inv = [x / c for x in s0]
        return self._ext_reduce(inv)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        k = self.kind
        if k == QQ_KIND:
            return a**e
        if k == GF_KIND:
            return pow(a, e, self.p)
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def conj(self, a):
        if self.kind != QQI_KIND:
            raise FieldError("conjugation is only defined on QQ(i)")
        return (a[0], -a[1])

    def eq(self, a, b) -> bool:
        return a == b

    def is_rational(self, a) -> bool:
        """True iff ``a`` lies in the prime field (QQ or GF(p))."""
        k = self.kind
        if k == QQ_KIND or k == GF_KIND:
            return True
        return all(x == 0 for x in a[1:])

    def rational_part(self, a) -> mpq:
        if self.kind in (QQ_KIND, GF_KIND):
            return a
        if not self.is_rational(a):
            raise FieldError(f"{self.to_str(a)} is not rational")
        return a[0]

    def coerce(self, a, source: "FieldSpec"):
        """Map a raw value of ``source`` into this field (QQ embeds everywhere)."""
        if source == self:
            return a
        if source.kind == QQ_KIND:
            return self.from_rational(a)
        if source.kind == GF_KIND and self.kind == GF_KIND and source.p == self.p:
            return a
        raise FieldError(f"no embedding {source} -> {self}")

    def denominator(self, a) -> int:
        """Common denominator of the rational parts of ``a`` (1 over GF(p))."""
        k = self.kind
        if k == GF_KIND:
            return 1
        if k == QQ_KIND:
            return int(a.denominator)
        d = 1
        for x in a:
            d = gmpy2.lcm(d, x.denominator)
        return int(d)

    # -- printing ---------------------------------------------------------------

    def to_str(self, a) -> str:
        """Expression for ``a`` in the polynomial grammar (may start with '-')."""
        k = self.kind
        if k == QQ_KIND:
            return _fmt_q(a)
        if k == GF_KIND:
            return str(a)
        if k == QQI_KIND:
            terms = [(a[0], ""), (a[1], "i")]
        else:
            terms = [(a[j], "" if j == 0 else (self.name_t if j == 1 else f"{self.name_t}^{j}")) for j in range(len(a) - 1, -1, -1)]
        terms = [(c, m) for c, m in terms if c != 0]
        if not terms:
            return "0"
        return _format_linear_combination(terms)

    def needs_parentheses(self, a) -> bool:
        """Whether ``a`` prints as a sum (so must be bracketed inside a product)."""
        if self.kind in (QQ_KIND, GF_KIND):
            return False
        return sum(1 for x in a if x != 0) > 1

    def element(self, value) -> "FieldElement":
        return FieldElement(self, value)

    def __call__(self, value) -> "FieldElement":
        """Build an element from an int / rational / raw payload."""
        if isinstance(value, FieldElement):
            return FieldElement(self, self.coerce(value.value, value.field))
        if isinstance(value, tuple):
            return FieldElement(self, tuple(to_mpq(x) for x in value))
        return FieldElement(self, self.from_rational(value))


def _format_linear_combination(terms) -> str:
    out = []
    for idx, (c, mono) in enumerate(terms):
        c = to_mpq(c)
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if mono == "":
            body = _fmt_q(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_q(mag)}*{mono}"
        if idx == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def QQ() -> FieldSpec:
    return FieldSpec(QQ_KIND)


def QQi() -> FieldSpec:
    return FieldSpec(QQI_KIND)


def GF(p: int) -> FieldSpec:
    return FieldSpec(GF_KIND, p=int(p))


def extension(modulus: Iterable, name: str = "t") -> FieldSpec:
    """QQ[t]/(m(t)) with ``modulus`` given low degree first.

    The modulus is made monic.  Irreducibility is not checked; inverting a zero
    divisor raises :class:`ZeroDivisorError`.
    """
    m = _trim([to_mpq(c) for c in modulus])
    if len(m) < 2:
        raise FieldError("extension modulus must be non-constant")
    lead = m[-1]
    return FieldSpec(EXT_KIND, modulus=tuple(c / lead for c in m), name_t=name)


class FieldElement:
    """Immutable element of one of the supported fields."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, key, value):
        raise AttributeError("FieldElement is immutable")

    def _other(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"mixed-field operands: {self.field} and {other.field}")
            return other
        if isinstance(other, (int, Fraction)) or isinstance(other, type(mpq())):
            return FieldElement(self.field, self.field.from_rational(other))
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.add(self.value, o.value))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(self.value, o.value))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(o.value, self.value))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(self.value, o.value))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.div(self.value, o.value))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.div(o.value, self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def invert(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def conjugate(self) -> "FieldElement":
        return FieldElement(self.field, self.field.conj(self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        o = self._other(other)
        if o is NotImplemented:
            return False
        return self.value == o.value

    def __hash__(self) -> int:
        return hash((self.field.kind, self.field.p, self.value))

    def __str__(self) -> str:
        return self.field.to_str(self.value)

    def __repr__(self) -> str:
        return f"FieldElement({self.field}, {self})"


def arith(op: str, a: FieldElement, b: FieldElement) -> FieldElement:
    """``op`` is one of 'add', 'sub', 'mul'."""
    if a.field != b.field:
        raise FieldError(f"mixed-field operands: {a.field} and {b.field}")
    if op not in ("add", "sub", "mul"):
        raise ValueError(f"unknown operation {op!r}")
    return FieldElement(a.field, getattr(a.field, op)(a.value, b.value))


def invert(a: FieldElement) -> FieldElement:
    return a.invert()


# ---------------------------------------------------------------------------
# multi-modular helpers


def reduce_rational(q, p: int) -> int:
    """Image of the rational ``q`` in GF(p); raises if p divides the denominator."""
    q = to_mpq(q)
    den = int(q.denominator) % p
    if den == 0:
        raise FieldError(f"denominator of {_fmt_q(q)} vanishes modulo {p}")
    return int(q.numerator) * pow(den, -1, p) % p


def reduce_mod_prime(a: FieldElement, p: int) -> FieldElement:
    if a.field.kind != QQ_KIND:
        raise FieldError("reduce_mod_prime expects a rational element")
    return FieldElement(GF(p), reduce_rational(a.value, p))


def crt(residues: Sequence[tuple[int, int]]) -> tuple[int, int]:
    """Combine ``(r_i, m_i)`` with pairwise coprime moduli into ``(r, M)``."""
    r, m = 0, 1
    for ri, mi in residues:
        ri %= mi
        # r + m*k = ri (mod mi)
        k = ((ri - r) * pow(m, -1, mi)) % mi
        r += m * k
        m *= mi
    return r, m


def rational_reconstruction(r: int, m: int, bound: int | None = None) -> mpq:
    """The fraction a/b with ``a = r*b (mod m)`` and ``|a|, b <= bound``.

    ``bound`` defaults to ``isqrt(m // 2)``, the largest value that keeps the
    answer unique.
    """
    if bound is None:
        bound = gmpy2.isqrt(m // 2)
    r %= m
    if r <= bound:
        return mpq(r)
    r0, r1 = m, r
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        raise ReconstructionError(f"no fraction with numerator and denominator <= {bound}")
    if gmpy2.gcd(r1, s1) != 1:
        raise ReconstructionError("reconstructed fraction is not in lowest terms")
    return mpq(r1, s1)


def rational_reconstruct(residues: Sequence[tuple[int, int]]) -> FieldElement:
    """Recover a rational from residues modulo distinct primes (CRT + reconstruction)."""
    moduli = [m for _, m in residues]
    if len(set(moduli)) != len(moduli):
        raise FieldError("moduli must be pairwise distinct")
    r, m = crt(residues)
    return FieldElement(QQ(), rational_reconstruction(r, m))
