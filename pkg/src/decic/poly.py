"""Sparse multivariate polynomials with an optional (P^1)^4 multigrading."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import gmpy2
from gmpy2 import mpq

from .field import QQ_KIND, FieldElement, FieldError, FieldSpec


class RingError(ValueError):
    pass


@dataclass(frozen=True)
class Ring:
    """Polynomial ring over ``field`` in the named ``variables``.

    ``grading`` optionally partitions the variables into coordinate pairs of the
    factors of a product of projective lines, given as index pairs.
    """

    field: FieldSpec
    variables: tuple[str, ...]
    grading: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise RingError(f"duplicate variable names in {self.variables}")
        if self.grading is not None:
            flat = [i for pair in self.grading for i in pair]
            if len(self.grading) != 4 or sorted(flat) != list(range(len(self.variables))) or len(self.variables) != 8:
                raise RingError("grading must split exactly 8 variables into 4 disjoint pairs")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise RingError(f"unknown variable {name!r}") from None

    def gen(self, name: str | int) -> "Polynomial":
        i = name if isinstance(name, int) else self.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.field.one})

    def gens(self) -> list["Polynomial"]:
        return [self.gen(i) for i in range(self.nvars)]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        if isinstance(c, FieldElement):
            v = self.field.coerce(c.value, c.field)
        elif isinstance(c, tuple):
            v = c
        else:
            v = self.field.from_rational(c)
        if self.field.is_zero(v):
            return self.zero()
        return Polynomial(self, {(0,) * self.nvars: v})

    def with_field(self, field: FieldSpec) -> "Ring":
        return Ring(field, self.variables, self.grading)

    def parse(self, text: str) -> "Polynomial":
        from .parse import parse

        return parse(text, self)

    def __str__(self) -> str:
        s = f"{self.field}[{', '.join(self.variables)}]"
        if self.grading:
            s += " graded by " + " ".join(f"({self.variables[a]},{self.variables[b]})" for a, b in self.grading)
        return s


def graded_ring(field: FieldSpec, names: Sequence[str] | None = None) -> Ring:
    """The coordinate ring of (P^1)^4 with variables x10, x11, ..., x40, x41."""
    if names is None:
        names = [f"x{i}{j}" for i in range(1, 5) for j in range(2)]
    return Ring(field, tuple(names), tuple((2 * k, 2 * k + 1) for k in range(4)))


def monomial_key(e: tuple[int, ...]):
    """Sort key for the graded lexicographic order (larger key = larger monomial)."""
    return (sum(e), e)


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to raw coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping | None = None, _normalized: bool = True):
        K = ring.field
        if terms is None:
            terms = {}
        if not _normalized:
            terms = {e: c for e, c in terms.items() if not K.is_zero(c)}
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", dict(terms))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("Polynomial is immutable")

    # -- basic queries ----------------------------------------------------------

    @property
    def field(self) -> FieldSpec:
        return self.ring.field

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        """Terms in decreasing graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: monomial_key(t[0]), reverse=True)

    def coefficient(self, exponents: Sequence[int]) -> FieldElement:
        e = tuple(exponents)
        return FieldElement(self.field, self.terms.get(e, self.field.zero))

    def leading_term(self):
        if not self.terms:
            return None
        return max(self.terms.items(), key=lambda t: monomial_key(t[0]))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: str | int) -> int:
        i = var if isinstance(var, int) else self.ring.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def term_multidegree(self, e: tuple[int, ...]) -> tuple[int, ...]:
        g = self.ring.grading
        if g is None:
            raise RingError("ring is not graded")
        return tuple(e[a] + e[b] for a, b in g)

    def multidegrees(self) -> set[tuple[int, ...]]:
        return {self.term_multidegree(e) for e in self.terms}

    def is_multihomogeneous(self) -> bool:
        return len(self.multidegrees()) <= 1

    @property
    def multidegree(self) -> tuple[int, ...] | None:
        """The common multidegree of all terms (None for 0 or inhomogeneous input)."""
        ds = self.multidegrees()
        return ds.pop() if len(ds) == 1 else None

    # -- arithmetic ---------------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if other.ring != self.ring:
            raise RingError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._lift(other)
        K = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = K.add(out[e], c)
                if K.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        K = self.field
        return Polynomial(self.ring, {e: K.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "Polynomial":
        K = self.field
        if isinstance(c, FieldElement):
            v = K.coerce(c.value, c.field)
        elif isinstance(c, tuple):
            v = c
        else:
            v = K.from_rational(c)
        if K.is_zero(v):
            return self.ring.zero()
        return Polynomial(self.ring, {e: K.mul(x, v) for e, x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        K = self.field
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        if K.kind == QQ_KIND:
            for eb, cb in b.items():
                for ea, ca in a.items():
                    e = tuple(x + y for x, y in zip(ea, eb))
                    out[e] = out.get(e, 0) + ca * cb
            out = {e: mpq(c) for e, c in out.items() if c != 0}
            return Polynomial(self.ring, out)
        zero = K.zero
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = K.add(out.get(e, zero), K.mul(ca, cb))
        return Polynomial(self.ring, out, _normalized=False)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, c):
        K = self.field
        if isinstance(c, Polynomial):
            raise TypeError("polynomial division is not supported")
        if isinstance(c, FieldElement):
            v = K.coerce(c.value, c.field)
        else:
            v = K.from_rational(c)
        return self.scale(K.inv(v))

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, FieldElement)) or isinstance(other, type(mpq())):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.ring, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- calculus and substitution ---------------------------------------------------

    def partial(self, var: str | int) -> "Polynomial":
        i = var if isinstance(var, int) else self.ring.index(var)
        K = self.field
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k == 0:
                continue
            f = list(e)
            f[i] = k - 1
            out[tuple(f)] = K.mul(c, K.from_int(k))
        return Polynomial(self.ring, out, _normalized=False)

    def evaluate(self, point: Sequence) -> FieldElement:
        """Value at ``point``; coordinates may lie in an extension of QQ."""
        if len(point) != self.ring.nvars:
            raise RingError(f"point has {len(point)} coordinates, ring has {self.ring.nvars} variables")
        target, values = _coerce_point(point, self.field)
        K = target
        src = self.field
        total = K.zero
        powers: list[dict[int, object]] = [{0: K.one, 1: v} for v in values]

        def pw(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = K.pow(values[i], k)
            return cache[k]

        for e, c in self.terms.items():
            t = K.coerce(c, src)
            for i, k in enumerate(e):
                if k:
                    t = K.mul(t, pw(i, k))
            total = K.add(total, t)
        return FieldElement(K, total)

    def substitute(self, images: Mapping[str, "Polynomial"] | Sequence["Polynomial"], target: Ring | None = None) -> "Polynomial":
        """Replace every variable by a polynomial of a common target ring."""
        if isinstance(images, Mapping):
            missing = [v for v in self.ring.variables if v not in images]
            if missing:
                raise RingError(f"substitution map lacks images for {missing}")
            imgs = [images[v] for v in self.ring.variables]
        else:
            imgs = list(images)
            if len(imgs) != self.ring.nvars:
                raise RingError("substitution needs one image per variable")
        if target is None:
            if imgs:
                target = imgs[0].ring
            else:
                target = self.ring
        for q in imgs:
            if q.ring != target:
                raise RingError("substitution images must share one ring")
        K = target.field
        src = self.field
        cache: list[dict[int, Polynomial]] = [{1: q} for q in imgs]

        def pw(i, k):
            c = cache[i]
            if k not in c:
                c[k] = imgs[i] ** k
            return c[k]

        acc: dict = {}
        zero = K.zero
        for e, c in self.terms.items():
            cc = K.coerce(c, src)
            prod = None
            for i, k in enumerate(e):
                if k:
                    prod = pw(i, k) if prod is None else prod * pw(i, k)
            if prod is None:
                prod = target.one()
            for em, cm in prod.terms.items():
                acc[em] = K.add(acc.get(em, zero), K.mul(cm, cc))
        return Polynomial(target, acc, _normalized=False)

    def restrict(self, assignments: Mapping[str, "Polynomial | int"]) -> "Polynomial":
        """Substitute only the listed variables, keeping the ring (e.g. ``{'u5': 0}``)."""
        imgs = []
        for v in self.ring.variables:
            if v in assignments:
                val = assignments[v]
                imgs.append(val if isinstance(val, Polynomial) else self.ring.constant(val))
            else:
                imgs.append(self.ring.gen(v))
        return self.substitute(imgs, self.ring)

    def change_ring(self, ring: Ring) -> "Polynomial":
        """Reinterpret in a ring whose variables contain ours (or drop unused trailing ones)."""
        idx = []
        for v in self.ring.variables:
            idx.append(ring.variables.index(v) if v in ring.variables else None)
        K = ring.field
        out = {}
        for e, c in self.terms.items():
            f = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    if idx[i] is None:
                        raise RingError(f"variable {self.ring.variables[i]} missing from target ring")
                    f[idx[i]] = k
            out[tuple(f)] = K.coerce(c, self.field)
        return Polynomial(ring, out, _normalized=False)

    # -- normal forms --------------------------------------------------------------

    def primitive(self) -> "Polynomial":
        """Integer coefficients, content 1, positive leading coefficient (QQ only)."""
        if self.field.kind != QQ_KIND:
            raise FieldError("primitive form is only defined over QQ")
        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = gmpy2.lcm(den, c.denominator)
        ints = {e: c * den for e, c in self.terms.items()}
        g = 0
        for c in ints.values():
            g = gmpy2.gcd(g, c.numerator)
        lead = self.leading_term()[0]
        if ints[lead] < 0:
            g = -g
        return Polynomial(self.ring, {e: mpq(c / g) for e, c in ints.items()})

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        K = self.field
        return self.scale(K.inv(self.leading_term()[1]))

    def content_scale(self) -> FieldElement:
        """``c`` with ``self == c * self.primitive()``."""
        p = self.primitive()
        e, c = p.leading_term()
        return FieldElement(self.field, self.terms[e] / c)

    # -- printing ---------------------------------------------------------------

    def __str__(self) -> str:
        return to_string(self)

    def __repr__(self) -> str:
        s = str(self)
        if len(s) > 120:
            s = s[:117] + "..."
        return f"Polynomial({s})"


def _coerce_point(point: Sequence, src: FieldSpec) -> tuple[FieldSpec, list]:
    fields = {x.field for x in point if isinstance(x, FieldElement)}
    if len(fields) > 1:
        raise FieldError(f"point coordinates live in different fields: {sorted(map(str, fields))}")
    target = fields.pop() if fields else src
    if target != src and src.kind != QQ_KIND:
        raise FieldError(f"cannot evaluate a polynomial over {src} at a point over {target}")
    values = []
    for x in point:
        if isinstance(x, FieldElement):
            values.append(x.value)
        else:
            values.append(target.from_rational(x))
    return target, values


def _exp_str(ring: Ring, e: tuple[int, ...]) -> str:
    parts = []
    for name, k in zip(ring.variables, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def to_string(p: Polynomial) -> str:
    """Deterministic text in the parser grammar, terms in decreasing graded-lex order."""
    K = p.field
    if not p.terms:
        return "0"
    out = []
    for idx, (e, c) in enumerate(p.sorted_terms()):
        mono = _exp_str(p.ring, e)
        if K.needs_parentheses(c):
            cs = f"({K.to_str(c)})"
            body = cs if not mono else f"{cs}*{mono}"
            sign = "+"
        else:
            s = K.to_str(c)
            sign = "-" if s.startswith("-") else "+"
            mag = s[1:] if sign == "-" else s
            if not mono:
                body = mag
            elif mag == "1":
                body = mono
            else:
                body = f"{mag}*{mono}"
        if idx == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def monomials_of(multidegree: Sequence[int], ring: Ring) -> list[tuple[int, ...]]:
    """All exponent vectors of the given multidegree, decreasing graded-lex order."""
    if ring.grading is None:
        raise RingError("monomials_of needs a graded ring")
    if len(multidegree) != len(ring.grading):
        raise RingError("multidegree length must match the number of factors")
    per_factor = [range(d, -1, -1) for d in multidegree]
    out = []
    for choice in itertools.product(*per_factor):
        e = [0] * ring.nvars
        for (a, b), d, k in zip(ring.grading, multidegree, choice):
            e[a] = k
            e[b] = d - k
        out.append(tuple(e))
    out.sort(key=monomial_key, reverse=True)
    return out


def monomials_of_degree(d: int, nvars: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree ``d`` in decreasing lex order."""
    if d < 0:
        return []
    out = []

    def rec(prefix, left, k):
        if k == nvars - 1:
            out.append(tuple(prefix + [left]))
            return
        for a in range(left, -1, -1):
            rec(prefix + [a], left - a, k + 1)

    if nvars == 0:
        return [()] if d == 0 else []
    rec([], d, 0)
    return out


def proportional(p: Polynomial, q: Polynomial) -> FieldElement | None:
    """``c`` with ``p == c*q`` if it exists (``p == q == 0`` gives 1)."""
    p._check(q)
    K = p.field
    if q.is_zero():
        return FieldElement(K, K.one) if p.is_zero() else None
    if p.is_zero():
        return FieldElement(K, K.zero)
    if p.terms.keys() != q.terms.keys():
        return None
    e0, c0 = next(iter(q.terms.items()))
    c = K.div(p.terms[e0], c0)
    for e, cq in q.terms.items():
        if p.terms[e] != K.mul(c, cq):
            return None
    return FieldElement(K, c)


def poly_arith(op: str, a: Polynomial, b) -> Polynomial:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a**b
    raise ValueError(f"unknown operation {op!r}")


def jacobian(polys: Sequence[Polynomial], variables: Iterable[str]) -> list[list[Polynomial]]:
    vs = list(variables)
    return [[p.partial(v) for v in vs] for p in polys]


def hessian(p: Polynomial) -> list[list[Polynomial]]:
    grads = [p.partial(i) for i in range(p.ring.nvars)]
    return [[g.partial(j) for j in range(p.ring.nvars)] for g in grads]


def from_coefficients(ring: Ring, coeffs: Mapping[tuple[int, ...], object]) -> Polynomial:
    K = ring.field
    out = {e: (c if isinstance(c, tuple) else K.from_rational(c)) for e, c in coeffs.items()}
    return Polynomial(ring, out, _normalized=False)


# -- FLINT bridge (rational coefficients only) ---------------------------------


def flint_context(nvars: int):
    import flint

    return flint.fmpq_mpoly_ctx.get(("v", nvars), "deglex")


def rational_terms(p: Polynomial) -> dict:
    """Coefficients as rationals; raises if some coefficient is not rational."""
    K = p.field
    out = {}
    for e, c in p.terms.items():
        if not K.is_rational(c):
            raise FieldError(f"coefficient {K.to_str(c)} is not rational")
        out[e] = K.rational_part(c)
    return out


def to_flint(p: Polynomial, ctx=None):
    import flint

    ctx = ctx or flint_context(p.ring.nvars)
    return ctx.from_dict({e: flint.fmpq(int(c.numerator), int(c.denominator)) for e, c in rational_terms(p).items()})


def from_flint(fp, ring: Ring) -> Polynomial:
    K = ring.field
    terms = {}
    for e, c in fp.to_dict().items():
        q = mpq(int(c.p), int(c.q))
        terms[tuple(int(x) for x in e)] = K.from_rational(q)
    return Polynomial(ring, terms, _normalized=False)
