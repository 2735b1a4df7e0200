"""Algebraic relations among polynomials and degree-bounded ideal membership.

Everything here is reduced to a linear system and handed to :mod:`decic.linalg`.

Relation spaces can be assembled in two ways:

``coefficients``
    rows are the monomials occurring in the products p^e, columns the products;
    the exact rational matrix goes through the multi-modular kernel.
``evaluation``
    modulo each prime, rows are the products evaluated at random points.  That
    matrix equals (monomial evaluations) x (coefficient matrix), so its rank is
    at most the rank of the coefficient matrix; when it has full column rank
    there is provably no relation, and otherwise the reconstructed kernel is
    certified by expanding each relation exactly.  The huge products are never
    materialized.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Sequence

import flint
import numpy as np
from gmpy2 import mpq

from .field import QQ, QQ_KIND, FieldElement, FieldSpec, ReconstructionError
from .linalg import (
    DEFAULT_OPTIONS,
    KernelCertificate,
    LinalgOptions,
    ModularOutcome,
    SparseMatrix,
    free_columns,
    kernel,
    multimodular_rref,
    primitive_vector,
    solve,
)
from .poly import Polynomial, Ring, flint_context, monomials_of_degree, rational_terms, to_flint


class RelationError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SymIndex:
    """Exponent vector of a product p_0^e_0 ... p_{m-1}^e_{m-1}."""

    exponents: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.exponents)) + ")"


def sym_indices(m: int, n: int) -> list[SymIndex]:
    """All exponent vectors of length ``m`` summing to ``n``, colexicographic order."""
    if m < 1 or n < 0:
        raise RelationError("need at least one polynomial and a nonnegative degree")
    out = []
    for cut in itertools.combinations(range(n + m - 1), m - 1):
        bounds = (-1,) + cut + (n + m - 1,)
        out.append(tuple(bounds[k + 1] - bounds[k] - 1 for k in range(m)))
    out.sort(key=lambda e: e[::-1])
    return [SymIndex(e) for e in out]


def _check_inputs(polys: Sequence[Polynomial]) -> Ring:
    if not polys:
        raise RelationError("need at least one polynomial")
    ring = polys[0].ring
    if any(p.ring != ring for p in polys):
        raise RelationError("polynomials must share one ring")
    if ring.grading is not None:
        degs = {p.multidegree for p in polys}
        if None in degs or len(degs) != 1:
            raise RelationError(f"mixed or inhomogeneous multidegrees: {sorted(map(str, degs))}")
    else:
        if any(not p.is_homogeneous() or p.is_zero() for p in polys) or len({p.total_degree() for p in polys}) != 1:
            raise RelationError("polynomials must be nonzero and homogeneous of one common degree")
    return ring


def sym_products(polys: Sequence[Polynomial], n: int) -> list[tuple[SymIndex, Polynomial]]:
    _check_inputs(polys)
    powers: list[dict[int, Polynomial]] = [{0: p.ring.one(), 1: p} for p in polys]

    def pw(i, k):
        if k not in powers[i]:
            powers[i][k] = pw(i, k - 1) * polys[i]
        return powers[i][k]

    out = []
    for idx in sym_indices(len(polys), n):
        prod = polys[0].ring.one()
        for i, k in enumerate(idx.exponents):
            if k:
                prod = prod * pw(i, k)
        out.append((idx, prod))
    return out


def fresh_ring(m: int, prefix: str = "u", field: FieldSpec | None = None) -> Ring:
    return Ring(field or QQ(), tuple(f"{prefix}{k}" for k in range(m)))


@dataclass
class RelationSpace:
    degree: int
    names: tuple[str, ...]
    ring: Ring
    basis: list[Polynomial]
    certificate: KernelCertificate
    method: str

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _relation_polynomial(ring: Ring, indices: Sequence[SymIndex], v: Sequence) -> Polynomial:
    K = ring.field
    return Polynomial(ring, {idx.exponents: K.from_rational(c) for idx, c in zip(indices, v) if c}, _normalized=False)


def expands_to_zero(relation: Polynomial, polys: Sequence[Polynomial]) -> bool:
    """Exact check that ``relation(polys) == 0``."""
    if all(p.field.kind == QQ_KIND or _rational(p) for p in polys) and relation.field.kind == QQ_KIND:
        ctx = flint_context(polys[0].ring.nvars)
        images = [to_flint(p, ctx) for p in polys]
        r = to_flint(relation)
        return r.compose(*images, ctx=ctx).is_zero()
    return relation.substitute(list(polys), polys[0].ring).is_zero()


def _rational(p: Polynomial) -> bool:
    K = p.field
    return all(K.is_rational(c) for c in p.terms.values())


def _evaluation_builder(polys: Sequence[Polynomial], indices: Sequence[SymIndex], seed: int, extra_points: int = 16):
    rational = [rational_terms(p) for p in polys]
    nvars = polys[0].ring.nvars
    npts = len(indices) + extra_points
    expo = np.array([idx.exponents for idx in indices], dtype=np.int64)
    n = int(expo.sum(axis=1).max()) if len(indices) else 0

    def build(p: int):
        rng = np.random.default_rng([seed, p])
        pts = rng.integers(0, p, size=(nvars, npts), dtype=np.int64)
        vals = []
        for terms in rational:
            acc = np.zeros(npts, dtype=np.int64)
            for e, c in terms.items():
                den = int(c.denominator) % p
                if den == 0:
                    return None
                t = np.full(npts, int(c.numerator) % p * pow(den, -1, p) % p, dtype=np.int64)
                for var, k in enumerate(e):
                    for _ in range(k):
                        t = t * pts[var] % p
                acc = (acc + t) % p
            vals.append(acc)
        table = []
        for v in vals:
            row = [np.ones(npts, dtype=np.int64)]
            for _ in range(n):
                row.append(row[-1] * v % p)
            table.append(row)
        E = np.ones((npts, len(indices)), dtype=np.int64)
        for j, e in enumerate(expo):
            col = E[:, j]
            for i, k in enumerate(e):
                if k:
                    col = col * table[i][k] % p
            E[:, j] = col
        return flint.nmod_mat(npts, len(indices), E.ravel().tolist(), p)

    return build


def _coefficient_matrix(polys: Sequence[Polynomial], n: int) -> tuple[list[SymIndex], SparseMatrix]:
    prods = sym_products(polys, n)
    row_index: dict = {}
    entries = {}
    K = polys[0].field
    for j, (_, q) in enumerate(prods):
        for e, c in q.terms.items():
            i = row_index.setdefault(e, len(row_index))
            entries[(i, j)] = K.rational_part(c) if K.kind != QQ_KIND else c
    return [idx for idx, _ in prods], SparseMatrix(len(row_index), len(prods), entries, QQ())


def relation_space(
    polys: Sequence[Polynomial],
    n: int,
    names: Sequence[str] | None = None,
    options: LinalgOptions = DEFAULT_OPTIONS,
    method: str = "auto",
    prefix: str = "u",
) -> RelationSpace:
    """All degree-``n`` forms R in fresh variables with R(polys) = 0."""
    if n < 1:
        raise RelationError("relation degree must be at least 1")
    _check_inputs(polys)
    if not all(_rational(p) for p in polys):
        raise RelationError("relation spaces are computed for polynomials with rational coefficients")
    m = len(polys)
    names = tuple(names) if names else tuple(f"p{k}" for k in range(m))
    ring = fresh_ring(m, prefix)
    if method == "auto":
        method = "evaluation" if comb(m + n - 1, n) > 120 else "coefficients"
    if method == "coefficients":
        indices, M = _coefficient_matrix(polys, n)
        cert = kernel(M, options)
        basis = [_relation_polynomial(ring, indices, v) for v in cert.basis]
        for r in basis:
            if not expands_to_zero(r, polys):
                raise RelationError("relation failed exact expansion")
        return RelationSpace(n, names, ring, basis, cert, method)
    if method != "evaluation":
        raise RelationError(f"unknown method {method!r}")
    indices = sym_indices(m, n)
    build = _evaluation_builder(polys, indices, options.seed)
    certified: dict = {}

    def accept(out: ModularOutcome) -> bool:
        vecs = _kernel_vectors(out, len(indices))
        rels = [_relation_polynomial(ring, indices, v) for v in vecs]
        if all(expands_to_zero(r, polys) for r in rels):
            certified["basis"] = rels
            return True
        return False

    out = multimodular_rref(build, lambda piv, k: free_columns(piv, k), accept, options)
    cert = KernelCertificate(
        [[r.terms.get(idx.exponents, mpq(0)) for idx in indices] for r in certified["basis"]],
        out.rank,
        len(indices),
        QQ(),
        out.pivots,
        primes=out.primes,
        discarded_primes=out.discarded,
        method="evaluation",
    )
    return RelationSpace(n, names, ring, certified["basis"], cert, method)


def _kernel_vectors(out: ModularOutcome, ncols: int) -> list[list[mpq]]:
    vecs = []
    for k, f in enumerate(out.columns):
        v = [mpq(0)] * ncols
        v[f] = mpq(1)
        for i, pc in enumerate(out.pivots):
            v[pc] = -out.values[i][k]
        vecs.append(primitive_vector(v))
    return vecs


# ---------------------------------------------------------------------------
# ideal membership


def _degree_monomials(ring: Ring, d: int) -> list[tuple[int, ...]]:
    return monomials_of_degree(d, ring.nvars)


def _multidegree_monomials(ring: Ring, md: Sequence[int]) -> list[tuple[int, ...]]:
    from .poly import monomials_of

    if any(k < 0 for k in md):
        return []
    return monomials_of(md, ring)


def _shift(g: Polynomial, e: tuple[int, ...]) -> Polynomial:
    return Polynomial(g.ring, {tuple(a + b for a, b in zip(f, e)): c for f, c in g.terms.items()})


def _multipliers(g: Polynomial, target_degree, homogeneous: bool) -> list[tuple[int, ...]]:
    ring = g.ring
    if isinstance(target_degree, tuple):
        md = g.multidegree
        if md is None:
            raise RelationError("multidegree slices need multihomogeneous generators")
        return _multidegree_monomials(ring, tuple(a - b for a, b in zip(target_degree, md)))
    top = target_degree - g.total_degree()
    if homogeneous:
        return _degree_monomials(ring, top)
    return [e for d in range(top + 1) for e in _degree_monomials(ring, d)]


def _span_columns(gens: Sequence[Polynomial], d, homogeneous: bool):
    cols = []
    for gi, g in enumerate(gens):
        if g.is_zero():
            continue
        for e in _multipliers(g, d, homogeneous):
            cols.append((gi, e))
    return cols


def _column_matrix(polys: Sequence[Polynomial], ring: Ring, rhs: Polynomial | None = None):
    K = ring.field
    row_index: dict = {}
    entries = {}
    for j, q in enumerate(polys):
        for e, c in q.terms.items():
            entries[(row_index.setdefault(e, len(row_index)), j)] = c
    b = None
    if rhs is not None:
        for e in rhs.terms:
            row_index.setdefault(e, len(row_index))
        b = [K.zero] * len(row_index)
        for e, c in rhs.terms.items():
            b[row_index[e]] = c
    return SparseMatrix(len(row_index), len(polys), entries, K), b


def _rationalize(ps: Sequence[Polynomial]) -> tuple[list[Polynomial], Ring]:
    """Move polynomials with rational coefficients to the QQ version of their ring."""
    ring = ps[0].ring
    if ring.field.kind == QQ_KIND or not all(_rational(p) for p in ps):
        return list(ps), ring
    qring = ring.with_field(QQ())
    return [Polynomial(qring, rational_terms(p)) for p in ps], qring


def _lift_back(p: Polynomial, ring: Ring) -> Polynomial:
    if p.ring == ring:
        return p
    K = ring.field
    return Polynomial(ring, {e: K.from_rational(c) for e, c in p.terms.items()})


def in_span(p: Polynomial, basis: list[Polynomial], options: LinalgOptions) -> bool:
    """Whether ``p`` is a linear combination of ``basis``."""
    if p.is_zero():
        return True
    if not basis:
        return False
    K = p.field
    index: dict = {}
    entries = {}
    for j, q in enumerate(basis):
        for e, c in q.terms.items():
            entries[(index.setdefault(e, len(index)), j)] = c
    rhs_terms = {index.setdefault(e, len(index)): c for e, c in p.terms.items()}
    M = SparseMatrix(len(index), len(basis), entries, K)
    b = [rhs_terms.get(i, K.zero) for i in range(len(index))]
    return solve(M, b, options) is not None


def ideal_slice(gens: Sequence[Polynomial], d, options: LinalgOptions = DEFAULT_OPTIONS) -> list[Polynomial]:
    """A basis of the degree-``d`` part of the ideal (``d`` an int or a multidegree)."""
    if not gens:
        return []
    d = tuple(d) if not isinstance(d, int) else d
    homogeneous = all(g.is_homogeneous() for g in gens)
    if not homogeneous:
        raise RelationError("ideal slices need homogeneous generators")
    cols = _span_columns(gens, d, True)
    if not cols:
        return []
    products = [_shift(gens[gi], e) for gi, e in cols]
    qprods, _ = _rationalize(products)
    M, _ = _column_matrix(qprods, qprods[0].ring)
    cert = kernel(M, options)
    return [products[j] for j in cert.pivots]


@dataclass
class MembershipCertificate:
    """``target = sum(cofactors[i] * generators[i])``, verified exactly."""

    target: Polynomial
    generators: list[Polynomial]
    cofactors: list[Polynomial]
    bound: int
    primes: list[int] = dc_field(default_factory=list)

    def verify(self) -> bool:
        total = self.target.ring.zero()
        for q, g in zip(self.cofactors, self.generators):
            total = total + q * g
        degree_ok = all(q.is_zero() or q.total_degree() <= self.bound - g.total_degree() for q, g in zip(self.cofactors, self.generators))
        return total == self.target and degree_ok


def _solve_for_cofactors(target: Polynomial, extra: list[Polynomial], gens: Sequence[Polynomial], bound: int, options: LinalgOptions):
    ring = target.ring
    homogeneous = target.is_homogeneous() and all(g.is_homogeneous() for g in gens) and all(x.is_homogeneous() for x in extra)
    deg = target.total_degree() if not target.is_zero() else bound
    if homogeneous and any(not x.is_zero() and x.total_degree() != deg for x in extra):
        homogeneous = False
    cols = _span_columns(gens, deg if homogeneous else bound, homogeneous)
    products = list(extra) + [_shift(gens[gi], e) for gi, e in cols]
    if not products:
        return (None if not target.is_zero() else ([], [], [])), cols
    qall, _ = _rationalize(products + [target])
    M, b = _column_matrix(qall[:-1], qall[0].ring, qall[-1])
    sol = solve(M, b, options)
    if sol is None:
        return None, cols
    K = ring.field
    x = [K.coerce(v, M.field) for v in sol.x]
    return (x, cols, sol.primes), cols


def _assemble(x, cols, gens, offset: int) -> list[Polynomial]:
    ring = gens[0].ring
    K = ring.field
    cof: list[dict] = [dict() for _ in gens]
    for (gi, e), v in zip(cols, x[offset:]):
        if not K.is_zero(v):
            cof[gi][e] = v
    return [Polynomial(ring, c) for c in cof]


def membership(f: Polynomial, gens: Sequence[Polynomial], bound: int | None = None, options: LinalgOptions = DEFAULT_OPTIONS) -> MembershipCertificate | None:
    """Cofactors with f = sum q_i g_i and deg q_i <= bound - deg g_i, or None.

    None only says that no such combination exists within the degree bound.
    For homogeneous input with bound = deg f this is the same as ideal membership.
    """
    gens = list(gens)
    if bound is None:
        bound = max(f.total_degree(), 0)
    if f.total_degree() > bound:
        raise RelationError("target degree exceeds the bound")
    if f.is_zero():
        return MembershipCertificate(f, gens, [f.ring.zero() for _ in gens], bound)
    res, cols = _solve_for_cofactors(f, [], gens, bound, options)
    if res is None:
        return None
    x, cols, primes = res
    cert = MembershipCertificate(f, gens, _assemble(x, cols, gens, 0), bound, primes)
    if not cert.verify():
        raise RelationError("membership certificate failed exact verification")
    return cert


def proportional_mod_ideal(
    f: Polynomial, g: Polynomial, gens: Sequence[Polynomial], bound: int | None = None, options: LinalgOptions = DEFAULT_OPTIONS
) -> tuple[FieldElement, MembershipCertificate] | None:
    """A scalar ``c`` and a certificate that ``f - c*g`` lies in the bounded ideal slice."""
    gens = list(gens)
    if bound is None:
        bound = max(f.total_degree(), g.total_degree())
    res, cols = _solve_for_cofactors(f, [g], gens, bound, options)
    if res is None:
        return None
    x, cols, primes = res
    K = f.field
    c = x[0]
    rest = f - g.scale(c)
    cert = MembershipCertificate(rest, gens, _assemble(x, cols, gens, 1), bound, primes)
    if not cert.verify():
        raise RelationError("membership certificate failed exact verification")
    return FieldElement(K, c), cert


__all__ = [
    "RelationError",
    "SymIndex",
    "sym_indices",
    "sym_products",
    "fresh_ring",
    "RelationSpace",
    "relation_space",
    "expands_to_zero",
    "ideal_slice",
    "in_span",
    "MembershipCertificate",
    "membership",
    "proportional_mod_ideal",
    "ReconstructionError",
]
