"""Independent reference computations (sympy / plain fractions) used by the tests."""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy as sp


def fraction_rank(rows) -> int:
    """Rank by textbook Gaussian elimination over Fraction."""
    A = [[Fraction(x) for x in row] for row in rows]
    if not A:
        return 0
    r = 0
    ncols = len(A[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c] / A[r][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
    return r


def to_sympy(p, symbols=None):
    """Our Polynomial (over QQ or QQ(i)) as a sympy expression."""
    ring = p.ring
    syms = symbols or sp.symbols(ring.variables)
    K = p.field
    expr = 0
    for e, c in p.terms.items():
        if K.kind == "QQi":
            coeff = sp.Rational(str(c[0])) + sp.I * sp.Rational(str(c[1]))
        else:
            coeff = sp.Rational(str(c))
        term = coeff
        for s, k in zip(syms, e):
            term *= s**k
        expr += term
    return sp.expand(expr), list(syms)


def relation_dimension(exprs, symbols, n: int) -> tuple[int, list]:
    """Brute-force dimension of degree-n relations among sympy polynomials."""
    m = len(exprs)
    combos = list(itertools.combinations_with_replacement(range(m), n))
    prods = [sp.Poly(sp.expand(sp.Mul(*[exprs[i] for i in c])), *symbols) for c in combos]
    monos = sorted({mono for p in prods for mono in p.as_dict()})
    M = sp.Matrix([[p.as_dict().get(mono, 0) for p in prods] for mono in monos])
    null = M.nullspace()
    return len(null), [(combos, v) for v in null]


def brute_membership(f_expr, gen_exprs, symbols, bound: int) -> bool:
    """Whether f = sum q_i g_i with deg q_i <= bound - deg g_i, by a generic ansatz."""
    unknowns = []
    total = 0
    for g in gen_exprs:
        dg = sp.Poly(g, *symbols).total_degree() if g != 0 else 0
        for d in range(0, bound - dg + 1):
            for mono in itertools.combinations_with_replacement(symbols, d):
                c = sp.Symbol(f"c{len(unknowns)}")
                unknowns.append(c)
                total += c * sp.Mul(*mono) * g
    diff = sp.Poly(sp.expand(total - f_expr), *symbols)
    eqs = list(diff.as_dict().values())
    if not eqs:
        return True
    if not unknowns:
        return all(e == 0 for e in eqs)
    A, b = sp.linear_eq_to_matrix(eqs, unknowns)
    aug = A.row_join(b)
    return A.rank() == aug.rank()


def hessian_rank(expr, symbols, point) -> int:
    H = sp.hessian(expr, symbols)
    return H.subs(dict(zip(symbols, point))).rank(simplify=True)
