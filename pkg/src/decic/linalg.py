"""Exact linear algebra over QQ, prime fields and small algebraic extensions.

Large rational systems go through a multi-modular pipeline: reduced row
echelon forms modulo several random 31-bit primes (FLINT ``nmod_mat``), the
consistent images are combined by CRT and rational reconstruction, and every
reconstructed vector is then checked in exact arithmetic.  A modular rank is a
lower bound for the rational rank, so an exactly certified kernel of dimension
``ncols - rank_p`` pins the nullity down completely.

Small matrices and matrices over non-rational fields use plain fraction-free
or Gauss-Jordan elimination with exact field arithmetic.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Sequence

import flint
import gmpy2
import numpy as np
from gmpy2 import mpq, mpz

from .field import GF_KIND, QQ_KIND, FieldElement, FieldSpec, QQ, ReconstructionError

DEFAULT_SEED = 1729
PRIME_LOW = 1 << 30
PRIME_HIGH = 1 << 31


class LinalgError(ValueError):
    pass


@dataclass(frozen=True)
class LinalgOptions:
    """Knobs for the multi-modular pipeline.

    ``primes`` is the prime budget: the number of good primes that may be
    consumed before reconstruction is declared a failure.
    """

    primes: int = 8
    threads: int = 1
    dense_threshold: int = 64
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.primes < 2:
            raise LinalgError("prime budget must be at least 2")
        if self.threads < 1:
            raise LinalgError("thread count must be at least 1")
        if self.dense_threshold < 0:
            raise LinalgError("dense threshold must be nonnegative")


DEFAULT_OPTIONS = LinalgOptions()


# ---------------------------------------------------------------------------
# storage


class SparseMatrix:
    """Sparse matrix with raw field values; zeros are never stored."""

    __slots__ = ("nrows", "ncols", "entries", "field")

    def __init__(self, nrows: int, ncols: int, entries: dict | None = None, field: FieldSpec | None = None):
        if nrows < 0 or ncols < 0:
            raise LinalgError("matrix dimensions must be nonnegative")
        K = field or QQ()
        clean = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise LinalgError(f"entry ({i},{j}) outside a {nrows}x{ncols} matrix")
            if isinstance(v, FieldElement):
                v = K.coerce(v.value, v.field)
            elif not isinstance(v, tuple) and K.kind != GF_KIND:
                v = K.from_rational(v)
            elif K.kind == GF_KIND and not isinstance(v, tuple):
                v = int(v) % K.p
            if not K.is_zero(v):
                clean[(i, j)] = v
        self.nrows = nrows
        self.ncols = ncols
        self.entries = clean
        self.field = K

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: FieldSpec | None = None) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise LinalgError("ragged rows")
        return cls(nrows, ncols, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r)}, field)

    def get(self, i: int, j: int):
        return self.entries.get((i, j), self.field.zero)

    def to_rows(self) -> list[list]:
        K = self.field
        out = [[K.zero] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def transpose(self) -> "SparseMatrix":
        m = SparseMatrix(self.ncols, self.nrows, field=self.field)
        m.entries = {(j, i): v for (i, j), v in self.entries.items()}
        return m

    def row_lists(self) -> list[list[tuple[int, object]]]:
        rows: list[list] = [[] for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            rows[i].append((j, v))
        return rows

    def mul_vec(self, v: Sequence) -> list:
        if len(v) != self.ncols:
            raise LinalgError("vector length does not match the column count")
        K = self.field
        out = [K.zero] * self.nrows
        if K.kind == QQ_KIND:
            acc = [mpq(0)] * self.nrows
            for (i, j), a in self.entries.items():
                x = v[j]
                if x:
                    acc[i] += a * x
            return acc
        for (i, j), a in self.entries.items():
            out[i] = K.add(out[i], K.mul(a, v[j]))
        return out

    def density(self) -> float:
        cells = self.nrows * self.ncols
        return len(self.entries) / cells if cells else 0.0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseMatrix)
            and (self.nrows, self.ncols, self.field) == (other.nrows, other.ncols, other.field)
            and self.entries == other.entries
        )

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows or self.field != other.field:
            raise LinalgError("incompatible matrices")
        K = self.field
        by_row = other.row_lists()
        out: dict = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row[k]:
                out[(i, j)] = K.add(out.get((i, j), K.zero), K.mul(a, b))
        return SparseMatrix(self.nrows, other.ncols, out, K)

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={len(self.entries)}, field={self.field})"


def identity(n: int, field: FieldSpec | None = None) -> SparseMatrix:
    K = field or QQ()
    return SparseMatrix(n, n, {(i, i): K.one for i in range(n)}, K)


@dataclass
class KernelCertificate:
    """A certified basis of a right null space.

    ``pivots`` are the pivot columns of the reduced echelon form, ``pivot_rows``
    the rows of the original matrix that were used as pivots (when known).
    Basis vectors are in reduced echelon normalization scaled to primitive
    integers (over QQ) and each was verified to be annihilated exactly.
    """

    basis: list[list]
    rank: int
    ncols: int
    field: FieldSpec
    pivots: tuple[int, ...] = ()
    pivot_rows: tuple[int, ...] = ()
    primes: list[int] = dc_field(default_factory=list)
    discarded_primes: list[int] = dc_field(default_factory=list)
    method: str = "dense"

    @property
    def nullity(self) -> int:
        return len(self.basis)


# ---------------------------------------------------------------------------
# prime handling


def prime_stream(seed: int, exclude: Iterable[int] = ()):
    """Deterministic stream of distinct random primes in [2^30, 2^31)."""
    rng = random.Random(seed)
    seen = set(exclude)
    while True:
        p = int(gmpy2.next_prime(rng.randrange(PRIME_LOW, PRIME_HIGH)))
        if p >= PRIME_HIGH or p in seen:
            continue
        seen.add(p)
        yield p


def _denominator_lcm(M: SparseMatrix) -> mpz:
    d = mpz(1)
    for v in M.entries.values():
        d = gmpy2.lcm(d, v.denominator)
    return d


def reduce_mod_p(M: SparseMatrix, p: int, extra_columns: Sequence[Sequence] = ()) -> flint.nmod_mat | None:
    """M (optionally augmented on the right) as an ``nmod_mat``; None if a denominator vanishes."""
    ncols = M.ncols + len(extra_columns)
    flat = [0] * (M.nrows * ncols)
    items = list(M.entries.items())
    for c, col in enumerate(extra_columns):
        items.extend(((i, M.ncols + c), v) for i, v in enumerate(col) if v)
    for (i, j), v in items:
        den = int(v.denominator % p)
        if den == 0:
            return None
        flat[i * ncols + j] = int(v.numerator % p) * pow(den, -1, p) % p
    return flint.nmod_mat(M.nrows, ncols, flat, p)


@dataclass
class ModularImage:
    p: int
    rank: int
    pivots: tuple[int, ...]
    # rows [0, rank) of the reduced echelon form, restricted to the requested columns
    block: np.ndarray
    columns: tuple[int, ...]


def nmod_to_numpy(A: flint.nmod_mat) -> np.ndarray:
    flat = np.fromiter((int(x) for x in A.entries()), dtype=np.int64, count=A.nrows() * A.ncols())
    return flat.reshape(A.nrows(), A.ncols())


def modular_image(A: flint.nmod_mat, want: Callable[[tuple[int, ...], int], Sequence[int]]) -> ModularImage:
    """RREF of ``A``; keep the columns chosen by ``want(pivots, ncols)``."""
    R, rank = A.rref()
    p = int(A.modulus())
    n = A.ncols()
    if rank == 0:
        cols = tuple(want((), n))
        return ModularImage(p, 0, (), np.zeros((0, len(cols)), dtype=np.int64), cols)
    dense = nmod_to_numpy(R)[:rank]
    pivots = tuple(int(c) for c in np.argmax(dense != 0, axis=1))
    cols = tuple(want(pivots, n))
    return ModularImage(p, rank, pivots, dense[:, list(cols)] if cols else np.zeros((rank, 0), dtype=np.int64), cols)


def free_columns(pivots: Sequence[int], ncols: int) -> list[int]:
    ps = set(pivots)
    return [j for j in range(ncols) if j not in ps]


def _better(a: ModularImage, b: ModularImage) -> bool:
    """Is ``a`` the image of a luckier prime than ``b``?"""
    if a.rank != b.rank:
        return a.rank > b.rank
    return a.pivots < b.pivots


def vector_crt(images: Sequence[np.ndarray], primes: Sequence[int]) -> tuple[list[mpz], mpz]:
    """Garner CRT applied entrywise to flat residue arrays."""
    r = [mpz(int(x)) for x in images[0]]
    m = mpz(primes[0])
    for img, p in zip(images[1:], primes[1:]):
        inv = int(gmpy2.invert(m % p, p))
        for k, x in enumerate(img):
            rk = r[k]
            t = ((int(x) - int(rk % p)) * inv) % p
            if t:
                r[k] = rk + m * t
        m *= p
    return r, m


def reconstruct_vector(residues: Sequence[mpz], m: mpz) -> list[mpq]:
    """Rational reconstruction of a vector, sharing a running common denominator."""
    bound = gmpy2.isqrt(m // 2)
    d = mpz(1)
    out = []
    for r in residues:
        x = (r * d) % m
        if x <= bound:
            num, den = x, mpz(1)
        elif m - x <= bound:
            num, den = x - m, mpz(1)
        else:
            q = _ratrecon(x, m, bound)
            num, den = q.numerator, q.denominator
        d *= den
        out.append(mpq(num, d))
    return out


def _ratrecon(r: mpz, m: mpz, bound: mpz) -> mpq:
    r0, r1 = m, r
    s0, s1 = mpz(0), mpz(1)
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gmpy2.gcd(r1, s1) != 1:
        raise ReconstructionError("residues do not determine a small fraction")
    return mpq(r1, s1)


def primitive_vector(v: Sequence[mpq]) -> list[mpq]:
    """Scale to coprime integers with a positive first nonzero entry."""
    den = mpz(1)
    for x in v:
        if x:
            den = gmpy2.lcm(den, x.denominator)
    ints = [x * den for x in v]
    g = mpz(0)
    for x in ints:
        if x:
            g = gmpy2.gcd(g, x.numerator)
    if g == 0:
        return [mpq(0)] * len(v)
    lead = next(x for x in ints if x)
    if lead < 0:
        g = -g
    return [mpq(x / g) for x in ints]


# ---------------------------------------------------------------------------
# generic multi-modular driver


@dataclass
class ModularOutcome:
    rank: int
    pivots: tuple[int, ...]
    columns: tuple[int, ...]
    # reconstructed RREF entries: values[i][k] is row i, column columns[k]
    values: list[list[mpq]]
    primes: list[int]
    discarded: list[int]


def multimodular_rref(
    build: Callable[[int], flint.nmod_mat | None],
    want: Callable[[tuple[int, ...], int], Sequence[int]],
    accept: Callable[[ModularOutcome], bool],
    options: LinalgOptions = DEFAULT_OPTIONS,
    exclude: Iterable[int] = (),
) -> ModularOutcome:
    """Reconstruct selected columns of a rational RREF from modular images.

    ``build(p)`` returns the matrix modulo ``p`` (None for a bad prime),
    ``want`` chooses which RREF columns to lift, and ``accept`` performs the
    exact certification of a candidate.  Images are combined in prime order, so
    the outcome does not depend on the thread count.
    """
    stream = prime_stream(options.seed, exclude)
    good: list[ModularImage] = []
    discarded: list[int] = []
    attempted = 0
    budget = options.primes
    last_values: list[list[mpq]] | None = None

    def work(p: int):
        A = build(p)
        return None if A is None else modular_image(A, want)

    with ThreadPoolExecutor(max_workers=options.threads) as pool:
        while len(good) < budget and attempted < 4 * budget + 8:
            primes = [next(stream) for _ in range(min(options.threads, budget - len(good)))]
            attempted += len(primes)
            for p, img in zip(primes, pool.map(work, primes)):
                if img is None:
                    discarded.append(p)
                elif not good or img.pivots == good[0].pivots:
                    good.append(img)
                elif _better(img, good[0]):
                    discarded.extend(g.p for g in good)
                    good = [img]
                    last_values = None
                else:
                    discarded.append(p)
            if not good:
                continue
            ref = good[0]
            ps = [g.p for g in good]
            if not ref.columns or ref.rank == 0:
                values = [[mpq(0)] * len(ref.columns) for _ in range(ref.rank)]
                outcome = ModularOutcome(ref.rank, ref.pivots, ref.columns, values, ps, discarded)
                if accept(outcome):
                    return outcome
                continue
            flat, m = vector_crt([g.block.reshape(-1) for g in good], ps)
            try:
                vals = reconstruct_vector(flat, m)
            except ReconstructionError:
                last_values = None
                continue
            k = len(ref.columns)
            values = [vals[i * k:(i + 1) * k] for i in range(ref.rank)]
            if values == last_values or len(good) >= budget:
                outcome = ModularOutcome(ref.rank, ref.pivots, ref.columns, values, ps, discarded)
                if accept(outcome):
                    return outcome
            last_values = values
    raise ReconstructionError(
        f"reconstruction failed within the budget of {budget} primes "
        f"(good: {[g.p for g in good]}, discarded: {discarded})"
    )


def _kernel_from_rref(pivots: Sequence[int], free: Sequence[int], values: list[list], ncols: int, K: FieldSpec) -> list[list]:
    basis = []
    for k, f in enumerate(free):
        v = [K.zero] * ncols
        v[f] = K.one
        for i, pc in enumerate(pivots):
            x = values[i][k]
            if not K.is_zero(x):
                v[pc] = K.neg(x)
        basis.append(v)
    return basis


def _is_zero_vector(K: FieldSpec, v: Sequence) -> bool:
    return all(K.is_zero(x) for x in v)


# ---------------------------------------------------------------------------
# dense exact elimination


def rref_dense(rows: list[list], K: FieldSpec) -> tuple[list[list], list[int]]:
    """Gauss-Jordan elimination with exact field arithmetic."""
    A = [list(r) for r in rows]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if not K.is_zero(A[i][c])), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = K.inv(A[r][c])
        A[r] = [K.mul(x, inv) for x in A[r]]
        for i in range(nrows):
            if i != r and not K.is_zero(A[i][c]):
                f = A[i][c]
                A[i] = [K.sub(x, K.mul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return A[:r], pivots


def bareiss_rank(rows: list[list], K: FieldSpec) -> int:
    """Rank by fraction-free (Bareiss) elimination; divisions are exact."""
    A = [list(r) for r in rows]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    prev = K.one
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if not K.is_zero(A[i][c])), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                num = K.sub(K.mul(A[r][c], A[i][j]), K.mul(A[i][c], A[r][j]))
                A[i][j] = K.div(num, prev)
            A[i][c] = K.zero
        prev = A[r][c]
        r += 1
        if r == nrows:
            break
    return r


def _use_dense(M: SparseMatrix, options: LinalgOptions) -> bool:
    if M.field.kind not in (QQ_KIND, GF_KIND):
        return True
    if M.field.kind == GF_KIND and M.field.p >= (1 << 62):
        return True
    return max(M.nrows, M.ncols) <= options.dense_threshold


def _dense_kernel(M: SparseMatrix) -> KernelCertificate:
    K = M.field
    R, pivots = rref_dense(M.to_rows(), K)
    free = free_columns(pivots, M.ncols)
    values = [[row[f] for f in free] for row in R]
    basis = _kernel_from_rref(pivots, free, values, M.ncols, K)
    if K.kind == QQ_KIND:
        basis = [primitive_vector(v) for v in basis]
    for v in basis:
        if not _is_zero_vector(K, M.mul_vec(v)):
            raise LinalgError("dense kernel vector failed exact verification")
    return KernelCertificate(basis, len(pivots), M.ncols, K, tuple(pivots), method="dense")


def _gf_kernel(M: SparseMatrix) -> KernelCertificate:
    K = M.field
    p = K.p
    flat = [0] * (M.nrows * M.ncols)
    for (i, j), v in M.entries.items():
        flat[i * M.ncols + j] = v
    A = flint.nmod_mat(M.nrows, M.ncols, flat, p) if M.nrows and M.ncols else None
    if A is None:
        return KernelCertificate(_kernel_from_rref([], list(range(M.ncols)), [], M.ncols, K), 0, M.ncols, K, method="modular")
    img = modular_image(A, lambda piv, n: free_columns(piv, n))
    values = [[int(x) for x in row] for row in img.block]
    basis = _kernel_from_rref(img.pivots, img.columns, values, M.ncols, K)
    for v in basis:
        if not _is_zero_vector(K, M.mul_vec(v)):
            raise LinalgError("modular kernel vector failed verification")
    return KernelCertificate(basis, img.rank, M.ncols, K, img.pivots, primes=[p], method="modular")


def _qq_kernel(M: SparseMatrix, options: LinalgOptions) -> KernelCertificate:
    K = M.field
    if M.nrows == 0 or M.ncols == 0:
        return _dense_kernel(M)

    def accept(out: ModularOutcome) -> bool:
        basis = _kernel_from_rref(out.pivots, out.columns, out.values, M.ncols, K)
        return all(_is_zero_vector(K, M.mul_vec(v)) for v in basis)

    out = multimodular_rref(
        lambda p: reduce_mod_p(M, p),
        lambda piv, n: free_columns(piv, n),
        accept,
        options,
    )
    basis = [primitive_vector(v) for v in _kernel_from_rref(out.pivots, out.columns, out.values, M.ncols, K)]
    return KernelCertificate(
        basis, out.rank, M.ncols, K, out.pivots, primes=out.primes, discarded_primes=out.discarded, method="multimodular"
    )


def kernel(M: SparseMatrix, options: LinalgOptions = DEFAULT_OPTIONS) -> KernelCertificate:
    """Certified basis of the right null space of ``M``."""
    if _use_dense(M, options):
        return _dense_kernel(M)
    if M.field.kind == GF_KIND:
        return _gf_kernel(M)
    return _qq_kernel(M, options)


def rank(M: SparseMatrix, options: LinalgOptions = DEFAULT_OPTIONS) -> int:
    """Exact rank."""
    if _use_dense(M, options):
        return bareiss_rank(M.to_rows(), M.field)
    return kernel(M, options).rank


# ---------------------------------------------------------------------------
# linear systems


@dataclass
class Solution:
    """A certified particular solution; ``kernel()`` computes the homogeneous part on demand."""

    x: list
    matrix: SparseMatrix
    options: LinalgOptions
    primes: list[int] = dc_field(default_factory=list)

    def kernel(self) -> KernelCertificate:
        return kernel(self.matrix, self.options)


@dataclass
class Inconsistency:
    """Left witness ``y`` with ``y^T M = 0`` and ``y^T b != 0``."""

    y: list


def solve(M: SparseMatrix, rhs: Sequence, options: LinalgOptions = DEFAULT_OPTIONS) -> Solution | None:
    """Some exact solution of ``M x = rhs``, or None when the system is inconsistent."""
    K = M.field
    b = [v if isinstance(v, tuple) or K.kind == GF_KIND else K.from_rational(v.value if isinstance(v, FieldElement) else v) for v in rhs]
    if len(b) != M.nrows:
        raise LinalgError("right-hand side length does not match the row count")
    if _use_dense(M, options) or K.kind == GF_KIND:
        rows = [row + [bi] for row, bi in zip(M.to_rows(), b)]
        if _use_dense(M, options):
            R, pivots = rref_dense(rows, K)
            if pivots and pivots[-1] == M.ncols:
                return None
            x = [K.zero] * M.ncols
            for i, pc in enumerate(pivots):
                x[pc] = R[i][M.ncols]
        else:
            flat = [v for row in rows for v in row]
            img = modular_image(flint.nmod_mat(M.nrows, M.ncols + 1, flat, K.p), lambda piv, n: [n - 1])
            if img.pivots and img.pivots[-1] == M.ncols:
                return None
            x = [0] * M.ncols
            for i, pc in enumerate(img.pivots):
                x[pc] = int(img.block[i, 0])
        if M.mul_vec(x) != b:
            raise LinalgError("solution failed exact verification")
        return Solution(x, M, options)
    return _qq_solve(M, b, options)


def _qq_solve(M: SparseMatrix, b: list, options: LinalgOptions) -> Solution | None:
    n = M.ncols
    found: dict = {}

    def accept(out: ModularOutcome) -> bool:
        if out.pivots and out.pivots[-1] == n:
            witness = inconsistency_witness(M, b, options)
            if witness is None:
                return False
            found["witness"] = witness
            return True
        x = [mpq(0)] * n
        for i, pc in enumerate(out.pivots):
            x[pc] = out.values[i][0]
        if M.mul_vec(x) != b:
            return False
        found["x"] = x
        return True

    out = multimodular_rref(lambda p: reduce_mod_p(M, p, [b]), lambda piv, m: [m - 1], accept, options)
    if "witness" in found:
        return None
    return Solution(found["x"], M, options, out.primes)


def inconsistency_witness(M: SparseMatrix, rhs: Sequence, options: LinalgOptions = DEFAULT_OPTIONS) -> Inconsistency | None:
    """A certified reason why ``M x = rhs`` has no solution (None if it has one)."""
    K = M.field
    b = [K.from_rational(v) if not isinstance(v, tuple) else v for v in rhs]
    T = M.transpose()
    entries = dict(T.entries)
    for i, v in enumerate(b):
        if not K.is_zero(v):
            entries[(M.ncols, i)] = v
    A = SparseMatrix(M.ncols + 1, M.nrows, entries, K)
    rhs2 = [K.zero] * M.ncols + [K.one]
    sol = solve(A, rhs2, options)
    return None if sol is None else Inconsistency(sol.x)
