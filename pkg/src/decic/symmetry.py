"""The group G = <g, h> = Z4 x| Z4 acting on (P^1)^4 and on its coordinate ring.

An :class:`ActionSpec` is a ring endomorphism of the bigraded ring: factor ``j``
variables are sent to linear forms in the variables of factor ``perm[j]``,

    (x_j0, x_j1)^T  |->  M_j . (x_perm[j]0, x_perm[j]1)^T,

and the result is multiplied by a global scalar.  ``compose(a, b)`` is the
operator ``a o b`` (apply ``b`` first).

Points are acted on through the substitution maps, with the convention
``act_on_point(w, x) = Phi_{w^-1}(x)`` so that
``apply_action(w, p)(x) = scalar * p(act_on_point(w^-1, x))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .field import FieldElement, FieldSpec, QQi
from .poly import Polynomial, Ring, monomials_of

Matrix2 = tuple[tuple[object, object], tuple[object, object]]


class ActionError(ValueError):
    pass


def _mat_mul(K: FieldSpec, A: Matrix2, B: Matrix2) -> Matrix2:
    return tuple(
        tuple(K.add(K.mul(A[r][0], B[0][c]), K.mul(A[r][1], B[1][c])) for c in range(2)) for r in range(2)
    )


def _mat_det(K: FieldSpec, A: Matrix2):
    return K.sub(K.mul(A[0][0], A[1][1]), K.mul(A[0][1], A[1][0]))


@dataclass(frozen=True)
class ActionSpec:
    """Factor permutation + per-factor 2x2 matrices + global scalar (raw field values)."""

    field: FieldSpec
    perm: tuple[int, int, int, int]
    matrices: tuple[Matrix2, Matrix2, Matrix2, Matrix2]
    scalar: object

    def __post_init__(self):
        K = self.field
        if sorted(self.perm) != [0, 1, 2, 3]:
            raise ActionError(f"{self.perm} is not a permutation of the four factors")
        for M in self.matrices:
            if K.is_zero(_mat_det(K, M)):
                raise ActionError("factor matrices must be invertible")
        if K.is_zero(self.scalar):
            raise ActionError("global scalar must be nonzero")

    @classmethod
    def make(cls, field: FieldSpec, perm: Sequence[int], matrices: Sequence, scalar=1) -> "ActionSpec":
        def conv(x):
            if isinstance(x, FieldElement):
                return field.coerce(x.value, x.field)
            if isinstance(x, tuple):
                return x
            return field.from_rational(x)

        mats = tuple(tuple(tuple(conv(x) for x in row) for row in M) for M in matrices)
        return cls(field, tuple(perm), mats, conv(scalar))

    def with_scalar(self, scalar) -> "ActionSpec":
        K = self.field
        s = K.coerce(scalar.value, scalar.field) if isinstance(scalar, FieldElement) else K.from_rational(scalar)
        return ActionSpec(K, self.perm, self.matrices, s)

    def scaled(self, c) -> "ActionSpec":
        """Same substitution, scalar multiplied by ``c``."""
        K = self.field
        v = K.coerce(c.value, c.field) if isinstance(c, FieldElement) else (c if isinstance(c, tuple) else K.from_rational(c))
        return ActionSpec(K, self.perm, self.matrices, K.mul(self.scalar, v))

    def to_field(self, field: FieldSpec) -> "ActionSpec":
        if field == self.field:
            return self
        conv = lambda x: field.coerce(x, self.field)  # noqa: E731
        mats = tuple(tuple(tuple(conv(x) for x in row) for row in M) for M in self.matrices)
        return ActionSpec(field, self.perm, mats, conv(self.scalar))

    def is_identity(self) -> bool:
        K = self.field
        ident = ((K.one, K.zero), (K.zero, K.one))
        return self.perm == (0, 1, 2, 3) and all(M == ident for M in self.matrices) and self.scalar == K.one

    def __str__(self) -> str:
        K = self.field
        mats = "; ".join(
            "[" + ", ".join(K.to_str(x) for x in M[0]) + " | " + ", ".join(K.to_str(x) for x in M[1]) + "]"
            for M in self.matrices
        )
        return f"ActionSpec(perm={tuple(p + 1 for p in self.perm)}, matrices={mats}, scalar={K.to_str(self.scalar)})"


def identity_spec(field: FieldSpec) -> ActionSpec:
    I = ((1, 0), (0, 1))
    return ActionSpec.make(field, (0, 1, 2, 3), (I, I, I, I), 1)


def compose(a: ActionSpec, b: ActionSpec) -> ActionSpec:
    """The operator ``a o b``."""
    if a.field != b.field:
        raise ActionError("cannot compose actions over different fields")
    K = a.field
    perm = tuple(a.perm[b.perm[j]] for j in range(4))
    mats = tuple(_mat_mul(K, b.matrices[j], a.matrices[b.perm[j]]) for j in range(4))
    return ActionSpec(K, perm, mats, K.mul(a.scalar, b.scalar))


def power(spec: ActionSpec, k: int) -> ActionSpec:
    result = identity_spec(spec.field)
    for _ in range(k):
        result = compose(spec, result)
    return result


def order_of(spec: ActionSpec, bound: int = 64) -> int:
    if spec.field.characteristic != 0:
        raise ActionError("order_of expects a characteristic-zero field")
    cur = spec
    for k in range(1, bound + 1):
        if cur.is_identity():
            return k
        cur = compose(spec, cur)
    raise ActionError(f"order exceeds the bound {bound}")


def _substitution_images(spec: ActionSpec, ring: Ring) -> list[Polynomial]:
    if ring.grading is None:
        raise ActionError("actions need a graded ring")
    K = ring.field
    conv = lambda x: K.coerce(x, spec.field)  # noqa: E731
    imgs: list[Polynomial | None] = [None] * ring.nvars
    for j, (a, b) in enumerate(ring.grading):
        ta, tb = ring.grading[spec.perm[j]]
        M = spec.matrices[j]
        for r, var in enumerate((a, b)):
            ea = [0] * ring.nvars
            eb = [0] * ring.nvars
            ea[ta] = 1
            eb[tb] = 1
            imgs[var] = Polynomial(ring, {tuple(ea): conv(M[r][0]), tuple(eb): conv(M[r][1])}, _normalized=False)
    return imgs  # type: ignore[return-value]


def _check_fields(spec: ActionSpec, ring: Ring) -> None:
    if spec.field != ring.field and spec.field.kind != "QQ":
        raise ActionError(f"action over {spec.field} cannot act on a ring over {ring.field}")


def apply_action(spec: ActionSpec, p: Polynomial) -> Polynomial:
    _check_fields(spec, p.ring)
    imgs = _substitution_images(spec, p.ring)
    K = p.field
    return p.substitute(imgs, p.ring).scale(K.coerce(spec.scalar, spec.field))


def action_matrix(spec: ActionSpec, ring: Ring, multidegree: Sequence[int]):
    """Matrix of ``apply_action(spec, .)`` on the monomials of ``multidegree``.

    Column ``j`` holds the coordinates of the image of the ``j``-th monomial.
    """
    from .linalg import SparseMatrix

    _check_fields(spec, ring)
    basis = monomials_of(multidegree, ring)
    index = {e: i for i, e in enumerate(basis)}
    K = ring.field
    imgs = _substitution_images(spec, ring)
    s = K.coerce(spec.scalar, spec.field)
    entries = {}
    for j, e in enumerate(basis):
        img = Polynomial(ring, {e: K.one}).substitute(imgs, ring)
        for em, c in img.terms.items():
            entries[(index[em], j)] = K.mul(c, s)
    return SparseMatrix(len(basis), len(basis), entries, K)


def isotypic_slice(pairs: Iterable[tuple[ActionSpec, object]], ring: Ring, multidegree: Sequence[int]) -> list[Polynomial]:
    """Basis of {p of the given multidegree : spec_i(p) = c_i p for all i}."""
    from .linalg import SparseMatrix, kernel

    K = ring.field
    basis = monomials_of(multidegree, ring)
    n = len(basis)
    entries = {}
    row = 0
    for spec, c in pairs:
        cv = K.coerce(c.value, c.field) if isinstance(c, FieldElement) else (c if isinstance(c, tuple) else K.from_rational(c))
        M = action_matrix(spec, ring, multidegree)
        block = dict(M.entries)
        for i in range(n):
            block[(i, i)] = K.sub(block.get((i, i), K.zero), cv)
        for (i, j), v in block.items():
            if not K.is_zero(v):
                entries[(row + i, j)] = v
        row += n
    A = SparseMatrix(row, n, entries, K)
    cert = kernel(A)
    out = []
    for v in cert.basis:
        out.append(Polynomial(ring, {basis[j]: x for j, x in enumerate(v)}, _normalized=False))
    return out


# ---------------------------------------------------------------------------
# the specific liftings

A_MAT = ((1, 0), (0, -1))
B_MAT = ((0, 1), (1, 0))
I_MAT = ((1, 0), (0, 1))


def gstar(field: FieldSpec | None = None) -> ActionSpec:
    """g* : x_1a -> x_2a, x_2b -> (-1)^b x_1b, x_3c -> x_4c, x_4d -> (-1)^d x_3d."""
    return ActionSpec.make(field or QQi(), (1, 0, 3, 2), (I_MAT, A_MAT, I_MAT, A_MAT), 1)


def hstar(field: FieldSpec | None = None) -> ActionSpec:
    """h* : x_1a -> x_3a', x_2b -> (-1)^b' x_4b', x_3c -> x_1c, x_4d -> (-1)^d x_2d."""
    return ActionSpec.make(field or QQi(), (2, 3, 0, 1), (B_MAT, ((0, -1), (1, 0)), I_MAT, A_MAT), 1)


def sigma(field: FieldSpec | None = None) -> ActionSpec:
    """The involution (id, id, B, B)."""
    return ActionSpec.make(field or QQi(), (0, 1, 2, 3), (I_MAT, I_MAT, B_MAT, B_MAT), 1)


def rho1_g() -> ActionSpec:
    K = QQi()
    return gstar(K).scaled(K.imaginary_unit())


def rho1_h() -> ActionSpec:
    return hstar(QQi()).scaled(-1)


def rho2_g() -> ActionSpec:
    # scalar of rho1(g) squared: i^2 = -1
    return gstar(QQi()).scaled(-1)


def rho2_h() -> ActionSpec:
    return hstar(QQi())


NAMED_SPECS = {
    "gstar": gstar,
    "hstar": hstar,
    "rho1_g": rho1_g,
    "rho1_h": rho1_h,
    "rho2_g": rho2_g,
    "rho2_h": rho2_h,
    "sigma": sigma,
}


def named_spec(name: str) -> ActionSpec:
    try:
        return NAMED_SPECS[name]()
    except KeyError:
        raise ActionError(f"unknown action {name!r}; choose from {', '.join(NAMED_SPECS)}") from None


# ---------------------------------------------------------------------------
# group elements g^a h^b


@dataclass(frozen=True, order=True)
class GroupElement:
    """g^a h^b in G, using h^b g^c = g^(3^b c) h^b."""

    a: int = 0
    b: int = 0

    def __post_init__(self):
        object.__setattr__(self, "a", self.a % 4)
        object.__setattr__(self, "b", self.b % 4)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.a + pow(3, self.b, 4) * other.a, self.b + other.b)

    def inverse(self) -> "GroupElement":
        for w in all_elements():
            if (self * w).is_identity():
                return w
        raise AssertionError("unreachable")

    def is_identity(self) -> bool:
        return self.a == 0 and self.b == 0

    def order(self) -> int:
        w, k = self, 1
        while not w.is_identity():
            w, k = w * self, k + 1
        return k

    def __str__(self) -> str:
        parts = []
        if self.a:
            parts.append("g" if self.a == 1 else f"g^{self.a}")
        if self.b:
            parts.append("h" if self.b == 1 else f"h^{self.b}")
        return "*".join(parts) or "1"


G_GEN = GroupElement(1, 0)
H_GEN = GroupElement(0, 1)


@lru_cache(maxsize=None)
def all_elements() -> tuple[GroupElement, ...]:
    return tuple(GroupElement(a, b) for a in range(4) for b in range(4))


def represent(w: GroupElement, gen_g: ActionSpec, gen_h: ActionSpec) -> ActionSpec:
    """gen_g^a o gen_h^b."""
    return compose(power(gen_g, w.a), power(gen_h, w.b))


def rho1(w: GroupElement) -> ActionSpec:
    return represent(w, rho1_g(), rho1_h())


def rho2(w: GroupElement) -> ActionSpec:
    return represent(w, rho2_g(), rho2_h())


# ---------------------------------------------------------------------------
# points of (P^1)^4


def normalize_pair(K: FieldSpec, x0, x1) -> tuple:
    if K.is_zero(x0):
        if K.is_zero(x1):
            raise ActionError("(0:0) is not a projective point")
        return (K.zero, K.one)
    return (K.one, K.div(x1, x0))


@dataclass(frozen=True)
class ProductPoint:
    """A point of (P^1)^4, each factor normalized by its first nonzero coordinate."""

    field: FieldSpec
    coords: tuple[tuple[object, object], ...]

    @classmethod
    def make(cls, field: FieldSpec, pairs: Sequence[Sequence]) -> "ProductPoint":
        def conv(x):
            if isinstance(x, FieldElement):
                return field.coerce(x.value, x.field)
            if isinstance(x, tuple):
                return x
            return field.from_rational(x)

        if len(pairs) != 4:
            raise ActionError("a point of (P^1)^4 needs four coordinate pairs")
        return cls(field, tuple(normalize_pair(field, conv(a), conv(b)) for a, b in pairs))

    def affine(self) -> list[FieldElement]:
        """The 8 coordinates (x10, x11, ..., x41) of the normalized representative."""
        return [FieldElement(self.field, v) for pair in self.coords for v in pair]

    def __str__(self) -> str:
        K = self.field
        return "(" + ",".join(f"({K.to_str(a)}:{K.to_str(b)})" for a, b in self.coords) + ")"


def substitute_point(spec: ActionSpec, pt: ProductPoint) -> ProductPoint:
    """Phi_spec(pt): factor j becomes M_j . pt[perm[j]]."""
    K = pt.field
    spec = spec.to_field(K) if spec.field != K else spec
    out = []
    for j in range(4):
        M = spec.matrices[j]
        y0, y1 = pt.coords[spec.perm[j]]
        z0 = K.add(K.mul(M[0][0], y0), K.mul(M[0][1], y1))
        z1 = K.add(K.mul(M[1][0], y0), K.mul(M[1][1], y1))
        out.append(normalize_pair(K, z0, z1))
    return ProductPoint(K, tuple(out))


def point_spec(w: GroupElement) -> ActionSpec:
    """A lifting of w used for points (projective, so the scalar is irrelevant)."""
    return represent(w, gstar(), hstar())


def act_on_point(w: GroupElement, pt: ProductPoint) -> ProductPoint:
    return substitute_point(point_spec(w.inverse()), pt)


@dataclass
class OrbitPartition:
    orbits: list[list[ProductPoint]]
    stabilizers: dict[ProductPoint, list[GroupElement]]

    @property
    def sizes(self) -> list[int]:
        return [len(o) for o in self.orbits]

    def is_free(self) -> bool:
        return all(len(s) == 1 for s in self.stabilizers.values())

    def orbit_of(self, pt: ProductPoint) -> int:
        for k, o in enumerate(self.orbits):
            if pt in o:
                return k
        raise KeyError(str(pt))


def orbits(points: Iterable[ProductPoint], group: Sequence[GroupElement] | None = None) -> OrbitPartition:
    """Partition a finite action-closed set into orbits, with stabilizers."""
    pts = list(dict.fromkeys(points))
    if group is None:
        group = all_elements()
    pool = set(pts)
    images = {pt: {w: act_on_point(w, pt) for w in group} for pt in pts}
    for pt, imgs in images.items():
        for w, q in imgs.items():
            if q not in pool:
                raise ActionError(f"set is not closed under the action: {w} maps {pt} to {q}")
    seen: set = set()
    out = []
    for pt in pts:
        if pt in seen:
            continue
        orb = list(dict.fromkeys(images[pt].values()))
        seen.update(orb)
        out.append(orb)
    stabs = {pt: [w for w, q in images[pt].items() if q == pt] for pt in pts}
    return OrbitPartition(out, stabs)


def fixed_points(w: GroupElement, points: Iterable[ProductPoint]) -> list[ProductPoint]:
    return [pt for pt in points if act_on_point(w, pt) == pt]


def grid_points(field: FieldSpec, choices: Sequence[Sequence[tuple]]) -> list[ProductPoint]:
    """All points whose j-th factor ranges over ``choices[j]``."""
    return [ProductPoint.make(field, combo) for combo in itertools.product(*choices)]
