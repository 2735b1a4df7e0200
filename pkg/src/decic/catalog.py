"""Built-in constants: the degree-(2,2,2,2) forms U0..U5, F1, F2, the target-side
building blocks H/Q/G/F0, the decic f, and the point lists used by the checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from .field import QQ, QQi, FieldSpec, extension
from .poly import Polynomial, Ring, graded_ring
from .symmetry import ProductPoint, grid_points

SOURCE_FORMS = {
    "U0": "x20*x21*x30*x31*(x10^2+x11^2)*(x40^2+x41^2) - x10*x11*x40*x41*(x20^2+x21^2)*(x30^2+x31^2)",
    "U1": "x10*x11*x30*x31*(x20^2+x21^2)*(x40^2+x41^2) + x20*x21*x40*x41*(x10^2+x11^2)*(x30^2+x31^2)",
    "U2": "(x10^2*x20^2+x11^2*x21^2)*(x30^2*x40^2+x31^2*x41^2)",
    "U3": "(x11^2*x20^2+x10^2*x21^2)*(x31^2*x40^2+x30^2*x41^2)",
    "U4": "4*x10*x11*x20*x21*x30*x31*x40*x41",
    "P": "(x10^2+x11^2)*(x20^2+x21^2)*(x30^2+x31^2)*(x40^2+x41^2)",
    "F1": "(x20*x30-x21*x31)*(x11*x40+x10*x41) - i*(x20*x31-x21*x30)*(x10*x40+x11*x41)",
    "F2": "(x20*x30-x21*x31)*(x11*x40+x10*x41) + i*(x20*x31-x21*x30)*(x10*x40+x11*x41)",
}

# U5 = U0 + U2/2 + U3/2 + U4 + s*P/2 with s = -1 ("minus") or s = +1 ("plus")
U5_VARIANTS = {"minus": -1, "plus": 1}

TARGET_FORMS = {
    "H0": "u0",
    "H1": "u1",
    "H2": "u2 - u3",
    "H3": "-2*u0 + u2 + u3 - 2*u4",
    "H4": "u2 + u3 + 2*u4",
    "Q0": "u4^2 - u2*u3",
    "Q1": "(u0 + u4)^2 - u2*u3",
    "G0": "H1^2*H3 + (Q0 - 2*H0*u4)*H4 + 2*H0*Q0",
    "G0_alt": "(H0^2 + H1^2)*H3 + 2*H4*Q0 + (2*H0 - H4)*Q1",
    "G1": "H1^2*H3 + Q1*H4",
    "F0": "H4*G1 + 4*(3*u3 + u4)*H0*H1^2 - 2*H0^2*H4^2 - H0*H4^3",
}

# the decic as (outer multiplier, bracket) blocks
_BRACKETS = (
    "(H0^2 + Q1)^2 + Q1*(4*H1^2 - (H3 - H4)*(4*H0 + 3*H4))",
    "2*(Q0 - Q1)*(6*H1^2*H2 - 2*H3*H4^2 + 3*H4^3 - 6*H4*Q0)"
    " + 4*Q0*H0^3 + 4*Q1*(4*H0*H1^2 + H0*Q0 + 3*H4*Q0) - 12*H4*Q1^2"
    " + F0*(H3 - H4) + 2*G0*(H4*(H3 - H4) + 2*(Q0 - Q1 - H1^2))",
    "H0^2*Q0^2",
)
DECIC_BLOCKS = (("G1^2", _BRACKETS[0]), ("Q1*G1", _BRACKETS[1]), ("4*Q1^2", _BRACKETS[2]))
# the same brackets with the outer multipliers Q1^2 and G1^2 swapped; this layout
# is inhomogeneous (degrees 8, 10, 12) and is kept to show that it cannot match
DECIC_BLOCKS_SWAPPED = (("Q1^2", _BRACKETS[0]), ("Q1*G1", _BRACKETS[1]), ("4*G1^2", _BRACKETS[2]))

# the seven singular surfaces, as generator pairs (with the alternative descriptions)
SURFACES = {
    "S1": ("H2", "H3"),
    "S20": ("H0", "Q0"),
    "S21": ("H1", "Q1"),
    "S30": ("H0", "G0"),
    "S31": ("H1", "G0"),
    "S4": ("H2", "F0"),
    "S6": ("Q0", "G1"),
}
SURFACE_ALTERNATIVES = {"S20": ("H0", "Q1"), "S30": ("H0", "G1")}
TACNODE_IDEALS = {"S1": ("H2", "H3"), "S20": ("H0", "Q1"), "S21": ("H1", "Q1")}

# Hessian test points on the surfaces and the expected ranks; entries are
# rationals or the string "1/t" for 1/sqrt(5) in QQ[t]/(t^2 - 5)
HESSIAN_POINTS = (
    ("S30", (0, 1, 1, -1, 0), 2),
    ("S31", (3, 0, 0, 4, 4), 2),
    ("S4", (2, "1/t", -2, -2, 1), 2),
    ("S6", (1, -1, 1, 0, 0), 2),
    ("S1", (1, 1, 5, 5, 4), 1),
    ("S20", (0, 1, 4, 1, -2), 1),
    ("S21", (1, 0, 4, 1, 1), 1),
)
SQRT5_MODULUS = (-5, 0, 1)
SMOOTH_POINT_MODULUS = (108, 0, -68, 0, 11)  # 11 t^4 - 68 t^2 + 108, low degree first
SMOOTH_POINT = (1, "t", 3, 1, 0)

JACOBIAN_POINT = ((1, 1), (1, 0), (1, -1), (1, 2))
# a point where the differential does reach rank 4 (found by a small search)
GENERIC_POINT = ((1, 1), (1, 2), (1, 3), (1, 5))
ORBIT_REPRESENTATIVES = (
    ((0, 1), (0, 1), (1, "-i"), (1, 1)),
    ((0, 1), (1, 0), (1, "-i"), (1, -1)),
)


@lru_cache(maxsize=None)
def source_ring() -> Ring:
    return graded_ring(QQi())


@lru_cache(maxsize=None)
def rational_source_ring() -> Ring:
    return graded_ring(QQ())


@lru_cache(maxsize=None)
def target_ring(n: int = 5, field: FieldSpec | None = None) -> Ring:
    """QQ[u0..u_{n-1}]."""
    return Ring(field or QQ(), tuple(f"u{k}" for k in range(n)))


@dataclass
class Catalog:
    """Parsed constants; source forms over QQ(i), target forms over QQ[u0..u4]."""

    u5_variant: str = "minus"

    @cached_property
    def source(self) -> dict[str, Polynomial]:
        R = source_ring()
        out = {name: R.parse(text) for name, text in SOURCE_FORMS.items()}
        for variant, s in U5_VARIANTS.items():
            out[f"U5_{variant}"] = out["U0"] + out["U2"] / 2 + out["U3"] / 2 + out["U4"] + out["P"] * s / 2
        out["U5"] = out[f"U5_{self.u5_variant}"]
        return out

    def rational(self, name: str) -> Polynomial:
        """A source form with rational coefficients, moved to QQ[x10..x41]."""
        p = self.source[name]
        R = rational_source_ring()
        K = p.field
        return Polynomial(R, {e: K.rational_part(c) for e, c in p.terms.items()})

    def u_forms(self, variant: str | None = None) -> list[Polynomial]:
        v = variant or self.u5_variant
        return [self.rational(n) for n in ("U0", "U1", "U2", "U3", "U4", f"U5_{v}")]

    @cached_property
    def target(self) -> dict[str, Polynomial]:
        R = target_ring()
        out: dict[str, Polynomial] = {}
        for name, text in TARGET_FORMS.items():
            out[name] = R.parse(text) if name.startswith("H") or name.startswith("Q") else _parse_with(R, text, out)
        out["f"] = decic(out)
        out["f_swapped"] = decic(out, DECIC_BLOCKS_SWAPPED)
        return out

    def point(self, coords, field: FieldSpec) -> list:
        return [_coordinate(c, field) for c in coords]


def _parse_with(R: Ring, text: str, names: dict) -> Polynomial:
    from .parse import parse

    return parse(text, R, names)


def decic(blocks: dict[str, Polynomial], layout=DECIC_BLOCKS) -> Polynomial:
    """Expand the decic from the H/Q/G/F0 building blocks."""
    R = blocks["H0"].ring
    total = R.zero()
    for mult, bracket in layout:
        total = total + _parse_with(R, mult, blocks) * _parse_with(R, bracket, blocks)
    return total


def _coordinate(c, field: FieldSpec):
    from .field import FieldElement

    if isinstance(c, str):
        if c == "t":
            return FieldElement(field, field.generator())
        if c == "1/t":
            return FieldElement(field, field.inv(field.generator()))
        if c == "-i":
            return FieldElement(field, field.neg(field.imaginary_unit()))
        if c == "i":
            return FieldElement(field, field.imaginary_unit())
        raise ValueError(f"unknown symbolic coordinate {c!r}")
    return FieldElement(field, field.from_rational(c))


def sqrt5_field() -> FieldSpec:
    return extension(SQRT5_MODULUS)


def smooth_point_field() -> FieldSpec:
    return extension(SMOOTH_POINT_MODULUS)


# ---------------------------------------------------------------------------
# point lists


def _pairs(field: FieldSpec):
    I = field.imaginary_unit()
    mI = field.neg(I)
    axes = [(0, 1), (1, 0)]
    reals = [(1, 1), (1, -1)]
    imags = [(1, I), (1, mI)]
    return axes, reals, imags


def fixed_point_sets(field: FieldSpec | None = None) -> dict[str, list[ProductPoint]]:
    K = field or QQi()
    axes, reals, imags = _pairs(K)
    return {
        "g^2": grid_points(K, [axes] * 4),
        "h^2": grid_points(K, [reals] * 4),
        "g^2*h^2": grid_points(K, [imags] * 4),
    }


def base_points(field: FieldSpec | None = None) -> list[ProductPoint]:
    """The 64 common zeros of U0..U5."""
    K = field or QQi()
    axes, reals, imags = _pairs(K)
    return (
        grid_points(K, [axes, axes, reals, imags])
        + grid_points(K, [axes, axes, imags, reals])
        + grid_points(K, [reals, imags, axes, axes])
        + grid_points(K, [imags, reals, axes, axes])
    )


def orbit_representatives(field: FieldSpec | None = None) -> list[ProductPoint]:
    K = field or QQi()
    return [ProductPoint.make(K, [tuple(_coordinate(c, K) for c in pair) for pair in rep]) for rep in ORBIT_REPRESENTATIVES]
