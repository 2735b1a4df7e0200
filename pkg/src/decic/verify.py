"""Named checks over the built-in constants, assembled into a VerificationReport."""

from __future__ import annotations

import hashlib
import json
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable

import flint

from .catalog import (
    DECIC_BLOCKS_SWAPPED,
    GENERIC_POINT,
    HESSIAN_POINTS,
    JACOBIAN_POINT,
    SMOOTH_POINT,
    SMOOTH_POINT_MODULUS,
    SURFACE_ALTERNATIVES,
    SURFACES,
    TACNODE_IDEALS,
    U5_VARIANTS,
    Catalog,
    base_points,
    decic,
    fixed_point_sets,
    orbit_representatives,
    smooth_point_field,
    source_ring,
    sqrt5_field,
    target_ring,
)
from .field import QQ, QQi, FieldSpec
from .linalg import DEFAULT_OPTIONS, LinalgOptions, SparseMatrix, prime_stream, rank
from .poly import Polynomial, from_flint, hessian, monomials_of_degree, proportional, to_flint
from .relations import RelationSpace, in_span, membership, proportional_mod_ideal, relation_space
from .report import CheckRecord, VerificationReport
from .symmetry import (
    GroupElement,
    ProductPoint,
    act_on_point,
    action_matrix,
    all_elements,
    apply_action,
    compose,
    gstar,
    hstar,
    isotypic_slice,
    order_of,
    orbits,
    power,
    rho1,
    rho1_g,
    rho1_h,
    rho2,
    rho2_g,
    rho2_h,
    sigma,
)

RELATION_DEGREE = 10
U_NAMES = ("U0", "U1", "U2", "U3", "U4", "U5")


class VerifyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# golden values


def default_golden_path() -> Path:
    return Path(str(resources.files("decic") / "data" / "golden.json"))


def load_golden(path: Path | None = None) -> dict:
    path = path or default_golden_path()
    if not path.exists():
        return {}
    return json.loads(path.read_text())


def write_golden(values: dict, path: Path | None = None) -> None:
    path = path or default_golden_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(values, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# shared state between checks


@dataclass
class VerifyContext:
    options: LinalgOptions = DEFAULT_OPTIONS
    max_degree: int = RELATION_DEGREE
    golden: dict = field(default_factory=load_golden)
    frozen: dict = field(default_factory=dict)
    _memo: dict = field(default_factory=dict)
    _locks: dict = field(default_factory=dict)
    _guard: threading.Lock = field(default_factory=threading.Lock)

    def memo(self, key, compute: Callable):
        with self._guard:
            lock = self._locks.setdefault(key, threading.Lock())
        with lock:
            if key not in self._memo:
                self._memo[key] = compute()
            return self._memo[key]

    @property
    def catalog(self) -> Catalog:
        return self.memo("catalog", lambda: Catalog(self.variant()))

    def variant(self) -> str:
        """The U5 variant proportional to F1*F2 (check_f confirms it against the relation)."""

        def run():
            src = Catalog().source
            prod = src["F1"] * src["F2"]
            hits = [v for v in U5_VARIANTS if proportional(prod, src[f"U5_{v}"]) is not None]
            if len(hits) != 1:
                raise VerifyError(f"expected exactly one U5 variant proportional to F1*F2, found {hits}")
            return hits[0]

        return self.memo("variant", run)

    def relation(self, variant: str, n: int) -> RelationSpace:
        def run():
            polys = Catalog(variant).u_forms(variant)
            return relation_space(polys, n, U_NAMES, self.options)

        return self.memo(("relation", variant, n), run)

    def restricted_relations(self) -> dict[str, Polynomial | None]:
        """R|_{u5=0} moved to QQ[u0..u4], per U5 variant."""

        def run():
            T = target_ring()
            out = {}
            for variant in U5_VARIANTS:
                space = self.relation(variant, RELATION_DEGREE)
                if space.dimension != 1:
                    out[variant] = None
                    continue
                R = space.basis[0].primitive()
                out[variant] = _drop_last(R.restrict({"u5": 0}), T)
            return out

        return self.memo("restricted", run)

    def check_golden(self, rec: CheckRecord, name: str, value) -> None:
        """Record a derived value and compare it with the frozen one, if any."""
        rec.record(name, value, "derived")
        got = rec.values[name]["value"]
        self.frozen.setdefault(rec.id, {})[name] = got
        want = self.golden.get(rec.id, {}).get(name)
        if want is None:
            rec.note(f"{name} has no frozen golden value")
        else:
            rec.values[name]["expected"] = want
            if want != got:
                rec.fail(f"{name}: got {got}, frozen value {want}")


def _drop_last(p: Polynomial, ring) -> Polynomial:
    return Polynomial(ring, {e[: ring.nvars]: c for e, c in p.terms.items()})


def _field_str(K: FieldSpec, v) -> str:
    return K.to_str(v)


def _trace(M: SparseMatrix) -> object:
    K = M.field
    t = K.zero
    for i in range(min(M.nrows, M.ncols)):
        t = K.add(t, M.get(i, i))
    return t


# ---------------------------------------------------------------------------
# checks


def _negated(M: SparseMatrix) -> SparseMatrix:
    K = M.field
    return SparseMatrix(M.nrows, M.ncols, {k: K.neg(v) for k, v in M.entries.items()}, K)


def check_group(ctx: VerifyContext, rec: CheckRecord) -> None:
    # liftings are compared as operators on a fixed multidegree: the matrix
    # tuples themselves are only defined up to a sign in each factor
    K = QQi()
    ring = source_ring()
    deg1 = (1, 1, 1, 1)
    g, h = gstar(K), hstar(K)
    rec.claim("order_gstar", order_of(g), 4)
    rec.claim("order_hstar", order_of(h), 4)
    lhs = action_matrix(compose(g, h), ring, deg1)
    rhs = action_matrix(compose(h, power(g, 3)), ring, deg1)
    rec.claim("gstar_hstar_equals_minus_hstar_gstar3", lhs == _negated(rhs), True)

    elements = all_elements()
    for name, rep, md in (("rho1", rho1, deg1), ("rho2", rho2, (2, 2, 2, 2))):
        mats = {w: action_matrix(rep(w), ring, md) for w in elements}
        bad = [f"({a})*({b})" for a in elements for b in elements if mats[a] @ mats[b] != mats[a * b]]
        rec.claim(f"{name}_homomorphism_pairs", len(elements) ** 2 - len(bad), len(elements) ** 2)
        if bad:
            rec.fail(f"{name} fails on {bad[:3]}")
        if name == "rho1":
            traces = [_field_str(K, _trace(mats[w])) for w in elements]
    gh = action_matrix(compose(rho1_g(), rho1_h()), ring, deg1)
    hg3 = action_matrix(compose(rho1_h(), power(rho1_g(), 3)), ring, deg1)
    rec.claim("rho1_g_h_equals_rho1_h_g3", gh == hg3, True)
    rec.claim("rho1_character", traces, ["16"] + ["0"] * (len(elements) - 1))
    rec.record("elements", [str(w) for w in elements], "info")


def check_isotypic(ctx: VerifyContext, rec: CheckRecord) -> None:
    ring = source_ring()
    cat = Catalog()
    src = cat.source
    opts = ctx.options
    invariant = isotypic_slice([(rho1_g(), 1), (rho1_h(), 1)], ring, (1, 1, 1, 1))
    twisted = isotypic_slice([(rho1_g(), -1), (rho1_h(), 1)], ring, (1, 1, 1, 1))
    quadrics = isotypic_slice([(rho2_g(), -1), (rho2_h(), 1)], ring, (2, 2, 2, 2))
    rec.claim("slice_dimensions", [len(invariant), len(twisted), len(quadrics)], [1, 1, 6])
    rec.claim("F1_in_invariant_slice", in_span(src["F1"], invariant, opts), True)
    rec.claim("F2_in_twisted_slice", in_span(src["F2"], twisted, opts), True)
    inside = {}
    for name in ("U0", "U1", "U2", "U3", "U4", "U5_minus", "U5_plus", "P"):
        inside[name] = in_span(src[name], quadrics, opts)
    rec.record("in_quadric_slice", inside)
    for name in ("U0", "U1", "U2", "U3", "U4"):
        if not inside[name]:
            rec.fail(f"{name} is not in the (-,+) slice of degree (2,2,2,2)")
    if not any(inside[f"U5_{v}"] for v in U5_VARIANTS):
        rec.fail("neither U5 variant is in the (-,+) slice")

    s = sigma()
    fixed = {name: apply_action(s, src[name]) == src[name] for name in ("U0", "U1", "U2", "U3", "U4", "U5_minus", "U5_plus")}
    rec.record("sigma_fixes", fixed)
    if not all(fixed[n] for n in ("U0", "U1", "U2", "U3", "U4")):
        rec.fail("sigma does not fix every U_i")
    c12 = proportional(apply_action(s, src["F1"]), src["F2"])
    c21 = proportional(apply_action(s, src["F2"]), src["F1"])
    if c12 is None or c21 is None or c12.is_zero():
        rec.fail("sigma does not exchange F1 and F2 up to scalars")
        return
    ctx.check_golden(rec, "sigma_F1_over_F2", c12)
    ctx.check_golden(rec, "sigma_F2_over_F1", c21)


def check_points(ctx: VerifyContext, rec: CheckRecord) -> None:
    K = QQi()
    cat = Catalog()
    g2, h2 = GroupElement(2, 0), GroupElement(0, 2)
    involutions = {"g^2": g2, "h^2": h2, "g^2*h^2": g2 * h2}
    sets = fixed_point_sets(K)
    for name, pts in sets.items():
        w = involutions[name]
        fixed = sum(act_on_point(w, pt) == pt for pt in pts)
        rec.claim(f"fixed_by_{name}", [len(set(pts)), fixed], [16, 16])

    base = base_points(K)
    rec.claim("base_points", len(set(base)), 64)
    forms = {n: cat.source[n] for n in ("U0", "U1", "U2", "U3", "U4", "U5_minus", "U5_plus")}
    nonvanishing = [f"{n} at {pt}" for pt in base for n, u in forms.items() if not u.evaluate(pt.affine()).is_zero()]
    rec.claim("all_forms_vanish", not nonvanishing, True)
    part = orbits(base)
    rec.claim("orbit_sizes", sorted(part.sizes), [16, 16, 16, 16])
    rec.claim("free_action", part.is_free(), True)

    F1, F2 = cat.source["F1"], cat.source["F2"]
    on_f1 = [pt for pt in base if F1.evaluate(pt.affine()).is_zero()]
    on_f2 = [pt for pt in base if F2.evaluate(pt.affine()).is_zero()]
    rec.claim("on_F1", len(on_f1), 32)
    part1 = orbits(on_f1)
    rec.claim("F1_orbit_sizes", sorted(part1.sizes), [16, 16])
    rec.record("on_F2", len(on_f2))

    reps = orbit_representatives(K)
    rec.claim("representatives_are_base_points", all(r in part.stabilizers for r in reps), True)
    rec.claim("representatives_in_distinct_orbits", len({part.orbit_of(r) for r in reps}), len(reps))
    rec.record("representatives", [str(r) for r in reps], "info")
    rec.record("F1_at_representatives", [str(F1.evaluate(r.affine())) for r in reps])
    rec.record("F2_at_representatives", [str(F2.evaluate(r.affine())) for r in reps])
    conj = [ProductPoint.make(K, [(K.conj(a), K.conj(b)) for a, b in r.coords]) for r in reps]
    conj_ok = all(c in part1.stabilizers for c in conj) and len({part1.orbit_of(c) for c in conj}) == 2
    rec.record("conjugate_representatives_span_F1_orbits", conj_ok)
    if not all(F1.evaluate(r.affine()).is_zero() for r in reps):
        rec.note("the listed representatives lie on F2 = 0, not on F1 = 0; their complex conjugates represent the two F1 orbits")


def check_relations(ctx: VerifyContext, rec: CheckRecord) -> None:
    top = min(ctx.max_degree, RELATION_DEGREE)
    degrees = list(range(1, top + 1))
    dims: dict[str, list[int]] = {}
    for variant in U5_VARIANTS:
        spaces = [ctx.relation(variant, n) for n in degrees]
        dims[variant] = [s.dimension for s in spaces]
        rec.record(f"primes_{variant}", [len(s.certificate.primes) for s in spaces], "info")
    expected = [0] * min(top, 9) + ([1] if top == RELATION_DEGREE else [])
    rec.record("degrees", degrees)
    for variant in U5_VARIANTS:
        rec.claim(f"dimensions_{variant}", dims[variant], expected)
    if top < RELATION_DEGREE:
        rec.note(f"partial run up to degree {top}")
        return
    variant = ctx.variant()
    rec.record("selected_variant", variant)
    rec.claim("dimensions", dims[variant], expected)
    R = ctx.relation(variant, RELATION_DEGREE).basis[0].primitive()
    text = str(R)
    rec.record("relation_terms", len(R))
    ctx.check_golden(rec, "relation_sha256", hashlib.sha256(text.encode()).hexdigest())
    rec.record("relation", text, "info")
    rec.record("relation_at_u5_zero", str(ctx.restricted_relations()[variant]), "info")


def check_f(ctx: VerifyContext, rec: CheckRecord) -> None:
    cat = Catalog()
    T = cat.target
    f = T["f"]
    swapped = decic(T, DECIC_BLOCKS_SWAPPED)
    rec.record("swapped_layout_degrees", sorted({sum(e) for e in swapped.terms}))
    if not swapped.is_homogeneous():
        rec.note("with Q1^2 on the first bracket and 4*G1^2 on the last the blocks are inhomogeneous; the decic pairs G1^2 with the first bracket and 4*Q1^2 with the last")
    rec.claim("decic_homogeneous_degree", [f.is_homogeneous(), f.total_degree()], [True, 10])
    rec.record("decic_terms", len(f))
    rec.claim("G0_forms_agree", T["G0"] == T["G0_alt"], True)

    restricted = ctx.restricted_relations()
    scalars = {}
    for variant, r in restricted.items():
        c = proportional(r, f) if r is not None and not r.is_zero() else None
        scalars[variant] = None if c is None or c.is_zero() else str(c)
    rec.record("scalar_by_variant", scalars)
    hits = [v for v, c in scalars.items() if c is not None]
    rec.claim("matching_variants", len(hits), 1)
    if len(hits) != 1:
        return
    variant = hits[0]
    ctx.check_golden(rec, "selected_variant", variant)
    ctx.check_golden(rec, "scalar", scalars[variant])
    rec.claim("agrees_with_F1F2_selection", variant == ctx.variant(), True)

    src = cat.source
    prod = src["F1"] * src["F2"]
    ratios = {v: proportional(prod, src[f"U5_{v}"]) for v in U5_VARIANTS}
    rec.record("F1F2_over_U5", {v: (None if c is None else str(c)) for v, c in ratios.items()})
    rec.claim("F1F2_proportional_to_selected_U5", ratios[variant] is not None, True)


def _differential_ranks(forms: list[Polynomial], pairs, options: LinalgOptions) -> tuple[int, int] | None:
    """Rank of the differential of (P^1)^4 -> P^5 at a point of the chart x_i0 = 1.

    Computed twice: as rank([J | U]) - 1 for the affine Jacobian J, and as the
    rank of the Jacobian of the ratios U_j/U_k.  None when every U_j vanishes.
    """
    K = QQ()
    if any(x0 == 0 for x0, _ in pairs):
        raise VerifyError("the chart x_i0 = 1 does not contain this point")
    pt = [K(Fraction(v, x0)) for x0, x1 in pairs for v in (x0, x1)]
    chart_vars = [f"x{i + 1}1" for i in range(4)]
    values = [u.evaluate(pt) for u in forms]
    if all(v.is_zero() for v in values):
        return None
    J = [[u.partial(v).evaluate(pt) for v in chart_vars] for u in forms]
    augmented = SparseMatrix.from_rows([row + [val] for row, val in zip(J, values)], K)
    k = next(i for i, v in enumerate(values) if not v.is_zero())
    # d(U_j/U_k) up to the common factor 1/U_k^2
    ratios = [[values[k] * J[j][c] - values[j] * J[k][c] for c in range(4)] for j in range(len(forms)) if j != k]
    return rank(augmented, options) - 1, rank(SparseMatrix.from_rows(ratios, K), options)


def check_jacobian(ctx: VerifyContext, rec: CheckRecord) -> None:
    cat = ctx.catalog
    forms = cat.u_forms()
    listed = _differential_ranks(forms, JACOBIAN_POINT, ctx.options)
    if listed is None:
        rec.fail("all U_j vanish at the listed point")
    else:
        rec.claim("rank_at_listed_point", list(listed), [4, 4])
    generic = _differential_ranks(forms, GENERIC_POINT, ctx.options)
    rec.record("generic_point", [list(p) for p in GENERIC_POINT], "info")
    rec.record("rank_at_generic_point", list(generic))
    if generic != (4, 4):
        rec.fail("no rank-4 witness for generic finiteness")

    base = base_points(QQi())[0]
    if all(cat.source[n].evaluate(base.affine()).is_zero() for n in U_NAMES):
        rec.record("base_point_rank", f"skipped at {base}: every U_j vanishes", "info")
    T = target_ring(6)
    at = [QQ().one] * 6
    rows = [[g.partial(v).evaluate(at) for v in T.variables] for g in T.gens()]
    rec.claim("identity_map_rank", rank(SparseMatrix.from_rows(rows, QQ()), ctx.options), 6)


def _surface_gens(T: dict, names) -> list[Polynomial]:
    return [T[n] for n in names]


def _singular_certificates(ctx: VerifyContext) -> dict:
    def run():
        T = ctx.catalog.target
        f = T["f"]
        partials = [f.partial(f"u{i}") for i in range(5)]
        out = {"surfaces": {}, "tacnodes": {}}
        for name, pair in SURFACES.items():
            gens = _surface_gens(T, pair)
            certs = [membership(f, gens, 10, ctx.options)] + [membership(p, gens, 9, ctx.options) for p in partials]
            out["surfaces"][name] = certs
        for name, (a, b) in TACNODE_IDEALS.items():
            A, B = T[a], T[b]
            gens = [A**4, A**2 * B, B**2]
            out["tacnodes"][name] = membership(f, gens, 10, ctx.options)
        return out

    return ctx.memo("singular", run)


def check_singular(ctx: VerifyContext, rec: CheckRecord) -> None:
    T = ctx.catalog.target
    certs = _singular_certificates(ctx)
    summary = {}
    for name, pair in SURFACES.items():
        found = [c is not None and c.verify() for c in certs["surfaces"][name]]
        summary[name] = {"ideal": list(pair), "f_and_partials": found}
        if not all(found):
            rec.fail(f"missing certificate for {name}: {found}")
    rec.record("surfaces", summary)
    rec.claim("surface_certificates", sum(all(v["f_and_partials"]) for v in summary.values()), len(SURFACES))

    tac = {}
    for name, (a, b) in TACNODE_IDEALS.items():
        c = certs["tacnodes"][name]
        tac[name] = f"({a}^2, {b})^2: " + ("certified" if c is not None and c.verify() else "missing")
    rec.record("tacnode_memberships", tac)
    rec.claim("tacnode_certificates", sum(v.endswith("certified") for v in tac.values()), len(TACNODE_IDEALS))

    agree = {}
    for name, alt in SURFACE_ALTERNATIVES.items():
        first = SURFACES[name]
        d = max(T[first[1]].total_degree(), T[alt[1]].total_degree())
        fwd = membership(T[alt[1]], _surface_gens(T, first), d, ctx.options) is not None
        back = membership(T[first[1]], _surface_gens(T, alt), d, ctx.options) is not None
        agree[name] = [fwd, back]
    rec.record("alternative_descriptions", agree)
    rec.claim("alternatives_agree", all(all(v) for v in agree.values()), True)

    R = target_ring()
    q1 = T["Q1"].restrict({"u2": R.gen("u3")})
    factors = _factor(q1)
    rec.record("Q1_at_u2_eq_u3_factors", sorted(str(g) for g, _ in factors))
    linear = [g for g, m in factors if g.total_degree() == 1 and m == 1]
    rec.claim("Q1_at_u2_eq_u3_linear_factors", len(linear), 2)
    h3 = T["H3"].restrict({"u2": R.gen("u3")})
    rec.record("H3_at_u2_eq_u3", str(h3))


def _factor(p: Polynomial) -> list[tuple[Polynomial, int]]:
    _, facs = to_flint(p).factor()
    return [(from_flint(g, p.ring), int(m)) for g, m in facs]


def _hessian_rank(ctx: VerifyContext, H, point: list, K: FieldSpec) -> int:
    rows = [[entry.evaluate(point) for entry in row] for row in H]
    return rank(SparseMatrix.from_rows(rows, K), ctx.options)


def check_hessians(ctx: VerifyContext, rec: CheckRecord) -> None:
    f = ctx.catalog.target["f"]
    H = hessian(f)
    got, want, on_f = [], [], []
    rescaled_ok = True
    for name, coords, expected in HESSIAN_POINTS:
        K = sqrt5_field() if any(isinstance(c, str) for c in coords) else QQ()
        pt = ctx.catalog.point(coords, K)
        r = _hessian_rank(ctx, H, pt, K)
        for lam in (2, -3):
            if _hessian_rank(ctx, H, [x * lam for x in pt], K) != r:
                rescaled_ok = False
        got.append(r)
        want.append(expected)
        on_f.append(f.evaluate(pt).is_zero())
    rec.record("points", [name for name, _, _ in HESSIAN_POINTS], "info")
    rec.claim("ranks", got, want)
    rec.claim("points_on_decic", on_f, [True] * len(HESSIAN_POINTS))
    rec.claim("rank_independent_of_representative", rescaled_ok, True)


def check_smooth_point(ctx: VerifyContext, rec: CheckRecord) -> None:
    f = ctx.catalog.target["f"]
    K = smooth_point_field()
    pt = ctx.catalog.point(SMOOTH_POINT, K)
    d0 = f.partial("u0")
    rec.claim("f_at_p", str(f.evaluate(pt)), "0")
    value = d0.evaluate(pt)
    rec.claim("df_du0_nonzero", not value.is_zero(), True)
    ctx.check_golden(rec, "df_du0_at_p", value)
    conj = [-x if i == 1 else x for i, x in enumerate(pt)]
    rec.claim("f_at_conjugate", str(f.evaluate(conj)), "0")
    rec.claim("df_du0_nonzero_at_conjugate", not d0.evaluate(conj).is_zero(), True)
    modulus = flint.fmpz_poly([int(c) for c in SMOOTH_POINT_MODULUS])
    _, facs = modulus.factor()
    irreducible = len(facs) == 1 and facs[0][1] == 1
    rec.record("modulus_irreducible", irreducible)
    if irreducible:
        rec.note("the modulus is irreducible, so the nonvanishing holds at every root")


def check_sections(ctx: VerifyContext, rec: CheckRecord) -> None:
    T = ctx.catalog.target
    R = target_ring()
    f = T["f"]
    cases = {
        "u0=0": ({"u0": 0}, (T["Q0"] * T["G0"]) ** 2),
        "u1=0": ({"u1": 0}, (T["Q1"] * T["G0"]) ** 2),
        "u2=u3": ({"u2": R.gen("u3")}, (T["H3"] * T["F0"]) ** 2),
    }
    for key, (sub, model) in cases.items():
        c = proportional(f.restrict(sub), model.restrict(sub))
        if c is None or c.is_zero():
            rec.fail(f"section {key} is not proportional")
            continue
        ctx.check_golden(rec, f"scalar_{key}", c)
    model = T["H0"] ** 2 * T["G1"] ** 2 * R.gen("u2") * R.gen("u3")
    res = proportional_mod_ideal(f, model, [T["Q0"]], 10, ctx.options)
    if res is None or res[0].is_zero():
        rec.fail("f is not proportional to H0^2*G1^2*u2*u3 modulo Q0")
    else:
        ctx.check_golden(rec, "scalar_mod_Q0", res[0])
    rec.record("planes", "Pi_i encoded as {u_i = u4 = 0}", "info")


# component list of {U4 = U_j = 0}: (zero variables, optional quadric branch)
def _components(j: int) -> list[tuple[tuple[str, ...], tuple | None]]:
    if j == 2:
        pairs12, pairs34 = [("x10", "x21"), ("x11", "x20")], [("x30", "x41"), ("x31", "x40")]
        # q12 = (x10 x20)^2 + (x11 x21)^2, q34 = (x30 x40)^2 + (x31 x41)^2
        q12 = ("x10", "x20", "x11", "x21")
        q34 = ("x30", "x40", "x31", "x41")
    else:
        pairs12, pairs34 = [("x10", "x20"), ("x11", "x21")], [("x30", "x40"), ("x31", "x41")]
        # q12 = (x11 x20)^2 + (x10 x21)^2, q34 = (x31 x40)^2 + (x30 x41)^2
        q12 = ("x11", "x20", "x10", "x21")
        q34 = ("x31", "x40", "x30", "x41")
    out: list = [(p, None) for p in pairs12 + pairs34]
    for n, quad in ((1, q34), (2, q34), (3, q12), (4, q12)):
        for a in (0, 1):
            out.append(((f"x{n}{a}",), quad))
    return out


def _branch_substitutions(zero: tuple[str, ...], quad, ring) -> list[dict]:
    """Charts of the component: on a branch a*b = s*c*d (s = +-i) set b = 1, a = s*c*d."""
    base = {v: 0 for v in zero}
    if quad is None:
        return [base]
    K = ring.field
    a, b, c, d = quad
    out = []
    for s in (K.imaginary_unit(), K.neg(K.imaginary_unit())):
        sub = dict(base)
        sub[b] = 1
        sub[a] = (ring.gen(c) * ring.gen(d)).scale(s)
        out.append(sub)
    return out


def check_components(ctx: VerifyContext, rec: CheckRecord) -> None:
    src = ctx.catalog.source
    ring = source_ring()
    F1, U4 = src["F1"], src["U4"]
    rec.claim("U4_factorization", U4 == ring.parse("4*x10*x11*x20*x21*x30*x31*x40*x41"), True)
    factor_text = {
        2: ("x10^2*x20^2+x11^2*x21^2", "x30^2*x40^2+x31^2*x41^2"),
        3: ("x11^2*x20^2+x10^2*x21^2", "x31^2*x40^2+x30^2*x41^2"),
    }
    for j in (2, 3):
        a, b = (ring.parse(t) for t in factor_text[j])
        rec.claim(f"U{j}_factorization", [src[f"U{j}"] == a * b, list(a.multidegree), list(b.multidegree)], [True, [2, 2, 0, 0], [0, 0, 2, 2]])
        comps = _components(j)
        rec.claim(f"U{j}_components", len(comps), 12)
        results = []
        for zero, quad in comps:
            ok = True
            for sub in _branch_substitutions(zero, quad, ring):
                on_component = U4.restrict(sub).is_zero() and src[f"U{j}"].restrict(sub).is_zero()
                ok = ok and on_component and not F1.restrict(sub).is_zero()
            results.append(ok)
        rec.claim(f"U{j}_components_not_in_F1", results, [True] * 12)
    rec.claim("F1_nonzero", not F1.is_zero(), True)


# ---------------------------------------------------------------------------
# uniqueness of the singular decic


def _monomial_index(d: int, n: int = 5):
    mons = monomials_of_degree(d, n)
    return mons, {e: i for i, e in enumerate(mons)}


def _mod_p_terms(p: Polynomial, prime: int) -> dict | None:
    out = {}
    for e, c in p.terms.items():
        q = p.field.rational_part(c)
        den = int(q.denominator) % prime
        if den == 0:
            return None
        out[e] = int(q.numerator) * pow(den, -1, prime) % prime
    return out


def _slice_matrix_mod_p(gens: list[Polynomial], d: int, prime: int):
    """Columns m*g for all monomials m with deg(m*g) = d, rows = degree-d monomials."""
    mons, index = _monomial_index(d)
    cols = []
    for g in gens:
        terms = _mod_p_terms(g, prime)
        if terms is None:
            return None
        for m in monomials_of_degree(d - g.total_degree(), 5):
            col = {}
            for e, c in terms.items():
                col[index[tuple(a + b for a, b in zip(e, m))]] = c
            cols.append(col)
    M = flint.nmod_mat(len(mons), len(cols), prime)
    for j, col in enumerate(cols):
        for i, c in col.items():
            M[i, j] = c
    return M


def _slice_matrix_exact(gens: list[Polynomial], d: int) -> SparseMatrix:
    mons, index = _monomial_index(d)
    entries = {}
    j = 0
    for g in gens:
        for m in monomials_of_degree(d - g.total_degree(), 5):
            for e, c in g.terms.items():
                entries[(index[tuple(a + b for a, b in zip(e, m))], j)] = c
            j += 1
    return SparseMatrix(len(mons), j, entries, QQ())


def _left_null_mod_p(M):
    X, nullity = M.transpose().nullspace()
    rows = X.nrows()
    return [[int(X[i, k]) for i in range(rows)] for k in range(nullity)]


def _derivative_matrix_mod_p(var: int, prime: int):
    mons10, _ = _monomial_index(10)
    _, index9 = _monomial_index(9)
    D = flint.nmod_mat(len(index9), len(mons10), prime)
    for j, e in enumerate(mons10):
        if e[var]:
            f = list(e)
            f[var] -= 1
            D[index9[tuple(f)], j] = e[var] % prime
    return D


def uniqueness_system_mod_p(T: dict, prime: int):
    """Linear conditions on the 1001 coefficients of a decic, reduced mod ``prime``.

    Returns (conditions, slice ranks mod p) or None when the prime divides a denominator.
    """
    blocks = []
    ranks = {}
    derivs = [_derivative_matrix_mod_p(i, prime) for i in range(5)]
    for name, pair in SURFACES.items():
        G = _slice_matrix_mod_p([T[n] for n in pair], 9, prime)
        if G is None:
            return None
        ranks[name] = G.rank()
        N = _left_null_mod_p(G)
        if not N:
            continue
        Nm = flint.nmod_mat(len(N), G.nrows(), [x for row in N for x in row], prime)
        for D in derivs:
            blocks.append(Nm * D)
    for name, (a, b) in TACNODE_IDEALS.items():
        A, B = T[a], T[b]
        G = _slice_matrix_mod_p([A**4, A**2 * B, B**2], 10, prime)
        if G is None:
            return None
        ranks[f"tacnode_{name}"] = G.rank()
        N = _left_null_mod_p(G)
        if N:
            blocks.append(flint.nmod_mat(len(N), G.nrows(), [x for row in N for x in row], prime))
    rows = sum(B.nrows() for B in blocks)
    ncols = blocks[0].ncols()
    flat = []
    for B in blocks:
        flat.extend(int(x) for x in B.entries())
    return flint.nmod_mat(rows, ncols, flat, prime), ranks


def check_uniqueness(ctx: VerifyContext, rec: CheckRecord) -> None:
    T = ctx.catalog.target
    f = T["f"]
    prime = next(prime_stream(ctx.options.seed))
    out = uniqueness_system_mod_p(T, prime)
    if out is None:
        rec.fail(f"prime {prime} divides a denominator")
        return
    system, ranks_p = out
    rec.record("prime", prime, "info")
    rec.record("conditions", system.nrows(), "info")
    X, nullity = system.nullspace()
    rec.claim("solution_dimension_mod_p", nullity, 1)

    # rank_p of each slice must equal its rank over QQ for the bound dim_QQ <= dim_p
    exact_ranks = {}
    for name, pair in SURFACES.items():
        exact_ranks[name] = rank(_slice_matrix_exact([T[n] for n in pair], 9), ctx.options)
    for name, (a, b) in TACNODE_IDEALS.items():
        A, B = T[a], T[b]
        exact_ranks[f"tacnode_{name}"] = rank(_slice_matrix_exact([A**4, A**2 * B, B**2], 10), ctx.options)
    rec.claim("slice_ranks_mod_p_equal_exact", ranks_p == exact_ranks, True)
    rec.record("slice_ranks", exact_ranks)

    certs = _singular_certificates(ctx)
    satisfied = all(c is not None for cs in certs["surfaces"].values() for c in cs) and all(
        c is not None for c in certs["tacnodes"].values()
    )
    rec.claim("f_satisfies_conditions", satisfied, True)
    if nullity == 1:
        mons, _ = _monomial_index(10)
        fp = _mod_p_terms(f, prime)
        vec = [int(X[i, 0]) for i in range(len(mons))]
        fvec = [fp.get(e, 0) for e in mons]
        k = next(i for i, v in enumerate(fvec) if v)
        scale = vec[k] * pow(fvec[k], -1, prime) % prime
        rec.claim("kernel_spanned_by_f_mod_p", all((scale * a - b) % prime == 0 for a, b in zip(fvec, vec)), True)
    if rec.status == "pass":
        rec.record("solution_dimension", 1)


# ---------------------------------------------------------------------------
# registry and runner


@dataclass(frozen=True)
class CheckInfo:
    id: str
    run: Callable[[VerifyContext, CheckRecord], None]
    optional: bool = False


REGISTRY: tuple[CheckInfo, ...] = (
    CheckInfo("group", check_group),
    CheckInfo("isotypic", check_isotypic),
    CheckInfo("points", check_points),
    CheckInfo("relations", check_relations),
    CheckInfo("f-consistency", check_f),
    CheckInfo("generic-finiteness", check_jacobian),
    CheckInfo("singular-containment", check_singular),
    CheckInfo("hessian-ranks", check_hessians),
    CheckInfo("reducedness-witness", check_smooth_point),
    CheckInfo("section-supports", check_sections),
    CheckInfo("puredim-witness", check_components),
    CheckInfo("unique-decic", check_uniqueness, optional=True),
)
CHECK_IDS = tuple(c.id for c in REGISTRY)


def resolve_checks(ids: list[str] | None = None, include_optional: bool = False) -> list[CheckInfo]:
    if not ids:
        return [c for c in REGISTRY if include_optional or not c.optional]
    unknown = [i for i in ids if i not in CHECK_IDS]
    if unknown:
        raise VerifyError(f"unknown check id(s) {', '.join(unknown)}; valid ids: {', '.join(CHECK_IDS)}")
    wanted = set(ids)
    return [c for c in REGISTRY if c.id in wanted]


def run_check(info: CheckInfo, ctx: VerifyContext) -> CheckRecord:
    rec = CheckRecord(info.id)
    start = time.perf_counter()
    try:
        info.run(ctx, rec)
    except Exception as exc:  # a crashing check is a failing check
        rec.fail(f"{type(exc).__name__}: {exc}")
    rec.seconds = time.perf_counter() - start
    return rec


def run_checks(
    ids: list[str] | None = None,
    options: LinalgOptions = DEFAULT_OPTIONS,
    max_degree: int = RELATION_DEGREE,
    include_optional: bool = False,
    golden_path: Path | None = None,
    update_golden: bool = False,
    workers: int = 1,
) -> VerificationReport:
    checks = resolve_checks(ids, include_optional)
    ctx = VerifyContext(options, max_degree, load_golden(golden_path))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda c: run_check(c, ctx), checks))
    else:
        records = [run_check(c, ctx) for c in checks]
    report = VerificationReport(
        config={
            "checks": [c.id for c in checks],
            "max_degree": max_degree,
            "primes": options.primes,
            "seed": options.seed,
        }
    )
    for r in records:
        report.add(r)
    report.config["u5_variant"] = ctx.variant()
    if update_golden:
        merged = load_golden(golden_path)
        for check_id, values in ctx.frozen.items():
            merged.setdefault(check_id, {}).update(values)
        write_golden(merged, golden_path)
    return report
