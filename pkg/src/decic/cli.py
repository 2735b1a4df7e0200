"""Command-line front end.

Input files are line oriented::

    # comment
    field QQ(i)                      # QQ | QQ(i) | GF(p) | QQ[t]/(t^2 - 5)
    ring x10 x11 x20 x21 x30 x31 x40 x41
    grading x10 x11 | x20 x21 | x30 x31 | x40 x41
    use paper-constants
    let q = x10^2 + x11^2

``use paper-constants`` binds U0..U5, F1, F2, P (over QQ(i) in x10..x41) and
H0..H4, Q0, Q1, G0, G0_alt, G1, F0, f (over QQ in u0..u4).
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Sequence

from .catalog import HESSIAN_POINTS, Catalog, base_points, source_ring, sqrt5_field
from .field import QQ, GF, QQi, FieldElement, FieldError, FieldSpec, ReconstructionError, extension
from .linalg import LinalgError, LinalgOptions, SparseMatrix, rank
from .parse import ParseError, parse
from .poly import Polynomial, Ring, RingError, hessian
from .relations import RelationError, in_span, membership, relation_space
from .report import emit_report
from .symmetry import ActionError, isotypic_slice, named_spec, orbits
from .verify import CHECK_IDS, RELATION_DEGREE, VerifyError, run_checks


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input files


def parse_field(text: str) -> FieldSpec:
    t = text.replace(" ", "")
    if t == "QQ":
        return QQ()
    if t in ("QQi", "QQ(i)"):
        return QQi()
    m = re.fullmatch(r"GF\((\d+)\)", t)
    if m:
        return GF(int(m.group(1)))
    m = re.fullmatch(r"QQ\[([A-Za-z])\]/\((.+)\)", t)
    if m:
        name, modulus = m.groups()
        poly = parse(modulus, Ring(QQ(), (name,)))
        if poly.total_degree() < 2:
            raise InputError(f"modulus {modulus!r} must have degree at least 2")
        coeffs = [0] * (poly.total_degree() + 1)
        for (k,), c in poly.terms.items():
            coeffs[k] = c
        return extension(coeffs, name)
    raise InputError(f"unknown field {text!r}; use QQ, QQ(i), GF(p) or QQ[t]/(m)")


def parse_scalar(text: str, K: FieldSpec) -> FieldElement:
    """A field element such as ``3``, ``-2/5``, ``i`` or ``1/t``."""
    R = Ring(K, ())
    try:
        p = parse(text, R)
    except ParseError:
        if "/" not in text:
            raise
        num, den = text.rsplit("/", 1)
        p = parse(num, R).scale(K.inv(_constant(parse(den, R))))
    return FieldElement(K, _constant(p))


def _constant(p: Polynomial):
    return p.terms.get((), p.field.zero)


@dataclass
class Workspace:
    field: FieldSpec | None = None
    ring: Ring | None = None
    bindings: dict[str, Polynomial] = dc_field(default_factory=dict)

    def get(self, name: str) -> Polynomial:
        if name not in self.bindings:
            raise InputError(f"unknown name {name!r}; bound names: {', '.join(sorted(self.bindings)) or 'none'}")
        return self.bindings[name]

    def use_builtin_constants(self) -> None:
        cat = Catalog()
        for name in ("U0", "U1", "U2", "U3", "U4", "U5", "U5_minus", "U5_plus", "P", "F1", "F2"):
            self.bindings[name] = cat.source[name]
        for name, p in cat.target.items():
            self.bindings[name] = p


def load_input(text: str) -> Workspace:
    ws = Workspace()
    variables: tuple[str, ...] | None = None
    grading = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if keyword == "field":
                ws.field = parse_field(rest)
            elif keyword == "ring":
                variables = tuple(v for v in re.split(r"[\s,]+", rest) if v)
            elif keyword == "grading":
                if variables is None:
                    raise InputError("'grading' needs a preceding 'ring' line")
                pairs = [tuple(p.split()) for p in rest.split("|")]
                if any(len(p) != 2 for p in pairs):
                    raise InputError("grading lists variable pairs separated by '|'")
                grading = tuple((variables.index(a), variables.index(b)) for a, b in pairs)
            elif keyword == "use":
                if rest != "paper-constants":
                    raise InputError(f"unknown catalog {rest!r}")
                ws.use_builtin_constants()
            elif keyword == "let":
                name, eq, expr = rest.partition("=")
                name = name.strip()
                if not eq or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                    raise InputError("expected 'let <name> = <expression>'")
                ring = _current_ring(ws, variables, grading)
                scope = {k: v for k, v in ws.bindings.items() if v.ring == ring}
                ws.bindings[name] = parse(expr.strip(), ring, scope)
            else:
                raise InputError(f"unknown directive {keyword!r}")
        except (InputError, ParseError, FieldError, RingError, ValueError) as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    if variables is not None:
        ws.ring = _current_ring(ws, variables, grading)
    return ws


def _current_ring(ws: Workspace, variables, grading) -> Ring:
    if variables is None:
        raise InputError("'let' needs a preceding 'ring' line")
    ring = Ring(ws.field or QQ(), variables, grading)
    ws.ring = ring
    return ring


def read_workspace(path: str | None) -> Workspace:
    if path is None:
        ws = Workspace()
        ws.use_builtin_constants()
        return ws
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return load_input(text)


def _names(arg: str | None, default: Sequence[str] = ()) -> list[str]:
    if not arg:
        return list(default)
    return [n.strip() for n in arg.split(",") if n.strip()]


# ---------------------------------------------------------------------------
# subcommands


def _options(args) -> LinalgOptions:
    return LinalgOptions(primes=args.modular_primes, threads=args.threads, dense_threshold=args.dense_threshold, seed=args.seed)


def _emit(args, text: str) -> None:
    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_rels(args) -> int:
    ws = read_workspace(args.input)
    names = _names(args.names, ("U0", "U1", "U2", "U3", "U4", "U5"))
    polys = [ws.get(n) for n in names]
    degrees = [args.degree] if args.degree is not None else list(range(1, args.max_degree + 1))
    lines = []
    for n in degrees:
        space = relation_space(polys, n, names, _options(args))
        lines.append(f"degree {n}: dimension {space.dimension} ({space.method}, rank {space.certificate.rank} of {space.certificate.ncols})")
        fresh = ", ".join(f"{v}={name}" for v, name in zip(space.ring.variables, names))
        for r in space.basis:
            lines.append(f"  [{fresh}]")
            lines.append(f"  {r.primitive()}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_membership(args) -> int:
    ws = read_workspace(args.input)
    names = _names(args.names)
    if len(names) < 2:
        raise InputError("--names needs the target followed by at least one generator")
    target, gens = ws.get(names[0]), [ws.get(n) for n in names[1:]]
    cert = membership(target, gens, args.bound, _options(args))
    if cert is None:
        _emit(args, f"{names[0]} is not in the ideal slice of ({', '.join(names[1:])}) up to degree {args.bound or target.total_degree()}\n")
        return 1
    lines = [f"{names[0]} = " + " + ".join(f"({q})*{g}" for q, g in zip(cert.cofactors, names[1:]) if not q.is_zero())]
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_isotypic(args) -> int:
    ws = read_workspace(args.input)
    ring = ws.ring if ws.ring is not None and ws.ring.grading else source_ring()
    pairs = []
    for item in _names(args.names, ("rho1_g=1", "rho1_h=1")):
        name, _, scalar = item.partition("=")
        pairs.append((named_spec(name), parse_scalar(scalar or "1", ring.field)))
    try:
        md = tuple(int(x) for x in args.multidegree.split(",")) if args.multidegree else (1, 1, 1, 1)
    except ValueError:
        raise InputError(f"bad multidegree {args.multidegree!r}") from None
    basis = isotypic_slice(pairs, ring, md)
    lines = [f"multidegree {md}: dimension {len(basis)}"]
    lines += [f"  {b}" for b in basis]
    for name, p in sorted(ws.bindings.items()):
        if p.ring == ring and p.multidegree == md:
            lines.append(f"  {name} in slice: {'yes' if in_span(p, basis, _options(args)) else 'no'}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_orbits(args) -> int:
    ws = read_workspace(args.input)
    pts = base_points()
    selected = _names(args.names)
    for name in selected:
        p = ws.get(name)
        pts = [pt for pt in pts if p.evaluate(pt.affine()).is_zero()]
    part = orbits(pts)
    label = "base points" + (" on " + ", ".join(f"{n}=0" for n in selected) if selected else "")
    lines = [f"{len(pts)} {label}: {len(part.orbits)} orbits of sizes {sorted(part.sizes)}, action {'free' if part.is_free() else 'not free'}"]
    for k, orb in enumerate(part.orbits):
        lines.append(f"  orbit {k}: representative {orb[0]}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_hessian(args) -> int:
    ws = read_workspace(args.input)
    name = _names(args.names, ("f",))[0]
    f = ws.get(name)
    H = hessian(f)
    if args.point:
        K = parse_field(args.field) if args.field else f.field
        points = [("point", [parse_scalar(c, K) for c in args.point.split(",")], K)]
    else:
        points = []
        for label, coords, _ in HESSIAN_POINTS:
            K = sqrt5_field() if any(isinstance(c, str) for c in coords) else QQ()
            points.append((label, Catalog().point(coords, K), K))
    lines = []
    for label, pt, K in points:
        if len(pt) != f.ring.nvars:
            raise InputError(f"point has {len(pt)} coordinates, {name} has {f.ring.nvars} variables")
        rows = [[entry.evaluate(pt) for entry in row] for row in H]
        r = rank(SparseMatrix.from_rows(rows, rows[0][0].field), _options(args))
        value = f.evaluate(pt)
        lines.append(f"{label}: ({':'.join(str(x) for x in pt)}) rank {r}, {name} = {value}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_verify(args) -> int:
    if not args.all and not args.check:
        raise InputError("verify-paper needs --all or at least one --check")
    ids = None if args.all else args.check
    report = run_checks(
        ids,
        _options(args),
        args.max_degree if args.max_degree is not None else RELATION_DEGREE,
        include_optional=args.include_optional,
        golden_path=Path(args.golden) if args.golden else None,
        update_golden=args.write_golden,
    )
    data = emit_report(report, args.format).decode()
    _emit(args, data)
    if args.report and args.format == "machine":
        sys.stdout.write(emit_report(report, "human").decode())
    return report.exit_code()


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _positive(kind: str, minimum: int):
    def conv(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{kind} must be an integer") from None
        if v < minimum:
            raise argparse.ArgumentTypeError(f"{kind} must be at least {minimum}")
        return v

    return conv


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="input file ('-' for stdin); defaults to the built-in constants")
    common.add_argument("--names", help="comma-separated names")
    common.add_argument("--modular-primes", type=_positive("prime budget", 2), default=8, help="prime budget (default 8)")
    common.add_argument("--threads", type=_positive("thread count", 1), default=1)
    common.add_argument("--seed", type=int, default=1729, help="seed for prime selection and evaluation points")
    common.add_argument("--dense-threshold", type=_positive("dense threshold", 0), default=64)
    common.add_argument("--report", help="write output to this file instead of stdout")
    common.add_argument("--format", choices=("human", "machine"), default="human")

    parser = _Parser(prog="decic", description="Exact computations around a decic threefold and its relation to (P^1)^4.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rels", parents=[common], help="algebraic relations among polynomials")
    p.add_argument("--degree", type=_positive("degree", 1))
    p.add_argument("--max-degree", type=_positive("max degree", 1), default=4)
    p.set_defaults(run=cmd_rels)

    p = sub.add_parser("membership", parents=[common], help="degree-bounded ideal membership (first name is the target)")
    p.add_argument("--bound", type=_positive("bound", 0))
    p.set_defaults(run=cmd_membership)

    p = sub.add_parser("isotypic", parents=[common], help="simultaneous eigenspace of named liftings (--names rho2_g=-1,rho2_h=1)")
    p.add_argument("--multidegree", help="comma-separated multidegree, default 1,1,1,1")
    p.set_defaults(run=cmd_isotypic)

    p = sub.add_parser("orbits", parents=[common], help="orbits of the group on the base points (optionally on the zero sets of --names)")
    p.set_defaults(run=cmd_orbits)

    p = sub.add_parser("hessian", parents=[common], help="Hessian rank of a form at points")
    p.add_argument("--point", help="comma-separated coordinates, e.g. 2,1/t,-2,-2,1")
    p.add_argument("--field", help="field of the point coordinates, e.g. 'QQ[t]/(t^2-5)'")
    p.set_defaults(run=cmd_hessian)

    p = sub.add_parser("verify-paper", parents=[common], help="run the named checks and write a report")
    p.add_argument("--all", action="store_true", help="run every mandatory check")
    p.add_argument("--check", action="append", metavar="ID", help=f"run one check (repeatable); ids: {', '.join(CHECK_IDS)}")
    p.add_argument("--include-optional", action="store_true", help="with --all, also run optional checks")
    p.add_argument("--max-degree", type=_positive("max degree", 1), help="highest relation degree (default 10)")
    p.add_argument("--golden", help="golden-values file (default: the packaged one)")
    p.add_argument("--write-golden", action="store_true", help="freeze the derived values of this run")
    p.set_defaults(run=cmd_verify)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.run(args)
    except (InputError, VerifyError, ParseError, RingError, ActionError, RelationError, FieldError) as exc:
        print(f"decic {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (LinalgError, ReconstructionError) as exc:
        print(f"decic {args.command}: computation failed: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
