"""Command-line surface: evaluate specs, reconstruct and certify dual
balls, convert polytopes, emit plot data.

Exit codes: 0 success, 1 domain failure (certification fail, incomplete
reconstruction, precondition violations), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import functools
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import exact, geometry, seminorm
from .reconstruct import (
    Budget,
    certificate_to_obj,
    certify,
    lemma_trace,
    reconstruct,
)
from .errors import (
    DimensionMismatchError,
    DualballError,
    OracleUndefinedError,
    PolarUndefinedError,
    SpecFormatError,
)

USAGE_EXIT = 2
DOMAIN_EXIT = 1


def _parse_number(token: str) -> Fraction:
    token = token.strip()
    if "/" in token:
        num, den = token.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(token))


def _parse_point(text: str) -> tuple:
    try:
        return tuple(_parse_number(t) for t in text.split(","))
    except (ValueError, ZeroDivisionError) as err:
        raise SpecFormatError(f"cannot parse point {text!r}: {err}") from err


def _parse_int_point(text: str) -> tuple:
    pt = _parse_point(text)
    if any(c.denominator != 1 for c in pt):
        raise SpecFormatError(f"expected integer coordinates, got {text!r}")
    return tuple(int(c) for c in pt)


def _num_str(x) -> str:
    f = Fraction(x)
    return str(int(f)) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_eval(args) -> int:
    spec = seminorm.load_spec(args.spec)
    point = _parse_point(args.point)
    if len(point) != spec.dim:
        raise DimensionMismatchError(
            f"point has {len(point)} coordinates, spec dimension is {spec.dim}"
        )
    value = seminorm.evaluate(spec, point)
    print(_num_str(value))
    return 0


def _budget_from_args(args) -> Budget:
    kwargs = {}
    if args.n_max is not None:
        kwargs["n_max"] = args.n_max
    if args.window is not None:
        kwargs["window"] = args.window
    if args.attempts is not None:
        kwargs["attempts"] = args.attempts
    return Budget(**kwargs)


def cmd_reconstruct(args) -> int:
    spec = seminorm.load_spec(args.spec)
    result = reconstruct(
        spec, budget=_budget_from_args(args), seed=args.seed, jobs=args.jobs
    )
    P = result.polytope
    _write_text(args.out, geometry.dump_polytope(P))
    certs_path = args.certs or str(Path(args.out).with_suffix("")) + ".certs.json"
    certs_obj = {
        "complete": result.complete,
        "probe_count": result.probe_count,
        "certificates": [certificate_to_obj(c) for c in result.certificates],
    }
    _write_text(certs_path, json.dumps(certs_obj, sort_keys=True) + "\n")

    all_int = P.int_vertices() is not None
    print(f"vertices: {len(P.vertices)}")
    print(f"integer vertices: {'yes' if all_int else 'NO'}")
    if not P.is_full_dim():
        print(f"affine dimension {P.affine_dim} (ambient {P.dim})")
    print(f"wrote {args.out} and {certs_path}")
    if not result.complete:
        print("reconstruction incomplete: probe budget exhausted", file=sys.stderr)
        return DOMAIN_EXIT
    return 0


def cmd_certify(args) -> int:
    spec = seminorm.load_spec(args.spec)
    P = geometry.load_polytope(args.polytope)
    report = certify(spec, P, radius=args.radius)
    if report.radius == 0:
        print("warning: radius 0 checks only the origin", file=sys.stderr)
    print(
        f"{'pass' if report.passed else 'fail'}: "
        f"{report.checked_count} lattice points checked at radius {report.radius}"
    )
    if report.counterexample is not None:
        x, nval, sval = report.counterexample
        print(
            f"counterexample x={','.join(map(str, x))}: "
            f"oracle {nval} != support {sval}"
        )
    return 0 if report.passed else DOMAIN_EXIT


def cmd_polar(args) -> int:
    P = geometry.load_polytope(args.polytope)
    Q = geometry.polar(P)
    _write_text(args.out, geometry.dump_polytope(Q))
    print(f"wrote {args.out}: {len(Q.vertices)} vertices, {len(Q.facets)} facets")
    return 0


def cmd_hull(args) -> int:
    with open(args.points, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as err:
            raise SpecFormatError(err.msg, line=err.lineno, col=err.colno) from err
    if not isinstance(obj, dict) or not isinstance(obj.get("points"), list) or not obj["points"]:
        raise SpecFormatError("hull input needs a nonempty 'points' list", path="$")
    pts = []
    for i, p in enumerate(obj["points"]):
        if not isinstance(p, list):
            raise SpecFormatError("points must be lists", path=f"$.points[{i}]")
        pts.append(
            tuple(
                geometry._num_from_obj(c, f"$.points[{i}][{j}]")
                for j, c in enumerate(p)
            )
        )
    P = geometry.convex_hull(pts)
    _write_text(args.out, geometry.dump_polytope(P))
    print(f"wrote {args.out}: {len(P.vertices)} vertices, {len(P.facets)} facets")
    return 0


def _ccw_cycle(vertices, center):
    """Cyclic counterclockwise order of planar points around an interior
    center, by exact half-plane/cross-product comparisons."""

    def half(v):
        dx, dy = v[0] - center[0], v[1] - center[1]
        return 0 if dy > 0 or (dy == 0 and dx > 0) else 1

    def compare(a, b):
        ha, hb = half(a), half(b)
        if ha != hb:
            return ha - hb
        ax, ay = a[0] - center[0], a[1] - center[1]
        bx, by = b[0] - center[0], b[1] - center[1]
        cross = ax * by - ay * bx
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    return sorted(vertices, key=functools.cmp_to_key(compare))


def _polygon_rows(P: geometry.Polytope):
    verts = list(P.vertices)
    if len(verts) > 2:
        center = tuple(sum(Fraction(v[i]) for v in verts) / len(verts) for i in range(2))
        verts = _ccw_cycle(verts, center)
        start = verts.index(min(verts))
        verts = verts[start:] + verts[:start]
    return verts + [verts[0]]


def _exact_decimal(x) -> str | None:
    f = Fraction(x)
    den = f.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return None
    k = max(twos, fives)
    if k == 0:
        return str(f.numerator)
    scaled = abs(f.numerator) * 10**k // f.denominator
    digits = str(scaled).rjust(k + 1, "0")
    sign = "-" if f.numerator < 0 else ""
    return f"{sign}{digits[:-k]}.{digits[-k:]}"


def _obj_mesh(P: geometry.Polytope) -> str:
    lines = []
    for v in P.vertices:
        coords = [_exact_decimal(c) for c in v]
        if any(c is None for c in coords):
            raise SpecFormatError(
                "OBJ needs coordinates with terminating decimals; use csv instead"
            )
        lines.append("v " + " ".join(coords))
    for i, f in enumerate(P.facets):
        ids = list(P.facet_vertices(i))
        pts = [P.vertices[j] for j in ids]
        # cyclic order: exact angular sort in any affine chart of the facet
        # plane (convex cyclic order is affine-invariant)
        base = pts[0]
        rows, pivots, _ = geometry._affine_basis(pts, base)
        coords2 = [
            geometry._span_coords(
                tuple(Fraction(a) - Fraction(b) for a, b in zip(p, base)), rows, pivots
            )
            for p in pts
        ]
        center = tuple(sum(c[i] for c in coords2) / len(coords2) for i in range(2))
        by_coord = dict(zip(coords2, ids))
        cycle = [by_coord[c] for c in _ccw_cycle(coords2, center)]
        # orient outward: normal of the ordered triangle along the facet normal
        a, b, c3 = (P.vertices[cycle[0]], P.vertices[cycle[1]], P.vertices[cycle[2]])
        u = exact.vec_sub(b, a)
        w = exact.vec_sub(c3, a)
        n = (
            u[1] * w[2] - u[2] * w[1],
            u[2] * w[0] - u[0] * w[2],
            u[0] * w[1] - u[1] * w[0],
        )
        if exact.dot(n, f.normal) < 0:
            cycle.reverse()
        start = cycle.index(min(cycle))
        cycle = cycle[start:] + cycle[:start]
        lines.append("f " + " ".join(str(j + 1) for j in cycle))
    return "\n".join(lines) + "\n"


def cmd_emit_plot(args) -> int:
    if args.spec:
        # probe-trace mode driven by the stabilization trace
        if not (args.direction and args.y0 is not None):
            raise SpecFormatError("trace mode needs --direction and --y0")
        spec = seminorm.load_spec(args.spec)
        direction = _parse_int_point(args.direction)
        offset = _parse_int_point(args.offset) if args.offset else None
        y0 = _parse_int_point(args.y0)
        probes = lemma_trace(spec, direction, offset, y0, args.n_max or 8)
        rows = [
            f"{p.n},{_num_str(p.lambda_n)},{_num_str(p.value)},{_num_str(p.value - p.lambda_n)}"
            for p in probes
        ]
        _write_text(args.out, "\n".join(rows) + "\n")
        print(f"wrote {args.out}: {len(rows)} trace rows")
        return 0
    if not args.polytope:
        raise SpecFormatError("emit-plot needs --polytope or --spec (trace mode)")
    P = geometry.load_polytope(args.polytope)
    if args.format == "csv":
        if P.dim != 2:
            raise SpecFormatError("polygon csv requires dimension 2")
        rows = [",".join(map(_num_str, v)) for v in _polygon_rows(P)]
        _write_text(args.out, "\n".join(rows) + "\n")
        print(f"wrote {args.out}: {len(rows)} rows")
        return 0
    if P.dim != 3:
        raise SpecFormatError("obj mesh requires dimension 3")
    text = _obj_mesh(P)
    _write_text(args.out, text)
    nv, nf = len(P.vertices), len(P.facets)
    print(f"wrote {args.out}: {nv} vertices, {nf} faces")
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="dualball",
        description="Exact reconstruction and certification of dual unit balls "
        "of integer-valued seminorms.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a seminorm spec at a point")
    p.add_argument("--spec", required=True)
    p.add_argument("--point", required=True, help="comma-separated integers or rationals p/q")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("reconstruct", help="reconstruct the dual unit ball")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--certs", default=None, help="certificates path (default: <out>.certs.json)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-max", type=int, default=None, dest="n_max")
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--attempts", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("certify", help="certify a polytope against a spec on a lattice ball")
    p.add_argument("--spec", required=True)
    p.add_argument("--polytope", required=True)
    p.add_argument("--radius", type=int, default=None)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("polar", help="polar dual of a polytope file")
    p.add_argument("--polytope", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_polar)

    p = sub.add_parser("hull", help="convex hull of a point list file")
    p.add_argument("--points", required=True, help="JSON file with a 'points' list")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("emit-plot", help="polygon csv / obj mesh / probe-trace csv")
    p.add_argument("--polytope", default=None)
    p.add_argument("--format", choices=("csv", "obj"), default="csv")
    p.add_argument("--out", required=True)
    p.add_argument("--spec", default=None, help="trace mode: spec file")
    p.add_argument("--direction", default=None, help="trace mode: integer direction")
    p.add_argument("--offset", default=None, help="trace mode: integer offset")
    p.add_argument("--y0", default=None, help="trace mode: certified vertex")
    p.add_argument("--n-max", type=int, default=None, dest="n_max")
    p.set_defaults(func=cmd_emit_plot)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecFormatError, DimensionMismatchError) as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_EXIT
    except (OracleUndefinedError, PolarUndefinedError) as err:
        print(f"error: {err}", file=sys.stderr)
        return DOMAIN_EXIT
    except (DualballError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return DOMAIN_EXIT
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
