"""Exact polytope machinery: hulls, dual representations, polarity,
support functions, Minkowski sums, exposure witnesses.

Polytopes carry both representations in canonical form: vertices in
ascending lexicographic order, facets as primitive integer normals with
rational offsets, ordered by (normal, offset). Non-full-dimensional
polytopes carry an explicit affine-span basis; their facet inequalities
are valid in ambient space and tight on facets within the span.

The hull is an incremental insertion (beneath-beyond) over a simplicial
boundary complex with exact rational predicates; coplanar simplices are
merged into facets at the end. Targets modest dimensions (d <= 6).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from . import exact
from ._kernels import PointTable
from .errors import DimensionMismatchError, PolarUndefinedError, SpecFormatError


def _canon_num(x):
    f = Fraction(x)
    return int(f) if f.denominator == 1 else f


def _canon_vec(v):
    return tuple(_canon_num(c) for c in v)


@dataclass(frozen=True)
class Facet:
    normal: tuple  # primitive integer, ambient
    offset: object  # int or Fraction

    def holds(self, point) -> bool:
        return exact.dot(self.normal, point) <= self.offset

    def tight(self, point) -> bool:
        return exact.dot(self.normal, point) == self.offset


@dataclass(frozen=True, eq=False)
class Polytope:
    dim: int
    vertices: tuple  # canonical lex order, no redundant points
    facets: tuple  # canonical (normal, offset) order
    span: tuple | None  # affine-span direction basis when not full-dimensional

    @property
    def affine_dim(self) -> int:
        return self.dim if self.span is None else len(self.span)

    def is_full_dim(self) -> bool:
        return self.span is None

    def facet_vertices(self, i: int) -> tuple:
        f = self.facets[i]
        return tuple(j for j, v in enumerate(self.vertices) if f.tight(v))

    def int_vertices(self):
        """Vertices as integer tuples, or None if any coordinate is not."""
        out = []
        for v in self.vertices:
            iv = exact.as_int_vec(v)
            if iv is None:
                return None
            out.append(iv)
        return tuple(out)

    def point_table(self) -> PointTable | None:
        cached = getattr(self, "_table_cache", False)
        if cached is not False:
            return cached
        iv = self.int_vertices()
        table = PointTable(iv) if iv is not None else None
        object.__setattr__(self, "_table_cache", table)
        return table


@dataclass(frozen=True)
class SupportResult:
    value: object  # exact int or Fraction
    argmax_vertices: tuple  # all attaining vertex indices


# ---------------------------------------------------------------------------
# linear algebra helpers (exact, over Fraction)

def _affine_basis(pts, base):
    """Staircase basis of the span of {p - base}: returns (rows, pivots,
    contributor indices into pts)."""
    rows, pivots, contributors = [], [], []
    for idx in range(1, len(pts)):
        v = [Fraction(a) - Fraction(b) for a, b in zip(pts[idx], base)]
        for row, piv in zip(rows, pivots):
            if v[piv] != 0:
                coef = v[piv] / row[piv]
                v = [a - coef * b for a, b in zip(v, row)]
        piv = next((i for i, a in enumerate(v) if a != 0), None)
        if piv is not None:
            rows.append(tuple(v))
            pivots.append(piv)
            contributors.append(idx)
    return rows, pivots, contributors


def _span_coords(v, rows, pivots):
    """Coordinates of v over the staircase rows; v must lie in their span."""
    v = [Fraction(c) for c in v]
    coeffs = []
    for row, piv in zip(rows, pivots):
        coef = v[piv] / row[piv]
        coeffs.append(coef)
        v = [a - coef * b for a, b in zip(v, row)]
    if any(c != 0 for c in v):
        raise ValueError("point outside affine span")
    return tuple(coeffs)


def _solve_linear(matrix, rhs):
    """Solve a square nonsingular rational system exactly."""
    n = len(rhs)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        prow = aug[col]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                coef = aug[r][col] / prow[col]
                aug[r] = [a - coef * b for a, b in zip(aug[r], prow)]
    return tuple(Fraction(aug[i][n], 1) / aug[i][i] for i in range(n))


def _null_space(rows, dim):
    """Primitive integer basis of {u : <row, u> = 0 for all rows}."""
    work = [list(map(Fraction, r)) for r in rows]
    pivots = []
    red = []
    for v in work:
        for row, piv in zip(red, pivots):
            if v[piv] != 0:
                coef = v[piv] / row[piv]
                v = [a - coef * b for a, b in zip(v, row)]
        piv = next((i for i, a in enumerate(v) if a != 0), None)
        if piv is not None:
            red.append(v)
            pivots.append(piv)
    basis = []
    free_cols = [c for c in range(dim) if c not in pivots]
    for f in free_cols:
        u = [Fraction(0)] * dim
        u[f] = Fraction(1)
        # back-substitute pivot coordinates (process in reverse pivot order)
        order = sorted(range(len(red)), key=lambda i: pivots[i], reverse=True)
        for i in order:
            row, piv = red[i], pivots[i]
            s = sum(row[c] * u[c] for c in range(dim) if c != piv)
            u[piv] = -s / row[piv]
        prim, _ = exact.scale_to_primitive(u)
        basis.append(prim)
    return tuple(basis)


def _rank(vectors):
    rows, _, _ = _affine_basis([(0,) * len(vectors[0])] + list(vectors), (0,) * len(vectors[0]))
    return len(rows)


# ---------------------------------------------------------------------------
# incremental hull over a full-dimensional point set (internal coordinates)

def _hyperplane_through(points):
    """Primitive integer normal and offset of the hyperplane through k
    affinely independent points in R^k (unoriented)."""
    base = points[0]
    diffs = [exact.vec_sub(p, base) for p in points[1:]]
    normals = _null_space(diffs, len(base))
    if len(normals) != 1:
        raise ValueError("degenerate hyperplane")
    n = normals[0]
    return n, exact.dot(n, base)


class _HullState:
    def __init__(self, coords, independent_ids):
        self.coords = coords
        self.k = len(coords[0])
        self.simplices = {}  # sid -> (normal, offset, frozenset of vertex ids)
        self.ridges = {}  # frozenset ridge -> set of sids
        self._next_sid = 0
        verts = list(independent_ids)
        self.ref = tuple(
            sum(Fraction(coords[i][j]) for i in verts) / len(verts)
            for j in range(self.k)
        )
        for omit in verts:
            face = [i for i in verts if i != omit]
            n, c = self._oriented(face)
            self._add(n, c, frozenset(face))

    def _oriented(self, ids):
        n, c = _hyperplane_through([self.coords[i] for i in ids])
        side = exact.dot(n, self.ref)
        if side == c:
            raise ValueError("reference point on facet hyperplane")
        if side > c:
            n, c = exact.vec_neg(n), -c
        return n, c

    def _add(self, n, c, verts):
        sid = self._next_sid
        self._next_sid += 1
        self.simplices[sid] = (n, c, verts)
        for v in verts:
            self.ridges.setdefault(verts - {v}, set()).add(sid)
        return sid

    def _remove(self, sid):
        _, _, verts = self.simplices.pop(sid)
        for v in verts:
            ridge = verts - {v}
            peers = self.ridges[ridge]
            peers.discard(sid)
            if not peers:
                del self.ridges[ridge]

    def insert(self, ip):
        p = self.coords[ip]
        visible = [
            sid
            for sid, (n, c, _) in self.simplices.items()
            if exact.dot(n, p) > c
        ]
        if not visible:
            return False
        visible_set = set(visible)
        horizon = []
        for sid in visible:
            _, _, verts = self.simplices[sid]
            for v in verts:
                ridge = verts - {v}
                invisible = self.ridges[ridge] - visible_set
                if invisible:
                    (g,) = invisible
                    horizon.append((ridge, g))
        new = []
        for ridge, g in horizon:
            gn, gc, _ = self.simplices[g]
            if exact.dot(gn, p) == gc:
                n, c = gn, gc  # grows the neighboring coplanar facet
            else:
                n, c = self._oriented(sorted(ridge) + [ip])
            new.append((n, c, ridge | {ip}))
        for sid in visible:
            self._remove(sid)
        for n, c, verts in new:
            self._add(n, c, verts)
        return True

    def facet_groups(self):
        groups = {}
        for n, c, verts in self.simplices.values():
            groups.setdefault((n, c), set()).update(verts)
        return groups


def _hull_full_dim(coords, independent_ids, insert_order):
    """Facets and true vertex ids of the hull of a full-dimensional point
    set given in internal coordinates (k >= 1)."""
    k = len(coords[0])
    if k == 1:
        lo = min(range(len(coords)), key=lambda i: coords[i][0])
        hi = max(range(len(coords)), key=lambda i: coords[i][0])
        facets = [((1,), _canon_num(coords[hi][0])), ((-1,), _canon_num(-coords[lo][0]))]
        return facets, [lo, hi]
    state = _HullState(coords, independent_ids)
    for ip in insert_order:
        state.insert(ip)
    groups = state.facet_groups()
    hyperplanes = sorted(groups)
    candidates = sorted(set().union(*groups.values()))
    true_ids = []
    for v in candidates:
        p = coords[v]
        normals = [n for (n, c) in hyperplanes if exact.dot(n, p) == c]
        if len(normals) >= k and _rank(normals) == k:
            true_ids.append(v)
    facets = [(n, _canon_num(c)) for (n, c) in hyperplanes]
    return facets, true_ids


# ---------------------------------------------------------------------------
# public operations

def convex_hull(points) -> Polytope:
    """Exact convex hull with canonical V- and H-representations.

    Detects the affine dimension: lower-dimensional hulls carry a span
    basis and facets expressed within the span (ambient integer normals).
    """
    pts = sorted({_canon_vec(p) for p in points})
    if not pts:
        raise ValueError("convex hull of an empty point set")
    dim = len(pts[0])
    if any(len(p) != dim for p in pts):
        raise DimensionMismatchError("points of mixed dimension")
    base = pts[0]
    rows, pivots, contributors = _affine_basis(pts, base)
    k = len(rows)
    if k == 0:
        return Polytope(dim=dim, vertices=(base,), facets=(), span=())
    full = k == dim
    if full:
        coords = pts
    else:
        coords = [_span_coords(exact.vec_sub(p, base), rows, pivots) for p in pts]
    independent = [0] + contributors
    independent_set = set(independent)
    order = [i for i in range(len(pts)) if i not in independent_set]
    facets_internal, true_ids = _hull_full_dim(coords, independent, order)

    if full:
        facets = facets_internal
    else:
        gram = [[exact.dot(r1, r2) for r2 in rows] for r1 in rows]
        facets = []
        for a, c in facets_internal:
            s = _solve_linear(gram, [Fraction(ai) for ai in a])
            w = tuple(
                sum(s[i] * rows[i][j] for i in range(k)) for j in range(dim)
            )
            w_int, mu = exact.scale_to_primitive(w)
            facets.append((w_int, _canon_num(mu * (c + exact.dot(w, base)))))

    vertices = tuple(sorted(pts[i] for i in true_ids))
    facets = tuple(Facet(n, c) for n, c in sorted(facets))
    return Polytope(
        dim=dim,
        vertices=vertices,
        facets=facets,
        span=None if full else tuple(_canon_vec(r) for r in rows),
    )


def support(P: Polytope, x) -> SupportResult:
    """Exact max of <x, .> over P with the full attaining vertex set."""
    x = tuple(x)
    if len(x) != P.dim:
        raise DimensionMismatchError(f"direction of dimension {len(x)} vs {P.dim}")
    xi = exact.as_int_vec(x)
    table = P.point_table()
    if xi is not None and table is not None:
        value, argmax = table.support(xi)
        return SupportResult(value, tuple(argmax))
    best = None
    argmax = []
    for i, v in enumerate(P.vertices):
        val = exact.dot(x, v)
        if best is None or val > best:
            best, argmax = val, [i]
        elif val == best:
            argmax.append(i)
    return SupportResult(_canon_num(best), tuple(argmax))


def polar(P: Polytope) -> Polytope:
    """The polar {x : <x,y> <= 1 for all y in P}; requires P full-dimensional
    with 0 in its interior."""
    if not P.is_full_dim() or any(f.offset <= 0 for f in P.facets):
        raise PolarUndefinedError("polar undefined")
    pts = [tuple(Fraction(c, 1) / f.offset for c in f.normal) for f in P.facets]
    return convex_hull(pts)


def minkowski_sum(P: Polytope, Q: Polytope) -> Polytope:
    if P.dim != Q.dim:
        raise DimensionMismatchError("minkowski sum of mixed dimensions")
    return convex_hull(
        [exact.vec_add(v, w) for v in P.vertices for w in Q.vertices]
    )


def equal(P: Polytope, Q: Polytope) -> bool:
    """Set equality via identical canonical vertex lists."""
    if P.dim != Q.dim:
        raise DimensionMismatchError("comparing polytopes of mixed dimension")
    return P.vertices == Q.vertices


def exposure_witness(P: Polytope, v: int) -> tuple:
    """An integer direction strictly maximized at vertex v only: the sum of
    the primitive normals of the facets containing v."""
    if len(P.vertices) == 1:
        raise ValueError("nothing to separate")
    vert = P.vertices[v]
    u = (0,) * P.dim
    for f in P.facets:
        if f.tight(vert):
            u = exact.vec_add(u, f.normal)
    val = exact.dot(u, vert)
    for j, w in enumerate(P.vertices):
        if j != v and exact.dot(u, w) >= val:
            raise AssertionError("exposure witness failed strict separation")
    return u


def exposed_points(P: Polytope) -> tuple:
    """Indices of vertices with an exposure witness; every vertex, for
    polytopes (single points are exposed by convention)."""
    if len(P.vertices) == 1:
        return (0,)
    out = []
    for i in range(len(P.vertices)):
        try:
            exposure_witness(P, i)
        except AssertionError:
            continue
        out.append(i)
    return tuple(out)


def validate_polytope(P: Polytope) -> None:
    """Check the V/H invariants; raises AssertionError on violation."""
    k = P.affine_dim
    assert list(P.vertices) == sorted(set(P.vertices)), "vertices not canonical"
    for v in P.vertices:
        tight = 0
        for f in P.facets:
            d = exact.dot(f.normal, v)
            assert d <= f.offset, f"vertex {v} violates facet {f}"
            tight += d == f.offset
        assert tight >= k, f"vertex {v} tight on {tight} < {k} facets"
    for i, f in enumerate(P.facets):
        assert len(P.facet_vertices(i)) >= k, "facet tight at too few vertices"
        g = 0
        for c in f.normal:
            g = math.gcd(g, abs(c))
        assert g == 1, "facet normal not primitive"
    rows, _, _ = _affine_basis(list(P.vertices), P.vertices[0])
    if P.span is None:
        assert len(rows) == P.dim, "full-dimensional polytope without full span"
    else:
        assert len(rows) == len(P.span) < P.dim, "span basis has wrong rank"
        for v in P.vertices:
            _span_coords(exact.vec_sub(v, P.vertices[0]), rows,
                         [next(i for i, a in enumerate(r) if a != 0) for r in rows])


# ---------------------------------------------------------------------------
# file format

def _num_to_obj(x):
    x = _canon_num(x)
    if isinstance(x, int):
        return x
    return {"num": x.numerator, "den": x.denominator}


def _num_from_obj(obj, path):
    if isinstance(obj, bool):
        raise SpecFormatError("expected a number", path=path)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, dict) and set(obj) == {"num", "den"}:
        num, den = obj["num"], obj["den"]
        if isinstance(num, int) and isinstance(den, int) and den > 0:
            return _canon_num(Fraction(num, den))
    raise SpecFormatError(
        "numbers must be integers or {num, den} objects with den > 0", path=path
    )


def polytope_to_obj(P: Polytope) -> dict:
    obj = {
        "dim": P.dim,
        "vertices": [[_num_to_obj(c) for c in v] for v in P.vertices],
        "facets": [
            {"normal": list(f.normal), "offset": _num_to_obj(f.offset)}
            for f in P.facets
        ],
    }
    if P.span is not None:
        obj["span"] = [[_num_to_obj(c) for c in r] for r in P.span]
    return obj


def polytope_from_obj(obj) -> Polytope:
    """Rebuild a polytope from its file form.

    Vertex order is tolerated unordered; the canonical hull is recomputed
    and, when facets are present, cross-checked against them.
    """
    if not isinstance(obj, dict):
        raise SpecFormatError("polytope document must be an object", path="$")
    if "dim" not in obj or isinstance(obj["dim"], bool) or not isinstance(obj["dim"], int):
        raise SpecFormatError("polytope needs an integer 'dim'", path="$")
    dim = obj["dim"]
    raw = obj.get("vertices")
    if not isinstance(raw, list) or not raw:
        raise SpecFormatError("polytope needs a nonempty 'vertices' list", path="$")
    pts = []
    for i, v in enumerate(raw):
        if not isinstance(v, list) or len(v) != dim:
            raise SpecFormatError(
                f"vertex must be a list of {dim} numbers", path=f"$.vertices[{i}]"
            )
        pts.append(tuple(_num_from_obj(c, f"$.vertices[{i}][{j}]") for j, c in enumerate(v)))
    P = convex_hull(pts)
    if "facets" in obj:
        raw_f = obj["facets"]
        if not isinstance(raw_f, list):
            raise SpecFormatError("'facets' must be a list", path="$.facets")
        given = set()
        for i, f in enumerate(raw_f):
            if not isinstance(f, dict) or "normal" not in f or "offset" not in f:
                raise SpecFormatError(
                    "facet must be an object with 'normal' and 'offset'",
                    path=f"$.facets[{i}]",
                )
            normal = tuple(
                _num_from_obj(c, f"$.facets[{i}].normal[{j}]")
                for j, c in enumerate(f["normal"])
            )
            if any(not isinstance(c, int) for c in normal):
                raise SpecFormatError("facet normals must be integer", path=f"$.facets[{i}]")
            given.add((normal, Fraction(_num_from_obj(f["offset"], f"$.facets[{i}].offset"))))
        derived = {(f.normal, Fraction(f.offset)) for f in P.facets}
        if given != derived:
            raise SpecFormatError(
                "facets inconsistent with the hull of the listed vertices", path="$.facets"
            )
    return P


def load_polytope(path) -> Polytope:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as err:
            raise SpecFormatError(err.msg, line=err.lineno, col=err.colno) from err
    return polytope_from_obj(obj)


def dump_polytope(P: Polytope) -> str:
    return json.dumps(polytope_to_obj(P), sort_keys=True) + "\n"


def span_complement(P: Polytope) -> tuple:
    """Primitive integer basis of the orthogonal complement of P's span."""
    if P.span is None:
        return ()
    if len(P.span) == 0:
        return tuple(
            tuple(1 if i == j else 0 for i in range(P.dim)) for j in range(P.dim)
        )
    return _null_space(P.span, P.dim)
