"""Composable integer-valued seminorms: exact evaluation and validation.

A seminorm is described by a tree of immutable spec nodes. All built-in
total kinds take integer values on the integer lattice by construction
(weights, generator points and pullback matrices are integers at the
format level). Evaluation at rational points reduces to an integer
evaluation by positive homogeneity: N(g/q) = N(g)/q for q > 0.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import exact
from .errors import DimensionMismatchError, OracleUndefinedError, SpecFormatError


@dataclass(frozen=True)
class SeminormSpec:
    """Base node; subclasses define the actual functional form."""

    dim: int

    def is_total(self) -> bool:
        return True

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")


@dataclass(frozen=True)
class Vertices(SeminormSpec):
    """N(x) = max over the symmetrized generator set +-F of <x, y>."""

    points: tuple

    def __post_init__(self):
        super().__post_init__()
        pts = tuple(sorted({exact.latvec(p) for p in self.points}))
        if not pts:
            raise ValueError("vertices kind needs at least one generator point")
        for p in pts:
            if len(p) != self.dim:
                raise DimensionMismatchError(
                    f"generator point of length {len(p)} in dimension {self.dim}"
                )
        object.__setattr__(self, "points", pts)

    def symmetrized(self) -> tuple:
        """The generator set closed under negation, in canonical order."""
        sym = set(self.points) | {exact.vec_neg(p) for p in self.points}
        return tuple(sorted(sym))


def _check_weights(weights, dim):
    w = tuple(int(a) for a in weights)
    if len(w) != dim:
        raise DimensionMismatchError(f"{len(w)} weights in dimension {dim}")
    if any(a <= 0 for a in w):
        raise ValueError("weights must be strictly positive integers")
    return w


@dataclass(frozen=True)
class WeightedL1(SeminormSpec):
    """N(x) = sum_i a_i |x_i| with positive integer weights."""

    weights: tuple

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "weights", _check_weights(self.weights, self.dim))


@dataclass(frozen=True)
class WeightedLinf(SeminormSpec):
    """N(x) = max_i a_i |x_i| with positive integer weights."""

    weights: tuple

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "weights", _check_weights(self.weights, self.dim))


def _check_terms(terms, dim):
    ts = tuple(terms)
    if not ts:
        raise ValueError("combinator needs at least one term")
    for t in ts:
        if not isinstance(t, SeminormSpec):
            raise TypeError("combinator terms must be seminorm specs")
        if t.dim != dim:
            raise DimensionMismatchError(
                f"term of dimension {t.dim} under combinator of dimension {dim}"
            )
    return ts


@dataclass(frozen=True)
class Sum(SeminormSpec):
    terms: tuple

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "terms", _check_terms(self.terms, self.dim))

    def is_total(self) -> bool:
        return all(t.is_total() for t in self.terms)


@dataclass(frozen=True)
class Max(SeminormSpec):
    terms: tuple

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "terms", _check_terms(self.terms, self.dim))

    def is_total(self) -> bool:
        return all(t.is_total() for t in self.terms)


@dataclass(frozen=True)
class Pullback(SeminormSpec):
    """N(x) = N_inner(A x) for an integer matrix A (m rows, dim columns)."""

    matrix: tuple
    inner: SeminormSpec

    def __post_init__(self):
        super().__post_init__()
        rows = tuple(exact.latvec(r) for r in self.matrix)
        if not rows:
            raise ValueError("pullback matrix needs at least one row")
        if any(len(r) != self.dim for r in rows):
            raise DimensionMismatchError("pullback matrix rows must have length dim")
        if self.inner.dim != len(rows):
            raise DimensionMismatchError(
                f"inner dimension {self.inner.dim} != matrix row count {len(rows)}"
            )
        object.__setattr__(self, "matrix", rows)

    def is_total(self) -> bool:
        return self.inner.is_total()


@dataclass(frozen=True, eq=False)
class Table(SeminormSpec):
    """Partial evaluation-only oracle on explicitly listed lattice points."""

    entries: dict

    def __post_init__(self):
        super().__post_init__()
        ent = {}
        for p, v in self.entries.items():
            key = exact.latvec(p)
            if len(key) != self.dim:
                raise DimensionMismatchError("table point of wrong dimension")
            v = int(v)
            if v < 0:
                raise ValueError("table values must be nonnegative integers")
            if key in ent and ent[key] != v:
                raise ValueError(f"conflicting table values at {key}")
            ent[key] = v
        for p, v in ent.items():
            neg = exact.vec_neg(p)
            if neg in ent and ent[neg] != v:
                raise ValueError(f"table not symmetric at {p}")
        object.__setattr__(self, "entries", ent)

    def is_total(self) -> bool:
        return False


def _eval_int(spec: SeminormSpec, g: tuple) -> int:
    """Exact value at an integer point (always an integer for total kinds)."""
    if isinstance(spec, Vertices):
        return max(abs(exact.dot(g, p)) for p in spec.points)
    if isinstance(spec, WeightedL1):
        return sum(a * abs(c) for a, c in zip(spec.weights, g))
    if isinstance(spec, WeightedLinf):
        return max(a * abs(c) for a, c in zip(spec.weights, g))
    if isinstance(spec, Sum):
        return sum(_eval_int(t, g) for t in spec.terms)
    if isinstance(spec, Max):
        return max(_eval_int(t, g) for t in spec.terms)
    if isinstance(spec, Pullback):
        return _eval_int(spec.inner, exact.mat_vec(spec.matrix, g))
    if isinstance(spec, Table):
        try:
            return spec.entries[g]
        except KeyError:
            raise OracleUndefinedError(f"oracle undefined here: {g}") from None
    raise TypeError(f"unknown spec node {type(spec).__name__}")


def evaluate(spec: SeminormSpec, x: Sequence):
    """Exact N(x) for a rational point x; int at integer points.

    Table-backed specs are defined only on their listed lattice points.
    """
    x = tuple(x)
    if len(x) != spec.dim:
        raise DimensionMismatchError(
            f"point of dimension {len(x)} against spec of dimension {spec.dim}"
        )
    ints = exact.as_int_vec(x)
    if ints is not None:
        return _eval_int(spec, ints)
    if not spec.is_total():
        raise OracleUndefinedError("oracle undefined here: not a lattice point")
    g, q = exact.clear_denominators(x)
    val = Fraction(_eval_int(spec, g), q)
    return int(val) if val.denominator == 1 else val


# ---------------------------------------------------------------------------
# compilation to a flat program (consumed by the evaluation kernels)

L1, LINF, VERTS = 0, 1, 2


@dataclass(frozen=True, eq=False)
class CompiledSeminorm:
    """Flattened form of a total spec: leaves reached through one composed
    integer matrix each, combined by a postfix sum/max program.

    ``unit_bound`` is an exact integer C such that every intermediate of an
    integer evaluation satisfies |value| <= C * max|x_i|; kernels use it to
    prove that an int64 fast path cannot overflow.
    """

    dim: int
    leaves: tuple  # (matrix rows | None, kind, data rows/weights)
    ops: tuple  # ("leaf", i) | ("add", k) | ("max", k)
    unit_bound: int


def _mat_mul(a, b):
    # a: m x k, b: k x d -> m x d, integer rows
    bt = list(zip(*b))
    return tuple(tuple(exact.dot(row, col) for col in bt) for row in a)


def compile_spec(spec: SeminormSpec) -> CompiledSeminorm:
    if not spec.is_total():
        raise ValueError("only total specs can be compiled")
    leaves = []
    ops = []

    def walk(node, transform):
        if isinstance(node, Pullback):
            t = node.matrix if transform is None else _mat_mul(node.matrix, transform)
            walk(node.inner, t)
        elif isinstance(node, (Sum, Max)):
            for t in node.terms:
                walk(t, transform)
            ops.append(("add" if isinstance(node, Sum) else "max", len(node.terms)))
        elif isinstance(node, WeightedL1):
            ops.append(("leaf", len(leaves)))
            leaves.append((transform, L1, node.weights))
        elif isinstance(node, WeightedLinf):
            ops.append(("leaf", len(leaves)))
            leaves.append((transform, LINF, node.weights))
        elif isinstance(node, Vertices):
            ops.append(("leaf", len(leaves)))
            leaves.append((transform, VERTS, node.points))
        else:
            raise TypeError(f"unknown spec node {type(node).__name__}")

    walk(spec, None)
    return CompiledSeminorm(
        dim=spec.dim,
        leaves=tuple(leaves),
        ops=tuple(ops),
        unit_bound=_unit_bound(spec.dim, leaves, ops),
    )


def _unit_bound(dim, leaves, ops):
    # Per-coordinate growth: |(Mx)_i| <= (sum_j |M_ij|) * ||x||_inf.
    leaf_bounds = []
    for transform, kind, data in leaves:
        if transform is None:
            row_bounds = [1] * dim
        else:
            row_bounds = [sum(abs(e) for e in row) for row in transform]
        if kind == L1:
            c = sum(a * rb for a, rb in zip(data, row_bounds))
        elif kind == LINF:
            c = max(a * rb for a, rb in zip(data, row_bounds))
        else:
            c = max(
                (sum(abs(pi) * rb for pi, rb in zip(p, row_bounds)) for p in data),
                default=0,
            )
        leaf_bounds.append(c)
    stack = []
    peak = 1
    for op, arg in ops:
        if op == "leaf":
            stack.append(leaf_bounds[arg])
        elif op == "add":
            vals = [stack.pop() for _ in range(arg)]
            stack.append(sum(vals))
        else:
            vals = [stack.pop() for _ in range(arg)]
            stack.append(max(vals))
        peak = max(peak, stack[-1])
    assert len(stack) == 1
    return max(peak, stack[0])


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: tuple | None = None


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> tuple:
        return tuple(c for c in self.checks if not c.passed)


def _random_rational_point(rng, dim):
    return tuple(
        Fraction(rng.randint(-48, 48), rng.randint(1, 12)) for _ in range(dim)
    )


def validate_axioms(
    spec: SeminormSpec, sample_budget: int = 1000, seed: int = 0
) -> ValidationReport:
    """Check the seminorm axioms exactly on seeded random rational points.

    Table specs get a restricted mode: the checks run over point
    combinations actually present in the table.
    """
    if not spec.is_total():
        return _validate_axioms_table(spec, sample_budget)
    rng = random.Random(seed)
    witnesses = {}
    for _ in range(sample_budget):
        x = _random_rational_point(rng, spec.dim)
        y = _random_rational_point(rng, spec.dim)
        t = Fraction(rng.randint(-24, 24), rng.randint(1, 8))
        nx = evaluate(spec, x)
        if "nonnegative" not in witnesses and nx < 0:
            witnesses["nonnegative"] = (x, nx)
        if "symmetry" not in witnesses:
            nmx = evaluate(spec, exact.vec_neg(x))
            if nmx != nx:
                witnesses["symmetry"] = (x, nx, nmx)
        if "homogeneity" not in witnesses:
            ntx = evaluate(spec, exact.vec_scale(t, x))
            if ntx != abs(t) * nx:
                witnesses["homogeneity"] = (x, t, nx, ntx)
        if "subadditivity" not in witnesses:
            ny = evaluate(spec, y)
            nxy = evaluate(spec, exact.vec_add(x, y))
            if nxy > nx + ny:
                witnesses["subadditivity"] = (x, y, nx, ny, nxy)
    checks = tuple(
        CheckResult(name, name not in witnesses, witnesses.get(name))
        for name in ("nonnegative", "symmetry", "homogeneity", "subadditivity")
    )
    return ValidationReport(checks)


def _validate_axioms_table(spec: Table, sample_budget: int) -> ValidationReport:
    entries = spec.entries
    points = sorted(entries)
    witnesses = {}
    for p in points:
        if entries[p] < 0:
            witnesses.setdefault("nonnegative", (p, entries[p]))
        neg = exact.vec_neg(p)
        if neg in entries and entries[neg] != entries[p]:
            witnesses.setdefault("symmetry", (p, entries[p], entries[neg]))
    zero = (0,) * spec.dim
    if zero in entries and entries[zero] != 0:
        witnesses.setdefault("homogeneity", (zero, 0, entries[zero]))
    # homogeneity over integer multiples present in the table
    budget = sample_budget
    for p in points:
        if "homogeneity" in witnesses or budget <= 0:
            break
        if exact.is_zero(p):
            continue
        for k in range(2, 17):
            kp = exact.vec_scale(k, p)
            if kp in entries:
                budget -= 1
                if entries[kp] != k * entries[p]:
                    witnesses["homogeneity"] = (p, k, entries[p], entries[kp])
                    break
    for i, p in enumerate(points):
        if "subadditivity" in witnesses or budget <= 0:
            break
        for q in points[i:]:
            s = exact.vec_add(p, q)
            if s in entries:
                budget -= 1
                if entries[s] > entries[p] + entries[q]:
                    witnesses["subadditivity"] = (p, q, entries[p], entries[q], entries[s])
                    break
            if budget <= 0:
                break
    checks = tuple(
        CheckResult(name, name not in witnesses, witnesses.get(name))
        for name in ("nonnegative", "symmetry", "homogeneity", "subadditivity")
    )
    return ValidationReport(checks)


def validate_integrality(spec: SeminormSpec, radius: int) -> ValidationReport:
    """Check N(x) in Z for every lattice x with max-norm <= radius, exactly."""
    if not spec.is_total():
        raise ValueError("integrality validation needs a total spec")
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    witness = None
    for x in _lattice_ball(spec.dim, radius):
        v = Fraction(_eval_int(spec, x))
        if v.denominator != 1:
            witness = (x, v)
            break
    return ValidationReport(
        (CheckResult(f"integer_on_lattice_ball_{radius}", witness is None, witness),)
    )


def _lattice_ball(dim, radius):
    import itertools

    return itertools.product(range(-radius, radius + 1), repeat=dim)


# ---------------------------------------------------------------------------
# file format

_KINDS = ("vertices", "weighted_l1", "weighted_linf", "sum", "max", "pullback", "table")


def _require_int(value, path):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecFormatError(f"expected an integer, got {value!r}", path=path)
    return value


def _require_int_list(value, path):
    if not isinstance(value, list):
        raise SpecFormatError("expected a list of integers", path=path)
    return [_require_int(v, f"{path}[{i}]") for i, v in enumerate(value)]


def _node_from_obj(obj, path, expect_dim):
    if not isinstance(obj, dict):
        raise SpecFormatError("spec node must be an object", path=path)
    kind = obj.get("kind")
    if kind not in _KINDS:
        raise SpecFormatError(
            f"unknown kind {kind!r}; expected one of {', '.join(_KINDS)}", path=path
        )
    declared = obj.get("dim")
    if declared is not None:
        declared = _require_int(declared, f"{path}.dim")
        if expect_dim is not None and declared != expect_dim:
            raise SpecFormatError(
                f"dim {declared} conflicts with required dimension {expect_dim}",
                path=path,
            )
    dim = declared if declared is not None else expect_dim

    try:
        if kind in ("weighted_l1", "weighted_linf"):
            weights = _require_int_list(obj.get("weights"), f"{path}.weights")
            dim = dim if dim is not None else len(weights)
            cls = WeightedL1 if kind == "weighted_l1" else WeightedLinf
            return cls(dim=dim, weights=tuple(weights))
        if kind == "vertices":
            raw = obj.get("points")
            if not isinstance(raw, list) or not raw:
                raise SpecFormatError("vertices kind needs a nonempty 'points' list", path=path)
            pts = [_require_int_list(p, f"{path}.points[{i}]") for i, p in enumerate(raw)]
            dim = dim if dim is not None else len(pts[0])
            return Vertices(dim=dim, points=tuple(tuple(p) for p in pts))
        if kind in ("sum", "max"):
            raw = obj.get("terms")
            if not isinstance(raw, list) or not raw:
                raise SpecFormatError(f"{kind} needs a nonempty 'terms' list", path=path)
            terms = [
                _node_from_obj(t, f"{path}.terms[{i}]", dim) for i, t in enumerate(raw)
            ]
            dim = dim if dim is not None else terms[0].dim
            cls = Sum if kind == "sum" else Max
            return cls(dim=dim, terms=tuple(terms))
        if kind == "pullback":
            raw = obj.get("matrix")
            if not isinstance(raw, list) or not raw:
                raise SpecFormatError("pullback needs a nonempty 'matrix'", path=path)
            rows = [_require_int_list(r, f"{path}.matrix[{i}]") for i, r in enumerate(raw)]
            dim = dim if dim is not None else len(rows[0])
            inner = _node_from_obj(obj.get("inner"), f"{path}.inner", len(rows))
            return Pullback(dim=dim, matrix=tuple(tuple(r) for r in rows), inner=inner)
        # table
        raw = obj.get("entries")
        if not isinstance(raw, list):
            raise SpecFormatError("table needs an 'entries' list", path=path)
        entries = {}
        for i, e in enumerate(raw):
            epath = f"{path}.entries[{i}]"
            if not isinstance(e, dict) or "point" not in e or "value" not in e:
                raise SpecFormatError(
                    "table entry must be an object with 'point' and 'value'", path=epath
                )
            pt = tuple(_require_int_list(e["point"], f"{epath}.point"))
            val = _require_int(e["value"], f"{epath}.value")
            if pt in entries and entries[pt] != val:
                raise SpecFormatError(f"conflicting values for point {list(pt)}", path=epath)
            entries[pt] = val
        if dim is None:
            if not entries:
                raise SpecFormatError("empty table needs an explicit 'dim'", path=path)
            dim = len(next(iter(entries)))
        return Table(dim=dim, entries=entries)
    except (ValueError, TypeError) as err:
        if isinstance(err, SpecFormatError):
            raise
        raise SpecFormatError(str(err), path=path) from err


def parse_spec(text: str) -> SeminormSpec:
    """Parse the JSON spec format; the root object must carry 'dim'."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise SpecFormatError(err.msg, line=err.lineno, col=err.colno) from err
    if not isinstance(obj, dict):
        raise SpecFormatError("spec root must be an object", path="$")
    if "dim" not in obj:
        raise SpecFormatError("spec root must declare 'dim'", path="$")
    root_dim = _require_int(obj["dim"], "$.dim")
    return _node_from_obj(obj, "$", root_dim)


def load_spec(path) -> SeminormSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_spec(fh.read())


def spec_to_obj(spec: SeminormSpec) -> dict:
    if isinstance(spec, Vertices):
        return {"kind": "vertices", "dim": spec.dim, "points": [list(p) for p in spec.points]}
    if isinstance(spec, WeightedL1):
        return {"kind": "weighted_l1", "dim": spec.dim, "weights": list(spec.weights)}
    if isinstance(spec, WeightedLinf):
        return {"kind": "weighted_linf", "dim": spec.dim, "weights": list(spec.weights)}
    if isinstance(spec, Sum):
        return {"kind": "sum", "dim": spec.dim, "terms": [spec_to_obj(t) for t in spec.terms]}
    if isinstance(spec, Max):
        return {"kind": "max", "dim": spec.dim, "terms": [spec_to_obj(t) for t in spec.terms]}
    if isinstance(spec, Pullback):
        return {
            "kind": "pullback",
            "dim": spec.dim,
            "matrix": [list(r) for r in spec.matrix],
            "inner": spec_to_obj(spec.inner),
        }
    if isinstance(spec, Table):
        return {
            "kind": "table",
            "dim": spec.dim,
            "entries": [
                {"point": list(p), "value": v} for p, v in sorted(spec.entries.items())
            ],
        }
    raise TypeError(f"unknown spec node {type(spec).__name__}")


def dump_spec(spec: SeminormSpec) -> str:
    return json.dumps(spec_to_obj(spec), sort_keys=True) + "\n"
