"""Dual-ball reconstruction: ray probes recover integer dual vertices via
forward differences; an adaptive loop assembles and certifies the ball.

A probe walks x_n = n*direction + offset, recording the forward differences
N(x_n + e_j) - N(x_n). Deep inside the normal cone of a dual vertex the
differences equal that vertex exactly and the residual N(x_n) - <x_n, diffs>
vanishes; a window of consecutive confirming steps yields a certificate.
Directions that expose a face rather than a vertex keep a nonzero residual
and are retried with deterministic perturbations.
"""

from __future__ import annotations

import hashlib
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import exact, geometry
from ._kernels import certify_sweep as _kernel_certify
from ._kernels import eval_int as _kernel_eval
from .errors import (
    DimensionMismatchError,
    IntegralityError,
    LemmaChainError,
    OracleError,
)
from .seminorm import SeminormSpec, compile_spec, evaluate, validate_axioms, validate_integrality

PERTURB_SCALE_BASE = 8


@dataclass(frozen=True)
class RayProbe:
    """One step of a ray walk."""

    direction: tuple
    offset: tuple
    n: int
    x_n: tuple
    lambda_n: object  # <x_n, candidate vertex>, exact
    z_sq: object  # squared norm of the component orthogonal to the ray, or None
    value: int  # N(x_n)
    diffs: tuple  # forward differences, the candidate vertex
    residual: int  # N(x_n) - <x_n, diffs>
    back_diffs: tuple | None = None  # N(x_n) - N(x_n - e_j), when tracked


@dataclass(frozen=True)
class ExposureCertificate:
    """A recovered integer dual vertex with its confirming probe window."""

    vertex: tuple
    direction: tuple
    n_star: int
    window: int
    probes: tuple


@dataclass(frozen=True)
class Unstable:
    """Probe outcome when no confirming window appears: the direction
    exposes a face rather than a vertex, or the walk budget ran out."""

    direction: tuple
    offset: tuple
    probes: tuple
    reason: str


@dataclass(frozen=True)
class CertificationReport:
    passed: bool
    radius: int
    checked_count: int
    counterexample: tuple | None  # (x, oracle value, support value)


@dataclass(frozen=True)
class Budget:
    """Probe/direction limits for reconstruction."""

    n_max: int | None = None  # default: 64 * d * max|direction component|
    window: int = 3
    attempts: int = 8  # perturbation retries per direction
    max_probes: int = 20000
    max_rounds: int = 256


@dataclass(frozen=True)
class ReconstructionResult:
    polytope: geometry.Polytope
    certificates: tuple
    complete: bool
    probe_count: int


@lru_cache(maxsize=None)
def _compiled(spec: SeminormSpec):
    return compile_spec(spec)


def _default_n_max(dim: int, direction) -> int:
    return 64 * dim * max(abs(c) for c in direction)


def probe_vertex(
    oracle: SeminormSpec,
    direction,
    offset=None,
    n_max: int | None = None,
    window: int = 3,
):
    """Walk a ray until `window` consecutive steps agree on integer forward
    differences, with matching backward differences and residual exactly 0;
    returns a certificate or Unstable.

    Forward differences stabilize to the componentwise max over the face
    the ray exposes, backward differences to the componentwise min; their
    agreement forces that face to be a single vertex. For offset-0 walks
    both are pinned after one consecutive repeat (the difference envelopes
    are convex resp. concave in n), so a pinned non-certifying state is
    reported Unstable immediately.
    """
    if not oracle.is_total():
        raise ValueError("probing needs a total oracle")
    direction = exact.latvec(direction)
    if len(direction) != oracle.dim:
        raise DimensionMismatchError("direction has wrong dimension")
    if exact.is_zero(direction):
        raise ValueError("direction must be nonzero")
    d = oracle.dim
    offset = (0,) * d if offset is None else exact.latvec(offset)
    if len(offset) != d:
        raise DimensionMismatchError("offset has wrong dimension")
    if n_max is None:
        n_max = _default_n_max(d, direction)
    if window < 2 or n_max < window:
        raise ValueError("need n_max >= window >= 2")
    prog = _compiled(oracle)
    zero_offset = exact.is_zero(offset)

    probes = []
    run = []
    prev = None
    for n in range(1, n_max + 1):
        probe = _ray_step(prog, direction, offset, n, backward=True)
        if any(not isinstance(c, int) for c in probe.diffs):
            raise IntegralityError("integrality violated: non-integer forward difference")
        probes.append(probe)
        confirming = probe.residual == 0 and probe.diffs == probe.back_diffs
        if confirming:
            if run and run[-1].diffs != probe.diffs:
                run = []
            run.append(probe)
            if len(run) >= window and _member_on_probes(probes, probe.diffs):
                return ExposureCertificate(
                    vertex=probe.diffs,
                    direction=direction,
                    n_star=run[0].n,
                    window=window,
                    probes=tuple(run[-window:]),
                )
        else:
            run = []
            # offset-0 difference envelopes are pinned after one consecutive
            # repeat, and the residual n*(N(dir) - <dir, diffs>) is zero for
            # one n > 0 iff it is zero for all: the verdict cannot change
            if zero_offset and prev == (probe.diffs, probe.back_diffs):
                reason = (
                    "direction exposes a face, not a vertex"
                    if probe.diffs != probe.back_diffs
                    else "stable differences with nonzero residual"
                )
                return Unstable(direction, offset, tuple(probes), reason=reason)
        prev = (probe.diffs, probe.back_diffs)
    return Unstable(direction, offset, tuple(probes), reason="n_max exhausted")


def _ray_step(prog, direction, offset, n, backward=False) -> RayProbe:
    d = len(direction)
    x = tuple(n * a + b for a, b in zip(direction, offset))
    value = _kernel_eval(prog, x)
    diffs = []
    back = [] if backward else None
    for j in range(d):
        xe = tuple(c + 1 if i == j else c for i, c in enumerate(x))
        diffs.append(_kernel_eval(prog, xe) - value)
        if backward:
            xb = tuple(c - 1 if i == j else c for i, c in enumerate(x))
            back.append(value - _kernel_eval(prog, xb))
    diffs = tuple(diffs)
    lam = exact.dot(x, diffs)
    s = exact.dot(direction, diffs)
    z_sq = None
    if s > 0:
        x0 = tuple(Fraction(c, s) for c in direction)
        z = exact.vec_sub(x, exact.vec_scale(Fraction(lam), x0))
        z_sq = exact.norm_sq(z)
    return RayProbe(
        direction=direction,
        offset=offset,
        n=n,
        x_n=x,
        lambda_n=lam,
        z_sq=z_sq,
        value=value,
        diffs=diffs,
        residual=value - lam,
        back_diffs=tuple(back) if backward else None,
    )


def _member_on_probes(probes, vertex) -> bool:
    """Membership of the candidate vertex on every probe point examined:
    <x, vertex> <= N(x) at each x_n and each x_n +- e_j."""
    for p in probes:
        if exact.dot(p.x_n, vertex) > p.value:
            return False
        for j, dj in enumerate(p.diffs):
            xe = tuple(c + 1 if i == j else c for i, c in enumerate(p.x_n))
            if exact.dot(xe, vertex) > p.value + dj:
                return False
        if p.back_diffs is not None:
            for j, bj in enumerate(p.back_diffs):
                xb = tuple(c - 1 if i == j else c for i, c in enumerate(p.x_n))
                if exact.dot(xb, vertex) > p.value - bj:
                    return False
    return True


def _digest(seed: int, attempt: int, direction) -> int:
    h = hashlib.sha256(f"{seed}:{attempt}:{direction}".encode()).digest()
    return int.from_bytes(h[:8], "big")


def perturb_direction(direction, attempt: int, seed: int) -> tuple:
    """Deterministic perturbation: primitive(2^attempt * base * direction + r)
    with a seeded random integer r, max-norm at most `attempt`."""
    direction = exact.latvec(direction)
    if exact.is_zero(direction):
        raise ValueError("direction must be nonzero")
    if attempt == 0:
        return exact.primitive(direction)
    scale = (1 << attempt) * PERTURB_SCALE_BASE
    rng = random.Random(_digest(seed, attempt, direction))
    r = tuple(rng.randint(-attempt, attempt) for _ in direction)
    return exact.primitive(tuple(scale * a + b for a, b in zip(direction, r)))


def _probe_search(oracle, base_direction, seed, budget, start_attempt):
    """Probe a direction with escalating perturbations; returns
    (certificate or None, attempt reached, probes spent)."""
    spent = 0
    for attempt in range(start_attempt, budget.attempts + 1):
        dirn = perturb_direction(base_direction, attempt, seed)
        res = probe_vertex(
            oracle, dirn, None, budget.n_max, budget.window
        )
        spent += 1
        if isinstance(res, ExposureCertificate):
            return res, attempt, spent
    return None, budget.attempts + 1, spent


def reconstruct(
    oracle: SeminormSpec,
    budget: Budget | None = None,
    seed: int = 0,
    jobs: int = 1,
) -> ReconstructionResult:
    """Recover the dual unit ball as a polytope with certified vertices.

    Seeds probes along the signed coordinate directions, then alternates
    two confirmation passes until both are clean: span-escape directions
    (orthogonal complement of the current hull's span; flat exactly when
    the oracle vanishes on the direction) and facet directions (a facet is
    confirmed when the oracle's value at its normal equals its offset).
    Every probe that certifies an unseen vertex grows the hull.
    """
    if not isinstance(oracle, SeminormSpec):
        raise TypeError("oracle must be a seminorm spec")
    if not oracle.is_total():
        raise ValueError("reconstruction needs a total oracle")
    budget = budget or Budget()
    d = oracle.dim

    axioms = validate_axioms(oracle, sample_budget=64, seed=seed + 101)
    if not axioms.ok:
        raise OracleError(f"oracle fails seminorm axioms: {axioms.failed()}")
    integrality = validate_integrality(oracle, radius=2)
    if not integrality.ok:
        raise OracleError(f"oracle fails integrality: {integrality.failed()}")

    certified: dict[tuple, ExposureCertificate] = {}
    attempt_state: dict[tuple, int] = {}
    probe_count = 0

    def run_batch(directions):
        nonlocal probe_count
        tasks = sorted(set(directions))
        args = [(dirn, attempt_state.get(dirn, 0)) for dirn in tasks]
        if jobs > 1 and len(args) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(
                    pool.map(
                        lambda a: _probe_search(oracle, a[0], seed, budget, a[1]),
                        args,
                    )
                )
        else:
            results = [
                _probe_search(oracle, dirn, seed, budget, start)
                for dirn, start in args
            ]
        new_vertex = False
        for (dirn, _), (cert, attempt, spent) in zip(args, results):
            probe_count += spent
            attempt_state[dirn] = attempt + 1
            if cert is not None and cert.vertex not in certified:
                certified[cert.vertex] = cert
                new_vertex = True
        return new_vertex

    seeds = []
    for j in range(d):
        e = tuple(1 if i == j else 0 for i in range(d))
        seeds.append(e)
        seeds.append(exact.vec_neg(e))
    run_batch(seeds)

    complete = False
    hull = None
    for _ in range(budget.max_rounds):
        verts = sorted(certified) if certified else [(0,) * d]
        hull = geometry.convex_hull(verts)

        pending = []
        for u in geometry.span_complement(hull):
            for su in (u, exact.vec_neg(u)):
                if evaluate(oracle, su) != 0:
                    pending.append(su)
        if not pending:
            for i, f in enumerate(hull.facets):
                nval = evaluate(oracle, f.normal)
                if nval == f.offset:
                    continue
                if nval < f.offset:
                    raise OracleError(
                        "support value below hull facet; certificates inconsistent"
                    )
                pending.append(f.normal)
        if not pending:
            complete = True
            break
        if probe_count >= budget.max_probes:
            break
        progressed = run_batch(pending)
        if not progressed and all(
            attempt_state.get(dirn, 0) > budget.attempts for dirn in pending
        ):
            break  # all retries exhausted; report incomplete

    certificates = tuple(certified[v] for v in sorted(certified))
    if hull is None:
        verts = sorted(certified) if certified else [(0,) * d]
        hull = geometry.convex_hull(verts)
    return ReconstructionResult(
        polytope=hull,
        certificates=certificates,
        complete=complete,
        probe_count=probe_count,
    )


def certify(
    oracle: SeminormSpec, P: geometry.Polytope, radius: int | None = None
) -> CertificationReport:
    """Check support(P, x) = N(x) for every lattice x with max-norm <= radius.

    Sweeps shells of increasing max-norm (descending lex within a shell)
    and reports the first mismatch as a counterexample. Equality also
    certifies membership <x, y> <= N(x) for every vertex y of P.
    """
    if not oracle.is_total():
        raise ValueError("certification needs a total oracle")
    if P.dim != oracle.dim:
        raise DimensionMismatchError("polytope and oracle dimensions differ")
    if P.int_vertices() is None:
        raise ValueError("polytope has a non-integer vertex")
    if radius is None:
        radius = default_certify_radius(P)
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    prog = _compiled(oracle)
    ok, checked, cx = _kernel_certify(prog, P.point_table(), radius)
    counterexample = None if ok else (tuple(cx[0]), cx[1], cx[2])
    return CertificationReport(
        passed=ok, radius=radius, checked_count=checked, counterexample=counterexample
    )


def default_certify_radius(P: geometry.Polytope) -> int:
    table = P.point_table()
    if table is None:
        raise ValueError("polytope has a non-integer vertex")
    return 2 * P.dim * table.max_abs


def lemma_trace(
    oracle: SeminormSpec,
    direction,
    offset,
    y0,
    n_max: int,
) -> tuple:
    """Trace the stabilization bound along a ray for a certified vertex y0.

    With x0 = direction normalized so <x0, y0> = 1, each step n asserts
    exactly: lambda_n <= N(x_n); the decomposition identity
    N(x_n) = lambda_n <x0, y_n> + <z_n, y_n> with y_n a support argmax
    vertex; and the squared Cauchy-Schwarz bound
    (N(x_n) - lambda_n)^2 <= |z_n|^2 |y_n - y0|^2.
    """
    direction = exact.latvec(direction)
    offset = exact.latvec(offset) if offset is not None else (0,) * oracle.dim
    y0 = exact.latvec(y0)
    s = exact.dot(direction, y0)
    if s <= 0:
        raise ValueError("need <direction, y0> > 0")
    if evaluate(oracle, direction) != s:
        raise ValueError("y0 is not a certified vertex for this direction")
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    ball = reconstruct(oracle, seed=0)
    if not ball.complete:
        raise OracleError("internal reconstruction incomplete; cannot trace")
    P = ball.polytope
    x0 = tuple(Fraction(c, s) for c in direction)
    prog = _compiled(oracle)

    probes = []
    for n in range(n_max + 1):
        step = _trace_step(prog, direction, offset, y0, x0, n, P)
        probes.append(step)
    return tuple(probes)


def _trace_step(prog, direction, offset, y0, x0, n, P) -> RayProbe:
    d = len(direction)
    x = tuple(n * a + b for a, b in zip(direction, offset))
    value = _kernel_eval(prog, x)
    diffs = []
    for j in range(d):
        xe = tuple(c + 1 if i == j else c for i, c in enumerate(x))
        diffs.append(_kernel_eval(prog, xe) - value)
    diffs = tuple(diffs)
    lam = exact.dot(x, y0)
    z = exact.vec_sub(x, exact.vec_scale(Fraction(lam), x0))
    z_sq = exact.norm_sq(z)
    yn = P.vertices[geometry.support(P, x).argmax_vertices[0]]

    if not lam <= value:
        raise LemmaChainError(f"lambda_{n} = {lam} > N = {value}")
    middle = Fraction(lam) * exact.dot(x0, yn) + exact.dot(z, yn)
    if middle != value:
        raise LemmaChainError(f"decomposition identity fails at n={n}: {middle} != {value}")
    gap = value - lam
    if gap * gap > z_sq * exact.norm_sq(exact.vec_sub(yn, y0)):
        raise LemmaChainError(f"Cauchy-Schwarz bound fails at n={n}")

    return RayProbe(
        direction=direction,
        offset=offset,
        n=n,
        x_n=x,
        lambda_n=lam,
        z_sq=z_sq,
        value=value,
        diffs=diffs,
        residual=value - exact.dot(x, diffs),
    )


# ---------------------------------------------------------------------------
# JSON forms consumed by the CLI

def _num_obj(x):
    if x is None:
        return None
    f = Fraction(x)
    if f.denominator == 1:
        return int(f)
    return {"num": f.numerator, "den": f.denominator}


def probe_to_obj(p: RayProbe) -> dict:
    obj = {
        "n": p.n,
        "x": list(p.x_n),
        "value": p.value,
        "diffs": list(p.diffs),
        "residual": p.residual,
        "lambda": _num_obj(p.lambda_n),
        "z_sq": _num_obj(p.z_sq),
    }
    if p.back_diffs is not None:
        obj["back_diffs"] = list(p.back_diffs)
    return obj


def certificate_to_obj(cert: ExposureCertificate) -> dict:
    return {
        "vertex": list(cert.vertex),
        "direction": list(cert.direction),
        "n_star": cert.n_star,
        "window": cert.window,
        "probes": [probe_to_obj(p) for p in cert.probes],
    }


def report_to_obj(rep: CertificationReport) -> dict:
    obj = {
        "pass": rep.passed,
        "radius": rep.radius,
        "checked_count": rep.checked_count,
    }
    if rep.counterexample is not None:
        x, nval, sval = rep.counterexample
        obj["counterexample"] = {"x": list(x), "oracle": nval, "support": sval}
    return obj
