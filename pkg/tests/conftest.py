"""Shared independent oracles for cross-checking the exact geometry.

These deliberately avoid the package's own hull/support machinery:
membership goes through Caratheodory (barycentric solves over small
affinely independent subsets), support through direct maximization.
"""

import itertools
from fractions import Fraction

import pytest


def barycentric_in_subset(subset, p):
    """Exact barycentric coordinates of p over an affinely independent
    subset, or None (dependent subset, inconsistent, or negative weight)."""
    m = len(subset)
    d = len(p)
    aug = [
        [Fraction(subset[j][i]) for j in range(m)] + [Fraction(p[i])]
        for i in range(d)
    ]
    aug.append([Fraction(1)] * m + [Fraction(1)])
    pivots = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        prow = aug[r]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                coef = aug[i][c] / prow[c]
                aug[i] = [a - coef * b for a, b in zip(aug[i], prow)]
        pivots.append(c)
        r += 1
    if len(pivots) < m:
        return None
    for i in range(r, len(aug)):
        if aug[i][m] != 0:
            return None
    lam = [Fraction(0)] * m
    for i, c in enumerate(pivots):
        lam[c] = aug[i][m] / aug[i][c]
    if any(v < 0 for v in lam):
        return None
    return lam


def conv_member(p, pts):
    """p in conv(pts), decided exactly via Caratheodory."""
    pts = list(dict.fromkeys(tuple(q) for q in pts))
    p = tuple(p)
    if p in pts:
        return True
    d = len(p)
    for m in range(1, min(len(pts), d + 1) + 1):
        for subset in itertools.combinations(pts, m):
            if barycentric_in_subset(subset, p) is not None:
                return True
    return False


def brute_vertices(pts):
    """Vertex set of conv(pts): points not in the hull of the others."""
    pts = sorted(set(tuple(q) for q in pts))
    return tuple(
        p for p in pts if not conv_member(p, [q for q in pts if q != p])
    )


def brute_support(vertices, x):
    """(max <x,v>, all attaining indices) by direct loop."""
    vals = [sum(a * b for a, b in zip(x, v)) for v in vertices]
    best = max(vals)
    return best, tuple(i for i, v in enumerate(vals) if v == best)


def lattice_ball(dim, radius):
    return itertools.product(range(-radius, radius + 1), repeat=dim)


@pytest.fixture
def rng():
    import random

    return random.Random(0xD0A1)
