from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dualball import exact
from dualball.errors import DimensionMismatchError

rationals = st.fractions(
    min_value=-100, max_value=100, max_denominator=32
)


def vec(dim):
    return st.tuples(*[rationals] * dim)


class TestDot:
    def test_orthogonal_basis(self):
        assert exact.dot((1, 0), (0, 1)) == 0

    def test_direct_sum(self):
        assert exact.dot((2, 1), (1, 1)) == 3

    def test_rational(self):
        assert exact.dot((Fraction(3, 2), Fraction(-1, 2)), (2, 2)) == 2

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            exact.dot((1, 2), (1, 2, 3))

    @given(vec(3), vec(3), vec(3), rationals, rationals)
    def test_bilinear_symmetric(self, x, y, z, a, b):
        lhs = exact.dot(tuple(a * xi + b * yi for xi, yi in zip(x, y)), z)
        assert lhs == a * exact.dot(x, z) + b * exact.dot(y, z)
        assert exact.dot(x, y) == exact.dot(y, x)


class TestNearestLattice:
    def test_componentwise(self):
        assert exact.nearest_lattice((Fraction(3, 10), Fraction(-9, 10))) == (0, -1)

    def test_tie_rule_toward_plus_inf(self):
        assert exact.nearest_lattice((Fraction(3, 2), Fraction(-1, 2))) == (2, 0)

    def test_identity_on_lattice(self):
        assert exact.nearest_lattice((0, 0)) == (0, 0)

    @given(st.tuples(rationals, rationals, rationals))
    def test_within_half(self, p):
        q = exact.nearest_lattice(p)
        for pi, qi in zip(p, q):
            assert abs(Fraction(pi) - qi) <= Fraction(1, 2)


class TestPrimitive:
    def test_gcd_two(self):
        assert exact.primitive((4, 6)) == (2, 3)

    def test_axis(self):
        assert exact.primitive((0, 5)) == (0, 1)

    def test_already_primitive(self):
        assert exact.primitive((-3, 7)) == (-3, 7)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            exact.primitive((0, 0))

    @given(st.tuples(*[st.integers(-50, 50)] * 3))
    def test_idempotent(self, v):
        if all(c == 0 for c in v):
            return
        p = exact.primitive(v)
        assert exact.primitive(p) == p


class TestScaling:
    @given(vec(3))
    def test_clear_denominators(self, p):
        g, q = exact.clear_denominators(p)
        assert q > 0
        assert all(Fraction(gi, q) == Fraction(pi) for gi, pi in zip(g, p))

    @given(vec(2))
    def test_scale_to_primitive(self, w):
        if all(c == 0 for c in w):
            return
        prim, mu = exact.scale_to_primitive(w)
        assert mu > 0
        assert all(Fraction(pi) == mu * Fraction(wi) for pi, wi in zip(prim, w))
        assert exact.primitive(prim) == prim
