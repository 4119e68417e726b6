import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dualball import seminorm as sn
from dualball.errors import (
    DimensionMismatchError,
    OracleUndefinedError,
    SpecFormatError,
)
from conftest import lattice_ball


def dual_box_vertices(weights):
    """Dual-ball vertices of the weighted l1 norm: the box corners."""
    return list(itertools.product(*[(a, -a) for a in weights]))


class TestEval:
    def test_weighted_l1_cross_checked_against_dual_box(self):
        spec = sn.WeightedL1(dim=2, weights=(2, 3))
        x = (1, -1)
        oracle = max(sum(a * b for a, b in zip(x, v)) for v in dual_box_vertices((2, 3)))
        assert oracle == 5
        assert sn.evaluate(spec, x) == oracle

    def test_pullback_kernel_point(self):
        spec = sn.Pullback(
            dim=2, matrix=((1, 0), (0, 0)), inner=sn.WeightedL1(dim=2, weights=(1, 1))
        )
        assert sn.evaluate(spec, (0, 5)) == 0

    def test_trivial_seminorm(self):
        spec = sn.Vertices(dim=2, points=((0, 0),))
        assert sn.evaluate(spec, (7, -4)) == 0

    def test_rational_point_scales(self):
        spec = sn.WeightedL1(dim=2, weights=(2, 3))
        assert sn.evaluate(spec, (Fraction(1, 2), Fraction(-1, 3))) == 2

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            sn.evaluate(sn.WeightedL1(dim=2, weights=(1, 1)), (1, 2, 3))

    def test_table_hit_and_miss(self):
        spec = sn.Table(dim=2, entries={(1, 0): 1, (-1, 0): 1})
        assert sn.evaluate(spec, (1, 0)) == 1
        with pytest.raises(OracleUndefinedError):
            sn.evaluate(spec, (0, 1))
        with pytest.raises(OracleUndefinedError):
            sn.evaluate(spec, (Fraction(1, 2), 0))

    @given(st.integers(-20, 20), st.integers(-20, 20))
    def test_l1_linf_closed_forms(self, x1, x2):
        x = (x1, x2)
        l1 = sn.WeightedL1(dim=2, weights=(2, 3))
        linf = sn.WeightedLinf(dim=2, weights=(2, 3))
        assert sn.evaluate(l1, x) == 2 * abs(x1) + 3 * abs(x2)
        assert sn.evaluate(linf, x) == max(2 * abs(x1), 3 * abs(x2))

    def test_vertices_matches_exhaustive_max(self, rng):
        pts = tuple(tuple(rng.randint(-9, 9) for _ in range(3)) for _ in range(5))
        spec = sn.Vertices(dim=3, points=pts)
        sym = spec.symmetrized()
        for _ in range(50):
            x = tuple(rng.randint(-6, 6) for _ in range(3))
            expected = max(sum(a * b for a, b in zip(x, p)) for p in sym)
            assert sn.evaluate(spec, x) == expected


class TestCombinators:
    @given(st.tuples(*[st.integers(-9, 9)] * 2))
    def test_sum_max_identities(self, x):
        s1 = sn.WeightedL1(dim=2, weights=(1, 2))
        s2 = sn.WeightedLinf(dim=2, weights=(3, 1))
        assert sn.evaluate(sn.Sum(dim=2, terms=(s1, s2)), x) == sn.evaluate(
            s1, x
        ) + sn.evaluate(s2, x)
        assert sn.evaluate(sn.Max(dim=2, terms=(s1, s2)), x) == max(
            sn.evaluate(s1, x), sn.evaluate(s2, x)
        )

    @given(st.tuples(*[st.integers(-9, 9)] * 2))
    def test_pullback_identity(self, x):
        A = ((1, 1), (0, 2), (3, -1))
        inner = sn.WeightedL1(dim=3, weights=(1, 2, 1))
        spec = sn.Pullback(dim=2, matrix=A, inner=inner)
        ax = tuple(sum(r * c for r, c in zip(row, x)) for row in A)
        assert sn.evaluate(spec, x) == sn.evaluate(inner, ax)

    def test_eval_zero_is_zero(self):
        specs = [
            sn.WeightedL1(dim=3, weights=(1, 2, 3)),
            sn.WeightedLinf(dim=3, weights=(2, 1, 1)),
            sn.Vertices(dim=3, points=((1, 2, -1), (0, 1, 1))),
            sn.Pullback(dim=3, matrix=((1, 0, 1),), inner=sn.WeightedL1(dim=1, weights=(4,))),
        ]
        specs.append(sn.Sum(dim=3, terms=tuple(specs[:2])))
        specs.append(sn.Max(dim=3, terms=tuple(specs[:3])))
        for spec in specs:
            assert sn.evaluate(spec, (0, 0, 0)) == 0


class TestValidation:
    def test_linf_axioms_pass(self):
        rep = sn.validate_axioms(sn.WeightedLinf(dim=2, weights=(2, 3)), 1000, seed=5)
        assert rep.ok

    def test_max_of_valid_is_valid(self):
        spec = sn.Max(
            dim=2,
            terms=(
                sn.WeightedL1(dim=2, weights=(1, 1)),
                sn.WeightedLinf(dim=2, weights=(2, 3)),
            ),
        )
        assert sn.validate_axioms(spec, 1000, seed=6).ok

    def test_broken_table_homogeneity_witness(self):
        spec = sn.Table(dim=2, entries={(1, 0): 1, (2, 0): 3})
        rep = sn.validate_axioms(spec, 100, seed=0)
        assert not rep.ok
        (failed,) = [c for c in rep.checks if c.name == "homogeneity"]
        assert not failed.passed
        assert failed.witness[0] == (1, 0)
        assert failed.witness[1] == 2

    def test_integrality_l1(self):
        assert sn.validate_integrality(sn.WeightedL1(dim=2, weights=(1, 1)), 3).ok

    def test_integrality_vertices(self):
        spec = sn.Vertices(dim=2, points=((1, 1), (1, -1)))
        assert sn.validate_integrality(spec, 5).ok

    def test_integrality_needs_total(self):
        with pytest.raises(ValueError):
            sn.validate_integrality(sn.Table(dim=1, entries={(0,): 0}), 1)

    def test_integrality_exhaustive_matches_direct(self):
        spec = sn.Sum(
            dim=2,
            terms=(
                sn.WeightedL1(dim=2, weights=(2, 1)),
                sn.Vertices(dim=2, points=((1, 2),)),
            ),
        )
        for x in lattice_ball(2, 4):
            assert Fraction(sn.evaluate(spec, x)).denominator == 1


class TestConstruction:
    def test_weights_must_be_positive(self):
        with pytest.raises(ValueError):
            sn.WeightedL1(dim=2, weights=(1, 0))

    def test_dim_consistency(self):
        with pytest.raises(DimensionMismatchError):
            sn.Sum(
                dim=2,
                terms=(
                    sn.WeightedL1(dim=2, weights=(1, 1)),
                    sn.WeightedL1(dim=3, weights=(1, 1, 1)),
                ),
            )
        with pytest.raises(DimensionMismatchError):
            sn.Pullback(
                dim=2, matrix=((1, 0),), inner=sn.WeightedL1(dim=2, weights=(1, 1))
            )

    def test_table_symmetry_enforced(self):
        with pytest.raises(ValueError):
            sn.Table(dim=1, entries={(1,): 1, (-1,): 2})

    def test_vertices_auto_symmetrized(self):
        spec = sn.Vertices(dim=2, points=((1, 1), (1, -1)))
        assert set(spec.symmetrized()) == {(1, 1), (1, -1), (-1, -1), (-1, 1)}


class TestFileFormat:
    def test_parse_and_roundtrip(self):
        text = json.dumps(
            {
                "kind": "sum",
                "dim": 2,
                "terms": [
                    {"kind": "weighted_l1", "weights": [2, 3]},
                    {
                        "kind": "pullback",
                        "matrix": [[1, 1], [0, 1]],
                        "inner": {"kind": "weighted_linf", "weights": [1, 4]},
                    },
                ],
            }
        )
        spec = sn.parse_spec(text)
        again = sn.parse_spec(sn.dump_spec(spec))
        assert again == spec
        assert sn.evaluate(spec, (1, -1)) == sn.evaluate(again, (1, -1))

    def test_syntax_error_reports_line_and_column(self):
        with pytest.raises(SpecFormatError) as err:
            sn.parse_spec('{"kind": "weighted_l1",\n "dim": 2,, "weights": [1,1]}')
        assert err.value.line == 2

    def test_missing_root_dim(self):
        with pytest.raises(SpecFormatError):
            sn.parse_spec('{"kind": "weighted_l1", "weights": [1, 1]}')

    def test_rational_table_value_rejected_at_parse(self):
        text = json.dumps(
            {
                "kind": "table",
                "dim": 2,
                "entries": [{"point": [1, 0], "value": 0.5}],
            }
        )
        with pytest.raises(SpecFormatError):
            sn.parse_spec(text)

    def test_rational_weight_rejected(self):
        with pytest.raises(SpecFormatError):
            sn.parse_spec('{"kind": "weighted_l1", "dim": 1, "weights": [1.5]}')

    def test_unknown_kind(self):
        with pytest.raises(SpecFormatError):
            sn.parse_spec('{"kind": "euclidean", "dim": 2}')

    def test_dim_conflict_detected(self):
        text = json.dumps(
            {
                "kind": "max",
                "dim": 2,
                "terms": [{"kind": "weighted_l1", "dim": 3, "weights": [1, 1, 1]}],
            }
        )
        with pytest.raises(SpecFormatError):
            sn.parse_spec(text)


@settings(max_examples=60)
@given(
    st.lists(
        st.tuples(st.integers(-9, 9), st.integers(-9, 9)), min_size=1, max_size=6
    ),
    st.tuples(st.integers(-8, 8), st.integers(-8, 8)),
)
def test_vertices_eval_property(points, x):
    spec = sn.Vertices(dim=2, points=tuple(points))
    expected = max(
        abs(sum(a * b for a, b in zip(x, p))) for p in spec.points
    )
    assert sn.evaluate(spec, x) == expected
