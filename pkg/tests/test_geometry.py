from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dualball import geometry as geo
from dualball.errors import DimensionMismatchError, PolarUndefinedError, SpecFormatError
from conftest import brute_support, brute_vertices, conv_member


def hull(pts):
    return geo.convex_hull(pts)


SQUARE = ((1, 1), (1, -1), (-1, 1), (-1, -1))
CROSS = ((1, 0), (-1, 0), (0, 1), (0, -1))


class TestConvexHull:
    def test_square_discards_interior(self):
        P = hull(SQUARE + ((0, 0),))
        assert P.vertices == ((-1, -1), (-1, 1), (1, -1), (1, 1))
        assert {(f.normal, f.offset) for f in P.facets} == {
            ((1, 0), 1),
            ((-1, 0), 1),
            ((0, 1), 1),
            ((0, -1), 1),
        }
        assert P.is_full_dim()

    def test_degenerate_segment(self):
        P = hull([(1, 0), (-1, 0)])
        assert P.vertices == ((-1, 0), (1, 0))
        assert P.affine_dim == 1
        assert len(P.span) == 1

    def test_single_point(self):
        P = hull([(0, 0)])
        assert P.vertices == ((0, 0),)
        assert P.facets == ()
        assert P.affine_dim == 0

    def test_collinear_points_reduce(self):
        P = hull([(0, 0), (1, 1), (2, 2), (3, 3)])
        assert P.vertices == ((0, 0), (3, 3))
        assert P.affine_dim == 1

    def test_coplanar_square_face_in_3d(self):
        pts = [
            (0, 0, 0), (2, 0, 0), (0, 2, 0), (2, 2, 0), (1, 1, 0),
            (0, 0, 2), (2, 0, 2), (0, 2, 2), (2, 2, 2),
        ]
        P = hull(pts)
        assert len(P.vertices) == 8
        assert len(P.facets) == 6
        geo.validate_polytope(P)

    def test_rational_coordinates(self):
        P = hull([(Fraction(1, 2), 0), (0, Fraction(1, 3)), (-1, -1)])
        assert len(P.vertices) == 3
        geo.validate_polytope(P)

    def test_matches_caratheodory_oracle(self, rng):
        for d in (2, 3, 4):
            for _ in range(6):
                pts = [
                    tuple(rng.randint(-5, 5) for _ in range(d))
                    for _ in range(rng.randint(1, 9))
                ]
                P = hull(pts)
                assert P.vertices == brute_vertices(pts)
                geo.validate_polytope(P)

    def test_mixed_dimension_rejected(self):
        with pytest.raises(DimensionMismatchError):
            hull([(1, 2), (1, 2, 3)])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            hull([])


class TestSupport:
    def test_square_unique_argmax(self):
        P = hull(SQUARE)
        res = geo.support(P, (3, 4))
        expected_value, _ = brute_support(P.vertices, (3, 4))
        assert res.value == expected_value == 7
        assert [P.vertices[i] for i in res.argmax_vertices] == [(1, 1)]

    def test_square_edge_argmax(self):
        P = hull(SQUARE)
        res = geo.support(P, (1, 0))
        assert res.value == 1
        assert [P.vertices[i] for i in res.argmax_vertices] == [(1, -1), (1, 1)]

    def test_zero_direction_all_vertices(self):
        P = hull(SQUARE)
        res = geo.support(P, (0, 0))
        assert res.value == 0
        assert res.argmax_vertices == tuple(range(4))

    def test_matches_brute_force_on_random_input(self, rng):
        pts = [tuple(rng.randint(-7, 7) for _ in range(3)) for _ in range(9)]
        P = hull(pts)
        for _ in range(60):
            x = tuple(rng.randint(-5, 5) for _ in range(3))
            value, argmax = brute_support(P.vertices, x)
            res = geo.support(P, x)
            assert (res.value, res.argmax_vertices) == (value, argmax)

    def test_rational_direction(self):
        P = hull(SQUARE)
        res = geo.support(P, (Fraction(1, 2), Fraction(1, 3)))
        assert res.value == Fraction(5, 6)


class TestPolar:
    def test_square_cross_pair(self):
        P = hull(SQUARE)
        Q = geo.polar(P)
        assert Q.vertices == hull(CROSS).vertices
        assert geo.polar(Q).vertices == P.vertices

    def test_involution_and_count_swap(self, rng):
        for d in (2, 3):
            done = 0
            while done < 8:
                pts = [
                    tuple(rng.randint(-4, 4) for _ in range(d))
                    for _ in range(rng.randint(2, 6))
                ]
                pts = pts + [tuple(-c for c in p) for p in pts]
                P = hull(pts)
                if not P.is_full_dim():
                    continue
                done += 1
                Q = geo.polar(P)
                assert len(Q.vertices) == len(P.facets)
                assert len(Q.facets) == len(P.vertices)
                assert geo.equal(geo.polar(Q), P)

    def test_segment_polar_undefined(self):
        with pytest.raises(PolarUndefinedError):
            geo.polar(hull([(1, 0), (-1, 0)]))

    def test_zero_not_interior_rejected(self):
        with pytest.raises(PolarUndefinedError):
            geo.polar(hull([(0, 0), (1, 0), (0, 1), (1, 1)]))


class TestMinkowski:
    def test_identity_element(self):
        P = hull(SQUARE)
        Z = hull([(0, 0)])
        assert geo.equal(geo.minkowski_sum(P, Z), P)

    def test_square_plus_cross_octagon(self):
        P, Q = hull(SQUARE), hull(CROSS)
        S = geo.minkowski_sum(P, Q)
        pairwise = [tuple(a + b for a, b in zip(v, w)) for v in P.vertices for w in Q.vertices]
        assert S.vertices == brute_vertices(pairwise)
        assert len(S.vertices) == 8
        assert set(S.vertices) == {
            (2, 1), (1, 2), (-1, 2), (-2, 1), (-2, -1), (-1, -2), (1, -2), (2, -1),
        }

    def test_segments_make_square(self):
        A = hull([(1, 0), (-1, 0)])
        B = hull([(0, 1), (0, -1)])
        assert geo.minkowski_sum(A, B).vertices == hull(SQUARE).vertices

    def test_support_additivity(self, rng):
        P = hull([tuple(rng.randint(-5, 5) for _ in range(2)) for _ in range(6)])
        Q = hull([tuple(rng.randint(-5, 5) for _ in range(2)) for _ in range(6)])
        S = geo.minkowski_sum(P, Q)
        for _ in range(200):
            x = tuple(rng.randint(-9, 9) for _ in range(2))
            assert (
                geo.support(S, x).value
                == geo.support(P, x).value + geo.support(Q, x).value
            )


class TestExposure:
    def test_square_vertex_witness(self):
        P = hull(SQUARE)
        v = P.vertices.index((1, 1))
        u = geo.exposure_witness(P, v)
        assert u == (1, 1)
        vals = [sum(a * b for a, b in zip(u, w)) for w in P.vertices]
        assert vals[v] == 2
        assert all(vals[j] < vals[v] for j in range(4) if j != v)

    def test_cross_vertex_witness_property(self):
        P = hull(CROSS)
        v = P.vertices.index((1, 0))
        u = geo.exposure_witness(P, v)
        best = sum(a * b for a, b in zip(u, P.vertices[v]))
        for j, w in enumerate(P.vertices):
            if j != v:
                assert sum(a * b for a, b in zip(u, w)) < best

    def test_segment_endpoint(self):
        P = hull([(1, 0), (-1, 0)])
        v = P.vertices.index((1, 0))
        assert geo.exposure_witness(P, v) == (1, 0)

    def test_single_point_errors(self):
        with pytest.raises(ValueError):
            geo.exposure_witness(hull([(0, 0)]), 0)

    def test_exposed_points_everything(self):
        assert geo.exposed_points(hull(SQUARE)) == (0, 1, 2, 3)
        assert geo.exposed_points(hull([(1, 0), (-1, 0)])) == (0, 1)
        assert geo.exposed_points(hull([(2, 3)])) == (0,)

    def test_strict_separation_on_random_hulls(self, rng):
        for d in (2, 3):
            pts = [tuple(rng.randint(-6, 6) for _ in range(d)) for _ in range(7)]
            P = hull(pts)
            if len(P.vertices) < 2:
                continue
            for v in range(len(P.vertices)):
                u = geo.exposure_witness(P, v)
                best = sum(a * b for a, b in zip(u, P.vertices[v]))
                for j, w in enumerate(P.vertices):
                    if j != v:
                        assert sum(a * b for a, b in zip(u, w)) < best


class TestStraszewicz:
    def test_hull_of_exposed_points_recovers(self, rng):
        for d in (2, 3, 4):
            for _ in range(4):
                pts = [
                    tuple(rng.randint(-5, 5) for _ in range(d))
                    for _ in range(rng.randint(1, 8))
                ]
                P = hull(pts)
                exposed = [P.vertices[i] for i in geo.exposed_points(P)]
                assert geo.equal(geo.convex_hull(exposed), P)


class TestEqual:
    def test_interior_point_ignored(self):
        assert geo.equal(hull(SQUARE + ((0, 0),)), hull(SQUARE))

    def test_different_polytopes(self):
        assert not geo.equal(hull(SQUARE), hull(CROSS))

    def test_origin(self):
        assert geo.equal(hull([(0, 0)]), hull([(0, 0)]))


class TestFileFormat:
    def test_roundtrip(self, tmp_path):
        P = hull(SQUARE + ((0, 0),))
        path = tmp_path / "p.json"
        path.write_text(geo.dump_polytope(P))
        Q = geo.load_polytope(path)
        assert geo.equal(P, Q)
        assert P.facets == Q.facets

    def test_roundtrip_rational_and_degenerate(self, tmp_path):
        P = hull([(Fraction(1, 2), 1), (Fraction(-1, 2), -1)])
        path = tmp_path / "seg.json"
        path.write_text(geo.dump_polytope(P))
        Q = geo.load_polytope(path)
        assert geo.equal(P, Q)
        assert Q.span is not None

    def test_unordered_vertices_tolerated(self):
        P = geo.polytope_from_obj(
            {"dim": 2, "vertices": [[1, 1], [-1, -1], [1, -1], [-1, 1]]}
        )
        assert P.vertices == hull(SQUARE).vertices

    def test_inconsistent_facets_rejected(self):
        with pytest.raises(SpecFormatError):
            geo.polytope_from_obj(
                {
                    "dim": 2,
                    "vertices": [[1, 1], [-1, -1], [1, -1], [-1, 1]],
                    "facets": [{"normal": [1, 0], "offset": 2}],
                }
            )

    def test_float_rejected(self):
        with pytest.raises(SpecFormatError):
            geo.polytope_from_obj({"dim": 2, "vertices": [[0.5, 1], [0, 0], [1, 0]]})


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.tuples(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6)),
        min_size=1,
        max_size=8,
    )
)
def test_hull_membership_property(points):
    P = geo.convex_hull(points)
    # every input point satisfies the H-representation, and lies in the span
    for p in points:
        for f in P.facets:
            assert sum(a * b for a, b in zip(f.normal, p)) <= f.offset
    # vertices match the independent oracle
    assert P.vertices == brute_vertices(points)
