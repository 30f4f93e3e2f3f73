"""Triangle machinery tests: reflection and combinatorial triangles,
compatible paths, chamber-intersection theorems."""

import pytest

from chamberlab import thin, triangles
from chamberlab.coxeter import CoxeterMatrix
from chamberlab.errors import HypothesisError, PreconditionFailed


def res_str(B, Q):
    return thin.residue_to_str(B.coxeter, B.to_thin(Q))


def test_generator_triangle_444(m444):
    M = m444
    refl = [(0,), (1,), (2,)]
    assert triangles.is_reflection_triangle(M, refl, 2)
    T = triangles.sigma_triangle_from_reflection_triangle(M, refl, 2)
    keys = sorted(res_str(R.building, R) for R in T)
    assert keys == ["{a,b}@", "{a,c}@", "{b,c}@"]
    assert triangles.is_triangle(T)
    assert triangles.triangle_intersection(T) == ()
    for R in T:
        assert triangles.pairwise_projection_chamber(T, R) == ()


def test_conjugated_triangle_345(m345):
    M = m345
    w = (0, 1)
    refl = [M.canon(w + (s,) + tuple(reversed(w))) for s in range(3)]
    assert refl == [(1,), (0, 1, 0), (0, 1, 2, 1, 0)]
    T = triangles.sigma_triangle_from_reflection_triangle(M, refl, 4)
    c = triangles.triangle_intersection(T)
    assert M.elem_to_str(c) == "a.b"


def test_not_a_reflection_triangle_when_residues_agree(m444):
    # three reflections of one rank-2 residue share their wall
    M = m444
    R = thin.residue(M, frozenset({0, 1}), ())
    refl = sorted(thin.residue_reflections(M, R))[:3]
    assert not triangles.is_reflection_triangle(M, refl, 2)


def test_enumerate_radius2_count(m444):
    tris = triangles.enumerate_reflection_triangles(m444, 2)
    assert len(tris) == 10
    assert tris[0][0] == ((0,), (0, 1, 0), (0, 2, 0))


def test_enumerator_refuses_affine():
    m333 = CoxeterMatrix(["a", "b", "c"], [[1, 3, 3], [3, 1, 3], [3, 3, 1]])
    with pytest.raises(HypothesisError):
        triangles.enumerate_reflection_triangles(m333, 4)


def test_orient_and_combinatorial_check(m444):
    ct = triangles.orient_reflection_triangle(m444, [(0,), (1,), (2,)], 2)
    assert triangles.combinatorial_triangle_check(m444, ct.roots, 2)
    T = triangles.triangle_from_combinatorial(m444, ct, 2)
    assert triangles.is_triangle(T)


def test_panel_graph_and_opposite(m444):
    B = triangles.ThinBuilding(m444)
    P = B.residue(frozenset({0}), ())
    R = B.residue(frozenset({0, 1}), ())
    opp = triangles.opposite_panels_in_residue(R, P)
    assert [res_str(B, Q) for Q in opp] == ["{a}@b.a.b"]
    Q = opp[0]
    assert triangles.opposite_in_residue(R, P, Q)
    assert triangles.panel_graph_adjacent(P, Q) == R
    nbrs = triangles.panel_graph_neighbors(P)
    assert Q in nbrs


def test_compatible_paths(m444):
    B = triangles.ThinBuilding(m444)
    P = B.residue(frozenset({0}), ())
    Q = B.residue(frozenset({0}), m444.canon((1, 0, 1)))
    assert triangles.panels_parallel(P, Q)
    path = triangles.find_compatible_path(P, Q, 10000)
    assert path is not None and len(path) == 2
    assert triangles.is_compatible_path(path)
    # non-parallel endpoints admit no compatible path
    Q2 = B.residue(frozenset({1}), ())
    assert triangles.find_compatible_path(P, Q2, 10000) is None


def test_concat_preconditions(m444):
    B = triangles.ThinBuilding(m444)
    P = B.residue(frozenset({0}), ())
    Q = B.residue(frozenset({0}), m444.canon((1, 0, 1)))
    path = triangles.find_compatible_path(P, Q, 10000)
    with pytest.raises(PreconditionFailed):
        # P is opposite to Q but the junction gate condition fails
        triangles.concat_compatible(path, [P])
    R2 = B.residue(frozenset({0, 2}), Q.anchor)
    Q2 = triangles.opposite_panels_in_residue(R2, Q)[0]
    joined = triangles.concat_compatible(path, [Q2])
    assert joined == path + [Q2]
    assert triangles.is_compatible_path(joined)


def test_triangle_axioms_fail_on_parallel_projections(m444):
    B = triangles.ThinBuilding(m444)
    # three residues around one chamber but with a repeated residue: not a triangle
    R = B.residue(frozenset({0, 1}), ())
    T = (R, R, B.residue(frozenset({1, 2}), ()))
    assert not triangles.is_triangle(T)


def test_pairwise_projection_needs_2_completeness():
    M = CoxeterMatrix(["a", "b", "c"], [[1, 2, 4], [2, 1, 4], [4, 4, 1]])
    B = triangles.ThinBuilding(M)
    T = tuple(B.residue(frozenset(J), ()) for J in ({0, 1}, {1, 2}, {0, 2}))
    with pytest.raises(HypothesisError):
        triangles.pairwise_projection_chamber(T, T[0])
    with pytest.raises(HypothesisError):
        triangles.triangle_intersection(T)
