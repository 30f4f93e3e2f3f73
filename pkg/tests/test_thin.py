"""Thin building tests: gates, roots, walls, intervals, parallelism."""

import pytest

from chamberlab import thin
from chamberlab.coxeter import CoxeterMatrix
from chamberlab.errors import NotReflection, SameWall


def test_delta_and_gate_property(m444):
    M = m444
    R = thin.residue(M, frozenset({0, 1}), ())
    for c in M.ball(4):
        g = thin.proj(M, R, c)
        # gate: distance through the gate is additive for every chamber of R
        for x in thin.residue_chambers(M, R):
            assert M.length(thin.delta(M, c, x)) == \
                M.length(thin.delta(M, c, g)) + M.length(thin.delta(M, g, x))


def test_min_coset_rep(m444):
    M = m444
    assert thin.min_coset_rep(M, (0, 1, 0), frozenset({0})) == (0, 1)
    assert thin.min_coset_rep(M, (0,), frozenset({0, 1})) == ()


def test_residue_reflections_frozen(m444):
    R = thin.residue(m444, frozenset({0, 1}), ())
    names = sorted(m444.elem_to_str(t) for t in thin.residue_reflections(m444, R))
    assert names == ["a", "a.b.a", "b", "b.a.b"]


def test_root_membership_and_opposite(m444):
    M = m444
    alpha = thin.root_from(M, (), 0)
    assert thin.root_contains(M, alpha, ())
    assert not thin.root_contains(M, alpha, (0,))
    assert thin.root_contains(M, alpha.opposite(), (0,))
    for w in M.ball(3):
        assert thin.root_contains(M, alpha, w) != \
            thin.root_contains(M, alpha.opposite(), w)


def test_is_reflection():
    M = CoxeterMatrix(["a", "b", "c"], [[1, 4, 4], [4, 1, 4], [4, 4, 1]])
    assert thin.is_reflection(M, (0,))
    assert thin.is_reflection(M, M.canon((0, 1, 0)))
    assert not thin.is_reflection(M, M.canon((0, 1, 2)))
    # odd-length involutions need not be reflections: the longest element
    # of B3 has odd length and is central, but it is not a reflection
    B3 = CoxeterMatrix(["a", "b", "c"], [[1, 3, 2], [3, 1, 4], [2, 4, 1]])
    w0 = B3.longest_element(frozenset({0, 1, 2}))
    assert B3.length(w0) == 9 and B3.canon(w0 + w0) == ()
    assert not thin.is_reflection(B3, w0)


def test_walls(m444):
    M = m444
    alpha = thin.root_from(M, (), 0)
    P = thin.panel(M, 0, ())
    assert thin.wall_contains_panel(M, alpha, P)
    assert not thin.wall_contains_panel(M, alpha, thin.panel(M, 1, ()))
    R = thin.residue(M, frozenset({0, 1}), ())
    assert thin.wall2_contains_residue(M, alpha, R)
    beta = thin.root_from(M, (2,), 1)
    assert not thin.wall2_contains_residue(M, beta, R)


def test_shared_wall2(m444):
    M = m444
    aa = thin.root_from(M, (), 0)
    ab = thin.root_from(M, (), 1)
    sw = thin.shared_wall2(M, aa, ab, 2)
    assert thin.residue_to_str(M, sw) == "{a,b}@"
    with pytest.raises(SameWall):
        thin.shared_wall2(M, aa, aa.opposite(), 2)


def test_interval_frozen(m444):
    M = m444
    aa = thin.root_from(M, (), 0)
    ab = thin.root_from(M, (), 1)
    iv = sorted(thin.root_to_str(M, g) for g in thin.interval(M, aa, ab, 2))
    assert iv == ["+:a", "+:a.b.a", "+:b", "+:b.a.b"]
    op = sorted(thin.root_to_str(M, g) for g in thin.open_interval(M, aa, ab, 2))
    assert op == ["+:a.b.a", "+:b.a.b"]


def test_minimal_gallery_and_crossed_roots(m444):
    M = m444
    w = M.canon((0, 1, 2))
    gal = thin.minimal_gallery(M, (), w)
    assert gal[0] == () and gal[-1] == w and len(gal) == 4
    roots = thin.crossed_roots(M, gal)
    assert len(roots) == 3
    # each crossed root separates the endpoints
    for alpha in roots:
        assert thin.root_contains(M, alpha, ()) != thin.root_contains(M, alpha, w)


def test_parallel_criteria(m444):
    M = m444
    P = thin.panel(M, 0, ())
    Q = thin.panel(M, 0, M.canon((1, 0, 1)))
    assert thin.parallel_residues(M, P, Q)
    assert thin.parallel_residues_by_projection(M, P, Q)
    Q2 = thin.panel(M, 1, ())
    assert not thin.parallel_residues(M, P, Q2)
    assert not thin.parallel_residues_by_projection(M, P, Q2)


def test_serialization_round_trips(m444):
    M = m444
    for alpha in [thin.root_from(M, (), 0), thin.root_from(M, (0, 1), 2).opposite()]:
        assert thin.root_from_str(M, thin.root_to_str(M, alpha)) == alpha


def test_spherical_rank2_residues(m444):
    seen = thin.spherical_rank2_residues(m444, 2)
    assert thin.residue(m444, frozenset({0, 1}), ()) in seen
    for R in seen:
        assert len(R.typeset) == 2
