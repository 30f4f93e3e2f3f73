"""Triangles and compatible paths in buildings.

The operations here are written against a small abstract building
interface so that one code path serves both the thin building (the
Coxeter complex) and the finite thick rank-2 buildings over F2.  The
thin-only pieces (reflection triangles, combinatorial triangles and their
root-sign bookkeeping) live at the bottom and speak the language of the
thin module.
"""

from dataclasses import dataclass, field
from itertools import combinations

from . import thin
from .coxeter import CoxeterMatrix, Identity
from .errors import (
    BallInconclusive,
    BudgetExceeded,
    HypothesisError,
    LemmaViolation,
    NotAdjacent,
    NotReflection,
    NotSpherical,
    PreconditionFailed,
    RankError,
    TheoremViolation,
)


class Building:
    """Minimal chamber-system interface used by the triangle machinery.

    Chambers are opaque hashable values; W-distances are canonical words
    of the attached Coxeter matrix.
    """

    coxeter: CoxeterMatrix

    def delta(self, x, y):
        raise NotImplementedError

    def residue_key(self, J, c):
        """A canonical identifier of the residue R_J(c)."""
        raise NotImplementedError

    def residue_chambers(self, J, c):
        """All chambers of R_J(c); J must be spherical."""
        raise NotImplementedError

    def proj(self, J, anchor, x):
        """The gate of R_J(anchor) seen from x."""
        raise NotImplementedError

    def residue(self, J, c):
        return BRes(self, frozenset(J), self.residue_key(J, c), c)

    def dist(self, x, y):
        return len(self.delta(x, y))


@dataclass(frozen=True)
class BRes:
    """A residue handle over a Building: type set, canonical key, an anchor."""

    building: Building = field(compare=False)
    typeset: frozenset = field(compare=True)
    key: object = field(compare=True)
    anchor: object = field(compare=False)

    @property
    def rank(self):
        return len(self.typeset)

    def chambers(self):
        return self.building.residue_chambers(self.typeset, self.anchor)

    def gate(self, x):
        return self.building.proj(self.typeset, self.anchor, x)

    def contains(self, x):
        return set(self.building.delta(self.anchor, x)) <= self.typeset

    def __le__(self, other):
        return self.typeset <= other.typeset and other.contains(self.anchor)


class ThinBuilding(Building):
    """The Coxeter complex of (W, S) seen through the Building interface."""

    def __init__(self, M: CoxeterMatrix):
        self.coxeter = M

    def delta(self, x, y):
        return thin.delta(self.coxeter, x, y)

    def residue_key(self, J, c):
        return thin.min_coset_rep(self.coxeter, c, J)

    def residue_chambers(self, J, c):
        return thin.residue_chambers(self.coxeter, thin.residue(self.coxeter, J, c))

    def proj(self, J, anchor, x):
        return thin.proj(self.coxeter, thin.residue(self.coxeter, J, anchor), x)

    def from_thin(self, R: thin.Residue) -> BRes:
        return self.residue(R.typeset, R.rep)

    def to_thin(self, R: BRes) -> thin.Residue:
        return thin.Residue(R.typeset, R.key)


def proj_residue(T: BRes, R: BRes) -> BRes:
    """The residue proj_T R, by enumerating the (spherical) chambers of R."""
    b = R.building
    image = {T.gate(c) for c in R.chambers()}
    c0 = next(iter(image))
    J = set()
    for c in image:
        J.update(b.delta(c0, c))
    return b.residue(J, c0)


def panels_parallel(P: BRes, Q: BRes):
    """Panel parallelism via the projection-cardinality criterion."""
    if P.rank != 1 or Q.rank != 1:
        raise RankError("parallelism criterion stated for panels")
    return len({Q.gate(c) for c in P.chambers()}) >= 2


def opposite_in_residue(R: BRes, P: BRes, Q: BRes):
    """P and Q opposite in R: every p in P has an opposite q in Q."""
    M = R.building.coxeter
    r_J = M.longest_element(R.typeset)
    q_chambers = Q.chambers()
    return all(
        any(R.building.delta(p, q) == r_J for q in q_chambers) for p in P.chambers()
    )


def panel_graph_adjacent(P: BRes, Q: BRes):
    """The unique rank-2 residue in which panels P, Q are opposite, or None."""
    if P.rank != 1 or Q.rank != 1:
        raise RankError("panel graph vertices are panels")
    if P == Q:
        return None
    b = P.building
    M = b.coxeter
    (s,) = P.typeset
    (t,) = Q.typeset
    if s != t:
        types = [{s, t}]
    else:
        types = [{s, u} for u in range(M.rank) if u != s]
    found = []
    for J in types:
        if not M.is_spherical(J):
            continue
        R = b.residue(J, P.anchor)
        if Q <= R and opposite_in_residue(R, P, Q):
            found.append(R)
    if len(found) > 1:
        raise LemmaViolation(
            "two rank-2 residues contain the same opposite panel pair",
            witness={"panels": [str(P.key), str(Q.key)]},
        )
    return found[0] if found else None


def panels_of_residue(R: BRes):
    out = {}
    for c in R.chambers():
        for s in R.typeset:
            P = R.building.residue({s}, c)
            out[(P.typeset, P.key)] = P
    return list(out.values())


def opposite_panels_in_residue(R: BRes, P: BRes):
    return [Q for Q in panels_of_residue(R) if Q != P and opposite_in_residue(R, P, Q)]


def panel_graph_neighbors(P: BRes):
    """All panels opposite to P in some rank-2 spherical residue."""
    b = P.building
    M = b.coxeter
    (s,) = P.typeset
    out = []
    for t in range(M.rank):
        if t == s or not M.is_spherical({s, t}):
            continue
        R = b.residue({s, t}, P.anchor)
        out.extend(opposite_panels_in_residue(R, P))
    return out


def is_compatible_path(path):
    """Compatibility: each R(P_{i-1}, P_i) gates the first panel onto P_{i-1}."""
    path = list(path)
    for prev, cur in zip(path, path[1:]):
        R = panel_graph_adjacent(prev, cur)
        if R is None:
            raise NotAdjacent("consecutive panels are not opposite in a rank-2 residue")
        if proj_residue(R, path[0]) != prev:
            return False
    return True


def find_compatible_path(P: BRes, Q: BRes, budget):
    """A compatible path from P to Q of at most ``budget`` steps.

    Parallelism of P and Q is decided first (projection cardinality, an
    exact criterion): non-parallel panels admit no compatible path at any
    budget and yield None.  For parallel panels a breadth-first search in
    the panel graph with the compatibility pruning rule is run; running
    out of budget raises BudgetExceeded rather than answering 'absent'.
    """
    if P == Q:
        return [P]
    if not panels_parallel(P, Q):
        return None
    parent = {P: None}
    frontier = [P]
    for _ in range(budget):
        new = []
        for cur in frontier:
            for nxt in panel_graph_neighbors(cur):
                if nxt in parent:
                    continue
                R = panel_graph_adjacent(cur, nxt)
                if proj_residue(R, P) != cur:
                    continue
                parent[nxt] = cur
                if nxt == Q:
                    path = [nxt]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return list(reversed(path))
                new.append(nxt)
        if not new:
            return None
        frontier = new
    raise BudgetExceeded(f"no compatible path found within {budget} steps")


def concat_compatible(path1, path2):
    """Concatenate two compatible paths across an opposite panel pair.

    The result is guaranteed compatible for 2-complete types; it is
    re-verified and LemmaViolation raised on failure.
    """
    path1, path2 = list(path1), list(path2)
    if not path1 or not path2:
        return path1 + path2
    if not path1[0].building.coxeter.is_2_complete():
        raise PreconditionFailed("concatenation lemma needs a 2-complete type")
    R = panel_graph_adjacent(path1[-1], path2[0])
    if R is None:
        raise PreconditionFailed("end panels are not opposite in a rank-2 residue")
    if proj_residue(R, path1[0]) != path1[-1]:
        raise PreconditionFailed("gate condition at the junction fails")
    if not (is_compatible_path(path1) and is_compatible_path(path2)):
        raise PreconditionFailed("inputs must be compatible paths")
    joined = path1 + path2
    if not is_compatible_path(joined):
        raise LemmaViolation(
            "concatenation of compatible paths is not compatible",
            witness={"length1": len(path1), "length2": len(path2)},
        )
    return joined


# -- reflection and combinatorial triangles (thin building) ---------------


def is_reflection_triangle(M: CoxeterMatrix, reflections, radius):
    """Three reflections with pairwise finite products and no common wall residue.

    Ball-relative: each pair must exhibit a shared rank-2 wall residue
    within ``radius``; a pair without one raises BallInconclusive.  For
    2-complete types the empty-triple-intersection condition reduces to
    'the three shared residues are not all equal' (pairwise shared
    residues are unique).
    """
    rs = sorted(set(reflections))
    if len(rs) != 3:
        return False
    for t in rs:
        if not thin.is_reflection(M, t):
            raise NotReflection(f"{M.elem_to_str(t)} is not a reflection")
    if not M.is_2_complete():
        raise PreconditionFailed("reflection triangle test needs a 2-complete type")
    shared = []
    for t1, t2 in combinations(rs, 2):
        R = thin.shared_wall2(M, thin.Root(t1, 1), thin.Root(t2, 1), radius)
        if R is None:
            raise BallInconclusive(
                f"no shared wall residue for {M.elem_to_str(t1)}, {M.elem_to_str(t2)} "
                f"within radius {radius}"
            )
        shared.append(R)
    return not (shared[0] == shared[1] == shared[2])


@dataclass(frozen=True)
class CombinatorialTriangle:
    roots: frozenset  # three thin.Root values


def orient_reflection_triangle(M: CoxeterMatrix, reflections, radius):
    """Choose the root sign for each reflection so the opposite shared
    residue lies inside the chosen side (exact chamber-by-chamber test)."""
    rs = sorted(set(reflections))
    if not is_reflection_triangle(M, rs, radius):
        raise PreconditionFailed("not a reflection triangle at this radius")
    roots = []
    for k, t in enumerate(rs):
        other = [r for r in rs if r != t]
        sigma = thin.shared_wall2(M, thin.Root(other[0], 1), thin.Root(other[1], 1), radius)
        chambers = thin.residue_chambers(M, sigma)
        inside_plus = [thin.root_contains(M, thin.Root(t, 1), c) for c in chambers]
        if all(inside_plus):
            roots.append(thin.Root(t, 1))
        elif not any(inside_plus):
            roots.append(thin.Root(t, -1))
        else:
            raise LemmaViolation(
                "shared residue meets both sides of the third wall",
                witness={"reflection": M.elem_to_str(t), "residue": thin.residue_to_str(M, sigma)},
            )
    return CombinatorialTriangle(frozenset(roots))


def combinatorial_triangle_check(M: CoxeterMatrix, roots, radius):
    """(CT1) the reflections form a reflection triangle; (CT2) each shared
    residue is wholly inside the third root."""
    roots = sorted(set(roots))
    if len(roots) != 3:
        return False
    rs = {r.reflection for r in roots}
    if len(rs) != 3:
        return False
    if not is_reflection_triangle(M, rs, radius):
        return False
    for alpha in roots:
        beta, gamma = (r for r in roots if r != alpha)
        sigma = thin.shared_wall2(M, beta, gamma, radius)
        if not all(
            thin.root_contains(M, alpha, c) for c in thin.residue_chambers(M, sigma)
        ):
            return False
    return True


def triangle_from_combinatorial(M: CoxeterMatrix, ct: CombinatorialTriangle, radius):
    """The three pairwise shared wall residues of a combinatorial triangle,
    with the panel/non-parallel conclusions re-verified."""
    roots = sorted(ct.roots)
    if not combinatorial_triangle_check(M, roots, radius):
        raise PreconditionFailed("not a combinatorial triangle at this radius")
    b = ThinBuilding(M)
    residues = []
    for alpha in roots:
        beta, gamma = (r for r in roots if r != alpha)
        residues.append(b.from_thin(thin.shared_wall2(M, beta, gamma, radius)))
    for R_i, R_j in combinations(residues, 2):
        pij = proj_residue(R_i, R_j)
        if pij.rank != 1:
            raise LemmaViolation(
                "pairwise projection of triangle residues is not a panel",
                witness={"residues": [str(R_i.key) for R_i in residues]},
            )
        alpha_k = next(
            a
            for a in roots
            if thin.shared_wall2(
                M, *(r for r in roots if r != a), radius
            ) not in (b.to_thin(R_i), b.to_thin(R_j))
        )
        if not thin.wall_contains_panel(M, alpha_k, b.to_thin(pij)):
            raise LemmaViolation(
                "projection panel not in the wall of the third root",
                witness={"panel": str(pij.key), "root": thin.root_to_str(M, alpha_k)},
            )
    T = frozenset(residues)
    if not is_triangle(T):
        raise LemmaViolation("combinatorial triangle did not yield a triangle")
    return T


def is_triangle(T):
    """(T1) pairwise projections are panels; (T2) the two projection panels
    inside each member are not parallel."""
    residues = sorted(T, key=lambda R: (sorted(R.typeset), str(R.key)))
    if len(residues) != 3:
        return False
    for R in residues:
        if R.rank != 2:
            raise RankError("triangle members must have rank 2")
        if not R.building.coxeter.is_spherical(R.typeset):
            raise NotSpherical("triangle members must be spherical")
    for R, Q in combinations(residues, 2):
        if proj_residue(R, Q).rank != 1 or proj_residue(Q, R).rank != 1:
            return False
    for R in residues:
        P, Q = (x for x in residues if x != R)
        if panels_parallel(proj_residue(R, P), proj_residue(R, Q)):
            return False
    return True


def _witness(T):
    out = []
    for R in sorted(T, key=lambda R: (sorted(R.typeset), str(R.key))):
        out.append(
            {
                "typeset": sorted(R.typeset),
                "key": str(R.key),
                "chambers": [str(c) for c in R.chambers()],
            }
        )
    return out


def pairwise_projection_chamber(T, R: BRes):
    """The unique chamber of proj_R P & proj_R Q for {P, Q} = T minus {R}."""
    if R not in T:
        raise PreconditionFailed("R must be a member of the triangle")
    if not R.building.coxeter.is_2_complete():
        raise HypothesisError("theorem requires a 2-complete type")
    P, Q = (x for x in T if x != R)
    inter = set(proj_residue(R, P).chambers()) & set(proj_residue(R, Q).chambers())
    if len(inter) != 1:
        raise TheoremViolation(
            "projection panels do not meet in a unique chamber",
            witness={"triangle": _witness(T), "intersection": sorted(map(str, inter))},
        )
    return next(iter(inter))


def triangle_intersection(T):
    """The unique chamber of R1 & R2 & R3 (2-complete, A2~-free types)."""
    M = next(iter(T)).building.coxeter
    if not M.is_2_complete() or not M.is_a2tilde_free():
        raise HypothesisError("theorem requires a 2-complete and A2~-free type")
    if not is_triangle(T):
        raise PreconditionFailed("not a triangle")
    smallest = min(T, key=lambda R: len(R.chambers()))
    others = [R for R in T if R != smallest]
    inter = [
        c for c in smallest.chambers() if all(R.contains(c) for R in others)
    ]
    if len(inter) != 1:
        raise TheoremViolation(
            "triple intersection of a triangle is not a unique chamber",
            witness={"triangle": _witness(T), "intersection": sorted(map(str, inter))},
        )
    return inter[0]


def sigma_triangle_from_reflection_triangle(M: CoxeterMatrix, reflections, radius):
    """Thin building: a reflection triangle yields a triangle of its shared
    residues (every triangle of the thin building is a Sigma-triangle)."""
    ct = orient_reflection_triangle(M, reflections, radius)
    return triangle_from_combinatorial(M, ct, radius)


def enumerate_reflection_triangles(M: CoxeterMatrix, radius):
    """All reflection triangles whose three shared residues have reps in
    ball(radius), as sorted triples of reflections.

    Works through the rank-2 spherical residues of the ball: each residue
    yields the pairs of its stabilizing reflections; a triple of
    reflections is a reflection triangle when each pair shares a residue
    and the three shared residues are not all equal.  Raises
    HypothesisError unless the type is 2-complete and A2~-free, and
    LemmaViolation if some pair shares two residues.
    """
    if not M.is_2_complete() or not M.is_a2tilde_free():
        raise HypothesisError(
            "triangle enumeration requires a 2-complete and A2~-free type"
        )
    pair_residue = {}
    for R in thin.spherical_rank2_residues(M, radius):
        refls = sorted(thin.residue_reflections(M, R))
        for t1, t2 in combinations(refls, 2):
            key = (t1, t2)
            prev = pair_residue.get(key)
            if prev is not None and prev != R:
                raise LemmaViolation(
                    "two rank-2 residues share a pair of reflections",
                    witness={
                        "reflections": [M.elem_to_str(t) for t in key],
                        "residues": [
                            thin.residue_to_str(M, prev),
                            thin.residue_to_str(M, R),
                        ],
                    },
                )
            pair_residue[key] = R
    adjacency = {}
    for (t1, t2), R in pair_residue.items():
        adjacency.setdefault(t1, {})[t2] = R
        adjacency.setdefault(t2, {})[t1] = R
    out = []
    for t1 in sorted(adjacency):
        for t2 in sorted(adjacency[t1]):
            if t2 <= t1:
                continue
            for t3 in sorted(adjacency[t2]):
                if t3 <= t2 or t3 not in adjacency[t1]:
                    continue
                shared = [adjacency[t1][t2], adjacency[t2][t3], adjacency[t1][t3]]
                if not (shared[0] == shared[1] == shared[2]):
                    out.append(((t1, t2, t3), tuple(shared)))
    return out


def triangle_reflections(T):
    """Recover the stabilizing reflections of the pairwise projection panels
    of a thin triangle (round-trip of the construction)."""
    out = set()
    residues = list(T)
    M = residues[0].building.coxeter
    b = residues[0].building
    for R, Q in combinations(residues, 2):
        pij = proj_residue(R, Q)
        refls = thin.residue_reflections(M, b.to_thin(pij))
        (t,) = refls
        out.add(t)
    return out
