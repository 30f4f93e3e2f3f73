"""Seeded property checks for the projection and triangle lemmas.

Each property takes a Coxeter matrix, a ball radius and a seeded RNG,
draws instances from the ball (exhaustively when the instance space is
small, by sampling otherwise) and returns a dict with the number of
instances checked and a list of violation witnesses.  The registry keeps
the properties in a fixed order so a suite run is deterministic given
(matrix, radius, seed).
"""

import random
import zlib
from itertools import combinations, permutations

from . import thin, triangles
from .coxeter import CoxeterMatrix, Identity
from .errors import LemmaViolation, NoSharedResidue, SameWall
from .triangles import ThinBuilding

SAMPLE_CAP = 300


def _sample(items, rng, cap=SAMPLE_CAP):
    items = list(items)
    if len(items) <= cap:
        return items
    return rng.sample(items, cap)


def _spherical_residues(M, radius, ranks=(1, 2)):
    out = set()
    for w in M.ball(radius):
        for r in ranks:
            for J in combinations(range(M.rank), r):
                if M.is_spherical(set(J)):
                    out.add(thin.residue(M, set(J), w))
    return sorted(out)


def _random_compatible_path(M, rng, length, start=None):
    """Grow a compatible path by random admissible panel-graph steps."""
    b = ThinBuilding(M)
    if start is None:
        s = rng.randrange(M.rank)
        w = rng.choice(M.ball(2))
        start = b.residue({s}, w)
    path = [start]
    for _ in range(length):
        options = []
        for nxt in triangles.panel_graph_neighbors(path[-1]):
            if nxt in path:
                continue
            R = triangles.panel_graph_adjacent(path[-1], nxt)
            if triangles.proj_residue(R, path[0]) == path[-1]:
                options.append(nxt)
        if not options:
            break
        path.append(rng.choice(options))
    return path


def length_additive_extension(M: CoxeterMatrix, radius, rng):
    """Appending a letter from outside a dihedral block adds to the length.

    For w with ws, wt both longer, w' in <s,t> of length at least 2 and
    r outside {s, t}: the length of w w' r is l(w) + l(w') + 1.
    """
    instances = 0
    violations = []
    ball = M.ball(radius)
    cases = []
    for w in ball:
        for s in range(M.rank):
            for t in range(M.rank):
                if s == t:
                    continue
                if M.is_right_descent(w, s) or M.is_right_descent(w, t):
                    continue
                cases.append((w, s, t))
    for w, s, t in _sample(cases, rng):
        for wp in M.subgroup_elements({s, t}):
            if len(wp) < 2:
                continue
            for r in range(M.rank):
                if r in (s, t):
                    continue
                instances += 1
                got = len(M.mult(M.mult(w, wp), (r,)))
                if got != len(w) + len(wp) + 1:
                    violations.append(
                        {"w": M.elem_to_str(w), "w2": M.elem_to_str(wp), "r": r}
                    )
    return {"instances": instances, "violations": violations}


def nested_projection_agreement(M: CoxeterMatrix, radius, rng):
    """If proj_R c lands in a sub-residue Q of R, it equals proj_Q c."""
    instances = 0
    violations = []
    ball = M.ball(radius)
    residues = _spherical_residues(M, radius, ranks=(2,))
    for R in _sample(residues, rng, 60):
        for c in _sample(ball, rng, 30):
            g = thin.proj(M, R, c)
            for r1 in range(1, R.rank):
                for J in combinations(sorted(R.typeset), r1):
                    Q = thin.residue(M, set(J), g)
                    instances += 1
                    if thin.proj(M, Q, c) != g:
                        violations.append(
                            {
                                "R": thin.residue_to_str(M, R),
                                "Q": thin.residue_to_str(M, Q),
                                "c": M.elem_to_str(c),
                            }
                        )
    return {"instances": instances, "violations": violations}


def projection_round_trip(M: CoxeterMatrix, radius, rng):
    """For c in proj_R T the double projection returns c."""
    instances = 0
    violations = []
    residues = _spherical_residues(M, radius)
    for R, T in _sample(list(combinations(_sample(residues, rng, 60), 2)), rng):
        image = thin.proj_residue_onto(M, T, R)
        for c in thin.residue_chambers(M, image):
            instances += 1
            if thin.proj(M, R, thin.proj(M, T, c)) != c:
                violations.append(
                    {
                        "R": thin.residue_to_str(M, R),
                        "T": thin.residue_to_str(M, T),
                        "c": M.elem_to_str(c),
                    }
                )
    return {"instances": instances, "violations": violations}


def parallel_criteria_agree(M: CoxeterMatrix, radius, rng):
    """Projection-parallelism coincides with equality of reflection sets."""
    instances = 0
    violations = []
    residues = _spherical_residues(M, radius)
    pairs = [
        (R, T)
        for R, T in combinations(_sample(residues, rng, 70), 2)
        if R.rank == T.rank
    ]
    for R, T in _sample(pairs, rng):
        instances += 1
        if thin.parallel_residues(M, R, T) != thin.parallel_residues_by_projection(
            M, R, T
        ):
            violations.append(
                {"R": thin.residue_to_str(M, R), "T": thin.residue_to_str(M, T)}
            )
    return {"instances": instances, "violations": violations}


def rank2_residues_not_parallel(M: CoxeterMatrix, radius, rng):
    """Distinct spherical rank-2 residues are never parallel, and two
    walls share at most one rank-2 residue."""
    instances = 0
    violations = []
    residues = [R for R in _spherical_residues(M, radius, ranks=(2,))]
    for R, T in _sample(list(combinations(_sample(residues, rng, 60), 2)), rng):
        instances += 1
        if thin.parallel_residues(M, R, T):
            violations.append(
                {"R": thin.residue_to_str(M, R), "T": thin.residue_to_str(M, T)}
            )
    reflections = sorted(
        {t for R in _sample(residues, rng, 40) for t in thin.residue_reflections(M, R)}
    )
    for t1, t2 in _sample(list(combinations(reflections, 2)), rng):
        instances += 1
        try:
            thin.shared_wall2(M, thin.Root(t1, 1), thin.Root(t2, 1), radius)
        except LemmaViolation as e:
            violations.append(e.witness)
        except SameWall:
            pass
    return {"instances": instances, "violations": violations}


def path_projection_stability(M: CoxeterMatrix, radius, rng):
    """Along a compatible path all rank-2 residues project onto the last
    one the same way as the first does."""
    instances = 0
    violations = []
    for _ in range(12):
        path = _random_compatible_path(M, rng, rng.randrange(2, 5))
        if len(path) < 3:
            continue
        last = triangles.panel_graph_adjacent(path[-2], path[-1])
        expected = triangles.proj_residue(
            last, triangles.panel_graph_adjacent(path[0], path[1])
        )
        for i in range(len(path) - 2):
            R = triangles.panel_graph_adjacent(path[i], path[i + 1])
            instances += 1
            if triangles.proj_residue(last, R) != expected:
                violations.append({"path_length": len(path) - 1, "i": i})
    return {"instances": instances, "violations": violations}


def path_projection_growth(M: CoxeterMatrix, radius, rng):
    """Once a chamber projects deeper into the second panel of a
    compatible path, its distance keeps growing to the end of the path."""
    instances = 0
    violations = []
    ball = M.ball(radius)
    for _ in range(12):
        path = _random_compatible_path(M, rng, rng.randrange(1, 5))
        if len(path) < 2:
            continue
        R01 = triangles.panel_graph_adjacent(path[0], path[1])
        Rlast = triangles.panel_graph_adjacent(path[-2], path[-1])
        for c in _sample(ball, rng, 25):
            d0 = len(thin.delta(M, c, path[0].gate(c)))
            d1 = len(thin.delta(M, c, path[1].gate(c)))
            gR = R01.gate(c)
            if not (d0 < d1 and len(thin.delta(M, gR, path[1].gate(c))) >= 2):
                continue
            instances += 1
            dm = len(thin.delta(M, c, path[-1].gate(c)))
            depth = len(thin.delta(M, Rlast.gate(c), path[-1].gate(c)))
            if not (d0 < dm and depth >= 2):
                violations.append(
                    {"c": M.elem_to_str(c), "path_length": len(path) - 1}
                )
    return {"instances": instances, "violations": violations}


def path_concatenation(M: CoxeterMatrix, radius, rng):
    """Concatenating compatible paths across an opposite junction with
    the gate condition yields a compatible path."""
    instances = 0
    violations = []
    for _ in range(10):
        path1 = _random_compatible_path(M, rng, rng.randrange(1, 4))
        if len(path1) < 2:
            continue
        starts = []
        for nxt in triangles.panel_graph_neighbors(path1[-1]):
            if nxt in path1:
                continue
            R = triangles.panel_graph_adjacent(path1[-1], nxt)
            if triangles.proj_residue(R, path1[0]) == path1[-1]:
                starts.append(nxt)
        if not starts:
            continue
        path2 = _random_compatible_path(
            M, rng, rng.randrange(0, 3), start=rng.choice(starts)
        )
        if set(path1) & set(path2):
            # the joined sequence would repeat a panel, so it is not a
            # path of the panel graph and the lemma does not apply
            continue
        instances += 1
        try:
            triangles.concat_compatible(path1, path2)
        except LemmaViolation as e:
            violations.append(e.witness)
    return {"instances": instances, "violations": violations}


def exit_letter_lengthens(M: CoxeterMatrix, radius, rng):
    """From a chamber of the start panel of a compatible path, a letter
    outside the type of the final rank-2 residue lengthens the distance
    to any chamber off the second-to-last panel."""
    instances = 0
    violations = []
    for _ in range(10):
        path = _random_compatible_path(M, rng, rng.randrange(1, 5))
        if len(path) < 2:
            continue
        R = triangles.panel_graph_adjacent(path[-2], path[-1])
        last_panel = set(path[-2].chambers())
        outside = [d for d in R.chambers() if d not in last_panel]
        for c in _sample(path[0].chambers(), rng, 4):
            for d in _sample(outside, rng, 4):
                w = thin.delta(M, c, d)
                for r in range(M.rank):
                    if r in R.typeset:
                        continue
                    instances += 1
                    if len(M.mult(w, (r,))) != len(w) + 1:
                        violations.append(
                            {
                                "c": M.elem_to_str(c),
                                "d": M.elem_to_str(d),
                                "r": M.generators[r],
                            }
                        )
    return {"instances": instances, "violations": violations}


def triangle_corner_unique(M: CoxeterMatrix, radius, rng):
    """In a combinatorial triangle, opposite-root intervals are empty and
    each shared residue meets the two roots in a single chamber."""
    instances = 0
    violations = []
    tris = triangles.enumerate_reflection_triangles(M, min(radius, 4))
    for rs, shared in _sample(tris, rng, 20):
        ct = triangles.orient_reflection_triangle(M, list(rs), radius)
        roots = sorted(ct.roots)
        for alpha, beta in permutations(roots, 2):
            instances += 1
            inner = thin.open_interval(M, alpha.opposite(), beta, radius)
            if inner:
                violations.append(
                    {
                        "alpha": thin.root_to_str(M, alpha),
                        "beta": thin.root_to_str(M, beta),
                        "interval": [thin.root_to_str(M, g) for g in inner],
                    }
                )
        for alpha, beta in combinations(roots, 2):
            R = thin.shared_wall2(M, alpha, beta, radius)
            inside = [
                c
                for c in thin.residue_chambers(M, R)
                if thin.root_contains(M, alpha, c) and thin.root_contains(M, beta, c)
            ]
            instances += 1
            if len(inside) != 1:
                violations.append(
                    {
                        "alpha": thin.root_to_str(M, alpha),
                        "beta": thin.root_to_str(M, beta),
                        "count": len(inside),
                    }
                )
    return {"instances": instances, "violations": violations}


def parallel_panels_force_label3(M: CoxeterMatrix, radius, rng):
    """If the r-panel at the identity is parallel to the u-panel at st,
    then r = t, u = s and m_st = 3."""
    instances = 0
    violations = []
    gens = range(M.rank)
    for r in gens:
        for s in gens:
            for t in gens:
                for u in gens:
                    if r == s or s == t or t == u:
                        continue
                    instances += 1
                    refl = M.mult(M.mult((s, t), (u,)), (t, s))
                    if refl != (r,):
                        continue
                    if not (r == t and u == s and M.m[s][t] == 3):
                        violations.append(
                            {
                                "r": M.generators[r],
                                "s": M.generators[s],
                                "t": M.generators[t],
                                "u": M.generators[u],
                            }
                        )
    return {"instances": instances, "violations": violations}


REGISTRY = {
    "length_additive_extension": length_additive_extension,
    "nested_projection_agreement": nested_projection_agreement,
    "projection_round_trip": projection_round_trip,
    "parallel_criteria_agree": parallel_criteria_agree,
    "rank2_residues_not_parallel": rank2_residues_not_parallel,
    "path_projection_stability": path_projection_stability,
    "path_projection_growth": path_projection_growth,
    "path_concatenation": path_concatenation,
    "exit_letter_lengthens": exit_letter_lengthens,
    "triangle_corner_unique": triangle_corner_unique,
    "parallel_panels_force_label3": parallel_panels_force_label3,
}


def run_suite(M: CoxeterMatrix, radius, seed=0, names=None):
    results = {}
    for name, fn in REGISTRY.items():
        if names is not None and name not in names:
            continue
        rng = random.Random(seed * 0x9E3779B1 + zlib.crc32(name.encode()))
        results[name] = fn(M, radius, rng)
    return results
