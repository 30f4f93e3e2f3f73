"""The Coxeter complex of (W, S) as a thin building.

Chambers are group elements (canonical words), the W-distance is
delta(x, y) = x^-1 y.  Residues are cosets w<J> stored by type set and
minimal-length coset representative; roots are half-spaces stored as a
pair (reflection, sign) with the convention that the + side contains the
identity chamber.
"""

from dataclasses import dataclass

from .coxeter import CoxeterMatrix, Identity
from .errors import (
    LemmaViolation,
    NoSharedResidue,
    NotSpherical,
    RankError,
    SameWall,
)


@dataclass(frozen=True)
class Residue:
    """The coset rep<J>, with rep the minimal-length representative."""

    typeset: frozenset
    rep: tuple

    def __lt__(self, other):  # frozenset is not orderable; sort residues stably
        return (sorted(self.typeset), self.rep) < (sorted(other.typeset), other.rep)

    @property
    def rank(self):
        return len(self.typeset)


@dataclass(frozen=True, order=True)
class Root:
    """A half-space: reflection word plus sign; + is the side of 1_W."""

    reflection: tuple
    sign: int  # +1 or -1

    def opposite(self):
        return Root(self.reflection, -self.sign)


def delta(M: CoxeterMatrix, x, y):
    """The W-distance x^-1 y."""
    return M.mult(M.inv(x), y)


def min_coset_rep(M: CoxeterMatrix, w, J):
    """Minimal-length representative of the coset w<J> (strip right J-descents)."""
    while True:
        for s in J:
            if M.is_right_descent(w, s):
                w = M.mult(w, (s,))
                break
        else:
            return w


def residue(M: CoxeterMatrix, J, w) -> Residue:
    return Residue(frozenset(J), min_coset_rep(M, w, J))


def panel(M: CoxeterMatrix, s, w) -> Residue:
    return residue(M, {s}, w)


def residue_chambers(M: CoxeterMatrix, R: Residue):
    """All chambers of a spherical residue, as elements of W."""
    return [M.mult(R.rep, u) for u in M.subgroup_elements(R.typeset)]


def residue_contains(M: CoxeterMatrix, R: Residue, w):
    u = delta(M, R.rep, w)
    return set(u) <= R.typeset


def proj(M: CoxeterMatrix, R: Residue, c):
    """The gate of the coset R seen from chamber c."""
    u = min_coset_rep(M, delta(M, c, R.rep), R.typeset)
    return M.mult(c, u)


def root_from(M: CoxeterMatrix, v, s) -> Root:
    """The root v . alpha_s, stored canonically; the chamber v is a member."""
    t = M.mult(M.mult(v, (s,)), M.inv(v))
    sign = 1 if len(M.mult(t, v)) > len(v) else -1
    return Root(t, sign)


def root_contains(M: CoxeterMatrix, alpha: Root, w):
    up = len(M.mult(alpha.reflection, w)) > len(w)
    return up if alpha.sign > 0 else not up


def is_reflection(M: CoxeterMatrix, t):
    """True iff t is an involution conjugate to a generator.

    Decided by length-decreasing conjugation descent: every involution can
    be carried to the minimal-length element of its conjugacy class by
    single-generator conjugations that never increase length, and the
    reflections are exactly the involutions whose minimal form is a
    generator.
    """
    if t == Identity or M.mult(t, t) != Identity:
        return False
    while len(t) > 1:
        for s in range(M.rank):
            u = M.mult(M.mult((s,), t), (s,))
            if len(u) < len(t):
                t = u
                break
        else:
            return False
    return True


def wall_contains_panel(M: CoxeterMatrix, alpha: Root, P: Residue):
    """Panel membership in the wall: r_alpha stabilizes P (swaps its chambers)."""
    if P.rank != 1:
        raise RankError("wall membership is defined for panels")
    (s,) = P.typeset
    chambers = {P.rep, M.mult(P.rep, (s,))}
    return {M.mult(alpha.reflection, c) for c in chambers} == chambers


def wall2_contains_residue(M: CoxeterMatrix, alpha: Root, R: Residue):
    """Rank-2 wall membership: rep^-1 r_alpha rep lies in <J>."""
    if R.rank != 2:
        raise RankError("second wall membership is defined for rank-2 residues")
    if not M.is_spherical(R.typeset):
        raise NotSpherical("second wall membership needs a spherical residue")
    u = M.mult(M.mult(M.inv(R.rep), alpha.reflection), R.rep)
    return set(u) <= R.typeset


def spherical_rank2_residues(M: CoxeterMatrix, radius):
    """All rank-2 spherical residues whose rep lies in ball(radius)."""
    ball = M.ball(radius)
    out = set()
    for s in range(M.rank):
        for t in range(s + 1, M.rank):
            if not M.is_spherical({s, t}):
                continue
            for w in ball:
                R = residue(M, {s, t}, w)
                if len(R.rep) <= radius:
                    out.add(R)
    return sorted(out)


def residue_reflections(M: CoxeterMatrix, R: Residue):
    """The reflections of W stabilizing the spherical residue R."""
    if not M.is_spherical(R.typeset):
        raise NotSpherical("reflection set needs a spherical residue")
    rep_inv = M.inv(R.rep)
    return frozenset(
        M.mult(M.mult(R.rep, r), rep_inv) for r in M.subgroup_reflections(R.typeset)
    )


def shared_wall2(M: CoxeterMatrix, alpha: Root, beta: Root, radius):
    """The unique rank-2 residue in d2(alpha) & d2(beta) with rep in ball(radius).

    Ball-relative: returns None when nothing is found within the ball.
    Finding two distinct residues would falsify the uniqueness lemma for
    2-complete types and raises LemmaViolation.
    """
    if alpha.reflection == beta.reflection:
        raise SameWall("roots on the same wall")
    found = []
    for R in spherical_rank2_residues(M, radius):
        refls = residue_reflections(M, R)
        if alpha.reflection in refls and beta.reflection in refls:
            found.append(R)
    if len(found) > 1:
        raise LemmaViolation(
            "two distinct rank-2 residues share both walls",
            witness={
                "alpha": root_to_str(M, alpha),
                "beta": root_to_str(M, beta),
                "residues": [residue_to_str(M, R) for R in found],
            },
        )
    return found[0] if found else None


def interval(M: CoxeterMatrix, alpha: Root, beta: Root, radius):
    """The closed interval [alpha, beta] for a crossing pair of roots.

    Candidates are the 2m roots whose walls pass through the shared rank-2
    residue R; the two inclusion conditions are checked chamber-by-chamber
    inside R.
    """
    R = shared_wall2(M, alpha, beta, radius)
    if R is None:
        raise NoSharedResidue("no shared rank-2 wall residue within the ball")
    chambers = residue_chambers(M, R)
    both = [c for c in chambers if root_contains(M, alpha, c) and root_contains(M, beta, c)]
    neither = [
        c
        for c in chambers
        if not root_contains(M, alpha, c) and not root_contains(M, beta, c)
    ]
    out = []
    for t in sorted(residue_reflections(M, R)):
        for sign in (1, -1):
            gamma = Root(t, sign)
            if all(root_contains(M, gamma, c) for c in both) and all(
                not root_contains(M, gamma, c) for c in neither
            ):
                out.append(gamma)
    return sorted(out)


def open_interval(M: CoxeterMatrix, alpha: Root, beta: Root, radius):
    return [g for g in interval(M, alpha, beta, radius) if g not in (alpha, beta)]


def minimal_gallery(M: CoxeterMatrix, x, y):
    """The gallery from x to y along the canonical word of delta(x, y)."""
    word = delta(M, x, y)
    chambers = [x]
    for s in word:
        chambers.append(M.mult(chambers[-1], (s,)))
    return chambers


def crossed_roots(M: CoxeterMatrix, gallery):
    """The root crossed at each step (the side left behind), in step order."""
    out = []
    for prev, cur in zip(gallery, gallery[1:]):
        s = delta(M, prev, cur)
        out.append(root_from(M, prev, s[0]))
    return out


def parallel_residues(M: CoxeterMatrix, R: Residue, T: Residue):
    """Parallelism of spherical residues via equality of reflection sets."""
    return residue_reflections(M, R) == residue_reflections(M, T)


def parallel_residues_by_projection(M: CoxeterMatrix, R: Residue, T: Residue):
    """The projection-based definition: proj_R T = R and proj_T R = T."""
    return proj_residue_onto(M, R, T) == T and proj_residue_onto(M, T, R) == R


def proj_residue_onto(M: CoxeterMatrix, R: Residue, T: Residue) -> Residue:
    """The residue proj_T R, computed by enumerating the chambers of R."""
    image = {proj(M, T, c) for c in residue_chambers(M, R)}
    c0 = min(image, key=lambda w: (len(w), w))
    J = set()
    for c in image:
        J.update(delta(M, c0, c))
    out = residue(M, J, c0)
    return out


def root_to_str(M: CoxeterMatrix, alpha: Root):
    return ("+" if alpha.sign > 0 else "-") + ":" + M.elem_to_str(alpha.reflection)


def root_from_str(M: CoxeterMatrix, text):
    sign_char, _, word = text.partition(":")
    return Root(M.elem_from_str(word), 1 if sign_char == "+" else -1)


def residue_to_str(M: CoxeterMatrix, R: Residue):
    names = ",".join(M.generators[s] for s in sorted(R.typeset))
    return "{" + names + "}@" + M.elem_to_str(R.rep)
