"""Exact arithmetic in finitely generated Coxeter groups.

Group elements are stored as canonical reduced words: the ShortLex-least
reduced word in the braid-move class (Tits' solution of the word problem).
Two elements are equal in the group iff their canonical words are equal as
tuples, so tuples of generator indices double as value-type elements.

The generator order used by ShortLex is the order of the ``generators``
list of the defining matrix.  The entry 0 in the Coxeter matrix encodes an
infinite order m_st (JSON has no infinity).
"""

import json
import os
from itertools import combinations

from .errors import (
    NotSpherical,
    ParseError,
    ResourceLimit,
    ValidationError,
)

INFINITY = 0

DEFAULT_MAX_ELEMENTS = 500_000

Identity: tuple = ()


def max_elements_cap(explicit=None):
    """Resolve the ball element cap: explicit arg, else env var, else default."""
    if explicit is not None:
        return explicit
    env = os.environ.get("CHAMBERLAB_MAX_ELEMENTS")
    if env is not None:
        return int(env)
    return DEFAULT_MAX_ELEMENTS


class CoxeterMatrix:
    """A Coxeter system (W, S): generator names and the order matrix m_st."""

    def __init__(self, generators, m):
        generators = list(generators)
        rank = len(generators)
        if rank < 1:
            raise ValidationError("at least one generator required")
        if len(set(generators)) != rank:
            raise ValidationError("duplicate generator names")
        for name in generators:
            if not isinstance(name, str) or not name or "." in name:
                raise ValidationError(f"bad generator name {name!r}")
        if len(m) != rank or any(len(row) != rank for row in m):
            raise ValidationError("m must be a rank x rank matrix")
        for i in range(rank):
            if m[i][i] != 1:
                raise ValidationError("diagonal entries of m must be 1")
            for j in range(rank):
                mij = m[i][j]
                if not isinstance(mij, int) or mij < 0:
                    raise ValidationError(f"bad order m[{i}][{j}] = {mij!r}")
                if m[i][j] != m[j][i]:
                    raise ValidationError("m must be symmetric")
                if i != j and mij == 1:
                    raise ValidationError("off-diagonal entries must be >= 2 (or 0 = infinity)")
        self.generators = generators
        self.rank = rank
        self.m = tuple(tuple(row) for row in m)
        self._canon = {Identity: Identity}
        self._subgroup = {}
        self._spherical = {}

    def __repr__(self):
        return f"CoxeterMatrix({self.generators}, {list(map(list, self.m))})"

    def order(self, s, t):
        """The order m_st of the product st (0 encodes infinity)."""
        return self.m[s][t]

    # -- the word problem -------------------------------------------------

    def _braid_moves(self, word):
        """All words obtained from ``word`` by a single braid move."""
        out = []
        n = len(word)
        for i in range(n - 1):
            s, t = word[i], word[i + 1]
            if s == t:
                continue
            mst = self.m[s][t]
            if mst == INFINITY or i + mst > n:
                continue
            ok = True
            for k in range(mst):
                if word[i + k] != (s if k % 2 == 0 else t):
                    ok = False
                    break
            if ok:
                moved = word[:i] + tuple(t if k % 2 == 0 else s for k in range(mst)) + word[i + mst :]
                out.append(moved)
        return out

    def _braid_class(self, word):
        """Braid-move closure of ``word``.

        Stops early and returns (None, shorter_word) as soon as some member
        has an adjacent repeated letter (then ``word`` is not reduced);
        returns (closure, None) when the full closure is square-free.
        """
        seen = {word}
        frontier = [word]
        while frontier:
            new = []
            for w in frontier:
                for u in self._braid_moves(w):
                    if u in seen:
                        continue
                    for i in range(len(u) - 1):
                        if u[i] == u[i + 1]:
                            return None, u[:i] + u[i + 2 :]
                    seen.add(u)
                    new.append(u)
            frontier = new
        return seen, None

    def canon(self, word):
        """Canonical (ShortLex-least reduced) form of an arbitrary word."""
        word = tuple(word)
        hit = self._canon.get(word)
        if hit is not None:
            return hit
        w = word
        for i in range(len(w) - 1):
            if w[i] == w[i + 1]:
                return self._canon.setdefault(word, self.canon(w[:i] + w[i + 2 :]))
        cls, shorter = self._braid_class(w)
        if shorter is not None:
            result = self.canon(shorter)
        else:
            result = min(cls)
            for u in cls:
                self._canon[u] = result
        self._canon[word] = result
        return result

    def mult(self, u, v):
        """Canonical form of the product u * v."""
        return self.canon(tuple(u) + tuple(v))

    def inv(self, w):
        """Canonical form of the inverse; generators are involutions."""
        return self.canon(tuple(reversed(w)))

    @staticmethod
    def length(w):
        return len(w)

    def is_right_descent(self, w, s):
        """True iff l(ws) < l(w)."""
        return len(self.mult(w, (s,))) < len(w)

    # -- enumeration ------------------------------------------------------

    def ball(self, radius, max_elements=None):
        """All elements of length <= radius, in ShortLex order."""
        cap = max_elements_cap(max_elements)
        seen = {Identity}
        frontier = [Identity]
        for _ in range(radius):
            new = []
            for w in frontier:
                for s in range(self.rank):
                    u = self.mult(w, (s,))
                    if len(u) == len(w) + 1 and u not in seen:
                        seen.add(u)
                        new.append(u)
                        if len(seen) > cap:
                            raise ResourceLimit(f"ball exceeded {cap} elements")
            frontier = new
        return sorted(seen, key=lambda w: (len(w), w))

    def subgroup_elements(self, J, max_elements=None):
        """All elements of the standard subgroup <J> (J must be spherical)."""
        J = frozenset(J)
        hit = self._subgroup.get(J)
        if hit is not None:
            return hit
        if not self.is_spherical(J):
            raise NotSpherical(f"<{sorted(J)}> is infinite")
        cap = max_elements_cap(max_elements)
        seen = {Identity}
        frontier = [Identity]
        while frontier:
            new = []
            for w in frontier:
                for s in J:
                    u = self.mult(w, (s,))
                    if len(u) == len(w) + 1 and u not in seen:
                        seen.add(u)
                        new.append(u)
                        if len(seen) > cap:
                            raise ResourceLimit(f"subgroup exceeded {cap} elements")
            frontier = new
        out = sorted(seen, key=lambda w: (len(w), w))
        self._subgroup[J] = out
        return out

    def subgroup_reflections(self, J):
        """The reflections of the (finite) standard subgroup <J>."""
        out = set()
        for u in self.subgroup_elements(J):
            for s in J:
                out.add(self.mult(self.mult(u, (s,)), self.inv(u)))
        return sorted(out, key=lambda w: (len(w), w))

    # -- diagram predicates -----------------------------------------------

    def is_2_complete(self):
        """True iff 2 < m_st < infinity for all s != t."""
        for s in range(self.rank):
            for t in range(s + 1, self.rank):
                if self.m[s][t] == INFINITY or self.m[s][t] < 3:
                    return False
        return True

    def is_a2tilde_free(self):
        """True iff no triple of generators carries pairwise labels (3, 3, 3)."""
        for r, s, t in combinations(range(self.rank), 3):
            if self.m[r][s] == self.m[s][t] == self.m[r][t] == 3:
                return False
        return True

    def is_spherical(self, J):
        """Decide |<J>| < infinity by classifying the induced diagram.

        Each connected component (edges = pairs with m_st > 2) must match a
        finite type: A, B/C, D, E6-E8, F4, H3, H4 or I2(m).
        """
        J = frozenset(J)
        hit = self._spherical.get(J)
        if hit is not None:
            return hit
        components = self._components(J)
        result = all(self._component_is_finite(c) for c in components)
        self._spherical[J] = result
        return result

    def _components(self, J):
        left = set(J)
        comps = []
        while left:
            root = left.pop()
            comp = {root}
            stack = [root]
            while stack:
                v = stack.pop()
                for u in list(left):
                    if self.m[v][u] != 2:
                        left.discard(u)
                        comp.add(u)
                        stack.append(u)
            comps.append(comp)
        return comps

    def _component_is_finite(self, comp):
        n = len(comp)
        if n == 1:
            return True
        edges = []
        for s, t in combinations(sorted(comp), 2):
            mst = self.m[s][t]
            if mst == INFINITY:
                return False
            if mst > 2:
                edges.append((s, t, mst))
        if n == 2:
            return True
        if len(edges) != n - 1:
            return False  # a cycle; every finite diagram is a tree
        deg = {v: 0 for v in comp}
        for s, t, _ in edges:
            deg[s] += 1
            deg[t] += 1
        if max(deg.values()) > 3:
            return False
        branch = [v for v in comp if deg[v] == 3]
        high = [(s, t, mst) for s, t, mst in edges if mst > 3]
        if len(branch) > 1 or len(high) > 1:
            return False
        if branch:
            if high:
                return False  # D/E types have unlabeled edges only
            arms = sorted(self._arm_lengths(branch[0], edges))
            a, b, c = arms
            if a == b == 1:
                return True  # D_n
            return (a, b) == (1, 2) and c <= 4  # E6, E7, E8
        # a path
        if not high:
            return True  # A_n
        (s, t, m) = high[0]
        ends = [v for v in comp if deg[v] == 1]
        at_end = deg[s] == 1 or deg[t] == 1
        if m == 4:
            if at_end:
                return True  # B_n / C_n
            return n == 4  # F4
        if m == 5:
            return at_end and n <= 4  # H3, H4
        return False  # label >= 6 on a connected diagram of rank >= 3

    def _arm_lengths(self, center, edges):
        adjacency = {}
        for s, t, _ in edges:
            adjacency.setdefault(s, []).append(t)
            adjacency.setdefault(t, []).append(s)
        lengths = []
        for start in adjacency[center]:
            prev, cur, steps = center, start, 1
            while True:
                nxt = [v for v in adjacency[cur] if v != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                steps += 1
            lengths.append(steps)
        return lengths

    def longest_element(self, J):
        """The longest element r_J of a spherical standard subgroup <J>."""
        J = frozenset(J)
        if not self.is_spherical(J):
            raise NotSpherical(f"<{sorted(J)}> is infinite")
        w = Identity
        while True:
            for s in J:
                u = self.mult(w, (s,))
                if len(u) > len(w):
                    w = u
                    break
            else:
                return w

    # -- serialization ----------------------------------------------------

    def elem_to_str(self, w):
        return ".".join(self.generators[s] for s in w)

    def elem_from_str(self, text):
        if text == "":
            return Identity
        idx = {name: i for i, name in enumerate(self.generators)}
        try:
            word = tuple(idx[part] for part in text.split("."))
        except KeyError as exc:
            raise ParseError(f"unknown generator {exc.args[0]!r}") from None
        return self.canon(word)


def parse_coxeter_matrix(text):
    """Parse the UTF-8 JSON diagram document into a validated CoxeterMatrix."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or set(doc) != {"generators", "m"}:
        raise ParseError("document must be an object with keys 'generators' and 'm'")
    generators, m = doc["generators"], doc["m"]
    if not isinstance(generators, list) or not isinstance(m, list):
        raise ParseError("'generators' must be an array and 'm' a matrix")
    for row in m:
        if not isinstance(row, list):
            raise ParseError("'m' must be an array of arrays")
    return CoxeterMatrix(generators, m)
