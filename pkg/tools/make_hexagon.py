"""Generate the G2(2) generalized hexagon data file.

The split Cayley hexagon over F2 is realized inside the split octonions,
written as Zorn vector matrices ((a, v), (w, b)) with a, b in F2 and
v, w in F2^3.  Its points are the nonzero trace-zero octonions of norm
zero (b = a and a = v.w, which gives 63 of them) and its lines are the
2-spaces on which the octonion product vanishes identically.  The
resulting geometry has 63 points, 63 lines, 189 flags, and its bipartite
incidence graph has girth 12 and diameter 6.

Run from the repository root:

    python3 tools/make_hexagon.py > src/chamberlab/data/g2_hexagon.txt
"""

import itertools


def dot(u, v):
    return sum(x * y for x, y in zip(u, v)) % 2


def cross(u, v):
    return (
        (u[1] * v[2] + u[2] * v[1]) % 2,
        (u[2] * v[0] + u[0] * v[2]) % 2,
        (u[0] * v[1] + u[1] * v[0]) % 2,
    )


def mul(x, y):
    a, v, w, b = x
    a2, v2, w2, b2 = y
    cw, cv = cross(w, w2), cross(v, v2)
    return (
        (a * a2 + dot(v, w2)) % 2,
        tuple((a * v2[i] + b2 * v[i] + cw[i]) % 2 for i in range(3)),
        tuple((a2 * w[i] + b * w2[i] + cv[i]) % 2 for i in range(3)),
        (b * b2 + dot(w, v2)) % 2,
    )


def add(x, y):
    return (
        (x[0] + y[0]) % 2,
        tuple((x[1][i] + y[1][i]) % 2 for i in range(3)),
        tuple((x[2][i] + y[2][i]) % 2 for i in range(3)),
        (x[3] + y[3]) % 2,
    )


ZERO = (0, (0, 0, 0), (0, 0, 0), 0)


def main():
    points = []
    for v in itertools.product((0, 1), repeat=3):
        for w in itertools.product((0, 1), repeat=3):
            a = dot(v, w)
            x = (a, v, w, a)
            if x != ZERO:
                points.append(x)
    assert len(points) == 63

    lines = set()
    for x, y in itertools.combinations(points, 2):
        z = add(x, y)
        if mul(x, y) == ZERO and mul(x, z) == ZERO and mul(y, z) == ZERO:
            lines.add(frozenset({x, y, z}))
    assert len(lines) == 63

    index = {p: i for i, p in enumerate(points)}
    print("# split Cayley hexagon G2(2): 63 points, 63 lines, 189 flags")
    print("# generated by tools/make_hexagon.py")
    for li, line in enumerate(sorted(lines, key=lambda L: sorted(index[p] for p in L))):
        for p in sorted(line, key=index.get):
            print(f"p{index[p]} l{li}")


if __name__ == "__main__":
    main()
