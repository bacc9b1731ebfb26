"""Independent reference implementations used by the tests.

Nothing here calls into the package's domain, separator or teacher code.
"""

from __future__ import annotations

import itertools
import random
from collections import deque


# -- octagons ---------------------------------------------------------------

def octagon_template_dbm(points, n):
    """Closed DBM of the octagonal hull of ``points``: every entry is the
    maximum of ``V[j] - V[i]`` over the points, with ``V = (x0, -x0, ...)``."""
    size = 2 * n
    m = [[None] * size for _ in range(size)]
    for p in points:
        v = []
        for x in p:
            v += [x, -x]
        for i in range(size):
            for j in range(size):
                d = v[j] - v[i]
                if m[i][j] is None or d > m[i][j]:
                    m[i][j] = d
    return tuple(tuple(r) for r in m)


# -- 2-D convex hull membership ---------------------------------------------

def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _in_triangle(q, a, b, c):
    d1, d2, d3 = _cross(a, b, q), _cross(b, c, q), _cross(c, a, q)
    neg = d1 < 0 or d2 < 0 or d3 < 0
    pos = d1 > 0 or d2 > 0 or d3 > 0
    return not (neg and pos)


def _on_segment(q, a, b):
    if _cross(a, b, q) != 0:
        return False
    return (min(a[0], b[0]) <= q[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= q[1] <= max(a[1], b[1]))


def in_hull_2d(q, points):
    """Exact membership by Carathéodory: q lies in a triangle, on a segment,
    or on a point of ``points``; each tested with integer half-plane signs."""
    pts = list(dict.fromkeys(points))
    if q in pts:
        return True
    for a, b in itertools.combinations(pts, 2):
        if _on_segment(q, a, b):
            return True
    for a, b, c in itertools.combinations(pts, 3):
        if _cross(a, b, c) != 0 and _in_triangle(q, a, b, c):
            return True
    return False


def polygon_vertices(points):
    """Vertices of the convex hull (monotone chain, collinear points dropped)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return set(pts)
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return set(lower[:-1] + upper[:-1])


# -- random ICE samples -----------------------------------------------------

def random_sample(rng: random.Random, n: int, max_pos=20, max_neg=15,
                  max_impl=10, lo=-8, hi=8):
    """A consistent sample closed under implication propagation, returned as
    an ordered list of counterexample events (kind, payload)."""
    def pt():
        return tuple(rng.randint(lo, hi) for _ in range(n))

    pos = list(dict.fromkeys(pt() for _ in range(rng.randint(1, max_pos))))
    neg = [p for p in dict.fromkeys(pt() for _ in range(rng.randint(0, max_neg)))
           if p not in pos]
    pool = pos + neg + [pt() for _ in range(6)]
    impl = []
    for _ in range(rng.randint(0, max_impl)):
        a, b = rng.choice(pool), rng.choice(pool + [pt()])
        if a != b:
            impl.append((a, b))
    # drop implications until the closure is consistent
    while True:
        P, N = close(pos, neg, impl)
        if not (P & N):
            break
        impl.pop(rng.randrange(len(impl)))
    events = ([("pos", p) for p in pos] + [("neg", p) for p in neg]
              + [("impl", ab) for ab in impl])
    rng.shuffle(events)
    return events


def close(pos, neg, impl):
    P, N = set(pos), set(neg)
    changed = True
    while changed:
        changed = False
        for a, b in impl:
            if a in P and b not in P:
                P.add(b)
                changed = True
            if b in N and a not in N:
                N.add(a)
                changed = True
    return P, N


# -- corpus semantics written by hand from the program texts ----------------

def _box(n, B):
    return itertools.product(range(-B, B + 1), repeat=n)


CORPUS = {
    "fig5.ts": dict(
        n=3,
        init=lambda s: s[0] == 2 and s[1] == 0,
        succ=lambda s: [(s[0] + 4, s[1], s[2])] if s[2] == 0
        else [(s[0] + 2, s[1] + 1, s[2])],
        good=lambda s: s[1] == 0 or s[0] == 2 * s[1] + 2),
    "simple_inc.ts": dict(
        n=1, init=lambda s: s[0] == 0, succ=lambda s: [(s[0] + 1,)],
        good=lambda s: s[0] >= 0),
    "two_counters.ts": dict(
        n=2, init=lambda s: s == (0, 0),
        succ=lambda s: [(s[0] + 1, s[1] + 1)], good=lambda s: s[0] == s[1]),
    "bounded_loop.ts": dict(
        n=1, init=lambda s: s[0] == 0,
        succ=lambda s: [(s[0] + 1,)] if s[0] < 10 else [],
        good=lambda s: s[0] <= 10),
    "two_phase.ts": dict(
        n=2, init=lambda s: s == (0, 5),
        succ=lambda s: [] if s[0] >= 10
        else [(s[0] + 1, s[1] + 1 if s[0] >= 5 else s[1])],
        good=lambda s: s[0] < 10 or s[1] == 10),
    "unsafe_counter.ts": dict(
        n=1, init=lambda s: s[0] == 0, succ=lambda s: [(s[0] + 1,)],
        good=lambda s: s[0] <= 5),
    "unsafe_race.ts": dict(
        n=2, init=lambda s: s == (0, 0),
        succ=lambda s: [(s[0] + 1, s[1] + 2)],
        good=lambda s: s[1] <= s[0] + 3),
    "growth.ts": dict(
        n=2, init=lambda s: s == (1, 0),
        succ=lambda s: [(s[0] + s[1], s[1] + 1)], good=lambda s: s[0] >= 1),
    "nondet.ts": dict(
        n=2, init=lambda s: s == (0, 0),
        succ=lambda s: [(s[0] + 1, y) for y in range(s[1], s[0] + 2)],
        good=lambda s: s[1] <= s[0]),
    "transfer.ts": dict(
        n=2, init=lambda s: 0 <= s[0] <= 10 and s[1] == 0,
        succ=lambda s: [(s[0] - 1, s[1] + 1)] if s[0] > 0 else [],
        good=lambda s: s[1] <= 10),
}


def bounded_reachability(prog, B=12):
    """Breadth-first search from the initial states inside ``[-B, B]^n``;
    returns a reachable bad state or None."""
    start = [s for s in _box(prog["n"], B) if prog["init"](s)]
    seen = set(start)
    queue = deque(start)
    while queue:
        s = queue.popleft()
        if not prog["good"](s):
            return s
        for t in prog["succ"](s):
            if all(-B <= v <= B for v in t) and t not in seen:
                seen.add(t)
                queue.append(t)
    return None


def brute_inductive(prog, holds, B):
    """Check Init => J, J => Good and J /\\ T => J' on every state of the box
    (successors may leave the box)."""
    for s in _box(prog["n"], B):
        if prog["init"](s) and not holds(s):
            return ("init", s)
        if holds(s):
            if not prog["good"](s):
                return ("good", s)
            for t in prog["succ"](s):
                if not holds(t):
                    return ("step", s, t)
    return None
