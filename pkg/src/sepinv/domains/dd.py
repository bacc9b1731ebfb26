"""Exact double description for polyhedral cones.

All vectors are tuples of Python ints; every intermediate ray is kept
primitive (coprime entries), so no rational arithmetic is needed inside the
main loop.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

Vec = tuple


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b) if x and y)


def primitive(v: Sequence[int]) -> Vec:
    g = reduce(gcd, (abs(x) for x in v), 0)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def integer_row(v: Sequence[Fraction]) -> Vec:
    """Scale a rational vector to a primitive integer vector (same direction)."""
    den = 1
    for x in v:
        q = x.denominator if isinstance(x, Fraction) else 1
        if q != 1:
            den = den * q // gcd(den, q)
    if den == 1:
        return primitive([int(x) for x in v])
    return primitive([int(x * den) for x in v])


def rref(rows: Sequence[Sequence], columns: Sequence[int]) -> list[tuple[int, list[Fraction]]]:
    """Reduced row echelon form, choosing pivots in the given column order.

    Returns ``(pivot_column, row)`` pairs with the pivot entry equal to 1 and
    every other row zero in that column.
    """
    work = [[Fraction(x) for x in r] for r in rows]
    out: list[tuple[int, list[Fraction]]] = []
    for col in columns:
        pick = next((r for r in work if r[col] != 0), None)
        if pick is None:
            continue
        work.remove(pick)
        p = pick[col]
        pick = [x / p for x in pick]
        for r in work:
            if r[col]:
                f = r[col]
                for i, x in enumerate(pick):
                    if x:
                        r[i] -= f * x
        for _, r in out:
            if r[col]:
                f = r[col]
                for i, x in enumerate(pick):
                    if x:
                        r[i] -= f * x
        out.append((col, pick))
    return out


def rank(rows: Sequence[Sequence[int]], d: int) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    work = [list(r[:d]) for r in rows if any(r[:d])]
    r = 0
    for col in range(d):
        k = next((i for i in range(r, len(work)) if work[i][col]), None)
        if k is None:
            continue
        work[r], work[k] = work[k], work[r]
        piv = work[r]
        for i in range(r + 1, len(work)):
            row = work[i]
            f = row[col]
            if f:
                work[i] = primitive([piv[col] * x - f * y
                                     for x, y in zip(row, piv)])
        r += 1
        if r == len(work):
            break
    return r


def nullspace(rows: Sequence[Sequence[int]], d: int) -> list[Vec]:
    """Integer basis of ``{y : r . y = 0 for r in rows}``."""
    red = rref(rows, range(d))
    pivots = {c for c, _ in red}
    basis = []
    for free in range(d):
        if free in pivots:
            continue
        v = [Fraction(0)] * d
        v[free] = Fraction(1)
        for c, r in red:
            v[c] = -r[free]
        basis.append(integer_row(v))
    return basis


def _combine(h: Sequence[int], a: Vec, b: Vec) -> Vec:
    """Positive combination of ``a`` (h.a > 0) and ``b`` (h.b < 0) on h = 0."""
    ha, hb = dot(h, a), dot(h, b)
    return primitive([ha * y - hb * x for x, y in zip(a, b)])


def cone_generators(ineqs: Sequence[Sequence[int]],
                    eqs: Sequence[Sequence[int]],
                    d: int) -> tuple[list[Vec], list[Vec]]:
    """Extreme rays and a lineality basis of ``{y : A y >= 0, E y = 0}``.

    Rays are returned modulo the lineality space.
    """
    lines = nullspace(list(eqs), d)
    rays: list[Vec] = []
    zeros: list[int] = []  # bitmask of processed rows each ray is tight on
    for k, h in enumerate(ineqs):
        h = tuple(h)
        if not any(h):
            continue
        bit = 1 << k
        pivot = next((l for l in lines if dot(h, l)), None)
        if pivot is not None:
            if dot(h, pivot) < 0:
                pivot = tuple(-x for x in pivot)
            hp = dot(h, pivot)
            new_lines = []
            for l in lines:
                if l is pivot or l == tuple(-x for x in pivot):
                    continue
                hl = dot(h, l)
                new_lines.append(
                    primitive([hp * x - hl * y for x, y in zip(l, pivot)])
                    if hl else l)
            lines = [l for l in new_lines if any(l)]
            new_rays = []
            for r in rays:
                hr = dot(h, r)
                new_rays.append(
                    primitive([hp * x - hr * y for x, y in zip(r, pivot)])
                    if hr else r)
            rays = new_rays
            zeros = [z | bit for z in zeros]
            rays.append(pivot)
            # a former line is tight on every earlier row
            zeros.append(bit - 1)
            continue
        signs = [dot(h, r) for r in rays]
        pos = [i for i, s in enumerate(signs) if s > 0]
        neg = [i for i, s in enumerate(signs) if s < 0]
        zer = [i for i, s in enumerate(signs) if s == 0]
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zer]
        new_zeros = [zeros[i] for i in pos] + [zeros[i] | bit for i in zer]
        for i in pos:
            for j in neg:
                common = zeros[i] & zeros[j]
                if any(m != i and m != j and (zeros[m] & common) == common
                       for m in range(len(rays))):
                    continue
                new_rays.append(_combine(h, rays[i], rays[j]))
                new_zeros.append(common | bit)
        rays, zeros = new_rays, new_zeros
    return rays, lines

