"""Convex polyhedra kept in both V- and H-representation.

Generators are points (possibly rational), rays and lines.  The H-form is
computed eagerly with the double description routine in :mod:`.dd`, and the
canonical constraint set doubles as the equality/hash key.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..model import DimensionError, LinearConstraint, Rel, eq, le
from .dd import cone_generators, dot, integer_row, primitive, rank, rref


def _homog_point(p: Sequence) -> tuple:
    """Integer vector proportional to ``(p, 1)``."""
    if all(type(v) is int for v in p):
        return tuple(p) + (1,)
    return integer_row([Fraction(v) for v in p] + [Fraction(1)])


def _affine(row: Sequence[int], p: Sequence):
    """``a . p + c`` for an H-row ``(a, c)``; only the sign is meaningful
    when ``p`` is rational."""
    if all(type(v) is int for v in p):
        return dot(row, p) + row[-1]
    return dot(row, _homog_point(p))


@dataclass(frozen=True, eq=False)
class PolyElem:
    n: int
    points: tuple
    rays: tuple = ()
    lines: tuple = ()
    # raw H-form: rows (a, c) meaning a.x + c >= 0 / a.x + c = 0
    ineqs: tuple = field(default=(), repr=False)
    eqs: tuple = field(default=(), repr=False)
    key: tuple = field(default=(), repr=False)

    tag = "poly"

    @property
    def dim(self) -> int:
        return self.n

    def __eq__(self, other):
        return isinstance(other, PolyElem) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_generators(cls, n: int, points, rays=(), lines=()) -> "PolyElem":
        points = [_plain(p) for p in points]
        if not points:
            raise ValueError("a polyhedron needs at least one point")
        homog = [_homog_point(p) for p in points]
        gens = list(homog)
        gens += [primitive(tuple(r) + (0,)) for r in rays]
        line_rows = [primitive(tuple(l) + (0,)) for l in lines]
        # dual cone: (a, c) with (a, c) . g >= 0 and (a, c) . l = 0
        facets, lineality = cone_generators(gens, line_rows, n + 1)
        facets = [f for f in facets if any(f[:n])]
        eqs = lineality
        lines_basis = _line_basis(n, eqs, facets)
        pts = _minimal_points(n, points, homog, facets, eqs, lines_basis)
        rys = _minimal_rays(n, rays, facets, eqs, lines_basis)
        cons = _canonical(n, eqs, facets)
        return cls(n, tuple(pts), tuple(rys), tuple(lines_basis),
                   tuple(facets), tuple(eqs), tuple(cons))

    @classmethod
    def singleton(cls, s) -> "PolyElem":
        return cls.from_generators(len(s), [s])

    @classmethod
    def from_constraints(cls, cs: list[LinearConstraint], n: int):
        # homogenize with tau >= 0: b*tau - a.x >= 0
        ineqs = [tuple(-a for a in c.coeffs) + (c.bound,)
                 for c in cs if c.rel is Rel.LE]
        ineqs.append((0,) * n + (1,))
        eqs = [tuple(-a for a in c.coeffs) + (c.bound,)
               for c in cs if c.rel is Rel.EQ]
        rays, lines = cone_generators(ineqs, eqs, n + 1)
        points = [tuple(Fraction(v, r[-1]) for v in r[:n])
                  for r in rays if r[-1] > 0]
        if not points:
            return None
        ray_dirs = [r[:n] for r in rays if r[-1] == 0]
        return cls.from_generators(n, points, ray_dirs, [l[:n] for l in lines])

    # -- lattice operations -------------------------------------------------

    def _check(self, other):
        if not isinstance(other, PolyElem) or other.n != self.n:
            raise DimensionError("incompatible polyhedra")

    def join(self, other: "PolyElem") -> "PolyElem":
        self._check(other)
        return PolyElem.from_generators(
            self.n, self.points + other.points, self.rays + other.rays,
            self.lines + other.lines)

    def contains_rational(self, p) -> bool:
        return (all(_affine(e, p) == 0 for e in self.eqs)
                and all(_affine(f, p) >= 0 for f in self.ineqs))

    def contains(self, p) -> bool:
        if len(p) != self.n:
            raise DimensionError("point dimension mismatch")
        return self.contains_rational(p)

    def leq(self, other: "PolyElem") -> bool:
        self._check(other)
        if not all(other.contains_rational(p) for p in self.points):
            return False
        for r in self.rays:
            if any(dot(e[:-1], r) for e in other.eqs):
                return False
            if any(dot(f[:-1], r) < 0 for f in other.ineqs):
                return False
        for l in self.lines:
            if any(dot(e[:-1], l) for e in other.eqs):
                return False
            if any(dot(f[:-1], l) for f in other.ineqs):
                return False
        return True

    def constraints(self) -> list[LinearConstraint]:
        return list(self.key)

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lines


def _line_basis(n: int, eqs, facets) -> list[tuple]:
    """Lineality space of the polyhedron: directions orthogonal to all rows."""
    from .dd import nullspace
    rows = [e[:n] for e in eqs] + [f[:n] for f in facets]
    basis = nullspace(rows, n)
    if not basis:
        return []
    red = rref(basis, range(n))
    return [integer_row(r) for _, r in red]


def _minimal_points(n, points, homog, facets, eqs, lines) -> list[tuple]:
    need = n - len(lines)
    eq_rows = [e[:n] for e in eqs]
    seen = {}
    for p, g in zip(points, homog):
        tight = frozenset(k for k, f in enumerate(facets) if dot(f, g) == 0)
        if tight in seen:
            continue
        if rank(eq_rows + [facets[k][:n] for k in tight], n) == need:
            seen[tight] = p
    return list(seen.values())


def _minimal_rays(n, rays, facets, eqs, lines) -> list[tuple]:
    need = n - len(lines) - 1
    eq_rows = [e[:n] for e in eqs]
    seen = {}
    for r in rays:
        r = primitive(tuple(r))
        if any(dot(e, r) for e in eq_rows):
            continue
        if not any(dot(f[:n], r) for f in facets):
            continue  # lies in the lineality space
        tight = frozenset(k for k, f in enumerate(facets) if dot(f[:n], r) == 0)
        if tight in seen:
            continue
        if rank(eq_rows + [facets[k][:n] for k in tight], n) == need:
            seen[tight] = r
    return list(seen.values())


def _plain(p) -> tuple:
    return tuple(int(v) if Fraction(v).denominator == 1 else Fraction(v)
                 for v in p)


def _canonical(n: int, eqs, facets) -> list[LinearConstraint]:
    """Equalities in reduced echelon form (pivots on the last variables),
    facets rewritten without pivot variables."""
    # a.x + c = 0  <=>  a.x = -c
    rows = [list(e[:n]) + [-e[n]] for e in eqs]
    red = rref(rows, range(n - 1, -1, -1))
    out: list[LinearConstraint] = []
    for _, r in red:
        v = integer_row(r)
        out.append(eq(v[:n], v[n]))
    body = set()
    for f in facets:
        # a.x + c >= 0  <=>  -a.x <= c
        row = [Fraction(-a) for a in f[:n]] + [Fraction(f[n])]
        for col, r in red:
            k = row[col]
            if k:
                row = [x - k * y for x, y in zip(row, r)]
        if not any(row[:n]):
            continue
        v = integer_row(row)
        body.add(le(v[:n], v[n]))
    return sorted(out) + sorted(body)
