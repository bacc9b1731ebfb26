"""Boxes: one integer interval per variable, ``None`` meaning unbounded."""

from __future__ import annotations

from dataclasses import dataclass

from ..model import DimensionError, LinearConstraint, Rel, le


@dataclass(frozen=True)
class IntervalElem:
    lo: tuple
    hi: tuple

    tag = "int"

    @property
    def dim(self) -> int:
        return len(self.lo)

    @classmethod
    def singleton(cls, s) -> "IntervalElem":
        s = tuple(int(v) for v in s)
        return cls(s, s)

    @classmethod
    def from_constraints(cls, cs: list[LinearConstraint], n: int):
        lo: list = [None] * n
        hi: list = [None] * n
        for c in cs:
            nz = [i for i, a in enumerate(c.coeffs) if a]
            if len(nz) != 1:
                return None
            i = nz[0]
            a = c.coeffs[i]  # +1 or -1 after normalization
            if c.rel is Rel.EQ or a > 0:
                hi[i] = c.bound if hi[i] is None else min(hi[i], c.bound)
            if c.rel is Rel.EQ or a < 0:
                b = c.bound if c.rel is Rel.EQ else -c.bound
                lo[i] = b if lo[i] is None else max(lo[i], b)
        if any(l is not None and h is not None and l > h for l, h in zip(lo, hi)):
            return None
        return cls(tuple(lo), tuple(hi))

    def _check(self, other):
        if not isinstance(other, IntervalElem) or other.dim != self.dim:
            raise DimensionError("incompatible interval elements")

    def join(self, other: "IntervalElem") -> "IntervalElem":
        self._check(other)
        lo = tuple(None if a is None or b is None else min(a, b)
                   for a, b in zip(self.lo, other.lo))
        hi = tuple(None if a is None or b is None else max(a, b)
                   for a, b in zip(self.hi, other.hi))
        return IntervalElem(lo, hi)

    def contains(self, p) -> bool:
        if len(p) != self.dim:
            raise DimensionError("point dimension mismatch")
        return all((l is None or l <= v) and (h is None or v <= h)
                   for v, l, h in zip(p, self.lo, self.hi))

    def leq(self, other: "IntervalElem") -> bool:
        self._check(other)
        for l1, h1, l2, h2 in zip(self.lo, self.hi, other.lo, other.hi):
            if l2 is not None and (l1 is None or l1 < l2):
                return False
            if h2 is not None and (h1 is None or h1 > h2):
                return False
        return True

    def constraints(self) -> list[LinearConstraint]:
        out = []
        n = self.dim
        for i, (l, h) in enumerate(zip(self.lo, self.hi)):
            unit = [0] * n
            if h is not None:
                unit[i] = 1
                out.append(le(unit, h))
            if l is not None:
                unit[i] = -1
                out.append(le(unit, -l))
        return sorted(out)
