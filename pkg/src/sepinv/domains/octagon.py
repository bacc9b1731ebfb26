"""Integer octagons as tightly closed difference-bound matrices.

Variable ``x_k`` is split into ``V[2k] = x_k`` and ``V[2k+1] = -x_k``; entry
``m[i][j]`` bounds ``V[j] - V[i]``.  ``None`` stands for +infinity.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..model import DimensionError, LinearConstraint, Rel, le

INF = None


def _bar(i: int) -> int:
    return i ^ 1


def _add(a, b):
    if a is None or b is None:
        return None
    return a + b


def _min(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _max(a, b):
    if a is None or b is None:
        return None
    return max(a, b)


def tight_closure(m: list[list]) -> list[list] | None:
    """Integer tight closure in place; returns None when the octagon is empty."""
    size = len(m)
    for k in range(size):
        mk = m[k]
        for i in range(size):
            mik = m[i][k]
            if mik is None:
                continue
            mi = m[i]
            for j in range(size):
                v = mk[j]
                if v is not None:
                    v += mik
                    if mi[j] is None or v < mi[j]:
                        mi[j] = v
    if any(m[i][i] is not None and m[i][i] < 0 for i in range(size)):
        return None
    for i in range(size):
        v = m[i][_bar(i)]
        if v is not None:
            m[i][_bar(i)] = v - (v % 2)
    for i in range(size):
        a, b = m[i][_bar(i)], m[_bar(i)][i]
        if a is not None and b is not None and a + b < 0:
            return None
    for i in range(size):
        for j in range(size):
            s = _add(m[i][_bar(i)], m[_bar(j)][j])
            if s is not None:
                m[i][j] = _min(m[i][j], s // 2)
    for i in range(size):
        if m[i][i] is not None and m[i][i] < 0:
            return None
        m[i][i] = 0
    return m


@dataclass(frozen=True)
class OctagonElem:
    n: int
    m: tuple  # tuple of row tuples, closed

    tag = "oct"

    @property
    def dim(self) -> int:
        return self.n

    @classmethod
    def from_matrix(cls, n: int, rows) -> "OctagonElem | None":
        m = [list(r) for r in rows]
        m = tight_closure(m)
        if m is None:
            return None
        return cls(n, tuple(tuple(r) for r in m))

    @classmethod
    def singleton(cls, s) -> "OctagonElem":
        s = [int(v) for v in s]
        n = len(s)
        vals = []
        for v in s:
            vals += [v, -v]
        # V[j] - V[i] is a constant on a single point
        m = tuple(tuple(vals[j] - vals[i] for j in range(2 * n))
                  for i in range(2 * n))
        return cls(n, m)

    @classmethod
    def from_constraints(cls, cs: list[LinearConstraint], n: int):
        size = 2 * n
        m: list[list] = [[0 if i == j else None for j in range(size)]
                         for i in range(size)]

        def put(i, j, b):
            m[i][j] = _min(m[i][j], b)
            m[_bar(j)][_bar(i)] = _min(m[_bar(j)][_bar(i)], b)

        for c in cs:
            parts = [(k, a) for k, a in enumerate(c.coeffs) if a]
            if len(parts) > 2 or any(abs(a) != 1 for _, a in parts):
                return None
            rows = [(c.coeffs, c.bound)]
            if c.rel is Rel.EQ:
                rows.append((tuple(-a for a in c.coeffs), -c.bound))
            for coeffs, b in rows:
                terms = [(k, a) for k, a in enumerate(coeffs) if a]
                # write as V[j] - V[i] <= b
                if len(terms) == 1:
                    k, a = terms[0]
                    pos = 2 * k if a > 0 else 2 * k + 1
                    put(_bar(pos), pos, 2 * b)
                else:
                    (k1, a1), (k2, a2) = terms
                    j = 2 * k1 if a1 > 0 else 2 * k1 + 1
                    i = _bar(2 * k2 if a2 > 0 else 2 * k2 + 1)
                    put(i, j, b)
        return cls.from_matrix(n, m)

    def _check(self, other):
        if not isinstance(other, OctagonElem) or other.n != self.n:
            raise DimensionError("incompatible octagon elements")

    def join(self, other: "OctagonElem") -> "OctagonElem":
        self._check(other)
        rows = [[_max(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.m, other.m)]
        return OctagonElem.from_matrix(self.n, rows)

    def contains(self, p) -> bool:
        if len(p) != self.n:
            raise DimensionError("point dimension mismatch")
        vals = []
        for v in p:
            vals += [v, -v]
        size = 2 * self.n
        for i in range(size):
            row = self.m[i]
            for j in range(size):
                b = row[j]
                if b is not None and vals[j] - vals[i] > b:
                    return False
        return True

    def leq(self, other: "OctagonElem") -> bool:
        self._check(other)
        for r1, r2 in zip(self.m, other.m):
            for a, b in zip(r1, r2):
                if b is not None and (a is None or a > b):
                    return False
        return True

    def constraints(self) -> list[LinearConstraint]:
        n = self.n
        out = set()
        for i in range(2 * n):
            for j in range(2 * n):
                b = self.m[i][j]
                if b is None or i == j:
                    continue
                coeffs = [0] * n
                # V[j] - V[i]
                coeffs[j // 2] += 1 if j % 2 == 0 else -1
                coeffs[i // 2] -= 1 if i % 2 == 0 else -1
                if not any(coeffs):
                    continue
                out.add(le(coeffs, b))
        return sorted(out)
