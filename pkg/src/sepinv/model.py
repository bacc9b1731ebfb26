"""States, linear constraints, formulas, transition systems and ICE samples."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, Iterator, Sequence, Union

State = tuple  # tuple[int, ...], one entry per declared variable


class DimensionError(ValueError):
    """A state or constraint has the wrong number of components."""


class Rel(enum.Enum):
    LE = "<="
    EQ = "="


def _gcd_all(values: Iterable[int]) -> int:
    return reduce(gcd, (abs(v) for v in values), 0)


@dataclass(frozen=True)
class LinearConstraint:
    """``sum(coeffs[i] * x[i]) <= bound`` (LE) or ``== bound`` (EQ).

    Instances are always normalized: the nonzero coefficients are coprime,
    LE bounds are tightened to the integer floor, and the first nonzero
    coefficient of an EQ is positive.  Use :func:`make_constraint` when the
    input may be trivially true or false.
    """

    rel: Rel
    coeffs: tuple = ()
    bound: int = 0

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if not any(coeffs):
            raise ValueError("constraint has no variables")
        g = _gcd_all(coeffs)
        bound = self.bound
        if self.rel is Rel.EQ:
            if bound % g:
                raise ValueError("equality has no integer solutions")
            if next(c for c in coeffs if c) < 0:
                coeffs = tuple(-c for c in coeffs)
                bound = -bound
            bound //= g
        else:
            bound = bound // g  # floor: integer tightening
        object.__setattr__(self, "coeffs", tuple(c // g for c in coeffs))
        object.__setattr__(self, "bound", int(bound))

    # Canonical order: equalities first, then by coefficient vector.
    def sort_key(self):
        return (self.rel is not Rel.EQ, self.coeffs, self.bound)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __le__(self, other):
        return self.sort_key() <= other.sort_key()

    def __gt__(self, other):
        return self.sort_key() > other.sort_key()

    def __ge__(self, other):
        return self.sort_key() >= other.sort_key()

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def lhs(self, values: Sequence[int]) -> int:
        if len(values) != len(self.coeffs):
            raise DimensionError(
                f"constraint over {len(self.coeffs)} variables applied to "
                f"{len(values)} values")
        return sum(c * v for c, v in zip(self.coeffs, values) if c)

    def holds(self, values: Sequence[int]) -> bool:
        s = self.lhs(values)
        return s == self.bound if self.rel is Rel.EQ else s <= self.bound

    def negated(self) -> "Formula":
        """Complement over the integers."""
        if self.rel is Rel.LE:
            return Atom(LinearConstraint(
                Rel.LE, tuple(-c for c in self.coeffs), -self.bound - 1))
        return Or((
            Atom(LinearConstraint(Rel.LE, self.coeffs, self.bound - 1)),
            Atom(LinearConstraint(Rel.LE, tuple(-c for c in self.coeffs),
                                  -self.bound - 1)),
        ))

    def complement(self) -> "LinearConstraint | None":
        """The LE constraint holding exactly where this one fails, if any."""
        if self.rel is Rel.EQ:
            return None
        return LinearConstraint(Rel.LE, tuple(-c for c in self.coeffs),
                                -self.bound - 1)

    def pretty(self, names: Sequence[str]) -> str:
        terms = []
        for c, n in zip(self.coeffs, names):
            if not c:
                continue
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            sign = "-" if c < 0 else "+"
            terms.append((sign, f"{mag}{n}"))
        head_sign, head = terms[0]
        text = ("-" if head_sign == "-" else "") + head
        for sign, t in terms[1:]:
            text += f" {sign} {t}"
        return f"{text} {self.rel.value} {self.bound}"


def le(coeffs, bound) -> LinearConstraint:
    return LinearConstraint(Rel.LE, tuple(coeffs), bound)


def eq(coeffs, bound) -> LinearConstraint:
    return LinearConstraint(Rel.EQ, tuple(coeffs), bound)


# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class Atom:
    constraint: LinearConstraint


@dataclass(frozen=True)
class And:
    args: tuple = ()


@dataclass(frozen=True)
class Or:
    args: tuple = ()


@dataclass(frozen=True)
class Not:
    arg: "Formula"


Formula = Union[Atom, And, Or, Not]

TRUE = And(())
FALSE = Or(())


def make_constraint(coeffs: Sequence[int], bound: int, rel: Rel) -> Formula:
    """Build an atom, folding constant and unsatisfiable atoms to TRUE/FALSE."""
    coeffs = tuple(coeffs)
    if not any(coeffs):
        ok = (0 == bound) if rel is Rel.EQ else (0 <= bound)
        return TRUE if ok else FALSE
    if rel is Rel.EQ and bound % _gcd_all(coeffs):
        return FALSE
    return Atom(LinearConstraint(rel, coeffs, bound))


def conj(args: Iterable[Formula]) -> Formula:
    args = tuple(args)
    return args[0] if len(args) == 1 else And(args)


def disj(args: Iterable[Formula]) -> Formula:
    args = tuple(args)
    return args[0] if len(args) == 1 else Or(args)


def eval_formula(f: Formula, s: Sequence[int]) -> bool:
    """Truth value of ``f`` at the integer point ``s``."""
    if isinstance(f, Atom):
        return f.constraint.holds(s)
    if isinstance(f, And):
        return all(eval_formula(a, s) for a in f.args)
    if isinstance(f, Or):
        return any(eval_formula(a, s) for a in f.args)
    if isinstance(f, Not):
        return not eval_formula(f.arg, s)
    raise TypeError(f"not a formula: {f!r}")


def eval_trans(t: Formula, s: Sequence[int], s2: Sequence[int]) -> bool:
    """True iff ``(s, s2)`` satisfies the transition relation ``t``."""
    if len(s) != len(s2):
        raise DimensionError("pre- and post-state differ in dimension")
    return eval_formula(t, tuple(s) + tuple(s2))


def atoms(f: Formula) -> Iterator[LinearConstraint]:
    if isinstance(f, Atom):
        yield f.constraint
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from atoms(a)
    elif isinstance(f, Not):
        yield from atoms(f.arg)


def formula_dim(f: Formula) -> int | None:
    dims = {c.dim for c in atoms(f)}
    if len(dims) > 1:
        raise DimensionError(f"mixed atom dimensions {sorted(dims)}")
    return dims.pop() if dims else None


def to_nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form; negated atoms become complement atoms."""
    if isinstance(f, Atom):
        return f.constraint.negated() if negate else f
    if isinstance(f, Not):
        return to_nnf(f.arg, not negate)
    if isinstance(f, And):
        parts = tuple(to_nnf(a, negate) for a in f.args)
        return Or(parts) if negate else And(parts)
    if isinstance(f, Or):
        parts = tuple(to_nnf(a, negate) for a in f.args)
        return And(parts) if negate else Or(parts)
    raise TypeError(f"not a formula: {f!r}")


def conjunct_atoms(f: Formula) -> list[LinearConstraint] | None:
    """Atoms of ``f`` if it is a plain conjunction of atoms, else None."""
    if isinstance(f, Atom):
        return [f.constraint]
    if isinstance(f, And):
        out = []
        for a in f.args:
            sub = conjunct_atoms(a)
            if sub is None:
                return None
            out.extend(sub)
        return out
    return None


def rename_to_primed(f: Formula, n: int) -> Formula:
    """Lift a formula over V to the primed copy V' inside V ∪ V'."""
    if isinstance(f, Atom):
        c = f.constraint
        return Atom(LinearConstraint(c.rel, (0,) * n + c.coeffs, c.bound))
    if isinstance(f, And):
        return And(tuple(rename_to_primed(a, n) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(rename_to_primed(a, n) for a in f.args))
    if isinstance(f, Not):
        return Not(rename_to_primed(f.arg, n))
    raise TypeError(f"not a formula: {f!r}")


def widen_to_pair(f: Formula, n: int) -> Formula:
    """View a formula over V as one over V ∪ V' (unprimed columns)."""
    if isinstance(f, Atom):
        c = f.constraint
        return Atom(LinearConstraint(c.rel, c.coeffs + (0,) * n, c.bound))
    if isinstance(f, And):
        return And(tuple(widen_to_pair(a, n) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(widen_to_pair(a, n) for a in f.args))
    if isinstance(f, Not):
        return Not(widen_to_pair(f.arg, n))
    raise TypeError(f"not a formula: {f!r}")


@dataclass(frozen=True)
class TranSys:
    vars: tuple
    init: Formula
    trans: Formula
    good: Formula

    @property
    def n(self) -> int:
        return len(self.vars)

    def primed_names(self) -> tuple:
        return tuple(v + "'" for v in self.vars)

    def is_init(self, s) -> bool:
        return eval_formula(self.init, s)

    def is_good(self, s) -> bool:
        return eval_formula(self.good, s)

    def step(self, s, s2) -> bool:
        return eval_trans(self.trans, s, s2)

    def program_atoms(self) -> list[LinearConstraint]:
        """Atoms of Init and Good plus the unprimed atoms (guards) of Trans."""
        out = list(atoms(self.init)) + list(atoms(self.good))
        n = self.n
        for c in atoms(self.trans):
            if not any(c.coeffs[n:]):
                out.append(LinearConstraint(c.rel, c.coeffs[:n], c.bound))
        return out


# ---------------------------------------------------------------------------
# Counterexamples and ICE samples


@dataclass(frozen=True)
class Positive:
    state: tuple


@dataclass(frozen=True)
class Negative:
    state: tuple


@dataclass(frozen=True)
class Implication:
    src: tuple
    dst: tuple

    def __post_init__(self):
        if len(self.src) != len(self.dst):
            raise DimensionError("implication endpoints differ in dimension")


Counterexample = Union[Positive, Negative, Implication]


@dataclass(frozen=True)
class Contradiction:
    """The sample became contradictory; ``witness`` is in both S+ and S-."""

    witness: tuple


def _unique(items: Iterable) -> tuple:
    return tuple(dict.fromkeys(items))


@dataclass(frozen=True)
class Sample:
    """An ICE sample (S+, S-, S->).

    The three components behave as sets but remember insertion order, which
    fixes the order separators are seeded in.
    """

    pos: tuple = ()
    neg: tuple = ()
    impl: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "pos", _unique(map(tuple, self.pos)))
        object.__setattr__(self, "neg", _unique(map(tuple, self.neg)))
        object.__setattr__(
            self, "impl", _unique((tuple(a), tuple(b)) for a, b in self.impl))

    @cached_property
    def pos_set(self) -> frozenset:
        return frozenset(self.pos)

    @cached_property
    def neg_set(self) -> frozenset:
        return frozenset(self.neg)

    def points(self) -> tuple:
        """All distinct states mentioned by the sample, in first-seen order."""
        seen = dict.fromkeys(self.pos)
        seen.update(dict.fromkeys(self.neg))
        for a, b in self.impl:
            seen[a] = None
            seen[b] = None
        return tuple(seen)

    def is_consistent(self) -> bool:
        return not (self.pos_set & self.neg_set)

    def satisfies_closure(self) -> bool:
        """Property (4): positives flow forward, negatives flow backward."""
        for a, b in self.impl:
            if a in self.pos_set and b not in self.pos_set:
                return False
            if b in self.neg_set and a not in self.neg_set:
                return False
        return True

    def __len__(self):
        return len(self.points())


def close_sample(pos: Iterable, neg: Iterable, impl: Iterable) -> Sample:
    """Saturate positives forward and negatives backward along ``impl``."""
    pos = dict.fromkeys(pos)
    neg = dict.fromkeys(neg)
    impl = _unique(impl)
    changed = True
    while changed:
        changed = False
        for a, b in impl:
            if a in pos and b not in pos:
                pos[b] = None
                changed = True
            if b in neg and a not in neg:
                neg[a] = None
                changed = True
    return Sample(tuple(pos), tuple(neg), impl)


def add_counterexample(sample: Sample,
                       cex: Counterexample) -> Sample | Contradiction:
    """Insert ``cex`` and restore property (4).

    Returns a :class:`Contradiction` carrying one witness state when S+ and
    S- intersect afterwards.
    """
    pos, neg, impl = list(sample.pos), list(sample.neg), list(sample.impl)
    if isinstance(cex, Positive):
        pos.append(tuple(cex.state))
    elif isinstance(cex, Negative):
        neg.append(tuple(cex.state))
    elif isinstance(cex, Implication):
        impl.append((tuple(cex.src), tuple(cex.dst)))
    else:
        raise TypeError(f"not a counterexample: {cex!r}")
    dims = {len(p) for p in pos} | {len(p) for p in neg} | {
        len(p) for ab in impl for p in ab}
    if len(dims) > 1:
        raise DimensionError(f"sample mixes dimensions {sorted(dims)}")
    out = close_sample(pos, neg, impl)
    both = [p for p in out.pos if p in out.neg_set]
    if both:
        return Contradiction(both[0])
    return out
