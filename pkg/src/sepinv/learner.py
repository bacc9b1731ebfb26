"""ICE decision-tree learner with separator-generated attributes."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from . import domains
from .model import (FALSE, TRUE, And, Atom, Formula, LinearConstraint, Not,
                    Or, Sample, TranSys, close_sample, le)
from .separator import SeparatorBuilder, Trace

LN2 = math.log(2)


class LearnerError(RuntimeError):
    """The learner reached a state its preconditions rule out."""


# ---------------------------------------------------------------------------
# Attributes


def signature(attrs: Sequence[LinearConstraint], p) -> tuple:
    return tuple(a.holds(p) for a in attrs)


def dedup_attributes(attrs: Iterable[LinearConstraint]) -> list[LinearConstraint]:
    """Drop repeats and integer complements (``x <= 0`` after ``x >= 1``),
    keeping the first occurrence."""
    seen: set = set()
    out = []
    for a in attrs:
        if a in seen:
            continue
        out.append(a)
        seen.add(a)
        comp = a.complement()
        if comp is not None:
            seen.add(comp)
    return out


def dedup_by_signature(attrs: Iterable[LinearConstraint], points) -> list:
    """Keep one attribute per partition of ``points`` (a signature and its
    bitwise complement induce the same split)."""
    points = list(points)
    seen: set = set()
    out = []
    for a in attrs:
        sig = tuple(a.holds(p) for p in points)
        if sig in seen:
            continue
        seen.add(sig)
        seen.add(tuple(not b for b in sig))
        out.append(a)
    return out


def initial_attributes(sys: TranSys) -> list[LinearConstraint]:
    return dedup_attributes(sys.program_atoms())


def octagon_templates(n: int, c: int) -> list[LinearConstraint]:
    """All ``±x ± y <= k`` and ``±x <= k`` with ``|k| <= c``."""
    shapes = []
    for i in range(n):
        for s in (1, -1):
            v = [0] * n
            v[i] = s
            shapes.append(v)
    for i, j in combinations(range(n), 2):
        for si in (1, -1):
            for sj in (1, -1):
                v = [0] * n
                v[i], v[j] = si, sj
                shapes.append(v)
    return dedup_attributes(le(v, k) for v in shapes for k in range(-c, c + 1))


# ---------------------------------------------------------------------------
# Sufficiency


def sufficient(attrs: Sequence[LinearConstraint], sample: Sample) -> tuple[bool, Sample]:
    classes = defaultdict(list)
    for p in sample.points():
        classes[signature(attrs, p)].append(p)
    extra = []
    for members in classes.values():
        for a, b in zip(members, members[1:]):
            extra += [(a, b), (b, a)]
    closed = close_sample(sample.pos, sample.neg, sample.impl + tuple(extra))
    if not closed.is_consistent():
        return False, sample
    return True, closed


# ---------------------------------------------------------------------------
# Trees


@dataclass(frozen=True)
class Leaf:
    positive: bool


@dataclass(frozen=True)
class Inner:
    attr: LinearConstraint
    left: "Tree"   # points satisfying attr
    right: "Tree"  # points falsifying attr


Tree = Leaf | Inner


def route(t: Tree, p) -> bool:
    while isinstance(t, Inner):
        t = t.left if t.attr.holds(p) else t.right
    return t.positive


def tree_to_formula(t: Tree) -> Formula:
    paths = []

    def walk(node, lits):
        if isinstance(node, Leaf):
            if node.positive:
                paths.append(lits)
            return
        walk(node.left, lits + [Atom(node.attr)])
        walk(node.right, lits + [Not(Atom(node.attr))])

    walk(t, [])
    if not paths:
        return FALSE
    if any(not lits for lits in paths):
        return TRUE
    disjuncts = [lits[0] if len(lits) == 1 else And(tuple(lits))
                 for lits in paths]
    return disjuncts[0] if len(disjuncts) == 1 else Or(tuple(disjuncts))


def tree_size(t: Tree) -> int:
    if isinstance(t, Leaf):
        return 1
    return 1 + tree_size(t.left) + tree_size(t.right)


def _entropy(pos: int, neg: int) -> float:
    total = pos + neg
    if not pos or not neg:
        return 0.0
    p, q = pos / total, neg / total
    return -(p * math.log(p) + q * math.log(q))


def gain(attr: LinearConstraint, pos: Sequence, neg: Sequence,
         impl: Sequence = (), penalty: float = 1.0) -> float:
    """Information gain over classified points, minus a penalty of
    ``penalty`` bits per implication cut by the split."""
    lp = sum(1 for p in pos if attr.holds(p))
    ln = sum(1 for p in neg if attr.holds(p))
    rp, rn = len(pos) - lp, len(neg) - ln
    total = len(pos) + len(neg)
    g = _entropy(len(pos), len(neg))
    if total:
        g -= ((lp + ln) * _entropy(lp, ln) + (rp + rn) * _entropy(rp, rn)) / total
    cut = sum(1 for a, b in impl if attr.holds(a) != attr.holds(b))
    return g - penalty * LN2 * cut


def _splits(attr, points) -> bool:
    vals = {attr.holds(p) for p in points}
    return len(vals) == 2


def choose(attrs: Sequence[LinearConstraint], pos, neg, impl=(),
           penalty: float = 1.0) -> LinearConstraint:
    best, best_gain = None, -math.inf
    classified = list(pos) + list(neg)
    for a in attrs:
        if not _splits(a, classified):
            continue
        g = gain(a, pos, neg, impl, penalty)
        if g > best_gain:
            best, best_gain = a, g
    if best is None:
        raise LearnerError("no attribute splits the remaining examples")
    return best


class _Classifier:
    """The global map G with its implication closure."""

    def __init__(self, sample: Sample):
        self.sample = sample
        self.g: dict = {}
        self.succ = defaultdict(list)
        self.pred = defaultdict(list)
        for a, b in sample.impl:
            self.succ[a].append(b)
            self.pred[b].append(a)
        self.close()

    def label(self, p):
        if p in self.sample.pos_set:
            return True
        if p in self.sample.neg_set:
            return False
        return self.g.get(p)

    def mark(self, points, value: bool) -> None:
        for p in points:
            self._set(p, value)
        self.close()

    def _set(self, p, value: bool) -> bool:
        old = self.label(p)
        if old is None:
            self.g[p] = value
            return True
        if old != value:
            raise LearnerError(f"point {p} classified both ways")
        return False

    def close(self) -> None:
        work = [p for p in list(self.succ) + list(self.pred)
                if self.label(p) is not None]
        while work:
            p = work.pop()
            lab = self.label(p)
            nbrs = self.succ[p] if lab else self.pred[p]
            for q in nbrs:
                if self._set(q, lab):
                    work.append(q)


def construct_tree(sample: Sample, attrs: Sequence[LinearConstraint],
                   penalty: float = 1.0) -> Tree:
    """Decision tree consistent with an attribute-sufficient sample."""
    G = _Classifier(sample)
    endpoints = {p for pair in sample.impl for p in pair}
    unclass = [p for p in sample.points()
               if p in endpoints and p not in sample.pos_set
               and p not in sample.neg_set]
    impl = sample.impl

    def build(pos, neg, unc, avail):
        still = []
        for p in unc:
            lab = G.label(p)
            if lab is True:
                pos.append(p)
            elif lab is False:
                neg.append(p)
            else:
                still.append(p)
        if not neg:
            G.mark(still, True)
            return Leaf(True)
        if not pos:
            G.mark(still, False)
            return Leaf(False)
        here = set(pos) | set(neg) | set(still)
        local = [(a, b) for a, b in impl if a in here and b in here]
        a = choose(avail, pos, neg, local, penalty)
        rest = [x for x in avail if x != a]
        left = build([p for p in pos if a.holds(p)], [p for p in neg if a.holds(p)],
                     [p for p in still if a.holds(p)], rest)
        right = build([p for p in pos if not a.holds(p)],
                      [p for p in neg if not a.holds(p)],
                      [p for p in still if not a.holds(p)], rest)
        return Inner(a, left, right)

    return build(list(sample.pos), list(sample.neg), unclass, list(attrs))


def is_consistent_tree(t: Tree, sample: Sample) -> bool:
    if not all(route(t, p) for p in sample.pos):
        return False
    if any(route(t, n) for n in sample.neg):
        return False
    return not any(route(t, a) and not route(t, b) for a, b in sample.impl)


# ---------------------------------------------------------------------------
# The learner


class Learner:
    """Learn(S) with a cached attribute pool regenerated from a separator only
    when the previous pool stops being sufficient."""

    def __init__(self, sys: TranSys, domain: str = "poly",
                 separator: str = "incremental", penalty: float = 1.0,
                 use_initial_attributes: bool = True,
                 template_bound: int | None = None,
                 trace: Trace | None = None):
        self.sys = sys
        self.domain = domain
        self.penalty = penalty
        self.trace = trace
        self.builder = SeparatorBuilder(domain, separator, trace)
        self.initial = initial_attributes(sys) if use_initial_attributes else []
        self.template_bound = template_bound
        if template_bound is not None:
            self.pool = dedup_attributes(
                self.initial + octagon_templates(sys.n, template_bound))
        else:
            self.pool = list(self.initial)
        self.last_separator: list = []
        self.separator_history: list[list] = []
        self.regenerations = 0
        self.step = 0
        self.last_tree: Tree | None = None

    @property
    def stats(self):
        return self.builder.stats

    def seed(self, sample: Sample) -> list:
        d = domains.from_conjunction(self.sys.init, self.sys.n, self.domain)
        if d is None or any(d.contains(n) for n in sample.neg):
            return []
        return [d]

    def generate_attributes(self, sample: Sample) -> list[LinearConstraint]:
        sep = self.builder(sample, self.seed(sample))
        self.last_separator = sep
        self.separator_history.append(sep)
        cons = [c for d in sep for c in d.constraints()]
        return dedup_attributes(cons + self.initial)

    def _grow_templates(self, sample: Sample) -> None:
        while not sufficient(self.pool, sample)[0]:
            self.template_bound += 1
            self.pool = dedup_attributes(
                self.initial + octagon_templates(self.sys.n, self.template_bound))

    def learn(self, sample: Sample) -> Formula:
        self.step += 1
        ok, extended = sufficient(self.pool, sample)
        if not ok:
            self.regenerations += 1
            if self.template_bound is not None:
                self._grow_templates(sample)
            else:
                self.pool = self.generate_attributes(sample)
            ok, extended = sufficient(self.pool, sample)
            if not ok:
                raise LearnerError("generated attributes are not sufficient")
            if self.trace:
                self.trace("ATTRS", self.step, str(len(self.pool)))
        tree = construct_tree(extended, self.pool, self.penalty)
        self.last_tree = tree
        return tree_to_formula(tree)
