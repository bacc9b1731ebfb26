"""Join-maximal separators of ICE samples.

A separator is a list of abstract elements (all from one domain) covering the
positive states, excluding the negative ones and closed under implications.
Three constructions are provided: the basic fixpoint, an incremental variant
that keeps a stack of partial separators across calls, and a refined variant
whose nodes remember the joins that produced them so that backtracking can
jump over several layers at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from . import domains
from .model import Sample

Trace = Callable[[str, int, str], None]


@dataclass
class SeparatorStats:
    joins: int = 0
    pops: int = 0
    calls: int = 0


def _excludes(d, negs: Iterable) -> bool:
    return not any(d.contains(n) for n in negs)


def _covered(p, elems) -> bool:
    return any(d.contains(p) for d in elems)


def _unique(elems: list) -> list:
    return list(dict.fromkeys(elems))


# ---------------------------------------------------------------------------
# Definitions used as test oracles


def is_separator(sep: Sequence, sample: Sample) -> bool:
    if not all(_covered(p, sep) for p in sample.pos):
        return False
    if not all(_excludes(d, sample.neg) for d in sep):
        return False
    return all(_covered(q, sep) for p, q in sample.impl if _covered(p, sep))


def is_partial_separator(sep: Sequence, sample: Sample) -> bool:
    return all(_excludes(d, sample.neg) for d in sep)


def is_join_maximal(sep: Sequence, sample: Sample) -> bool:
    for i, a in enumerate(sep):
        for b in sep[i + 1:]:
            if a != b and _excludes(a.join(b), sample.neg):
                return False
    return True


# ---------------------------------------------------------------------------
# Basic construction


def _close_implications(elems: list, sample: Sample, domain: str) -> list:
    changed = True
    while changed:
        changed = False
        for p, q in sample.impl:
            if _covered(p, elems) and not _covered(q, elems):
                elems.append(domains.singleton(q, domain))
                changed = True
    return elems


def construct_separator(sample: Sample, domain: str, seed: Sequence = (),
                        stats: SeparatorStats | None = None,
                        trace: Trace | None = None) -> list:
    """Join-maximal separator, starting from ``seed`` plus one singleton per
    positive state.  Pairs are scanned in order and the scan restarts after
    every successful join."""
    stats = stats if stats is not None else SeparatorStats()
    stats.calls += 1
    negs = sample.neg
    for d in seed:
        if not _excludes(d, negs):
            raise ValueError("seed element contains a negative state")
    elems = _unique(list(seed) + [domains.singleton(p, domain)
                                  for p in sample.pos])
    _close_implications(elems, sample, domain)
    failed: set = set()
    while True:
        found = None
        for i in range(len(elems)):
            for j in range(i + 1, len(elems)):
                a, b = elems[i], elems[j]
                if (a, b) in failed:
                    continue
                stats.joins += 1
                o = a.join(b)
                if _excludes(o, negs):
                    found = (i, j, o)
                    break
                failed.add((a, b))
            if found:
                break
        if found is None:
            break
        i, j, o = found
        if trace:
            trace("JOIN", stats.calls, f"{i}+{j}")
        elems[i] = o
        del elems[j]
        elems = _unique(elems)
        _close_implications(elems, sample, domain)
    return elems


# ---------------------------------------------------------------------------
# Incremental constructions


@dataclass(eq=False)
class Node:
    obj: object
    index: int
    parents: tuple = ()


@dataclass
class SeparatorStack:
    """History of partial separators, bottom layer empty with index 0."""

    layers: list = field(default_factory=lambda: [((), 0)])
    step: int = 0
    stats: SeparatorStats = field(default_factory=SeparatorStats)

    def head(self) -> tuple:
        return self.layers[-1]

    def pop(self):
        self.stats.pops += 1
        return self.layers.pop()

    def separators(self) -> list[list]:
        return [[n.obj for n in forest] for forest, _ in self.layers]


def _offending(forest, negs):
    for node in forest:
        for n in negs:
            if node.obj.contains(n):
                return node, n
    return None


def _backtrack_plain(stack: SeparatorStack, negs, trace) -> None:
    while len(stack.layers) > 1 and _offending(stack.head()[0], negs):
        stack.pop()
        if trace:
            trace("POP", stack.step, str(len(stack.layers)))


def _backtrack_refined(stack: SeparatorStack, negs, trace) -> None:
    while len(stack.layers) > 1:
        hit = _offending(stack.head()[0], negs)
        if hit is None:
            return
        tmp, n = hit
        while True:
            nxt = next((par for par in tmp.parents if par.obj.contains(n)), None)
            if nxt is None:
                break
            tmp = nxt
        while len(stack.layers) > 1 and stack.head()[1] >= tmp.index:
            stack.pop()
            if trace:
                trace("POP", stack.step, str(len(stack.layers)))


def _expand(stack: SeparatorStack, sample: Sample, domain: str,
            seed: Sequence, trace) -> list[Node]:
    i = stack.step
    negs = sample.neg
    forest = list(stack.head()[0])
    objs = lambda: [nd.obj for nd in forest]  # noqa: E731

    def absorb(item, is_point: bool):
        obj = domains.singleton(item, domain) if is_point else item
        for k, nd in enumerate(forest):
            stack.stats.joins += 1
            o = nd.obj.join(obj)
            if _excludes(o, negs):
                forest[k] = Node(o, i, (nd, Node(obj, i)))
                if trace:
                    trace("JOIN", i, str(k))
                return o
        forest.append(Node(obj, i))
        if trace:
            trace("EXPAND", i, str(len(forest) - 1))
        return obj

    for d in seed:
        if _excludes(d, negs) and not any(d.leq(o) for o in objs()):
            absorb(d, False)

    current = objs()
    todo = [p for p in sample.pos if not _covered(p, current)]
    todo += [q for p, q in sample.impl
             if _covered(p, current) and not _covered(q, current)]
    todo = list(dict.fromkeys(todo))
    while todo:
        s = todo.pop(0)
        if _covered(s, objs()):
            continue  # an earlier join already swallowed it
        region = absorb(s, True)
        for p, q in sample.impl:
            if (region.contains(p) and not _covered(q, objs())
                    and q not in todo):
                todo.append(q)
    return forest


def _construct_inc(sample, domain, stack, seed, refined, trace) -> list:
    stack.step += 1
    stack.stats.calls += 1
    if refined:
        _backtrack_refined(stack, sample.neg, trace)
    else:
        _backtrack_plain(stack, sample.neg, trace)
    forest = _expand(stack, sample, domain, seed, trace)
    stack.layers.append((tuple(forest), stack.step))
    return _unique([nd.obj for nd in forest])


def construct_separator_inc(sample: Sample, domain: str, stack: SeparatorStack,
                            seed: Sequence = (),
                            trace: Trace | None = None) -> list:
    return _construct_inc(sample, domain, stack, seed, False, trace)


def construct_separator_refined(sample: Sample, domain: str,
                                stack: SeparatorStack, seed: Sequence = (),
                                trace: Trace | None = None) -> list:
    return _construct_inc(sample, domain, stack, seed, True, trace)


class SeparatorBuilder:
    """Runs one separator variant across the iterations of a single run."""

    VARIANTS = ("basic", "incremental", "refined")

    def __init__(self, domain: str, variant: str = "incremental",
                 trace: Trace | None = None):
        if variant not in self.VARIANTS:
            raise ValueError(f"unknown separator variant {variant!r}")
        domains.domain_class(domain)
        self.domain = domain
        self.variant = variant
        self.trace = trace
        self.stack = SeparatorStack()

    @property
    def stats(self) -> SeparatorStats:
        return self.stack.stats

    def __call__(self, sample: Sample, seed: Sequence = ()) -> list:
        if self.variant == "basic":
            return construct_separator(sample, self.domain, seed,
                                       self.stack.stats, self.trace)
        return _construct_inc(sample, self.domain, self.stack, seed,
                              self.variant == "refined", self.trace)
