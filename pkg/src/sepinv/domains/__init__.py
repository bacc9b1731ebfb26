"""Numerical abstract domains: intervals, octagons and polyhedra.

All three element kinds share the method names ``join``, ``contains``,
``leq`` and ``constraints``; the functions below dispatch on a domain tag.
"""

from __future__ import annotations

from ..model import DimensionError, Formula, LinearConstraint, conjunct_atoms
from .interval import IntervalElem
from .octagon import OctagonElem
from .polyhedra import PolyElem

DOMAINS = {"int": IntervalElem, "oct": OctagonElem, "poly": PolyElem}

AbstractElement = IntervalElem | OctagonElem | PolyElem


def domain_class(domain: str):
    try:
        return DOMAINS[domain]
    except KeyError:
        raise ValueError(f"unknown domain {domain!r}; expected one of "
                         f"{', '.join(DOMAINS)}") from None


def singleton(s, domain: str):
    return domain_class(domain).singleton(tuple(s))


def from_conjunction(f: Formula, n: int, domain: str):
    """The element denoted by a conjunction of atoms, or None if ``f`` is not
    such a conjunction, is not representable, or is empty."""
    cs = conjunct_atoms(f)
    if cs is None:
        return None
    if any(c.dim != n for c in cs):
        raise DimensionError("formula dimension does not match")
    return domain_class(domain).from_constraints(cs, n)


def _same(d1, d2):
    if d1.tag != d2.tag:
        raise TypeError(f"cannot combine {d1.tag} and {d2.tag} elements")


def join(d1, d2):
    _same(d1, d2)
    return d1.join(d2)


def member(p, d) -> bool:
    return d.contains(tuple(p))


def leq(d1, d2) -> bool:
    _same(d1, d2)
    return d1.leq(d2)


def constraints(d) -> list[LinearConstraint]:
    return d.constraints()


__all__ = ["AbstractElement", "DOMAINS", "IntervalElem", "OctagonElem",
           "PolyElem", "constraints", "domain_class", "from_conjunction",
           "join", "leq", "member", "singleton"]
