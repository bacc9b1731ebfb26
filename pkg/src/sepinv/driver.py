"""The ICE main loop: learn a candidate, ask the teacher, extend the sample."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable

from .learner import Learner, LearnerError
from .model import (Contradiction, Formula, Implication, Negative, Positive,
                    Sample, TranSys, add_counterexample)
from .teacher import Cex, TeacherError, Valid, make_teacher

log = logging.getLogger(__name__)


@dataclass
class RunConfig:
    domain: str = "poly"
    separator: str = "incremental"
    teacher: str = "builtin:16"
    max_iterations: int = 500
    budget_secs: float = 300.0
    penalty: float = 1.0
    trace: bool = False
    query_timeout: float = 10.0
    template_bound: int | None = None
    initial_attributes: bool = True

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.budget_secs <= 0:
            raise ValueError("budget must be positive")


@dataclass
class RunStats:
    iterations: int = 0
    pool: int = 0
    joins: int = 0
    pops: int = 0
    regenerations: int = 0
    elapsed: float = 0.0


@dataclass
class RunResult:
    outcome: str  # SAFE | UNSAFE | UNKNOWN
    invariant: Formula | None = None
    witness: tuple | None = None
    reason: str = ""
    bounded: bool = False
    stats: RunStats = field(default_factory=RunStats)
    candidates: list = field(default_factory=list)
    separators: list = field(default_factory=list)


def enrich(sys: TranSys, cex) -> list:
    """The counterexample plus what the specification says about its states:
    initial states are positive and bad states are negative."""
    states = [cex.src, cex.dst] if isinstance(cex, Implication) else [cex.state]
    out = [cex]
    for s in states:
        if sys.is_init(s):
            out.append(Positive(s))
        if not sys.is_good(s):
            out.append(Negative(s))
    return out


def run_verification(sys: TranSys, cfg: RunConfig | None = None, *,
                     teacher=None,
                     trace: Callable[[str, int, str], None] | None = None,
                     learner: Learner | None = None) -> RunResult:
    cfg = cfg or RunConfig()
    if trace is None and cfg.trace:
        trace = _stderr_trace
    start = time.monotonic()
    own_teacher = teacher is None
    if teacher is None:
        teacher = make_teacher(cfg.teacher, sys, cfg.query_timeout)
    if learner is None:
        learner = Learner(sys, cfg.domain, cfg.separator, cfg.penalty,
                          cfg.initial_attributes, cfg.template_bound, trace)
    sample = Sample()
    result = RunResult("UNKNOWN")
    try:
        result = _loop(sys, cfg, teacher, learner, sample, start, trace)
    finally:
        if own_teacher:
            teacher.close()
    st = result.stats
    st.pool = len(learner.pool)
    st.joins = learner.stats.joins
    st.pops = learner.stats.pops
    st.regenerations = learner.regenerations
    st.elapsed = time.monotonic() - start
    result.separators = learner.separator_history
    return result


def _loop(sys, cfg, teacher, learner, sample, start, trace) -> RunResult:
    stats = RunStats()
    candidates = []

    def done(outcome, **kw):
        return RunResult(outcome, stats=stats, candidates=candidates, **kw)

    for it in range(1, cfg.max_iterations + 1):
        if time.monotonic() - start > cfg.budget_secs:
            return done("UNKNOWN", reason="time budget exhausted")
        stats.iterations = it
        try:
            J = learner.learn(sample)
        except LearnerError as e:
            return done("UNKNOWN", reason=f"learner: {e}")
        candidates.append(J)
        try:
            verdict = teacher.check(J)
        except TeacherError as e:
            return done("UNKNOWN", reason=f"teacher: {e}")
        if isinstance(verdict, Valid):
            try:
                again = teacher.check(J)
            except TeacherError as e:
                return done("UNKNOWN", reason=f"teacher: {e}")
            if not isinstance(again, Valid):
                return done("UNKNOWN", reason="re-check of the invariant failed")
            return done("SAFE", invariant=J, bounded=verdict.bounded)
        assert isinstance(verdict, Cex)
        if trace:
            trace("CEX", it, repr(verdict.cex))
        for c in enrich(sys, verdict.cex):
            nxt = add_counterexample(sample, c)
            if isinstance(nxt, Contradiction):
                return done("UNSAFE", witness=nxt.witness)
            sample = nxt
    return done("UNKNOWN", reason="iteration limit reached")


def _stderr_trace(event: str, step: int, payload: str) -> None:
    import sys
    print(f"{event}\t{step}\t{payload}", file=sys.stderr)
