"""Teachers: decide whether a candidate is an inductive invariant.

A candidate ``J`` must satisfy ``Init => J``, ``J => Good`` and
``J /\\ T => J'``.  The first violated condition yields a positive, negative
or implication counterexample respectively.
"""

from __future__ import annotations

import itertools
import logging
import os
import selectors
import shlex
import subprocess
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .frontend import ParseError, parse_model, print_smt2, smt_symbols
from .model import (And, Atom, Formula, Implication, LinearConstraint,
                    Negative, Not, Or, Positive, Rel, TranSys, eval_formula,
                    to_nnf)

log = logging.getLogger(__name__)


class TeacherError(RuntimeError):
    """The teacher could not decide (solver failure, timeout, bad model)."""


class ScriptMismatch(TeacherError):
    """A scripted counterexample does not refute the current candidate."""


@dataclass(frozen=True)
class Valid:
    bounded: bool = False


@dataclass(frozen=True)
class Cex:
    cex: Positive | Negative | Implication


Verdict = Valid | Cex


def is_genuine(sys: TranSys, J: Formula, cex) -> bool:
    """Does ``cex`` witness a violation of one of the three conditions?"""
    if isinstance(cex, Positive):
        return sys.is_init(cex.state) and not eval_formula(J, cex.state)
    if isinstance(cex, Negative):
        return eval_formula(J, cex.state) and not sys.is_good(cex.state)
    if isinstance(cex, Implication):
        return (eval_formula(J, cex.src) and sys.step(cex.src, cex.dst)
                and not eval_formula(J, cex.dst))
    return False


# ---------------------------------------------------------------------------
# Bounded enumeration


class _Vec:
    """Vectorized evaluation of formulas over a matrix of states."""

    def __init__(self, bound_hint: int):
        self.bound_hint = bound_hint

    def atom(self, c: LinearConstraint, X: np.ndarray) -> np.ndarray:
        lhs = X @ np.asarray(c.coeffs, dtype=X.dtype)
        return lhs == c.bound if c.rel is Rel.EQ else lhs <= c.bound

    def __call__(self, f: Formula, X: np.ndarray) -> np.ndarray:
        if isinstance(f, Atom):
            return self.atom(f.constraint, X)
        if isinstance(f, And):
            out = np.ones(len(X), dtype=bool)
            for a in f.args:
                out &= self(a, X)
            return out
        if isinstance(f, Or):
            out = np.zeros(len(X), dtype=bool)
            for a in f.args:
                out |= self(a, X)
            return out
        if isinstance(f, Not):
            return ~self(f.arg, X)
        raise TypeError(f"not a formula: {f!r}")


def _dnf(f: Formula) -> list[list[LinearConstraint]]:
    f = to_nnf(f)
    if isinstance(f, Atom):
        return [[f.constraint]]
    if isinstance(f, Or):
        return [c for a in f.args for c in _dnf(a)]
    if isinstance(f, And):
        out: list[list] = [[]]
        for a in f.args:
            out = [x + y for x in out for y in _dnf(a)]
        return out
    raise TypeError(f"unexpected formula in NNF: {f!r}")


def _updates(cube: list[LinearConstraint], n: int):
    """Split a cube over V ∪ V' into functional updates ``x'_j = e(V)`` and
    the remaining guard atoms."""
    upd: dict[int, LinearConstraint] = {}
    rest = []
    for c in cube:
        primed = [j for j in range(n) if c.coeffs[n + j]]
        if (c.rel is Rel.EQ and len(primed) == 1 and primed[0] not in upd
                and abs(c.coeffs[n + primed[0]]) == 1):
            upd[primed[0]] = c
        else:
            rest.append(c)
    return upd, rest


def _fits_int64(fs: Sequence[Formula], width: int, bound: int) -> bool:
    from .model import atoms
    limit = 2 ** 62
    for f in fs:
        for c in atoms(f):
            if sum(abs(a) for a in c.coeffs) * (bound + 1) * 4 + abs(c.bound) > limit:
                return False
    return True


class BuiltinTeacher:
    """Exhaustive check over the box ``[-B, B]^n``.

    ``Valid`` from this teacher only means that no witness exists inside the
    box; the verdict carries ``bounded=True``.
    """

    def __init__(self, sys: TranSys, bound: int = 16, chunk: int = 1 << 18):
        if bound < 1:
            raise ValueError("bound must be at least 1")
        self.sys = sys
        self.bound = bound
        self.chunk = chunk
        self.cubes = [_updates(c, sys.n) for c in _dnf(sys.trans)]
        self._box = None

    def box(self) -> np.ndarray:
        if self._box is None:
            b, n = self.bound, self.sys.n
            axis = np.arange(-b, b + 1, dtype=np.int64)
            grids = np.meshgrid(*([axis] * n), indexing="ij")
            self._box = np.stack([g.ravel() for g in grids], axis=1)
        return self._box

    def _dtype(self, J):
        ok = _fits_int64([J, self.sys.init, self.sys.good, self.sys.trans],
                         2 * self.sys.n, self.bound * 4)
        return np.int64 if ok else object

    def check(self, J: Formula) -> Verdict:
        sys = self.sys
        X = self.box()
        dt = self._dtype(J)
        if dt is object:
            X = X.astype(object)
        ev = _Vec(self.bound)
        inJ = ev(J, X)
        bad = ev(sys.init, X) & ~inJ
        if bad.any():
            return Cex(Positive(tuple(int(v) for v in X[np.argmax(bad)])))
        bad = inJ & ~ev(sys.good, X)
        if bad.any():
            return Cex(Negative(tuple(int(v) for v in X[np.argmax(bad)])))
        best = None
        for row in self._implications(J, X[inJ], ev):
            if best is None or row < best:
                best = row
        if best is not None:
            n = sys.n
            return Cex(Implication(best[:n], best[n:]))
        return Valid(bounded=True)

    def _implications(self, J, S: np.ndarray, ev: _Vec):
        """Yield the lexicographically least ``s + s'`` per transition cube."""
        n = self.sys.n
        b = self.bound
        if len(S) == 0:
            return
        for upd, rest in self.cubes:
            free = [j for j in range(n) if j not in upd]
            choices = list(itertools.product(range(-b, b + 1), repeat=len(free)))
            step = max(1, self.chunk // max(1, len(choices)))
            for lo in range(0, len(S), step):
                part = S[lo:lo + step]
                m = len(part)
                if free:
                    F = np.asarray(choices, dtype=part.dtype)
                    pre = np.repeat(part, len(F), axis=0)
                    post = np.zeros((m * len(F), n), dtype=part.dtype)
                    post[:, free] = np.tile(F, (m, 1))
                else:
                    pre = part
                    post = np.zeros((m, n), dtype=part.dtype)
                ok = np.ones(len(pre), dtype=bool)
                for j, c in sorted(upd.items()):
                    a = c.coeffs[n + j]
                    other = np.asarray(c.coeffs[:n], dtype=part.dtype)
                    # a*x'_j + other.x = bound, with |a| = 1
                    post[:, j] = (c.bound - pre @ other) * a
                XX = np.concatenate([pre, post], axis=1)
                for c in rest:
                    ok &= ev.atom(c, XX)
                if not ok.any():
                    continue
                ok &= ~ev(J, post)
                if ok.any():
                    rows = XX[ok]
                    order = np.lexsort(rows.T[::-1])
                    yield tuple(int(v) for v in rows[order[0]])
                    break  # chunks come in lexicographic order of s

    def close(self):
        pass


def builtin_check(sys: TranSys, J: Formula, bound: int) -> Verdict:
    return BuiltinTeacher(sys, bound).check(J)


# ---------------------------------------------------------------------------
# SMT-LIB2 session


def query_texts(sys: TranSys, J: Formula) -> list[str]:
    """Assertions of the three satisfiability queries, in check order."""
    plain, primed = smt_symbols(sys.vars)
    j_now = print_smt2(J, plain)
    j_next = print_smt2(J, primed)
    init = print_smt2(sys.init, plain)
    good = print_smt2(sys.good, plain)
    trans = print_smt2(sys.trans, plain + primed)
    return [
        f"(assert {init})\n(assert (not {j_now}))",
        f"(assert {j_now})\n(assert (not {good}))",
        f"(assert {j_now})\n(assert {trans})\n(assert (not {j_next}))",
    ]


class SmtSession:
    """A long-lived SMT solver process spoken to over stdin/stdout."""

    def __init__(self, command: str | Sequence[str], timeout: float = 10.0):
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        if not argv:
            raise TeacherError("empty solver command")
        self.timeout = timeout
        try:
            self.proc = subprocess.Popen(
                argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL, bufsize=0)
        except OSError as e:
            raise TeacherError(f"cannot start solver {argv[0]!r}: {e}") from e
        self._buf = b""
        self._sel = selectors.DefaultSelector()
        self._sel.register(self.proc.stdout, selectors.EVENT_READ)
        self.send("(set-option :print-success false)")
        self.send("(set-logic LIA)")

    def send(self, text: str) -> None:
        if self.proc.poll() is not None:
            raise TeacherError("solver process exited")
        try:
            self.proc.stdin.write(text.encode("utf-8") + b"\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError) as e:
            raise TeacherError(f"solver pipe closed: {e}") from e

    def _fill(self, deadline: float) -> None:
        left = deadline - time.monotonic()
        if left <= 0 or not self._sel.select(left):
            self.kill()
            raise TeacherError("solver timeout")
        chunk = os.read(self.proc.stdout.fileno(), 65536)
        if not chunk:
            raise TeacherError("solver closed its output")
        self._buf += chunk

    def read_line(self, deadline: float) -> str:
        while True:
            line, sep, rest = self._buf.partition(b"\n")
            if sep and line.strip():
                self._buf = rest
                return line.decode("utf-8").strip()
            if sep:
                self._buf = rest
                continue
            self._fill(deadline)

    def read_sexpr(self, deadline: float) -> str:
        while True:
            depth, started = 0, False
            for i, ch in enumerate(self._buf):
                if ch == ord("("):
                    depth += 1
                    started = True
                elif ch == ord(")"):
                    depth -= 1
                    if started and depth == 0:
                        text = self._buf[:i + 1]
                        self._buf = self._buf[i + 1:]
                        return text.decode("utf-8")
            self._fill(deadline)

    def check_sat(self, assertions: str, decls: str) -> str | None:
        """Run one scoped query; returns the model text or None if unsat."""
        deadline = time.monotonic() + self.timeout
        self.send("(push 1)")
        self.send(decls)
        self.send(assertions)
        self.send("(check-sat)")
        answer = self.read_line(deadline)
        if answer.startswith("(error"):
            raise TeacherError(f"solver error: {answer}")
        model = None
        if answer == "sat":
            self.send("(get-model)")
            model = self.read_sexpr(deadline)
        elif answer != "unsat":
            raise TeacherError(f"solver answered {answer!r}")
        self.send("(pop 1)")
        return model

    def kill(self) -> None:
        if self.proc.poll() is None:
            self.proc.kill()
        self.proc.wait()

    def close(self) -> None:
        if self.proc.poll() is None:
            try:
                self.send("(exit)")
                self.proc.stdin.close()
                self.proc.wait(timeout=2)
            except (TeacherError, subprocess.TimeoutExpired, OSError):
                self.kill()
        self._sel.close()


class SmtTeacher:
    def __init__(self, sys: TranSys, command: str | Sequence[str],
                 timeout: float = 10.0):
        self.sys = sys
        self.session = SmtSession(command, timeout)
        plain, primed = smt_symbols(sys.vars)
        self.decls = "\n".join(f"(declare-const {v} Int)" for v in plain + primed)

    def check(self, J: Formula) -> Verdict:
        return check_inductive(self.sys, J, self)

    def close(self):
        self.session.close()


def check_inductive(sys: TranSys, J: Formula, teacher: SmtTeacher) -> Verdict:
    """Issue the three queries in order and return the first counterexample."""
    names = list(sys.vars)
    primed = [v + "!p" for v in sys.vars]
    for kind, text in enumerate(query_texts(sys, J)):
        model = teacher.session.check_sat(text, teacher.decls)
        if model is None:
            continue
        try:
            s = parse_model(model, names)
            if kind == 0:
                cex = Positive(s)
            elif kind == 1:
                cex = Negative(s)
            else:
                cex = Implication(s, parse_model(model, primed))
        except ParseError as e:
            raise TeacherError(f"malformed model: {e}") from e
        if not is_genuine(sys, J, cex):
            raise TeacherError(f"solver model is not a counterexample: {cex}")
        return Cex(cex)
    return Valid()


# ---------------------------------------------------------------------------
# Scripted replay


class ScriptedTeacher:
    """Answers with a fixed list of counterexamples, then defers to a
    fallback teacher (bounded enumeration by default)."""

    def __init__(self, sys: TranSys, script: Sequence, fallback=None):
        self.sys = sys
        self.script = list(script)
        self.used = 0
        self.fallback = fallback if fallback is not None else BuiltinTeacher(sys)

    def check(self, J: Formula) -> Verdict:
        if self.used < len(self.script):
            cex = self.script[self.used]
            if not is_genuine(self.sys, J, cex):
                raise ScriptMismatch(
                    f"scripted counterexample #{self.used} {cex} does not "
                    f"refute the candidate")
            self.used += 1
            return Cex(cex)
        return self.fallback.check(J)

    def close(self):
        self.fallback.close()


def make_teacher(spec: str, sys: TranSys, query_timeout: float = 10.0):
    """Build a teacher from ``builtin:<B>`` or ``smt:<command>``."""
    kind, _, arg = spec.partition(":")
    if kind == "builtin":
        try:
            bound = int(arg) if arg else 16
        except ValueError:
            raise ValueError(f"bad builtin bound {arg!r}") from None
        return BuiltinTeacher(sys, bound)
    if kind == "smt":
        if not arg.strip():
            raise ValueError("smt teacher needs a command, e.g. smt:'z3 -in'")
        return SmtTeacher(sys, arg, query_timeout)
    raise ValueError(f"unknown teacher {spec!r}; use builtin:<B> or smt:<cmd>")
