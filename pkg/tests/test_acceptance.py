"""The ten acceptance criteria, each at its stated tolerance.

Every test appends one ``criterion N: PASS|FAIL ...`` line to RESULTS; the
conftest prints them in the terminal summary.  Run this file directly with
``python tests/test_acceptance.py`` to get just those lines.
"""

import csv
import io
import json
import random
import time
from contextlib import redirect_stdout

from oracles import (CORPUS, brute_inductive, in_hull_2d, octagon_template_dbm,
                     polygon_vertices, random_sample)

from sepinv import cli
from sepinv.domains import (IntervalElem, PolyElem, constraints, join, member,
                            singleton)
from sepinv.driver import RunConfig, run_verification
from sepinv.frontend import parse_formula, parse_system
from sepinv.learner import (construct_tree, is_consistent_tree, route,
                            sufficient, tree_to_formula)
from sepinv.model import (Implication, Negative, Positive, Sample, eq,
                          eval_formula, le)
from sepinv.separator import (SeparatorStack, construct_separator,
                              construct_separator_inc,
                              construct_separator_refined, is_join_maximal,
                              is_separator)
from sepinv.teacher import ScriptedTeacher

from conftest import CORPUS_DIR

RESULTS: list[str] = []

EX1_POS = [(1, 1), (1, 4), (3, 1), (5, 1), (5, 4), (6, 1), (6, 4)]
EX1_NEG = [(4, 1), (4, 2), (4, 3), (4, 4)]
EX1_IMPL = [((2, 2), (2, 3)), ((0, 2), (4, 0))]

EX4_SCRIPT = [
    Negative((5, 1, 0)),
    Positive((2, 0, 0)),
    Implication((0, 0, 1), (2, 1, 1)),
    Implication((2, 0, 1), (4, 1, 1)),
    Implication((2, 0, 0), (6, 0, 0)),
    Negative((0, -2, 0)),
    Implication((3, 0, 1), (5, 1, 1)),
]


def report(n: int, ok: bool, detail: str = "") -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
    RESULTS.append(line)
    print(line)


def fig5_system():
    return parse_system((CORPUS_DIR / "fig5.ts").read_text())


def ex4_run(separator: str):
    system = fig5_system()
    cfg = RunConfig(domain="poly", separator=separator, initial_attributes=False)
    return run_verification(system, cfg,
                            teacher=ScriptedTeacher(system, EX4_SCRIPT))


# ---------------------------------------------------------------------------


def test_criterion_1_point_constraints():
    expected = {
        "int": {le((1, 0), 1), le((-1, 0), -1), le((0, 1), 2), le((0, -1), -2)},
        "oct": {le((1, 0), 1), le((-1, 0), -1), le((0, 1), 2), le((0, -1), -2),
                le((-1, 1), 1), le((1, -1), -1), le((1, 1), 3), le((-1, -1), -3)},
        "poly": {eq((1, 0), 1), eq((0, 1), 2)},
    }
    got, elapsed = {}, {}
    for dom in expected:
        constraints(singleton((1, 2), dom))  # warm caches
        t0 = time.perf_counter()
        got[dom] = set(constraints(singleton((1, 2), dom)))
        elapsed[dom] = time.perf_counter() - t0
    ok = got == expected and max(elapsed.values()) < 1e-3
    report(1, ok, ", ".join(f"{d} {elapsed[d] * 1e6:.0f}us" for d in elapsed))
    assert got == expected
    assert max(elapsed.values()) < 1e-3


def test_criterion_2_fig1_separators():
    sample = Sample(EX1_POS, EX1_NEG, EX1_IMPL)
    t0 = time.perf_counter()
    box = construct_separator(sample, "int")
    oct_sep = construct_separator(sample, "oct")
    poly = construct_separator(sample, "poly")
    elapsed = time.perf_counter() - t0

    int_ok = (set(box) == {IntervalElem((1, 1), (3, 4)),
                           IntervalElem((5, 1), (6, 4))})
    left_oct = next(d for d in oct_sep if d.contains((1, 1)))
    region = PolyElem.from_constraints(left_oct.constraints(), 2)
    oct_vertices = set(region.points)
    oct_ok = oct_vertices == {(1, 1), (1, 4), (3, 2), (3, 1)}
    left_poly = next(d for d in poly if d.contains((1, 1)))
    hull = PolyElem.from_generators(2, [(1, 1), (1, 4), (2, 3), (3, 1)])
    poly_ok = left_poly == hull and set(left_poly.points) == polygon_vertices(
        [(1, 1), (1, 4), (2, 3), (3, 1)])
    ok = int_ok and oct_ok and poly_ok and len(box) == 2 and elapsed < 0.1
    report(2, ok, f"int={int_ok} oct={oct_ok} poly={poly_ok} {elapsed * 1e3:.1f}ms")
    assert int_ok and len(box) == 2
    assert oct_ok
    assert poly_ok
    assert elapsed < 0.1


def test_criterion_3_example4_replay():
    t0 = time.perf_counter()
    res = ex4_run("basic")
    elapsed = time.perf_counter() - t0
    names = ["j", "k", "t"]

    def cset(text):
        f = parse_formula(text, names)
        from sepinv.model import conjunct_atoms
        return frozenset(conjunct_atoms(f))

    expected = [
        [cset("(and (= j 2) (= k 0))")],
        [cset("(and (= (+ (* 2 k) 2) j) (<= j 4) (>= j 2))")],
        [cset("(and (<= (+ j (* 2 k)) 6) (>= k 0) (>= j (+ (* 2 k) 2)))")],
        [cset("(and (= (+ (* 2 k) 2) j) (<= j 4) (>= j 2))"),
         cset("(and (= j 6) (= t 0) (= k 0))")],
    ]
    got = [[frozenset(d.constraints()) for d in sep] for sep in res.separators]
    ok = got == expected and elapsed < 1.0
    report(3, ok, f"{len(got)} separators, outcome {res.outcome}, {elapsed * 1e3:.0f}ms")
    assert got == expected
    assert elapsed < 1.0


def test_criterion_4_example1_tree():
    sample = Sample(EX1_POS, EX1_NEG, EX1_IMPL)
    attrs = [le((-1, 0), -1), le((1, 0), 3), le((0, -1), -1), le((0, 1), 4),
             le((-1, 0), -5), le((1, 0), 6)]
    t0 = time.perf_counter()
    ok_suff, extended = sufficient(attrs, sample)
    tree = construct_tree(extended, attrs)
    formula = tree_to_formula(tree)
    elapsed = time.perf_counter() - t0

    def paper(x, y):
        return x >= 5 or (x < 5 and x <= 3) or (x < 5 and x > 3 and y < 1)

    grid = [(x, y) for x in range(-1, 8) for y in range(-1, 6)]
    agree = all(eval_formula(formula, p) == paper(*p) for p in grid)
    consistent = is_consistent_tree(tree, sample)
    ok = ok_suff and agree and consistent and elapsed < 0.1
    report(4, ok, f"grid agreement={agree} consistent={consistent} "
                  f"{elapsed * 1e3:.1f}ms")
    assert ok_suff and agree and consistent
    assert elapsed < 0.1


def test_criterion_5_fig5_end_to_end():
    system = fig5_system()
    t0 = time.perf_counter()
    res = run_verification(system, RunConfig(domain="poly", teacher="builtin:8"))
    elapsed = time.perf_counter() - t0
    safe = res.outcome == "SAFE" and res.stats.iterations <= 500
    bad = None
    if safe:
        bad = brute_inductive(CORPUS["fig5.ts"],
                              lambda s: eval_formula(res.invariant, s), 8)
    ok = safe and bad is None and elapsed < 120
    report(5, ok, f"{res.outcome} after {res.stats.iterations} iterations, "
                  f"{elapsed:.2f}s, brute-force {'ok' if bad is None else bad}")
    assert safe
    assert bad is None
    assert elapsed < 120


def test_criterion_6_domain_oracles():
    rng = random.Random(6)
    t0 = time.perf_counter()
    mism = 0
    for _ in range(200):
        a = [tuple(rng.randint(-8, 8) for _ in range(3)) for _ in range(rng.randint(1, 4))]
        b = [tuple(rng.randint(-8, 8) for _ in range(3)) for _ in range(rng.randint(1, 4))]
        d1 = _fold(a, "oct")
        d2 = _fold(b, "oct")
        if join(d1, d2).m != octagon_template_dbm(a + b, 3):
            mism += 1
    for _ in range(500):
        pts = [(rng.randint(-8, 8), rng.randint(-8, 8)) for _ in range(rng.randint(1, 6))]
        q = (rng.randint(-8, 8), rng.randint(-8, 8))
        if member(q, _fold(pts, "poly")) != in_hull_2d(q, pts):
            mism += 1
    for _ in range(500):
        n = rng.randint(1, 4)
        boxes = []
        for _ in range(2):
            lo, hi = [], []
            for _ in range(n):
                x, y = sorted(rng.randint(-8, 8) for _ in range(2))
                lo.append(None if rng.random() < 0.1 else x)
                hi.append(None if rng.random() < 0.1 else y)
            boxes.append(IntervalElem(tuple(lo), tuple(hi)))
        got = join(*boxes)
        lo = tuple(None if a is None or b is None else min(a, b)
                   for a, b in zip(boxes[0].lo, boxes[1].lo))
        hi = tuple(None if a is None or b is None else max(a, b)
                   for a, b in zip(boxes[0].hi, boxes[1].hi))
        if (got.lo, got.hi) != (lo, hi):
            mism += 1
    elapsed = time.perf_counter() - t0
    ok = mism == 0 and elapsed < 10
    report(6, ok, f"{mism} mismatches, {elapsed:.2f}s")
    assert mism == 0
    assert elapsed < 10


def _fold(points, dom):
    d = singleton(points[0], dom)
    for p in points[1:]:
        d = join(d, singleton(p, dom))
    return d


def _sample_of(events):
    from sepinv.model import add_counterexample
    s = Sample()
    for kind, x in events:
        cex = {"pos": Positive, "neg": Negative}.get(kind)
        s = add_counterexample(s, cex(x) if cex else Implication(*x))
        assert isinstance(s, Sample)
    return s


def test_criterion_7_separator_properties():
    rng = random.Random(7)
    t0 = time.perf_counter()
    violations = 0
    runs = 0
    for dom in ("int", "oct", "poly"):
        for k in range(200):
            n = (2, 3, 4)[k % 3]
            events = random_sample(rng, n)
            full = _sample_of(events)
            sep = construct_separator(full, dom)
            runs += 1
            if not (is_separator(sep, full) and is_join_maximal(sep, full)):
                violations += 1
            stacks = {"inc": SeparatorStack(), "ref": SeparatorStack()}
            cuts = sorted({len(events)} | {rng.randint(1, len(events)) for _ in range(3)})
            for c in cuts:
                part = _sample_of(events[:c])
                for name, stack in stacks.items():
                    fn = (construct_separator_inc if name == "inc"
                          else construct_separator_refined)
                    s = fn(part, dom, stack)
                    if not is_separator(s, part):
                        violations += 1
                    for layer in stack.separators():
                        if any(d.contains(q) for d in layer for q in part.neg):
                            violations += 1
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 60
    report(7, ok, f"{runs} samples, {violations} violations, {elapsed:.1f}s")
    assert violations == 0
    assert elapsed < 60


def test_criterion_8_tree_consistency():
    rng = random.Random(8)
    violations = 0
    for k in range(200):
        dom = ("int", "oct", "poly")[k % 3]
        sample = _sample_of(random_sample(rng, (2, 3, 4)[k % 3]))
        pool = [c for d in construct_separator(sample, dom) for c in d.constraints()]
        ok, extended = sufficient(pool, sample)
        if not ok:
            violations += 1
            continue
        tree = construct_tree(extended, pool)
        if not is_consistent_tree(tree, sample):
            violations += 1
        f = tree_to_formula(tree)
        if any(eval_formula(f, p) != route(tree, p) for p in extended.points()):
            violations += 1
    report(8, violations == 0, f"200 samples, {violations} violations")
    assert violations == 0


def test_criterion_9_mini_corpus(tmp_path):
    labels = json.loads((CORPUS_DIR / "labels.json").read_text())
    out = tmp_path / "poly.csv"
    t0 = time.perf_counter()
    with redirect_stdout(io.StringIO()) as buf:
        code = cli.main(["bench", str(CORPUS_DIR), "--domain", "poly",
                         "--teacher", "builtin:16", "--csv", str(out)])
    elapsed = time.perf_counter() - t0
    rows = list(csv.DictReader(out.open()))
    got = {r["name"]: r["outcome"] for r in rows}
    table = tmp_path / "domains.csv"
    with redirect_stdout(io.StringIO()):
        code3 = cli.main(["bench", str(CORPUS_DIR), "--domain", "all",
                          "--teacher", "builtin:16", "--csv", str(table)])
    trows = list(csv.DictReader(table.open()))
    table_ok = (code3 == 0 and len(trows) == 3 * len(labels)
                and {r["domain"] for r in trows} == {"int", "oct", "poly"})
    ok = (code == 0 and got == labels and len(labels) == 10 and elapsed < 600
          and table_ok)
    solved = sum(got.get(k) == v for k, v in labels.items())
    report(9, ok, f"{solved}/{len(labels)} as labeled, {elapsed:.1f}s, "
                  f"three-domain table rows={len(trows)}; "
                  f"{buf.getvalue().strip().splitlines()[-1]}")
    assert got == labels
    assert elapsed < 600
    assert table_ok


def test_criterion_10_incremental_advantage():
    basic = ex4_run("basic")
    inc = ex4_run("incremental")
    ref = ex4_run("refined")
    ok = (basic.stats.joins > inc.stats.joins
          and ref.stats.pops <= inc.stats.pops)
    report(10, ok, f"joins basic={basic.stats.joins} incremental={inc.stats.joins}; "
                   f"pops incremental={inc.stats.pops} refined={ref.stats.pops}")
    assert basic.stats.joins > inc.stats.joins
    assert ref.stats.pops <= inc.stats.pops


if __name__ == "__main__":
    import sys
    import tempfile
    from pathlib import Path

    failed = 0
    for name, fn in sorted(globals().items(),
                           key=lambda kv: int(kv[0].split("_")[2])
                           if kv[0].startswith("test_criterion_") else 0):
        if not name.startswith("test_criterion_"):
            continue
        try:
            with redirect_stdout(io.StringIO()):
                if "tmp_path" in fn.__code__.co_varnames[:fn.__code__.co_argcount]:
                    with tempfile.TemporaryDirectory() as d:
                        fn(Path(d))
                else:
                    fn()
        except AssertionError:
            failed += 1
        print(RESULTS[-1])
    sys.exit(1 if failed else 0)
