"""Acceptance criteria, one test each.

Every test prints a ``PASS``/``FAIL`` line with its timing.  Run directly
with ``python tests/test_acceptance.py`` for just the summary.
"""
import time
from itertools import combinations
from math import prod

import pytest

from adelcoh.coeff import sum_vs_product_cokernel, truncated_cokernel
from adelcoh.exactla.modules import Window
from adelcoh.instances.cech import koszul_local_cohomology, parse_monomial, polynomial_ring
from adelcoh.adelic import POLICIES
from adelcoh.instances.numberring import VARIANTS, h0_reconstruct, hasse_cohomology, hasse_spec
from adelcoh.instances.torus import TorusRank1Instance, tom_dieck_filtration, torus_cohomology
from adelcoh.instances.torus import restricted_family
from adelcoh import suites

SEED = 7


def report(n, title, ok, seconds, detail=""):
    line = f"criterion {n} {'PASS' if ok else 'FAIL'} [{seconds:.2f}s] {title}"
    if detail:
        line += f" ({detail})"
    print(line)
    return line


class Timer:
    def __enter__(self):
        self.t = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t


def hasse_modules(S):
    n = prod(S)
    return {"R": ([], 1), "R^2": ([], 2), "torsion": ([[n]], 1), "mixed": ([[0, n]], 2)}


def criterion_1():
    sets = [S for k in (1, 2, 3) for S in combinations((2, 3, 5, 7), k)]
    bad, runs = [], 0
    with Timer() as t:
        for S in sets:
            for name, (rel, ng) in hasse_modules(S).items():
                for variant in VARIANTS:
                    for policy in POLICIES:
                        tables = []
                        for k in (32, 64):
                            spec = hasse_spec(S, rel, ng, variant=variant, policy=policy, precision=k)
                            tab = hasse_cohomology(spec)
                            rec = h0_reconstruct(spec, k)
                            runs += 1
                            higher = all(tab.group(s).is_zero for s in tab.degrees if s >= 1)
                            if not (rec.ok and higher):
                                bad.append((S, name, variant, policy, k))
                            tables.append(tab.pretty())
                        if tables[0] != tables[1]:
                            bad.append((S, name, variant, policy, "precision"))
    ok = not bad and t.elapsed < 5
    return ok, t.elapsed, f"{runs} runs, {len(bad)} failures, limit 5s"


def criterion_2():
    sets = [(2,), (2, 3), (3, 5, 7), (2, 5, 7)]
    with Timer() as t:
        rep = suites.split(SEED, count=200, precision=32, sets=sets)
    ok = rep.ok and t.elapsed < 5
    retried = "; ".join(r.detail for r in rep.results)
    return ok, t.elapsed, f"{200 * len(sets)} splits, {retried}"


def criterion_3():
    with Timer() as t:
        g, R = polynomial_ring(["x", "y"])
        w = Window.cube(-10, 2, 2)
        gen = lambda *xs: [parse_monomial(s, g) for s in xs]
        tab = koszul_local_cohomology(g, gen("x", "y"), R, w)
        support_ok = (not tab.support(0) and not tab.support(1)
                      and tab.support(2) == {(a, b): 1 for a in range(-10, 0) for b in range(-10, 0)})
        hilbert_ok = all(tab.total_dim(2, -d) == d - 1 for d in range(2, 11))
        radical_ok = koszul_local_cohomology(g, gen("x^2", "y", "x*y"), R, w).same_as(tab)
    ok = support_ok and hilbert_ok and radical_ok and t.elapsed < 5
    return ok, t.elapsed, f"support {support_ok}, Hilbert {hilbert_ok}, radical {radical_ok}"


def criterion_4():
    with Timer() as t:
        rep = suites.subdivision(SEED, max_vertices=4, random_count=20, random_vertices=5, graded=False)
    return rep.ok, t.elapsed, f"{rep.results[0].checked} complexes"


def criterion_5():
    with Timer() as t:
        rep = suites.delta_squared(SEED, count=100, max_elements=10, max_dim=3)
    return rep.ok, t.elapsed, ", ".join(f"{r.name}: {r.checked}" for r in rep.results)


def criterion_6():
    bad = []
    with Timer() as t:
        for n in range(1, 6):
            tab = torus_cohomology(TorusRank1Instance.first(n, -12, 4))
            if tab.support(0) != {(0,): 1}:
                bad.append((n, 0))
            if tab.support(1) != {(-2 * k,): n for k in range(1, 7)}:
                bad.append((n, 1))
            if any(s not in (0, 1) for s in tab.degrees if tab.support(s)):
                bad.append((n, "higher"))
    ok = not bad and t.elapsed < 2
    return ok, t.elapsed, f"n=1..5, {len(bad)} failures, limit 2s"


def criterion_7():
    bad = []
    with Timer() as t:
        for n in range(1, 6):
            rep = tom_dieck_filtration(TorusRank1Instance.first(n))
            if not (rep.concentrated and rep.collapse and set(rep.pages) == {0, 1}):
                bad.append(n)
    return not bad, t.elapsed, f"n=1..5, subquotients 0 and 1, {len(bad)} failures"


def criterion_8():
    with Timer() as t:
        rp = restricted_family(exceptional=3)
        w = Window((-12,), (4,))
        rep = sum_vs_product_cokernel(rp, w)
        expected = all(v == (1 if d < 0 and d % 2 == 0 else 0)
                       for (d,), per in rep.cokernel.items() for v in per.values())
        stable = True
        for size in (3, 6, 12):
            tr = truncated_cokernel(rp, size, w)
            for deg, per in rep.cokernel.items():
                stable &= all(tr[(i, deg)] == v for i, v in per.items())
                stable &= all(tr[(i, deg)] == 0 for i in range(4, size + 1))
    ok = rep.iso and expected and stable
    return ok, t.elapsed, f"iso {rep.iso}, cokernel {expected}, truncations 3/6/12 {stable}"


def criterion_9():
    with Timer() as t:
        ab = suites.absorbative(SEED, count=50)
        pe = suites.pentagon(SEED)
    ok = ab.ok and pe.ok
    return ok, t.elapsed, ", ".join(f"{r.name}: {r.checked}" for r in ab.results) + f", pentagon {pe.ok}"


CRITERIA = [
    (1, "Hasse reproduction", criterion_1),
    (2, "constructive H^1 = 0", criterion_2),
    (3, "local cohomology and radical invariance", criterion_3),
    (4, "subdivision invariance", criterion_4),
    (5, "d^2 = 0 suite", criterion_5),
    (6, "rank-1 torus", criterion_6),
    (7, "filtration concentration", criterion_7),
    (8, "sum versus product", criterion_8),
    (9, "absorbativity and pentagon", criterion_9),
]


@pytest.mark.parametrize("n,title,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(n, title, fn, capsys):
    ok, seconds, detail = fn()
    with capsys.disabled():
        print()
        report(n, title, ok, seconds, detail)
    assert ok, detail


if __name__ == "__main__":
    results = [(n, title, *fn()) for n, title, fn in CRITERIA]
    for n, title, ok, seconds, detail in results:
        report(n, title, ok, seconds, detail)
    raise SystemExit(0 if all(r[2] for r in results) else 1)
