"""Seeded property suites shared by the command line and the test-suite.

Each suite returns a :class:`SuiteReport` with one :class:`PropertyResult`
per checked property.  Identical seeds give identical reports.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .adelic import AdelicSpec, assemble
from .coeff import CoefficientSystem, LocalizationSystem, check_absorbative, identity_rule, invert_variables
from .exactla.complex import ComplexError
from .exactla.modules import Grading, PresentedModule, Window, abelian_atom, graded_atom, identity_map
from .exactla.scalars import Q
from .poset import Poset, SimplicialComplex, dimension_data


@dataclass
class PropertyResult:
    name: str
    ok: bool
    checked: int = 0
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    seed: int
    results: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def add(self, name: str, ok: bool, checked: int = 0, detail: str = "") -> None:
        self.results.append(PropertyResult(name, bool(ok), checked, detail))

    def as_dict(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "ok": self.ok,
                "results": [{"property": r.name, "ok": r.ok, "checked": r.checked, "detail": r.detail}
                            for r in self.results]}


# ---------------------------------------------------------------- generators


def random_catenary_poset(rng: random.Random, max_elements: int = 10, max_dim: int = 3) -> Poset:
    """Layered poset: every element of layer ``k > 0`` lies above some element of layer ``k - 1``."""
    r = rng.randint(0, max_dim)
    sizes = [1] * (r + 1)
    for _ in range(rng.randint(0, max_elements - (r + 1))):
        sizes[rng.randrange(r + 1)] += 1
    layers, n = [], 0
    for s in sizes:
        layers.append(list(range(n, n + s)))
        n += s
    rel = []
    for k in range(1, r + 1):
        for p in layers[k]:
            below = rng.sample(layers[k - 1], rng.randint(1, len(layers[k - 1])))
            rel.extend((p, q) for q in below)
    return Poset(range(n), rel)


def monotone_inversions(rng: random.Random, P: Poset, nvars: int, mode: str) -> dict:
    """Variables inverted at each element, growing towards the generic points.

    ``mode`` is ``"identity"`` (nothing inverted), ``"inversion"`` (every
    non-minimal element inverts something) or ``"mixed"``.
    """
    own = {}
    for p in P.elements:
        if mode == "identity" or (mode == "mixed" and rng.random() < 0.5):
            own[p] = set()
        elif mode == "inversion" and p in P.minimal:
            own[p] = set()
        else:
            own[p] = {rng.randrange(nvars)}
    out = {}
    for p in P.elements:
        s = set(own[p])
        for q in P.below(p):
            s |= own[q]
        out[p] = frozenset(s)
    return out


def graded_poset_spec(P: Poset, inverted: dict, nvars: int, window: Window,
                      ideal=()) -> AdelicSpec:
    g = Grading.standard([f"x{i}" for i in range(nvars)])
    m = PresentedModule((graded_atom(g, "R", range(nvars), None, ideal),), g)
    system = CoefficientSystem(P, {p: m for p in P.elements}, {pair: identity_map(m) for pair in P.covers})
    rules = {p: (invert_variables(inverted[p]) if inverted[p] else identity_rule) for p in P.elements}
    return AdelicSpec(P, system, LocalizationSystem(P, rules), window=window)


def complexes_up_to(n: int) -> list[SimplicialComplex]:
    """Every simplicial complex whose vertices lie in ``{0..n-1}`` (one per facet antichain)."""
    subsets = [frozenset(c) for k in range(1, n + 1) for c in combinations(range(n), k)]
    out = []

    def grow(start, chosen):
        if chosen:
            out.append(SimplicialComplex(chosen))
        for i in range(start, len(subsets)):
            s = subsets[i]
            if any(s <= t or t <= s for t in chosen):
                continue
            grow(i + 1, chosen + [s])

    grow(0, [])
    return out


def random_complex(rng: random.Random, n: int) -> SimplicialComplex:
    faces = []
    for _ in range(rng.randint(1, 2 * n)):
        k = rng.randint(1, min(n, 4))
        faces.append(rng.sample(range(n), k))
    faces.append(list(range(n))[:1])
    return SimplicialComplex(faces)


def random_relations(rng: random.Random, primes) -> tuple[list, int]:
    """A small integer relation matrix whose torsion often meets ``primes``."""
    ngens = rng.randint(1, 3)
    nrel = rng.randint(0, ngens)
    pool = list(primes) + [1, 1, 4, 9, 5, 7]
    rel = []
    for _ in range(nrel):
        row = [rng.randint(-3, 3) * rng.choice(pool) for _ in range(ngens)]
        rel.append(row)
    return rel, ngens


# ---------------------------------------------------------------- suites


def delta_squared(seed: int = 0, count: int = 100, max_elements: int = 10, max_dim: int = 3,
                  nvars: int = 2, window: Window | None = None) -> SuiteReport:
    rng = random.Random(seed)
    window = window or Window.cube(-1, 1, nvars)
    rep = SuiteReport("delta-squared", seed)
    counts = {m: 0 for m in ("identity", "inversion", "mixed")}
    failures = []
    for t in range(count):
        P = random_catenary_poset(rng, max_elements, max_dim)
        dimension_data(P)  # raises if not catenary
        for mode in counts:
            inv = monotone_inversions(rng, P, nvars, mode)
            spec = graded_poset_spec(P, inv, nvars, window)
            try:
                assemble(spec, check=True)
            except ComplexError as e:
                failures.append(f"poset {t} ({mode}): {e}")
            counts[mode] += 1
    for mode, n in counts.items():
        bad = [f for f in failures if f"({mode})" in f]
        rep.add(f"d^2=0 [{mode}]", not bad, n, "; ".join(bad[:3]))
    return rep


def subdivision(seed: int = 0, max_vertices: int = 4, random_count: int = 20,
                random_vertices: int = 5, graded: bool = True) -> SuiteReport:
    """Simplicial cohomology of ``K`` against the adelic complex of its face poset."""
    from .instances.cech import subdivision_compare, vertex_rules

    rng = random.Random(seed)
    rep = SuiteReport("subdivision", seed)
    ks = complexes_up_to(max_vertices)
    ks += [random_complex(rng, random_vertices) for _ in range(random_count)]
    q = PresentedModule((abelian_atom(Q),))
    bad, bad_g, n_g = [], [], 0
    for K in ks:
        ident = {s: identity_rule for s in K.simplices}
        if not subdivision_compare(K, q, ident).equal:
            bad.append(repr(K))
        if graded and len(K.vertices) <= max_vertices:
            nv = len(K.vertices)
            g = Grading.standard([f"x{v}" for v in K.vertices])
            m = PresentedModule((graded_atom(g, "R", range(nv)),), g)
            var_of = {v: i for i, v in enumerate(K.vertices)}
            r = subdivision_compare(K, m, vertex_rules(K, g, var_of), Window.cube(-1, 1, nv))
            n_g += 1
            if not r.equal:
                bad_g.append(repr(K))
    rep.add("H(K) = H(K') constant Q", not bad, len(ks), "; ".join(bad[:3]))
    if graded:
        rep.add("H(K; LM) = H_ad(K; L, M) inversion", not bad_g, n_g, "; ".join(bad_g[:3]))
    return rep


def absorbative(seed: int = 0, count: int = 50, primes=None) -> SuiteReport:
    """Localizations left absorbative and completions right absorbative on f.g. modules."""
    from .instances.numberring import (
        completion_system,
        hasse_spec,
        localization_system,
        module_from_relations,
    )

    rng = random.Random(seed)
    rep = SuiteReport("absorbative", seed)
    nl = nr = nf = 0
    fails = []
    choices = [(2,), (3,), (2, 3), (2, 5), (3, 7), (2, 3, 5), (2, 5, 7)]
    for _ in range(count):
        S = tuple(sorted(primes)) if primes else rng.choice(choices)
        rel, ng = random_relations(rng, S)
        fg = module_from_relations(S, rel, ng)
        left = check_absorbative(localization_system(S), "left", [fg.module])
        right = check_absorbative(completion_system(S), "right", [fg.module])
        nl += left.checked
        nr += right.checked
        if not left:
            fails.append(("left", left.failure))
        if not right:
            fails.append(("right", right.failure))
        spec = hasse_spec(S, module=fg)
        try:
            spec.system.check_functoriality()
            nf += 1
        except ValueError as e:
            fails.append(("functorial", str(e)))
    rep.add("L left absorbative", not [f for f in fails if f[0] == "left"], nl)
    rep.add("Lambda right absorbative", not [f for f in fails if f[0] == "right"], nr)
    rep.add("completion system functorial", not [f for f in fails if f[0] == "functorial"], nf)
    return rep


def pentagon(seed: int = 0, max_n: int = 5) -> SuiteReport:
    from .instances.torus import TorusRank1Instance, check_composition, check_multiplicativity, check_pentagon

    rng = random.Random(seed)
    rep = SuiteReport("pentagon", seed)
    for n in range(1, max_n + 1):
        inst = TorusRank1Instance.first(n)
        r = check_pentagon(inst)
        rep.add(f"transitivity n={n}", r.ok, r.checked, r.failure or "")
        c = check_composition(inst)
        rep.add(f"composition n={n}", c.ok, c.checked, c.failure or "")
        pairs = [([rng.randint(1, 12) for _ in range(rng.randint(0, 3))],
                  [rng.randint(1, 12) for _ in range(rng.randint(0, 3))]) for _ in range(20)]
        m = check_multiplicativity(inst, pairs)
        rep.add(f"Euler multiplicative n={n}", m.ok, m.checked, m.failure or "")
    return rep


def radical(seed: int = 0, lo: int = -6, hi: int = 2) -> SuiteReport:
    from .instances.cech import koszul_local_cohomology, parse_monomial, polynomial_ring

    rep = SuiteReport("radical", seed)
    g, R = polynomial_ring(["x", "y"])
    w = Window.cube(lo, hi, 2)
    base = koszul_local_cohomology(g, [parse_monomial(t, g) for t in ("x", "y")], R, w)
    for gens in (("x^2", "y", "x*y"), ("x^3", "y^2"), ("x*y", "x^2", "y^3")):
        t = koszul_local_cohomology(g, [parse_monomial(s, g) for s in gens], R, w)
        rep.add("radical " + ",".join(gens), t.same_as(base), len(w))
    return rep


def split(seed: int = 0, count: int = 200, precision: int = 32, sets=None) -> SuiteReport:
    from .instances.numberring import hasse_spec, random_targets, split_with_retry

    rep = SuiteReport("split", seed)
    for S in sets or [(2,), (2, 3), (3, 5, 7), (2, 5, 7)]:
        spec = hasse_spec(S, [], 1)
        ok, retried = True, 0
        for t in range(count):
            streams = random_targets(S, seed * 100_003 + t, precision)
            _, good, k = split_with_retry(spec, streams, precision)
            ok &= good
            retried += k != precision
        rep.add(f"round trip S={list(S)}", ok, count, f"{retried} retried at double precision")
    return rep


SUITES = {
    "delta-squared": delta_squared,
    "subdivision": subdivision,
    "absorbative": absorbative,
    "pentagon": pentagon,
    "radical": radical,
    "split": split,
}
