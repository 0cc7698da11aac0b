"""Koszul and Cech complexes of monomial generators as adelic complexes.

The poset is the set of non-empty subsets of the generators ordered by
inclusion; ``L_sigma`` inverts the variables dividing the product of the
generators in ``sigma``.  Augmenting by ``M`` at the empty set and shifting
by one recovers local cohomology.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from ..adelic import AdelicSpec, adelic_cohomology
from ..coeff import (
    CoefficientSystem,
    DualCoefficientSystem,
    LocalizationSystem,
    apply_rule,
    invert_variables,
)
from ..exactla.complex import CochainComplex, CohomologyTable
from ..exactla.graded import graded_cohomology
from ..exactla.modules import (
    Grading,
    ModuleMap,
    PresentedModule,
    Window,
    block_map,
    graded_atom,
    identity_map,
)
from ..poset import Poset, SimplicialComplex, element_key


def polynomial_ring(names, label: str = "R") -> tuple[Grading, PresentedModule]:
    g = Grading.standard(list(names))
    return g, PresentedModule((graded_atom(g, label, range(g.nvars)),), g)


def parse_monomial(text: str, grading: Grading) -> tuple:
    """``"x^2*y"`` -> exponent vector; ``"1"`` is the unit monomial."""
    exps = [0] * grading.nvars
    text = text.replace(" ", "")
    if text in ("", "1"):
        return tuple(exps)
    for factor in text.split("*"):
        if "^" in factor:
            name, e = factor.split("^", 1)
            k = int(e)
        else:
            name, k = factor, 1
        if name not in grading.names:
            raise ValueError(f"unknown variable {name!r} in monomial {text!r}")
        if k < 0:
            raise ValueError(f"negative exponent in monomial {text!r}")
        exps[grading.var_index(name)] += k
    return tuple(exps)


def delta_poset(n: int) -> Poset:
    """Non-empty subsets of ``{0..n-1}``; ``sigma`` has dimension ``|sigma| - 1``."""
    elems = [frozenset(c) for k in range(1, n + 1) for c in combinations(range(n), k)]
    return Poset(elems, [(a, b) for a in elems for b in elems if b < a])


def inversion_rules(generators, poset_elements) -> dict:
    """``sigma -> invert the support of the product of its generators``."""
    rules = {}
    for sigma in poset_elements:
        sup = set()
        for a in sigma:
            sup |= {i for i, e in enumerate(generators[a]) if e}
        rules[sigma] = invert_variables(sup)
    return rules


def koszul_spec(grading: Grading, generators, module: PresentedModule, window: Window) -> AdelicSpec:
    P = delta_poset(len(generators))
    system = CoefficientSystem(P, {p: module for p in P.elements},
                               {pair: identity_map(module) for pair in P.covers})
    loc = LocalizationSystem(P, inversion_rules(generators, P.elements), "inversion")
    return AdelicSpec(P, system, loc, window=window, variant="cech",
                      augmentation=module, aug_maps={p: identity_map(module) for p in P.elements})


def koszul_local_cohomology(grading: Grading, generators, module: PresentedModule, window: Window,
                            augmented: bool = True) -> CohomologyTable:
    """Local cohomology (augmented, regraded so that ``M`` sits in degree 0) or Cech cohomology."""
    spec = koszul_spec(grading, generators, module, window)
    t = adelic_cohomology(spec, augmented=augmented)
    if augmented:
        return _shift(t, 1)
    return t


def _shift(t: CohomologyTable, k: int) -> CohomologyTable:
    return CohomologyTable(t.kind, tuple(s + k for s in t.degrees),
                           {s + k: g for s, g in t.groups.items()},
                           {(s + k, d): v for (s, d), v in t.dims.items()}, t.window, t.boundary_coupled)


def stable_koszul_complex(grading: Grading, generators, module: PresentedModule) -> CochainComplex:
    """Oracle: ``M -> (+)_a M[1/x_a] -> (+)_{a<b} M[1/x_ab] -> ...`` with the usual signs."""
    n = len(generators)
    subsets = [[frozenset(c) for c in combinations(range(n), k)] for k in range(n + 1)]
    rules = inversion_rules(generators, [s for level in subsets for s in level if s])

    def obj(sig):
        if not sig:
            return module
        return apply_rule(rules[sig], module)[0]

    def unit(a, b):
        ma, mb = obj(a), obj(b)
        ent = {}
        for j, at in enumerate(module.atoms):
            ia = _find(module, a, rules, j)
            ib = _find(module, b, rules, j)
            if ia is not None and ib is not None:
                ent[(ib, ia)] = 1
        return ModuleMap(ma, mb, ent)

    objs, diffs = [], []
    for k in range(n + 1):
        objs.append(PresentedModule.direct_sum([obj(s) for s in subsets[k]], grading))
    for k in range(n):
        blocks = {}
        for ci, a in enumerate(subsets[k]):
            for ri, b in enumerate(subsets[k + 1]):
                if a < b:
                    (v,) = tuple(b - a)
                    pos = sorted(b).index(v)
                    f = unit(a, b)
                    blocks[(ri, ci)] = f if pos % 2 == 0 else -f
        diffs.append(block_map([obj(s) for s in subsets[k]], [obj(s) for s in subsets[k + 1]],
                               blocks, objs[k], objs[k + 1]))
    return CochainComplex(objs, diffs, 0)


def _find(module, sig, rules, j):
    if not sig:
        return j
    _, _, idx = apply_rule(rules[sig], module)
    return idx[j]


def simplicial_cohomology(K: SimplicialComplex, system: DualCoefficientSystem, window: Window | None = None,
                          augmented: bool = False) -> CohomologyTable:
    """Cohomology of ``K`` with coefficients in a covariant system on its simplices.

    The system's poset must be the face poset of ``K`` (augmented by the
    empty simplex when ``augmented``).
    """
    levels = [list(K.n_simplices(n)) for n in range(K.dim + 1)]
    if augmented:
        levels = [[frozenset()]] + levels
    g = system.grading
    objs = [PresentedModule.direct_sum([system[s] for s in level], g) for level in levels]
    diffs = []
    for k in range(len(levels) - 1):
        blocks = {}
        for ri, tau in enumerate(levels[k + 1]):
            ordered = sorted(tau, key=element_key)
            for i, v in enumerate(ordered):
                face = tau - {v}
                if face not in levels[k] and not (augmented and k == 0 and not face):
                    continue
                ci = levels[k].index(face)
                f = system.map(face, tau)
                blocks[(ri, ci)] = f if i % 2 == 0 else -f
        diffs.append(block_map([system[s] for s in levels[k]], [system[s] for s in levels[k + 1]],
                               blocks, objs[k], objs[k + 1]))
    cx = CochainComplex(objs, diffs, -1 if augmented else 0)
    if g is not None:
        return graded_cohomology(cx, window)
    from ..exactla.complex import cohomology

    return cohomology(cx)


@dataclass
class SubdivisionReport:
    simplicial: CohomologyTable
    adelic: CohomologyTable

    @property
    def equal(self) -> bool:
        return self.simplicial.same_as(self.adelic)


def subdivision_compare(K: SimplicialComplex, module: PresentedModule, rules: dict,
                        window: Window | None = None) -> SubdivisionReport:
    """Cohomology of ``K`` with ``sigma -> L_sigma M`` versus the adelic complex of its face poset."""
    P = K.face_poset()
    g = module.grading
    values, maps = {}, {}
    for s in P.elements:
        values[s] = apply_rule(rules[s], module)[0]
    for (t, s) in P.covers:  # s < t
        ent = {}
        _, _, i_s = apply_rule(rules[s], module)
        _, _, i_t = apply_rule(rules[t], module)
        for j in range(len(module)):
            if i_s[j] is not None and i_t[j] is not None:
                ent[(i_t[j], i_s[j])] = 1
        maps[(s, t)] = ModuleMap(values[s], values[t], ent)
    dual = DualCoefficientSystem(P, values, maps)
    simp = simplicial_cohomology(K, dual, window)
    system = CoefficientSystem(P, {p: module for p in P.elements},
                               {pair: identity_map(module) for pair in P.covers})
    spec = AdelicSpec(P, system, LocalizationSystem(P, rules), window=window)
    return SubdivisionReport(simp, adelic_cohomology(spec))


def vertex_rules(K: SimplicialComplex, grading: Grading, var_of: dict) -> dict:
    """``L_sigma`` inverting the variables attached to the vertices of ``sigma``."""
    return {s: invert_variables({var_of[v] for v in s}) for s in K.simplices}
