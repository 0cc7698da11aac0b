"""Coefficient systems, localization systems and Euler-class localizations.

A localization functor acts atom by atom: it sends an atom to an atom (or to
``None`` for zero) and its unit is the canonical map with entry 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exactla.complex import composite_paths, first_nonvanishing, merge_paths
from .exactla.modules import (
    AbelianAtom,
    GradedAtom,
    Grading,
    ModuleMap,
    PresentedModule,
    Window,
    abelian_atom,
    alive,
    exponent_at,
    graded_atom,
    identity_map,
)
from .poset import Flag, Poset, flag_poset


class FunctorialityError(ValueError):
    def __init__(self, chain, multidegree=None):
        self.chain = tuple(chain)
        self.multidegree = multidegree
        msg = f"composite along {' > '.join(map(str, self.chain))} is not functorial"
        if multidegree is not None:
            msg += f" in multidegree {multidegree}"
        super().__init__(msg)


class NonStabilizingError(ArithmeticError):
    def __init__(self, degree, stage):
        self.degree = degree
        self.stage = stage
        super().__init__(f"localization does not stabilize in degree {degree} before stage {stage}")


@dataclass
class CheckResult:
    ok: bool
    failure: str | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


def maps_agree(f: ModuleMap, g: ModuleMap, window: Window | None = None) -> bool:
    if f.codomain.graded and window is not None:
        diff = f - g
        rows, cols = f.codomain, f.domain
        for deg in window:
            r = set(rows.alive_indices(deg))
            c = set(cols.alive_indices(deg))
            if any(i in r and j in c for (i, j) in diff.entries):
                return False
        return True
    return f.equals(g)


def _composites_agree(second: ModuleMap, first: ModuleMap, direct: ModuleMap,
                      window: Window | None) -> bool:
    """``second o first == direct`` (degreewise through alive middles if graded)."""
    if not direct.codomain.graded or window is None:
        return second.compose(first).equals(direct)
    paths = composite_paths(second, first, mid=0)
    # the direct map is a path through the domain itself, which is alive wherever it matters
    direct_paths = {(i, k): [(1, k, -v)] for (i, k), v in direct.entries.items()}
    bad = first_nonvanishing(merge_paths(paths, direct_paths), direct.domain,
                             [first.codomain, direct.domain], direct.codomain,
                             direct.codomain.grading, window)
    return bad is None


class CoefficientSystem:
    """Contravariant functor ``M`` on a poset: a map ``M(p) -> M(q)`` for ``q <= p``.

    ``restrictions`` may list only covers; other composites are formed along a
    canonical chain and checked by :meth:`check_functoriality`.
    """

    variance = "contravariant"

    def __init__(self, poset: Poset, values: dict, restrictions: dict | None = None):
        self.poset = poset
        missing = [p for p in poset.elements if p not in values]
        if missing:
            raise ValueError(f"no value at {missing!r}")
        self.values = dict(values)
        self.given = dict(restrictions or {})
        for (a, b) in self.given:
            if not self._ordered(a, b):
                raise ValueError(f"restriction ({a!r}, {b!r}) is not along the order")
        self._cache: dict = {}
        mods = list(self.values.values())
        self.grading = next((m.grading for m in mods if m.grading is not None), None)

    def _ordered(self, a, b) -> bool:
        return self.poset.lt(b, a)

    def __getitem__(self, p) -> PresentedModule:
        return self.values[p]

    def _step(self, a, b):
        # a cover (or given pair) leading from a towards b
        for c in (self.poset.covered_by(a) if self.variance == "contravariant" else
                  [x for (x, y) in self.poset.covers if y == a]):
            if (c == b or (self.poset.lt(b, c) if self.variance == "contravariant" else self.poset.lt(c, b))):
                return c
        raise ValueError(f"no chain from {a!r} to {b!r}")

    def map(self, a, b) -> ModuleMap:
        """``M(a) -> M(b)`` (``b <= a`` here; ``a <= b`` for dual systems)."""
        if a == b:
            return identity_map(self.values[a])
        key = (a, b)
        if key in self.given:
            return self.given[key]
        if key in self._cache:
            return self._cache[key]
        if not self._ordered(a, b):
            raise ValueError(f"{a!r} and {b!r} are not ordered correctly")
        c = self._step(a, b)
        if (a, c) not in self.given:
            raise ValueError(f"no map given for the cover ({a!r}, {c!r})")
        f = self.map(c, b).compose(self.given[(a, c)])
        self._cache[key] = f
        return f

    res = map

    def chains3(self):
        P = self.poset
        for a in P.elements:
            for b in P.elements:
                if a == b or not self._ordered(a, b):
                    continue
                for c in P.elements:
                    if c != b and self._ordered(b, c):
                        yield a, b, c

    def check_functoriality(self, window: Window | None = None) -> None:
        for f in self.given.values():
            f.check_canonical()
        for a, b, c in self.chains3():
            direct = self.map(a, c)
            if not _composites_agree(self.map(b, c), self.map(a, b), direct, window):
                raise FunctorialityError((a, b, c))


class DualCoefficientSystem(CoefficientSystem):
    """Covariant functor: a map ``N(q) -> N(p)`` for ``q <= p``."""

    variance = "covariant"

    def _ordered(self, a, b) -> bool:
        return self.poset.lt(a, b)

    ext = CoefficientSystem.map


def constant_system(poset: Poset, module: PresentedModule, dual: bool = False):
    cls = DualCoefficientSystem if dual else CoefficientSystem
    pairs = [(q, p) for (p, q) in poset.covers] if dual else list(poset.covers)
    return cls(poset, {p: module for p in poset.elements},
               {pair: identity_map(module) for pair in pairs})


def induce_on_flags(system: CoefficientSystem, variance: str) -> CoefficientSystem:
    """Lower-star (``"lower"``: value at the first vertex) or upper-star (last vertex).

    The result lives on the poset of flags ordered by face inclusion.
    """
    if variance not in ("lower", "upper"):
        raise ValueError("variance must be 'lower' or 'upper'")
    fp = flag_poset(system.poset)
    pick = (lambda f: f.first) if variance == "lower" else (lambda f: f.last)
    values = {f: system.values[pick(f)] for f in fp.elements}
    dual_in = isinstance(system, DualCoefficientSystem)
    # which direction the induced maps go along face inclusion g < f
    to_smaller = (variance == "lower") != dual_in
    maps = {}
    for (f, g) in fp.covers:
        a, b = pick(f), pick(g)
        if to_smaller:
            maps[(f, g)] = system.map(a, b)
        else:
            maps[(g, f)] = system.map(b, a)
    cls = CoefficientSystem if to_smaller else DualCoefficientSystem
    return cls(fp, values, maps)


# ---------------------------------------------------------------- localization

AtomRule = Callable[[object, Grading | None], object]


def identity_rule(atom, grading=None):
    return atom


def invert_variables(vars_: Iterable[int]) -> AtomRule:
    U = frozenset(vars_)

    def rule(atom: GradedAtom, grading: Grading):
        if atom is None:
            return None
        if not U:
            return atom
        return graded_atom(grading, atom.label, atom.support, atom.shift, atom.ideal, atom.inverted | U)

    rule.inverted = U
    return rule


def apply_rule(rule: AtomRule, m: PresentedModule) -> tuple[PresentedModule, ModuleMap, list]:
    """``(L M, unit M -> L M, index map)``; the index map sends atoms to their image or None."""
    out = []
    idx = []
    for a in m.atoms:
        b = rule(a, m.grading)
        if b is None:
            idx.append(None)
        else:
            idx.append(len(out))
            out.append(b)
    lm = PresentedModule(tuple(out), m.grading)
    unit = ModuleMap(m, lm, {(i, j): 1 for j, i in enumerate(idx) if i is not None})
    return lm, unit, idx


def apply_rule_to_map(rule: AtomRule, f: ModuleMap) -> ModuleMap:
    d, _, di = apply_rule(rule, f.domain)
    c, _, ci = apply_rule(rule, f.codomain)
    ent = {(ci[i], di[j]): v for (i, j), v in f.entries.items() if ci[i] is not None and di[j] is not None}
    return ModuleMap(d, c, ent)


class LocalizationSystem:
    """An atom rule ``A_p`` for every element ``p`` of a poset."""

    def __init__(self, poset: Poset, rules: dict, name: str = ""):
        missing = [p for p in poset.elements if p not in rules]
        if missing:
            raise ValueError(f"no localization at {missing!r}")
        self.poset = poset
        self.rules = dict(rules)
        self.name = name

    def __getitem__(self, p) -> AtomRule:
        return self.rules[p]

    def apply(self, p, m: PresentedModule):
        return apply_rule(self.rules[p], m)

    def apply_atom(self, p, atom, grading=None):
        if atom is None:
            return None
        return self.rules[p](atom, grading)

    def chain_atom(self, vertices: Sequence, atom, grading=None):
        """``A_{v0} A_{v1} ... A_{vk}`` applied to an atom (innermost last vertex)."""
        for v in reversed(vertices):
            atom = self.apply_atom(v, atom, grading)
            if atom is None:
                return None
        return atom


def _iso_atoms(a, b) -> bool:
    return a == b


def check_absorbative(ls: LocalizationSystem, side: str, samples: Sequence[PresentedModule],
                      pairs: Iterable[tuple] | None = None) -> CheckResult:
    """Left: ``A_p1(unit_p2)`` invertible; right: ``unit_p1`` on ``A_p2 M`` invertible; for ``p1 >= p2``."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    P = ls.poset
    if pairs is None:
        pairs = [(a, b) for a in P.elements for b in P.elements if P.leq(b, a)]
    n = 0
    for a, b in pairs:
        if not P.leq(b, a):
            raise ValueError(f"{a!r} >= {b!r} fails")
        for m in samples:
            for atom in m.atoms:
                g = m.grading
                if side == "left":
                    src = ls.apply_atom(a, atom, g)
                    tgt = ls.apply_atom(a, ls.apply_atom(b, atom, g), g)
                else:
                    src = ls.apply_atom(b, atom, g)
                    tgt = ls.apply_atom(a, src, g)
                n += 1
                if not _iso_atoms(src, tgt):
                    return CheckResult(False, f"{side} absorbativity fails for {a!r} >= {b!r} on {atom}: "
                                              f"{src} -> {tgt}", n)
    return CheckResult(True, None, n)


# ---------------------------------------------------------------- Euler classes


@dataclass
class EulerClassSystem:
    """Multiplicative sets of Euler classes ``E_{p/q}`` for ``p >= q``.

    ``gens[(p, q)]`` is one period of a generator sequence: exponent vectors
    (graded) or integers (abelian).  Missing pairs, and ``p == q``, are
    trivial.  ``labels`` names the ring at each element (graded atoms carry
    that label).
    """

    poset: Poset
    gens: dict
    labels: dict = field(default_factory=dict)
    grading: Grading | None = None

    def sequence(self, p, q) -> tuple:
        if p == q:
            return ()
        if not self.poset.lt(q, p):
            raise ValueError(f"{p!r} >= {q!r} fails")
        return tuple(self.gens.get((p, q), ()))

    def element_of(self, label):
        for e, lab in self.labels.items():
            if lab == label:
                return e
        raise KeyError(label)

    def support(self, p, q) -> frozenset:
        out = set()
        for g in self.sequence(p, q):
            out |= {i for i, e in enumerate(g) if e}
        return frozenset(out)

    def extend(self, q, r, atom: GradedAtom) -> GradedAtom | None:
        """Extension of scalars from the ring at ``q`` to the ring at ``r``."""
        g = self.grading
        new = g.ring_vars(self.labels[r]) - g.ring_vars(self.labels[q])
        return graded_atom(g, self.labels[r], set(atom.support) | new, atom.shift, atom.ideal, atom.inverted)

    def rule(self, p) -> AtomRule:
        """Relative localization at ``p`` of modules over the rings below it."""

        def r(atom, grading=None):
            if not isinstance(atom, GradedAtom):
                raise TypeError("abelian atoms carry no ring label; call euler_localize with a pair")
            return localize_atom(self, (p, self.element_of(atom.label)), atom)[0]

        return r

    def localization_system(self) -> LocalizationSystem:
        return LocalizationSystem(self.poset, {p: self.rule(p) for p in self.poset.elements}, "euler")

    def check_composition(self) -> CheckResult:
        """``E_{p0/p2}`` and the classes from ``E_{p0/p1}, E_{p1/p2}`` invert the same variables."""
        P = self.poset
        n = 0
        for a in P.elements:
            for b in P.elements:
                for c in P.elements:
                    if not (P.leq(b, a) and P.leq(c, b)):
                        continue
                    n += 1
                    lhs = self.support(a, c)
                    rhs = self.support(a, b) | self.support(b, c)
                    if lhs != rhs:
                        return CheckResult(False, f"E_{a}/{c} inverts {sorted(lhs)} but the composite "
                                                  f"inverts {sorted(rhs)}", n)
        return CheckResult(True, None, n)


def _abelian_euler_atom(atom: AbelianAtom, gens: Sequence[int]):
    from .exactla.scalars import prime_set

    primes = set()
    for e in gens:
        primes |= prime_set(e)
    return abelian_atom(atom.scalars.invert(primes), atom.order)


def localize_atom(es: EulerClassSystem, pair, atom, window: Window | None = None,
                  max_stage: int = 10_000):
    """Localize one atom at ``E_pair``; returns ``(atom or None, certificate)``.

    The certificate maps each degree of ``window`` to the first stage from
    which the directed system is constant (``None`` if the colimit vanishes).
    """
    p, q = pair
    seq = es.sequence(p, q)
    if isinstance(atom, AbelianAtom):
        return _abelian_euler_atom(atom, seq), _abelian_certificate(atom, seq)
    g = es.grading
    vinf = set()
    for e in seq:
        vinf |= {i for i, x in enumerate(e) if x}
    target = graded_atom(g, atom.label, atom.support, atom.shift, atom.ideal, atom.inverted | vinf)
    cert = {}
    if window is not None and seq:
        for deg in window:
            cert[deg] = _stage(g, atom, seq, tuple(deg), vinf, max_stage)
            live = target is not None and alive(g, target, tuple(deg))
            if (cert[deg] is not None) != live:
                raise NonStabilizingError(deg, max_stage)
    return target, cert


def _stage(g: Grading, atom: GradedAtom, seq, deg, vinf, max_stage):
    """First stage N from which ``x / E_N`` stays alive, or None if eventually dead."""
    m = exponent_at(g, atom, deg)
    if m is None:
        return None
    need = {i: max([0] + [h[i] for h in atom.ideal]) for i in vinf}
    E = [0] * g.nvars
    history = []
    N = 0
    while True:
        shifted = tuple(mi + ei for mi, ei in zip(m, E))
        history.append(alive(g, atom, _deg(g, atom, shifted)))
        if all(shifted[i] >= need[i] for i in vinf):
            break
        if N >= max_stage:
            raise NonStabilizingError(deg, max_stage)
        e = seq[N % len(seq)]
        E = [a + b for a, b in zip(E, e)]
        N += 1
    if not history[-1]:
        return None
    k = len(history) - 1
    while k > 0 and history[k - 1]:
        k -= 1
    return k


def _deg(g: Grading, atom: GradedAtom, exps) -> tuple:
    d = list(atom.shift)
    for i in atom.support:
        d[g.coords[i]] += g.weights[i] * exps[i]
    return tuple(d)


def _abelian_certificate(atom: AbelianAtom, seq) -> int:
    from math import gcd

    if atom.free or not seq:
        return 0
    n = atom.order
    prod, k, prev = 1, 0, None
    while True:
        cur = n // gcd(prod, n)  # size of the image after k multiplications
        if cur == prev:
            return k - 1
        prev = cur
        prod *= seq[k % len(seq)]
        k += 1


def euler_localize(es: EulerClassSystem, pair, m: PresentedModule, window: Window | None = None,
                   max_stage: int = 10_000):
    """``(E^-1 M, unit, certificates)`` for a module over the ring at ``pair[1]``."""
    out, idx, certs = [], [], {}
    for j, a in enumerate(m.atoms):
        b, cert = localize_atom(es, pair, a, window, max_stage)
        certs[j] = cert
        if b is None:
            idx.append(None)
        else:
            idx.append(len(out))
            out.append(b)
    lm = PresentedModule(tuple(out), m.grading)
    unit = ModuleMap(m, lm, {(i, j): 1 for j, i in enumerate(idx) if i is not None})
    return lm, unit, certs


def check_transitivity(es: EulerClassSystem, samples: dict) -> CheckResult:
    """``L_{p1/p3} R_* == L_{p2/p3} R_* L_{p1/p2}`` on sample atoms over ``R(p2)``.

    ``samples`` maps an element to a list of modules over its ring.
    """
    P = es.poset
    n = 0
    for a in P.elements:
        for b in P.elements:
            for c in P.elements:
                if not (P.leq(b, a) and P.leq(c, b)):
                    continue
                for m in samples.get(b, ()):
                    for atom in m.atoms:
                        n += 1
                        lhs_in = es.extend(b, c, atom)
                        lhs = None if lhs_in is None else localize_atom(es, (a, c), lhs_in)[0]
                        mid = localize_atom(es, (a, b), atom)[0]
                        mid = None if mid is None else es.extend(b, c, mid)
                        rhs = None if mid is None else localize_atom(es, (b, c), mid)[0]
                        if lhs != rhs:
                            return CheckResult(False, f"pentagon fails on {a}>={b}>={c} for {atom}", n)
    return CheckResult(True, None, n)


# ---------------------------------------------------------------- restricted products


@dataclass
class RestrictedProduct:
    """``prod_{i >= 1} M_i`` with finitely many explicit indices and a uniform tail.

    Indices ``1..exceptional`` are explicit; if ``tail`` is true every index
    beyond them has a component identified with ``template``.  ``euler(i)``
    returns one period of the Euler generator sequence at index ``i`` as pairs
    ``(exponent vector, unit scalar)``.
    """

    component: Callable[[int], PresentedModule]
    euler: Callable[[int], Sequence]
    exceptional: int
    tail: bool = True
    template: PresentedModule | None = None
    grading: Grading | None = None

    def indices(self) -> range:
        return range(1, self.exceptional + 1)

    def truncation(self, n: int) -> "RestrictedProduct":
        return RestrictedProduct(self.component, self.euler, n, False, None, self.grading)

    def _es(self, i: int) -> EulerClassSystem:
        P = Poset(["top", "i"], [("top", "i")])
        gens = tuple(e for e, _ in self.euler(i))
        label = self.component(i).atoms[0].label if self.component(i).atoms else "i"
        return EulerClassSystem(P, {("top", "i"): gens}, {"i": label}, self.grading)


@dataclass
class LocalizedProduct:
    """Degreewise description of the localized restricted product and its cokernel."""

    window: Window
    per_index: dict          # (i, degree) -> (dim M_i, dim E^-1 M_i)
    tail: dict               # degree -> (dim template, dim of the localized tail values)
    certificates: dict       # i -> {degree: stage}

    def cokernel_dim(self, i: int, deg) -> int:
        a, b = self.per_index[(i, tuple(deg))]
        return b - a

    def tail_cokernel_dim(self, deg) -> int:
        a, b = self.tail.get(tuple(deg), (0, 0))
        return b - a


def localize_product(rp: RestrictedProduct, window: Window, max_stage: int = 10_000) -> LocalizedProduct:
    """Exceptions localize componentwise; the tail is unit-like at every finite stage.

    At stage ``N`` a tail index beyond every explicit index sees only unit
    factors, so tail values are never divided by a non-unit.
    """
    per, certs = {}, {}
    for i in rp.indices():
        es = rp._es(i)
        m = rp.component(i)
        lm, _, cert = euler_localize(es, ("top", "i"), m, window, max_stage)
        certs[i] = cert
        for deg in window:
            per[(i, tuple(deg))] = (m.dim(tuple(deg)), lm.dim(tuple(deg)))
    tail = {}
    if rp.tail and rp.template is not None:
        for deg in window:
            d = rp.template.dim(tuple(deg))
            tail[tuple(deg)] = (d, d)
    return LocalizedProduct(window, per, tail, certs)


@dataclass
class SumProductReport:
    iso: bool
    hypothesis_ok: bool
    cokernel: dict           # degree -> {index: dim} on the explicit indices
    tail_cokernel: dict      # degree -> dim
    failure: str | None = None


def _torsion_free(rp: RestrictedProduct, window: Window) -> str | None:
    """Euler classes act injectively on each component (checked in the window)."""
    g = rp.grading
    for i in rp.indices():
        m = rp.component(i)
        for e, _ in rp.euler(i):
            if not any(e):
                continue
            for a in m.atoms:
                for deg in window:
                    if not alive(g, a, tuple(deg)):
                        continue
                    ex = exponent_at(g, a, tuple(deg))
                    shifted = tuple(x + y for x, y in zip(ex, e))
                    if not alive(g, a, _deg(g, a, shifted)):
                        return f"component {i} has Euler torsion in degree {tuple(deg)}"
    return None


def sum_vs_product_cokernel(rp: RestrictedProduct, window: Window) -> SumProductReport:
    """Compare the cokernels of the localizations of the direct sum and the product."""
    bad = _torsion_free(rp, window)
    loc = localize_product(rp, window)
    cok, tail = {}, {}
    iso = bad is None
    for deg in window:
        deg = tuple(deg)
        cok[deg] = {i: loc.cokernel_dim(i, deg) for i in rp.indices()}
        tail[deg] = loc.tail_cokernel_dim(deg)
        if tail[deg]:
            iso = False
    return SumProductReport(iso, bad is None, cok, tail, bad)


def truncated_cokernel(rp: RestrictedProduct, n: int, window: Window) -> dict:
    """Oracle: cokernel dimensions of the finite product over indices ``1..n``.

    Computed from ranks of the actual unit map, not from the localized atoms'
    dimensions alone.
    """
    from .exactla import kernels
    from .exactla.modules import integer_rows

    out = {}
    for i in range(1, n + 1):
        es = rp._es(i)
        m = rp.component(i)
        lm, unit, _ = euler_localize(es, ("top", "i"), m, None)
        for deg in window:
            deg = tuple(deg)
            rows, cols, mat = unit.restricted(deg)
            r = kernels.rank(integer_rows(mat)) if rows and cols else 0
            out[(i, deg)] = len(rows) - r
    return out
