"""The rank-one torus: a generic point over finitely many finite cyclic subgroups.

The ring at the generic point is ``Q`` and at ``C_m`` it is ``Q[c]`` with
``c`` in degree 2.  The Euler class of ``z^k`` restricts to ``c`` at ``C_m``
when ``C_m`` fixes ``z^k`` (``m | k``) and to a unit otherwise.  Inverting the
Euler classes at the generic point gives ``Q[c, 1/c]`` over each ``C_m``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from ..adelic import AdelicSpec, assemble, adelic_cohomology
from ..coeff import (
    CheckResult,
    CoefficientSystem,
    EulerClassSystem,
    RestrictedProduct,
    check_transitivity,
)
from ..exactla.complex import CohomologyTable
from ..exactla.filtration import e1_page, filtration_subquotients
from ..exactla.graded import graded_cohomology
from ..exactla.modules import Grading, ModuleMap, PresentedModule, Window, graded_atom
from ..poset import Poset, dimension_data

GENERIC = "G"


def subgroup(m: int) -> str:
    return f"C{m}"


@dataclass(frozen=True)
class TorusRank1Instance:
    """Finite cyclic subgroups of orders ``orders`` and a window of degrees."""

    orders: tuple
    lo: int = -12
    hi: int = 4
    reps: tuple | None = None

    def __post_init__(self):
        if not self.orders:
            raise ValueError("need at least one finite subgroup")
        if len(set(self.orders)) != len(self.orders) or any(m < 1 for m in self.orders):
            raise ValueError("orders must be distinct positive integers")
        if self.lo > self.hi:
            raise ValueError(f"empty window {self.lo}..{self.hi}")

    @classmethod
    def first(cls, n: int, lo: int = -12, hi: int = 4) -> "TorusRank1Instance":
        return cls(tuple(range(1, n + 1)), lo, hi)

    @property
    def n(self) -> int:
        return len(self.orders)

    @property
    def window(self) -> Window:
        return Window((self.lo,), (self.hi,))

    @property
    def representations(self) -> tuple:
        """The ``k`` of the characters ``z^k`` whose Euler classes are inverted."""
        if self.reps is not None:
            return tuple(self.reps)
        return tuple(range(1, lcm(*self.orders) + 1))


def euler_exponent(reps, m: int) -> int:
    """Power of ``c`` in the component at ``C_m`` of the Euler class of ``sum z^k``."""
    return sum(1 for k in reps if k and k % m == 0)


def torus_grading(inst: TorusRank1Instance) -> Grading:
    n = inst.n
    names = tuple(f"c{m}" for m in inst.orders)
    rings = ((GENERIC, frozenset()),) + tuple((subgroup(m), frozenset([i])) for i, m in enumerate(inst.orders))
    return Grading(names, (0,) * n, (2,) * n, 1, rings)


def torus_poset(inst: TorusRank1Instance) -> Poset:
    cs = [subgroup(m) for m in inst.orders]
    return Poset([GENERIC] + cs, [(GENERIC, c) for c in cs])


def euler_system(inst: TorusRank1Instance) -> EulerClassSystem:
    g = torus_grading(inst)
    P = torus_poset(inst)
    gens = {}
    for i, m in enumerate(inst.orders):
        seq = []
        for k in inst.representations:
            e = [0] * inst.n
            e[i] = euler_exponent([k], m)
            seq.append(tuple(e))
        gens[(GENERIC, subgroup(m))] = tuple(seq)
    labels = {GENERIC: GENERIC, **{subgroup(m): subgroup(m) for m in inst.orders}}
    return EulerClassSystem(P, gens, labels, g)


def coefficient_system(inst: TorusRank1Instance) -> CoefficientSystem:
    """``Q`` at the generic point, ``Q[c]`` at ``C_m``, inflation along each edge."""
    g = torus_grading(inst)
    P = torus_poset(inst)
    top = PresentedModule((graded_atom(g, GENERIC, ()),), g)
    values = {GENERIC: top}
    res = {}
    for i, m in enumerate(inst.orders):
        c = subgroup(m)
        values[c] = PresentedModule((graded_atom(g, c, (i,)),), g)
        res[(GENERIC, c)] = ModuleMap(top, values[c], {(0, 0): 1})
    return CoefficientSystem(P, values, res)


def torus_rank1_spec(inst: TorusRank1Instance) -> AdelicSpec:
    system = coefficient_system(inst)
    es = euler_system(inst)
    spec = AdelicSpec(system.poset, system, es.localization_system(), window=inst.window, variant="torus")
    spec.instance = inst
    spec.euler = es
    return spec


def torus_cohomology(inst: TorusRank1Instance) -> CohomologyTable:
    return adelic_cohomology(torus_rank1_spec(inst))


def expected_h1(inst: TorusRank1Instance) -> dict:
    """One copy of ``Q`` per subgroup in every negative even degree of the window."""
    return {(d,): inst.n for d in range(inst.lo, min(inst.hi, -1) + 1) if d % 2 == 0}


# ---------------------------------------------------------------- tom Dieck filtration


def codimension_levels(spec: AdelicSpec):
    dd = dimension_data(spec.poset)
    return lambda f: dd.codim(f.last)


@dataclass
class FiltrationReport:
    pages: dict              # n -> cohomology of the n-th subquotient
    total: CohomologyTable
    concentrated: bool
    collapse: bool

    def degrees(self, n: int) -> set:
        return {s for (s, _) in self.pages[n].dims}


def tom_dieck_filtration(inst: TorusRank1Instance) -> FiltrationReport:
    """Subquotients by codimension of the last vertex, with the E1 = E-infinity count."""
    spec = torus_rank1_spec(inst)
    ac = assemble(spec)
    levels = ac.levels(codimension_levels(spec))
    pages = e1_page(ac.complex, levels, inst.window)
    total = graded_cohomology(ac.complex, inst.window)
    concentrated = all(s == n for n, t in pages.items() for (s, _) in t.dims)
    summed: dict = {}
    for t in pages.values():
        for key, v in t.dims.items():
            summed[key] = summed.get(key, 0) + v
    return FiltrationReport(pages, total, concentrated, summed == total.dims)


def subquotients(inst: TorusRank1Instance) -> dict:
    spec = torus_rank1_spec(inst)
    ac = assemble(spec)
    return filtration_subquotients(ac.complex, ac.levels(codimension_levels(spec)))


# ---------------------------------------------------------------- cokernels


def iterated_cokernel(spec: AdelicSpec, chain) -> dict:
    """Top cohomology of the adelic complex on the subflags of ``chain`` ending at its last vertex.

    For ``chain = (G, C)`` this is ``Q[c, 1/c] / Q[c]``; returns ``{degree: dim}``.
    """
    chain = tuple(chain)
    if not spec.poset.is_chain(chain):
        raise ValueError(f"{chain!r} is not a chain")
    last = chain[-1]
    s = len(chain) - 1
    ac = assemble(spec, check=False)
    keep = []
    for ch in ac.cochains:
        idx = []
        for b in ch.blocks:
            f = b.flag
            if f.last == last and set(f.vertices) <= set(chain):
                idx.extend(range(b.offset, b.offset + b.size))
        keep.append(idx)
    sub = ac.complex.sub(keep)
    t = graded_cohomology(sub, spec.window)
    return {d: v for (k, d), v in t.dims.items() if k == s}


def restricted_family(exceptional: int = 3, unit: int = 5) -> RestrictedProduct:
    """``prod Q[c]`` whose Euler class is ``c`` on the first indices and a unit after them."""
    g = Grading(("c",), (0,), (2,), 1)
    comp = PresentedModule((graded_atom(g, "R", (0,)),), g)

    def euler(i: int):
        return [((1,), 1)] if i <= exceptional else [((0,), unit)]

    return RestrictedProduct(lambda i: comp, euler, exceptional, True, comp, g)


# ---------------------------------------------------------------- Euler data checks


def check_multiplicativity(inst: TorusRank1Instance, pairs) -> CheckResult:
    """``e(V + W) = e(V) e(W)`` componentwise, for lists of characters ``V, W``."""
    n = 0
    for v, w in pairs:
        for m in inst.orders:
            n += 1
            if euler_exponent(list(v) + list(w), m) != euler_exponent(v, m) + euler_exponent(w, m):
                return CheckResult(False, f"Euler class not multiplicative at C{m} for {v}, {w}", n)
    return CheckResult(True, None, n)


def check_pentagon(inst: TorusRank1Instance) -> CheckResult:
    """Transitivity of the Euler localizations on the ring at each element."""
    es = euler_system(inst)
    sys = coefficient_system(inst)
    samples = {p: [sys[p]] for p in es.poset.elements}
    return check_transitivity(es, samples)


def check_composition(inst: TorusRank1Instance) -> CheckResult:
    return euler_system(inst).check_composition()


def flags_by_level(spec: AdelicSpec) -> dict:
    lev = codimension_levels(spec)
    out: dict = {}
    for s in range(spec.top + 1):
        for f in spec.flags(s):
            out.setdefault(lev(f), []).append(f)
    return out

