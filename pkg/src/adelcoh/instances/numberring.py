"""Dimension-one adelic complexes over Z_(S): the Hasse square and its relatives.

The poset has a generic point ``0`` above one closed point per prime of
``S``.  Modules are finitely generated over ``R = Z_(S)`` and given by an
integer relation matrix.  Completions are structural: a free summand
becomes ``Z_p`` and torsion keeps its ``p``-primary part.  Elements of
p-adic corners are :class:`PAdic` numbers, used only where elements are
needed (splitting and reconstruction).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from ..adelic import AdelicSpec, adelic_cohomology, assemble
from ..coeff import CoefficientSystem, LocalizationSystem, identity_rule
from ..exactla.abelian import abelian_cohomology
from ..exactla.complex import AbelianGroup, CochainComplex, CohomologyTable
from ..exactla.modules import AbelianAtom, ModuleMap, PresentedModule, abelian_atom, identity_map
from ..exactla.scalars import Q, Qp, Scalars, ZS, Zp, factorize, is_prime
from ..exactla.snf import smith_normal_form
from ..poset import Flag, Poset
from .padic import InsufficientPrecision, PAdic, digit_stream

GENERIC = 0
VARIANTS = ("L,LambdaR", "L,Lambda'R", "LambdaL,R")


# ---------------------------------------------------------------- atom rules


def rationalize(atom: AbelianAtom, grading=None):
    if atom is None or not atom.free:
        return None
    s = atom.scalars
    if s.complete:
        return AbelianAtom(Qp(s.p))
    return AbelianAtom(Q)


def localize_at(p: int):
    """Localization at the prime ``p``: every other prime becomes a unit."""

    def rule(atom: AbelianAtom, grading=None):
        if atom is None:
            return None
        s = atom.scalars
        if s.complete:
            t = s if s.p == p else Qp(s.p)
        elif s.is_field:
            t = s
        else:
            t = ZS({p}) if not s.unit_prime(p) else Q
        return abelian_atom(t, atom.order)

    rule.prime = p
    return rule


def complete_at(p: int):
    """Structural p-completion: free summands become ``Z_p``, torsion its p-part."""

    def rule(atom: AbelianAtom, grading=None):
        if atom is None:
            return None
        s = atom.scalars
        if s.unit_prime(p) or s.is_field:
            return None
        if s.complete and s.p != p:
            return None
        return abelian_atom(Zp(p), atom.order)

    rule.prime = p
    return rule


def compose_rules(outer, inner):
    def rule(atom, grading=None):
        return outer(inner(atom, grading), grading)

    return rule


# ---------------------------------------------------------------- modules


@dataclass
class FGModule:
    """``Z_(S)^n / rows(relations)`` in Smith form: generator ``j`` is row ``j`` of ``basis``.

    ``invariants[i]`` is the order of the ``i``-th cyclic summand (0 when free).
    ``atoms`` lists the non-zero summands and ``summand[i]`` their positions.
    """

    primes: frozenset
    relations: list
    ngens: int
    invariants: list
    basis: list
    module: PresentedModule
    summand: list

    @property
    def group(self) -> AbelianGroup:
        lab = ZS(self.primes).label
        free = sum(1 for d in self.invariants if d == 0)
        tors = [ZS(self.primes).local_part(d) for d in self.invariants if d > 1]
        return AbelianGroup.make({lab: free}, tors)

    def coordinates(self, j: int) -> list:
        """Smith coordinates of generator ``j`` (one per non-zero summand)."""
        return [self.basis[j][i] for i in self.summand]


def module_from_relations(primes, relations, ngens: int | None = None) -> FGModule:
    primes = frozenset(primes)
    if not primes:
        raise ValueError("S must be non-empty")
    for p in primes:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
    rel = [[int(x) for x in row] for row in relations]
    if ngens is None:
        ngens = len(rel[0]) if rel else 0
    if any(len(r) != ngens for r in rel):
        raise ValueError("relation rows have inconsistent length")
    R = ZS(primes)
    if rel:
        _, D, V = smith_normal_form(rel)
    else:
        D, V = [], [[int(i == j) for j in range(ngens)] for i in range(ngens)]
    inv = [abs(D[i][i]) if i < len(D) and i < ngens else 0 for i in range(ngens)]
    atoms, summand = [], []
    for i, d in enumerate(inv):
        a = abelian_atom(R, d)
        if a is not None:
            atoms.append(a)
            summand.append(i)
    return FGModule(primes, rel, ngens, inv, [list(r) for r in V], PresentedModule(tuple(atoms)), summand)


def free_module(primes, rank: int) -> FGModule:
    return module_from_relations(primes, [], rank)


def apply_rule_with_unit(rule, m: PresentedModule) -> tuple[PresentedModule, ModuleMap, list]:
    out, idx = [], []
    for a in m.atoms:
        b = rule(a)
        idx.append(None if b is None else len(out))
        if b is not None:
            out.append(b)
    lm = PresentedModule(tuple(out))
    return lm, ModuleMap(m, lm, {(i, j): 1 for j, i in enumerate(idx) if i is not None}), idx


# ---------------------------------------------------------------- specs


def hasse_poset(primes) -> Poset:
    primes = sorted(primes)
    return Poset([GENERIC] + primes, [(GENERIC, p) for p in primes])


def _lambda_prime_rules(primes, split):
    # completion at the elements whose dimension lies in the split set; the
    # generic point has dimension 1 and its completion is the identity
    rules = {GENERIC: identity_rule}
    for p in primes:
        rules[p] = complete_at(p) if 0 in split else identity_rule
    return rules


def hasse_spec(primes, relations=None, ngens: int | None = None, variant: str = "L,LambdaR",
               policy: str = "specializations", module: FGModule | None = None,
               split=(0,), precision: int = 32) -> AdelicSpec:
    """The adelic spec of a f.g. ``Z_(S)``-module for one of the three variants.

    ``split`` is the set of dimensions that are completed in the
    ``(L, Lambda'R)`` variant; it must contain the closed points.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    if module is None:
        module = module_from_relations(primes, relations if relations is not None else [], ngens)
    primes = sorted(module.primes)
    P = hasse_poset(primes)
    M = module.module
    L = {GENERIC: rationalize}
    for p in primes:
        L[p] = localize_at(p)
    if variant == "LambdaL,R":
        rules = {GENERIC: rationalize}
        for p in primes:
            rules[p] = compose_rules(complete_at(p), localize_at(p))
        values = {x: M for x in P.elements}
        res = {(GENERIC, p): identity_map(M) for p in primes}
        aug = {x: identity_map(M) for x in P.elements}
        name = "Lambda L"
    else:
        if variant == "L,Lambda'R":
            split = frozenset(split)
            if 0 not in split:
                raise ValueError("the split must complete at the closed points")
            if not split <= {0, 1}:
                raise ValueError("dimensions in the split must be 0 or 1")
            comp = _lambda_prime_rules(primes, split)
        else:
            comp = {GENERIC: identity_rule, **{p: complete_at(p) for p in primes}}
        values, aug = {}, {}
        for x in P.elements:
            values[x], aug[x], _ = apply_rule_with_unit(comp[x], M)
        res = {(GENERIC, p): aug[p] for p in primes}
        rules = L
        name = "L"
    system = CoefficientSystem(P, values, res)
    spec = AdelicSpec(P, system, LocalizationSystem(P, rules, name), policy=policy, variant=variant,
                      augmentation=M, aug_maps=aug)
    spec.fg_module = module
    spec.precision = precision
    return spec


def hasse_cohomology(spec: AdelicSpec, augmented: bool = False) -> CohomologyTable:
    return adelic_cohomology(spec, augmented)


def localization_system(primes) -> LocalizationSystem:
    P = hasse_poset(primes)
    return LocalizationSystem(P, {GENERIC: rationalize, **{p: localize_at(p) for p in primes}}, "L")


def completion_system(primes) -> LocalizationSystem:
    P = hasse_poset(primes)
    return LocalizationSystem(P, {GENERIC: identity_rule, **{p: complete_at(p) for p in primes}}, "Lambda")


# ---------------------------------------------------------------- elements


def convert(x, src: AbelianAtom, dst: AbelianAtom, k: int):
    """Image of an element under the canonical map ``src -> dst``."""
    t = dst.scalars
    if not dst.free:
        n = dst.order
        if isinstance(x, PAdic):
            return x.residue(_exponent(n, x.p))
        x = Fraction(x)
        return (x.numerator * pow(x.denominator, -1, n)) % n
    if t.complete:
        if isinstance(x, PAdic):
            return x
        return PAdic.from_rational(x, t.p, k)
    if isinstance(x, PAdic):
        raise ValueError(f"no map from {src} to {dst}")
    return Fraction(x)


def _exponent(n: int, p: int) -> int:
    (q, e), = factorize(n)
    if q != p:
        raise ValueError(f"{n} is not a power of {p}")
    return e


def scale(c: Fraction, y, atom: AbelianAtom):
    if not atom.free:
        c = Fraction(c)
        n = atom.order
        return (y * c.numerator * pow(c.denominator, -1, n)) % n
    return y * c if isinstance(y, PAdic) else Fraction(y) * c


def zero_of(atom: AbelianAtom, k: int):
    if not atom.free:
        return 0
    if atom.scalars.complete:
        return PAdic.zero(atom.scalars.p)
    return Fraction(0)


def evaluate(f: ModuleMap, xs: list, k: int = 32) -> list:
    """Apply ``f`` to an element given by one value per domain atom."""
    out = [zero_of(a, k) for a in f.codomain.atoms]
    for (i, j), c in sorted(f.entries.items()):
        src, dst = f.domain.atoms[j], f.codomain.atoms[i]
        y = scale(c, convert(xs[j], src, dst, k), dst)
        out[i] = (out[i] + y) % dst.order if not dst.free else out[i] + y
    return out


def is_zero_value(y) -> bool:
    if isinstance(y, PAdic):
        return y.is_exact_zero or y.k == 0
    return y == 0


# ---------------------------------------------------------------- H^0


@dataclass
class Reconstruction:
    """``M -> H^0`` by the diagonal unit and ``H^0 -> M`` by reading coordinates."""

    group: AbelianGroup
    expected: AbelianGroup
    images: list
    recovered: list
    in_kernel: bool
    round_trip: bool

    @property
    def ok(self) -> bool:
        return self.in_kernel and self.round_trip and self.group == self.expected


def _crt(residues: list[tuple[int, int]]) -> tuple[int, int]:
    x, n = 0, 1
    for r, m in residues:
        # solve x' = x mod n, x' = r mod m (coprime moduli)
        t = ((r - x) * pow(n, -1, m)) % m
        x, n = x + n * t, n * m
    return x % n, n


def _element(fg: FGModule, j: int) -> list:
    return [Fraction(c) if a.free else c % a.order for c, a in zip(fg.coordinates(j), fg.module.atoms)]


def h0_reconstruct(spec: AdelicSpec, precision: int | None = None) -> Reconstruction:
    """Check ``H^0 = M`` on generators, at the given p-adic precision."""
    k = precision or getattr(spec, "precision", 32)
    fg: FGModule = spec.fg_module
    ac = assemble(spec, augmented=True)
    table = abelian_cohomology(CochainComplex(ac.complex.objects[1:], ac.complex.differentials[1:], 0))
    aug = ac.complex.differentials[0]
    d0 = ac.complex.differentials[1] if len(ac.complex.differentials) > 1 else None
    c0 = ac.cochains[0]
    images, recovered = [], []
    in_kernel = True
    for j in range(fg.ngens):
        x = evaluate(aug, _element(fg, j), k)
        images.append(x)
        if d0 is not None:
            in_kernel &= all(is_zero_value(y) for y in evaluate(d0, x, k))
        recovered.append(_read(spec, c0, x))
    want = [_element(fg, j) for j in range(fg.ngens)]
    return Reconstruction(table.group(0), fg.group, images, recovered, in_kernel, recovered == want)


def _slot(spec: AdelicSpec, c0, v, pos: int):
    """Position in the degree-0 cochains of summand ``pos`` of ``M`` at vertex ``v``."""
    b = c0.block_of(Flag((v,)))
    i = b.index[_index_in(spec, v, pos)]
    return None if i is None else b.offset + i


def _index_in(spec: AdelicSpec, v, pos: int) -> int:
    for (i, j) in spec.aug_maps[v].entries:
        if j == pos:
            return i
    return -1


def _read(spec: AdelicSpec, c0, x: list) -> list:
    """Coordinates in ``M`` of a degree-0 cocycle: rational part for free summands, CRT for torsion."""
    fg: FGModule = spec.fg_module
    out = []
    for pos, atom in enumerate(fg.module.atoms):
        if atom.free:
            q = x[_slot(spec, c0, GENERIC, pos)]
            if not ZS(fg.primes).contains(q):
                raise ValueError(f"rational coordinate {q} is not S-integral")
            for p in sorted(fg.primes):
                a_p = x[_slot(spec, c0, p, pos)]
                if not a_p.agrees(PAdic.from_rational(q, p, max(a_p.k, 1))):
                    raise ValueError(f"components at {p} and 0 disagree")
            out.append(q)
        else:
            res = []
            for p in sorted(fg.primes):
                if _index_in(spec, p, pos) < 0:
                    continue
                i = _slot(spec, c0, p, pos)
                if i is not None:
                    res.append((x[i], c0.module.atoms[i].order))
            r, n = _crt(res)
            if n != atom.order:
                raise ValueError(f"torsion components recover Z/{n}, expected Z/{atom.order}")
            out.append(r)
    return out


# ---------------------------------------------------------------- splitting


@dataclass
class Split:
    q: Fraction
    a: dict
    convention: str


def adelic_split(targets: dict, convention: str = "complex") -> Split:
    """Preimage ``(q, (a_p))`` of a degree-one target ``(b_p)`` with ``a_p`` integral.

    ``"complex"`` follows the differential ``b_p = a_p - q``;
    ``"difference"`` reads targets as ``b_p = q - a_p``.
    """
    if convention not in ("complex", "difference"):
        raise ValueError("convention must be 'complex' or 'difference'")
    for p, b in targets.items():
        if not isinstance(b, PAdic) or b.p != p:
            raise ValueError(f"target at {p} is not a {p}-adic number")
    s = sum((b.principal_part() for b in targets.values()), Fraction(0))
    q = -s if convention == "complex" else s
    a = {}
    for p, b in targets.items():
        a_p = b + q if convention == "complex" else -b + q
        if not a_p.is_integral():
            raise ArithmeticError(f"component at {p} is not integral")  # pragma: no cover
        a[p] = a_p
    return Split(q, a, convention)


def apply_delta(spec: AdelicSpec, split: Split, k: int) -> dict:
    """``delta^0`` of the split, read off at each flag ``(0, p)``."""
    ac = assemble(spec, check=False)
    c0, c1 = ac.cochains[0], ac.cochains[1]
    x = [None] * len(c0.module)
    for b in c0.blocks:
        v = b.flag.last
        val = split.q if v == GENERIC else split.a[v]
        for i in b.index:
            if i is not None:
                x[b.offset + i] = val
    y = evaluate(ac.complex.differentials[0], x, k)
    out = {}
    for b in c1.blocks:
        (i,) = [i for i in b.index if i is not None]
        out[b.flag.last] = y[b.offset + i]
    if split.convention == "difference":
        out = {p: -v for p, v in out.items()}
    return out


def round_trip(spec: AdelicSpec, targets: dict, convention: str = "complex") -> tuple[Split, bool]:
    sp = adelic_split(targets, convention)
    k = max((b.k for b in targets.values()), default=1) or 1
    back = apply_delta(spec, sp, k)
    ok = all(back[p].agrees(targets[p]) for p in targets)
    return sp, ok


def random_targets(primes, seed: int, precision: int = 32, deep: float = 0.1):
    """Seeded targets: exact rationals with S-denominators or digit streams.

    A fraction ``deep`` of the streams starts below ``p^-precision`` so that
    reading their principal part needs more digits.
    """
    rng = random.Random(seed)
    kind = rng.random()
    if kind < 0.4:
        out = {}
        for p in primes:
            num = rng.randrange(-10**6, 10**6)
            den = 1
            for q in primes:
                den *= q ** rng.randrange(0, 6)
            x = Fraction(num, den)
            out[p] = lambda k, x=x, p=p: PAdic.from_rational(x, p, k)
        return out
    streams = {}
    for p in primes:
        v = -precision - rng.randrange(1, 4) if rng.random() < deep else rng.randrange(-8, 4)
        streams[p] = digit_stream(rng.randrange(1 << 30), p, v)
    return streams


def split_with_retry(spec: AdelicSpec, streams: dict, precision: int, convention: str = "complex"):
    """Split at ``precision``; on ``InsufficientPrecision`` retry once at twice the precision."""
    for k in (precision, 2 * precision):
        targets = {p: s(k) for p, s in streams.items()}
        try:
            sp, ok = round_trip(spec, targets, convention)
            return sp, ok, k
        except InsufficientPrecision:
            if k != precision:
                raise
    raise AssertionError("unreachable")  # pragma: no cover


# ---------------------------------------------------------------- completion exactness


def completion_sequence(matrix, p: int) -> CochainComplex:
    """``Z_p^n -A-> Z_p^m -> Lambda_p coker(A)`` built from the Smith form of ``A``."""
    A = [[int(x) for x in row] for row in matrix]
    m, n = len(A), len(A[0])
    U, D, _ = smith_normal_form(A)
    Zpp = AbelianAtom(Zp(p))
    src = PresentedModule((Zpp,) * n)
    mid = PresentedModule((Zpp,) * m)
    atoms, rows = [], []
    for i in range(m):
        d = abs(D[i][i]) if i < n else 0
        a = abelian_atom(Zp(p), d)
        if a is not None:
            atoms.append(a)
            rows.append(i)
    tgt = PresentedModule(tuple(atoms))
    f = ModuleMap(src, mid, {(i, j): A[i][j] for i in range(m) for j in range(n) if A[i][j]})
    g_ent = {}
    for r, i in enumerate(rows):
        for j in range(m):
            c = U[i][j]
            if c and (atoms[r].free or c % atoms[r].order):
                g_ent[(r, j)] = c
    g = ModuleMap(mid, tgt, g_ent)
    return CochainComplex([src, mid, tgt], [f, g], 0)


def completion_exact(matrix, p: int) -> bool:
    """Exactness of ``Z_p^n -> Z_p^m -> Lambda_p coker -> 0`` at the middle and the end."""
    from ..exactla.snf import invariant_factors

    t = abelian_cohomology(completion_sequence(matrix, p))
    rank = sum(1 for d in invariant_factors([[int(x) for x in r] for r in matrix]) if d)
    n = len(matrix[0])
    return t.group(1).is_zero and t.group(2).is_zero and t.group(0).rank == n - rank \
        and not t.group(0).torsion
