"""Modules as finite direct sums of atoms, and sparse maps between them.

Two families of atoms are supported:

* ``AbelianAtom``: a free module of rank one or a cyclic torsion module over
  one of the scalar rings in :mod:`adelcoh.exactla.scalars`;
* ``GradedAtom``: a shifted, localized monomial quotient ``(R/I)(-b)[1/x_U]``
  of a multigraded polynomial ring over Q.

A map is a sparse matrix of rationals; entry ``(i, j)`` multiplies the
canonical map from domain atom ``j`` to codomain atom ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

from .scalars import Scalars


class ModuleError(ValueError):
    pass


class CanonicalMapError(ModuleError):
    """An entry does not define a valid canonical map between its atoms."""


# ---------------------------------------------------------------- abelian


@dataclass(frozen=True)
class AbelianAtom:
    """``scalars`` if ``order == 0``, else ``scalars / order`` (order already local)."""

    scalars: Scalars
    order: int = 0

    def __str__(self):
        return self.scalars.label if self.order == 0 else f"{self.scalars.label}/{self.order}"

    @property
    def free(self) -> bool:
        return self.order == 0


def abelian_atom(scalars: Scalars, order: int = 0) -> AbelianAtom | None:
    """Normalized atom; ``None`` when the module is zero."""
    if order < 0:
        raise ModuleError("torsion order must be non-negative")
    if order == 0:
        return AbelianAtom(scalars, 0)
    if scalars.is_field:
        return None
    n = scalars.local_part(order)
    return None if n == 1 else AbelianAtom(scalars, n)


def abelian_entry_allowed(src: AbelianAtom, dst: AbelianAtom, c) -> bool:
    c = Fraction(c)
    if c == 0:
        return True
    if dst.free:
        return src.free and src.scalars.maps_to(dst.scalars) and dst.scalars.contains(c)
    n = dst.order
    if any(c.denominator % q == 0 for q in _primes(n)):
        return False
    if src.free:
        # a ring map to Z/n exists iff no prime of n is inverted in the source
        return all(not src.scalars.unit_prime(q) for q in _primes(n))
    return (src.order * c).numerator % n == 0


def _primes(n: int):
    from .scalars import prime_set

    return prime_set(n)


def abelian_entry_zero(dst: AbelianAtom, c) -> bool:
    c = Fraction(c)
    if dst.free:
        return c == 0
    return c.numerator % dst.order == 0


# ---------------------------------------------------------------- graded


@dataclass(frozen=True)
class Grading:
    """Variables of the polynomial rings with their multidegrees.

    Variable ``i`` has degree ``weights[i]`` on coordinate ``coords[i]``.
    ``rings`` maps a ring label to the variables of that ring; labels not
    listed use every variable.
    """

    names: tuple
    coords: tuple
    weights: tuple
    ncoords: int
    rings: tuple = ()

    def __post_init__(self):
        if not (len(self.names) == len(self.coords) == len(self.weights)):
            raise ModuleError("grading data have inconsistent lengths")
        if any(w <= 0 for w in self.weights):
            raise ModuleError("variable weights must be positive")
        if any(not 0 <= c < self.ncoords for c in self.coords):
            raise ModuleError("grading coordinate out of range")

    @classmethod
    def standard(cls, names: Sequence[str]) -> "Grading":
        """Fine Z^n grading: variable ``i`` has degree ``e_i``."""
        n = len(names)
        return cls(tuple(names), tuple(range(n)), (1,) * n, n)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def ring_vars(self, label: str) -> frozenset:
        for lab, vs in self.rings:
            if lab == label:
                return vs
        return frozenset(range(self.nvars))

    def var_index(self, name: str) -> int:
        return self.names.index(name)

    def degree_of(self, exps: Sequence[int]) -> tuple:
        d = [0] * self.ncoords
        for i, e in enumerate(exps):
            d[self.coords[i]] += self.weights[i] * e
        return tuple(d)


@dataclass(frozen=True)
class GradedAtom:
    label: str
    support: tuple
    shift: tuple
    ideal: tuple = ()
    inverted: frozenset = frozenset()

    def __str__(self):
        s = f"{self.label}[{','.join(map(str, self.support))}]"
        if self.ideal:
            s += f"/{list(self.ideal)}"
        if self.inverted:
            s += f"[1/{sorted(self.inverted)}]"
        if any(self.shift):
            s += f"({list(self.shift)})"
        return s


def graded_atom(
    grading: Grading,
    label: str,
    support: Iterable[int],
    shift: Sequence[int] | None = None,
    ideal: Iterable[Sequence[int]] = (),
    inverted: Iterable[int] = (),
) -> GradedAtom | None:
    """Normalized graded atom, or ``None`` if it is the zero module."""
    support = set(support)
    inverted = frozenset(inverted)
    rv = grading.ring_vars(label)
    if not support <= rv:
        raise ModuleError(f"support {sorted(support)} is not inside the ring {label!r}")
    if not inverted <= support:
        # inverting a variable that acts by zero kills the module
        return None
    gens = []
    for g in ideal:
        g = tuple(g)
        if len(g) != grading.nvars:
            raise ModuleError("ideal generator has the wrong length")
        if any(g[i] < 0 for i in range(len(g))):
            raise ModuleError("ideal generators must be monomials")
        if any(g[i] for i in range(len(g)) if i not in support):
            # generator involving a zero-acting variable is already zero
            continue
        gens.append(tuple(0 if i in inverted else e for i, e in enumerate(g)))
    if any(not any(g) for g in gens):
        return None
    # a linear pure power x_i kills the variable: drop it from the support
    changed = True
    while changed:
        changed = False
        for g in gens:
            nz = [i for i, e in enumerate(g) if e]
            if len(nz) == 1 and g[nz[0]] == 1 and nz[0] not in inverted:
                i = nz[0]
                support.discard(i)
                gens = [h for h in gens if not h[i]]
                changed = True
                break
    coords = [grading.coords[i] for i in support]
    if len(set(coords)) != len(coords):
        raise ModuleError("support variables must have distinct grading coordinates")
    gens = sorted(set(gens))
    minimal = [g for g in gens if not any(h != g and all(a <= b for a, b in zip(h, g)) for h in gens)]
    if shift is None:
        shift = (0,) * grading.ncoords
    return GradedAtom(label, tuple(sorted(support)), tuple(shift), tuple(minimal), inverted)


@lru_cache(maxsize=1 << 20)
def exponent_at(grading: Grading, atom: GradedAtom, degree: tuple) -> tuple | None:
    """Exponent vector of the unique candidate monomial in ``degree``."""
    m = [0] * grading.nvars
    used = set()
    for i in atom.support:
        k = grading.coords[i]
        used.add(k)
        v = degree[k] - atom.shift[k]
        if v % grading.weights[i]:
            return None
        m[i] = v // grading.weights[i]
    for k in range(grading.ncoords):
        if k not in used and degree[k] != atom.shift[k]:
            return None
    return tuple(m)


def alive(grading: Grading, atom: GradedAtom, degree: tuple) -> bool:
    m = exponent_at(grading, atom, degree)
    if m is None:
        return False
    inv = atom.inverted
    for i in atom.support:
        if i not in inv and m[i] < 0:
            return False
    for g in atom.ideal:
        if all(g[i] <= m[i] for i in atom.support if i not in inv):
            return False
    return True


def graded_entry_allowed(grading: Grading, src: GradedAtom, dst: GradedAtom) -> bool:
    """Whether ``x^m -> x^m`` is a well defined map of modules over src's ring."""
    if src.shift != dst.shift:
        return False
    va = grading.ring_vars(src.label)
    vb = grading.ring_vars(dst.label)
    if not va <= vb:
        return False
    if not src.inverted <= dst.inverted:
        return False
    if not (set(dst.support) & va) <= set(src.support):
        return False
    for g in src.ideal:
        if not any(all(h[i] <= g[i] for i in dst.support if i not in dst.inverted) for h in dst.ideal):
            return False
    return True


@dataclass(frozen=True)
class Window:
    """Closed box ``lo <= d <= hi`` of multidegrees."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ModuleError("window bounds have different lengths")

    @classmethod
    def cube(cls, lo: int, hi: int, n: int) -> "Window":
        return cls((lo,) * n, (hi,) * n)

    @property
    def empty(self) -> bool:
        return any(a > b for a, b in zip(self.lo, self.hi))

    def __iter__(self) -> Iterator[tuple]:
        return product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def __contains__(self, d) -> bool:
        return all(a <= x <= b for a, x, b in zip(self.lo, d, self.hi))

    def __len__(self) -> int:
        n = 1
        for a, b in zip(self.lo, self.hi):
            n *= max(0, b - a + 1)
        return n


# ---------------------------------------------------------------- modules


@dataclass(frozen=True)
class PresentedModule:
    """A finite direct sum of atoms (abelian or graded, never mixed)."""

    atoms: tuple = ()
    grading: Grading | None = None

    def __post_init__(self):
        kinds = {type(a) for a in self.atoms}
        if len(kinds) > 1:
            raise ModuleError("a module cannot mix abelian and graded atoms")
        if kinds == {GradedAtom} and self.grading is None:
            raise ModuleError("graded atoms need a grading")
        if any(a is None for a in self.atoms):
            raise ModuleError("zero atoms must be dropped")

    @property
    def graded(self) -> bool:
        return self.grading is not None

    def __len__(self) -> int:
        return len(self.atoms)

    def __str__(self):
        if not self.atoms:
            return "0"
        return " + ".join(str(a) for a in self.atoms)

    def alive_indices(self, degree: tuple) -> list[int]:
        g = self.grading
        return [i for i, a in enumerate(self.atoms) if alive(g, a, degree)]

    def dim(self, degree: tuple) -> int:
        return len(self.alive_indices(degree))

    @staticmethod
    def direct_sum(mods: Sequence["PresentedModule"], grading: Grading | None = None) -> "PresentedModule":
        atoms = tuple(a for m in mods for a in m.atoms)
        gr = grading
        for m in mods:
            if m.grading is not None:
                gr = m.grading
        return PresentedModule(atoms, gr)


def zero_module(grading: Grading | None = None) -> PresentedModule:
    return PresentedModule((), grading)


@dataclass(frozen=True)
class ModuleMap:
    domain: PresentedModule
    codomain: PresentedModule
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        nr, nc = len(self.codomain), len(self.domain)
        for (i, j), c in self.entries.items():
            if not (0 <= i < nr and 0 <= j < nc):
                raise ModuleError(f"entry ({i}, {j}) outside a {nr}x{nc} map")
            c = Fraction(c)
            if c:
                clean[(i, j)] = c
        object.__setattr__(self, "entries", clean)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.codomain), len(self.domain)

    def __getitem__(self, key) -> Fraction:
        return self.entries.get(key, Fraction(0))

    def compose(self, first: "ModuleMap") -> "ModuleMap":
        """``self o first``."""
        if len(first.codomain) != len(self.domain):
            raise ModuleError("maps are not composable")
        by_row: dict[int, list] = {}
        for (j, k), c in first.entries.items():
            by_row.setdefault(j, []).append((k, c))
        out: dict = {}
        for (i, j), c in self.entries.items():
            for k, d in by_row.get(j, ()):
                out[(i, k)] = out.get((i, k), 0) + c * d
        return ModuleMap(first.domain, self.codomain, out)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        out = dict(self.entries)
        for k, c in other.entries.items():
            out[k] = out.get(k, 0) + c
        return ModuleMap(self.domain, self.codomain, out)

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(self.domain, self.codomain, {k: -c for k, c in self.entries.items()})

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return self + (-other)

    def scale(self, c) -> "ModuleMap":
        return ModuleMap(self.domain, self.codomain, {k: c * v for k, v in self.entries.items()})

    def is_zero(self) -> bool:
        if self.codomain.graded:
            return not self.entries
        atoms = self.codomain.atoms
        return all(abelian_entry_zero(atoms[i], c) for (i, _), c in self.entries.items())

    def equals(self, other: "ModuleMap") -> bool:
        return (self - other).is_zero()

    def nonzero_entries(self) -> list[tuple]:
        if self.codomain.graded:
            return sorted(self.entries)
        atoms = self.codomain.atoms
        return sorted(k for k, c in self.entries.items() if not abelian_entry_zero(atoms[k[0]], c))

    def check_canonical(self) -> None:
        """Raise ``CanonicalMapError`` on the first invalid entry."""
        dom, cod = self.domain.atoms, self.codomain.atoms
        for (i, j), c in sorted(self.entries.items()):
            a, b = dom[j], cod[i]
            if isinstance(a, GradedAtom):
                ok = graded_entry_allowed(self.codomain.grading, a, b)
            else:
                ok = abelian_entry_allowed(a, b, c)
            if not ok:
                raise CanonicalMapError(f"entry ({i}, {j}) = {c} is not a valid map {a} -> {b}")

    def dense(self) -> list[list[Fraction]]:
        m = [[Fraction(0)] * len(self.domain) for _ in range(len(self.codomain))]
        for (i, j), c in self.entries.items():
            m[i][j] = c
        return m

    def restricted(self, degree: tuple) -> tuple[list[int], list[int], list[list[Fraction]]]:
        """Rows, columns and matrix of the degree ``degree`` part."""
        rows = self.codomain.alive_indices(degree)
        cols = self.domain.alive_indices(degree)
        ci = {j: k for k, j in enumerate(cols)}
        ri = {i: k for k, i in enumerate(rows)}
        m = [[Fraction(0)] * len(cols) for _ in rows]
        for (i, j), c in self.entries.items():
            if i in ri and j in ci:
                m[ri[i]][ci[j]] = c
        return rows, cols, m


def identity_map(m: PresentedModule) -> ModuleMap:
    return ModuleMap(m, m, {(i, i): 1 for i in range(len(m))})


def zero_map(dom: PresentedModule, cod: PresentedModule) -> ModuleMap:
    return ModuleMap(dom, cod, {})


def block_map(dom_parts: Sequence[PresentedModule], cod_parts: Sequence[PresentedModule],
              blocks: dict, domain: PresentedModule | None = None,
              codomain: PresentedModule | None = None) -> ModuleMap:
    """Assemble a map between direct sums from blocks ``{(row, col): ModuleMap}``."""
    doff = [0]
    for m in dom_parts:
        doff.append(doff[-1] + len(m))
    coff = [0]
    for m in cod_parts:
        coff.append(coff[-1] + len(m))
    dom = domain if domain is not None else PresentedModule.direct_sum(dom_parts)
    cod = codomain if codomain is not None else PresentedModule.direct_sum(cod_parts)
    out: dict = {}
    for (r, c), f in blocks.items():
        for (i, j), v in f.entries.items():
            key = (coff[r] + i, doff[c] + j)
            out[key] = out.get(key, 0) + v
    return ModuleMap(dom, cod, out)


def integer_rows(m: list[list[Fraction]]) -> list[list[int]]:
    """Scale each row by a positive integer to clear denominators."""
    from math import lcm

    out = []
    for row in m:
        den = 1
        for x in row:
            if x.denominator != 1:
                den = lcm(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out
