"""Cochain complexes of presented modules and cohomology tables."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .modules import ModuleMap, PresentedModule, Window, zero_map


class ComplexError(ValueError):
    """``d o d`` is non-zero; carries the offending cohomological degree."""

    def __init__(self, degree: int, multidegree: tuple | None = None):
        self.degree = degree
        self.multidegree = multidegree
        where = f" in multidegree {multidegree}" if multidegree is not None else ""
        super().__init__(f"d^{degree + 1} o d^{degree} != 0{where}")


class WindowError(ValueError):
    pass


@dataclass
class CochainComplex:
    """``objects[k]`` sits in degree ``start + k``."""

    objects: list
    differentials: list
    start: int = 0

    def __post_init__(self):
        if len(self.differentials) != max(0, len(self.objects) - 1):
            raise ValueError("need one differential between consecutive objects")
        for k, d in enumerate(self.differentials):
            if len(d.domain) != len(self.objects[k]) or len(d.codomain) != len(self.objects[k + 1]):
                raise ValueError(f"differential {k} has the wrong shape")

    @property
    def graded(self) -> bool:
        return any(o.graded for o in self.objects)

    @property
    def grading(self):
        for o in self.objects:
            if o.grading is not None:
                return o.grading
        return None

    @property
    def degrees(self) -> range:
        return range(self.start, self.start + len(self.objects))

    def obj(self, s: int) -> PresentedModule:
        k = s - self.start
        if 0 <= k < len(self.objects):
            return self.objects[k]
        return PresentedModule((), self.grading)

    def d(self, s: int) -> ModuleMap:
        k = s - self.start
        if 0 <= k < len(self.differentials):
            return self.differentials[k]
        return zero_map(self.obj(s), self.obj(s + 1))

    def shifted(self, k: int) -> "CochainComplex":
        """Same complex with every object moved up by ``k`` degrees."""
        return CochainComplex(list(self.objects), list(self.differentials), self.start + k)

    def sub(self, keep: Sequence[Sequence[int]]) -> "CochainComplex":
        """Restriction to the atoms ``keep[k]`` of each object (sub- or quotient complex)."""
        objs = []
        for k, o in enumerate(self.objects):
            objs.append(PresentedModule(tuple(o.atoms[i] for i in keep[k]), o.grading))
        diffs = []
        for k, dm in enumerate(self.differentials):
            ri = {i: n for n, i in enumerate(keep[k + 1])}
            ci = {j: n for n, j in enumerate(keep[k])}
            ent = {(ri[i], ci[j]): c for (i, j), c in dm.entries.items() if i in ri and j in ci}
            diffs.append(ModuleMap(objs[k], objs[k + 1], ent))
        return CochainComplex(objs, diffs, self.start)


def check_complex(c: CochainComplex, window: Window | None = None) -> None:
    """Verify ``d o d == 0``; raises ``ComplexError`` at the first failure.

    Graded complexes are checked degreewise in ``window`` (composites only
    pass through atoms alive in that degree).
    """
    for k in range(len(c.differentials) - 1):
        s = c.start + k
        d1, d2 = c.differentials[k], c.differentials[k + 1]
        if not c.graded:
            if not d2.compose(d1).is_zero():
                raise ComplexError(s)
            continue
        paths = composite_paths(d2, d1, mid=0)
        if not paths:
            continue
        if window is None:
            if d2.compose(d1).entries:
                raise ComplexError(s)
            continue
        bad = first_nonvanishing(paths, c.objects[k], [c.objects[k + 1]], c.objects[k + 2],
                                 c.grading, window)
        if bad is not None:
            raise ComplexError(s, bad)


def composite_paths(second: ModuleMap, first: ModuleMap, mid: int = 0, sign=1) -> dict:
    """Entries of ``second o first`` kept as lists of ``(middle, atom, value)`` terms."""
    by_row: dict = {}
    for (j, k), a in first.entries.items():
        by_row.setdefault(j, []).append((k, a))
    paths: dict = {}
    for (i, j), b in second.entries.items():
        for k, a in by_row.get(j, ()):
            paths.setdefault((i, k), []).append((mid, j, sign * a * b))
    return paths


def merge_paths(*ps: dict) -> dict:
    out: dict = {}
    for p in ps:
        for key, terms in p.items():
            out.setdefault(key, []).extend(terms)
    return out


def first_nonvanishing(paths: dict, src: PresentedModule, mids: Sequence[PresentedModule],
                       tgt: PresentedModule, grading, window: Window):
    """First degree in ``window`` where a composite (given by paths) is non-zero."""
    from .modules import alive

    for deg in window:
        for (i, k), terms in paths.items():
            if not (alive(grading, src.atoms[k], deg) and alive(grading, tgt.atoms[i], deg)):
                continue
            tot = sum((v for m, j, v in terms if alive(grading, mids[m].atoms[j], deg)), Fraction(0))
            if tot:
                return tuple(deg)
    return None


def invariant_form(torsion) -> tuple:
    """Cyclic orders rewritten as invariant factors ``d1 | d2 | ...``."""
    from .scalars import factorize

    powers: dict = {}
    for t in torsion:
        if t > 1:
            for p, k in factorize(t):
                powers.setdefault(p, []).append(p ** k)
    if not powers:
        return ()
    n = max(len(v) for v in powers.values())
    out = [1] * n
    for p, v in powers.items():
        v = sorted(v, reverse=True)
        for i, q in enumerate(v):
            out[n - 1 - i] *= q
    return tuple(d for d in out if d > 1)


@dataclass(frozen=True)
class AbelianGroup:
    """Direct sum of free modules over named rings, cyclic torsion and Prufer groups."""

    free: tuple = ()
    torsion: tuple = ()
    divisible: tuple = ()

    @classmethod
    def make(cls, free: dict | None = None, torsion=(), divisible: dict | None = None) -> "AbelianGroup":
        fr = tuple(sorted((k, v) for k, v in (free or {}).items() if v))
        dv = tuple(sorted((k, v) for k, v in (divisible or {}).items() if v))
        return cls(fr, invariant_form(torsion), dv)

    @property
    def rank(self) -> int:
        return sum(v for _, v in self.free)

    @property
    def is_zero(self) -> bool:
        return not (self.free or self.torsion or self.divisible)

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        fr = dict(self.free)
        for k, v in other.free:
            fr[k] = fr.get(k, 0) + v
        dv = dict(self.divisible)
        for k, v in other.divisible:
            dv[k] = dv.get(k, 0) + v
        return AbelianGroup.make(fr, self.torsion + other.torsion, dv)

    def __str__(self):
        parts = [f"{lab}^{r}" if r > 1 else lab for lab, r in self.free]
        parts += [f"Z/{t}" for t in self.torsion]
        parts += [f"(Q_{p}/Z_{p})^{n}" if n > 1 else f"Q_{p}/Z_{p}" for p, n in self.divisible]
        return " + ".join(parts) if parts else "0"


@dataclass
class CohomologyTable:
    """Cohomology of a complex.

    ``groups`` maps a degree to an ``AbelianGroup`` (abelian complexes);
    ``dims`` maps ``(degree, multidegree)`` to a non-zero Q-dimension (graded).
    """

    kind: str
    degrees: tuple
    groups: dict = field(default_factory=dict)
    dims: dict = field(default_factory=dict)
    window: Window | None = None
    boundary_coupled: bool = False

    def group(self, s: int) -> AbelianGroup:
        return self.groups.get(s, AbelianGroup())

    def dim(self, s: int, degree: tuple) -> int:
        return self.dims.get((s, tuple(degree)), 0)

    def total_dim(self, s: int, total: int) -> int:
        return sum(v for (t, d), v in self.dims.items() if t == s and sum(d) == total)

    def support(self, s: int) -> dict:
        return {d: v for (t, d), v in self.dims.items() if t == s}

    def same_as(self, other: "CohomologyTable") -> bool:
        if self.kind != other.kind:
            return False
        if self.kind == "graded":
            return self.dims == other.dims
        degs = set(self.degrees) | set(other.degrees)
        return all(self.group(s) == other.group(s) for s in degs)

    def is_zero(self) -> bool:
        if self.kind == "graded":
            return not self.dims
        return all(g.is_zero for g in self.groups.values())

    def rows(self) -> list[dict]:
        out = []
        if self.kind == "graded":
            for (s, d), v in sorted(self.dims.items()):
                out.append({"degree": s, "multidegree": list(d), "rank": v, "torsion": [],
                            "ring": "Q", "divisible": []})
        else:
            for s in self.degrees:
                g = self.group(s)
                ring = "+".join(lab for lab, _ in g.free) if g.free else ""
                out.append({"degree": s, "multidegree": None, "rank": g.rank,
                            "torsion": list(g.torsion), "ring": ring,
                            "divisible": [f"{p}^{n}" for p, n in g.divisible]})
        return out

    def pretty(self) -> str:
        lines = []
        if self.kind == "graded":
            for s in self.degrees:
                sup = self.support(s)
                if not sup:
                    lines.append(f"H^{s} = 0")
                    continue
                lines.append(f"H^{s}: " + ", ".join(f"{list(d)}:{v}" for d, v in sorted(sup.items())))
        else:
            for s in self.degrees:
                lines.append(f"H^{s} = {self.group(s)}")
        return "\n".join(lines)


def cohomology(c: CochainComplex, window: Window | None = None) -> CohomologyTable:
    """Exact cohomology; graded complexes need a window."""
    if c.graded:
        from .graded import graded_cohomology

        return graded_cohomology(c, window)
    from .abelian import abelian_cohomology

    check_complex(c)
    return abelian_cohomology(c)
