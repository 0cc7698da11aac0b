"""Assembly of adelic cochain complexes and their decomposition into cubes.

In degree ``s`` the complex is the sum over flags ``p0 > ... > ps`` of
``A_p0 ... A_ps M(ps)``.  The differential is ``sum (-1)^i d_i`` where ``d_i``
omits vertex ``i``: for ``i <= s`` it inserts the unit of ``A_pi``, and
``d_{s+1}`` restricts ``M(ps) -> M(ps+1)`` before localizing.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .coeff import CoefficientSystem, LocalizationSystem
from .exactla.complex import CochainComplex, CohomologyTable, check_complex, cohomology
from .exactla.cube import CubeDiagram, totalize
from .exactla.modules import ModuleMap, PresentedModule, Window
from .poset import (
    DimensionVector,
    Flag,
    Poset,
    all_dimension_vectors,
    dimension_data,
    dimension_vector,
    flags as poset_flags,
)

POLICIES = ("specializations", "all-closed-points")


class AssemblyError(ValueError):
    pass


@dataclass
class AdelicSpec:
    """Inputs of an adelic complex.

    ``policy="all-closed-points"`` also allows a closed point that is not a
    specialization as the last vertex; the needed maps come from ``extra``.
    ``augmentation`` with ``aug_maps[p]: aug -> M(p)`` adds degree -1.
    """

    poset: Poset
    system: CoefficientSystem
    localization: LocalizationSystem
    policy: str = "specializations"
    window: Window | None = None
    variant: str = ""
    augmentation: PresentedModule | None = None
    aug_maps: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise AssemblyError(f"unknown product policy {self.policy!r}")
        if self.system.poset is not self.poset and set(self.system.poset.elements) != set(self.poset.elements):
            raise AssemblyError("coefficient system lives on a different poset")
        if set(self.localization.poset.elements) != set(self.poset.elements):
            raise AssemblyError("localization system lives on a different poset")
        self._flags: dict = {}

    @property
    def grading(self):
        return self.system.grading

    def flags(self, s: int) -> list[Flag]:
        if s in self._flags:
            return self._flags[s]
        P = self.poset
        out = list(poset_flags(P, s))
        if self.policy == "all-closed-points" and s >= 1:
            closed = P.minimal
            for f in poset_flags(P, s - 1):
                if f.last in closed:
                    continue
                for m in closed:
                    if not P.lt(m, f.last):
                        out.append(Flag(f.vertices + (m,)))
            out.sort(key=lambda f: tuple(P.index(v) for v in f.vertices))
        self._flags[s] = out
        return out

    def restriction(self, a, b) -> ModuleMap:
        if a == b or self.poset.lt(b, a):
            return self.system.map(a, b)
        if (a, b) in self.extra:
            return self.extra[(a, b)]
        raise AssemblyError(f"no map M({a}) -> M({b}) for the closed-point policy")

    @property
    def top(self) -> int:
        s = 0
        while self.flags(s + 1):
            s += 1
        return s


@dataclass
class Block:
    flag: Flag
    offset: int
    index: list      # atom j of M(last) -> position inside the block or None
    size: int


@dataclass
class Cochains:
    module: PresentedModule
    blocks: list

    def block_of(self, flag: Flag) -> Block:
        for b in self.blocks:
            if b.flag == flag:
                return b
        raise KeyError(flag)

    def atom_flags(self) -> list[Flag]:
        """The flag owning each atom, in order."""
        out = []
        for b in self.blocks:
            out.extend([b.flag] * b.size)
        return out


def _block_atoms(spec: AdelicSpec, flag: Flag):
    m = spec.system[flag.last]
    atoms, index = [], []
    for a in m.atoms:
        b = spec.localization.chain_atom(flag.vertices, a, m.grading)
        if b is None:
            index.append(None)
        else:
            index.append(len(atoms))
            atoms.append(b)
    return atoms, index


def adelic_cochains(spec: AdelicSpec, s: int, flags: list[Flag] | None = None) -> Cochains:
    atoms, blocks = [], []
    for f in (flags if flags is not None else spec.flags(s)):
        a, idx = _block_atoms(spec, f)
        blocks.append(Block(f, len(atoms), idx, len(a)))
        atoms.extend(a)
    return Cochains(PresentedModule(tuple(atoms), spec.grading), blocks)


def _face_entries(spec: AdelicSpec, src: Block, tgt: Block, i: int, sign: int, out: dict) -> None:
    """Add ``sign * d_i`` from block ``src`` (the face) to block ``tgt``."""
    s1 = tgt.flag.s
    if i < s1:
        # unit of A at vertex i; the last vertex is shared
        for j, (a, b) in enumerate(zip(src.index, tgt.index)):
            if a is not None and b is not None:
                key = (tgt.offset + b, src.offset + a)
                out[key] = out.get(key, 0) + sign
    else:
        r = spec.restriction(src.flag.last, tgt.flag.last)
        for (jt, js), c in r.entries.items():
            a, b = src.index[js], tgt.index[jt]
            if a is not None and b is not None:
                key = (tgt.offset + b, src.offset + a)
                out[key] = out.get(key, 0) + sign * c


def adelic_differential(spec: AdelicSpec, s: int, src: Cochains | None = None,
                        tgt: Cochains | None = None) -> ModuleMap:
    src = src or adelic_cochains(spec, s)
    tgt = tgt or adelic_cochains(spec, s + 1)
    pos = {b.flag: b for b in src.blocks}
    out: dict = {}
    for tb in tgt.blocks:
        for i in range(tb.flag.s + 1):
            face = tb.flag.face(i)
            sb = pos.get(face)
            if sb is None:
                continue
            _face_entries(spec, sb, tb, i, -1 if i % 2 else 1, out)
    return ModuleMap(src.module, tgt.module, out)


def _augmentation_map(spec: AdelicSpec, c0: Cochains) -> ModuleMap:
    aug = spec.augmentation
    out: dict = {}
    for b in c0.blocks:
        p = b.flag.last
        if p not in spec.aug_maps:
            raise AssemblyError(f"no augmentation map at {p!r}")
        for (j, k), c in spec.aug_maps[p].entries.items():
            if b.index[j] is not None:
                key = (b.offset + b.index[j], k)
                out[key] = out.get(key, 0) + c
    return ModuleMap(aug, c0.module, out)


@dataclass
class AdelicComplex:
    spec: AdelicSpec
    complex: CochainComplex
    cochains: list

    def levels(self, level_of_flag) -> list[list[int]]:
        """Per-atom levels from a function of the owning flag (augmentation: level 0)."""
        out = []
        if self.complex.start == -1:
            out.append([0] * len(self.spec.augmentation))
        for ch in self.cochains:
            out.append([level_of_flag(f) for f in ch.atom_flags()])
        return out


def assemble(spec: AdelicSpec, augmented: bool = False, check: bool = True) -> AdelicComplex:
    top = spec.top
    cochains = [adelic_cochains(spec, s) for s in range(top + 1)]
    diffs = [adelic_differential(spec, s, cochains[s], cochains[s + 1]) for s in range(top)]
    objs = [c.module for c in cochains]
    start = 0
    if augmented:
        if spec.augmentation is None:
            raise AssemblyError("no augmentation given")
        diffs = [_augmentation_map(spec, cochains[0])] + diffs
        objs = [spec.augmentation] + objs
        start = -1
    cx = CochainComplex(objs, diffs, start)
    if check:
        check_complex(cx, spec.window)
    return AdelicComplex(spec, cx, cochains)


def adelic_cohomology(spec: AdelicSpec, augmented: bool = False) -> CohomologyTable:
    ac = assemble(spec, augmented)
    if ac.complex.graded:
        from .exactla.graded import graded_cohomology

        return graded_cohomology(ac.complex, spec.window, check=False)
    return cohomology(ac.complex)


def decompose_by_dimension(spec: AdelicSpec, augmented: bool = False) -> CubeDiagram:
    """The punctured cube of ``C^d`` over dimension vectors ``d`` with the d_i as edges."""
    dd = dimension_data(spec.poset)
    r = dd.max_dim
    by_vec: dict = {}
    for s in range(spec.top + 1):
        for f in spec.flags(s):
            by_vec.setdefault(dimension_vector(f, dd), []).append(f)
    vertices, cochains = {}, {}
    for v in all_dimension_vectors(r):
        ch = adelic_cochains(spec, len(v) - 1, by_vec.get(v, []))
        cochains[v] = ch
        vertices[v] = ch.module
    edges = {}
    for v in all_dimension_vectors(r):
        for w in all_dimension_vectors(r):
            if len(w) != len(v) + 1 or not set(v.dims) <= set(w.dims):
                continue
            i = v.insertion_position(w)
            src, tgt = cochains[v], cochains[w]
            pos = {b.flag: b for b in src.blocks}
            out: dict = {}
            for tb in tgt.blocks:
                sb = pos.get(tb.flag.face(i))
                if sb is not None:
                    _face_entries(spec, sb, tb, i, 1, out)
            edges[(v, w)] = ModuleMap(src.module, tgt.module, out)
    cube = CubeDiagram(r, vertices, edges, spec.grading)
    if augmented:
        if spec.augmentation is None:
            raise AssemblyError("no augmentation given")
        cube.augmentation = spec.augmentation
        for d in range(r + 1):
            v = DimensionVector((d,))
            cube.aug_edges[v] = _augmentation_map(spec, cochains[v])
    return cube


def totalized(spec: AdelicSpec, augmented: bool = False) -> CochainComplex:
    return totalize(decompose_by_dimension(spec, augmented), augmented)


def dimension_vectors_of(spec: AdelicSpec) -> set:
    dd = dimension_data(spec.poset)
    return {dimension_vector(f, dd) for s in range(spec.top + 1) for f in spec.flags(s)}
