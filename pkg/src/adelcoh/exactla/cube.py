"""Punctured cubes of modules indexed by dimension vectors, and their totalization."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..poset import DimensionVector, all_dimension_vectors
from .complex import (
    CochainComplex,
    composite_paths,
    first_nonvanishing,
    merge_paths,
)
from .modules import ModuleMap, PresentedModule, Window, block_map, zero_map


class CubeError(ValueError):
    """A square of the cube does not commute; carries the offending face."""

    def __init__(self, face, multidegree=None):
        self.face = face
        self.multidegree = multidegree
        super().__init__(f"face {face} does not commute" + (
            f" in multidegree {multidegree}" if multidegree is not None else ""))


EMPTY = DimensionVector(())


@dataclass
class CubeDiagram:
    """Modules at the non-empty dimension vectors of ``{0..r}`` and unsigned edges.

    ``edges[(v, w)]`` is the map for ``w`` obtained from ``v`` by inserting one
    entry.  An optional augmentation sits at the empty vector.
    """

    r: int
    vertices: dict
    edges: dict
    grading: object = None
    augmentation: PresentedModule | None = None
    aug_edges: dict = field(default_factory=dict)

    def vertex(self, v: DimensionVector) -> PresentedModule:
        if v == EMPTY:
            if self.augmentation is None:
                return PresentedModule((), self.grading)
            return self.augmentation
        return self.vertices.get(v, PresentedModule((), self.grading))

    def edge(self, v: DimensionVector, w: DimensionVector) -> ModuleMap:
        if v == EMPTY:
            f = self.aug_edges.get(w)
        else:
            f = self.edges.get((v, w))
        return f if f is not None else zero_map(self.vertex(v), self.vertex(w))

    def ordered(self, s: int) -> list:
        if s == -1:
            return [EMPTY]
        return [v for v in all_dimension_vectors(self.r) if len(v) == s + 1]

    def extensions(self, v: DimensionVector) -> list:
        out = []
        for d in range(self.r, -1, -1):
            if d in v.dims:
                continue
            w = DimensionVector(tuple(sorted(v.dims + (d,), reverse=True)))
            out.append(w)
        return out


def totalize(cube: CubeDiagram, augmented: bool = False) -> CochainComplex:
    """Total complex with the sign ``(-1)^i`` for an entry inserted at position ``i``."""
    lo = -1 if augmented and cube.augmentation is not None else 0
    degrees = list(range(lo, cube.r + 1))
    parts = {s: cube.ordered(s) for s in degrees}
    objs = [PresentedModule.direct_sum([cube.vertex(v) for v in parts[s]], cube.grading) for s in degrees]
    diffs = []
    for n, s in enumerate(degrees[:-1]):
        src, tgt = parts[s], parts[s + 1]
        blocks = {}
        for ci, v in enumerate(src):
            for w in cube.extensions(v):
                ri = tgt.index(w)
                pos = v.insertion_position(w) if v != EMPTY else 0
                f = cube.edge(v, w)
                blocks[(ri, ci)] = f if pos % 2 == 0 else -f
        diffs.append(block_map([cube.vertex(v) for v in src], [cube.vertex(w) for w in tgt], blocks,
                               objs[n], objs[n + 1]))
    return CochainComplex(objs, diffs, lo)


def check_faces(cube: CubeDiagram, window: Window | None = None) -> None:
    """Every square commutes (degreewise in ``window`` for graded cubes)."""
    starts = [EMPTY] if cube.augmentation is not None else []
    starts += all_dimension_vectors(cube.r)
    for v in starts:
        exts = cube.extensions(v)
        for a in range(len(exts)):
            for b in range(a + 1, len(exts)):
                u1, u2 = exts[a], exts[b]
                w = DimensionVector(tuple(sorted(set(u1.dims) | set(u2.dims), reverse=True)))
                p1 = composite_paths(cube.edge(u1, w), cube.edge(v, u1), mid=0)
                p2 = composite_paths(cube.edge(u2, w), cube.edge(v, u2), mid=1, sign=-1)
                paths = merge_paths(p1, p2)
                face = (v.dims, w.dims)
                if cube.grading is None or window is None:
                    diff = (cube.edge(u1, w).compose(cube.edge(v, u1))
                            - cube.edge(u2, w).compose(cube.edge(v, u2)))
                    if not diff.is_zero():
                        raise CubeError(face)
                    continue
                bad = first_nonvanishing(paths, cube.vertex(v), [cube.vertex(u1), cube.vertex(u2)],
                                         cube.vertex(w), cube.grading, window)
                if bad is not None:
                    raise CubeError(face, bad)
