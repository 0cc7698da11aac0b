"""Finite posets, flags, dimension functions and simplicial complexes.

Posets follow the Balmer convention: closed points are the minimal elements
and ``q < p`` means ``q`` is a specialization of ``p``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Any, Hashable, Iterable, Iterator, Sequence


class PosetError(ValueError):
    pass


class NotCatenaryError(PosetError):
    """Raised when maximal chains below some element have different lengths."""

    def __init__(self, element, lengths):
        self.element = element
        self.lengths = tuple(sorted(lengths))
        super().__init__(
            f"element {element!r} has maximal chains of lengths {self.lengths}"
        )


def element_key(e: Any):
    """Total order on element identifiers used for every canonical ordering."""
    if isinstance(e, bool):
        return (0, int(e))
    if isinstance(e, int):
        return (0, e)
    if isinstance(e, str):
        return (1, e)
    if isinstance(e, (frozenset, set)):
        return (2, len(e), tuple(sorted((element_key(x) for x in e))))
    if isinstance(e, tuple):
        return (3, len(e), tuple(element_key(x) for x in e))
    if isinstance(e, Flag):
        return (4, len(e.vertices), tuple(element_key(x) for x in e.vertices))
    return (5, repr(e))


class Poset:
    """A finite poset given by elements and cover (or any generating) relations.

    ``relations`` holds pairs ``(p, q)`` meaning ``q < p``; the order is their
    reflexive-transitive closure.
    """

    def __init__(self, elements: Iterable[Hashable], relations: Iterable[tuple] = ()):
        elems = list(dict.fromkeys(elements))
        self._elements = tuple(sorted(elems, key=element_key))
        index = {e: i for i, e in enumerate(self._elements)}
        below: dict[Hashable, set] = {e: set() for e in self._elements}
        for p, q in relations:
            if p not in index or q not in index:
                raise PosetError(f"relation ({p!r}, {q!r}) mentions an unknown element")
            if p == q:
                raise PosetError(f"relation ({p!r}, {p!r}) is not strict")
            below[p].add(q)
        # transitive closure by DFS
        closed: dict[Hashable, frozenset] = {}
        state: dict[Hashable, int] = {}

        def visit(p):
            if state.get(p) == 2:
                return closed[p]
            if state.get(p) == 1:
                raise PosetError(f"relations contain a cycle through {p!r}")
            state[p] = 1
            acc = set()
            for q in below[p]:
                acc.add(q)
                acc |= visit(q)
            state[p] = 2
            closed[p] = frozenset(acc)
            return closed[p]

        for e in self._elements:
            visit(e)
        self._below = closed
        self._index = index

    @classmethod
    def from_order(cls, elements: Iterable[Hashable], leq) -> "Poset":
        elems = list(elements)
        rel = [(p, q) for p in elems for q in elems if p != q and leq(q, p)]
        return cls(elems, rel)

    @property
    def elements(self) -> tuple:
        return self._elements

    def __len__(self) -> int:
        return len(self._elements)

    def __contains__(self, e) -> bool:
        return e in self._index

    def __iter__(self) -> Iterator:
        return iter(self._elements)

    def __repr__(self) -> str:
        return f"Poset({list(self._elements)!r}, covers={self.covers!r})"

    def index(self, e) -> int:
        return self._index[e]

    def lt(self, q, p) -> bool:
        return q in self._below[p]

    def leq(self, q, p) -> bool:
        return q == p or q in self._below[p]

    def below(self, p) -> tuple:
        """Elements strictly below ``p`` in canonical order."""
        return tuple(e for e in self._elements if e in self._below[p])

    def above(self, q) -> tuple:
        return tuple(e for e in self._elements if q in self._below[e])

    @cached_property
    def covers(self) -> tuple:
        out = []
        for p in self._elements:
            for q in self.below(p):
                if not any(self.lt(q, r) and self.lt(r, p) for r in self._elements):
                    out.append((p, q))
        return tuple(out)

    def covered_by(self, p) -> tuple:
        return tuple(q for (a, q) in self.covers if a == p)

    @cached_property
    def minimal(self) -> tuple:
        return tuple(e for e in self._elements if not self._below[e])

    @cached_property
    def maximal(self) -> tuple:
        return tuple(e for e in self._elements if not self.above(e))

    def is_chain(self, vertices: Sequence) -> bool:
        return all(self.lt(vertices[i + 1], vertices[i]) for i in range(len(vertices) - 1))

    def subposet(self, keep: Iterable) -> "Poset":
        keep = [e for e in self._elements if e in set(keep)]
        return Poset(keep, [(p, q) for p in keep for q in keep if self.lt(q, p)])


@dataclass(frozen=True)
class Flag:
    """A strictly decreasing chain ``vertices[0] > vertices[1] > ...``."""

    vertices: tuple

    def __post_init__(self):
        if not self.vertices:
            raise PosetError("a flag has at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise PosetError(f"flag {self.vertices!r} repeats a vertex")

    @property
    def s(self) -> int:
        return len(self.vertices) - 1

    @property
    def first(self):
        return self.vertices[0]

    @property
    def last(self):
        return self.vertices[-1]

    def face(self, i: int) -> "Flag":
        if not 0 <= i < len(self.vertices):
            raise IndexError(i)
        return Flag(self.vertices[:i] + self.vertices[i + 1:])

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self):
        return len(self.vertices)

    def __str__(self):
        return ">".join(str(v) for v in self.vertices)


def flags(poset: Poset, s: int) -> list[Flag]:
    """All flags of length ``s`` (``s+1`` vertices), lexicographically ordered."""
    if s < 0:
        return []
    out: list[Flag] = []

    def extend(chain):
        if len(chain) == s + 1:
            out.append(Flag(tuple(chain)))
            return
        for q in poset.below(chain[-1]):
            extend(chain + [q])

    for p in poset.elements:
        extend([p])
    out.sort(key=lambda f: tuple(poset.index(v) for v in f.vertices))
    return out


def all_flags(poset: Poset) -> list[Flag]:
    out = []
    s = 0
    while True:
        fs = flags(poset, s)
        if not fs:
            return out
        out.extend(fs)
        s += 1


@dataclass(frozen=True)
class DimensionData:
    dim: dict
    catenary: bool
    max_dim: int

    def __getitem__(self, p) -> int:
        return self.dim[p]

    def codim(self, p) -> int:
        return self.max_dim - self.dim[p]


def _chain_lengths(poset: Poset) -> dict:
    lengths: dict = {}
    for p in sorted(poset.elements, key=lambda e: len(poset.below(e))):
        cov = poset.covered_by(p)
        if not cov:
            lengths[p] = {0}
        else:
            lengths[p] = {1 + l for q in cov for l in lengths[q]}
    return lengths


def dimension_data(poset: Poset, strict: bool = True) -> DimensionData:
    """Dimension function; raises ``NotCatenaryError`` when ``strict`` and the poset is not catenary."""
    lengths = _chain_lengths(poset)
    catenary = True
    for p in poset.elements:
        if len(lengths[p]) != 1:
            catenary = False
            if strict:
                raise NotCatenaryError(p, lengths[p])
    dim = {p: max(lengths[p]) for p in poset.elements}
    return DimensionData(dim=dim, catenary=catenary, max_dim=max(dim.values(), default=-1))


@dataclass(frozen=True, order=True)
class DimensionVector:
    """Strictly decreasing tuple of dimensions ``d0 > d1 > ... > ds``."""

    dims: tuple

    def __post_init__(self):
        if any(self.dims[i] <= self.dims[i + 1] for i in range(len(self.dims) - 1)):
            raise PosetError(f"dimension vector {self.dims!r} is not strictly decreasing")

    def __len__(self):
        return len(self.dims)

    def face(self, i: int) -> "DimensionVector":
        return DimensionVector(self.dims[:i] + self.dims[i + 1:])

    def characteristic(self, r: int) -> tuple:
        """Coordinates in the cube {0,1}^{r+1}, indexed by dimension ``0..r``."""
        return tuple(1 if d in self.dims else 0 for d in range(r + 1))

    def insertion_position(self, larger: "DimensionVector") -> int:
        """Position in ``larger`` of the single dimension missing from ``self``."""
        extra = set(larger.dims) - set(self.dims)
        if len(larger) != len(self) + 1 or len(extra) != 1 or not set(self.dims) <= set(larger.dims):
            raise PosetError(f"{larger.dims!r} does not extend {self.dims!r} by one entry")
        return larger.dims.index(extra.pop())


def dimension_vector(flag: Flag, dd: DimensionData) -> DimensionVector:
    return DimensionVector(tuple(dd[v] for v in flag.vertices))


def all_dimension_vectors(r: int) -> list[DimensionVector]:
    """All non-empty strictly decreasing vectors with entries in 0..r."""
    out = []
    for k in range(1, r + 2):
        for combo in combinations(range(r, -1, -1), k):
            out.append(DimensionVector(combo))
    out.sort(key=lambda v: (len(v), tuple(-d for d in v.dims)))
    return out


class SimplicialComplex:
    """Abstract simplicial complex; simplices are frozensets of vertices."""

    def __init__(self, faces: Iterable[Iterable[Hashable]]):
        simplices: set[frozenset] = set()
        for f in faces:
            f = frozenset(f)
            if not f:
                continue
            for k in range(1, len(f) + 1):
                for sub in combinations(sorted(f, key=element_key), k):
                    simplices.add(frozenset(sub))
        self.simplices = tuple(sorted(simplices, key=element_key))
        self.vertices = tuple(sorted({v for s in simplices for v in s}, key=element_key))

    def __repr__(self):
        return f"SimplicialComplex(facets={[sorted(f, key=element_key) for f in self.facets]!r})"

    @cached_property
    def facets(self) -> tuple:
        return tuple(s for s in self.simplices if not any(s < t for t in self.simplices))

    @property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def n_simplices(self, n: int) -> tuple:
        return tuple(s for s in self.simplices if len(s) == n + 1)

    def ordered(self, simplex) -> tuple:
        return tuple(sorted(simplex, key=element_key))

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.simplices)

    def face_poset(self, augmented: bool = False) -> Poset:
        """Simplices ordered by inclusion (a face is smaller)."""
        elems = list(self.simplices)
        if augmented:
            elems = [frozenset()] + elems
        rel = [(t, s) for t in elems for s in elems if s < t]
        return Poset(elems, rel)


def order_complex(poset: Poset) -> SimplicialComplex:
    return SimplicialComplex(f.vertices for f in all_flags(poset))


def flag_poset(poset: Poset) -> Poset:
    """The order complex as a poset of flags ordered by face inclusion."""
    fl = all_flags(poset)
    sets = {f: frozenset(f.vertices) for f in fl}
    rel = [(f, g) for f in fl for g in fl if sets[g] < sets[f]]
    return Poset(fl, rel)


def punctured_cube(vertices: Iterable[Hashable]) -> SimplicialComplex:
    """The full simplex on ``vertices``: all non-empty subsets."""
    vs = list(vertices)
    if not vs:
        raise PosetError("the punctured cube needs at least one vertex")
    return SimplicialComplex([vs])


def chain_poset(n: int) -> Poset:
    """Totally ordered ``0 < 1 < ... < n-1``."""
    return Poset(range(n), [(i + 1, i) for i in range(n - 1)])
