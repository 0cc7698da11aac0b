"""Degreewise cohomology of complexes of graded atoms over Q."""
from __future__ import annotations

from . import kernels
from .complex import CochainComplex, CohomologyTable, WindowError, check_complex
from .modules import Window, integer_rows


def degree_ranks(c: CochainComplex, degree: tuple) -> tuple[list[int], list[int]]:
    """Dimensions of each object and ranks of each differential in one degree."""
    dims = [o.dim(degree) for o in c.objects]
    ranks = []
    for k, d in enumerate(c.differentials):
        if dims[k] == 0 or dims[k + 1] == 0:
            ranks.append(0)
            continue
        _, _, m = d.restricted(degree)
        ranks.append(kernels.rank(integer_rows(m)))
    return dims, ranks


def graded_cohomology(c: CochainComplex, window: Window | None, check: bool = True) -> CohomologyTable:
    if window is None:
        raise WindowError("graded cohomology needs a degree window")
    if window.empty:
        raise WindowError(f"empty window {window.lo}..{window.hi}")
    if check:
        check_complex(c, window)
    dims_out: dict = {}
    n = len(c.objects)
    for deg in window:
        dims, ranks = degree_ranks(c, deg)
        for k in range(n):
            h = dims[k] - (ranks[k] if k < len(ranks) else 0) - (ranks[k - 1] if k > 0 else 0)
            if h:
                dims_out[(c.start + k, tuple(deg))] = h
    return CohomologyTable("graded", tuple(c.degrees), dims=dims_out, window=window,
                           boundary_coupled=False)
