"""Filtrations of complexes by a level function on atoms."""
from __future__ import annotations

from .complex import CochainComplex, CohomologyTable, cohomology


class FiltrationError(ValueError):
    pass


def check_levels(c: CochainComplex, level) -> None:
    """The differential may only raise the level (a decreasing filtration)."""
    for k, d in enumerate(c.differentials):
        for (i, j) in d.nonzero_entries():
            if level[k + 1][i] < level[k][j]:
                raise FiltrationError(
                    f"differential in degree {c.start + k} lowers level {level[k][j]} -> {level[k + 1][i]}")


def filtration_piece(c: CochainComplex, level, n: int) -> CochainComplex:
    """``F^n``: the subcomplex on atoms of level at least ``n``."""
    check_levels(c, level)
    return c.sub([[i for i, l in enumerate(lv) if l >= n] for lv in level])


def filtration_subquotients(c: CochainComplex, level) -> dict:
    """``{n: F^n / F^(n+1)}`` for every level that occurs."""
    check_levels(c, level)
    levels = sorted({l for lv in level for l in lv})
    return {n: c.sub([[i for i, l in enumerate(lv) if l == n] for lv in level]) for n in levels}


def e1_page(c: CochainComplex, level, window=None) -> dict[int, CohomologyTable]:
    return {n: cohomology(q, window) for n, q in filtration_subquotients(c, level).items()}
