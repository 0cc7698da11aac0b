"""Integer Smith normal form, lattice bases and kernels."""
from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U @ a @ V == D`` diagonal and ``d1 | d2 | ...``.

    ``U`` and ``V`` are unimodular.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(map(int, r)) for r in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        rd, rs = d[dst], d[src]
        for k in range(n):
            rd[k] += q * rs[k]
        ud, us = u[dst], u[src]
        for k in range(m):
            ud[k] += q * us[k]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for r in d:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = d[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // d[t][t]))
                    if d[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // d[t][t]))
                    if d[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            bad = None
            p = d[t][t]
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if d[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, d, v


def invariant_factors(a: Sequence[Sequence[int]]) -> list[int]:
    """Non-zero diagonal entries of the Smith form."""
    if not a or not a[0]:
        return []
    _, d, _ = smith_normal_form(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]))) if d[i][i]]


def integer_kernel(a: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Basis (as rows) of ``{x in Z^n : a x = 0}``."""
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    if not a:
        return identity(n)
    u, d, v = smith_normal_form(a)
    r = sum(1 for i in range(min(len(d), n)) if d[i][i])
    return [[v[i][j] for i in range(n)] for j in range(r, n)]


def row_echelon_basis(rows: Sequence[Sequence[int]], ncols: int) -> tuple[Matrix, list[int]]:
    """Hermite-style echelon basis of the row lattice and its pivot columns."""
    work = [list(r) for r in rows if any(r)]
    basis: Matrix = []
    pivots: list[int] = []
    for col in range(ncols):
        cand = [r for r in work if r[col]]
        if not cand:
            continue
        rest = [r for r in work if not r[col]]
        while len(cand) > 1:
            cand.sort(key=lambda r: abs(r[col]))
            piv = cand[0]
            nxt = [piv]
            for r in cand[1:]:
                q = r[col] // piv[col]
                r2 = [x - q * y for x, y in zip(r, piv)]
                if r2[col]:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            cand = nxt
        piv = cand[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        pivots.append(col)
        work = rest
    return basis, pivots


def coordinates(basis: Matrix, pivots: list[int], vec: Sequence[int]) -> list[int]:
    """Integer coordinates of ``vec`` in an echelon basis; ValueError if absent."""
    v = list(vec)
    out = []
    for row, col in zip(basis, pivots):
        if v[col] % row[col]:
            raise ValueError("vector is not in the lattice")
        q = v[col] // row[col]
        out.append(q)
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    if any(v):
        raise ValueError("vector is not in the lattice")
    return out


def cohomology_of_presented(gens: list[int], relations: list[Matrix], diffs: list[Matrix]):
    """Cohomology of a complex of finitely generated abelian groups.

    ``gens[s]`` is the number of generators of ``C^s``, ``relations[s]`` a list
    of relation vectors in ``Z^{gens[s]}`` and ``diffs[s]`` the integer matrix
    of ``C^s -> C^{s+1}`` (``gens[s+1]`` rows).  Returns ``[(rank, torsion)]``.
    """
    out = []
    n = len(gens)
    for s in range(n):
        g = gens[s]
        if g == 0:
            out.append((0, []))
            continue
        # cocycles: x with D_s x in span of relations of C^{s+1}
        if s + 1 < n and gens[s + 1]:
            d = diffs[s]
            rel_next = relations[s + 1]
            big = [list(d[i]) + [-r[i] for r in rel_next] for i in range(gens[s + 1])]
            ker = integer_kernel(big, g + len(rel_next))
            zgens = [k[:g] for k in ker]
        else:
            zgens = identity(g)
        zbasis, zpiv = row_echelon_basis(zgens, g)
        bgens = [list(r) for r in relations[s]]
        if s > 0 and gens[s - 1]:
            dprev = diffs[s - 1]
            bgens += [[dprev[i][j] for i in range(g)] for j in range(gens[s - 1])]
        coords = [coordinates(zbasis, zpiv, b) for b in bgens if any(b)]
        z = len(zbasis)
        if coords and z:
            inv = invariant_factors(coords)
        else:
            inv = []
        out.append((z - len(inv), [x for x in inv if x > 1]))
    return out
