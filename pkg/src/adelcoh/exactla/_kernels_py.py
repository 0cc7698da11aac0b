"""Pure-Python exact integer kernels (reference and fallback)."""
from __future__ import annotations


def bareiss_rank(rows: list[list[int]]) -> int:
    """Rank over Q of an integer matrix by fraction-free elimination."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    nrows = len(m)
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = None
        for i in range(rank, nrows):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        prow = m[rank]
        for i in range(rank + 1, nrows):
            row = m[i]
            a = row[col]
            if a:
                for j in range(col + 1, ncols):
                    row[j] = (pv * row[j] - a * prow[j]) // prev
            else:
                for j in range(col + 1, ncols):
                    row[j] = (pv * row[j]) // prev
            row[col] = 0
        prev = pv
        rank += 1
        if rank == nrows:
            break
    return rank


def matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]
