"""Independent brute-force oracles used to freeze expected values."""
from fractions import Fraction
from itertools import combinations
from math import gcd


def det(m):
    m = [[Fraction(x) for x in r] for r in m]
    n, d = len(m), Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return d


def rank_q(m):
    if not m or not m[0]:
        return 0
    best = 0
    rows, cols = len(m), len(m[0])
    for k in range(1, min(rows, cols) + 1):
        if any(det([[m[i][j] for j in cs] for i in rs])
               for rs in combinations(range(rows), k) for cs in combinations(range(cols), k)):
            best = k
        else:
            break
    return best


def determinantal_invariants(m):
    """Invariant factors from gcds of k x k minors: d_k = D_k / D_(k-1)."""
    rows, cols = len(m), len(m[0])
    out, prev = [], 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, int(det([[m[i][j] for j in cs] for i in rs])))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out
