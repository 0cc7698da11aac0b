"""Cohomology of complexes of abelian atoms (free or cyclic over Z, Z_(S), Q, Z_p, Q_p).

The computation is exact and refuses to guess:

1. cancel pairs of equal atoms joined by a unit entry (Gaussian elimination);
2. split the remainder into connected components;
3. a component over a single scalar ring is solved through an integral model
   and Smith normal form, then localized;
4. a component mixing rational and p-adic scalars is cut by the short exact
   sequence ``0 -> I(C) -> C -> P(C) -> 0`` into an integral part and a part
   made of Prufer groups ``Q_p/Z_p``.  The latter is solved through its
   Pontryagin dual.  The two answers are glued only when the long exact
   sequence forces it; otherwise ``UndeterminedExtension`` is raised.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .complex import AbelianGroup, CochainComplex, CohomologyTable
from .modules import AbelianAtom, abelian_entry_allowed, abelian_entry_zero
from .scalars import Scalars, ZS, Zp, prime_set
from .snf import cohomology_of_presented


class UnsupportedScalars(ArithmeticError):
    pass


class UndeterminedExtension(ArithmeticError):
    def __init__(self, degree: int):
        self.degree = degree
        super().__init__(f"long exact sequence does not determine H^{degree}")


def _unit_on(atom: AbelianAtom, c: Fraction) -> bool:
    if atom.free:
        return atom.scalars.is_unit(c)
    return gcd(c.numerator, atom.order) == 1 and gcd(c.denominator, atom.order) == 1


def _clean(atoms, mats):
    for k, m in enumerate(mats):
        tgt = atoms[k + 1]
        for key in [key for key, c in m.items() if abelian_entry_zero(tgt[key[0]], c)]:
            del m[key]


def eliminate(atoms: list[list], mats: list[dict]) -> tuple[list[list], list[dict]]:
    """Cancel unit entries between equal atoms until none remain."""
    atoms = [list(a) for a in atoms]
    mats = [dict(m) for m in mats]
    _clean(atoms, mats)
    while True:
        piv = None
        for k, m in enumerate(mats):
            for (i, j) in sorted(m):
                c = m[(i, j)]
                a = atoms[k][j]
                if atoms[k + 1][i] == a and _unit_on(a, c):
                    piv = (k, i, j, c)
                    break
            if piv:
                break
        if piv is None:
            return atoms, mats
        k, i, j, c = piv
        m = mats[k]
        inv = 1 / c
        col = [(r, v) for (r, cc), v in m.items() if cc == j and r != i]
        row = [(cc, v) for (r, cc), v in m.items() if r == i and cc != j]
        new = {key: v for key, v in m.items() if key[0] != i and key[1] != j}
        for r, a in col:
            for cc, b in row:
                new[(r, cc)] = new.get((r, cc), 0) - a * inv * b
        new = {key: v for key, v in new.items() if v}

        def ri(x, drop):
            return x - (x > drop)

        mats[k] = {(ri(r, i), ri(cc, j)): v for (r, cc), v in new.items()}
        if k > 0:
            mats[k - 1] = {(ri(r, j), cc): v for (r, cc), v in mats[k - 1].items() if r != j}
        if k + 1 < len(mats):
            mats[k + 1] = {(r, ri(cc, i)): v for (r, cc), v in mats[k + 1].items() if cc != i}
        del atoms[k][j]
        del atoms[k + 1][i]
        _clean(atoms, mats)


def _components(atoms, mats):
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, a in enumerate(atoms):
        for i in range(len(a)):
            parent[(k, i)] = (k, i)
    for k, m in enumerate(mats):
        for (i, j) in m:
            ra, rb = find((k, j)), find((k + 1, i))
            if ra != rb:
                parent[ra] = rb
    groups: dict = {}
    for node in sorted(parent):
        groups.setdefault(find(node), []).append(node)
    out = []
    for nodes in groups.values():
        keep = [[i for (k, i) in nodes if k == kk] for kk in range(len(atoms))]
        out.append(_restrict(atoms, mats, keep))
    return out


def _restrict(atoms, mats, keep):
    new_atoms = [[atoms[k][i] for i in keep[k]] for k in range(len(atoms))]
    new_mats = []
    for k, m in enumerate(mats):
        ri = {i: n for n, i in enumerate(keep[k + 1])}
        ci = {j: n for n, j in enumerate(keep[k])}
        new_mats.append({(ri[i], ci[j]): v for (i, j), v in m.items() if i in ri and j in ci})
    return new_atoms, new_mats


def _integral(atoms, mats, base: Scalars | None) -> list[AbelianGroup]:
    """Single scalar ring: integral model, Smith form, then localize."""
    mats = [dict(m) for m in mats]
    for k, m in enumerate(mats):
        for i, atom in enumerate(atoms[k + 1]):
            den = 1
            for (r, _), v in m.items():
                if r == i:
                    den = lcm(den, v.denominator)
            if den == 1:
                continue
            if not _unit_on(atom, Fraction(den)):
                raise UnsupportedScalars(f"denominator {den} is not a unit on {atom}")
            for key in [key for key in m if key[0] == i]:
                m[key] = m[key] * den
            if k + 1 < len(mats):
                nxt = mats[k + 1]
                for key in [key for key in nxt if key[1] == i]:
                    nxt[key] = nxt[key] / den
    gens = [len(a) for a in atoms]
    rels = []
    for a in atoms:
        rels.append([[a[i].order if r == i else 0 for r in range(len(a))] for i in range(len(a)) if not a[i].free])
    diffs = []
    for k, m in enumerate(mats):
        d = [[0] * gens[k] for _ in range(gens[k + 1])]
        for (i, j), v in m.items():
            assert v.denominator == 1
            d[i][j] = int(v)
        diffs.append(d)
    raw = cohomology_of_presented(gens, rels, diffs)
    out = []
    for rank, tors in raw:
        if base is None:
            if rank:
                raise UnsupportedScalars("free cohomology without a free scalar ring")
            out.append(AbelianGroup.make({}, tors))
            continue
        if base.is_field:
            tors = []
        else:
            tors = [base.local_part(t) for t in tors]
        out.append(AbelianGroup.make({base.label: rank}, tors))
    return out


def _single_ring(atoms) -> tuple[bool, Scalars | None]:
    flat = [a for row in atoms for a in row]
    free = {a.scalars for a in flat if a.free}
    if len(free) > 1:
        return False, None
    base = next(iter(free)) if free else None
    if base is not None:
        for a in flat:
            if not a.free and base.local_part(a.order) != a.order:
                return False, None
    return True, base


def _fracture(atoms, mats) -> list[AbelianGroup]:
    flat = [a for row in atoms for a in row]
    kinds = {a.scalars.kind for a in flat if a.free}
    if not kinds <= {"ZS", "Q", "Zp", "Qp"}:
        raise UnsupportedScalars(f"cannot combine scalar kinds {sorted(kinds)}")
    if not kinds & {"Q", "Qp"}:
        raise UnsupportedScalars("mixed integral scalars without a rational part")
    rs = {a.scalars for a in flat if a.free and a.scalars.kind == "ZS"}
    ps = {a.scalars.p for a in flat if a.free and a.scalars.complete}
    if len(rs) > 1:
        raise UnsupportedScalars("several semilocal rings in one component")
    S = next(iter(rs)).primes if rs else frozenset(ps)
    if not ps <= S:
        raise UnsupportedScalars(f"p-adic primes {sorted(ps - S)} are inverted in the global ring")
    if not S:
        raise UnsupportedScalars("no primes to fracture at")
    mats = [dict(m) for m in mats]
    # rescale rational and p-adic field atoms so the integral lattices form a subcomplex
    for k in range(1, len(atoms)):
        m = mats[k - 1]
        for i, atom in enumerate(atoms[k]):
            if not atom.free or atom.scalars.kind not in ("Q", "Qp"):
                continue
            bad = S if atom.scalars.kind == "Q" else {atom.scalars.p}
            lam = 1
            for (r, _), v in m.items():
                if r == i:
                    for q in prime_set(v.denominator) if v.denominator > 1 else ():
                        if q in bad:
                            e = 0
                            d = v.denominator
                            while d % q == 0:
                                d //= q
                                e += 1
                            lam = lcm(lam, q ** e)
            if lam == 1:
                continue
            for key in [key for key in m if key[0] == i]:
                m[key] *= lam
            if k < len(mats):
                for key in [key for key in mats[k] if key[1] == i]:
                    mats[k][key] /= lam
    R = ZS(S)

    def integral_atom(a: AbelianAtom) -> AbelianAtom:
        if a.free and a.scalars.kind == "Q":
            return AbelianAtom(R, 0)
        if a.free and a.scalars.kind == "Qp":
            return AbelianAtom(Zp(a.scalars.p), 0)
        return a

    iatoms = [[integral_atom(a) for a in row] for row in atoms]
    for k, m in enumerate(mats):
        for (i, j), v in m.items():
            if not abelian_entry_allowed(iatoms[k][j], iatoms[k + 1][i], v):
                raise UnsupportedScalars("integral lattices do not form a subcomplex")
    hi = _solve(iatoms, mats)
    hp = [AbelianGroup() for _ in atoms]
    for p in sorted(S):
        keep = []
        for row in atoms:
            keep.append([i for i, a in enumerate(row) if a.free and (
                a.scalars.kind == "Q" or (a.scalars.kind == "Qp" and a.scalars.p == p))])
        if not any(keep):
            continue
        patoms, pmats = _restrict(atoms, mats, keep)
        hp = [x + y for x, y in zip(hp, _prufer(patoms, pmats, p))]
    out = []
    for k in range(len(atoms)):
        prev_p = hp[k - 1] if k > 0 else AbelianGroup()
        next_i = hi[k + 1] if k + 1 < len(atoms) else AbelianGroup()
        if hp[k].is_zero and prev_p.is_zero:
            out.append(hi[k])
        elif hi[k].is_zero and next_i.is_zero:
            out.append(hp[k])
        else:
            raise UndeterminedExtension(k)
    return out


def _prufer(atoms, mats, p: int) -> list[AbelianGroup]:
    """Cohomology of a complex of copies of Q_p/Z_p with p-integral entries."""
    n = len(atoms)
    zp = Zp(p)
    # dual chain complex, re-indexed as a cochain complex E^t = D_{n-1-t}
    e_atoms = [[AbelianAtom(zp, 0)] * len(atoms[n - 1 - t]) for t in range(n)]
    e_mats = []
    for t in range(n - 1):
        m = mats[n - 2 - t]  # D_{n-1-t} -> D_{n-2-t} is the transpose
        e_mats.append({(j, i): v for (i, j), v in m.items()})
    dual = _integral(e_atoms, e_mats, zp)
    out = []
    for k in range(n):
        g = dual[n - 1 - k]
        out.append(AbelianGroup.make({}, g.torsion, {p: g.rank}))
    return out


def _solve(atoms, mats) -> list[AbelianGroup]:
    atoms, mats = eliminate(atoms, mats)
    total = [AbelianGroup() for _ in atoms]
    for catoms, cmats in _components(atoms, mats):
        ok, base = _single_ring(catoms)
        part = _integral(catoms, cmats, base) if ok else _fracture(catoms, cmats)
        total = [x + y for x, y in zip(total, part)]
    return total


def abelian_cohomology(c: CochainComplex) -> CohomologyTable:
    atoms = [list(o.atoms) for o in c.objects]
    mats = [dict(d.entries) for d in c.differentials]
    try:
        groups = _solve(atoms, mats)
    except UndeterminedExtension as exc:
        raise UndeterminedExtension(exc.degree + c.start) from None
    return CohomologyTable("abelian", tuple(c.degrees),
                           groups={c.start + k: g for k, g in enumerate(groups)})
