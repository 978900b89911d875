"""Brute-force re-evaluation of the derived lattice maps.

Deliberately shares no code with :mod:`reflexmod.lattice` or the subspace
class: containment is a rank comparison, joins span the union of spanning
sets, and meets solve a kernel problem.  Carrier elements are identified
by mutual containment, never by hashing canonical bases.
"""

from __future__ import annotations

from typing import Sequence

from .lattice import OrderHom, SubspaceLattice, e_minus, e_sharp, e_star, hom_star, hom_tilde

__all__ = ["rank", "brute_force_maps", "compare_with_lattice"]

MAX_CARRIER = 64


def _reduce(vectors: Sequence[Sequence]) -> list[list]:
    """Row reduce to echelon form (not reduced) and drop zero rows."""
    rows = [list(v) for v in vectors]
    out = []
    if not rows:
        return out
    ncols = len(rows[0])
    col = 0
    while rows and col < ncols:
        piv = next((r for r in rows if r[col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows.remove(piv)
        rest = []
        for r in rows:
            if r[col] != 0:
                f = r[col] / piv[col]
                r = [a - f * b for a, b in zip(r, piv)]
            if any(r):
                rest.append(r)
        rows = rest
        out.append(piv)
        col += 1
    return out


def rank(vectors: Sequence[Sequence]) -> int:
    return len(_reduce(vectors))


def _kernel(cols: Sequence[Sequence], nrows: int) -> list[list]:
    """Basis of {c : sum c_j cols[j] = 0} by Gauss-Jordan on the column matrix."""
    m = len(cols)
    a = [[cols[j][i] for j in range(m)] for i in range(nrows)]
    pivots = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fcol in free:
        v = [0] * m
        v[fcol] = 1
        for row, pc in enumerate(pivots):
            v[pc] = -a[row][fcol]
        basis.append(v)
    return basis


def _intersection(a: list, b: list, n: int) -> list:
    if not a or not b:
        return []
    cols = list(a) + [[-x for x in v] for v in b]
    out = []
    for c in _kernel(cols, n):
        out.append([sum(c[i] * a[i][k] for i in range(len(a))) for k in range(n)])
    return out


class _Carrier:
    def __init__(self, spanning: list[list], n: int):
        self.sets = spanning
        self.n = n
        self.ranks = [rank(s) if s else 0 for s in spanning]

    def contains(self, big: list, small: list) -> bool:
        if not small:
            return True
        rb = rank(big) if big else 0
        return rank(list(big) + list(small)) == rb

    def locate(self, vectors: list) -> int:
        r = rank(vectors) if vectors else 0
        for i, s in enumerate(self.sets):
            if self.ranks[i] == r and self.contains(s, vectors):
                return i
        raise AssertionError("value is not a carrier element")

    def join(self, idx: list[int]) -> int:
        vecs = [v for i in idx for v in self.sets[i]]
        return self.locate(vecs)

    def meet(self, idx: list[int]) -> int:
        if not idx:
            return self.locate([[1 if i == j else 0 for j in range(self.n)] for i in range(self.n)])
        cur = self.sets[idx[0]]
        for i in idx[1:]:
            cur = _intersection(cur, self.sets[i], self.n)
        return self.locate(cur)


def brute_force_maps(lattice: SubspaceLattice, homs: dict[str, OrderHom] | None = None) -> dict:
    """Carrier indices of E_-, E_*, E_sharp for every E, and hom_tilde, hom_star for every hom."""
    if len(lattice) > MAX_CARRIER:
        raise ValueError(f"brute-force oracle is limited to {MAX_CARRIER} carrier elements")
    n = lattice.n
    spanning = [[list(v) for v in e.basis] for e in lattice]
    car = _Carrier(spanning, n)
    size = len(spanning)
    below = [[car.contains(spanning[j], spanning[i]) for j in range(size)] for i in range(size)]

    minus = [car.join([g for g in range(size) if not below[e][g]]) for e in range(size)]
    star = [car.meet([minus[f] for f in range(size) if not below[f][e]]) for e in range(size)]
    sharp = [car.join([f for f in range(size) if not car.contains(spanning[minus[f]], spanning[e])])
             for e in range(size)]
    out = {"minus": minus, "star": star, "sharp": sharp, "homs": {}}
    for name, phi in (homs or {}).items():
        vals = [[list(v) for v in s.basis] for s in phi.values]
        tilde = []
        for e in range(size):
            if car.ranks[e] == 0:
                tilde.append(e)
            else:
                tilde.append(car.join([f for f in range(size) if not car.contains(vals[f], spanning[e])]))
        hstar = [car.meet([tilde[f] for f in range(size) if not below[f][e]]) for e in range(size)]
        out["homs"][name] = {"tilde": tilde, "star": hstar}
    return out


def compare_with_lattice(lattice: SubspaceLattice, homs: dict[str, OrderHom] | None = None) -> list[str]:
    """Mismatches between the lattice module and the brute-force oracle (empty when they agree)."""
    oracle = brute_force_maps(lattice, homs)
    idx = lattice.index
    bad = []
    for i, e in enumerate(lattice):
        for key, fn in (("minus", e_minus), ("star", e_star), ("sharp", e_sharp)):
            if idx[fn(lattice, e)] != oracle[key][i]:
                bad.append(f"E_{key} at carrier element {i}")
    for name, phi in (homs or {}).items():
        t = hom_tilde(lattice, phi)
        s = hom_star(lattice, phi)
        for i in range(len(lattice)):
            if idx[t.values[i]] != oracle["homs"][name]["tilde"][i]:
                bad.append(f"{name} tilde at carrier element {i}")
            if idx[s.values[i]] != oracle["homs"][name]["star"][i]:
                bad.append(f"{name} star at carrier element {i}")
    return bad
