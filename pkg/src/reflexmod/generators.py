"""Seeded random workspace documents.

Every generated document names each nontrivial carrier element ``L1..Lk``
explicitly and lists the carrier, so it validates without re-running the
closure.
"""

from __future__ import annotations

import random
from itertools import combinations

from .lattice import CapExceeded, OrderHom, SubspaceLattice, lattice_closure
from .linalg import Subspace, format_vector, full_space, random_subspace_of, span

__all__ = ["LATTICE_STYLES", "HOM_STYLES", "random_instance", "random_invertible", "random_lattice", "random_hom"]

LATTICE_STYLES = ("random", "nest", "distributive", "lines")
HOM_STYLES = ("random", "identity", "constant", "lattice")

GEN_CAP = 64
RETRIES = 20


def random_invertible(rng: random.Random, n: int, box: int = 2) -> list[tuple]:
    """Columns of a random invertible integer matrix."""
    while True:
        cols = [tuple(rng.randint(-box, box) for _ in range(n)) for _ in range(n)]
        if span(cols, n).dim == n:
            return cols


def _nest(rng: random.Random, n: int, target: int) -> SubspaceLattice:
    cols = random_invertible(rng, n)
    k = max(0, min(target - 2, n - 1))
    dims = sorted(rng.sample(range(1, n), k))
    return SubspaceLattice([span(cols[:d], n) for d in dims], n)


def _distributive(rng: random.Random, n: int, target: int) -> SubspaceLattice:
    """Image of a random ring of subsets of a basis under a random invertible map."""
    cols = random_invertible(rng, n)
    best = None
    for _ in range(RETRIES):
        count = rng.randint(1, max(1, min(n + 1, target - 2)))
        sets = {frozenset(), frozenset(range(n))}
        for _ in range(count):
            sets.add(frozenset(i for i in range(n) if rng.random() < 0.5))
        changed = True
        while changed:
            changed = False
            for a, b in combinations(list(sets), 2):
                for c in (a | b, a & b):
                    if c not in sets:
                        sets.add(c)
                        changed = True
        if len(sets) <= GEN_CAP and (best is None or abs(len(sets) - target) < abs(len(best) - target)):
            best = sets
        if len(sets) == target:
            break
    return SubspaceLattice([span([cols[i] for i in sorted(s)], n) for s in best], n)


def _generic(rng: random.Random, n: int, target: int, gens: int | None = None) -> SubspaceLattice:
    h = full_space(n)
    count = gens if gens is not None else max(1, target // 2)
    for _ in range(RETRIES):
        g = [random_subspace_of(rng, h, rng.randint(1, n - 1), box=2) for _ in range(count)]
        try:
            return lattice_closure(g, n, cap=GEN_CAP)
        except CapExceeded:
            count = max(1, count - 1)
    return lattice_closure([], n)


def random_lattice(rng: random.Random, n: int, target: int, style: str = "random") -> SubspaceLattice:
    if style == "nest":
        return _nest(rng, n, target)
    if style == "distributive":
        return _distributive(rng, n, target)
    if style == "lines":
        return _generic(rng, 2, target, gens=3) if n == 2 else _generic(rng, n, target)
    if style == "random":
        return _generic(rng, n, target)
    raise ValueError(f"lattice style must be one of {LATTICE_STYLES}, got {style!r}")


def random_hom(rng: random.Random, lattice: SubspaceLattice, style: str = "random") -> OrderHom:
    """Monotone by construction: identity, constant, or a monotone completion."""
    if style == "identity":
        return OrderHom.identity(lattice)
    if style == "constant":
        return OrderHom.constant(lattice, random_subspace_of(rng, lattice.top, box=2))
    if style in ("random", "lattice"):
        k = rng.randint(1, max(1, len(lattice) // 2))
        keys = rng.sample(list(lattice.elements), min(k, len(lattice)))
        if style == "lattice":
            assigned = {e: rng.choice(lattice.elements) for e in keys}
        else:
            assigned = {e: random_subspace_of(rng, lattice.top, box=2) for e in keys}
        return OrderHom.monotone_completion(lattice, assigned)
    raise ValueError(f"hom style must be one of {HOM_STYLES}, got {style!r}")


def _basis_json(s: Subspace) -> list:
    return [format_vector(v) for v in s.basis]


def random_instance(dim: int, lattice_size_target: int = 4, hom_style: str = "random", seed: int = 0,
                    lattice_style: str = "random", homs: int = 1) -> dict:
    """A reproducible workspace document with one carrier, ``homs`` homs and a right and left module each."""
    if not 2 <= dim <= 6:
        raise ValueError("dim must be between 2 and 6")
    if lattice_size_target < 2:
        raise ValueError("lattice size target must be at least 2")
    rng = random.Random(seed)
    lattice = random_lattice(rng, dim, lattice_size_target, lattice_style)
    names = {lattice.bottom: "0", lattice.top: "H"}
    subspaces = {}
    for i, e in enumerate(lattice.elements[1:-1], start=1):
        names[e] = f"L{i}"
        subspaces[f"L{i}"] = _basis_json(e)
    hom_docs = {}
    modules = {}
    for h in range(homs):
        hname = "phi" if homs == 1 else f"phi{h}"
        phi = random_hom(rng, lattice, hom_style)
        hom_docs[hname] = {
            names[e]: names[v] if v in names else _basis_json(v) for e, v in phi.items()
        }
        modules[f"U_{hname}"] = {"side": "right", "hom": hname}
        modules[f"V_{hname}"] = {"side": "left", "hom": hname}
    return {
        "field": "Q",
        "dim": dim,
        "subspaces": subspaces,
        "lattice": {"carrier": [names[e] for e in lattice]},
        "homs": hom_docs,
        "modules": modules,
        "seeds": {"audit": seed, "sampling": seed},
    }

