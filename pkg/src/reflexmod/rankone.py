"""Rank-one operators, rank-one submodules and their invariant subspaces.

Every membership test here is computed twice: once from lattice formulas
(``hom_tilde``, ``hom_star``, ``E_*``) and once directly on matrices.  A
disagreement raises :class:`~reflexmod.lattice.ConsistencyError`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .algebra import AuditResult, OperatorSpace, alg, is_invariant, lat_membership_interval, solve_operators
from .lattice import (
    ConsistencyError,
    OrderHom,
    SubspaceLattice,
    e_minus,
    e_sharp,
    e_star,
    hom_star,
    hom_tilde,
    is_completely_distributive,
)
from .linalg import Matrix, Subspace, Vector, outer, random_subspace_of, span
from .modules import ModuleInstance, ref_module, tau_of

__all__ = [
    "RankOne",
    "rankone_in_right_module",
    "rankone_in_left_module",
    "rankone_submodule",
    "lat_rankone_membership",
    "lat_rankone_elements",
    "check_lat_determined",
    "check_lattice_recovery",
    "check_ref_rankone",
    "check_complete_distributivity",
]


@dataclass(frozen=True)
class RankOne:
    """x (x) y, the operator z -> <z, y> x."""

    x: Vector
    y: Vector

    def __post_init__(self):
        if len(self.x) != len(self.y):
            raise ValueError("rank-one factors have different lengths")
        if not any(self.x) or not any(self.y):
            raise ValueError("rank-one factors must be nonzero")

    def materialize(self) -> Matrix:
        return outer(self.x, self.y)


def _off_carrier(lattice: SubspaceLattice, hom: OrderHom) -> str:
    if all(v in lattice for v in hom.values):
        return ""
    return " (the hom takes values outside the carrier)"


def _right_module(lattice: SubspaceLattice, hom: OrderHom) -> OperatorSpace:
    return solve_operators(hom.items(), lattice.n)


def _left_module(lattice: SubspaceLattice, hom: OrderHom) -> OperatorSpace:
    return solve_operators(((v, e) for e, v in hom.items()), lattice.n)


def rankone_in_right_module(x: Vector, y: Vector, lattice: SubspaceLattice, hom: OrderHom,
                            module: OperatorSpace | None = None) -> bool:
    """x (x) y lies in the right module of ``hom`` iff some carrier E holds x
    while y is orthogonal to ``hom_tilde(hom)(E)``."""
    r = RankOne(x, y)
    tilde = hom_tilde(lattice, hom)
    verdict = any(e.contains_vector(x) and t.orth_complement().contains_vector(y) for e, t in tilde.items())
    u = _right_module(lattice, hom) if module is None else module
    direct = u.contains_matrix(r.materialize())
    if verdict != direct:
        raise ConsistencyError(f"rank-one criterion {verdict} but direct membership {direct}"
                               + _off_carrier(lattice, hom))
    return verdict


def rankone_in_left_module(x: Vector, y: Vector, lattice: SubspaceLattice, hom: OrderHom,
                           module: OperatorSpace | None = None) -> bool:
    """Left analogue: x in the meet of {F : hom(F) not inside E} and y orthogonal to E."""
    r = RankOne(x, y)
    verdict = False
    for e in lattice:
        if not e.orth_complement().contains_vector(y):
            continue
        m = lattice.meet(f for f, v in hom.items() if not e.contains(v))
        if m.contains_vector(x):
            verdict = True
            break
    u = _left_module(lattice, hom) if module is None else module
    direct = u.contains_matrix(r.materialize())
    if verdict != direct:
        raise ConsistencyError(f"left rank-one criterion {verdict} but direct membership {direct}"
                               + _off_carrier(lattice, hom))
    return verdict


def rankone_submodule(lattice: SubspaceLattice, hom: OrderHom) -> OperatorSpace:
    """Span of the rank-one operators in the right module of ``hom``.

    Built blockwise: for each E, u (x) v with u over a basis of E and v over a
    basis of the complement of ``hom_tilde(hom)(E)``.
    """
    tilde = hom_tilde(lattice, hom)
    mats = []
    for e, t in tilde.items():
        perp = t.orth_complement()
        for u in e.basis:
            for v in perp.basis:
                mats.append(outer(u, v))
    return OperatorSpace.from_matrices(mats, lattice.n)


def lat_rankone_membership(k: Subspace, lattice: SubspaceLattice, hom: OrderHom,
                           module: OperatorSpace | None = None) -> bool:
    """K is invariant under the rank-one submodule iff E <= K <= hom_star(E) for some E."""
    star = hom_star(lattice, hom)
    verdict = any(k.contains(e) and s.contains(k) for e, s in star.items())
    r = rankone_submodule(lattice, hom) if module is None else module
    direct = is_invariant(r, k)
    if verdict != direct:
        raise ConsistencyError(f"interval criterion {verdict} but direct invariance {direct}")
    return verdict


def lat_rankone_elements(lattice: SubspaceLattice, hom: OrderHom) -> list[Subspace] | None:
    """All invariant subspaces of the rank-one submodule, or None if there are infinitely many.

    The set is the union of the intervals [E, hom_star(E)]; it is finite
    exactly when every interval has a dimension gap of at most one.
    """
    star = hom_star(lattice, hom)
    out = set()
    for e, s in star.items():
        if not s.contains(e):
            continue
        gap = s.dim - e.dim
        if gap >= 2:
            return None
        out.add(e)
        out.add(s)
    return sorted(out, key=Subspace.sort_key)


def _sample_interval(rng: random.Random, low: Subspace, high: Subspace, proper: bool = False) -> Subspace:
    """Random K with low <= K <= high; ``proper`` keeps K strictly inside when the gap allows."""
    d = high.intersect(low.orth_complement())
    dim = rng.randint(1, d.dim - 1) if proper and d.dim >= 2 else None
    return low.sum(random_subspace_of(rng, d, dim))


def check_lat_determined(lattice: SubspaceLattice, audit: AuditResult | None = None,
                         samples: int = 25, seed: int = 0) -> dict:
    """Whether every interval [E, E_*] consists of Alg L-invariant subspaces.

    The exact verdict comes from :func:`lat_membership_interval`.  Sampled K
    from each interval are then checked: each must be invariant under the
    rank-one subalgebra, and under Alg L whenever the exact verdict holds.
    """
    a = alg(lattice)
    r = rankone_submodule(lattice, OrderHom.identity(lattice))
    rng = random.Random(seed)
    rows = []
    witnesses = []
    for e in lattice:
        s = e_star(lattice, e)
        if not s.contains(e):
            raise ConsistencyError(f"E_* does not contain E at {e!r}")
        ok = lat_membership_interval(a, e, s)
        rows.append({"E": e, "E_star": s, "interval_invariant": ok})
        for _ in range(samples if s.dim - e.dim >= 1 else 0):
            k = _sample_interval(rng, e, s)
            if not is_invariant(r, k):
                raise ConsistencyError(f"{k!r} in [E, E_*] is not invariant under the rank-one algebra")
            inv = is_invariant(a, k)
            if ok and not inv:
                raise ConsistencyError(f"{k!r} lies in a certified interval but is not Alg L-invariant")
            if not inv:
                witnesses.append(k)
    verdict = all(row["interval_invariant"] for row in rows)
    return {
        "check": "lat-determined",
        "certainty": "exact" if audit is not None and audit.verified else "carrier-only",
        "table": rows,
        "verdict": verdict,
        "spot_check_witnesses": witnesses[:5],
    }


def check_lattice_recovery(lattice: SubspaceLattice, samples: int = 25, seed: int = 0) -> dict:
    """Whether the carrier equals Lat R for R the rank-one subalgebra of Alg L.

    Holds iff every interval [E, E_*] taken inside the carrier lies in the
    carrier; over an infinite field that means every dimension gap is at
    most one.  Cross-checked by sampling K and testing invariance under R.
    """
    r = rankone_submodule(lattice, OrderHom.identity(lattice))
    rng = random.Random(seed)
    rows = []
    for e in lattice:
        s = e_star(lattice, e)
        gap = s.dim - e.dim
        rows.append({"E": e, "E_star": s, "gap": gap, "contained": gap <= 1})
    verdict = all(row["contained"] for row in rows)
    witness = None
    if verdict:
        for _ in range(samples):
            k = random_subspace_of(rng, lattice.top)
            if k not in lattice and is_invariant(r, k):
                raise ConsistencyError(f"{k!r} is outside the carrier but invariant under R")
    else:
        for row in rows:
            if row["gap"] < 2:
                continue
            for _ in range(max(samples, 50)):
                k = _sample_interval(rng, row["E"], row["E_star"], proper=True)
                if k not in lattice:
                    if not is_invariant(r, k):
                        raise ConsistencyError(f"{k!r} in [E, E_*] is not invariant under R")
                    witness = k
                    break
            if witness is not None:
                break
        if witness is None:
            raise ConsistencyError("no sampled subspace certifies that the carrier differs from Lat R")
    return {"check": "lattice-recovery", "table": rows, "verdict": verdict, "witness": witness}


def check_ref_rankone(instance: ModuleInstance) -> dict:
    """Ref R = U for the rank-one submodule R of U, against tau = (tau~)~.

    Only right modules are supported.
    """
    if instance.side != "right":
        raise ValueError("rank-one hull comparison is defined for right modules")
    lat = instance.lattice
    u = instance.space
    tau = tau_of(u, lat, "right")
    tilde = hom_tilde(lat, tau)
    tilde2 = hom_tilde(lat, tilde)
    lattice_route = tau == tilde2
    r = rankone_submodule(lat, tau)
    if r != rankone_submodule(lat, instance.hom):
        raise ConsistencyError("rank-one submodule depends on the choice of hom for the same module")
    hull = ref_module(r, lat, instance.algebra, "right", instance.audit)
    operator_route = hull.space == u
    agree = lattice_route == operator_route
    if not agree and instance.certainty == "exact":
        raise ConsistencyError(f"tau=(tau~)~ is {lattice_route} but Ref R = U is {operator_route}")
    return {
        "check": "ref-rankone",
        "certainty": instance.certainty,
        "table": [{"E": e, "tau": t, "tau_tilde": tt, "tau_tilde_tilde": ttt}
                  for (e, t), tt, ttt in zip(tau.items(), tilde.values, tilde2.values)],
        "rankone_dim": r.dim,
        "ref_rankone_dim": hull.space.dim,
        "module_dim": u.dim,
        "lattice_route": lattice_route,
        "operator_route": operator_route,
        "verdict": lattice_route if agree else None,
        "consistent": agree,
    }


def check_complete_distributivity(lattice: SubspaceLattice, audit: AuditResult | None = None) -> dict:
    """Three predicates that agree on reflexive carriers:
    E = E_sharp for all E, Ref R = Alg L, and E = E_* for all E."""
    a = alg(lattice)
    r = rankone_submodule(lattice, OrderHom.identity(lattice))
    sharp_route = is_completely_distributive(lattice)
    hull = ref_module(r, lattice, a, "right", audit)
    hull_route = hull.space == a
    star_route = all(e_star(lattice, e) == e for e in lattice)
    agree = sharp_route == hull_route == star_route
    certified = audit is not None and audit.verified
    if not agree and certified:
        raise ConsistencyError(
            f"E=E_sharp: {sharp_route}, Ref R = Alg L: {hull_route}, E=E_*: {star_route}"
        )
    return {
        "check": "complete-distributivity",
        "certainty": "exact" if certified else "carrier-only",
        "table": [{"E": e, "E_minus": e_minus(lattice, e), "E_star": e_star(lattice, e),
                   "E_sharp": e_sharp(lattice, e)} for e in lattice],
        "sharp_route": sharp_route,
        "hull_route": hull_route,
        "star_route": star_route,
        "verdict": sharp_route if agree else None,
        "consistent": agree,
    }
