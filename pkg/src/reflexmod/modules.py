"""One-sided A-submodules determined by order homomorphisms.

Right module of ``phi``: ``{T : T E inside phi(E) for every E in the carrier}``.
Left module of ``psi``:  ``{T : T psi(E) inside E for every E in the carrier}``.

The carrier stands in for Lat A.  Results whose exactness depends on the
carrier really being Lat A carry a certainty flag: "exact" when the carrier
passed :func:`~reflexmod.algebra.audit_reflexive`, "upper-bound" otherwise.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .algebra import AuditResult, OperatorSpace, alg, audit_reflexive, is_invariant, solve_operators
from .lattice import ConsistencyError, OrderHom, SubspaceLattice
from .linalg import Subspace, full_space, identity, nullspace, random_vector_in, span

__all__ = [
    "SideMismatch",
    "ModuleInstance",
    "RefHull",
    "module_from_hom_right",
    "module_from_hom_left",
    "dual_hom",
    "tau_of",
    "ref_module",
    "ref_sampling_oracle",
    "is_reflexive_module",
    "is_ideal",
    "lat_module_membership",
    "lat_module_verdicts",
]

SIDES = ("right", "left")


class SideMismatch(ValueError):
    """The operator space is not a module on the requested side."""


def _certainty(audit: AuditResult | None) -> str:
    return "exact" if audit is not None and audit.verified else "upper-bound"


@dataclass(frozen=True)
class ModuleInstance:
    lattice: SubspaceLattice
    algebra: OperatorSpace
    hom: OrderHom
    space: OperatorSpace
    side: str
    audit: AuditResult | None = None

    @property
    def certainty(self) -> str:
        return _certainty(self.audit)

    def with_audit(self, trials: int = 200, seed: int = 0) -> "ModuleInstance":
        audit = audit_reflexive(self.lattice, trials, seed, algebra=self.algebra)
        return ModuleInstance(self.lattice, self.algebra, self.hom, self.space, self.side, audit)


class RefHull(NamedTuple):
    space: OperatorSpace
    certainty: str


def _check_inputs(lattice: SubspaceLattice, algebra: OperatorSpace | None, hom: OrderHom) -> OperatorSpace:
    if hom.lattice != lattice:
        raise ValueError("hom is defined on a different carrier")
    if algebra is None:
        return alg(lattice)
    if algebra.n != lattice.n:
        raise ValueError("algebra and carrier live in different dimensions")
    if not algebra.contains_identity:
        raise ValueError("algebra must contain the identity")
    bad = [e for e in lattice if not is_invariant(algebra, e)]
    if bad:
        raise ValueError(f"carrier element {bad[0]!r} is not invariant under the algebra")
    return algebra


def module_from_hom_right(lattice: SubspaceLattice, algebra: OperatorSpace | None, hom: OrderHom,
                          audit: AuditResult | None = None) -> ModuleInstance:
    a = _check_inputs(lattice, algebra, hom)
    u = solve_operators(((e, v) for e, v in hom.items()), lattice.n)
    if not u.is_right_module_over(a):
        raise ConsistencyError("solution space is not a right module over the algebra")
    return ModuleInstance(lattice, a, hom, u, "right", audit)


def dual_hom(lattice: SubspaceLattice, hom: OrderHom) -> OrderHom:
    """The hom on the complemented carrier sending E-perp to hom(E)-perp."""
    dual = lattice.dual()
    return OrderHom(dual, {e.orth_complement(): v.orth_complement() for e, v in hom.items()})


def module_from_hom_left(lattice: SubspaceLattice, algebra: OperatorSpace | None, hom: OrderHom,
                         audit: AuditResult | None = None) -> ModuleInstance:
    """Left module of ``hom``, cross-checked as the adjoint of a right module.

    The right module lives on the complemented carrier with the hom
    E-perp -> hom(E)-perp.
    """
    a = _check_inputs(lattice, algebra, hom)
    u = solve_operators(((v, e) for e, v in hom.items()), lattice.n)
    dual = dual_hom(lattice, hom)
    mirrored = solve_operators(dual.items(), lattice.n).adjoint()
    if mirrored != u:
        raise ConsistencyError("left module differs from the adjoint of its dual right module")
    if not u.is_left_module_over(a):
        raise ConsistencyError("solution space is not a left module over the algebra")
    return ModuleInstance(lattice, a, hom, u, "left", audit)


def tau_of(u: OperatorSpace, lattice: SubspaceLattice, side: str = "right") -> OrderHom:
    """Right: E -> [U E].  Left: E -> orthogonal complement of [U* E-perp]."""
    if side == "right":
        return OrderHom(lattice, u.image)
    if side == "left":
        ua = u.adjoint()
        return OrderHom(lattice, lambda e: ua.image(e.orth_complement()).orth_complement())
    raise ValueError(f"side must be one of {SIDES}, got {side!r}")


def _module_of(lattice: SubspaceLattice, hom: OrderHom, side: str) -> OperatorSpace:
    if side == "right":
        return solve_operators(hom.items(), lattice.n)
    return solve_operators(((v, e) for e, v in hom.items()), lattice.n)


def ref_module(u: OperatorSpace, lattice: SubspaceLattice, algebra: OperatorSpace | None = None,
               side: str = "right", audit: AuditResult | None = None) -> RefHull:
    """Reflexive hull of a right module (star-reflexive hull of a left one).

    Computed as the module of ``tau_of(u)`` over the carrier.  This is exact
    when the carrier is all of Lat A, and otherwise contains the true hull.
    """
    a = alg(lattice) if algebra is None else algebra
    if side == "right":
        ok = u.is_right_module_over(a)
    elif side == "left":
        ok = u.is_left_module_over(a)
    else:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")
    if not ok:
        raise SideMismatch(f"operator space is not a {side} module over the algebra")
    return RefHull(_module_of(lattice, tau_of(u, lattice, side), side), _certainty(audit))


def ref_sampling_oracle(u: OperatorSpace, samples: int, seed: int = 0,
                        probes: Sequence[Subspace] | None = None, box: int = 9) -> OperatorSpace:
    """Intersection over sampled x of {T : T x in span{B x : B in U}}.

    ``samples`` vectors are drawn from each probe subspace (default: the
    whole space).  Integer coordinates start in [-box, box] and the box doubles
    whenever a draw is the zero vector.  The result always contains Ref U.
    Constraints are assembled with orthogonal projectors, separately from the
    basis-complement route used by :func:`ref_module`.
    """
    if samples < 1 or box < 1:
        raise ValueError("samples and box must be >= 1")
    n = u.n
    start = box
    rng = random.Random(seed)
    probes = [full_space(n)] if probes is None else [p for p in probes if not p.is_zero()]
    ident = identity(n)
    rows = []
    for p in probes:
        box = start
        drawn = 0
        while drawn < samples:
            x = random_vector_in(rng, p, box)
            if not any(x):
                box *= 2
                continue
            drawn += 1
            proj = u.image(span([x], n)).projector()
            q = [[ident[i][k] - proj[i][k] for k in range(n)] for i in range(n)]
            # (Q T x)_i = sum_{k,j} Q_ik T_kj x_j
            for i in range(n):
                if any(q[i]):
                    rows.append(tuple(q[i][k] * x[j] for k in range(n) for j in range(n)))
    return OperatorSpace(n, span(nullspace(rows, n * n), n * n))


def is_reflexive_module(u: OperatorSpace, lattice: SubspaceLattice, algebra: OperatorSpace | None = None,
                        side: str = "right") -> bool:
    return ref_module(u, lattice, algebra, side).space == u


def is_ideal(instance: ModuleInstance) -> bool:
    """Right: [U E] <= E for every E.  Left: the left-side tau dominates E.

    Cross-checked against U inside A and the module products when the
    algebra is the one generated by the carrier.
    """
    tau = tau_of(instance.space, instance.lattice, instance.side)
    if instance.side == "right":
        verdict = all(e.contains(t) for e, t in tau.items())
    else:
        verdict = all(t.contains(e) for e, t in tau.items())
    a = instance.algebra
    if a == alg(instance.lattice):
        if instance.side == "right":
            direct = a.contains(instance.space) and instance.space.is_right_module_over(a)
        else:
            direct = a.contains(instance.space) and instance.space.is_left_module_over(a)
        if direct != verdict:
            raise ConsistencyError(f"ideal criterion says {verdict}, products say {direct}")
    return verdict


def lat_module_verdicts(instance: ModuleInstance, p: Subspace) -> tuple[bool, bool]:
    """(direct invariance of P under U, interval criterion over the carrier)."""
    direct = is_invariant(instance.space, p)
    tau = tau_of(instance.space, instance.lattice, instance.side)
    if instance.side == "right":
        crit = any(p.contains(t) and e.contains(p) for e, t in tau.items())
    else:
        crit = any(p.contains(e) and t.contains(p) for e, t in tau.items())
    return direct, crit


def lat_module_membership(instance: ModuleInstance, p: Subspace) -> bool:
    """Whether P is invariant under U; raises on criterion mismatch over an audited carrier."""
    direct, crit = lat_module_verdicts(instance, p)
    if direct != crit and instance.certainty == "exact":
        raise ConsistencyError(f"direct Lat U membership {direct} but interval criterion {crit}")
    return direct
