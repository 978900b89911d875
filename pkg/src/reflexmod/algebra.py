"""Operator spaces (linear spaces of n x n matrices) and invariant-subspace tests."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .lattice import SubspaceLattice, diamond_triples
from .linalg import (
    DimensionMismatch,
    Matrix,
    Subspace,
    Vector,
    adjoint,
    echelon,
    format_vector,
    full_space,
    identity,
    matmul,
    matvec,
    nullspace,
    random_vector_in,
    span,
    unvec,
    vec,
)
from .scalars import conj, format_scalar

__all__ = [
    "OperatorSpace",
    "AuditResult",
    "NotUnital",
    "alg",
    "inclusion_constraints",
    "solve_operators",
    "is_invariant",
    "cyclic_subspace",
    "audit_reflexive",
    "lat_membership_interval",
    "coordinates",
]


class NotUnital(ValueError):
    """The operator space does not contain the identity."""


class OperatorSpace:
    """Linear subspace of n x n matrices, stored as a canonical subspace of vec space."""

    __slots__ = ("n", "space", "_matrices", "_unital", "_closed")

    def __init__(self, n: int, space: Subspace):
        if space.n != n * n:
            raise DimensionMismatch(f"operator space of {n}x{n} matrices needs ambient {n * n}, got {space.n}")
        self.n = n
        self.space = space
        self._matrices = None
        self._unital = None
        self._closed = None

    @classmethod
    def from_matrices(cls, matrices: Iterable[Matrix], n: int) -> "OperatorSpace":
        vs = []
        for m in matrices:
            if len(m) != n or any(len(r) != n for r in m):
                raise DimensionMismatch(f"expected {n}x{n} matrices")
            vs.append(vec(m))
        return cls(n, span(vs, n * n))

    @classmethod
    def full(cls, n: int) -> "OperatorSpace":
        return cls(n, full_space(n * n))

    @classmethod
    def zero(cls, n: int) -> "OperatorSpace":
        return cls(n, Subspace(n * n))

    @classmethod
    def scalars(cls, n: int) -> "OperatorSpace":
        return cls.from_matrices([identity(n)], n)

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def matrices(self) -> tuple[Matrix, ...]:
        if self._matrices is None:
            self._matrices = tuple(unvec(b, self.n) for b in self.space.basis)
        return self._matrices

    def __eq__(self, other):
        if not isinstance(other, OperatorSpace):
            return NotImplemented
        return self.space == other.space

    def __hash__(self):
        return hash(self.space)

    def __repr__(self):
        return f"OperatorSpace(n={self.n}, dim={self.dim})"

    def contains_matrix(self, m: Matrix) -> bool:
        return self.space.contains_vector(vec(m))

    def contains(self, other: "OperatorSpace") -> bool:
        return self.space.contains(other.space)

    def __le__(self, other: "OperatorSpace") -> bool:
        return other.space.contains(self.space)

    def __ge__(self, other: "OperatorSpace") -> bool:
        return self.space.contains(other.space)

    def sum(self, other: "OperatorSpace") -> "OperatorSpace":
        return OperatorSpace(self.n, self.space.sum(other.space))

    def intersect(self, other: "OperatorSpace") -> "OperatorSpace":
        return OperatorSpace(self.n, self.space.intersect(other.space))

    def adjoint(self) -> "OperatorSpace":
        return OperatorSpace.from_matrices((adjoint(m) for m in self.matrices), self.n)

    @property
    def contains_identity(self) -> bool:
        if self._unital is None:
            self._unital = self.contains_matrix(identity(self.n))
        return self._unital

    @property
    def multiplicatively_closed(self) -> bool:
        if self._closed is None:
            ms = self.matrices
            self._closed = all(self.contains_matrix(matmul(a, b)) for a in ms for b in ms)
        return self._closed

    def is_unital_algebra(self) -> bool:
        return self.contains_identity and self.multiplicatively_closed

    def is_right_module_over(self, a: "OperatorSpace") -> bool:
        """U.A inside U on bases."""
        return all(self.contains_matrix(matmul(t, s)) for t in self.matrices for s in a.matrices)

    def is_left_module_over(self, a: "OperatorSpace") -> bool:
        return all(self.contains_matrix(matmul(s, t)) for t in self.matrices for s in a.matrices)

    def image(self, s: Subspace) -> Subspace:
        """span{T v : T in self, v in s}."""
        if s.n != self.n:
            raise DimensionMismatch(f"subspace of ambient {s.n} under {self.n}x{self.n} operators")
        return span((matvec(t, v) for t in self.matrices for v in s.basis), self.n)

    def to_json(self) -> list:
        return [[[format_scalar(x) for x in row] for row in m] for m in self.matrices]


def inclusion_constraints(source: Subspace, target: Subspace) -> list[Vector]:
    """Linear rows on vec(T) whose common kernel is {T : T(source) inside target}.

    One row per pair (v, w), v in a basis of source and w in a basis of
    target's orthogonal complement: <T v, w> = 0.
    """
    if source.n != target.n:
        raise DimensionMismatch(f"ambient dimensions {source.n} and {target.n} differ")
    n = source.n
    if source.is_zero() or target.is_full():
        return []
    rows = []
    for w in target.orth_complement().basis:
        cw = [conj(x) for x in w]
        for v in source.basis:
            rows.append(tuple(cw[i] * v[j] for i in range(n) for j in range(n)))
    return rows


def solve_operators(pairs: Iterable[tuple[Subspace, Subspace]], n: int) -> OperatorSpace:
    """{T : T(source) inside target for every (source, target) pair}."""
    rows: list[Vector] = []
    for src, tgt in pairs:
        rows.extend(inclusion_constraints(src, tgt))
    return OperatorSpace(n, span(nullspace(rows, n * n), n * n))


def alg(lattice: SubspaceLattice) -> OperatorSpace:
    """All operators leaving every carrier element invariant."""
    out = solve_operators(((e, e) for e in lattice), lattice.n)
    assert out.contains_identity and out.multiplicatively_closed
    return out


def is_invariant(ops: OperatorSpace, k: Subspace) -> bool:
    if k.n != ops.n:
        raise DimensionMismatch(f"subspace of ambient {k.n} under {ops.n}x{ops.n} operators")
    if k.is_zero() or k.is_full():
        return True
    return all(k.contains_vector(matvec(t, v)) for t in ops.matrices for v in k.basis)


def cyclic_subspace(a: OperatorSpace, x: Sequence) -> Subspace:
    """[A x], the smallest A-invariant subspace containing x (A unital)."""
    if not a.contains_identity:
        raise NotUnital("cyclic subspaces need an operator space containing the identity")
    if len(x) != a.n:
        raise DimensionMismatch(f"vector of length {len(x)} for {a.n}x{a.n} operators")
    return span((matvec(t, x) for t in a.matrices), a.n)


@dataclass(frozen=True)
class AuditResult:
    """Outcome of :func:`audit_reflexive`.

    ``verdict`` is "verified_up_to_sampling" or "counterexample"; in the
    latter case ``counterexample`` is a vector whose cyclic subspace
    ``witness`` is invariant and missing from the carrier.
    """

    verdict: str
    trials: int
    seed: int
    counterexample: Vector | None = None
    witness: Subspace | None = None

    @property
    def verified(self) -> bool:
        return self.verdict == "verified_up_to_sampling"

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "trials": self.trials, "seed": self.seed}
        if self.counterexample is not None:
            out["counterexample"] = format_vector(self.counterexample)
            out["cyclic_subspace"] = self.witness.to_json()
        return out


def audit_reflexive(lattice: SubspaceLattice, trials: int = 200, seed: int = 0,
                    algebra: OperatorSpace | None = None) -> AuditResult:
    """Randomized test of ``lattice == Lat A`` for ``A = alg(lattice)``.

    Each trial draws an integer vector from a carrier element (cycling
    through all of them, so lower strata are probed too) and checks that its
    cyclic subspace is in the carrier.  A miss is a certified
    counterexample.  The coordinate box grows with the trial number.

    Generic draws never land on the graph-shaped invariant subspaces that a
    diamond a, b, c (pairwise meet X, pairwise join Y) produces, so when
    the random trials find nothing, each diamond is probed with vectors
    u + 2v where u + v lies in c, u in a and v in b.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    a = alg(lattice) if algebra is None else algebra
    rng = random.Random(seed)
    nonzero = [e for e in lattice if not e.is_zero()]

    def probe(x, t):
        if not any(x):
            return None
        c = cyclic_subspace(a, x)
        if c not in lattice:
            assert is_invariant(a, c) and c.contains_vector(x)
            return AuditResult("counterexample", t, seed, x, c)
        return None

    for t in range(trials):
        e = nonzero[t % len(nonzero)]
        found = probe(random_vector_in(rng, e, 9 + t // 25), t + 1)
        if found:
            return found
    t = trials
    for _, _, ea, eb, ec in diamond_triples(lattice):
        basis = ea.basis + eb.basis
        for _ in range(4):
            k = random_vector_in(rng, ec, 9)
            coeffs = coordinates(k, basis)
            if coeffs is None or not any(k):
                continue
            u = _combine(coeffs[:ea.dim], ea.basis, lattice.n)
            v = _combine(coeffs[ea.dim:], eb.basis, lattice.n)
            t += 1
            found = probe(tuple(p + 2 * q for p, q in zip(u, v)), t)
            if found:
                return found
    return AuditResult("verified_up_to_sampling", trials, seed)


def _combine(coeffs, basis, n):
    out = [0] * n
    for c, b in zip(coeffs, basis):
        out = [o + c * x for o, x in zip(out, b)]
    return tuple(out)


def coordinates(v: Sequence, basis: Sequence[Sequence]) -> tuple | None:
    """Coefficients c with sum c_i basis_i = v, or None when v is outside the span."""
    k = len(basis)
    n = len(v)
    # solve [basis^T | v] by row reduction on the augmented system
    rows = [tuple(basis[i][r] for i in range(k)) + (v[r],) for r in range(n)]
    red, pivots = echelon(rows, k + 1)
    if k in pivots:
        return None
    coeffs = [0] * k
    for r, p in zip(red, pivots):
        coeffs[p] = r[k]
    return tuple(coeffs)


def lat_membership_interval(a: OperatorSpace, e: Subspace, m: Subspace) -> bool:
    """True iff every K with E <= K <= M is invariant under every operator of A.

    With D = M intersected with the orthogonal complement of E, each operator
    must induce a single scalar multiple of the identity on M/E when
    dim D >= 2; when dim D <= 1 the interval is {E, M} or {E}.
    """
    if not m.contains(e):
        raise ValueError("interval endpoints are not ordered: E is not contained in M")
    if not (is_invariant(a, e) and is_invariant(a, m)):
        return False
    d = m.intersect(e.orth_complement())
    if d.dim <= 1:
        return True
    basis = e.basis + d.basis
    ke = e.dim
    for t in a.matrices:
        lam = None
        for j, w in enumerate(d.basis):
            c = coordinates(matvec(t, w), basis)
            assert c is not None  # M is invariant
            quot = c[ke:]
            if any(x for i, x in enumerate(quot) if i != j):
                return False
            if lam is None:
                lam = quot[j]
            elif quot[j] != lam:
                return False
    return True
