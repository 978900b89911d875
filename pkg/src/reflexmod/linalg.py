"""Exact dense linear algebra over Q or Q[i].

Vectors are tuples of scalars, matrices are tuples of row tuples.  A
:class:`Subspace` stores the reduced row echelon basis of its span, so two
subspaces are equal exactly when their bases are equal entrywise.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

from .scalars import Scalar, conj, format_scalar, parse_scalar, scalar_key

__all__ = [
    "Vector",
    "Matrix",
    "DimensionMismatch",
    "Subspace",
    "echelon",
    "nullspace",
    "span",
    "zero_space",
    "full_space",
    "unit",
    "inner",
    "outer",
    "matvec",
    "matmul",
    "adjoint",
    "identity",
    "zero_matrix",
    "vec",
    "unvec",
    "inverse",
    "is_zero",
    "random_vector",
    "random_vector_in",
    "random_subspace_of",
    "parse_vector",
    "format_vector",
]

Vector = Tuple[Scalar, ...]
Matrix = Tuple[Tuple[Scalar, ...], ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionMismatch(ValueError):
    """Operands live in ambient spaces of different dimension."""


def echelon(rows: Iterable[Sequence[Scalar]], ncols: int) -> Tuple[Tuple[Vector, ...], Tuple[int, ...]]:
    """Reduced row echelon basis of the row span, and its pivot columns.

    Rows are folded in one at a time against the pivots found so far, so the
    working set never exceeds ``ncols`` rows.
    """
    piv: dict[int, list] = {}
    for row in rows:
        if len(row) != ncols:
            raise DimensionMismatch(f"row of length {len(row)} in a {ncols}-column system")
        r = list(row)
        for c, pr in piv.items():
            f = r[c]
            if f:
                r = [a - f * b if b else a for a, b in zip(r, pr)]
        p = next((i for i, a in enumerate(r) if a), None)
        if p is None:
            continue
        inv = ONE / r[p]
        r = [a * inv if a else ZERO for a in r]
        for c, pr in piv.items():
            f = pr[p]
            if f:
                piv[c] = [a - f * b if b else a for a, b in zip(pr, r)]
        piv[p] = r
        if len(piv) == ncols:
            break
    pivots = tuple(sorted(piv))
    return tuple(tuple(piv[c]) for c in pivots), pivots


def nullspace(rows: Iterable[Sequence[Scalar]], ncols: int) -> list[Vector]:
    """Basis of {v : r . v = 0 for every row r} (plain bilinear product)."""
    basis, pivots = echelon(rows, ncols)
    pivset = set(pivots)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for r, p in zip(basis, pivots):
            if r[f]:
                v[p] = -r[f]
        out.append(tuple(v))
    return out


def is_zero(v: Sequence[Scalar]) -> bool:
    return not any(v)


def inner(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    """<u, v>, conjugate-linear in the second argument."""
    return sum((a * conj(b) for a, b in zip(u, v) if a and b), ZERO)


def outer(x: Sequence[Scalar], y: Sequence[Scalar]) -> Matrix:
    """Matrix of z -> <z, y> x."""
    cy = [conj(b) for b in y]
    return tuple(tuple(a * b for b in cy) for a in x)


def matvec(m: Matrix, v: Sequence[Scalar]) -> Vector:
    return tuple(sum((a * b for a, b in zip(row, v) if a and b), ZERO) for row in m)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col) if x and y), ZERO) for col in cols) for row in a
    )


def adjoint(m: Matrix) -> Matrix:
    return tuple(tuple(conj(x) for x in col) for col in zip(*m))


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def zero_matrix(n: int) -> Matrix:
    return tuple((ZERO,) * n for _ in range(n))


def vec(m: Matrix) -> Vector:
    return tuple(x for row in m for x in row)


def unvec(v: Sequence[Scalar], n: int) -> Matrix:
    if len(v) != n * n:
        raise DimensionMismatch(f"cannot reshape length {len(v)} to {n}x{n}")
    return tuple(tuple(v[i * n:(i + 1) * n]) for i in range(n))


def inverse(m: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises ``ZeroDivisionError`` when singular."""
    k = len(m)
    aug = [tuple(row) + tuple(ONE if i == j else ZERO for j in range(k)) for i, row in enumerate(m)]
    basis, pivots = echelon(aug, 2 * k)
    if pivots[:k] != tuple(range(k)) or len(pivots) < k:
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(r[k:]) for r in basis[:k])


class Subspace:
    """A linear subspace of the n-dimensional coordinate space.

    Immutable and hashable.  ``basis`` is the reduced row echelon basis.
    """

    __slots__ = ("n", "basis", "pivots", "_hash")

    def __init__(self, n: int, basis: Tuple[Vector, ...] = (), pivots: Tuple[int, ...] = ()):
        # trusted constructor: callers go through span() unless already canonical
        self.n = n
        self.basis = basis
        self.pivots = pivots
        self._hash = hash((n, basis))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.n == other.n and self.basis == other.basis

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.basis:
            return f"Subspace(n={self.n}, 0)"
        rows = ", ".join("(" + ",".join(format_scalar(x) for x in b) + ")" for b in self.basis)
        return f"Subspace(n={self.n}, <{rows}>)"

    def sort_key(self) -> tuple:
        return (self.dim, tuple(scalar_key(x) for b in self.basis for x in b))

    def _check(self, other: "Subspace"):
        if self.n != other.n:
            raise DimensionMismatch(f"ambient dimensions {self.n} and {other.n} differ")

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return len(self.basis) == self.n

    def contains_vector(self, v: Sequence[Scalar]) -> bool:
        if len(v) != self.n:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {self.n}")
        r = list(v)
        for b, p in zip(self.basis, self.pivots):
            f = r[p]
            if f:
                r = [a - f * c if c else a for a, c in zip(r, b)]
        return not any(r)

    def contains(self, other: "Subspace") -> bool:
        """self >= other."""
        self._check(other)
        if other.dim > self.dim:
            return False
        return all(self.contains_vector(v) for v in other.basis)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self)

    def __ge__(self, other: "Subspace") -> bool:
        return self.contains(other)

    def __lt__(self, other: "Subspace") -> bool:
        return self != other and other.contains(self)

    def __gt__(self, other: "Subspace") -> bool:
        return self != other and self.contains(other)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if other.dim == 0 or self.is_full():
            return self
        if self.dim == 0 or other.is_full():
            return other
        return span(self.basis + other.basis, self.n)

    __or__ = sum

    def orth_complement(self) -> "Subspace":
        return span(nullspace([tuple(conj(x) for x in b) for b in self.basis], self.n), self.n)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.is_full() or other.dim == 0:
            return other
        if other.is_full() or self.dim == 0:
            return self
        return self.orth_complement().sum(other.orth_complement()).orth_complement()

    __and__ = intersect

    def apply(self, m: Matrix) -> "Subspace":
        """span{M v : v in self}."""
        if len(m) != self.n:
            raise DimensionMismatch(f"{len(m)}x{len(m)} matrix on ambient dimension {self.n}")
        return span([matvec(m, b) for b in self.basis], self.n)

    def projector(self) -> Matrix:
        """Orthogonal projection onto self, via the inverse Gram matrix."""
        n, k = self.n, self.dim
        if k == 0:
            return zero_matrix(n)
        b = self.basis
        gram = tuple(tuple(inner(b[j], b[i]) for j in range(k)) for i in range(k))
        ginv = inverse(gram)
        # P = B G^{-1} B^*, with the basis vectors as the columns of B
        left = [[sum((b[a][i] * ginv[a][c] for a in range(k)), ZERO) for c in range(k)] for i in range(n)]
        return tuple(
            tuple(sum((left[i][c] * conj(b[c][j]) for c in range(k)), ZERO) for j in range(n))
            for i in range(n)
        )

    def to_json(self) -> list:
        return [[format_scalar(x) for x in v] for v in self.basis]


def span(vectors: Iterable[Sequence[Scalar]], n: int) -> Subspace:
    vectors = list(vectors)
    for v in vectors:
        if len(v) != n:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {n}")
    basis, pivots = echelon(vectors, n)
    return Subspace(n, basis, pivots)


def zero_space(n: int) -> Subspace:
    return Subspace(n)


def full_space(n: int) -> Subspace:
    return Subspace(n, identity(n), tuple(range(n)))


def unit(n: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(n))


def random_vector(rng: random.Random, n: int, box: int = 9) -> Vector:
    return tuple(Fraction(rng.randint(-box, box)) for _ in range(n))


def random_vector_in(rng: random.Random, s: Subspace, box: int = 9) -> Vector:
    """Random integer combination of the canonical basis of ``s``."""
    out = [ZERO] * s.n
    for b in s.basis:
        c = rng.randint(-box, box)
        if c:
            out = [a + c * x for a, x in zip(out, b)]
    return tuple(out)


def random_subspace_of(rng: random.Random, s: Subspace, dim: int | None = None, box: int = 9) -> Subspace:
    """Random subspace of ``s``; its dimension is ``dim`` unless sampling degenerates."""
    if dim is None:
        dim = rng.randint(0, s.dim)
    return span([random_vector_in(rng, s, box) for _ in range(dim)], s.n)


def parse_vector(items, n: int, field: str = "Q") -> Vector:
    if not isinstance(items, (list, tuple)):
        raise ValueError(f"expected a list of scalars, got {items!r}")
    if len(items) != n:
        raise DimensionMismatch(f"vector of length {len(items)} in ambient dimension {n}")
    return tuple(parse_scalar(x, field) for x in items)


def format_vector(v: Sequence[Scalar]) -> list:
    return [format_scalar(x) for x in v]
