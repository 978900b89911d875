"""Finite subspace lattices, order homomorphisms and their derived maps.

For a carrier ``L`` and ``E`` in ``L``:

* ``e_minus(L, E)``  = join of the ``G`` in ``L`` with ``G`` not above ``E``
* ``e_star(L, E)``   = meet of ``F_-`` over ``F`` in ``L`` not below ``E``
* ``e_sharp(L, E)``  = join of the ``F`` in ``L`` with ``F_-`` not above ``E``

and for an order homomorphism ``phi`` defined on ``L``:

* ``hom_tilde(phi)(E)`` = join of the ``F`` in ``L`` with ``phi(F)`` not above ``E``
* ``hom_star(phi)(E)``  = meet of ``hom_tilde(phi)(F)`` over ``F`` not below ``E``

An empty join is the zero subspace and an empty meet is the whole space.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Iterable, Iterator, Mapping

from .linalg import DimensionMismatch, Subspace, full_space, matmul, zero_space

__all__ = [
    "CapExceeded",
    "ConsistencyError",
    "NotMonotone",
    "SubspaceLattice",
    "OrderHom",
    "lattice_closure",
    "e_minus",
    "e_star",
    "e_sharp",
    "hom_tilde",
    "hom_star",
    "is_distributive",
    "is_completely_distributive",
    "is_commutative",
    "distributivity_verdict",
    "derived_tables",
    "diamond_triples",
]

DEFAULT_CAP = 512


class CapExceeded(RuntimeError):
    """Lattice closure did not reach a fixpoint within the element cap."""


class ConsistencyError(AssertionError):
    """Two routes that must agree returned different answers."""


class NotMonotone(ValueError):
    """An order homomorphism was given a map that does not preserve order."""


class SubspaceLattice:
    """A finite family of subspaces containing 0 and H, closed under sum and intersection.

    Elements are kept sorted by ``(dim, canonical basis)`` so iteration order
    is deterministic.
    """

    def __init__(self, elements: Iterable[Subspace], n: int | None = None, *, validate: bool = True):
        elems = set(elements)
        if n is None:
            if not elems:
                raise ValueError("ambient dimension needed for an empty generator set")
            n = next(iter(elems)).n
        for e in elems:
            if e.n != n:
                raise DimensionMismatch(f"element of ambient dimension {e.n} in a lattice on {n}")
        elems.add(zero_space(n))
        elems.add(full_space(n))
        self.n = n
        self.elements: tuple[Subspace, ...] = tuple(sorted(elems, key=Subspace.sort_key))
        self.index = {e: i for i, e in enumerate(self.elements)}
        size = len(self.elements)
        self._minus = None
        self._leq = [[self.elements[j].contains(self.elements[i]) for j in range(size)] for i in range(size)]
        if validate:
            for a, b in combinations(self.elements, 2):
                if a.sum(b) not in self.index or a.intersect(b) not in self.index:
                    raise ValueError("carrier is not closed under sum and intersection")

    @property
    def bottom(self) -> Subspace:
        return self.elements[0]

    @property
    def top(self) -> Subspace:
        return self.elements[-1]

    def __iter__(self) -> Iterator[Subspace]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, e) -> bool:
        return e in self.index

    def __eq__(self, other):
        if not isinstance(other, SubspaceLattice):
            return NotImplemented
        return self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"SubspaceLattice(n={self.n}, size={len(self)})"

    def require(self, e: Subspace) -> int:
        try:
            return self.index[e]
        except KeyError:
            raise KeyError(f"{e!r} is not in the carrier") from None

    def leq(self, a: Subspace, b: Subspace) -> bool:
        return self._leq[self.require(a)][self.require(b)]

    def join(self, family: Iterable[Subspace]) -> Subspace:
        """Least upper bound of carrier elements, read off the order table."""
        idx = [self.require(e) for e in family]
        leq = self._leq
        for k in range(len(self.elements)):
            if all(leq[i][k] for i in idx):
                return self.elements[k]
        raise AssertionError("carrier has no top")  # pragma: no cover

    def meet(self, family: Iterable[Subspace]) -> Subspace:
        idx = [self.require(e) for e in family]
        leq = self._leq
        for k in range(len(self.elements) - 1, -1, -1):
            if all(leq[k][i] for i in idx):
                return self.elements[k]
        raise AssertionError("carrier has no bottom")  # pragma: no cover

    def minus_table(self) -> tuple[Subspace, ...]:
        """E_- for every element, in carrier order (cached)."""
        if self._minus is None:
            leq = self._leq
            size = len(self.elements)
            self._minus = tuple(
                self.join(self.elements[g] for g in range(size) if not leq[e][g]) for e in range(size)
            )
        return self._minus

    def is_chain(self) -> bool:
        return all(self._leq[i][j] or self._leq[j][i] for i, j in combinations(range(len(self)), 2))

    def dual(self) -> "SubspaceLattice":
        """The lattice of orthogonal complements (an order anti-isomorphic copy)."""
        return SubspaceLattice((e.orth_complement() for e in self.elements), self.n, validate=False)


def lattice_closure(generators: Iterable[Subspace], n: int | None = None, cap: int = DEFAULT_CAP) -> SubspaceLattice:
    """Smallest sum/intersection-closed family containing the generators, 0 and H."""
    gens = list(generators)
    if n is None:
        if not gens:
            raise ValueError("ambient dimension needed for an empty generator set")
        n = gens[0].n
    if cap < len(gens) + 2:
        raise ValueError(f"cap {cap} is below the number of generators plus two")
    seen: dict[Subspace, None] = {zero_space(n): None, full_space(n): None}
    work = []
    for g in gens:
        if g.n != n:
            raise DimensionMismatch(f"generator of ambient dimension {g.n} in a lattice on {n}")
        if g not in seen:
            seen[g] = None
            work.append(g)
    done: list[Subspace] = list(k for k in seen if k not in work)
    while work:
        x = work.pop()
        for y in done:
            for z in (x.sum(y), x.intersect(y)):
                if z not in seen:
                    seen[z] = None
                    work.append(z)
                    if len(seen) > cap:
                        raise CapExceeded(f"closure exceeds cap ({cap} elements)")
        done.append(x)
    return SubspaceLattice(seen, n, validate=False)


class OrderHom:
    """Monotone map from the carrier of a lattice into subspaces of the same space.

    Values need not lie in the carrier.  Monotonicity is validated at
    construction.
    """

    def __init__(self, lattice: SubspaceLattice, values: Mapping[Subspace, Subspace] | Callable[[Subspace], Subspace]):
        if callable(values) and not isinstance(values, Mapping):
            table = {e: values(e) for e in lattice}
        else:
            missing = [e for e in lattice if e not in values]
            if missing:
                raise KeyError(f"hom undefined on {len(missing)} carrier element(s), e.g. {missing[0]!r}")
            extra = [e for e in values if e not in lattice]
            if extra:
                raise KeyError(f"hom defined off the carrier at {extra[0]!r}")
            table = dict(values)
        for v in table.values():
            if v.n != lattice.n:
                raise DimensionMismatch(f"hom value of ambient dimension {v.n} on a lattice in {lattice.n}")
        self.lattice = lattice
        self.values = tuple(table[e] for e in lattice)
        els = lattice.elements
        for i in range(len(els)):
            for j in range(len(els)):
                if i != j and lattice._leq[i][j] and not self.values[j].contains(self.values[i]):
                    raise NotMonotone(f"{els[i]!r} <= {els[j]!r} but the images are not ordered")

    @classmethod
    def identity(cls, lattice: SubspaceLattice) -> "OrderHom":
        return cls(lattice, lambda e: e)

    @classmethod
    def constant(cls, lattice: SubspaceLattice, value: Subspace) -> "OrderHom":
        return cls(lattice, lambda e: value)

    @classmethod
    def monotone_completion(cls, lattice: SubspaceLattice, assigned: Mapping[Subspace, Subspace]) -> "OrderHom":
        """phi(E) = sum of assigned[F] over assigned F <= E (0 if none)."""
        def value(e):
            out = zero_space(lattice.n)
            for f, v in assigned.items():
                if lattice.leq(f, e):
                    out = out.sum(v)
            return out

        return cls(lattice, value)

    def __call__(self, e: Subspace) -> Subspace:
        return self.values[self.lattice.require(e)]

    def items(self):
        return zip(self.lattice.elements, self.values)

    def __eq__(self, other):
        if not isinstance(other, OrderHom):
            return NotImplemented
        return self.lattice == other.lattice and self.values == other.values

    def __hash__(self):
        return hash((self.lattice, self.values))

    def __le__(self, other: "OrderHom") -> bool:
        if self.lattice != other.lattice:
            raise ValueError("homs on different carriers")
        return all(b.contains(a) for a, b in zip(self.values, other.values))

    def __repr__(self):
        return f"OrderHom(size={len(self.values)})"


def e_minus(lattice: SubspaceLattice, e: Subspace) -> Subspace:
    return lattice.minus_table()[lattice.require(e)]


def e_star(lattice: SubspaceLattice, e: Subspace) -> Subspace:
    i = lattice.require(e)
    minus = lattice.minus_table()
    return lattice.meet(minus[f] for f in range(len(lattice)) if not lattice._leq[f][i])


def e_sharp(lattice: SubspaceLattice, e: Subspace) -> Subspace:
    lattice.require(e)
    minus = lattice.minus_table()
    return lattice.join(f for f, m in zip(lattice.elements, minus) if not m.contains(e))


def hom_tilde(lattice: SubspaceLattice, phi: OrderHom) -> OrderHom:
    if phi.lattice != lattice:
        raise KeyError("hom is not defined on this carrier")

    def value(e):
        if e.is_zero():
            return e
        return lattice.join(f for f, v in phi.items() if not v.contains(e))

    return OrderHom(lattice, value)


def hom_star(lattice: SubspaceLattice, phi: OrderHom) -> OrderHom:
    tilde = hom_tilde(lattice, phi)
    return OrderHom(lattice, lambda e: lattice.meet(t for f, t in tilde.items() if not lattice.leq(f, e)))


def is_distributive(lattice: SubspaceLattice) -> bool:
    els = lattice.elements
    for a in els:
        for b in els:
            for c in els:
                if a.intersect(b.sum(c)) != a.intersect(b).sum(a.intersect(c)):
                    return False
    return True


def is_completely_distributive(lattice: SubspaceLattice) -> bool:
    """E equals E_sharp for every E of the carrier."""
    return all(e_sharp(lattice, e) == e for e in lattice)


def is_commutative(lattice: SubspaceLattice) -> bool:
    projs = [e.projector() for e in lattice]
    return all(matmul(p, q) == matmul(q, p) for p, q in combinations(projs, 2))


def distributivity_verdict(lattice: SubspaceLattice) -> bool:
    """Distributivity, cross-checked against the E = E_sharp criterion.

    On a finite lattice the two notions coincide; a mismatch raises
    :class:`ConsistencyError`.
    """
    d = is_distributive(lattice)
    cd = is_completely_distributive(lattice)
    if d != cd:
        raise ConsistencyError(f"distributive={d} but E=E_sharp for all E is {cd}")
    return d


def derived_tables(lattice: SubspaceLattice) -> list[dict]:
    """Per-element rows of E, E_-, E_*, E_sharp."""
    return [
        {"E": e, "E_minus": e_minus(lattice, e), "E_star": e_star(lattice, e), "E_sharp": e_sharp(lattice, e)}
        for e in lattice
    ]


def diamond_triples(lattice: SubspaceLattice) -> list[tuple[Subspace, Subspace, Subspace, Subspace, Subspace]]:
    """All (X, Y, a, b, c) where a, b, c pairwise meet in X and pairwise join to Y.

    A modular lattice is distributive iff there are none, and subspace
    lattices are modular.
    """
    els = lattice.elements
    leq = lattice._leq
    out = []
    for i, j, k in combinations(range(len(els)), 3):
        if leq[i][j] or leq[j][i] or leq[i][k] or leq[k][i] or leq[j][k] or leq[k][j]:
            continue
        a, b, c = els[i], els[j], els[k]
        x = lattice.meet([a, b])
        y = lattice.join([a, b])
        if lattice.meet([a, c]) == x and lattice.meet([b, c]) == x and \
                lattice.join([a, c]) == y and lattice.join([b, c]) == y:
            out.append((x, y, a, b, c))
    return out
