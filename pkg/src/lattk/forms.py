"""Finite abelian groups carrying a bilinear form to Q/Z and, when the parent
lattice is even, a quadratic refinement to Q/2Z.

All searches here are exhaustive and meant for desk-scale groups; anything
larger than ``ENUMERATION_BOUND`` elements raises :class:`CapacityError`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterator, Optional, Sequence

from .errors import CapacityError, LatticeError
from .linalg import IntMat, express_in_basis, hnf, snf

ENUMERATION_BOUND = 10**4


def mod1(x) -> Fraction:
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def mod2(x) -> Fraction:
    x = Fraction(x)
    return x - 2 * (x.numerator // (2 * x.denominator))


@dataclass(frozen=True, order=True)
class TorsionElement:
    """Element of a finite abelian group given as coefficients on cyclic generators."""

    coeffs: tuple[int, ...]
    orders: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != len(self.orders):
            raise LatticeError("coefficient count does not match the group")
        for c, d in zip(self.coeffs, self.orders):
            if not 0 <= c < d:
                raise LatticeError(f"non-canonical coefficient {c} modulo {d}")

    def __add__(self, other: "TorsionElement") -> "TorsionElement":
        return element_sum(self, other)

    def __neg__(self) -> "TorsionElement":
        return TorsionElement(tuple(-c % d for c, d in zip(self.coeffs, self.orders)), self.orders)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int) -> "TorsionElement":
        return TorsionElement(tuple(k * c % d for c, d in zip(self.coeffs, self.orders)), self.orders)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def order(self) -> int:
        n = 1
        x = self
        while not x.is_zero:
            x = x + self
            n += 1
        return n

    def __repr__(self):
        return f"TorsionElement{self.coeffs}"


def element_sum(x: TorsionElement, y: TorsionElement) -> TorsionElement:
    if x.orders != y.orders:
        raise LatticeError("elements belong to different groups")
    return TorsionElement(tuple((a + b) % d for a, b, d in zip(x.coeffs, y.coeffs, x.orders)), x.orders)


@dataclass(frozen=True)
class FiniteQuadraticForm:
    """Discriminant-form data on ``Z/d_1 + ... + Z/d_k``.

    ``b[i][j]`` is stored in [0, 1) and ``q[i]`` in [0, 2).  ``q`` is None for
    forms coming from odd lattices, unless the group has odd order, in which
    case the refinement is unique and is filled in with ``q_from_lattice``
    left False.
    """

    orders: tuple[int, ...]
    b: tuple[tuple[Fraction, ...], ...]
    q: Optional[tuple[Fraction, ...]] = None
    q_from_lattice: bool = False

    def __post_init__(self):
        orders = tuple(int(d) for d in self.orders)
        k = len(orders)
        if any(d < 2 for d in orders):
            raise LatticeError("cyclic orders must be at least 2")
        b = tuple(tuple(mod1(x) for x in row) for row in self.b)
        if len(b) != k or any(len(r) != k for r in b):
            raise LatticeError("bilinear matrix has the wrong shape")
        for i in range(k):
            for j in range(k):
                if b[i][j] != b[j][i]:
                    raise LatticeError("bilinear form is not symmetric")
                if mod1(orders[i] * b[i][j]) != 0:
                    raise LatticeError("bilinear value incompatible with generator order")
        q = self.q
        if q is not None:
            q = tuple(mod2(x) for x in q)
            if len(q) != k:
                raise LatticeError("quadratic values have the wrong length")
            for i in range(k):
                if mod1(q[i]) != b[i][i]:
                    raise LatticeError("q does not refine b")
                if mod2(orders[i] ** 2 * q[i]) != 0:
                    raise LatticeError("quadratic value incompatible with generator order")
        elif all(d % 2 for d in orders) and k:
            q = tuple(_odd_refinement(b[i][i], orders[i]) for i in range(k))
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "q", q)

    @classmethod
    def trivial(cls) -> "FiniteQuadraticForm":
        return cls((), (), (), q_from_lattice=True)

    @property
    def size(self) -> int:
        return prod(self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def has_q(self) -> bool:
        return self.q is not None

    def element(self, *coeffs: int) -> TorsionElement:
        if len(coeffs) == 1 and not isinstance(coeffs[0], int):
            coeffs = tuple(coeffs[0])
        return TorsionElement(tuple(c % d for c, d in zip(coeffs, self.orders)), self.orders)

    def zero(self) -> TorsionElement:
        return TorsionElement((0,) * self.rank, self.orders)

    def generators(self) -> list[TorsionElement]:
        return [self.element(*(int(i == j) for j in range(self.rank))) for i in range(self.rank)]

    def elements(self, bound: int = ENUMERATION_BOUND) -> Iterator[TorsionElement]:
        if self.size > bound:
            raise CapacityError(f"group of order {self.size} exceeds the enumeration bound {bound}")
        for c in itertools.product(*(range(d) for d in self.orders)):
            yield TorsionElement(c, self.orders)

    def bvalue(self, x: TorsionElement, y: TorsionElement) -> Fraction:
        self._own(x)
        self._own(y)
        b = self.b
        return mod1(sum(xi * yj * b[i][j] for i, xi in enumerate(x.coeffs) if xi for j, yj in enumerate(y.coeffs) if yj))

    def qvalue(self, x: TorsionElement) -> Fraction:
        if self.q is None:
            raise LatticeError("form has no quadratic refinement")
        self._own(x)
        c = x.coeffs
        total = sum(ci * ci * self.q[i] for i, ci in enumerate(c) if ci)
        total += 2 * sum(c[i] * c[j] * self.b[i][j] for i in range(self.rank) for j in range(i + 1, self.rank))
        return mod2(total)

    def is_isotropic(self, x: TorsionElement) -> bool:
        if self.q is not None:
            return self.qvalue(x) == 0
        return self.bvalue(x, x) == 0

    def _own(self, x: TorsionElement):
        if x.orders != self.orders:
            raise LatticeError("element does not belong to this group")


def _odd_refinement(bii: Fraction, d: int) -> Fraction:
    for cand in (bii, bii + 1):
        if mod2(d * d * cand) == 0:
            return cand
    raise LatticeError("no quadratic refinement")  # pragma: no cover


def qb_eval(f: FiniteQuadraticForm, x: TorsionElement, y: TorsionElement) -> tuple[Optional[Fraction], Fraction]:
    """``(q(x) mod 2, b(x, y) mod 1)``; the first entry is None without q."""
    q = f.qvalue(x) if f.has_q else None
    return q, f.bvalue(x, y)


def negate(f: FiniteQuadraticForm) -> FiniteQuadraticForm:
    return FiniteQuadraticForm(
        f.orders,
        tuple(tuple(-x for x in row) for row in f.b),
        None if f.q is None else tuple(-x for x in f.q),
        f.q_from_lattice,
    )


# -- subgroups -------------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    elements: tuple[TorsionElement, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x):
        return x in self.elements

    @property
    def invariants(self) -> tuple[int, ...]:
        return subgroup_invariants(self.elements)

    def nonzero(self) -> tuple[TorsionElement, ...]:
        return tuple(x for x in self.elements if not x.is_zero)


def subgroup_invariants(elements: Sequence[TorsionElement]) -> tuple[int, ...]:
    """Invariant factors of the subgroup generated by ``elements``."""
    elements = list(elements)
    if not elements:
        return ()
    orders = elements[0].orders
    k = len(orders)
    if k == 0:
        return ()
    relations = [[d if i == j else 0 for j in range(k)] for i, d in enumerate(orders)]
    preimage = hnf(IntMat([list(x.coeffs) for x in elements] + relations, ncols=k))
    coords = express_in_basis(preimage, IntMat(relations, ncols=k))
    return tuple(d for d in snf(coords).elementary_divisors if d > 1)


def _closure(base: frozenset, x: TorsionElement) -> frozenset:
    out = set(base)
    mult = x
    while mult not in base:
        out.update(a + mult for a in base)
        mult = mult + x
    return frozenset(out)


def _sort_key(group: frozenset):
    return sorted(e.coeffs for e in group)


def isotropic_subgroups(f: FiniteQuadraticForm, order: int, bound: int = ENUMERATION_BOUND) -> list[Subgroup]:
    """Every subgroup of the given order on which q (or b, without q) vanishes."""
    if f.size > bound:
        raise CapacityError(f"group of order {f.size} exceeds the enumeration bound {bound}")
    if order < 1 or f.size % order:
        return []
    isotropic = [x for x in f.elements(bound) if not x.is_zero and f.is_isotropic(x)]
    trivial = frozenset([f.zero()])
    seen = {trivial}
    frontier = [trivial]
    found = [trivial] if order == 1 else []
    while frontier:
        nxt = []
        for sub in frontier:
            for x in isotropic:
                if x in sub:
                    continue
                bigger = _closure(sub, x)
                if bigger in seen or order % len(bigger):
                    continue
                seen.add(bigger)
                if not all(f.is_isotropic(y) for y in bigger):
                    continue
                if f.q is None and any(f.bvalue(a, c) for a in bigger for c in bigger):
                    continue
                if len(bigger) == order:
                    found.append(bigger)
                else:
                    nxt.append(bigger)
        frontier = nxt
    found.sort(key=_sort_key)
    return [Subgroup(tuple(sorted(g))) for g in found]


# -- isomorphisms ---------------------------------------------------------------


@dataclass(frozen=True)
class FormMap:
    """Homomorphism determined by images of the source's cyclic generators."""

    source: FiniteQuadraticForm
    target: FiniteQuadraticForm
    images: tuple[TorsionElement, ...]

    def __call__(self, x: TorsionElement) -> TorsionElement:
        out = self.target.zero()
        for c, img in zip(x.coeffs, self.images):
            if c:
                out = out + c * img
        return out


def form_isomorphism(
    f1: FiniteQuadraticForm, f2: FiniteQuadraticForm, bound: int = ENUMERATION_BOUND
) -> Optional[FormMap]:
    """An isomorphism of groups carrying q1 to q2 (b1 to b2), or None.

    The search runs over images of generators; a candidate is only accepted
    after checking the form on every element.
    """
    if f1.size > bound or f2.size > bound:
        raise CapacityError("form too large for exhaustive isomorphism search")
    if f1.size != f2.size or f1.has_q != f2.has_q:
        return None
    gens = f1.generators()
    targets = list(f2.elements(bound))
    cands = []
    for g, d in zip(gens, f1.orders):
        want_b = f1.bvalue(g, g)
        want_q = f1.qvalue(g) if f1.has_q else None
        opts = [
            y
            for y in targets
            if (d * y).is_zero
            and f2.bvalue(y, y) == want_b
            and (want_q is None or f2.qvalue(y) == want_q)
        ]
        if not opts:
            return None
        cands.append(opts)

    domain = list(f1.elements(bound))
    chosen: list[TorsionElement] = []

    def accept(images) -> Optional[FormMap]:
        fmap = FormMap(f1, f2, tuple(images))
        seen = set()
        for x in domain:
            y = fmap(x)
            if y in seen:
                return None
            seen.add(y)
            if f1.has_q and f1.qvalue(x) != f2.qvalue(y):
                return None
            if not f1.has_q and f1.bvalue(x, x) != f2.bvalue(y, y):
                return None
        return fmap

    def search(i):
        if i == len(gens):
            return accept(chosen)
        for y in cands[i]:
            if all(f2.bvalue(y, chosen[j]) == f1.bvalue(gens[i], gens[j]) for j in range(i)):
                chosen.append(y)
                res = search(i + 1)
                if res is not None:
                    return res
                chosen.pop()
        return None

    return search(0)


def is_isomorphic(f1: FiniteQuadraticForm, f2: FiniteQuadraticForm) -> bool:
    return form_isomorphism(f1, f2) is not None
