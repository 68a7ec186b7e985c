"""Concrete K3 and Mukai lattice models, B-field lifts of 2-torsion Brauer
classes, twisted algebraic lattices and transcendental-lattice models.

Conventions (fixed throughout):

* K3 lattice basis: U1, U2, U3 (each ``e, f`` with ``e.f = 1``), then two
  copies of E8(-1) on simple roots ``r1..r8``.
* Mukai lattice basis: ``e0``, the 22 K3 vectors, ``e4``; pairing
  ``(r, c, m).(r', c', m') = c.c' - r m' - r' m``.
* ``h = U1.e + U1.f`` (h^2 = 2), ``s = E8a.r1`` (s^2 = -2), ``f = h - s``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import AdmissibilityError, CapacityError, LatticeError
from .lattice import (
    Embedding,
    Lattice,
    RationalFunctional,
    direct_sum,
    intersect_with_subspace,
    kernel_sublattice,
    orthogonal_complement,
)
from .linalg import IntMat, Matrix, make

MUKAI_CONVENTION = "(r,c,m).(r',c',m') = c.c' - r*m' - r'*m"

# Simple roots r1..r7 form a chain, r8 hangs off r5; diagonal -2.
E8_EDGES = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7))
E8_MINUS_GRAM = IntMat(
    [
        [-2 if i == j else int((i, j) in E8_EDGES or (j, i) in E8_EDGES) for j in range(8)]
        for i in range(8)
    ]
)
U_GRAM = IntMat([[0, 1], [1, 0]])

K3_LABELS = (
    ("U1.e", "U1.f", "U2.e", "U2.f", "U3.e", "U3.f")
    + tuple(f"E8a.r{i}" for i in range(1, 9))
    + tuple(f"E8b.r{i}" for i in range(1, 9))
)
MUKAI_LABELS = ("e0",) + K3_LABELS + ("e4",)
K3_RANK = 22
MUKAI_RANK = 24

U = Lattice(U_GRAM)
E8_MINUS = Lattice(E8_MINUS_GRAM)
K3 = direct_sum(U, U, U, E8_MINUS, E8_MINUS)

def _mukai_lattice() -> Lattice:
    n = MUKAI_RANK
    rows = [[0] * n for _ in range(n)]
    rows[0][n - 1] = rows[n - 1][0] = -1
    for i in range(K3_RANK):
        for j in range(K3_RANK):
            rows[i + 1][j + 1] = K3.gram[i, j]
    return Lattice(IntMat(rows))


MUKAI = _mukai_lattice()


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(int(k == i) for k in range(n))


def k3_vector(label: str) -> tuple[int, ...]:
    """Coordinates in the K3 lattice of a basis label or of h, s, f."""
    if label == "h":
        return tuple(a + b for a, b in zip(k3_vector("U1.e"), k3_vector("U1.f")))
    if label == "s":
        return k3_vector("E8a.r1")
    if label == "f":
        return tuple(a - b for a, b in zip(k3_vector("h"), k3_vector("s")))
    return _unit(K3_RANK, K3_LABELS.index(label))


H = k3_vector("h")
S = k3_vector("s")
F = k3_vector("f")


def k3_pair(x: Sequence, y: Sequence):
    return K3.pair(x, y)


PICARD = Embedding(K3, IntMat([H, S]))
FIBER = Embedding(K3, IntMat([F]))


def standard_lattice(name: str) -> Lattice:
    table = {"U": U, "E8minus": E8_MINUS, "K3": K3, "Mukai": MUKAI}
    try:
        return table[name]
    except KeyError:
        raise LatticeError(f"unknown standard lattice {name!r}; choose from {sorted(table)}") from None


def basis_labels(name: str) -> tuple[str, ...]:
    return {
        "U": ("e", "f"),
        "E8minus": tuple(f"r{i}" for i in range(1, 9)),
        "K3": K3_LABELS,
        "Mukai": MUKAI_LABELS,
    }[name]


# -- Mukai vectors ---------------------------------------------------------------


@dataclass(frozen=True)
class MukaiVector:
    """``r e0 + c + m e4`` with ``c`` in K3 coordinates; entries may be rational."""

    r: Fraction
    c: tuple
    m: Fraction

    def __post_init__(self):
        if len(self.c) != K3_RANK:
            raise LatticeError("K3 component must have 22 coordinates")
        norm = lambda x: (lambda y: y.numerator if y.denominator == 1 else y)(Fraction(x))
        object.__setattr__(self, "r", norm(self.r))
        object.__setattr__(self, "c", tuple(norm(x) for x in self.c))
        object.__setattr__(self, "m", norm(self.m))

    @classmethod
    def from_coords(cls, v: Sequence) -> "MukaiVector":
        v = tuple(v)
        if len(v) != MUKAI_RANK:
            raise LatticeError("Mukai coordinates must have length 24")
        return cls(v[0], v[1:-1], v[-1])

    @classmethod
    def k3(cls, c: Sequence) -> "MukaiVector":
        return cls(0, tuple(c), 0)

    @property
    def coords(self) -> tuple:
        return (self.r,) + self.c + (self.m,)

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for x in self.coords)

    def __add__(self, other: "MukaiVector") -> "MukaiVector":
        return MukaiVector(self.r + other.r, tuple(a + b for a, b in zip(self.c, other.c)), self.m + other.m)

    def __neg__(self) -> "MukaiVector":
        return MukaiVector(-self.r, tuple(-a for a in self.c), -self.m)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k) -> "MukaiVector":
        return MukaiVector(k * self.r, tuple(k * a for a in self.c), k * self.m)

    def pair(self, other: "MukaiVector"):
        return k3_pair(self.c, other.c) - self.r * other.m - other.r * self.m

    @property
    def square(self):
        return self.pair(self)


E0 = MukaiVector(1, (0,) * K3_RANK, 0)
E4 = MukaiVector(0, (0,) * K3_RANK, 1)
H_MUKAI = MukaiVector.k3(H)
S_MUKAI = MukaiVector.k3(S)


def mukai_vector(label: str) -> MukaiVector:
    if label == "e0":
        return E0
    if label == "e4":
        return E4
    return MukaiVector.k3(k3_vector(label))


# -- B-fields ----------------------------------------------------------------------


def _half_odd(x: Fraction) -> bool:
    y = 2 * Fraction(x)
    return y.denominator == 1 and y.numerator % 2 == 1


@dataclass(frozen=True)
class BFieldParams:
    """Values of B^2, B.h and B.s for a half-integral B-field."""

    bsq: Fraction
    bh: Fraction
    bs: Fraction

    def __post_init__(self):
        for name in ("bsq", "bh", "bs"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @property
    def is_admissible(self) -> bool:
        return _half_odd(self.bsq) and _half_odd(self.bh) and _half_odd(self.bs)

    def check(self) -> "BFieldParams":
        if not self.is_admissible:
            raise AdmissibilityError(f"2B^2, 2B.h, 2B.s must all be odd integers; got {self.as_tuple()}")
        return self

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.bsq, self.bh, self.bs


DEFAULT_PARAMS = BFieldParams(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))


@dataclass(frozen=True)
class ConcreteBField:
    """Half-integral vector of the K3 lattice (K3 coordinates)."""

    vector: tuple

    def __post_init__(self):
        v = tuple(Fraction(x) for x in self.vector)
        if len(v) != K3_RANK:
            raise LatticeError("B-field must have 22 coordinates")
        if any((2 * x).denominator != 1 for x in v):
            raise LatticeError("2B must be integral")
        object.__setattr__(self, "vector", v)

    @property
    def params(self) -> BFieldParams:
        return BFieldParams(k3_pair(self.vector, self.vector), k3_pair(self.vector, H), k3_pair(self.vector, S))

    def pair(self, c: Sequence) -> Fraction:
        return Fraction(k3_pair(self.vector, c))

    def __neg__(self) -> "ConcreteBField":
        return ConcreteBField(tuple(-x for x in self.vector))

    def shifted(self, u: Sequence[int], k: int, l: int) -> "ConcreteBField":
        """``B + u + (k h + l s)/2``: another lift of the same Brauer class."""
        return ConcreteBField(
            tuple(b + ui + Fraction(k * hi + l * si, 2) for b, ui, hi, si in zip(self.vector, u, H, S))
        )


SEARCH_NUMERATORS = 9
_FREE_LABELS = ("U1.e", "E8a.r3", "U2.e", "U3.e", "U3.f")


def _small_first(bound: int):
    yield 0
    for k in range(1, bound + 1):
        yield k
        yield -k


@lru_cache(maxsize=None)
def realize_bfield(params: BFieldParams, bound: int = SEARCH_NUMERATORS) -> ConcreteBField:
    """First half-integral B (in a fixed search order) realizing ``params``.

    Support: U1, U2, U3 and the roots r2, r3 of the first E8 copy.  The free
    coordinates ``U1.e, E8a.r3, U2.e, U3.e, U3.f`` run over numerators in
    ``[-bound, bound]`` (small absolute values first); ``U1.f``, ``E8a.r2``
    and ``U2.f`` are then forced by B.h, B.s and B^2.
    """
    params.check()
    idx = {lab: K3_LABELS.index(lab) for lab in _FREE_LABELS + ("U1.f", "E8a.r2", "U2.f")}
    half = Fraction(1, 2)
    for nums in itertools.product(*(list(_small_first(bound)) for _ in _FREE_LABELS)):
        x, c3, p, p3, q3 = (n * half for n in nums)
        if p == 0:
            continue
        y = params.bh - x
        c2 = params.bs  # r2 is the only support root adjacent to s = r1
        # B^2 = 2xy + 2pq + 2 p3 q3 + (c2 r2 + c3 r3)^2
        e8 = -2 * c2 * c2 - 2 * c3 * c3 + 2 * c2 * c3
        q = (params.bsq - 2 * x * y - 2 * p3 * q3 - e8) / (2 * p)
        if (2 * q).denominator != 1 or (2 * y).denominator != 1 or (2 * c2).denominator != 1:
            continue
        vec = [Fraction(0)] * K3_RANK
        for lab, val in zip(_FREE_LABELS, (x, c3, p, p3, q3)):
            vec[idx[lab]] = val
        vec[idx["U1.f"]] = y
        vec[idx["E8a.r2"]] = c2
        vec[idx["U2.f"]] = q
        b = ConcreteBField(tuple(vec))
        if b.params == params:
            return b
    raise CapacityError(f"no B-field found for {params.as_tuple()} within numerator bound {bound}")


def exp_b(b: ConcreteBField, v: MukaiVector) -> MukaiVector:
    """``(r, c, m) -> (r, c + r B, m + c.B + r B^2 / 2)``."""
    bsq = b.pair(b.vector)
    return MukaiVector(
        v.r,
        tuple(ci + v.r * bi for ci, bi in zip(v.c, b.vector)),
        v.m + b.pair(v.c) + v.r * bsq / 2,
    )


# -- twisted algebraic lattices -----------------------------------------------------------

PICARD_FULL = ("h", "s")
PICARD_H = ("h",)


def twisted_generators(b: ConcreteBField, picard: Sequence[str] = PICARD_FULL) -> Embedding:
    """The named generators ``2e0 + 2B, <picard>, e4`` inside the Mukai lattice."""
    lead = MukaiVector(2, tuple(2 * x for x in b.vector), 0)
    rows = [lead.coords] + [mukai_vector(p).coords for p in picard] + [E4.coords]
    return Embedding(MUKAI, IntMat(rows))


@lru_cache(maxsize=None)
def twisted_algebraic_lattice(b: ConcreteBField, picard: tuple[str, ...] = PICARD_FULL) -> Embedding:
    """Mukai lattice intersected with ``exp(B)`` of span(e0, picard, e4).  HNF basis."""
    if not (_half_odd(b.params.bsq) and _half_odd(b.params.bh)):
        raise AdmissibilityError("2B^2 and 2B.h must be odd integers")
    span = [exp_b(b, E0).coords] + [exp_b(b, mukai_vector(p)).coords for p in picard] + [exp_b(b, E4).coords]
    return intersect_with_subspace(MUKAI, make(span))


def twisted_gram(params: BFieldParams) -> IntMat:
    """Gram matrix of ``(2e0+2B, h, s, e4)`` as a function of the B-field parameters."""
    u, p, t = 4 * params.bsq, 2 * params.bh, 2 * params.bs
    return IntMat([[u, p, t, -2], [p, 2, 0, 0], [t, 0, -2, 0], [-2, 0, 0, 0]])


@dataclass(frozen=True)
class TranscendentalModels:
    """``t_s``: complement of Pic in K3; ``alpha``: B-pairing mod 1 on ``t_s``;
    ``t_x``: kernel of ``alpha`` inside ``t_s`` (coordinates of ``t_s``)."""

    t_s: Embedding
    t_x: Embedding
    alpha: RationalFunctional
    index: int

    @property
    def t_x_in_k3(self) -> Embedding:
        return self.t_x.compose(self.t_s)


@lru_cache(maxsize=None)
def transcendental_lattice() -> Embedding:
    return orthogonal_complement(PICARD)


@lru_cache(maxsize=None)
def transcendental_models(b: ConcreteBField) -> TranscendentalModels:
    b.params.check()
    t_s = transcendental_lattice()
    alpha = RationalFunctional(tuple(b.pair(row) for row in t_s.basis.rows))
    t_x, index = kernel_sublattice(t_s.sublattice, alpha)
    return TranscendentalModels(t_s, t_x, alpha, index)


def brauer_restrict(phi: RationalFunctional, e: Embedding) -> RationalFunctional:
    """Pull a functional on ``e.ambient`` back along the embedding."""
    if len(phi.values) != e.ambient.rank:
        raise LatticeError("functional and embedding have different domains")
    return phi.restrict(e.basis)


@lru_cache(maxsize=None)
def mukai_complement(b: ConcreteBField) -> Embedding:
    """Orthogonal complement of the twisted algebraic lattice in the Mukai lattice."""
    return orthogonal_complement(twisted_algebraic_lattice(b))


def mukai_to_matrix(vectors: Sequence[MukaiVector]) -> Matrix:
    return make([v.coords for v in vectors], ncols=MUKAI_RANK)
