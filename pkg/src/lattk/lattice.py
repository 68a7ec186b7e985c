"""Integral lattices given by Gram matrices, and sublattices embedded in them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import DegenerateLatticeError, DimensionError, LatticeError
from .forms import FiniteQuadraticForm, Subgroup, TorsionElement, isotropic_subgroups, mod1
from .linalg import (
    IntMat,
    Matrix,
    determinant,
    express_in_basis,
    hnf,
    inverse,
    lcm,
    make,
    rank,
    row_module_contains,
    saturated_kernel,
    saturation,
    snf,
)


def _intmat(m) -> IntMat:
    if isinstance(m, IntMat):
        return m
    if isinstance(m, Matrix):
        return IntMat(m.rows, ncols=m.ncols)
    rows = [list(r) for r in m]
    return IntMat(rows, ncols=len(rows[0]) if rows else 0)


@dataclass(frozen=True)
class Lattice:
    """Free Z-module with an integral symmetric bilinear form.

    Degenerate Gram matrices are allowed; operations that need the dual
    lattice raise :class:`DegenerateLatticeError` for them.
    """

    gram: IntMat

    def __post_init__(self):
        gram = _intmat(self.gram)
        if not gram.is_square:
            raise DimensionError("Gram matrix must be square")
        if not gram.is_symmetric():
            raise LatticeError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", gram)

    @classmethod
    def zero(cls) -> "Lattice":
        return cls(IntMat([], ncols=0))

    @property
    def rank(self) -> int:
        return self.gram.nrows

    @cached_property
    def determinant(self) -> int:
        return determinant(self.gram)

    @property
    def is_nondegenerate(self) -> bool:
        return self.determinant != 0

    @property
    def is_even(self) -> bool:
        return all(self.gram[i, i] % 2 == 0 for i in range(self.rank))

    @property
    def is_unimodular(self) -> bool:
        return abs(self.determinant) == 1

    def pair(self, x: Sequence, y: Sequence):
        return sum(a * b for a, b in zip(self.gram @ tuple(y), x))

    def norm(self, x: Sequence):
        return self.pair(x, x)

    @cached_property
    def signature(self) -> tuple[int, int, int]:
        return signature(self)

    @cached_property
    def discriminant(self) -> "Discriminant":
        return Discriminant.of(self)

    def __repr__(self):
        return f"Lattice(rank={self.rank}, gram={self.gram.tolist()})"


def direct_sum(*lattices: Lattice) -> Lattice:
    n = sum(l.rank for l in lattices)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for l in lattices:
        for i in range(l.rank):
            for j in range(l.rank):
                rows[off + i][off + j] = l.gram[i, j]
        off += l.rank
    return Lattice(IntMat(rows, ncols=n))


def signature(l: Lattice) -> tuple[int, int, int]:
    """(positive, negative, zero) counts from a congruence diagonalization over Q."""
    a = [[Fraction(x) for x in r] for r in l.gram.rows]
    n = l.rank
    pos = neg = 0
    k = 0
    while k < n:
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                a[k], a[j] = a[j], a[k]
                for r in a:
                    r[k], r[j] = r[j], r[k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    k += 1
                    continue
                # e_k -> e_k + e_j makes the pivot 2 a[k][j] != 0
                a[k] = [x + y for x, y in zip(a[k], a[j])]
                for r in a:
                    r[k] += r[j]
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for c in range(n):
                    a[i][c] -= f * a[k][c]
                for r in range(n):
                    a[r][i] -= f * a[r][k]
        k += 1
    return pos, neg, n - pos - neg


# -- discriminant forms ---------------------------------------------------------------


@dataclass(frozen=True)
class Discriminant:
    """The discriminant form of a lattice together with the dual vectors
    (in lattice coordinates) that lift its cyclic generators."""

    lattice: Lattice
    form: FiniteQuadraticForm
    lifts: Matrix
    _u_rows: tuple

    @classmethod
    def of(cls, l: Lattice) -> "Discriminant":
        if not l.is_nondegenerate:
            raise DegenerateLatticeError("discriminant form of a degenerate lattice")
        g = l.gram
        dec = snf(g)
        idx = [i for i, d in enumerate(dec.diagonal) if d > 1]
        orders = tuple(dec.diagonal[i] for i in idx)
        lifts = make([[Fraction(dec.v[r, i], dec.d[i, i]) for r in range(l.rank)] for i in idx], ncols=l.rank)
        gl = lifts @ g @ lifts.T if idx else None
        b = tuple(tuple(gl[i, j] for j in range(len(idx))) for i in range(len(idx)))
        q = tuple(gl[i, i] for i in range(len(idx))) if l.is_even else None
        form = FiniteQuadraticForm(orders, b, q, q_from_lattice=l.is_even)
        return cls(l, form, lifts, tuple(dec.u.row(i) for i in idx))

    def class_of(self, v: Sequence) -> TorsionElement:
        """Class in the discriminant group of a dual vector given in lattice coordinates."""
        z = self.lattice.gram @ tuple(v)
        if not all(isinstance(x, int) for x in z):
            raise LatticeError("vector is not in the dual lattice")
        coeffs = [sum(a * b for a, b in zip(u, z)) for u in self._u_rows]
        return self.form.element(*coeffs)

    def lift(self, x: TorsionElement) -> tuple:
        """A dual vector representing ``x``."""
        out = [Fraction(0)] * self.lattice.rank
        for c, row in zip(x.coeffs, self.lifts.rows):
            if c:
                out = [o + c * r for o, r in zip(out, row)]
        return tuple(out)


def discriminant_group(l: Lattice) -> FiniteQuadraticForm:
    return l.discriminant.form


# -- embeddings ------------------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    """Sublattice of ``ambient`` spanned by the rows of ``basis`` (ambient coordinates)."""

    ambient: Lattice
    basis: IntMat

    def __post_init__(self):
        if isinstance(self.basis, Matrix) and self.basis.nrows == 0:
            basis = IntMat([], ncols=self.basis.ncols)
        else:
            basis = _intmat(self.basis)
        if basis.ncols != self.ambient.rank:
            raise DimensionError("basis vectors must have ambient rank coordinates")
        if basis.nrows and rank(basis) != basis.nrows:
            raise LatticeError("basis rows are linearly dependent")
        object.__setattr__(self, "basis", basis)

    @property
    def rank(self) -> int:
        return self.basis.nrows

    @cached_property
    def sublattice(self) -> Lattice:
        if self.rank == 0:
            return Lattice.zero()
        return Lattice(self.basis @ self.ambient.gram @ self.basis.T)

    @cached_property
    def hnf(self) -> IntMat:
        return hnf(self.basis) if self.rank else self.basis

    def same_span(self, other: "Embedding") -> bool:
        return self.ambient == other.ambient and self.hnf == other.hnf

    def saturation(self) -> "Embedding":
        return Embedding(self.ambient, saturation(self.basis))

    @property
    def is_primitive(self) -> bool:
        return self.same_span(self.saturation())

    @property
    def index_in_saturation(self) -> int:
        if self.rank == 0:
            return 1
        sat = self.saturation().basis
        return abs(determinant(express_in_basis(sat, self.basis)))

    def contains(self, vec: Sequence) -> bool:
        return row_module_contains(self.basis, vec)

    def compose(self, outer: "Embedding") -> "Embedding":
        """This embedding followed by ``outer`` (whose sublattice is our ambient)."""
        if outer.sublattice != self.ambient:
            raise LatticeError("embeddings are not composable")
        return Embedding(outer.ambient, self.basis @ outer.basis if self.rank else IntMat([], ncols=outer.ambient.rank))


def full_embedding(l: Lattice) -> Embedding:
    return Embedding(l, IntMat.identity(l.rank))


def orthogonal_complement(e: Embedding) -> Embedding:
    """Saturated sublattice of vectors orthogonal to every basis vector of ``e``."""
    amb = e.ambient
    if not amb.is_nondegenerate:
        raise DegenerateLatticeError("orthogonal complement in a degenerate ambient lattice")
    if e.rank == 0:
        return full_embedding(amb)
    return Embedding(amb, saturated_kernel(amb.gram @ e.basis.T))


def intersect_with_subspace(ambient: Lattice, spanning: Matrix) -> Embedding:
    """Integral points of the rational row span of ``spanning``."""
    if spanning.ncols != ambient.rank:
        raise DimensionError("spanning vectors must have ambient rank coordinates")
    if spanning.nrows and rank(spanning) != spanning.nrows:
        raise LatticeError("spanning rows are linearly dependent")
    return Embedding(ambient, saturation(spanning))


def sublattice_intersection(e1: Embedding, e2: Embedding) -> Embedding:
    """Intersection of the two integer row spans (no saturation)."""
    if e1.ambient != e2.ambient:
        raise LatticeError("embeddings live in different ambient lattices")
    n = e1.ambient.rank
    if e1.rank == 0 or e2.rank == 0:
        return Embedding(e1.ambient, IntMat([], ncols=n))
    stacked = e1.basis.stack(-e2.basis)
    ker = saturated_kernel(stacked)
    if ker.nrows == 0:
        return Embedding(e1.ambient, IntMat([], ncols=n))
    coeffs = ker.submatrix(range(ker.nrows), range(e1.rank))
    return Embedding(e1.ambient, hnf(coeffs @ e1.basis))


def rescale(l: Lattice, factor) -> Lattice:
    factor = Fraction(factor)
    if factor == 0:
        raise LatticeError("rescaling factor must be nonzero")
    g = l.gram.scale(factor)
    if not g.is_integral:
        raise LatticeError(f"rescaling by {factor} gives a non-integral Gram matrix")
    return Lattice(g)


def is_isometry(m: Matrix, source: Lattice, target: Lattice) -> bool:
    """Whether the columns of ``m`` (images of the source basis in target
    coordinates) reproduce the source Gram matrix."""
    if m.shape != (target.rank, source.rank):
        raise DimensionError(f"map of shape {m.shape} between ranks {source.rank} -> {target.rank}")
    return m.T @ target.gram @ m == source.gram


# -- functionals and kernels ------------------------------------------------------------


@dataclass(frozen=True)
class RationalFunctional:
    """Homomorphism to Q/Z given by its values on a basis (stored in [0, 1))."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(mod1(v) for v in self.values))

    @property
    def order(self) -> int:
        return lcm(*(v.denominator for v in self.values)) if self.values else 1

    @property
    def is_zero(self) -> bool:
        return not any(self.values)

    def __call__(self, x: Sequence) -> Fraction:
        return mod1(sum(a * v for a, v in zip(x, self.values)))

    def __add__(self, other: "RationalFunctional") -> "RationalFunctional":
        if len(self.values) != len(other.values):
            raise DimensionError("functionals on different lattices")
        return RationalFunctional(tuple(a + b for a, b in zip(self.values, other.values)))

    def restrict(self, basis: Matrix) -> "RationalFunctional":
        if basis.ncols != len(self.values):
            raise DimensionError("basis does not match the functional's domain")
        return RationalFunctional(tuple(self(r) for r in basis.rows))


def kernel_sublattice(l: Lattice, phi: RationalFunctional) -> tuple[Embedding, int]:
    """The sublattice ``{x : phi(x) = 0 mod 1}`` and its index."""
    if len(phi.values) != l.rank:
        raise DimensionError("functional does not match lattice rank")
    n = phi.order
    if n == 1:
        return full_embedding(l), 1
    col = IntMat([[int(v * n)] for v in phi.values] + [[n]], ncols=1)
    ker = saturated_kernel(col)
    proj = hnf(ker.submatrix(range(ker.nrows), range(l.rank)))
    emb = Embedding(l, proj)
    return emb, abs(determinant(proj))


def cyclic_functional(e: Embedding) -> RationalFunctional:
    """A functional on the ambient lattice whose kernel is ``e``.

    ``e`` must have full rank with cyclic quotient.
    """
    if e.rank != e.ambient.rank:
        raise LatticeError("sublattice must have full rank")
    dec = snf(e.basis)
    divs = dec.diagonal
    if any(d > 1 for d in divs[:-1]):
        raise LatticeError("quotient is not cyclic")
    n = divs[-1]
    # x lies in the row span iff (x @ v)[-1] = 0 mod n
    return RationalFunctional(tuple(Fraction(dec.v[i, e.rank - 1], n) for i in range(e.rank)))


# -- overlattices ----------------------------------------------------------------------


@dataclass(frozen=True)
class Overlattice:
    """``embedding`` places the original lattice inside the overlattice;
    ``coordinates`` gives the overlattice basis in original rational coordinates."""

    embedding: Embedding
    coordinates: Matrix
    quotient: tuple[int, ...]
    subgroup: Subgroup

    @property
    def lattice(self) -> Lattice:
        return self.embedding.ambient

    @property
    def index(self) -> int:
        out = 1
        for d in self.quotient:
            out *= d
        return out


def overlattice_from_subgroup(l: Lattice, sub: Subgroup) -> Overlattice:
    disc = l.discriminant
    n = l.rank
    scale = max(disc.form.orders, default=1)
    rows = [[scale * int(i == j) for j in range(n)] for i in range(n)]
    for x in sub.elements:
        rows.append([int(scale * c) for c in disc.lift(x)])
    coords = hnf(IntMat(rows, ncols=n)).scale(Fraction(1, scale))
    gram = coords @ l.gram @ coords.T
    if not gram.is_integral:
        raise LatticeError("subgroup is not isotropic: overlattice Gram is not integral")
    inv = inverse(coords)
    emb = Embedding(Lattice(gram), _intmat(inv))
    quotient = tuple(d for d in snf(emb.basis).elementary_divisors if d > 1)
    return Overlattice(emb, coords, quotient, sub)


def overlattices_of_index(l: Lattice, n: int) -> list[Overlattice]:
    """Even overlattices containing ``l`` with index ``n``, one per isotropic subgroup."""
    if not l.is_even:
        raise LatticeError("overlattice enumeration needs an even lattice")
    if not l.is_nondegenerate:
        raise DegenerateLatticeError("overlattices of a degenerate lattice")
    size = abs(l.determinant)
    if n < 1 or size % (n * n):
        return []
    form = l.discriminant.form
    out = [overlattice_from_subgroup(l, h) for h in isotropic_subgroups(form, n)]
    out.sort(key=lambda o: o.coordinates.rows)
    return out
