"""Polarization constraints and explicit maps between twisted algebraic lattices.

Two conventions in the formulas are not pinned down by the inputs alone, so both
are modeled and every function takes them explicitly:

* ``h_prime``: ``c_h * h - 4 e0 - 4 B`` with ``c_h = B.h`` (``"literal"``) or
  ``c_h = 2 B.h`` (``"doubled"``).
* ``k_s``: ``B.s`` (``"plain"``) or ``2 B.s`` (``"doubled"``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional, Sequence

from .errors import DimensionError, LatticeError
from .k3 import (
    E0,
    E4,
    H_MUKAI,
    MUKAI,
    MUKAI_RANK,
    S_MUKAI,
    ConcreteBField,
    MukaiVector,
    PICARD_FULL,
    twisted_algebraic_lattice,
    twisted_generators,
)
from .lattice import Embedding
from .linalg import IntMat, determinant, make, express_in_basis, inverse, saturated_kernel, snf, solve_integral

H_PRIME_READINGS = ("literal", "doubled")
K_S_READINGS = ("plain", "doubled")


def _scale(reading: str, options: Sequence[str]) -> int:
    if reading not in options:
        raise LatticeError(f"unknown reading {reading!r}; expected one of {options}")
    return 1 if reading == options[0] else 2


def h_prime(b: ConcreteBField, reading: str = "doubled") -> MukaiVector:
    coeff = _scale(reading, H_PRIME_READINGS) * b.params.bh
    return coeff * H_MUKAI - 4 * E0 - MukaiVector(0, tuple(4 * x for x in b.vector), 0)


def k4(b: ConcreteBField, reading: str = "doubled") -> Fraction:
    return Fraction(6 - h_prime(b, reading).square, 8)


def k_s(b: ConcreteBField, reading: str = "doubled") -> Fraction:
    return _scale(reading, K_S_READINGS) * b.params.bs


# -- h-orthogonal constraint solver ------------------------------------------------------


@dataclass(frozen=True)
class ConstraintSolutions:
    """Integral ``w`` in ``h^perp`` of the twisted algebraic lattice with fixed ``w^2``, ``w.e4``.

    If ``shift`` is set, the full solution set is ``{p + t*shift : p in solutions, t in Z}``
    without the zero vector; otherwise it is ``solutions`` itself, which is complete
    iff ``exhaustive``.  A non-exhaustive result lists the members whose free
    parameter lies in ``[-window, window]``.
    """

    solutions: tuple[MukaiVector, ...]
    shift: Optional[MukaiVector]
    exhaustive: bool
    lattice: Embedding


def h_orthogonal_part(b: ConcreteBField, picard: Sequence[str] = PICARD_FULL) -> Embedding:
    alg = twisted_algebraic_lattice(b, picard)
    col = alg.basis @ (MUKAI.gram @ H_MUKAI.coords)
    coeffs = saturated_kernel(IntMat([[x] for x in col]))
    return Embedding(MUKAI, coeffs @ alg.basis)


def _adapted_basis(m: Embedding) -> IntMat:
    """Basis of ``m`` whose first vector is ``e4``."""
    eps = express_in_basis(m.basis, IntMat([E4.coords])).row(0)
    if any(isinstance(x, Fraction) for x in eps):
        raise LatticeError("e4 is not in the lattice")
    dec = snf(IntMat([list(eps)]))
    if dec.d[0, 0] != 1:
        raise LatticeError("e4 is not primitive in the lattice")
    # eps @ v = u00 * e_1, so the rows of v^-1 form a unimodular basis starting with u00 * eps.
    change = inverse(dec.v)
    change = IntMat([[dec.u[0, 0] * x for x in change.row(0)]] + [list(r) for r in change.rows[1:]])
    return change @ m.basis


def solve_h_orthogonal(
    b: ConcreteBField,
    square: int,
    e4_pairing: int,
    picard: Sequence[str] = PICARD_FULL,
    window: int = 6,
) -> ConstraintSolutions:
    m = h_orthogonal_part(b, picard)
    basis = _adapted_basis(m)
    rest = [MukaiVector.from_coords(r) for r in basis.rows[1:]]
    c = [v.pair(E4) for v in rest]
    gram = [[x.pair(y) for y in rest] for x in rest]

    def q(a):
        return sum(a[i] * a[j] * gram[i][j] for i in range(len(a)) for j in range(len(a)))

    def build(a, t):
        out = t * E4
        for ai, v in zip(a, rest):
            out = out + ai * v
        return out

    def finish(a):
        if e4_pairing == 0:
            return build(a, 0) if q(a) == square else None
        t = Fraction(square - q(a), 2 * e4_pairing)
        return build(a, t.numerator) if t.denominator == 1 else None

    if len(rest) == 1:
        a1 = Fraction(e4_pairing, c[0]) if c[0] else None
        if c[0] == 0 or a1.denominator != 1:
            return ConstraintSolutions((), None, True, m)
        w = finish((a1.numerator,))
        sols = () if w is None else (w,)
        return ConstraintSolutions(sols, E4 if e4_pairing == 0 and sols else None, True, m)
    if len(rest) != 2:
        raise DimensionError("solver handles h-orthogonal lattices of rank 2 or 3 only")

    base = solve_integral(IntMat([c]), [e4_pairing])
    if base is None:
        return ConstraintSolutions((), None, True, m)
    d = saturated_kernel(IntMat([[x] for x in c])).row(0)
    qd = q(d)
    if e4_pairing == 0:
        # w = n*d + t*e4 and w^2 = n^2 q(d); q(d) != 0 on the definite quotient.
        if qd == 0:
            raise LatticeError("degenerate quotient; solution set is not finite modulo e4")
        if square == 0:
            return ConstraintSolutions((build((0, 0), 0),), E4, True, m)
        ratio = Fraction(square, qd)
        root = _exact_sqrt(ratio)
        if root is None:
            return ConstraintSolutions((), None, True, m)
        sols = tuple(build(tuple(n * x for x in d), 0) for n in (root, -root))
        return ConstraintSolutions(sols, E4, True, m)
    sols = []
    for n in sorted(range(-window, window + 1), key=lambda k: (abs(k), -k)):
        w = finish(tuple(x + n * y for x, y in zip(base, d)))
        if w is not None:
            sols.append(w)
    return ConstraintSolutions(tuple(sols), None, False, m)


def _exact_sqrt(x: Fraction) -> Optional[int]:
    if x < 0 or x.denominator != 1:
        return None
    r = isqrt(x.numerator)
    return r if r * r == x.numerator else None


# -- images of Fano Picard classes ---------------------------------------------------------


@dataclass(frozen=True)
class FanoImages:
    g: MukaiVector
    f1: MukaiVector
    f2: MukaiVector
    f3: MukaiVector


def fano_picard_images(b: ConcreteBField, h_reading: str = "doubled", ks_reading: str = "doubled") -> FanoImages:
    hp, kf, ks = h_prime(b, h_reading), k4(b, h_reading), k_s(b, ks_reading)
    return FanoImages(
        g=hp + kf * E4,
        f1=hp + (kf - 1) * E4,
        f2=-S_MUKAI + Fraction(1 - ks, 2) * E4,
        f3=S_MUKAI + Fraction(1 + ks, 2) * E4,
    )


# -- map between two twisted algebraic lattices --------------------------------------------


def corollary_images(b2: ConcreteBField, h_reading: str = "doubled", ks_reading: str = "doubled") -> tuple[MukaiVector, ...]:
    """Images of ``2e0+2B1, h, s, e4`` expressed through data of the target B-field ``b2``."""
    hp, kf, ks = h_prime(b2, h_reading), k4(b2, h_reading), k_s(b2, ks_reading)
    f1 = hp + (kf - 1) * E4
    lead2 = 2 * E0 + MukaiVector(0, tuple(2 * x for x in b2.vector), 0)
    img_lead = lead2 - Fraction(kf, 2) * (E4 - f1)
    img_s = Fraction(1 - ks, 2) * (S_MUKAI + Fraction(1 + ks, 2) * E4) - Fraction(1 + ks, 2) * f1
    img_e4 = hp + S_MUKAI + Fraction(2 * kf + ks - 1, 2) * E4
    return img_lead, H_MUKAI, img_s, img_e4


def moduli_vector(b2: ConcreteBField, h_reading: str = "doubled", ks_reading: str = "doubled") -> MukaiVector:
    """``-(image of e4)``: the Mukai vector ``4e0 + 4B2 - c_h h - s - ((2k4+k_s-1)/2) e4``."""
    return -corollary_images(b2, h_reading, ks_reading)[3]


def image_gram(images: Sequence[MukaiVector]) -> list[list]:
    return [[x.pair(y) for y in images] for x in images]


def map_matrix(b2: ConcreteBField, images: Sequence[MukaiVector]) -> Optional[IntMat]:
    """Columns are coordinates of ``images`` in the generators of the target lattice, or None if not integral."""
    gens = twisted_generators(b2)
    coeffs = express_in_basis(gens.basis, make([v.coords for v in images], ncols=MUKAI_RANK))
    if not coeffs.is_integral:
        return None
    return IntMat([list(r) for r in coeffs.rows]).T


def map_determinant(b2: ConcreteBField, images: Sequence[MukaiVector]) -> Optional[int]:
    m = map_matrix(b2, images)
    return None if m is None else determinant(m)
