"""Exact integer and rational matrix algebra.

Everything here works on Python ints and ``fractions.Fraction``; there is no
floating point and no tolerance anywhere.  Matrices are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import DimensionError

Number = int | Fraction


def _as_exact(x) -> Number:
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        return _as_exact(Fraction(x))
    raise TypeError(f"inexact or unsupported entry {x!r}")


class Matrix:
    """Dense immutable matrix with exact entries.

    Use the :class:`IntMat` and :class:`RatMat` constructors; arithmetic
    returns an ``IntMat`` whenever every entry of the result is integral.
    """

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Sequence], ncols: Optional[int] = None):
        data = tuple(tuple(self._coerce(x) for x in row) for row in rows)
        if ncols is None:
            if not data:
                raise DimensionError("column count required for a matrix with no rows")
            ncols = len(data[0])
        for row in data:
            if len(row) != ncols:
                raise DimensionError("ragged rows")
        object.__setattr__(self, "_rows", data)
        object.__setattr__(self, "nrows", len(data))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("matrices are immutable")

    @staticmethod
    def _coerce(x):
        return _as_exact(x)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "IntMat":
        return IntMat([[int(i == j) for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMat":
        return IntMat([[0] * n for _ in range(m)], ncols=n)

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return make([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], ncols=n)

    # -- access ---------------------------------------------------------------

    @property
    def rows(self) -> tuple:
        return self._rows

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def tolist(self) -> list[list]:
        return [list(r) for r in self._rows]

    def __iter__(self):
        return iter(self._rows)

    def __len__(self):
        return self.nrows

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for r in self._rows for x in r)

    def is_symmetric(self) -> bool:
        if not self.is_square:
            return False
        n = self.nrows
        return all(self._rows[i][j] == self._rows[j][i] for i in range(n) for j in range(i + 1, n))

    @property
    def T(self) -> "Matrix":
        return make([self.col(j) for j in range(self.ncols)], ncols=self.nrows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return make([[self._rows[i][j] for j in cols] for i in rows], ncols=len(cols))

    def stack(self, other: "Matrix") -> "Matrix":
        if other.ncols != self.ncols:
            raise DimensionError("column counts differ")
        return make(self._rows + other._rows, ncols=self.ncols)

    def augment(self, other: "Matrix") -> "Matrix":
        if other.nrows != self.nrows:
            raise DimensionError("row counts differ")
        return make([a + b for a, b in zip(self._rows, other._rows)], ncols=self.ncols + other.ncols)

    # -- arithmetic -----------------------------------------------------------

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            cols = list(zip(*other._rows)) if other.nrows else [()] * other.ncols
            return make(
                [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows],
                ncols=other.ncols,
            )
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise DimensionError("vector length mismatch")
        return tuple(_as_exact(sum(a * b for a, b in zip(r, vec))) for r in self._rows)

    def __rmatmul__(self, vec):
        vec = tuple(vec)
        if len(vec) != self.nrows:
            raise DimensionError("vector length mismatch")
        return tuple(_as_exact(sum(vec[i] * self._rows[i][j] for i in range(self.nrows))) for j in range(self.ncols))

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        return make([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], ncols=self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return make([[-a for a in r] for r in self._rows], ncols=self.ncols)

    def scale(self, k) -> "Matrix":
        k = _as_exact(k)
        return make([[k * a for a in r] for r in self._rows], ncols=self.ncols)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, self._rows))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self._rows)
        return f"{type(self).__name__}([{body}])"


class IntMat(Matrix):
    """Matrix of arbitrary-precision integers."""

    __slots__ = ()

    @staticmethod
    def _coerce(x):
        x = _as_exact(x)
        if not isinstance(x, int):
            raise ValueError(f"non-integral entry {x}")
        return x


class RatMat(Matrix):
    """Matrix of rationals in lowest terms (integral entries kept as ``int``)."""

    __slots__ = ()


def make(rows, ncols: Optional[int] = None) -> Matrix:
    """Build an IntMat if every entry is integral, else a RatMat."""
    data = [[_as_exact(x) for x in r] for r in rows]
    if all(isinstance(x, int) for r in data for x in r):
        return IntMat(data, ncols=ncols)
    return RatMat(data, ncols=ncols)


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        if v:
            out = out * abs(v) // gcd(out, v)
    return out


def common_denominator(m: Matrix) -> int:
    return lcm(*(Fraction(x).denominator for r in m.rows for x in r))


# -- Smith normal form ----------------------------------------------------------


@dataclass(frozen=True)
class SnfDecomposition:
    """``u @ a @ v == d`` with ``u``, ``v`` unimodular and ``d`` diagonal."""

    u: IntMat
    d: IntMat
    v: IntMat

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.d[i, i] for i in range(min(self.d.shape)))

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x)

    @property
    def elementary_divisors(self) -> tuple[int, ...]:
        return tuple(x for x in self.diagonal if x)


def snf(a: Matrix) -> SnfDecomposition:
    """Smith normal form with transforms.

    Pivots are the nonzero entry of least absolute value in the remaining
    block, ties broken by (row, col), so the output is reproducible.
    """
    if not a.is_integral:
        raise ValueError("snf needs an integer matrix")
    m, n = a.shape
    d = [list(r) for r in a.rows]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        d[i], d[k] = d[k], d[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for r in d:
            r[j], r[k] = r[k], r[j]
        for r in v:
            r[j], r[k] = r[k], r[j]

    def add_row(src, dst, k):
        # row dst += k * row src
        if k:
            rs, rd = d[src], d[dst]
            for c in range(n):
                rd[c] += k * rs[c]
            us, ud = u[src], u[dst]
            for c in range(m):
                ud[c] += k * us[c]

    def add_col(src, dst, k):
        if k:
            for r in d:
                r[dst] += k * r[src]
            for r in v:
                r[dst] += k * r[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = d[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, pi, pj = best
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = d[t][t]
            clean = True
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // p))
                    clean = clean and d[i][t] == 0
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // p))
                    clean = clean and d[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        if d[t][t] == 0:
            break
    return SnfDecomposition(u=IntMat(u, ncols=m), d=IntMat(d, ncols=n), v=IntMat(v, ncols=n))


def elementary_divisors(a: Matrix) -> tuple[int, ...]:
    return snf(a).elementary_divisors


# -- determinants and rational elimination ---------------------------------------


def determinant(a: Matrix) -> Number:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not a.is_square:
        raise DimensionError("determinant of a non-square matrix")
    n = a.nrows
    if n == 0:
        return 1
    den = common_denominator(a)
    m = [[int(x * den) for x in r] for r in a.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return _as_exact(Fraction(sign * m[n - 1][n - 1], den**n))


def rref(a: Matrix) -> tuple[RatMat, tuple[int, ...]]:
    """Reduced row echelon form over Q and the pivot columns."""
    rows = [[Fraction(x) for x in r] for r in a.rows]
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return RatMat(rows, ncols=n), tuple(pivots)


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def inverse(a: Matrix) -> Matrix:
    if not a.is_square:
        raise DimensionError("inverse of a non-square matrix")
    n = a.nrows
    red, piv = rref(a.augment(Matrix.identity(n)))
    if piv[:n] != tuple(range(n)):
        raise ZeroDivisionError("singular matrix")
    return make([r[n:] for r in red.rows], ncols=n)


# -- integer row modules -----------------------------------------------------------


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return x0, y0, a


def hnf(a: Matrix) -> IntMat:
    """Row-style Hermite normal form: a canonical basis of the row module.

    Zero rows are dropped; pivots are positive and entries above a pivot are
    reduced into [0, pivot).
    """
    if not a.is_integral:
        raise ValueError("hnf needs an integer matrix")
    rows = [list(r) for r in a.rows]
    n = a.ncols
    out: list[list[int]] = []
    pivcols = []
    for c in range(n):
        live = [r for r in rows if r[c]]
        if not live:
            continue
        rest = [r for r in rows if not r[c]]
        acc = live[0]
        for r in live[1:]:
            x, y, g = _xgcd(acc[c], r[c])
            p, q = acc[c] // g, r[c] // g
            new_acc = [x * s + y * t for s, t in zip(acc, r)]
            rest.append([p * t - q * s for s, t in zip(acc, r)])
            acc = new_acc
        if acc[c] < 0:
            acc = [-x for x in acc]
        out.append(acc)
        pivcols.append(c)
        rows = rest
    # reduce above pivots
    for i in range(len(out)):
        c = pivcols[i]
        p = out[i][c]
        for k in range(i):
            f = out[k][c] // p
            if f:
                out[k] = [x - f * y for x, y in zip(out[k], out[i])]
    return IntMat(out, ncols=n)


def saturated_kernel(a: Matrix) -> IntMat:
    """Basis (as rows) of the left kernel ``{x integral : x @ a == 0}``.

    The basis is saturated: it spans the full integral points of its rational
    span.  Returned in Hermite normal form.
    """
    if not a.is_integral:
        a = a.scale(common_denominator(a))
    dec = snf(a)
    r = dec.rank
    basis = IntMat(dec.u.rows[r:], ncols=a.nrows)
    return hnf(basis)


def saturation(a: Matrix) -> IntMat:
    """Integral points of the rational row span of ``a``, in HNF."""
    if a.nrows == 0:
        return IntMat([], ncols=a.ncols)
    if not a.is_integral:
        a = a.scale(common_denominator(a))
    perp = saturated_kernel(a.T)  # rows orthogonal (dot product) to every row of a
    if perp.nrows == 0:
        return Matrix.identity(a.ncols)
    return saturated_kernel(perp.T)


def solve_integral(a: Matrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Some integral ``x`` with ``a @ x == b``, or ``None`` when there is none."""
    b = tuple(b)
    if len(b) != a.nrows:
        raise DimensionError("right-hand side length does not match row count")
    dec = snf(a)
    ub = dec.u @ b
    y = []
    for i in range(a.ncols):
        di = dec.d[i, i] if i < a.nrows else 0
        rhs = ub[i] if i < a.nrows else 0
        if di:
            if rhs % di:
                return None
            y.append(rhs // di)
        else:
            y.append(0)
    if any(ub[i] for i in range(a.nrows) if i >= a.ncols or dec.d[i, i] == 0):
        return None
    x = dec.v @ y
    return tuple(int(t) for t in x)


def row_module_contains(basis: Matrix, vec: Sequence) -> bool:
    """Whether ``vec`` is an integral combination of the rows of ``basis``."""
    vec = tuple(_as_exact(x) for x in vec)
    if not all(isinstance(x, int) for x in vec):
        return False
    if basis.nrows == 0:
        return not any(vec)
    return solve_integral(basis.T, vec) is not None


def express_in_basis(basis: Matrix, vecs: Matrix) -> Matrix:
    """Coefficients ``c`` with ``c @ basis == vecs`` (rational, exact).

    ``basis`` must have linearly independent rows spanning every row of ``vecs``.
    """
    k = basis.nrows
    sol = []
    red, piv = rref(basis.T.augment(vecs.T))
    if any(p >= k for p in piv):
        raise ValueError("vectors are not in the span of the basis")
    if len(piv) < k:
        raise ValueError("basis rows are linearly dependent")
    for j in range(vecs.nrows):
        sol.append([red[i, k + j] for i in range(k)])
    return make(sol, ncols=k)
