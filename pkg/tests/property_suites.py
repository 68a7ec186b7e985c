"""Counted, seeded property suites.  Each returns a SuiteOutcome; results are cached
so the acceptance script and the property tests share one evaluation per session."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from lattk import k3
from lattk.forms import form_isomorphism, negate
from lattk.k3 import BFieldParams, MukaiVector, exp_b, realize_bfield, transcendental_models
from lattk.lattice import Embedding, Lattice, RationalFunctional, orthogonal_complement, overlattices_of_index, rescale
from lattk.linalg import IntMat, determinant, saturation, snf
from oracles import sympy_invariants


@dataclass
class SuiteOutcome:
    name: str
    total: int
    passed: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.total > 0 and self.passed == self.total

    def record(self, ok: bool, detail=None):
        if ok:
            self.passed += 1
        elif len(self.failures) < 5:
            self.failures.append(detail)

    def line(self) -> str:
        return f"{self.name}: {self.passed}/{self.total}"


def _random_params(rng: random.Random, bound: int = 9) -> BFieldParams:
    odd = [n for n in range(-bound, bound + 1) if n % 2]
    return BFieldParams(*(Fraction(rng.choice(odd), 2) for _ in range(3)))


@lru_cache(maxsize=None)
def snf_contract(count: int = 1000) -> SuiteOutcome:
    rng = random.Random(1000)
    out = SuiteOutcome("SNF contract on random matrices up to 8x8", count)
    for _ in range(count):
        r, c = rng.randint(1, 8), rng.randint(1, 8)
        rows = [[rng.randint(-100, 100) for _ in range(c)] for _ in range(r)]
        a = IntMat(rows)
        dec = snf(a)
        diag = [dec.d[i, i] for i in range(min(r, c))]
        off = all(dec.d[i, j] == 0 for i in range(r) for j in range(c) if i != j)
        nz = [x for x in diag if x]
        chain = all(x >= 0 for x in diag) and all(b % a_ == 0 for a_, b in zip(nz, nz[1:])) and diag == nz + [0] * (len(diag) - len(nz))
        ok = (
            dec.u @ a @ dec.v == dec.d
            and abs(determinant(dec.u)) == 1
            and abs(determinant(dec.v)) == 1
            and off
            and chain
            and nz == sympy_invariants(rows)
        )
        out.record(ok, rows)
    return out


def _random_symmetric(rng, n, bound):
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            g[i][j] = g[j][i] = rng.randint(-bound, bound)
    return g


@lru_cache(maxsize=None)
def discriminant_order(count: int = 200) -> SuiteOutcome:
    rng = random.Random(200)
    out = SuiteOutcome("|A_L| = |det| on random nondegenerate lattices of rank <= 6", count)
    done = 0
    while done < count:
        n = rng.randint(1, 6)
        g = _random_symmetric(rng, n, 6)
        if rng.random() < 0.5:
            for i in range(n):
                g[i][i] = 2 * (g[i][i] // 2)
        l = Lattice(g)
        if not l.is_nondegenerate:
            continue
        done += 1
        f = l.discriminant.form
        ok = f.size == abs(l.determinant) and list(f.orders) == [d for d in sympy_invariants(g) if d > 1]
        out.record(ok, g)
    return out


@lru_cache(maxsize=None)
def complement_duality(count: int = 100) -> SuiteOutcome:
    rng = random.Random(100)
    out = SuiteOutcome("q of the complement = -q on primitive sublattices of U^3 + E8(-1)^2", count)
    done = 0
    while done < count:
        r = rng.randint(1, 3)
        rows = []
        for _ in range(r):
            v = [0] * 22
            for idx in rng.sample(range(22), rng.randint(1, 4)):
                v[idx] = rng.randint(-2, 2)
            rows.append(v)
        basis = IntMat(rows)
        if snf(basis).rank < r:
            continue
        e = Embedding(k3.K3, saturation(basis))
        sub = e.sublattice
        if not sub.is_nondegenerate or abs(sub.determinant) > 48:
            continue
        done += 1
        comp = orthogonal_complement(e)
        ok = (
            comp.rank + e.rank == 22
            and abs(comp.sublattice.determinant) == abs(sub.determinant)
            and form_isomorphism(comp.sublattice.discriminant.form, negate(sub.discriminant.form)) is not None
        )
        out.record(ok, rows)
    return out


def _overlattice_cases():
    u = Lattice([[0, 1], [1, 0]])
    cases = {
        "G*": Lattice(k3.twisted_gram(k3.DEFAULT_PARAMS)),
        "U(2)": rescale(u, 2),
        "U(4)": rescale(u, 4),
        "U(2)+U(2)": Lattice([[0, 2, 0, 0], [2, 0, 0, 0], [0, 0, 0, 2], [0, 0, 2, 0]]),
        "A1(-1)+A1(-1)": Lattice([[-2, 0], [0, -2]]),
        "diag(4,-4)": Lattice([[4, 0], [0, -4]]),
        "A1+A1+A1+A1": Lattice([[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]]),
        "T_X model": transcendental_models(realize_bfield(k3.DEFAULT_PARAMS)).t_x.sublattice,
    }
    return cases


@lru_cache(maxsize=None)
def overlattice_relation() -> SuiteOutcome:
    cases = []
    for name, l in _overlattice_cases().items():
        det = abs(l.determinant)
        for n in range(2, det + 1):
            if det % (n * n):
                continue
            for o in overlattices_of_index(l, n):
                cases.append((name, n, o, l))
    out = SuiteOutcome("overlattice |disc| = |disc L| / n^2 on all enumerated cases", len(cases))
    for name, n, o, l in cases:
        ok = (
            o.lattice.is_even
            and abs(o.lattice.determinant) * n * n == abs(l.determinant)
            and o.index == n
            and o.embedding.sublattice == l
        )
        out.record(ok, (name, n))
    return out


@lru_cache(maxsize=None)
def exp_b_pairing(count: int = 100) -> SuiteOutcome:
    rng = random.Random(4242)
    out = SuiteOutcome("exp(B) preserves the Mukai pairing on random vector pairs", count)

    def vec():
        return MukaiVector(rng.randint(-5, 5), tuple(rng.randint(-3, 3) for _ in range(22)), rng.randint(-5, 5))

    for _ in range(count):
        b = realize_bfield(_random_params(rng))
        x, y = vec(), vec()
        ok = exp_b(b, x).pair(exp_b(b, y)) == x.pair(y) and exp_b(-b, exp_b(b, x)) == x
        out.record(ok, (b.params.as_tuple(), x.coords, y.coords))
    return out


@lru_cache(maxsize=None)
def relift_parity(count: int = 100) -> SuiteOutcome:
    rng = random.Random(77)
    out = SuiteOutcome("parity of 2B^2, 2B.h, 2B.s under B -> B + u + (k h + l s)/2", count)
    for _ in range(count):
        b = realize_bfield(_random_params(rng))
        u = [rng.randint(-5, 5) for _ in range(22)]
        kk, ll = rng.randint(-7, 7), rng.randint(-7, 7)
        b2 = b.shifted(u, kk, ll)
        t_s = transcendental_models(b).t_s
        same_class = RationalFunctional(tuple(b2.pair(r) for r in t_s.basis.rows)) == transcendental_models(b).alpha
        out.record(b2.params.is_admissible and same_class, (b.params.as_tuple(), u, kk, ll))
    return out


ALL_SUITES = (snf_contract, discriminant_order, complement_duality, overlattice_relation, exp_b_pairing, relift_parity)
