import random
from fractions import Fraction

import pytest

from lattk import k3
from lattk.errors import AdmissibilityError, LatticeError
from lattk.forms import form_isomorphism, negate
from lattk.k3 import (
    DEFAULT_PARAMS,
    E0,
    E4,
    BFieldParams,
    ConcreteBField,
    MukaiVector,
    brauer_restrict,
    exp_b,
    realize_bfield,
    standard_lattice,
    transcendental_models,
    twisted_algebraic_lattice,
    twisted_generators,
    twisted_gram,
)
from lattk.lattice import Embedding, RationalFunctional, intersect_with_subspace
from lattk.linalg import IntMat
from oracles import cofactor_det, e8_cartan_negated, inertia, mukai_pair

HALF = Fraction(1, 2)


class TestStandardLattices:
    def test_u(self):
        assert standard_lattice("U").determinant == -1

    def test_e8(self):
        e8 = standard_lattice("E8minus")
        assert e8.determinant == 1 and e8.signature == (0, 8, 0)
        assert inertia(e8.gram.tolist()) == (0, 8, 0)

    def test_e8_is_even_unimodular_negative_definite(self):
        # these three properties characterize E8(-1) in rank 8
        g = k3.E8_MINUS_GRAM.tolist()
        assert cofactor_det(g) == 1 == cofactor_det(e8_cartan_negated())
        assert all(g[i][i] == -2 for i in range(8))
        assert inertia(g) == inertia(e8_cartan_negated()) == (0, 8, 0)

    def test_k3(self):
        l = standard_lattice("K3")
        assert l.rank == 22 and l.determinant == -1 and l.signature == (3, 19, 0) and l.is_even

    def test_mukai(self):
        l = standard_lattice("Mukai")
        assert l.rank == 24 and abs(l.determinant) == 1 and l.is_even and l.signature == (4, 20, 0)

    def test_unknown(self):
        with pytest.raises(LatticeError):
            standard_lattice("D4")

    def test_labels(self):
        assert k3.MUKAI_LABELS[0] == "e0" and k3.MUKAI_LABELS[-1] == "e4"
        assert "U1.e" in k3.K3_LABELS and "E8a.r1" in k3.K3_LABELS and len(k3.K3_LABELS) == 22


class TestNamedVectors:
    def test_h_s_f(self):
        h, s, f = k3.H, k3.S, k3.F
        assert k3.k3_pair(h, h) == 2 and k3.k3_pair(s, s) == -2 and k3.k3_pair(h, s) == 0
        assert k3.k3_pair(f, f) == 0

    def test_picard_primitive(self):
        assert k3.PICARD.is_primitive

    def test_u_diagonal_pair_not_primitive(self):
        e_plus_f = (1, 1) + (0,) * 20
        e_minus_f = (1, -1) + (0,) * 20
        assert not Embedding(k3.K3, IntMat([e_plus_f, e_minus_f])).is_primitive


class TestBFields:
    def test_admissibility(self):
        assert DEFAULT_PARAMS.is_admissible
        with pytest.raises(AdmissibilityError):
            realize_bfield(BFieldParams(0, HALF, HALF))

    def test_realize_default(self):
        b = realize_bfield(DEFAULT_PARAMS)
        assert b.params == DEFAULT_PARAMS
        v = b.vector
        assert k3.K3.pair(v, v) == HALF and k3.K3.pair(v, k3.H) == HALF and k3.K3.pair(v, k3.S) == HALF

    def test_realize_all_small_triples(self):
        odd = [Fraction(n, 2) for n in range(-19, 20, 2)]
        for bsq in odd:
            for bh in odd[::3]:
                for bs in odd[::4]:
                    p = BFieldParams(bsq, bh, bs)
                    assert realize_bfield(p).params == p

    def test_realize_deterministic(self):
        p = BFieldParams(Fraction(7, 2), Fraction(-3, 2), Fraction(5, 2))
        realize_bfield.cache_clear()
        first = realize_bfield(p)
        realize_bfield.cache_clear()
        assert realize_bfield(p) == first

    def test_half_integrality_enforced(self):
        with pytest.raises(LatticeError):
            ConcreteBField((Fraction(1, 3),) + (0,) * 21)

    def test_relift_parity(self):
        rng = random.Random(2)
        b = realize_bfield(DEFAULT_PARAMS)
        for _ in range(50):
            u = [rng.randint(-4, 4) for _ in range(22)]
            b2 = b.shifted(u, rng.randint(-6, 6), rng.randint(-6, 6))
            assert b2.params.is_admissible


class TestExpB:
    def test_examples(self):
        b = realize_bfield(DEFAULT_PARAMS)
        assert exp_b(b, E4) == E4
        assert exp_b(b, 2 * E0) == MukaiVector(2, tuple(2 * x for x in b.vector), b.params.bsq)

    def test_inverse(self):
        b = realize_bfield(BFieldParams(Fraction(3, 2), Fraction(-1, 2), Fraction(5, 2)))
        v = MukaiVector(3, tuple(range(22)), -4)
        assert exp_b(-b, exp_b(b, v)) == v

    def test_pairing_matches_oracle(self):
        g = k3.K3.gram.tolist()
        x = MukaiVector(2, (1,) + (0,) * 20 + (3,), 5)
        y = MukaiVector(-1, (0, 4) + (0,) * 19 + (1,), 2)
        assert x.pair(y) == mukai_pair(x.coords, y.coords, g)
        assert x.pair(y) == k3.MUKAI.pair(x.coords, y.coords)


class TestTwistedAlgebraic:
    def test_default(self):
        b = realize_bfield(DEFAULT_PARAMS)
        alg = twisted_algebraic_lattice(b)
        assert alg.rank == 4 and abs(alg.sublattice.determinant) == 16
        for v in (k3.H_MUKAI, k3.S_MUKAI, E4):
            assert alg.contains(v.coords)
        assert twisted_generators(b).same_span(alg)
        assert twisted_generators(b).sublattice.gram == twisted_gram(DEFAULT_PARAMS)

    def test_g_star(self):
        assert twisted_gram(DEFAULT_PARAMS).tolist() == [[2, 1, 1, -2], [1, 2, 0, 0], [1, 0, -2, 0], [-2, 0, 0, 0]]

    def test_mukai_meets_e4_line(self):
        e = intersect_with_subspace(k3.MUKAI, IntMat([[0] * 23 + [3]]))
        assert e.basis.rows == (E4.coords,)

    def test_complement(self):
        b = realize_bfield(DEFAULT_PARAMS)
        comp = k3.mukai_complement(b)
        alg = twisted_algebraic_lattice(b)
        assert comp.rank == 20 and abs(comp.sublattice.determinant) == 16
        assert form_isomorphism(comp.sublattice.discriminant.form, negate(alg.sublattice.discriminant.form))


class TestTranscendental:
    def test_models(self):
        m = transcendental_models(realize_bfield(DEFAULT_PARAMS))
        assert m.t_s.rank == 20 and abs(m.t_s.sublattice.determinant) == 4
        assert m.alpha.order == 2
        assert m.index == 2 and abs(m.t_x.sublattice.determinant) == 16

    def test_restrictions(self):
        m = transcendental_models(realize_bfield(DEFAULT_PARAMS))
        zero = RationalFunctional((0,) * 20)
        assert brauer_restrict(zero, m.t_x).is_zero
        assert brauer_restrict(m.alpha, m.t_x).is_zero
        with pytest.raises(LatticeError):
            brauer_restrict(RationalFunctional((0,) * 3), m.t_x)

    def test_kernel_model_dual_to_twisted_algebraic(self):
        b = realize_bfield(BFieldParams(Fraction(5, 2), Fraction(-3, 2), Fraction(1, 2)))
        tx = transcendental_models(b).t_x.sublattice.discriminant.form
        alg = twisted_algebraic_lattice(b).sublattice.discriminant.form
        assert form_isomorphism(tx, negate(alg)) is not None
