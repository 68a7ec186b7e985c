import random
from fractions import Fraction

import pytest

from lattk.errors import DegenerateLatticeError, DimensionError, LatticeError
from lattk.forms import form_isomorphism, negate
from lattk.lattice import (
    Embedding,
    Lattice,
    RationalFunctional,
    cyclic_functional,
    direct_sum,
    discriminant_group,
    full_embedding,
    intersect_with_subspace,
    is_isometry,
    kernel_sublattice,
    orthogonal_complement,
    overlattices_of_index,
    rescale,
    signature,
    sublattice_intersection,
)
from lattk.linalg import IntMat, inverse, make, snf
from oracles import discriminant_q_census, e8_cartan_negated, inertia

U = Lattice([[0, 1], [1, 0]])
G_STAR = Lattice([[2, 1, 1, -2], [1, 2, 0, 0], [1, 0, -2, 0], [-2, 0, 0, 0]])
PIC = Lattice([[2, 0], [0, -2]])
E8 = Lattice(e8_cartan_negated())


class TestLatticeBasics:
    def test_gram_must_be_symmetric(self):
        with pytest.raises(LatticeError):
            Lattice([[0, 1], [2, 0]])

    def test_even_and_degenerate(self):
        f = Lattice([[0]])
        assert f.is_even and not f.is_nondegenerate
        with pytest.raises(DegenerateLatticeError):
            discriminant_group(f)

    def test_signature_examples(self):
        assert signature(U) == (1, 1, 0)
        assert signature(E8) == (0, 8, 0)
        assert signature(G_STAR) == (2, 2, 0)

    def test_signature_oracle(self):
        rng = random.Random(3)
        for _ in range(60):
            n = rng.randint(1, 6)
            rows = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    rows[i][j] = rows[j][i] = rng.randint(-4, 4)
            assert signature(Lattice(rows)) == inertia(rows)


class TestDiscriminant:
    def test_unimodular_trivial(self):
        assert discriminant_group(U).size == 1

    def test_pic(self):
        f = discriminant_group(PIC)
        assert f.orders == (2, 2)
        assert sorted(f.q) == [Fraction(1, 2), Fraction(3, 2)]

    def test_g_star(self):
        f = discriminant_group(G_STAR)
        assert f.orders == (4, 4)
        assert f.size == 16

    @pytest.mark.parametrize("gram", [PIC.gram.tolist(), G_STAR.gram.tolist(), [[2, 1], [1, 4]], [[4, 2, 0], [2, -2, 1], [0, 1, 6]]])
    def test_census_matches_brute_force(self, gram):
        f = discriminant_group(Lattice(gram))
        ours = {}
        for x in f.elements():
            key = f.qvalue(x) if f.has_q else f.bvalue(x, x) % 1
            ours[key] = ours.get(key, 0) + 1
        census = discriminant_q_census(gram)
        if not f.has_q:
            folded = {}
            for k, v in census.items():
                folded[k % 1] = folded.get(k % 1, 0) + v
            census = folded
        assert ours == dict(census)

    def test_class_of_and_lift(self):
        d = G_STAR.discriminant
        for x in d.form.elements():
            assert d.class_of(d.lift(x)) == x


class TestEmbeddings:
    def test_complement_of_u_summand(self):
        uu = direct_sum(U, U)
        comp = orthogonal_complement(Embedding(uu, IntMat([[1, 0, 0, 0], [0, 1, 0, 0]])))
        assert comp.same_span(Embedding(uu, IntMat([[0, 0, 1, 0], [0, 0, 0, 1]])))

    def test_rank_additivity(self):
        rng = random.Random(4)
        uu = direct_sum(U, U, Lattice([[-2]]))
        for _ in range(30):
            v = [rng.randint(-3, 3) for _ in range(5)]
            if not any(v):
                continue
            e = Embedding(uu, IntMat([v]))
            assert orthogonal_complement(e).rank + e.saturation().rank == 5

    def test_independence_required(self):
        with pytest.raises(LatticeError):
            Embedding(U, IntMat([[1, 1], [2, 2]]))

    def test_intersect_with_subspace(self):
        assert intersect_with_subspace(U, make([[1, 0], [0, 1]])).same_span(full_embedding(U))
        e = intersect_with_subspace(U, make([["1/2", "1/3"]]))
        assert e.basis.rows == ((3, 2),)
        assert all(d == 1 for d in snf(e.basis).diagonal)

    def test_intersection_examples(self):
        uu = direct_sum(U, U)
        e1 = Embedding(uu, IntMat([[1, 0, 0, 0], [0, 1, 0, 0]]))
        e2 = Embedding(uu, IntMat([[0, 0, 1, 0], [0, 0, 0, 1]]))
        assert sublattice_intersection(e1, e1).same_span(e1)
        assert sublattice_intersection(e1, e2).rank == 0

    def test_intersection_is_not_saturated(self):
        a = Embedding(U, IntMat([[2, 0], [0, 1]]))
        b = Embedding(U, IntMat([[1, 0], [0, 2]]))
        inter = sublattice_intersection(a, b)
        assert inter.same_span(Embedding(U, IntMat([[2, 0], [0, 2]])))

    def test_ambient_mismatch(self):
        with pytest.raises(LatticeError):
            sublattice_intersection(full_embedding(U), full_embedding(PIC))


class TestRescaleAndIsometry:
    def test_rescale(self):
        assert rescale(U, 1) == U
        assert rescale(Lattice([[0, 2], [2, 0]]), Fraction(1, 2)) == U
        with pytest.raises(LatticeError):
            rescale(U, Fraction(1, 2))

    def test_round_trip(self):
        l = Lattice([[4, 2], [2, 6]])
        assert rescale(rescale(l, Fraction(1, 2)), 2) == l

    def test_isometry_examples(self):
        uu = direct_sum(U, U)
        swap = IntMat([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
        assert is_isometry(IntMat.identity(4), uu, uu)
        assert is_isometry(swap, uu, uu)
        assert not is_isometry(IntMat([[2, 0], [0, 1]]), U, U)
        with pytest.raises(DimensionError):
            is_isometry(IntMat.identity(3), U, U)

    def test_composition(self):
        rng = random.Random(8)
        base = Lattice([[2, 1, 0], [1, -2, 1], [0, 1, 4]])
        for _ in range(30):
            mats = []
            for _ in range(2):
                m = IntMat.identity(3)
                for _ in range(4):
                    i, j = rng.sample(range(3), 2)
                    e = [[int(r == c) for c in range(3)] for r in range(3)]
                    e[i][j] = rng.randint(-2, 2)
                    m = m @ IntMat(e)
                mats.append(m)
            a = base
            b = Lattice(mats[0].T @ a.gram @ mats[0])
            c = Lattice(mats[1].T @ b.gram @ mats[1])
            inv0, inv1 = IntMat(inverse(mats[0]).tolist()), IntMat(inverse(mats[1]).tolist())
            assert is_isometry(mats[0], b, a) and is_isometry(mats[1], c, b)
            assert is_isometry(inv0, a, b)
            assert is_isometry(mats[0] @ mats[1], c, a)
            assert is_isometry(inv1 @ inv0, a, c)


class TestFunctionals:
    def test_zero_functional(self):
        e, idx = kernel_sublattice(U, RationalFunctional((0, 0)))
        assert idx == 1 and e.same_span(full_embedding(U))

    def test_half_on_e(self):
        e, idx = kernel_sublattice(U, RationalFunctional((Fraction(1, 2), 0)))
        assert idx == 2
        assert e.sublattice.gram == IntMat([[0, 2], [2, 0]])
        assert e.sublattice.determinant == -4

    def test_order(self):
        assert RationalFunctional((Fraction(1, 2), Fraction(1, 3))).order == 6
        assert RationalFunctional((Fraction(3, 2),)).values == (Fraction(1, 2),)

    def test_cyclic_functional_kernel(self):
        sub = Embedding(U, IntMat([[1, 1], [0, 3]]))
        phi = cyclic_functional(sub)
        e, idx = kernel_sublattice(U, phi)
        assert idx == 3 and e.same_span(sub)


class TestOverlattices:
    def test_unimodular(self):
        assert overlattices_of_index(U, 2) == []

    def test_g_star_counts(self):
        four = overlattices_of_index(G_STAR, 4)
        assert len(four) == 1 and four[0].quotient == (2, 2)
        assert four[0].lattice.is_unimodular
        assert len(overlattices_of_index(G_STAR, 2)) == 3

    def test_non_dividing(self):
        assert overlattices_of_index(G_STAR, 3) == []

    def test_odd_rejected(self):
        with pytest.raises(LatticeError):
            overlattices_of_index(Lattice([[1]]), 1)

    def test_embedding_is_index(self):
        for o in overlattices_of_index(Lattice([[0, 4], [4, 0]]), 2):
            assert abs(o.embedding.sublattice.determinant) == abs(o.lattice.determinant) * 4
            assert o.embedding.sublattice == Lattice([[0, 4], [4, 0]])


def test_complement_duality_small():
    k = direct_sum(U, U, E8)
    e = Embedding(k, IntMat([[1, 1] + [0] * 10, [0, 0, 1, 2] + [0] * 8]))
    comp = orthogonal_complement(e)
    assert form_isomorphism(comp.sublattice.discriminant.form, negate(e.sublattice.discriminant.form)) is not None
