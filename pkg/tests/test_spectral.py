from fractions import Fraction
from math import comb

import pytest

from flatspec.crystal import AffineGenerator, GroupDefinition, close_point_group
from flatspec.exact_linear import signed_permutation_order
from flatspec.spectral import (
    EnumerationGuardError,
    NonRationalSumError,
    RootOfUnityTally,
    betti,
    betti_row,
    character_sum,
    cyclotomic_polynomial,
    enumerate_fixed_shell,
    enumerate_shell,
    multiplicity,
    multiplicity_diagonal,
    multiplicity_hw,
    multiplicity_table,
    projector_oracle,
    reduce_tally,
    tallies_equal,
    tally_add,
    tally_scale,
    tally_zero,
)
from flatspec import HWMatrix, example

from conftest import classical_hw_matrix

HALF = Fraction(1, 2)


def diag(*entries):
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))


def torus(n):
    return GroupDefinition(dim=n, generators=(), label=f"t{n}")


class TestShells:
    def test_unit_shell(self):
        shell = enumerate_shell(6, 1)
        assert len(shell.vectors) == 12
        assert all(sum(x * x for x in v) == 1 for v in shell.vectors)

    def test_norm_two_in_dim_four(self):
        # 4 choose 2 coordinate pairs, 4 sign patterns each
        assert len(enumerate_shell(4, 2).vectors) == 24

    def test_zero_shell(self):
        assert enumerate_shell(5, 0).vectors == ((0, 0, 0, 0, 0),)

    def test_sorted_and_negation_closed(self):
        vectors = enumerate_shell(3, 9).vectors
        assert list(vectors) == sorted(vectors)
        as_set = set(vectors)
        assert all(tuple(-x for x in v) in as_set for v in vectors)

    def test_guards(self):
        with pytest.raises(EnumerationGuardError):
            enumerate_shell(13, 1)
        with pytest.raises(EnumerationGuardError):
            enumerate_shell(2, 10_001)


class TestFixedShells:
    def test_catalog_6d_order_four_fixed_shell(self):
        g, _ = example("5.1")
        b1 = g.generators[0].matrix
        vectors = enumerate_fixed_shell(b1, 8)
        assert set(vectors) == {
            (0, 0, 0, 0, 2, 2),
            (0, 0, 0, 0, 2, -2),
            (0, 0, 0, 0, -2, 2),
            (0, 0, 0, 0, -2, -2),
        }

    def test_rotation_block_has_no_fixed_vectors(self):
        j = ((0, 1), (-1, 0))
        m = tuple(
            tuple((j[i % 2][k % 2] if i // 2 == k // 2 else 0) for k in range(4))
            for i in range(4)
        )
        assert enumerate_fixed_shell(m, 5) == ()
        assert enumerate_fixed_shell(m, 0) == ((0, 0, 0, 0),)

    def test_identity_matches_full_shell(self):
        from flatspec.exact_linear import identity_matrix

        for mu in range(5):
            fixed = enumerate_fixed_shell(identity_matrix(4), mu)
            assert set(fixed) == set(enumerate_shell(4, mu).vectors)

    def test_cycle_lattice(self):
        # plain 3-cycle: fixed lattice is the diagonal, norm 3k^2
        m = ((0, 0, 1), (1, 0, 0), (0, 1, 0))
        assert enumerate_fixed_shell(m, 3) == ((-1, -1, -1), (1, 1, 1))
        assert enumerate_fixed_shell(m, 5) == ()


class TestTallies:
    def test_conjugate_pair_cancels(self):
        t = RootOfUnityTally(4, (0, 1, 0, 1))
        assert reduce_tally(t) == 0

    def test_minus_one_bucket(self):
        assert reduce_tally(RootOfUnityTally(4, (0, 0, 4, 0))) == -4

    def test_trivial_modulus(self):
        assert reduce_tally(RootOfUnityTally(1, (12,))) == 12

    def test_non_rational_rejected(self):
        with pytest.raises(NonRationalSumError):
            reduce_tally(RootOfUnityTally(4, (0, 1, 0, 0)))
        with pytest.raises(NonRationalSumError):
            reduce_tally(RootOfUnityTally(5, (0, 1, 0, 0, 0)))

    def test_primitive_root_sums(self):
        # all q-th roots of unity sum to zero
        for q in (2, 3, 4, 6, 12):
            assert reduce_tally(RootOfUnityTally(q, (1,) * q)) == 0

    def test_equality_across_moduli(self):
        a = RootOfUnityTally(2, (1, 0))
        b = RootOfUnityTally(4, (1, 0, 0, 0))
        assert tallies_equal(a, b)
        # zeta_3 + zeta_3^2 = -1
        c = RootOfUnityTally(3, (0, 1, 1))
        d = RootOfUnityTally(1, (-1,))
        assert tallies_equal(c, d)
        assert not tallies_equal(c, RootOfUnityTally(1, (1,)))

    def test_add_and_scale(self):
        t = tally_add(tally_zero(), RootOfUnityTally(2, (3, 1)))
        t = tally_scale(t, -2)
        assert reduce_tally(t) == -4

    def test_cyclotomic_polynomials(self):
        assert cyclotomic_polynomial(1) == (-1, 1)
        assert cyclotomic_polynomial(2) == (1, 1)
        assert cyclotomic_polynomial(4) == (1, 0, 1)
        assert cyclotomic_polynomial(6) == (1, -1, 1)
        assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


class TestCharacterSum:
    def test_catalog_6d_order_four_at_norm_eight(self):
        g, _ = example("5.1")
        els = {el.word: el for el in close_point_group(g)}
        t = character_sum(els[(1, 0)], 8)
        assert reduce_tally(t) == -4

    def test_identity_counts_shell(self):
        g, _ = example("5.1")
        identity = close_point_group(g)[0]
        for mu in (0, 1, 4):
            t = character_sum(identity, mu)
            assert reduce_tally(t) == len(enumerate_shell(6, mu).vectors)

    def test_8d_catalog_order_four_aggregates(self):
        g, gp = example("5.6")
        totals = []
        for defn in (g, gp):
            total = tally_zero()
            for el in close_point_group(defn):
                if signed_permutation_order(el.matrix) == 4:
                    total = tally_add(total, character_sum(el, 1))
            totals.append(reduce_tally(total))
        assert totals == [0, 8]


class TestMultiplicity:
    def test_reflection_family_first_eigenvalue(self):
        for n in (4, 6):
            for k in range(1, n, 2):
                defn = example(f"4.1(n={n},k={k})")
                assert multiplicity(defn, 0, 1) == n + k - 2
                assert multiplicity(defn, n, 1) == n - k + 2

    def test_torus_multiplicities(self):
        t3 = torus(3)
        for p in range(4):
            for mu in range(4):
                expected = comb(3, p) * len(enumerate_shell(3, mu).vectors)
                assert multiplicity(t3, p, mu) == expected

    def test_shifted_family(self):
        n = 6
        for k in (1, 3, 5):
            for j in range(1, k + 1):
                defn = example(f"4.2(n={n},k={k},j={j})")
                assert multiplicity(defn, 0, 1) == n + k - 2 * j

    def test_invalid_definition_rejected(self):
        gens = (AffineGenerator(diag(-1, -1), (Fraction(0), Fraction(0))),)
        with pytest.raises(ValueError):
            multiplicity(GroupDefinition(2, gens), 0, 1)

    def test_p_out_of_range(self):
        with pytest.raises(ValueError):
            multiplicity(torus(2), 3, 0)


class TestDiagonalFastPath:
    def test_agrees_on_diagonal_catalog_groups(self):
        for key in ("4.1(n=4,k=1)", "4.1(n=6,k=5)", "4.2(n=4,k=3,j=2)"):
            defn = example(key)
            for p in range(defn.dim + 1):
                for mu in range(4):
                    assert multiplicity_diagonal(defn, p, mu) == multiplicity(
                        defn, p, mu
                    )

    def test_9d_catalog_pair(self):
        g, gp = example("4.3")
        for defn in (g, gp):
            for p in (0, 2, 5, 9):
                for mu in range(3):
                    assert multiplicity_diagonal(defn, p, mu) == multiplicity(
                        defn, p, mu
                    )

    def test_zero_norm_reduces_to_betti(self):
        g, _ = example("4.3")
        for p in range(10):
            assert multiplicity_diagonal(g, p, 0) == betti(g, p)

    def test_non_diagonal_rejected(self):
        g, _ = example("5.1")
        with pytest.raises(ValueError):
            multiplicity_diagonal(g, 1, 1)


class TestHWFastPath:
    def test_connectedness_and_homology_sphere(self):
        a = classical_hw_matrix()
        assert multiplicity_hw(a, 0, 0) == 1
        assert multiplicity_hw(a, 1, 0) == 0
        assert multiplicity_hw(a, 2, 0) == 0
        assert multiplicity_hw(a, 3, 0) == 1

    def test_agrees_with_generic_path(self):
        a = classical_hw_matrix()
        defn = None
        from flatspec.crystal import build_hw_group

        defn = build_hw_group(a)
        for p in range(4):
            for mu in range(6):
                assert multiplicity_hw(a, p, mu) == multiplicity(defn, p, mu)

    def test_invalid_matrix_rejected(self):
        bad = HWMatrix(n=3, rows=((Fraction(0),) * 3, (Fraction(0),) * 3))
        with pytest.raises(ValueError):
            multiplicity_hw(bad, 0, 1)


class TestBetti:
    def test_catalog_6d_rows(self):
        g, gp = example("5.1")
        assert betti_row(g) == (1, 2, 3, 4, 3, 2, 1)
        assert betti_row(gp) == (1, 1, 1, 2, 1, 1, 1)

    def test_catalog_9d_rows(self):
        g, gp = example("4.3")
        assert betti_row(g) == (1, 3, 18, 46, 60, 60, 46, 18, 3, 1)
        assert betti_row(gp) == (1, 6, 18, 38, 60, 66, 46, 18, 3, 0)

    def test_catalog_8d_second_member(self):
        _, gp = example("5.6")
        assert betti_row(gp) == (1, 2, 3, 6, 7, 6, 5, 2, 0)

    def test_torus_binomials(self):
        assert betti_row(torus(4)) == (1, 4, 6, 4, 1)


class TestProjectorOracle:
    def test_4d_catalog_group(self):
        g, _ = example("4.5")
        assert projector_oracle(g, 1, 1) == multiplicity(g, 1, 1)

    def test_small_torus(self):
        assert projector_oracle(torus(2), 0, 1) == 4

    def test_6d_catalog_high_norm(self):
        g, _ = example("5.1")
        assert projector_oracle(g, 0, 8) == multiplicity(g, 0, 8)

    def test_guard(self):
        with pytest.raises(EnumerationGuardError):
            projector_oracle(torus(12), 6, 2)


class TestMultiplicityTable:
    def test_structure(self):
        g, _ = example("4.5")
        table = multiplicity_table(g, (0, 1), 2).as_dict()
        assert set(table) == {(p, mu) for p in (0, 1) for mu in (0, 1, 2)}
        assert table[(0, 0)] == 1
        assert all(v >= 0 for v in table.values())
