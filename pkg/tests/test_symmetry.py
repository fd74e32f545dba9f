"""Symmetry detection: certificates, commutant, cospectral pairs, dichotomy."""

import random
import warnings
from fractions import Fraction as F

import numpy as np
import pytest

from isrlift.errors import DegenerateSpectrumWarning, DimensionMismatch
from isrlift.exact import GaussianRational as G, Matrix
from isrlift.planted import planted_instance, SYMMETRY_KINDS
from isrlift.reduction import PartitionedOperator
from isrlift.symmetry import (
    SymmetryCandidate,
    automorphism_extends_swap,
    automorphism_maps,
    check_isr_commutation,
    check_latent_symmetry,
    commutant_basis,
    eigenvector_dichotomy,
    find_cospectral_pairs,
    power_blocks,
    sample_shift_points,
)

EXCH = Matrix([[0, 1], [1, 0]])

# 8-vertex graph with a cospectral pair (5, 8) carried by no automorphism;
# found by seeded random search, certified exactly by integer power blocks
LATENT_ONLY_GRAPH = [
    [0, 0, 0, 1, 1, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 1, 1],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [1, 0, 0, 0, 0, 1, 0, 0],
    [1, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 1],
    [1, 1, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0],
]
LATENT_ONLY_PAIR = (5, 8)


def _path_graph(n):
    data = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        data[i][i + 1] = data[i + 1][i] = 1
    return Matrix(data)


def _complete_graph(n):
    return Matrix([[0 if i == j else 1 for j in range(n)] for i in range(n)])


class TestPowerBlocks:
    def test_identity_at_zero(self):
        op = PartitionedOperator(EXCH, [1])
        blocks = power_blocks(op, 0)
        assert blocks == [Matrix.identity(1)]

    def test_exchange_alternates(self):
        op = PartitionedOperator(EXCH, [1])
        blocks = power_blocks(op, 5)
        vals = [b[0, 0] for b in blocks]
        assert vals == [1, 0, 1, 0, 1, 0]

    def test_first_power_is_subset_block(self):
        h = Matrix([[1, 2, 0], [2, 3, 1], [0, 1, 5]])
        op = PartitionedOperator(h, [1, 3])
        assert power_blocks(op, 1)[1] == op.kept_block()

    def test_default_depth(self):
        op = PartitionedOperator(np.eye(4), [1, 2])
        assert len(power_blocks(op)) == 4  # k = 0..n-1


def _graph_with_automorphism(seed, n=8):
    """Random graph made symmetric under the swap of vertices 1 and 2."""
    rng = random.Random(seed)
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a[i][j] = a[j][i] = rng.choice([0, 1])
    # enforce the (0,1) swap as an automorphism
    perm = list(range(n))
    perm[0], perm[1] = 1, 0
    for i in range(n):
        for j in range(n):
            a[perm[i]][perm[j]] = a[i][j]
    return Matrix(a)


class TestLatentSymmetryCertificate:
    def test_identity_always_certified(self):
        rng = np.random.default_rng(0)
        z = rng.standard_normal((5, 5))
        op = PartitionedOperator((z + z.T) / 2, [2, 4])
        assert check_latent_symmetry(op, np.eye(2)).verdict

    def test_permutation_automorphism_oracle(self):
        # a true automorphism fixing the subset setwise induces a certified
        # exchange on the subset: the full permutation commutes with h, hence
        # every power block commutes with its restriction
        for seed in range(5):
            h = _graph_with_automorphism(seed)
            op = PartitionedOperator(h, [1, 2])
            cert = check_latent_symmetry(op, EXCH)
            assert cert.verdict and cert.max_residual == 0.0

    def test_random_candidates_rejected(self):
        rng = np.random.default_rng(3)
        z = rng.standard_normal((6, 6))
        op = PartitionedOperator((z + z.T) / 2, [1, 2, 3])
        bad = rng.standard_normal((3, 3))
        cert = check_latent_symmetry(op, bad)
        assert not cert.verdict

    def test_perturbation_rejected_at_1e6(self):
        rng = np.random.default_rng(4)
        for i in range(5):
            inst = planted_instance(10, 3, SYMMETRY_KINDS[i % 3], seed=50 + i)
            t = inst.candidate.astype(complex)
            noise = rng.standard_normal(t.shape) + 1j * rng.standard_normal(t.shape)
            cert = check_latent_symmetry(inst.operator, t + 1e-6 * noise)
            assert not cert.verdict

    def test_dimension_mismatch(self):
        op = PartitionedOperator(EXCH, [1])
        with pytest.raises(DimensionMismatch):
            check_latent_symmetry(op, EXCH)

    def test_cayley_hamilton_truncation(self):
        # verdicts at depth n-1 and depth 2n agree
        rng = np.random.default_rng(5)
        for i in range(6):
            inst = planted_instance(9, 3, SYMMETRY_KINDS[i % 3], seed=80 + i)
            op = inst.operator
            good = inst.candidate
            bad = good + 1e-3 * rng.standard_normal(good.shape)
            for cand in (good, bad):
                v1 = check_latent_symmetry(op, cand, k_max=op.n - 1).verdict
                v2 = check_latent_symmetry(op, cand, k_max=2 * op.n).verdict
                assert v1 == v2


class TestIsrCommutation:
    def test_scalar_exact_identity(self):
        op = PartitionedOperator(EXCH, [1])
        cert = check_isr_commutation(op, Matrix([[F(5)]]))
        assert cert.verdict and cert.details["mode"] == "exact-identity"

    def test_certified_implies_sampled(self):
        for i in range(6):
            inst = planted_instance(11, 3, SYMMETRY_KINDS[i % 3], seed=60 + i)
            assert check_latent_symmetry(inst.operator, inst.candidate).verdict
            cert = check_isr_commutation(inst.operator, inst.candidate, seed=i)
            assert cert.verdict
            assert cert.max_residual <= 1e-8

    def test_negative_control_rejected(self):
        rng = np.random.default_rng(6)
        inst = planted_instance(10, 3, "involution", seed=70)
        bad = inst.candidate + 1e-3 * rng.standard_normal((3, 3))
        cert = check_isr_commutation(inst.operator, bad, seed=1)
        assert not cert.verdict
        assert cert.max_residual > 1e-5

    def test_samples_avoid_poles(self):
        rng = np.random.default_rng(7)
        z = rng.standard_normal((8, 8))
        op = PartitionedOperator((z + z.T) / 2, [1, 2])
        pts = sample_shift_points(op, n_samples=25, seed=3)
        assert len(pts) == 25
        comp = [i - 1 for i in op.complement]
        poles = np.linalg.eigvalsh(op.matrix[np.ix_(comp, comp)])
        assert min(abs(p - lam) for lam in pts for p in poles) > 1e-4

    def test_sampling_deterministic(self):
        op = PartitionedOperator(EXCH.to_numpy(), [1])
        assert sample_shift_points(op, 5, seed=9) == sample_shift_points(op, 5, seed=9)


class TestCommutant:
    def test_diagonal_exact(self):
        op = PartitionedOperator(Matrix.diagonal([F(1), F(2)]), [1, 2])
        basis = commutant_basis(op)
        assert len(basis) == 2
        assert basis[0] == Matrix.identity(2)
        for b in basis:
            assert b[0, 1] == 0 and b[1, 0] == 0  # diagonal span

    def test_scalar_blocks_full_space(self):
        # subset block of every power is a multiple of the identity
        op = PartitionedOperator(Matrix.diagonal([F(3), F(3)]), [1, 2])
        assert len(commutant_basis(op)) == 4

    def test_identity_always_present(self):
        rng = np.random.default_rng(8)
        z = rng.standard_normal((6, 6))
        op = PartitionedOperator((z + z.T) / 2, [2, 3, 5])
        basis = commutant_basis(op)
        assert len(basis) >= 1
        assert np.array_equal(basis[0], np.eye(3))

    def test_members_individually_certified_exact(self):
        h = _graph_with_automorphism(11)
        op = PartitionedOperator(h, [1, 2])
        for b in commutant_basis(op):
            cert = check_latent_symmetry(op, b)
            assert cert.verdict and cert.max_residual == 0.0

    def test_members_individually_certified_numeric(self):
        inst = planted_instance(9, 3, "involution", seed=90)
        for b in commutant_basis(inst.operator):
            assert check_latent_symmetry(inst.operator, b).verdict

    def test_exact_matches_numeric_dimension(self):
        h = _graph_with_automorphism(13)
        op_exact = PartitionedOperator(h, [1, 2])
        op_float = PartitionedOperator(h.to_numpy(), [1, 2])
        assert len(commutant_basis(op_exact)) == len(commutant_basis(op_float))


class TestCospectralPairs:
    def test_path_graph_end_vertices(self):
        assert find_cospectral_pairs(_path_graph(3)) == [(1, 3)]

    def test_complete_graph_all_pairs(self):
        pairs = find_cospectral_pairs(_complete_graph(4))
        assert pairs == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]

    def test_float_agrees_with_exact(self):
        rng = random.Random(5)
        for _ in range(10):
            n = rng.randint(4, 8)
            a = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    a[i][j] = a[j][i] = rng.choice([0, 1])
            h = Matrix(a)
            assert find_cospectral_pairs(h) == find_cospectral_pairs(h.to_numpy())

    def test_relabeling_invariance(self):
        h = Matrix(LATENT_ONLY_GRAPH)
        u, v = LATENT_ONLY_PAIR
        pairs = find_cospectral_pairs(h)
        assert (u, v) in pairs
        # permute vertices outside {u, v}
        rng = random.Random(17)
        n = 8
        others = [i for i in range(n) if i not in (u - 1, v - 1)]
        shuffled = others[:]
        rng.shuffle(shuffled)
        perm = list(range(n))
        for a, b in zip(others, shuffled):
            perm[a] = b
        data = [[h[perm[i], perm[j]] for j in range(n)] for i in range(n)]
        assert (u, v) in find_cospectral_pairs(Matrix(data))

    def test_latent_only_instance(self):
        h = Matrix(LATENT_ONLY_GRAPH)
        u, v = LATENT_ONLY_PAIR
        op = PartitionedOperator(h, (u, v))
        cert = check_latent_symmetry(op, EXCH)
        assert cert.verdict and cert.max_residual == 0.0
        assert not automorphism_extends_swap(h, u, v)
        assert not automorphism_maps(h, u, v)

    def test_complex_hermitian_offdiagonal_condition(self):
        i = G(0, 1)
        # uu/vv walk counts match but the off-diagonal entry is imaginary,
        # so the exchange does not commute with the first power block
        h = Matrix([[F(0), i], [G(0, -1), F(0)]])
        assert find_cospectral_pairs(h) == []

    def test_automorphism_helpers(self):
        p3 = _path_graph(3)
        assert automorphism_extends_swap(p3, 1, 3)
        assert not automorphism_extends_swap(p3, 1, 2)
        assert automorphism_maps(p3, 1, 3)


class TestEigenvectorDichotomy:
    def test_exchange_both_symmetric(self):
        op = PartitionedOperator(EXCH, [1, 2])
        rep = eigenvector_dichotomy(op, EXCH)
        assert [e.label for e in rep.entries] == ["a", "a"]
        matched = sorted(e.matched.real for e in rep.entries)
        assert matched == [-1.0, 1.0]

    def test_vanishing_class(self):
        # block diagonal: eigenvectors of the complement block vanish on the subset
        h = np.diag([0.0, 5.0, 7.0])
        h[0, 0] = 2.0
        op = PartitionedOperator(h, [1])
        rep = eigenvector_dichotomy(op, np.array([[1.0]]))
        labels = {round(e.value): e.label for e in rep.entries}
        assert labels[2] == "a" and labels[5] == "b" and labels[7] == "b"

    def test_planted_all_classified(self):
        for i in range(6):
            inst = planted_instance(12, 4, SYMMETRY_KINDS[i % 3], seed=30 + i)
            rep = eigenvector_dichotomy(inst.operator, inst.candidate)
            assert not rep.falsifications
            assert all(e.label in ("a", "b") for e in rep.entries)

    def test_disjoint_spectra_simple_symmetry_all_symmetric(self):
        found = 0
        for seed in range(40):
            inst = planted_instance(10, 3, "diag-unitary", seed=200 + seed, share=1.0)
            op = inst.operator
            w = np.linalg.eigvalsh(op.matrix)
            comp = [i - 1 for i in op.complement]
            wc = np.linalg.eigvalsh(op.matrix[np.ix_(comp, comp)])
            if min(abs(a - b) for a in w for b in wc) < 1e-3:
                continue
            if np.min(np.diff(np.sort(w))) < 1e-6:
                continue
            rep = eigenvector_dichotomy(op, inst.candidate)
            assert all(e.label == "a" for e in rep.entries)
            found += 1
        assert found >= 10

    def test_degenerate_spectrum_warns(self):
        h = np.diag([1.0, 1.0, 3.0])
        op = PartitionedOperator(h, [1, 2])
        with pytest.warns(DegenerateSpectrumWarning):
            rep = eigenvector_dichotomy(op, np.eye(2))
        assert rep.degenerate
        assert not rep.falsifications  # falsification disabled


class TestSymmetryCandidate:
    def test_normality_witnesses(self):
        assert SymmetryCandidate(EXCH).exactly_normal
        assert SymmetryCandidate(np.array([[0.0, 1.0], [0.0, 0.0]])).is_normal() is False
        c = SymmetryCandidate(Matrix([[0, 1], [0, 0]]))
        assert not c.exactly_normal

    def test_invertibility(self):
        assert SymmetryCandidate(EXCH).is_invertible()
        assert not SymmetryCandidate(Matrix([[1, 1], [1, 1]])).is_invertible()
        assert not SymmetryCandidate(np.array([[1.0, 1.0], [1.0, 1.0]])).is_invertible()
