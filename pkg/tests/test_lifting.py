"""Lifting pipeline: decomposition, Krylov bundles, assembly, verification."""

from fractions import Fraction as F

import numpy as np
import pytest

from isrlift.errors import (
    ExactDecompositionUnavailable,
    NotLatentSymmetry,
    NotNormal,
    SingularSymmetry,
)
from isrlift.exact import GaussianRational as G, Matrix
from isrlift.planted import planted_instance, SYMMETRY_KINDS
from isrlift.reduction import PartitionedOperator
from isrlift.symmetry import SymmetryCandidate, check_latent_symmetry
from isrlift.lifting import (
    build_krylov_bundle,
    lift_symmetry,
    spectral_decompose_normal,
    verify_lift,
)

EXCH = Matrix([[0, 1], [1, 0]])


class TestSpectralDecomposition:
    def test_exchange_hand_diagonalization(self):
        dec = spectral_decompose_normal(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert [g.value for g in dec.groups] == [pytest.approx(-1), pytest.approx(1)]
        v = dec.groups[1].vectors[:, 0]
        assert np.allclose(np.abs(v), [1 / np.sqrt(2)] * 2)

    def test_identity_single_group(self):
        dec = spectral_decompose_normal(np.eye(4))
        assert len(dec.groups) == 1
        assert dec.groups[0].multiplicity == 4

    def test_diagonal_two_groups(self):
        dec = spectral_decompose_normal(np.diag([2.0, 3.0]))
        assert [(g.value, g.multiplicity) for g in dec.groups] == [(2, 1), (3, 1)]

    def test_exact_exchange(self):
        dec = spectral_decompose_normal(EXCH)
        assert [g.exact_value for g in dec.groups] == [F(-1), F(1)]
        for g in dec.groups:
            assert g.projector @ g.projector == g.projector

    def test_exact_unavailable_for_irrational_spectrum(self):
        rot = Matrix([[0, -1], [1, 0]])  # eigenvalues are not rational
        with pytest.raises(ExactDecompositionUnavailable):
            spectral_decompose_normal(rot)

    def test_exact_gaussian_entries_real_spectrum(self):
        i = G(0, 1)
        t = Matrix([[F(0), i], [G(0, -1), F(0)]])  # Hermitian, eigenvalues +-1
        dec = spectral_decompose_normal(t)
        assert [g.exact_value for g in dec.groups] == [F(-1), F(1)]

    def test_not_normal_rejected(self):
        with pytest.raises(NotNormal):
            spectral_decompose_normal(np.array([[0.0, 1.0], [0.0, 0.0]]))
        with pytest.raises(NotNormal):
            # rational spectrum but defective
            spectral_decompose_normal(Matrix([[1, 1], [0, 2]]))

    def test_singular_rejected(self):
        with pytest.raises(SingularSymmetry):
            spectral_decompose_normal(np.array([[1.0, 1.0], [1.0, 1.0]]))
        with pytest.raises(SingularSymmetry):
            spectral_decompose_normal(Matrix([[1, 1], [1, 1]]))

    def test_joint_diagonalization_unitary(self):
        # 3-cycle: real normal, not symmetric; spectrum on the unit circle
        c3 = np.zeros((3, 3))
        c3[[1, 2, 0], [0, 1, 2]] = 1.0
        dec = spectral_decompose_normal(c3, seed=0)
        vals = sorted(np.angle(g.value) for g in dec.groups)
        assert np.allclose(vals, [-2 * np.pi / 3, 0.0, 2 * np.pi / 3], atol=1e-10)
        recon = sum(
            g.value * (g.vectors @ g.vectors.conj().T) for g in dec.groups
        )
        assert np.max(np.abs(recon - c3)) < 1e-12
        assert dec.provenance["seed"] == 0
        assert dec.provenance["theta"] is not None

    def test_grouping_merges_degenerate(self):
        t = np.diag([1.0, 1.0 + 1e-12, 5.0])
        dec = spectral_decompose_normal(t)
        assert [g.multiplicity for g in dec.groups] == [2, 1]

    def test_reconstruction_residual_bound(self):
        rng = np.random.default_rng(3)
        z = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        q, _ = np.linalg.qr(z)  # unitary: normal with unit-circle spectrum
        dec = spectral_decompose_normal(q, seed=1)
        recon = sum(g.value * (g.vectors @ g.vectors.conj().T) for g in dec.groups)
        assert np.max(np.abs(recon - q)) < 1e-10


class TestKrylovBundle:
    def test_exchange_no_residuals(self):
        op = PartitionedOperator(EXCH, [1, 2])
        b = build_krylov_bundle(op, EXCH.to_numpy())
        assert b.dimension_summary() == {
            "multiplicities": [1, 1],
            "dimensions": [1, 1],
            "residual_counts": [0, 0],
            "complement_dimension": 0,
        }

    def test_decoupled_diagonal(self):
        op = PartitionedOperator(np.diag([1.0, 2.0, 3.0]), [1])
        b = build_krylov_bundle(op, np.array([[1.0]]))
        assert b.groups[0].dimension == 1
        assert b.complement_dimension == 2

    def test_generators_first_and_padded(self):
        inst = planted_instance(10, 3, "involution", seed=5)
        op = inst.operator
        b = build_krylov_bundle(op, inst.candidate)
        idx = [i - 1 for i in op.subset]
        comp = [i - 1 for i in op.complement]
        for g in b.groups:
            gen = g.basis[:, : g.multiplicity]
            assert np.array_equal(gen, g.generators)
            assert np.max(np.abs(np.asarray(g.generators)[comp, :])) == 0.0

    def test_dimension_count_identity(self):
        for i in range(8):
            inst = planted_instance(12, 4, SYMMETRY_KINDS[i % 3], seed=40 + i)
            b = build_krylov_bundle(inst.operator, inst.candidate)
            assert b.total_dimension + b.complement_dimension == 12

    def test_cross_group_orthogonality_and_vanishing(self):
        inst = planted_instance(14, 4, "permutation", seed=9)
        op = inst.operator
        b = build_krylov_bundle(op, inst.candidate)
        idx = [i - 1 for i in op.subset]
        for a in range(len(b.groups)):
            for c in range(a + 1, len(b.groups)):
                ov = np.max(np.abs(b.groups[a].basis.conj().T @ b.groups[c].basis))
                assert ov < 1e-9
        for g in b.groups:
            res = g.residual_vectors
            if res.shape[1]:
                assert np.max(np.linalg.norm(res[idx, :], axis=0)) < 1e-9


class TestLift:
    def test_exchange_lifts_to_itself(self):
        op = PartitionedOperator(EXCH, [1, 2])
        lift = lift_symmetry(op, EXCH)
        assert lift.mode == "exact"
        assert lift.matrix == EXCH
        assert all(v == 0.0 for v in lift.residuals.values())

    def test_identity_lifts_to_projector(self):
        rng = np.random.default_rng(1)
        z = rng.standard_normal((6, 6))
        op = PartitionedOperator((z + z.T) / 2, [2, 5])
        lift = lift_symmetry(op, np.eye(2))
        q = lift.float_matrix()
        assert np.max(np.abs(q @ q - q)) < 1e-12  # orthogonal projector
        assert np.allclose(q[np.ix_([1, 4], [1, 4])], np.eye(2))

    def test_planted_residual_bounds(self):
        for i in range(12):
            inst = planted_instance(16, 5, SYMMETRY_KINDS[i % 3], seed=700 + i)
            lift = lift_symmetry(inst.operator, inst.candidate, seed=3)
            assert max(lift.residuals.values()) <= 1e-10

    def test_uncertified_candidate_rejected(self):
        rng = np.random.default_rng(2)
        z = rng.standard_normal((5, 5))
        op = PartitionedOperator((z + z.T) / 2, [1, 2])
        t = np.array([[0.0, 1.0], [1.0, 0.0]])
        with pytest.raises(NotLatentSymmetry):
            lift_symmetry(op, t)

    def test_round_trip_recertification(self):
        # lift, extract the subset block, certify again
        for i in range(6):
            inst = planted_instance(11, 3, SYMMETRY_KINDS[i % 3], seed=300 + i)
            op = inst.operator
            lift = lift_symmetry(op, inst.candidate)
            q = lift.float_matrix()
            idx = [k - 1 for k in op.subset]
            extracted = q[np.ix_(idx, idx)]
            assert check_latent_symmetry(op, extracted).verdict

    def test_spectrum_containment(self):
        inst = planted_instance(13, 4, "diag-unitary", seed=11)
        lift = lift_symmetry(inst.operator, inst.candidate)
        q = lift.float_matrix()
        qeigs = np.linalg.eigvals(q)
        targets = np.array(
            [g.value for g in lift.bundle.groups]
            + ([0.0] if lift.bundle.complement_dimension else [])
        )
        for z in qeigs:
            assert np.min(np.abs(targets - z)) < 1e-8

    def test_exact_lift_falls_back_to_numeric(self):
        # rational operator, certified candidate with irrational spectrum
        h = Matrix([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
        op = PartitionedOperator(h, [1, 2])
        rot = np.array([[0.0, -1.0], [1.0, 0.0]])  # eigenvalues +-i
        cert = check_latent_symmetry(op.to_numeric(), rot)
        if cert.verdict:
            lift = lift_symmetry(op, Matrix([[0, -1], [1, 0]]))
            assert lift.mode == "float"

    def test_exact_lift_identity_candidate(self):
        h = Matrix([[0, 1, 1], [1, 0, 0], [1, 0, 0]])
        op = PartitionedOperator(h, [2, 3])
        lift = lift_symmetry(op, Matrix.identity(2))
        assert lift.mode == "exact"
        q = lift.matrix
        assert q @ op.matrix == op.matrix @ q
        assert q.submatrix([1, 2], [1, 2]) == Matrix.identity(2)


class TestVerifyLift:
    def test_replay_of_lift_output(self):
        inst = planted_instance(12, 4, "involution", seed=21)
        lift = lift_symmetry(inst.operator, inst.candidate)
        rep = verify_lift(inst.operator, inst.candidate, lift.matrix)
        assert rep.verdict
        assert max(rep.residuals.values()) <= 1e-9
        assert rep.spectrum_distance is not None and rep.spectrum_distance < 1e-8

    def test_perturbed_extension_flagged(self):
        rng = np.random.default_rng(4)
        inst = planted_instance(10, 3, "involution", seed=22)
        lift = lift_symmetry(inst.operator, inst.candidate)
        q = lift.float_matrix() + 1e-3 * rng.standard_normal((10, 10))
        rep = verify_lift(inst.operator, inst.candidate, q)
        assert not rep.verdict
        assert rep.residuals["commutation"] > 1e-5

    def test_planted_witness_passes(self):
        # the planted matrix itself satisfies every postcondition
        for i in range(6):
            inst = planted_instance(12, 4, SYMMETRY_KINDS[i % 3], seed=500 + i)
            rep = verify_lift(inst.operator, inst.candidate, inst.planted)
            assert rep.verdict
            assert max(rep.residuals[k] for k in rep.residuals) <= 1e-9

    def test_eigen_consistency_entries(self):
        inst = planted_instance(9, 3, "involution", seed=31)
        lift = lift_symmetry(inst.operator, inst.candidate)
        rep = verify_lift(inst.operator, inst.candidate, lift.matrix)
        if not rep.degenerate:
            for e in rep.eigen:
                assert e.residual < 1e-9
                assert abs(e.rayleigh - e.matched) < 1e-8
