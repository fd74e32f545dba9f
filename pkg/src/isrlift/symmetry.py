"""Latent-symmetry detection and certification.

A latent symmetry of a partitioned self-adjoint matrix is a normal,
invertible matrix on the retained subset that commutes with every
subset block of the matrix powers (equivalently, with the isospectral
reduction at every admissible shift).  This module certifies candidates
through both routes, computes the full commutant of the power blocks,
scans for cospectral index pairs, and classifies eigenvectors against a
certified symmetry.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import (
    DegenerateSpectrumWarning,
    DimensionMismatch,
    NotSelfAdjoint,
)
from .exact import Matrix, exact_det, nullspace, solve
from .params import CLASSIFY_TOL, DEFAULT_TOL, GROUP_TOL_FACTOR, NULLSPACE_RTOL
from .reduction import PartitionedOperator, _maxabs, isr_exact, isr_eval

__all__ = [
    "SymmetryCandidate",
    "SpectralGroup",
    "Certificate",
    "power_blocks",
    "check_latent_symmetry",
    "check_isr_commutation",
    "sample_shift_points",
    "commutant_basis",
    "find_cospectral_pairs",
    "automorphism_maps",
    "automorphism_extends_swap",
    "eigenvector_dichotomy",
    "DichotomyReport",
]


@dataclass
class SpectralGroup:
    """One distinct eigenvalue of a symmetry with its orthonormal vectors."""

    value: complex
    vectors: np.ndarray  # (dim, multiplicity) orthonormal columns
    projector: Matrix | None = None  # exact spectral projector when available
    exact_value: object = None  # Fraction / GaussianRational when known exactly

    @property
    def multiplicity(self):
        return self.vectors.shape[1]


class SymmetryCandidate:
    """A symmetry candidate with its normality and invertibility witnesses.

    Wraps either an exact `Matrix` or a float/complex ndarray.  Spectral
    groups are attached by the decomposition step of the lifting pipeline.
    """

    def __init__(self, matrix):
        if isinstance(matrix, Matrix):
            if not matrix.is_square:
                raise DimensionMismatch("symmetry candidate must be square")
            self.matrix = matrix
            self.is_exact = True
            self.dim = matrix.rows
            comm = matrix @ matrix.conj_transpose() - matrix.conj_transpose() @ matrix
            self.normality_residual = comm.max_entry_abs()
            self.exactly_normal = all(not x for row in comm.data for x in row)
            det = exact_det(matrix)
            self.exact_det = det
            self.det_witness = abs(complex(det)) if det else 0.0
        else:
            arr = np.array(matrix)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise DimensionMismatch("symmetry candidate must be square")
            arr = arr.astype(np.complex128 if np.iscomplexobj(arr) else np.float64)
            arr.flags.writeable = False
            self.matrix = arr
            self.is_exact = False
            self.dim = arr.shape[0]
            self.normality_residual = _maxabs(arr @ arr.conj().T - arr.conj().T @ arr)
            self.exactly_normal = self.normality_residual == 0.0
            self.exact_det = None
            self.det_witness = abs(np.linalg.det(arr)) if self.dim else 1.0
        self.groups: list[SpectralGroup] | None = None
        self.grouping_tol: float | None = None
        self.provenance: dict = {}

    @classmethod
    def wrap(cls, t):
        return t if isinstance(t, cls) else cls(t)

    def float_matrix(self):
        return self.matrix.to_numpy() if self.is_exact else self.matrix

    def scale(self) -> float:
        if self.is_exact:
            return self.matrix.max_entry_abs()
        return _maxabs(self.matrix)

    def is_normal(self, tol=DEFAULT_TOL) -> bool:
        if self.is_exact:
            return self.exactly_normal
        return self.normality_residual <= tol * (1.0 + self.scale()) ** 2

    def is_invertible(self, tol=DEFAULT_TOL) -> bool:
        if self.is_exact:
            return bool(self.exact_det)
        return self.det_witness > (tol * (1.0 + self.scale())) ** max(self.dim, 1)

    def eigenvalues(self):
        if self.groups is None:
            raise ValueError("candidate has no spectral decomposition attached")
        return [g.value for g in self.groups]

    def __repr__(self):
        kind = "exact" if self.is_exact else "float"
        return f"SymmetryCandidate(dim={self.dim}, {kind})"


@dataclass
class Certificate:
    """Outcome of a commutation check; verdict is true iff the maximum
    residual is zero (exact) or at most the stated tolerance (numeric)."""

    kind: str  # "PowerBlocks" | "SampledISR" | "Commutant" | "Cospectral"
    verdict: bool
    max_residual: float
    tolerance: float
    k_max: int | None = None
    samples: tuple | None = None
    details: dict = field(default_factory=dict)

    def __str__(self):
        state = "certified" if self.verdict else "rejected"
        return (
            f"{self.kind}: {state} (max residual {self.max_residual:.3e}, "
            f"tolerance {self.tolerance:.3e})"
        )


def power_blocks(op: PartitionedOperator, k_max=None):
    """Subset blocks of the matrix powers, k = 0 .. k_max.

    The default k_max = n-1 suffices for all commutation certificates:
    higher powers are linear combinations of the lower ones by the
    Cayley-Hamilton theorem.
    """
    if k_max is None:
        k_max = op.n - 1
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    idx = list(op._idx)
    if op.is_exact:
        blocks = [Matrix.identity(len(idx))]
        power = Matrix.identity(op.n)
        for _ in range(k_max):
            power = power @ op.matrix
            blocks.append(power.submatrix(idx, idx))
        return blocks
    eye = np.eye(op.n, dtype=op.matrix.dtype)
    blocks = [np.eye(len(idx), dtype=op.matrix.dtype)]
    power = eye.copy()
    for _ in range(k_max):
        power = power @ op.matrix
        blocks.append(power[np.ix_(idx, idx)].copy())
    return blocks


def _scaled_power_blocks(op: PartitionedOperator, k_max):
    """Blocks of (H/s)^k with s = max(1, max-norm); keeps residuals scale-sane."""
    num = op.to_numeric()
    s = max(1.0, num.scale())
    idx = list(num._idx)
    base = num.matrix / s
    blocks = []
    power = np.eye(num.n, dtype=base.dtype)
    for _ in range(k_max):
        power = power @ base
        blocks.append(power[np.ix_(idx, idx)].copy())
    return blocks


def check_latent_symmetry(op: PartitionedOperator, cand, k_max=None, tol=DEFAULT_TOL):
    """Power-block commutation certificate for a symmetry candidate.

    Exact inputs require exactly vanishing commutators; numeric inputs are
    checked on the power blocks of the normalized matrix so the tolerance
    does not inflate with the matrix scale.
    """
    cand = SymmetryCandidate.wrap(cand)
    s = len(op.subset)
    if cand.dim != s:
        raise DimensionMismatch(
            f"candidate is {cand.dim}x{cand.dim} but the subset has {s} indices"
        )
    if k_max is None:
        k_max = op.n - 1
    if op.is_exact and cand.is_exact:
        blocks = power_blocks(op, k_max)
        residuals = []
        for b in blocks[1:]:
            comm = b @ cand.matrix - cand.matrix @ b
            residuals.append(comm.max_entry_abs())
        max_res = max(residuals, default=0.0)
        return Certificate(
            kind="PowerBlocks",
            verdict=max_res == 0.0,
            max_residual=max_res,
            tolerance=0.0,
            k_max=k_max,
            details={"mode": "exact", "per_k": residuals},
        )
    t = cand.float_matrix()
    blocks = _scaled_power_blocks(op, k_max)
    residuals = []
    bscale = 0.0
    for b in blocks:
        residuals.append(_maxabs(b @ t - t @ b))
        bscale = max(bscale, _maxabs(b))
    max_res = max(residuals, default=0.0)
    tol_eff = tol * (1.0 + bscale) * (1.0 + _maxabs(t))
    return Certificate(
        kind="PowerBlocks",
        verdict=max_res <= tol_eff,
        max_residual=max_res,
        tolerance=tol_eff,
        k_max=k_max,
        details={"mode": "float", "per_k": residuals},
    )


def sample_shift_points(op: PartitionedOperator, n_samples=10, seed=0):
    """Seeded shift points away from the complement-block spectrum.

    Draws uniformly from a Gershgorin-sized interval, rejecting points
    closer to a complement eigenvalue than a pole-distance floor that is
    halved whenever rejection stalls.
    """
    num = op.to_numeric()
    radius = 1.0 + float(np.max(np.sum(np.abs(num.matrix), axis=1))) if num.n else 1.0
    if len(num.complement):
        poles, _ = kernels.jacobi_eigh(num.complement_block())
    else:
        poles = np.array([])
    rng = np.random.default_rng(seed)
    min_dist = 0.05 * radius
    out = []
    stall = 0
    while len(out) < n_samples:
        lam = float(rng.uniform(-radius, radius))
        if poles.size and float(np.min(np.abs(poles - lam))) < min_dist:
            stall += 1
            if stall >= 50 * max(n_samples, 1):
                min_dist *= 0.5
                stall = 0
            continue
        out.append(lam)
    return out


def check_isr_commutation(
    op: PartitionedOperator, cand, samples=None, n_samples=10, seed=0, tol=DEFAULT_TOL
):
    """Commutation of the candidate with the reduction itself.

    With exact inputs and no explicit samples the commutator is verified
    identically as a rational-function matrix; otherwise the reduction is
    evaluated at the given (or seeded) shift points and the commutator
    residual recorded per point.
    """
    cand = SymmetryCandidate.wrap(cand)
    s = len(op.subset)
    if cand.dim != s:
        raise DimensionMismatch(
            f"candidate is {cand.dim}x{cand.dim} but the subset has {s} indices"
        )
    if op.is_exact and cand.is_exact and samples is None:
        r = isr_exact(op)
        comm = r @ cand.matrix - cand.matrix @ r
        max_res = _ratfun_magnitude(comm)
        return Certificate(
            kind="SampledISR",
            verdict=all(not x for row in comm.data for x in row),
            max_residual=max_res,
            tolerance=0.0,
            samples=(),
            details={"mode": "exact-identity"},
        )
    if samples is None:
        samples = sample_shift_points(op, n_samples=n_samples, seed=seed)
    t = cand.float_matrix()
    residuals = []
    rscale = 0.0
    for lam in samples:
        r = isr_eval(op, lam)
        residuals.append(_maxabs(r @ t - t @ r))
        rscale = max(rscale, _maxabs(r))
    max_res = max(residuals, default=0.0)
    tol_eff = tol * (1.0 + rscale) * (1.0 + _maxabs(t))
    return Certificate(
        kind="SampledISR",
        verdict=max_res <= tol_eff,
        max_residual=max_res,
        tolerance=tol_eff,
        samples=tuple(samples),
        details={"mode": "float", "per_sample": residuals},
    )


def _ratfun_magnitude(comm):
    """Rough size of a rational-function matrix: largest numerator coefficient."""
    from .exact import Poly, RatFun, entry_abs_float

    res = 0.0
    for row in comm.data:
        for f in row:
            if isinstance(f, RatFun):
                coeffs = f.num.coeffs
            elif isinstance(f, Poly):
                coeffs = f.coeffs
            else:
                coeffs = (f,)
            for c in coeffs:
                res = max(res, entry_abs_float(c))
    return res


def _vec_index(i, j, s):
    return i * s + j


def commutant_basis(op: PartitionedOperator, k_max=None, tol=DEFAULT_TOL):
    """Basis of the space of matrices commuting with all power blocks.

    Solves the stacked linear system over all k at once; the returned
    basis always lists the identity first (it always commutes).  Exact
    operators get an exact nullspace; numeric ones use singular-value
    thresholding at NULLSPACE_RTOL.
    """
    s = len(op.subset)
    if k_max is None:
        k_max = op.n - 1
    if op.is_exact:
        blocks = power_blocks(op, k_max)[1:]
        rows = []
        for b in blocks:
            for i in range(s):
                for j in range(s):
                    row = [Fraction(0)] * (s * s)
                    for a in range(s):
                        row[_vec_index(a, j, s)] += b[i, a]
                    for c in range(s):
                        row[_vec_index(i, c, s)] -= b[c, j]
                    rows.append(row)
        ns = nullspace(Matrix(rows)) if rows else [
            tuple(Fraction(1 if k == d else 0) for k in range(s * s)) for d in range(s * s)
        ]
        mats = [Matrix([v[i * s : (i + 1) * s] for i in range(s)]) for v in ns]
        ident = Matrix.identity(s)
        coeffs = solve(
            Matrix([[ns[b][e] for b in range(len(ns))] for e in range(s * s)]),
            [Fraction(1) if i % (s + 1) == 0 else Fraction(0) for i in range(s * s)],
        )
        drop = next(i for i, c in enumerate(coeffs) if c)
        return [ident] + [m for i, m in enumerate(mats) if i != drop]
    blocks = _scaled_power_blocks(op, k_max)
    stacked = np.vstack(
        [np.kron(b, np.eye(s)) - np.kron(np.eye(s), b.T) for b in blocks]
    ) if blocks else np.zeros((1, s * s))
    _, sv, vh = np.linalg.svd(stacked)
    thr = NULLSPACE_RTOL * (sv[0] if sv.size and sv[0] > 0 else 1.0)
    rank = int(np.sum(sv > thr))
    null_rows = vh[rank:].conj()
    v0 = np.eye(s, dtype=null_rows.dtype).reshape(-1) / np.sqrt(s)
    coeffs = null_rows.conj() @ v0
    resid = v0 - null_rows.T @ coeffs
    if float(np.linalg.norm(resid)) > 1e-6:
        raise AssertionError("identity missing from the computed commutant")
    rest = kernels.mgs_rows(v0.reshape(1, -1), null_rows, drop_tol=1e-8)[1:]
    out = [np.eye(s, dtype=float if not np.iscomplexobj(null_rows) else complex)]
    out.extend(m.reshape(s, s).copy() for m in rest)
    return out


def _validate_self_adjoint(h, tol):
    if isinstance(h, Matrix):
        if not h.is_hermitian():
            raise NotSelfAdjoint("matrix is not self-adjoint")
        return h, True
    arr = np.asarray(h)
    arr = arr.astype(np.complex128 if np.iscomplexobj(arr) else np.float64)
    if _maxabs(arr - arr.conj().T) > tol:
        raise NotSelfAdjoint("matrix is not self-adjoint within tolerance")
    return arr, False


def find_cospectral_pairs(h, k_max=None, tol=DEFAULT_TOL):
    """All index pairs whose two-point exchange is a latent symmetry.

    For self-adjoint input this means equal diagonal walk weights
    (H^k)_uu = (H^k)_vv for k = 1..k_max; complex Hermitian input
    additionally requires the off-diagonal entries (H^k)_uv and (H^k)_vu
    to agree (automatic in the real symmetric case).  Pairs are 1-based.
    """
    h, is_exact = _validate_self_adjoint(h, tol)
    n = h.rows if is_exact else h.shape[0]
    if k_max is None:
        k_max = n - 1
    pairs = []
    if is_exact:
        powers = []
        power = Matrix.identity(n)
        for _ in range(k_max):
            power = power @ h
            powers.append(power)
        for u in range(n):
            for v in range(u + 1, n):
                ok = all(p[u, u] == p[v, v] for p in powers) and all(
                    p[u, v] == p[v, u] for p in powers
                )
                if ok:
                    pairs.append((u + 1, v + 1))
        return pairs
    s = max(1.0, _maxabs(h))
    base = h / s
    powers = []
    power = np.eye(n, dtype=base.dtype)
    for _ in range(k_max):
        power = power @ base
        powers.append(power)
    thr = [tol * (1.0 + _maxabs(p)) for p in powers]
    for u in range(n):
        for v in range(u + 1, n):
            ok = all(
                abs(p[u, u] - p[v, v]) <= thr[k] and abs(p[u, v] - p[v, u]) <= thr[k]
                for k, p in enumerate(powers)
            )
            if ok:
                pairs.append((u + 1, v + 1))
    return pairs


def _entries_equal(h, i, j, k, l):
    return h[i, j] == h[k, l]


def _automorphism_search(h, n, seed_map):
    """Backtracking search for a permutation symmetry extending seed_map."""
    perm = [-1] * n
    used = [False] * n
    for a, b in seed_map.items():
        if perm[a] == -1 and not used[b]:
            perm[a] = b
            used[b] = True
        elif perm[a] != b:
            return False
    assigned = [i for i in range(n) if perm[i] != -1]
    for a in assigned:
        for b in assigned:
            if not _entries_equal(h, perm[a], perm[b], a, b):
                return False
    order = [i for i in range(n) if perm[i] == -1]

    def extend(pos):
        if pos == len(order):
            return True
        i = order[pos]
        for c in range(n):
            if used[c]:
                continue
            ok = _entries_equal(h, c, c, i, i)
            if ok:
                for j in range(n):
                    if perm[j] != -1 and not (
                        _entries_equal(h, c, perm[j], i, j)
                        and _entries_equal(h, perm[j], c, j, i)
                    ):
                        ok = False
                        break
            if ok:
                perm[i] = c
                used[c] = True
                if extend(pos + 1):
                    return True
                perm[i] = -1
                used[c] = False
        return False

    return extend(0)


def automorphism_maps(h, u, v):
    """True iff some permutation symmetry of h maps index u to v (1-based)."""
    h, is_exact = _validate_self_adjoint(h, DEFAULT_TOL)
    n = h.rows if is_exact else h.shape[0]
    return _automorphism_search(h, n, {u - 1: v - 1})


def automorphism_extends_swap(h, u, v):
    """True iff some permutation symmetry of h exchanges u and v (1-based)."""
    h, is_exact = _validate_self_adjoint(h, DEFAULT_TOL)
    n = h.rows if is_exact else h.shape[0]
    return _automorphism_search(h, n, {u - 1: v - 1, v - 1: u - 1})


@dataclass
class DichotomyEntry:
    index: int
    value: float
    label: str  # "a": symmetric on the subset, "b": vanishes there, "c": neither
    subset_norm: float
    residual: float | None
    matched: complex | None


@dataclass
class DichotomyReport:
    entries: list
    degenerate: bool
    falsifications: list
    tol: float

    @property
    def all_classified(self):
        return all(e.label in ("a", "b") for e in self.entries)


def eigenvector_dichotomy(op: PartitionedOperator, cand, tol=CLASSIFY_TOL):
    """Classify every eigenvector of the operator against a certified symmetry.

    Each eigenvector either transforms as an eigenvector of the symmetry on
    the retained subset (label "a"), vanishes there (label "b"), or neither
    (label "c") -- the last is a falsification event for certified inputs
    when the spectrum is nondegenerate.  A degenerate spectrum downgrades
    falsification to a warning, since eigenvectors are then non-unique.
    """
    cand = SymmetryCandidate.wrap(cand)
    if cand.groups is None:
        from .lifting import spectral_decompose_normal

        cand = spectral_decompose_normal(cand)
    num = op.to_numeric()
    if cand.dim != len(num.subset):
        raise DimensionMismatch("candidate dimension does not match the subset")
    w, vecs = kernels.jacobi_eigh(num.matrix)
    gaps = np.diff(w)
    degenerate = bool(gaps.size and np.min(gaps) < GROUP_TOL_FACTOR * (1.0 + _maxabs(w)))
    if degenerate:
        warnings.warn(
            "operator spectrum is (numerically) degenerate; falsification disabled",
            DegenerateSpectrumWarning,
            stacklevel=2,
        )
    t = cand.float_matrix()
    tvals = [g.value for g in cand.groups]
    entries = []
    falsifications = []
    idx = list(num._idx)
    for j in range(num.n):
        x = vecs[:, j]
        y = x[idx]
        ny = float(np.linalg.norm(y))
        if ny <= tol:
            entries.append(
                DichotomyEntry(j, float(w[j]), "b", ny, None, None)
            )
            continue
        best = None
        best_t = None
        for tv in tvals:
            res = float(np.linalg.norm(t @ y - tv * y)) / ny
            if best is None or res < best:
                best, best_t = res, tv
        if best <= tol:
            label = "a"
        else:
            label = "c"
            if not degenerate:
                falsifications.append(j)
        entries.append(DichotomyEntry(j, float(w[j]), label, ny, best, best_t))
    return DichotomyReport(entries, degenerate, falsifications, tol)
