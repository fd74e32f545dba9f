"""Constructive lifting of a certified latent symmetry.

Given a certified symmetry of the reduction, this module builds a normal
matrix on the full space that restricts to the symmetry on the retained
subset, vanishes on the coupling blocks, and commutes with the operator.
The construction follows invariant Krylov subspaces seeded by the padded
symmetry eigenvectors; every intermediate geometric fact (orthonormality
of generators, cross-group orthogonality, vanishing of the residual basis
on the subset, block structure, normality, commutation) is re-checked at
runtime and surfaces as a named error when violated.

Exact-mode lifting is available whenever the candidate has an all-rational
spectrum: spectral projectors are then polynomials in the candidate
(Lagrange interpolation), Krylov projectors are rational, and every check
is an exact identity.  Otherwise lifting runs in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import (
    CrossGroupOverlap,
    DimensionMismatch,
    ExactDecompositionUnavailable,
    NotLatentSymmetry,
    NotNormal,
    ResidualNotVanishing,
    SingularSymmetry,
    VerificationFailed,
)
from .exact import Matrix, char_poly, exact_inverse, rational_roots, rref
from .params import DEFAULT_TOL, GROUP_TOL_FACTOR
from .reduction import PartitionedOperator, _maxabs
from .symmetry import (
    Certificate,
    SpectralGroup,
    SymmetryCandidate,
    check_latent_symmetry,
)

__all__ = [
    "spectral_decompose_normal",
    "build_krylov_bundle",
    "lift_symmetry",
    "verify_lift",
    "BundleGroup",
    "KrylovBundle",
    "LiftedSymmetry",
    "LiftReport",
]


# ---------------------------------------------------------------------------
# spectral decomposition of a normal candidate


def _group_values(values, tol):
    """Cluster approximately equal complex values transitively."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    clusters = {}
    for i in range(n):
        clusters.setdefault(find(i), []).append(i)
    return list(clusters.values())


def _decompose_exact(cand: SymmetryCandidate, tol):
    t = cand.matrix
    s = cand.dim
    if not cand.exactly_normal:
        raise NotNormal("exact candidate does not commute with its conjugate transpose")
    if not cand.exact_det:
        raise SingularSymmetry("exact candidate is singular")
    p = char_poly(t)
    roots, rem = rational_roots(p)
    if rem.degree > 0:
        raise ExactDecompositionUnavailable(
            "candidate spectrum is not rational; use numeric lifting"
        )
    distinct = sorted(set(roots))
    if any(r == 0 for r in distinct):
        raise SingularSymmetry("candidate has an exact zero eigenvalue")
    projectors = []
    ident = Matrix.identity(s)
    for ti in distinct:
        pi = ident
        for tj in distinct:
            if tj == ti:
                continue
            pi = (pi @ (t - ident * tj)) * (Fraction(1) / (ti - tj))
        projectors.append(pi)
    total = None
    recon = None
    for ti, pi in zip(distinct, projectors):
        if pi @ pi != pi:
            raise NotNormal("spectral projector is not idempotent (defective candidate)")
        if pi.conj_transpose() != pi:
            raise NotNormal("spectral projector is not self-adjoint")
        total = pi if total is None else total + pi
        term = pi * ti
        recon = term if recon is None else recon + term
    if total != ident or recon != t:
        raise NotNormal("spectral reconstruction does not reproduce the candidate")
    groups = []
    for ti, pi in zip(distinct, projectors):
        d = pi.trace()
        if not isinstance(d, Fraction):  # Gaussian trace of a Hermitian projector
            if d.im != 0:
                raise NotNormal("projector trace is not real")
            d = d.re
        if d.denominator != 1:
            raise NotNormal("projector trace is not an integer")
        cols = pi.to_numpy().T  # projector columns as rows
        vecs = kernels.mgs_rows(None, cols, drop_tol=1e-8)
        if vecs.shape[0] != int(d):
            raise VerificationFailed("projector rank", float(vecs.shape[0]), float(d))
        groups.append(
            SpectralGroup(
                value=complex(float(ti), 0.0),
                vectors=vecs.T.copy(),
                projector=pi,
                exact_value=ti,
            )
        )
    groups.sort(key=lambda g: (g.value.real, g.value.imag))
    out = SymmetryCandidate(t)
    out.groups = groups
    out.grouping_tol = 0.0
    out.provenance = {"mode": "exact", "eigenvalues": [str(r) for r in distinct]}
    return out


def _decompose_numeric(cand: SymmetryCandidate, tol, seed):
    t = cand.float_matrix()
    s = cand.dim
    scale = 1.0 + _maxabs(t)
    if cand.normality_residual > tol * scale * scale:
        raise NotNormal(
            f"normality residual {cand.normality_residual:.3e} exceeds "
            f"{tol * scale * scale:.3e}"
        )
    herm = _maxabs(t - t.conj().T)
    theta = None
    attempts = 0
    if herm == 0.0:
        tvals_raw, u = kernels.jacobi_eigh(t)
        tvals_raw = tvals_raw.astype(np.complex128)
    else:
        h1 = (t + t.conj().T) / 2.0
        h2 = (t - t.conj().T) / 2.0j
        rng = np.random.default_rng(seed)
        u = None
        for attempts in range(1, 13):
            theta = float(rng.uniform(0.0, np.pi))
            m = np.cos(theta) * h1 + np.sin(theta) * h2
            _, u_try = kernels.jacobi_eigh(m)
            d = u_try.conj().T @ t @ u_try
            off = _maxabs(d - np.diag(np.diagonal(d)))
            if off <= 100.0 * tol * scale:
                u = u_try
                tvals_raw = np.diagonal(d).copy()
                break
        if u is None:
            raise NotNormal(
                "joint diagonalization failed; candidate is likely not normal"
            )
    group_tol = GROUP_TOL_FACTOR * scale
    clusters = _group_values(list(tvals_raw), group_tol)
    groups = []
    for members in clusters:
        val = complex(np.mean([tvals_raw[i] for i in members]))
        vecs = u[:, members].copy()
        groups.append(SpectralGroup(value=val, vectors=vecs))
    groups.sort(key=lambda g: (g.value.real, g.value.imag))
    if min(abs(g.value) for g in groups) <= tol * scale:
        raise SingularSymmetry("candidate has a (numerically) zero eigenvalue")
    recon = np.zeros((s, s), dtype=np.complex128)
    for g in groups:
        recon += g.value * (g.vectors @ g.vectors.conj().T)
    err = _maxabs(recon - t)
    if err > 100.0 * tol * scale:
        raise VerificationFailed("spectral reconstruction", err, 100.0 * tol * scale)
    out = SymmetryCandidate(t)
    out.groups = groups
    out.grouping_tol = group_tol
    out.provenance = {
        "mode": "float",
        "seed": seed,
        "theta": theta,
        "attempts": attempts,
    }
    return out


def spectral_decompose_normal(cand, tol=DEFAULT_TOL, seed=0):
    """Grouped spectral decomposition of a normal, invertible candidate.

    Exact candidates with an all-rational spectrum get exact spectral
    projectors (polynomials in the candidate); everything else is handled
    by joint diagonalization of the commuting self-adjoint parts through a
    seeded random real combination and the Jacobi scheme.
    """
    cand = SymmetryCandidate.wrap(cand)
    if cand.groups is not None:
        return cand
    if cand.is_exact:
        return _decompose_exact(cand, tol)
    return _decompose_numeric(cand, tol, seed)


# ---------------------------------------------------------------------------
# Krylov bundle construction


@dataclass
class BundleGroup:
    """Invariant subspace attached to one symmetry eigenvalue.

    `basis` holds orthonormal columns, the padded generators first; the
    remaining columns are the residual basis, which must vanish on the
    retained subset.
    """

    value: complex
    generators: np.ndarray
    basis: np.ndarray

    @property
    def multiplicity(self):
        return self.generators.shape[1]

    @property
    def dimension(self):
        return self.basis.shape[1]

    @property
    def residual_count(self):
        return self.dimension - self.multiplicity

    @property
    def residual_vectors(self):
        return self.basis[:, self.multiplicity :]


@dataclass
class KrylovBundle:
    """All invariant subspaces plus the untouched orthogonal complement."""

    groups: list
    complement: np.ndarray
    n: int

    @property
    def total_dimension(self):
        return sum(g.dimension for g in self.groups)

    @property
    def complement_dimension(self):
        return self.complement.shape[1]

    def dimension_summary(self):
        return {
            "multiplicities": [g.multiplicity for g in self.groups],
            "dimensions": [g.dimension for g in self.groups],
            "residual_counts": [g.residual_count for g in self.groups],
            "complement_dimension": self.complement_dimension,
        }


def build_krylov_bundle(op: PartitionedOperator, cand, tol=DEFAULT_TOL) -> KrylovBundle:
    """Orthonormal bases of the invariant subspaces seeded by the candidate.

    For each distinct symmetry eigenvalue, the padded eigenvectors seed
    depth n-1 Krylov chains; modified Gram-Schmidt with one
    re-orthogonalization pass decides numerical rank at `tol` (chain
    iterates are normalized before orthogonalization).  Cross-group
    orthogonality and the vanishing of residual vectors on the subset are
    verified, not assumed.
    """
    cand = spectral_decompose_normal(cand, tol=tol)
    num = op.to_numeric()
    n = num.n
    idx = list(num._idx)
    if cand.dim != len(idx):
        raise DimensionMismatch("candidate dimension does not match the subset")
    cplx = np.iscomplexobj(num.matrix) or any(
        np.iscomplexobj(g.vectors) for g in cand.groups
    )
    dtype = np.complex128 if cplx else np.float64
    h = num.matrix.astype(dtype)
    groups = []
    for g in cand.groups:
        d = g.multiplicity
        gen = np.zeros((n, d), dtype=dtype)
        gen[idx, :] = g.vectors
        ortho_err = _maxabs(gen.conj().T @ gen - np.eye(d))
        if ortho_err > 100.0 * tol:
            raise VerificationFailed("generator orthonormality", ortho_err, 100.0 * tol)
        # block Krylov expansion: only orthonormalized frontier vectors are
        # multiplied again, so rounding noise cannot be amplified out of the
        # invariant subspace by repeated powers
        basis_rows = np.ascontiguousarray(gen.T)
        frontier = list(range(d))
        for _ in range(n - 1):
            new_frontier = []
            for row in frontier:
                v = h @ basis_rows[row]
                nv = float(np.linalg.norm(v))
                if nv < 1e-280:
                    continue
                grown = kernels.mgs_rows(basis_rows, (v / nv).reshape(1, -1), drop_tol=tol)
                if grown.shape[0] > basis_rows.shape[0]:
                    basis_rows = grown
                    new_frontier.append(basis_rows.shape[0] - 1)
            frontier = new_frontier
            if not frontier:
                break
        basis = np.ascontiguousarray(basis_rows.T)
        groups.append(BundleGroup(value=g.value, generators=gen, basis=basis))
    # cross-group orthogonality is a theorem for certified candidates; check it
    for a in range(len(groups)):
        for b in range(a + 1, len(groups)):
            overlap = _maxabs(groups[a].basis.conj().T @ groups[b].basis)
            if overlap > tol * 100.0:
                raise CrossGroupOverlap(
                    f"invariant subspaces for eigenvalues {groups[a].value:.6g} and "
                    f"{groups[b].value:.6g} overlap with inner product {overlap:.3e}"
                )
    # residual basis vectors must vanish on the retained subset
    for g in groups:
        res = g.residual_vectors
        if res.shape[1]:
            worst = float(np.max(np.linalg.norm(res[idx, :], axis=0)))
            if worst > tol * 100.0:
                raise ResidualNotVanishing(
                    f"residual vector retains subset mass {worst:.3e} "
                    f"for eigenvalue {g.value:.6g}"
                )
    all_rows = (
        np.ascontiguousarray(np.hstack([g.basis for g in groups]).T)
        if groups
        else np.zeros((0, n), dtype=dtype)
    )
    full = kernels.mgs_rows(all_rows, np.eye(n, dtype=dtype), drop_tol=1e-8)
    comp = np.ascontiguousarray(full[all_rows.shape[0] :].T)
    bundle = KrylovBundle(groups=groups, complement=comp, n=n)
    if bundle.total_dimension + bundle.complement_dimension != n:
        raise VerificationFailed(
            "dimension count",
            float(bundle.total_dimension + bundle.complement_dimension),
            float(n),
        )
    return bundle


# ---------------------------------------------------------------------------
# lifting


@dataclass
class LiftedSymmetry:
    """The commuting extension with its provenance and verified residuals."""

    matrix: object  # ndarray, or exact Matrix in exact mode
    bundle: KrylovBundle
    candidate: SymmetryCandidate
    certificate: Certificate
    residuals: dict
    mode: str
    tol: float
    provenance: dict

    def float_matrix(self):
        return self.matrix.to_numpy() if isinstance(self.matrix, Matrix) else self.matrix


_RESIDUAL_KEYS = (
    "commutation",
    "subset_block",
    "coupling_block",
    "coupling_block_t",
    "normality",
)


def _float_residuals(h, t, q, idx, cidx):
    qss = q[np.ix_(idx, idx)]
    return {
        "commutation": _maxabs(q @ h - h @ q),
        "subset_block": _maxabs(qss - t),
        "coupling_block": _maxabs(q[np.ix_(idx, cidx)]) if cidx else 0.0,
        "coupling_block_t": _maxabs(q[np.ix_(cidx, idx)]) if cidx else 0.0,
        "normality": _maxabs(q @ q.conj().T - q.conj().T @ q),
    }


def _krylov_projector_exact(op, pi):
    """Exact orthogonal projector onto the Krylov span of padded projector columns."""
    n = op.n
    idx = op._idx
    s = len(idx)
    padded = []
    for j in range(s):
        col = [Fraction(0)] * n
        for a, i in enumerate(idx):
            col[i] = pi[a, j]
        padded.append(col)
    columns = list(padded)
    current = padded
    for _ in range(n - 1):
        nxt = []
        for col in current:
            vec = [
                sum((op.matrix[i, k] * col[k] for k in range(n) if col[k]), Fraction(0))
                for i in range(n)
            ]
            nxt.append(vec)
        columns.extend(nxt)
        current = nxt
    # select independent columns by exact row reduction of the transpose
    cand_matrix = Matrix(columns)  # rows are candidate vectors
    _, pivots = rref(cand_matrix.transpose())
    chosen = [columns[p] for p in pivots]
    if not chosen:
        return Matrix.zeros(n, n), 0
    w = Matrix(chosen).transpose()  # n x rank
    gram = w.conj_transpose() @ w
    proj = (w @ exact_inverse(gram)) @ w.conj_transpose()
    return proj, len(chosen)


def _exact_lift(op, cand_dec, certificate, tol, seed):
    t = cand_dec.matrix
    n = op.n
    idx = list(op._idx)
    cidx = list(op._cidx)
    projs = []
    dims = []
    for g in cand_dec.groups:
        proj, dim = _krylov_projector_exact(op, g.projector)
        projs.append(proj)
        dims.append(dim)
    # pairwise products must vanish exactly (cross-group orthogonality)
    for a in range(len(projs)):
        for b in range(a + 1, len(projs)):
            prod = projs[a] @ projs[b]
            if any(x for row in prod.data for x in row):
                raise CrossGroupOverlap(
                    "exact Krylov projectors of distinct eigenvalues overlap"
                )
    q = None
    for g, proj in zip(cand_dec.groups, projs):
        term = proj * g.exact_value
        q = term if q is None else q + term
    if q is None:
        q = Matrix.zeros(n, n)
    # exact verification of every postcondition
    if q @ op.matrix != op.matrix @ q:
        raise VerificationFailed("commutation", 1.0, 0.0)
    if q.submatrix(idx, idx) != t:
        raise VerificationFailed("subset_block", 1.0, 0.0)
    if cidx:
        if any(x for row in q.submatrix(idx, cidx).data for x in row):
            raise ResidualNotVanishing("exact coupling block is nonzero")
        if any(x for row in q.submatrix(cidx, idx).data for x in row):
            raise ResidualNotVanishing("exact coupling block (transpose) is nonzero")
    if q @ q.conj_transpose() != q.conj_transpose() @ q:
        raise VerificationFailed("normality", 1.0, 0.0)
    # per-group projector block structure mirrors the vanishing facts
    for g, proj in zip(cand_dec.groups, projs):
        if proj.submatrix(idx, idx) != g.projector:
            raise ResidualNotVanishing(
                "Krylov projector does not restrict to the spectral projector"
            )
        if cidx and any(x for row in proj.submatrix(idx, cidx).data for x in row):
            raise ResidualNotVanishing("Krylov projector couples subset and complement")
    # numeric bundle for reporting; dimensions must agree with the exact ranks
    bundle = build_krylov_bundle(op.to_numeric(), SymmetryCandidate(t.to_numpy()), tol=tol)
    for g, dim in zip(bundle.groups, dims):
        if g.dimension != dim:
            raise VerificationFailed("bundle dimension", float(g.dimension), float(dim))
    residuals = dict.fromkeys(_RESIDUAL_KEYS, 0.0)
    residuals["group_eigvector"] = 0.0
    residuals["complement_annihilation"] = 0.0
    residuals["spectrum_distance"] = 0.0
    return LiftedSymmetry(
        matrix=q,
        bundle=bundle,
        candidate=cand_dec,
        certificate=certificate,
        residuals=residuals,
        mode="exact",
        tol=tol,
        provenance={"seed": seed, **cand_dec.provenance},
    )


def _numeric_lift(op, cand, certificate, tol, seed):
    num = op.to_numeric()
    cand = SymmetryCandidate.wrap(cand)
    if cand.is_exact:
        cand = SymmetryCandidate(cand.float_matrix())
    cand_dec = spectral_decompose_normal(cand, tol=tol, seed=seed)
    bundle = build_krylov_bundle(num, cand_dec, tol=tol)
    n = num.n
    idx = list(num._idx)
    cidx = list(num._cidx)
    cplx = any(np.iscomplexobj(g.basis) for g in bundle.groups) or np.iscomplexobj(
        num.matrix
    ) or any(abs(g.value.imag) > 0 for g in bundle.groups)
    dtype = np.complex128 if cplx else np.float64
    q = np.zeros((n, n), dtype=dtype)
    for g in bundle.groups:
        basis = g.basis.astype(dtype)
        val = g.value if cplx else g.value.real
        q += val * (basis @ basis.conj().T)
    h = num.matrix.astype(dtype)
    t = cand_dec.float_matrix().astype(dtype)
    residuals = _float_residuals(h, t, q, idx, cidx)
    group_res = 0.0
    for g in bundle.groups:
        val = g.value if cplx else g.value.real
        group_res = max(group_res, _maxabs(q @ g.basis - val * g.basis))
    residuals["group_eigvector"] = group_res
    residuals["complement_annihilation"] = (
        _maxabs(q @ bundle.complement) if bundle.complement_dimension else 0.0
    )
    tvals = [g.value for g in bundle.groups]
    qeigs = np.linalg.eigvals(q)
    targets = np.array(tvals + ([0.0] if bundle.complement_dimension else []), dtype=complex)
    residuals["spectrum_distance"] = (
        float(max(np.min(np.abs(targets - z)) for z in qeigs)) if qeigs.size else 0.0
    )
    scale = (1.0 + num.scale()) * (1.0 + _maxabs(t))
    for key in _RESIDUAL_KEYS + ("group_eigvector", "complement_annihilation"):
        if residuals[key] > tol * scale * 100.0:
            raise VerificationFailed(key, residuals[key], tol * scale * 100.0)
    spec_bound = GROUP_TOL_FACTOR * (1.0 + _maxabs(t))
    if residuals["spectrum_distance"] > spec_bound:
        raise VerificationFailed(
            "spectrum_distance", residuals["spectrum_distance"], spec_bound
        )
    return LiftedSymmetry(
        matrix=q,
        bundle=bundle,
        candidate=cand_dec,
        certificate=certificate,
        residuals=residuals,
        mode="float",
        tol=tol,
        provenance={"seed": seed, **cand_dec.provenance},
    )


def lift_symmetry(op: PartitionedOperator, cand, tol=DEFAULT_TOL, seed=0, certificate=None):
    """Construct the commuting extension of a certified latent symmetry.

    Runs the power-block certificate first (unless one is supplied), then
    the spectral decomposition, the Krylov bundle, the assembly, and the
    full verification.  Exact operators with rational-spectrum candidates
    are lifted exactly; otherwise the construction is numeric.
    """
    cand = SymmetryCandidate.wrap(cand)
    if certificate is None:
        certificate = check_latent_symmetry(op, cand, tol=tol)
    if not certificate.verdict:
        raise NotLatentSymmetry(
            f"candidate fails the power-block certificate "
            f"(max residual {certificate.max_residual:.3e})"
        )
    if op.is_exact and cand.is_exact:
        try:
            cand_dec = spectral_decompose_normal(cand, tol=tol, seed=seed)
            return _exact_lift(op, cand_dec, certificate, tol, seed)
        except ExactDecompositionUnavailable:
            pass
    return _numeric_lift(op, cand, certificate, tol, seed)


# ---------------------------------------------------------------------------
# verification of an externally supplied extension


@dataclass
class EigenConsistency:
    value: float
    rayleigh: complex
    residual: float
    matched: complex


@dataclass
class LiftReport:
    """Recomputed residual table for an externally supplied extension."""

    residuals: dict
    tolerance: float
    verdict: bool
    degenerate: bool
    eigen: list
    spectrum_distance: float | None

    def worst(self):
        return max(self.residuals.values()) if self.residuals else 0.0


def verify_lift(op: PartitionedOperator, cand, q, tol=DEFAULT_TOL) -> LiftReport:
    """Re-check all extension postconditions for any supplied matrix.

    Pure report: recomputes the five block/commutation/normality residuals
    plus the simultaneous-diagonalizability consequence (every eigenvector
    of the operator is an eigenvector of the extension, matched against
    the extension's computed spectrum).  Nothing is raised; the verdict
    compares residuals against tol scaled by the input magnitudes.
    """
    cand = SymmetryCandidate.wrap(cand)
    num = op.to_numeric()
    qm = q.to_numpy() if isinstance(q, Matrix) else np.asarray(q)
    if qm.shape != (num.n, num.n):
        raise DimensionMismatch("extension has the wrong shape")
    idx = list(num._idx)
    cidx = list(num._cidx)
    if cand.dim != len(idx):
        raise DimensionMismatch("candidate dimension does not match the subset")
    cplx = (
        np.iscomplexobj(qm)
        or np.iscomplexobj(num.matrix)
        or np.iscomplexobj(cand.float_matrix())
    )
    dtype = np.complex128 if cplx else np.float64
    h = num.matrix.astype(dtype)
    t = cand.float_matrix().astype(dtype)
    qm = qm.astype(dtype)
    residuals = _float_residuals(h, t, qm, idx, cidx)
    scale = (1.0 + num.scale()) * (1.0 + _maxabs(t))
    verdict = all(residuals[k] <= tol * scale * 100.0 for k in _RESIDUAL_KEYS)
    w, vecs = kernels.jacobi_eigh(num.matrix)
    gaps = np.diff(w)
    degenerate = bool(gaps.size and float(np.min(gaps)) < GROUP_TOL_FACTOR * (1.0 + _maxabs(w)))
    qeigs = np.linalg.eigvals(qm) if num.n else np.array([])
    eigen = []
    for j in range(num.n):
        x = vecs[:, j].astype(dtype)
        qx = qm @ x
        mu = complex(np.vdot(x, qx))
        res = float(np.linalg.norm(qx - mu * x))
        matched = complex(qeigs[np.argmin(np.abs(qeigs - mu))]) if qeigs.size else 0.0
        eigen.append(EigenConsistency(float(w[j]), mu, res, matched))
    spectrum_distance = None
    try:
        dec = spectral_decompose_normal(SymmetryCandidate(cand.float_matrix()), tol=tol)
        targets = np.array(
            [g.value for g in dec.groups] + [0.0], dtype=complex
        )
        spectrum_distance = (
            float(max(np.min(np.abs(targets - z)) for z in qeigs)) if qeigs.size else 0.0
        )
    except Exception:
        pass
    return LiftReport(
        residuals=residuals,
        tolerance=tol * scale * 100.0,
        verdict=verdict,
        degenerate=degenerate,
        eigen=eigen,
        spectrum_distance=spectrum_distance,
    )
