"""Isospectral reduction of self-adjoint matrices.

The reduction of a matrix onto an index subset is the subset block plus
the coupling blocks folded through the resolvent of the complement block;
it is computed either exactly (entries become reduced rational functions
of the spectral variable) or numerically at individual evaluation points.
Eigenvalue and eigenvector correspondences between the full and reduced
problems are exposed as checked operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    NotSelfAdjoint,
    PairingAmbiguous,
    SharedEigenvalue,
    SingularShift,
    VerificationFailed,
)
from .exact import (
    GaussianRational,
    Matrix,
    Poly,
    RatFun,
    char_poly,
    exact_det,
    poly_exact_div,
    poly_gcd,
    rational_roots,
)
from .params import DEFAULT_TOL, GROUP_TOL_FACTOR, RCOND_MIN


def _maxabs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def parse_subset(spec, n):
    """Validate a 1-based index subset against dimension n."""
    subset = tuple(int(i) for i in spec)
    if not subset:
        raise ValueError("index subset must be nonempty")
    if any(subset[i] >= subset[i + 1] for i in range(len(subset) - 1)):
        raise ValueError("index subset must be strictly increasing")
    if subset[0] < 1 or subset[-1] > n:
        raise ValueError(f"subset indices must lie in 1..{n}")
    return subset


class PartitionedOperator:
    """A self-adjoint matrix together with a retained index subset.

    The matrix is either an exact `Matrix` (rational or Gaussian-rational
    entries) or a float/complex ndarray; `subset` is 1-based and strictly
    increasing.  Instances are immutable and safe to share.
    """

    def __init__(self, matrix, subset, tol=DEFAULT_TOL):
        if isinstance(matrix, Matrix):
            if not matrix.is_square:
                raise DimensionMismatch("operator matrix must be square")
            if matrix.entry_level() > 1:
                raise TypeError("exact operator entries must be scalars")
            if not matrix.is_hermitian():
                raise NotSelfAdjoint("exact matrix is not self-adjoint")
            self.matrix = matrix
            self.is_exact = True
            self.n = matrix.rows
        else:
            arr = np.array(matrix)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise DimensionMismatch("operator matrix must be square")
            arr = arr.astype(np.complex128 if np.iscomplexobj(arr) else np.float64)
            herm = _maxabs(arr - arr.conj().T)
            if herm > tol:
                raise NotSelfAdjoint(
                    f"matrix deviates from self-adjointness by {herm:.3e} (tol {tol:g})"
                )
            arr.flags.writeable = False
            self.matrix = arr
            self.is_exact = False
            self.n = arr.shape[0]
        self.subset = parse_subset(subset, self.n)
        self.complement = tuple(i for i in range(1, self.n + 1) if i not in set(self.subset))
        self._idx = tuple(i - 1 for i in self.subset)
        self._cidx = tuple(i - 1 for i in self.complement)
        self._numeric = None

    # -- block extraction (stored order preserved) --

    def _sub(self, rows, cols):
        if self.is_exact:
            return self.matrix.submatrix(rows, cols)
        return self.matrix[np.ix_(rows, cols)].copy() if rows and cols else np.zeros(
            (len(rows), len(cols)), dtype=self.matrix.dtype
        )

    def kept_block(self):
        return self._sub(self._idx, self._idx)

    def cross_block(self):
        return self._sub(self._idx, self._cidx)

    def cross_block_t(self):
        return self._sub(self._cidx, self._idx)

    def complement_block(self):
        return self._sub(self._cidx, self._cidx)

    def to_numeric(self) -> "PartitionedOperator":
        """Float twin of an exact operator (identity for numeric ones)."""
        if not self.is_exact:
            return self
        if self._numeric is None:
            self._numeric = PartitionedOperator(self.matrix.to_numpy(), self.subset)
        return self._numeric

    def scale(self) -> float:
        if self.is_exact:
            return self.matrix.max_entry_abs()
        return _maxabs(self.matrix)

    def __repr__(self):
        kind = "exact" if self.is_exact else "float"
        return f"PartitionedOperator(n={self.n}, subset={self.subset}, {kind})"


@dataclass(frozen=True)
class NonlinearEigenpair:
    """Eigenvalue with its reduced eigenvector and optional full vector."""

    value: float
    reduced: np.ndarray
    full: np.ndarray | None = None


def _fl_adjugate(b: Matrix):
    """Faddeev-LeVerrier: adjugate coefficients of (xI - b) and char poly.

    Returns ([M_1 .. M_m], p) with adj(xI - b) = sum_k x^(m-1-k) M_{k+1}
    and p = det(xI - b).
    """
    m = b.rows
    mats = []
    cs = []
    mk = Matrix.identity(m)
    am = b @ mk
    mats.append(mk)
    for k in range(1, m + 1):
        ck = -am.trace() / k
        cs.append(ck)
        if k < m:
            mk = am + Matrix.identity(m) * ck
            am = b @ mk
            mats.append(mk)
    p = Poly(list(reversed(cs)) + [Fraction(1)])
    return mats, p


def isr_exact(op: PartitionedOperator) -> Matrix:
    """Exact isospectral reduction as a matrix of reduced rational functions.

    Every denominator divides the characteristic polynomial of the
    complement block, which is the only pole source of the resolvent.
    """
    if not op.is_exact:
        raise TypeError("isr_exact requires an exact-mode operator")
    hss = op.kept_block()
    m = len(op.complement)
    if m == 0:
        return hss.map(lambda x: RatFun(Poly.constant(x)))
    adj, p = _fl_adjugate(op.complement_block())
    top = op.cross_block()
    bot = op.cross_block_t()
    pieces = [(top @ mk) @ bot for mk in adj]
    s = len(op.subset)
    out = []
    for i in range(s):
        row = []
        for j in range(s):
            num = Poly([pieces[m - 1 - d][i, j] for d in range(m)])
            num = num + Poly.constant(hss[i, j]) * p
            row.append(RatFun(num, p))
        out.append(row)
    return Matrix(out)


def eval_exact_matrix(r: Matrix, x):
    """Evaluate a matrix of rational functions or polynomials at a point.

    Exact points (Fraction / GaussianRational) give an exact matrix; float
    or complex points give an ndarray.
    """
    if isinstance(x, (int, Fraction, GaussianRational)):
        return r.map(lambda f: f(x) if isinstance(f, (RatFun, Poly)) else f)
    vals = [
        [complex(f(x)) if isinstance(f, (RatFun, Poly)) else complex(f) for f in row]
        for row in r.data
    ]
    arr = np.array(vals, dtype=np.complex128)
    if np.max(np.abs(arr.imag)) == 0.0:
        return arr.real.copy()
    return arr


def isr_eval(op: PartitionedOperator, lam, rcond_min=RCOND_MIN):
    """Pointwise numeric reduction at the shift `lam`.

    Solves the shifted complement system; raises SingularShift when the
    reciprocal condition estimate falls below `rcond_min`, signalling that
    `lam` (numerically) belongs to the complement-block spectrum.
    """
    num = op.to_numeric()
    hss = num.kept_block()
    m = len(num.complement)
    if m == 0:
        return hss
    cplx = np.iscomplexobj(num.matrix) or isinstance(lam, complex)
    dtype = np.complex128 if cplx else np.float64
    shift = lam * np.eye(m, dtype=dtype) - num.complement_block().astype(dtype)
    sv = np.linalg.svd(shift, compute_uv=False)
    rc = float(sv[-1] / sv[0]) if sv[0] > 0 else 0.0
    if rc < rcond_min:
        raise SingularShift(lam, rc)
    z = np.linalg.solve(shift, num.cross_block_t().astype(dtype))
    return hss.astype(dtype) + num.cross_block().astype(dtype) @ z


def spectral_identity(op: PartitionedOperator):
    """Exact form of the spectral bookkeeping between H and its reduction.

    Returns (p_full, p_complement, ok) where ok certifies that
    p_complement * det(xI - R(x)), fully reduced, is the polynomial p_full.
    """
    if not op.is_exact:
        raise TypeError("spectral_identity requires an exact-mode operator")
    p_full = char_poly(op.matrix)
    p_comp = char_poly(op.complement_block())
    r = isr_exact(op)
    s = len(op.subset)
    shifted = Matrix(
        [
            [
                RatFun(Poly((0, 1))) - r[i, j] if i == j else -r[i, j]
                for j in range(s)
            ]
            for i in range(s)
        ]
    )
    det = exact_det(shifted)
    if not isinstance(det, RatFun):
        det = RatFun(det)
    prod = det * RatFun(p_comp)
    ok = prod.is_polynomial and prod.num == p_full
    return p_full, p_comp, ok


def _poly_roots_float(p: Poly):
    """All roots of an exact polynomial: rational ones exactly, rest numeric."""
    rat, rem = rational_roots(p)
    roots = [float(r) for r in rat]
    if rem.degree >= 1:
        coeffs = [complex(c) for c in reversed(rem.coeffs)]
        arr = np.roots(np.array(coeffs, dtype=np.complex128))
        scale = max(1.0, float(np.max(np.abs(arr))))
        for z in sorted(arr, key=lambda z: (z.real, z.imag)):
            roots.append(float(z.real) if abs(z.imag) <= 1e-9 * scale else complex(z))
    roots.sort(key=lambda z: (z.real, z.imag) if isinstance(z, complex) else (z, 0.0))
    return roots


def reduced_spectrum(op: PartitionedOperator, pair_tol=None):
    """Eigenvalues of the reduced nonlinear problem as a sorted multiset.

    Exact mode divides the two characteristic polynomials exactly (the
    shared factor is cancelled) and root-finds the quotient; numeric mode
    subtracts the complement-block eigenvalue multiset from the full one
    with tolerance pairing, raising PairingAmbiguous rather than guessing
    when two distinct pairings fit.
    """
    if op.is_exact:
        p_full = char_poly(op.matrix)
        p_comp = char_poly(op.complement_block())
        g = poly_gcd(p_full, p_comp)
        q = poly_exact_div(p_full, g) if g.degree > 0 else p_full
        return _poly_roots_float(q)
    if pair_tol is None:
        pair_tol = GROUP_TOL_FACTOR * (1.0 + op.scale())
    w_full, _ = kernels.jacobi_eigh(op.matrix)
    remaining = list(w_full)
    if len(op.complement):
        w_comp, _ = kernels.jacobi_eigh(op.complement_block())
    else:
        w_comp = np.array([])
    degen_slop = 1e-3 * pair_tol
    for mu in w_comp:
        hits = [(abs(l - mu), i) for i, l in enumerate(remaining) if abs(l - mu) <= pair_tol]
        if not hits:
            continue
        hits.sort()
        vals = [remaining[i] for _, i in hits]
        if len(hits) > 1 and max(vals) - min(vals) > degen_slop:
            raise PairingAmbiguous(float(mu), [float(v) for v in vals], pair_tol)
        del remaining[hits[0][1]]
    return sorted(float(v) for v in remaining)


def _shared_eigenvalue_check(op, lam, tol):
    num = op.to_numeric()
    if not len(num.complement):
        return
    w_comp, _ = kernels.jacobi_eigh(num.complement_block())
    if w_comp.size and float(np.min(np.abs(w_comp - lam))) <= tol:
        raise SharedEigenvalue(
            f"lambda = {lam} lies in the complement-block spectrum within {tol:g}; "
            "the projection correspondence is not guaranteed in this regime"
        )


def eigvec_project(op: PartitionedOperator, lam, x, tol=None) -> NonlinearEigenpair:
    """Project a full eigenpair to the retained subset and check it there."""
    num = op.to_numeric()
    if tol is None:
        tol = GROUP_TOL_FACTOR * (1.0 + num.scale())
    x = np.asarray(x).reshape(-1)
    if x.shape[0] != num.n:
        raise DimensionMismatch("eigenvector length does not match the operator")
    nx = float(np.linalg.norm(x))
    pre = _maxabs(num.matrix @ x - lam * x)
    if nx == 0.0 or pre > tol * (1.0 + abs(lam)) * nx:
        raise ValueError(
            f"(lambda, x) is not an eigenpair within tolerance (residual {pre:.3e})"
        )
    _shared_eigenvalue_check(num, lam, tol)
    y = x[list(num._idx)].copy()
    r = isr_eval(num, lam)
    post = _maxabs(r @ y - lam * y)
    bound = tol * (1.0 + abs(lam) + _maxabs(r)) * max(float(np.linalg.norm(y)), 1e-300)
    if post > bound:
        raise VerificationFailed("reduced eigen-equation", post, bound)
    return NonlinearEigenpair(value=lam, reduced=y, full=x.copy())


def eigvec_reconstruct(op: PartitionedOperator, lam, y, tol=None):
    """Extend a reduced eigenvector to a full one through the shifted solve."""
    num = op.to_numeric()
    if tol is None:
        tol = GROUP_TOL_FACTOR * (1.0 + num.scale())
    y = np.asarray(y).reshape(-1)
    if y.shape[0] != len(num.subset):
        raise DimensionMismatch("reduced vector length does not match the subset")
    r = isr_eval(num, lam)
    pre = _maxabs(r @ y - lam * y)
    ny = float(np.linalg.norm(y))
    if ny == 0.0 or pre > tol * (1.0 + abs(lam) + _maxabs(r)) * ny:
        raise ValueError(
            f"(lambda, y) does not satisfy the reduced equation (residual {pre:.3e})"
        )
    m = len(num.complement)
    cplx = np.iscomplexobj(num.matrix) or isinstance(lam, complex) or np.iscomplexobj(y)
    dtype = np.complex128 if cplx else np.float64
    x = np.zeros(num.n, dtype=dtype)
    x[list(num._idx)] = y
    if m:
        shift = lam * np.eye(m, dtype=dtype) - num.complement_block().astype(dtype)
        sv = np.linalg.svd(shift, compute_uv=False)
        rc = float(sv[-1] / sv[0]) if sv[0] > 0 else 0.0
        if rc < RCOND_MIN:
            raise SingularShift(lam, rc)
        x[list(num._cidx)] = np.linalg.solve(shift, num.cross_block_t().astype(dtype) @ y)
    post = _maxabs(num.matrix @ x - lam * x)
    bound = tol * (1.0 + abs(lam)) * (1.0 + num.scale()) * float(np.linalg.norm(x))
    if post > bound:
        raise VerificationFailed("full eigen-equation", post, bound)
    return x
