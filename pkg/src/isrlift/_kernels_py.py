"""Pure numpy fallback implementations of the hot numeric kernels.

Mirrors the compiled core in `_kernels_cy` operation-for-operation: a
cyclic (row-sweep) Jacobi rotation scheme for self-adjoint matrices and
modified Gram-Schmidt with one re-orthogonalization pass.  The wrappers in
`kernels` add input handling, eigenvalue ordering, and phase conventions.
"""

import math

import numpy as np


def _offdiag_norm(a):
    n = a.shape[0]
    acc = 0.0
    for p in range(n - 1):
        row = a[p, p + 1 :]
        acc += float(np.sum(np.abs(row) ** 2))
    return math.sqrt(acc)


def _tangent(tau):
    if abs(tau) > 1e150:
        return 0.5 / tau
    sign = 1.0 if tau >= 0.0 else -1.0
    return sign / (abs(tau) + math.sqrt(1.0 + tau * tau))


def jacobi_real(a, v, off_tol, max_sweeps):
    """Cyclic Jacobi sweeps on a real symmetric matrix, in place.

    Diagonalizes `a` while accumulating rotations into `v`; returns the
    number of sweeps used, or -1 if the sweep budget was exhausted.
    """
    n = a.shape[0]
    for sweep in range(max_sweeps):
        if _offdiag_norm(a) <= off_tol:
            return sweep
        skip = off_tol / max(n, 1)
        for p in range(n - 1):
            for q in range(p + 1, n):
                h = a[p, q]
                ah = abs(h)
                if ah <= skip:
                    continue
                alpha = 1.0 if h >= 0.0 else -1.0
                tau = (a[q, q] - a[p, p]) / (2.0 * ah)
                t = _tangent(tau)
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                sa = s * alpha
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp - sa * colq
                a[:, q] = sa * colp + c * colq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * rowp - sa * rowq
                a[q, :] = sa * rowp + c * rowq
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - sa * vq
                v[:, q] = sa * vp + c * vq
                a[p, q] = 0.0
                a[q, p] = 0.0
    if _offdiag_norm(a) <= off_tol:
        return max_sweeps
    return -1


def jacobi_complex(a, v, off_tol, max_sweeps):
    """Cyclic Jacobi sweeps on a complex Hermitian matrix, in place."""
    n = a.shape[0]
    for sweep in range(max_sweeps):
        if _offdiag_norm(a) <= off_tol:
            return sweep
        skip = off_tol / max(n, 1)
        for p in range(n - 1):
            for q in range(p + 1, n):
                h = a[p, q]
                ah = abs(h)
                if ah <= skip:
                    continue
                alpha = h / ah
                tau = (a[q, q].real - a[p, p].real) / (2.0 * ah)
                t = _tangent(tau)
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                sca = s * alpha.conjugate()
                sa = s * alpha
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp - sca * colq
                a[:, q] = sa * colp + c * colq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * rowp - sa * rowq
                a[q, :] = sca * rowp + c * rowq
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - sca * vq
                v[:, q] = sa * vp + c * vq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    if _offdiag_norm(a) <= off_tol:
        return max_sweeps
    return -1


def _mgs(buf, nfixed, ntotal, drop_tol, complex_mode):
    kept = nfixed
    for idx in range(nfixed, ntotal):
        vec = buf[idx].copy()
        for _ in range(2):  # one re-orthogonalization pass
            for b in range(kept):
                if complex_mode:
                    coef = np.vdot(buf[b], vec)
                else:
                    coef = float(np.dot(buf[b], vec))
                vec = vec - coef * buf[b]
        nrm = float(np.linalg.norm(vec))
        if nrm > drop_tol:
            buf[kept] = vec / nrm
            kept += 1
    return kept


def mgs_real(buf, nfixed, ntotal, drop_tol):
    """Orthonormalize candidate rows against fixed rows; compacts in place."""
    return _mgs(buf, nfixed, ntotal, drop_tol, False)


def mgs_complex(buf, nfixed, ntotal, drop_tol):
    return _mgs(buf, nfixed, ntotal, drop_tol, True)
