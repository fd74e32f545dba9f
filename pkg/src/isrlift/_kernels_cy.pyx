# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled core for the hot numeric kernels.

Same algorithms and update order as `_kernels_py`, with explicit C loops:
cyclic Jacobi rotations for self-adjoint matrices and modified
Gram-Schmidt with one re-orthogonalization pass.
"""

from libc.math cimport sqrt, fabs


cdef double _tangent(double tau) noexcept:
    if fabs(tau) > 1e150:
        return 0.5 / tau
    if tau >= 0.0:
        return 1.0 / (tau + sqrt(1.0 + tau * tau))
    return -1.0 / (-tau + sqrt(1.0 + tau * tau))


cdef double _offdiag_real(double[:, ::1] a) noexcept:
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q
    cdef double acc = 0.0
    for p in range(n - 1):
        for q in range(p + 1, n):
            acc += a[p, q] * a[p, q]
    return sqrt(acc)


def jacobi_real(double[:, ::1] a, double[:, ::1] v, double off_tol, int max_sweeps):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, i, sweep
    cdef double h, ah, alpha, tau, t, c, s, sa, colp, colq, skip
    for sweep in range(max_sweeps):
        if _offdiag_real(a) <= off_tol:
            return sweep
        skip = off_tol / (n if n > 0 else 1)
        for p in range(n - 1):
            for q in range(p + 1, n):
                h = a[p, q]
                ah = fabs(h)
                if ah <= skip:
                    continue
                alpha = 1.0 if h >= 0.0 else -1.0
                tau = (a[q, q] - a[p, p]) / (2.0 * ah)
                t = _tangent(tau)
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                sa = s * alpha
                for i in range(n):
                    colp = a[i, p]
                    colq = a[i, q]
                    a[i, p] = c * colp - sa * colq
                    a[i, q] = sa * colp + c * colq
                for i in range(n):
                    colp = a[p, i]
                    colq = a[q, i]
                    a[p, i] = c * colp - sa * colq
                    a[q, i] = sa * colp + c * colq
                for i in range(n):
                    colp = v[i, p]
                    colq = v[i, q]
                    v[i, p] = c * colp - sa * colq
                    v[i, q] = sa * colp + c * colq
                a[p, q] = 0.0
                a[q, p] = 0.0
    if _offdiag_real(a) <= off_tol:
        return max_sweeps
    return -1


cdef double _offdiag_complex(double complex[:, ::1] a) noexcept:
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q
    cdef double acc = 0.0
    cdef double complex z
    for p in range(n - 1):
        for q in range(p + 1, n):
            z = a[p, q]
            acc += z.real * z.real + z.imag * z.imag
    return sqrt(acc)


def jacobi_complex(double complex[:, ::1] a, double complex[:, ::1] v,
                   double off_tol, int max_sweeps):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, i, sweep
    cdef double ah, tau, t, c, s, skip
    cdef double complex h, alpha, sca, sa, colp, colq
    for sweep in range(max_sweeps):
        if _offdiag_complex(a) <= off_tol:
            return sweep
        skip = off_tol / (n if n > 0 else 1)
        for p in range(n - 1):
            for q in range(p + 1, n):
                h = a[p, q]
                ah = sqrt(h.real * h.real + h.imag * h.imag)
                if ah <= skip:
                    continue
                alpha = h / ah
                tau = (a[q, q].real - a[p, p].real) / (2.0 * ah)
                t = _tangent(tau)
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                sca = s * alpha.conjugate()
                sa = s * alpha
                for i in range(n):
                    colp = a[i, p]
                    colq = a[i, q]
                    a[i, p] = c * colp - sca * colq
                    a[i, q] = sa * colp + c * colq
                for i in range(n):
                    colp = a[p, i]
                    colq = a[q, i]
                    a[p, i] = c * colp - sa * colq
                    a[q, i] = sca * colp + c * colq
                for i in range(n):
                    colp = v[i, p]
                    colq = v[i, q]
                    v[i, p] = c * colp - sca * colq
                    v[i, q] = sa * colp + c * colq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    if _offdiag_complex(a) <= off_tol:
        return max_sweeps
    return -1


def mgs_real(double[:, ::1] buf, Py_ssize_t nfixed, Py_ssize_t ntotal, double drop_tol):
    """Orthonormalize candidate rows against fixed rows; compacts in place."""
    cdef Py_ssize_t n = buf.shape[1]
    cdef Py_ssize_t kept = nfixed
    cdef Py_ssize_t idx, b, j, rep
    cdef double coef, nrm
    cdef double[::1] vec
    import numpy as _np
    work = _np.empty(n, dtype=_np.float64)
    vec = work
    for idx in range(nfixed, ntotal):
        for j in range(n):
            vec[j] = buf[idx, j]
        for rep in range(2):
            for b in range(kept):
                coef = 0.0
                for j in range(n):
                    coef += buf[b, j] * vec[j]
                for j in range(n):
                    vec[j] = vec[j] - coef * buf[b, j]
        nrm = 0.0
        for j in range(n):
            nrm += vec[j] * vec[j]
        nrm = sqrt(nrm)
        if nrm > drop_tol:
            for j in range(n):
                buf[kept, j] = vec[j] / nrm
            kept += 1
    return kept


def mgs_complex(double complex[:, ::1] buf, Py_ssize_t nfixed, Py_ssize_t ntotal,
                double drop_tol):
    cdef Py_ssize_t n = buf.shape[1]
    cdef Py_ssize_t kept = nfixed
    cdef Py_ssize_t idx, b, j, rep
    cdef double complex coef
    cdef double nrm
    cdef double complex[::1] vec
    import numpy as _np
    work = _np.empty(n, dtype=_np.complex128)
    vec = work
    for idx in range(nfixed, ntotal):
        for j in range(n):
            vec[j] = buf[idx, j]
        for rep in range(2):
            for b in range(kept):
                coef = 0.0
                for j in range(n):
                    coef = coef + buf[b, j].conjugate() * vec[j]
                for j in range(n):
                    vec[j] = vec[j] - coef * buf[b, j]
        nrm = 0.0
        for j in range(n):
            nrm += vec[j].real * vec[j].real + vec[j].imag * vec[j].imag
        nrm = sqrt(nrm)
        if nrm > drop_tol:
            for j in range(n):
                buf[kept, j] = vec[j] / nrm
            kept += 1
    return kept
