"""Numeric kernel front end: backend selection plus shared conventions.

The compiled core (`isrlift._kernels_cy`, built from Cython) is preferred
when importable; otherwise the pure numpy fallback `isrlift._kernels_py`
is used.  Set ISRLIFT_BACKEND=python or ISRLIFT_BACKEND=compiled to force
a choice.  Both backends implement the same sweep and update order, and
all ordering / phase conventions live here so results are deterministic
for a given install.
"""

import os

import numpy as np

from . import _kernels_py
from .errors import ConvergenceError, DimensionMismatch

try:
    from . import _kernels_cy
except ImportError:  # extension not built; fallback stays available
    _kernels_cy = None

AVAILABLE_BACKENDS = {"python": _kernels_py}
if _kernels_cy is not None:
    AVAILABLE_BACKENDS["compiled"] = _kernels_cy


def _select_default():
    forced = os.environ.get("ISRLIFT_BACKEND", "").strip().lower()
    if forced in ("python", "py", "pure"):
        return "python"
    if forced in ("compiled", "c", "cy", "cython"):
        if _kernels_cy is None:
            raise ImportError(
                "ISRLIFT_BACKEND=compiled requested but the extension is not built"
            )
        return "compiled"
    if forced:
        raise ValueError(f"unknown ISRLIFT_BACKEND value {forced!r}")
    return "compiled" if _kernels_cy is not None else "python"


BACKEND = _select_default()


def _impl(backend):
    if backend is None:
        return AVAILABLE_BACKENDS[BACKEND]
    try:
        return AVAILABLE_BACKENDS[backend]
    except KeyError:
        raise ValueError(f"unknown kernel backend {backend!r}") from None


def jacobi_eigh(a, off_tol=None, max_sweeps=60, backend=None):
    """Eigendecomposition of a self-adjoint matrix by cyclic Jacobi rotations.

    Returns (w, V) with eigenvalues ascending and eigenvector columns
    carrying a deterministic phase (largest-magnitude component real
    positive).  Hermiticity is the caller's responsibility; only the
    upper-triangle-driven rotations assume it.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("jacobi_eigh expects a square matrix")
    n = a.shape[0]
    impl = _impl(backend)
    if np.iscomplexobj(a):
        work = np.array(a, dtype=np.complex128, order="C")
        vecs = np.eye(n, dtype=np.complex128)
        rotate = impl.jacobi_complex
    else:
        work = np.array(a, dtype=np.float64, order="C")
        vecs = np.eye(n, dtype=np.float64)
        rotate = impl.jacobi_real
    if n > 1:
        if off_tol is None:
            off_tol = 1e-15 * max(float(np.linalg.norm(work)), 1e-300)
        sweeps = rotate(work, vecs, float(off_tol), int(max_sweeps))
        if sweeps < 0:
            raise ConvergenceError(
                f"Jacobi sweeps did not converge in {max_sweeps} sweeps (n={n})"
            )
    w = np.real(np.diagonal(work)).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    vecs = np.ascontiguousarray(vecs[:, order])
    for j in range(n):
        col = vecs[:, j]
        i0 = int(np.argmax(np.abs(col)))
        z = col[i0]
        az = abs(z)
        if az > 0.0:
            if np.iscomplexobj(vecs):
                vecs[:, j] = col * (np.conj(z) / az)
            elif z < 0.0:
                vecs[:, j] = -col
    return w, vecs


def mgs_rows(fixed, candidates, drop_tol, backend=None):
    """Modified Gram-Schmidt with one re-orthogonalization pass.

    `fixed` rows (may be None/empty) are taken as an existing orthonormal
    basis and kept verbatim; each candidate row is orthogonalized against
    everything accepted so far and kept iff its residual norm exceeds
    `drop_tol`.  Returns the full orthonormal basis (fixed rows first).
    """
    cand = np.atleast_2d(np.asarray(candidates))
    if fixed is None or (hasattr(fixed, "__len__") and len(fixed) == 0):
        fixed_arr = None
        nfixed = 0
        width = cand.shape[1]
    else:
        fixed_arr = np.atleast_2d(np.asarray(fixed))
        nfixed = fixed_arr.shape[0]
        width = fixed_arr.shape[1]
        if cand.size and cand.shape[1] != width:
            raise DimensionMismatch("candidate rows have wrong length")
    ncand = cand.shape[0] if cand.size else 0
    cplx = np.iscomplexobj(cand) or (fixed_arr is not None and np.iscomplexobj(fixed_arr))
    dtype = np.complex128 if cplx else np.float64
    buf = np.zeros((nfixed + ncand, width), dtype=dtype, order="C")
    if nfixed:
        buf[:nfixed] = fixed_arr
    if ncand:
        buf[nfixed : nfixed + ncand] = cand
    impl = _impl(backend)
    mgs = impl.mgs_complex if cplx else impl.mgs_real
    kept = mgs(buf, nfixed, nfixed + ncand, float(drop_tol))
    return buf[:kept].copy()
