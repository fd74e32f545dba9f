"""Ground-truth instance generator with a planted commuting extension.

Instances are built backwards: draw a normal block-diagonal matrix with a
prescribed symmetry on the retained subset, then compress a random
self-adjoint matrix through its eigenprojectors.  The result commutes with
the planted matrix by construction, so the subset block is a certified
latent symmetry with a known witness -- the oracle used throughout the
test and acceptance suites.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lifting import spectral_decompose_normal
from .reduction import PartitionedOperator, _maxabs
from .symmetry import SymmetryCandidate

__all__ = ["PlantedInstance", "random_symmetry", "planted_instance", "SYMMETRY_KINDS"]

SYMMETRY_KINDS = ("permutation", "involution", "diag-unitary")


@dataclass
class PlantedInstance:
    operator: PartitionedOperator
    candidate: np.ndarray
    planted: np.ndarray
    kind: str
    seed: int

    @property
    def subset(self):
        return self.operator.subset


def random_symmetry(s, kind, rng):
    """Draw a normal, invertible s x s symmetry of the requested kind."""
    if kind == "permutation":
        perm = rng.permutation(s)
        t = np.zeros((s, s))
        t[perm, np.arange(s)] = 1.0
        return t
    if kind == "involution":
        if s > 1 and rng.random() < 0.5:
            v = rng.standard_normal(s)
            v /= np.linalg.norm(v)
            return np.eye(s) - 2.0 * np.outer(v, v)
        return np.diag(rng.choice([-1.0, 1.0], size=s))
    if kind == "diag-unitary":
        while True:
            phases = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=s))
            gaps = np.diff(np.concatenate([phases, [phases[0] + 2.0 * np.pi]]))
            if s == 1 or float(np.min(gaps)) > 0.2:
                break
        return np.diag(np.exp(1j * phases))
    raise ValueError(f"unknown symmetry kind {kind!r}")


def _random_orthonormal(m, rng, cplx):
    z = rng.standard_normal((m, m))
    if cplx:
        z = z + 1j * rng.standard_normal((m, m))
    q, r = np.linalg.qr(z)
    signs = np.diagonal(r).copy()
    signs = np.where(np.abs(signs) > 0, signs / np.abs(signs), 1.0)
    return q * signs.conj()


def planted_instance(n, s, kind, seed, subset=None, share=0.5):
    """Instance of size n whose subset block of a planted normal matrix is
    the symmetry; the operator is a projector-compressed random
    self-adjoint matrix, hence commutes with the planted matrix.

    `share` is the probability that each complement eigenvalue of the
    planted matrix reuses a symmetry eigenvalue.  Shared eigenvalues merge
    eigenprojectors across the partition, which is what produces coupling
    between the subset and its complement; share=0 gives block-diagonal
    instances, share=1 couples every direction (and generically empties
    the intersection of the operator spectrum with its complement block).
    """
    if not (1 <= s <= n):
        raise ValueError("need 1 <= s <= n")
    rng = np.random.default_rng(seed)
    if subset is None:
        subset = tuple(sorted(rng.choice(np.arange(1, n + 1), size=s, replace=False).tolist()))
    else:
        subset = tuple(subset)
    idx = [i - 1 for i in subset]
    cidx = [i - 1 for i in range(1, n + 1) if i not in set(subset)]
    m = n - s
    t = random_symmetry(s, kind, rng)
    tvals = np.linalg.eigvals(t)
    # complement eigenvalues: reuse symmetry eigenvalues with probability
    # `share`, fresh otherwise
    mu = np.empty(m, dtype=np.complex128)
    for j in range(m):
        if rng.random() < share:
            mu[j] = tvals[rng.integers(len(tvals))]
        else:
            fresh = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
            if np.iscomplexobj(t):
                fresh = fresh * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
            mu[j] = fresh
    cplx = np.iscomplexobj(t) or bool(np.max(np.abs(mu.imag), initial=0.0) > 0)
    if not cplx:
        mu = mu.real.copy()
    # normal complement block with a known eigenbasis
    if m:
        u = _random_orthonormal(m, rng, cplx)
        qbar = (u * mu) @ u.conj().T
    else:
        u = np.zeros((0, 0))
        qbar = np.zeros((0, 0))
    dtype = np.complex128 if cplx else np.float64
    planted = np.zeros((n, n), dtype=dtype)
    planted[np.ix_(idx, idx)] = t
    if m:
        planted[np.ix_(cidx, cidx)] = qbar
    # eigenpairs of the planted matrix, padded to full length
    dec = spectral_decompose_normal(SymmetryCandidate(t), seed=seed)
    values = []
    vectors = []
    for g in dec.groups:
        for col in range(g.multiplicity):
            vec = np.zeros(n, dtype=np.complex128)
            vec[idx] = g.vectors[:, col]
            values.append(complex(g.value))
            vectors.append(vec)
    for j in range(m):
        vec = np.zeros(n, dtype=np.complex128)
        vec[cidx] = u[:, j]
        values.append(complex(mu[j]))
        vectors.append(vec)
    # group equal eigenvalues so the projectors are the true eigenprojectors
    order = sorted(range(n), key=lambda i: (values[i].real, values[i].imag))
    groups = []
    for i in order:
        if groups and abs(values[groups[-1][0]] - values[i]) <= 1e-9:
            groups[-1].append(i)
        else:
            groups.append([i])
    a = rng.standard_normal((n, n))
    if cplx or any(abs(v.imag) > 0 for v in values):
        a = a + 1j * rng.standard_normal((n, n))
    a = (a + a.conj().T) / 2.0
    h = np.zeros((n, n), dtype=np.complex128)
    for members in groups:
        w = np.column_stack([vectors[i] for i in members])
        p = w @ w.conj().T
        h += p @ a @ p
    h = (h + h.conj().T) / 2.0
    if _maxabs(h.imag) <= 1e-13 * (1.0 + _maxabs(h.real)):
        h = np.ascontiguousarray(h.real)
    op = PartitionedOperator(h, subset)
    return PlantedInstance(operator=op, candidate=t, planted=planted, kind=kind, seed=seed)
