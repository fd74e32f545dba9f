"""Shared numeric policy constants.

Values chosen once here so certification, pairing, and verification use a
coherent tolerance story:

- DEFAULT_TOL: certification / verification residual tolerance (relative,
  scale factors applied at the point of use).
- GROUP_TOL_FACTOR: eigenvalue grouping and multiset-pairing tolerance,
  used as GROUP_TOL_FACTOR * (1 + max-norm of the operand).
- RCOND_MIN: reciprocal-condition threshold below which a shifted solve is
  declared singular.
- NULLSPACE_RTOL: singular values below NULLSPACE_RTOL * sigma_max count
  as zero in numeric nullspace computations.
- CLASSIFY_TOL: per-eigenvector classification tolerance.
"""

DEFAULT_TOL = 1e-10
GROUP_TOL_FACTOR = 1e-8
RCOND_MIN = 1e-12
NULLSPACE_RTOL = 1e-10
CLASSIFY_TOL = 1e-8
