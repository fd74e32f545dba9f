"""Isospectral reductions, latent symmetries, and commuting lifts.

Reduce a self-adjoint matrix onto an index subset (exactly, as rational
functions of the spectral variable, or numerically), detect symmetries of
the reduction, and lift any certified symmetry to a normal matrix on the
full space that commutes with the original operator.
"""

__version__ = "0.1.0"

from .errors import IsrError  # noqa: F401
from .exact import (  # noqa: F401
    GaussianRational,
    Matrix,
    Poly,
    RatFun,
    char_poly,
    char_poly_via_det,
    exact_det,
    exact_inverse,
    poly_gcd,
)
from .reduction import (  # noqa: F401
    NonlinearEigenpair,
    PartitionedOperator,
    eigvec_project,
    eigvec_reconstruct,
    isr_eval,
    isr_exact,
    reduced_spectrum,
    spectral_identity,
)
from .symmetry import (  # noqa: F401
    Certificate,
    SymmetryCandidate,
    check_isr_commutation,
    check_latent_symmetry,
    commutant_basis,
    eigenvector_dichotomy,
    find_cospectral_pairs,
    power_blocks,
)
from .lifting import (  # noqa: F401
    KrylovBundle,
    LiftedSymmetry,
    build_krylov_bundle,
    lift_symmetry,
    spectral_decompose_normal,
    verify_lift,
)
from .planted import planted_instance  # noqa: F401
