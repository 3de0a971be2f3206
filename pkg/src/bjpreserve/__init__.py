"""Strong Birkhoff-James orthogonality on finite-dimensional C*-algebras and its additive preservers."""

from .core import AlgebraElement, AlgebraShape
from .bj import dist_to_right_ideal, mutual_strong_bj, strong_bj, strong_bj_witness
from .preservers import CanonicalForm, RealLinearMap, decompose, from_canonical, verify_mutual_preserver
from .singularity import SemilinearFactorization, factor_singularity_preserver

__all__ = [
    "AlgebraElement",
    "AlgebraShape",
    "CanonicalForm",
    "RealLinearMap",
    "SemilinearFactorization",
    "decompose",
    "dist_to_right_ideal",
    "factor_singularity_preserver",
    "from_canonical",
    "mutual_strong_bj",
    "strong_bj",
    "strong_bj_witness",
    "verify_mutual_preserver",
]
