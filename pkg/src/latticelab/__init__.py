"""latticelab: a desk-scale laboratory for finite-dimensional Banach lattices.

The package evaluates absolute norms and their duals, produces supporting
functionals and norm-attaining points, runs the constructive
nearest-attaining-pair corrections for positive functionals, and certifies
or refutes the monotonicity-type properties (UM, UMOE, SM, WM, HNAp) on
built-in and user-defined spaces.
"""

from ._kernels import BACKEND as kernel_backend
from .bpb import (Correction, PreconditionError, bpb_pair, positive_bpb_pair,
                  positive_supporting_functional, sm_hnap_correction,
                  umoe_strong_correction)
from .monotonicity import (ModulusCurve, PropertyReport, classify, hnap_check,
                           sm_check, strict_monotonicity_check, um_modulus,
                           umoe_modulus, wm_check)
from .norms import (AttainingPair, Disk, DirectSum, DualOf, FacetNorm,
                    HullOfPieces, Lp, NormSpec, PointSet, PolytopeBall,
                    absolute_check, attaining_point, dual_norm,
                    enumerate_attaining_pairs, is_absolute, norm, norm_batch,
                    supporting_functional)
from .riesz import (as_vector, join, meet, modulus, neg_part, pos_part,
                    project, riesz_identity_check)

__version__ = "0.1.0"

__all__ = [
    "AttainingPair", "Correction", "Disk", "DirectSum", "DualOf", "FacetNorm",
    "HullOfPieces", "Lp", "ModulusCurve", "NormSpec", "PointSet",
    "PolytopeBall", "PreconditionError", "PropertyReport", "absolute_check",
    "as_vector", "attaining_point", "bpb_pair", "classify", "dual_norm",
    "enumerate_attaining_pairs", "hnap_check", "is_absolute", "join",
    "kernel_backend", "meet", "modulus", "neg_part", "norm", "norm_batch",
    "pos_part", "positive_bpb_pair", "positive_supporting_functional",
    "project", "riesz_identity_check", "sm_check", "sm_hnap_correction",
    "strict_monotonicity_check", "supporting_functional", "um_modulus",
    "umoe_modulus", "umoe_strong_correction", "wm_check",
]
