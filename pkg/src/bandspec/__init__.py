"""Spectra and fine spectra of the period-2 lower-triangular triple-band
operator B(r1,r2;s1,s2;t1,t2) on l_p, 1 <= p < inf."""

__version__ = "0.1.0"

from .operator import (  # noqa: E402
    NormBounds,
    OperatorParams,
    ParameterError,
    SpaceIndex,
    TruncatedOperator,
    apply,
    entry,
    norm_bounds_lp,
    truncate,
    validate_params,
)
from .spectrum import (  # noqa: E402
    CharRoots,
    Fine,
    Flag,
    GoldbergState,
    SpectralClassification,
    adjoint_point_spectrum_contains,
    char_roots,
    chi,
    fine_classify,
    goldberg_classify,
    in_spectrum,
    membership_ratio,
    principal_sqrt,
    subdivision_flags,
)

__all__ = [
    "CharRoots", "Fine", "Flag", "GoldbergState", "NormBounds", "OperatorParams",
    "ParameterError", "SpaceIndex", "SpectralClassification", "TruncatedOperator",
    "adjoint_point_spectrum_contains", "apply", "char_roots", "chi", "entry",
    "fine_classify", "goldberg_classify", "in_spectrum", "membership_ratio",
    "norm_bounds_lp", "principal_sqrt", "subdivision_flags", "truncate",
    "validate_params",
]
