"""Discovery matrices from independent e-values (U-statistic merging)."""

from ._core import (
    DomainError,
    Matrix,
    SizeError,
    UStatAccumulator,
    ValidationError,
    build_dm,
    classify,
    compare_report,
    ct_discovery_pmatrix,
    dm_to_pmatrix,
    e_from_obs,
    e_to_p,
    gen_study,
    normal_quantile,
    p_from_obs,
    read_matrix_csv,
    rvar,
    simes_p,
    u2_identity,
    u_stat,
)

__all__ = [
    "DomainError",
    "Matrix",
    "SizeError",
    "UStatAccumulator",
    "ValidationError",
    "build_dm",
    "classify",
    "compare_report",
    "ct_discovery_pmatrix",
    "dm_to_pmatrix",
    "e_from_obs",
    "e_to_p",
    "gen_study",
    "normal_quantile",
    "p_from_obs",
    "read_matrix_csv",
    "rvar",
    "simes_p",
    "u2_identity",
    "u_stat",
]
