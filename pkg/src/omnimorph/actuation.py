"""Actuation regime of the platform from the rank of the full allocation matrix."""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .geometry import allocation_alpha_jacobian, allocation_matrix

RANK_TOL = 1e-9


class ActuationTag(Enum):
    UNDERACTUATED = "underactuated"
    REDUCED_MANIFOLD_5 = "reduced-manifold-5"
    FULLY_ACTUATED = "fully-actuated"
    FULLY_ACTUATED_REDUNDANT = "fully-actuated-redundant"


@dataclass(frozen=True)
class ActuationClass:
    tag: ActuationTag
    rank: int
    singular_values: np.ndarray
    allocation_rank: int


def full_allocation(params, layout, u_w, alpha, basis=None):
    """[A(alpha) | dA/dalpha u_w], the 6x9 sensitivity of the wrench to (u_w, alpha)."""
    F1 = allocation_matrix(params, layout, alpha, basis)
    F2 = allocation_alpha_jacobian(params, layout, alpha, u_w, basis)
    return np.column_stack([F1, F2])


def numerical_rank(M, tol=RANK_TOL):
    """Count singular values above ``tol`` times the largest one."""
    if not 0 < tol < 1:
        raise ValueError("tol must lie in (0, 1)")
    s = np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def classify_actuation(params, layout, alpha, u_w, tol=RANK_TOL):
    u_w = np.asarray(u_w, dtype=float)
    F = full_allocation(params, layout, u_w, alpha)
    s = np.linalg.svd(F, compute_uv=False)
    rank = numerical_rank(F, tol)
    allocation_rank = numerical_rank(F[:, :-1], tol)
    if allocation_rank == 6:
        tag = ActuationTag.FULLY_ACTUATED_REDUNDANT
    elif rank == 6:
        tag = ActuationTag.FULLY_ACTUATED
    elif rank == 5:
        tag = ActuationTag.REDUCED_MANIFOLD_5
    else:
        tag = ActuationTag.UNDERACTUATED
    return ActuationClass(tag=tag, rank=rank, singular_values=s[:6], allocation_rank=allocation_rank)
