"""Greedy sparse recovery: orthogonal matching pursuit and its 1-sparse case."""

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

logger = logging.getLogger(__name__)


@dataclass
class SparseEstimate:
    """Support indices, least-squares coefficients and final residual norm."""

    support: npt.NDArray[np.intp]
    coefficients: npt.NDArray[np.complex128]
    residual_norm: float


def omp(y: npt.NDArray[np.complex128], A: npt.NDArray[np.complex128], sparsity: int) -> SparseEstimate:
    """Orthogonal matching pursuit with a known iteration count.

    Runs exactly `sparsity` iterations: pick the column most correlated
    with the residual (ties break to the lowest index, and already chosen
    columns are excluded), refit all chosen columns by least squares,
    update the residual. Columns of A are assumed unit norm, so the raw
    correlations are comparable.
    """
    y = np.asarray(y)
    A = np.asarray(A)
    if A.ndim != 2 or y.shape != (A.shape[0],):
        raise ValueError(f"shape mismatch: y {y.shape}, A {A.shape}")
    if not 1 <= sparsity <= A.shape[1]:
        raise ValueError(f"sparsity must be in [1, {A.shape[1]}], got {sparsity}")

    support: list[int] = []
    coef = np.zeros(0, dtype=complex)
    residual = y.astype(complex)
    for _ in range(sparsity):
        corr = np.abs(A.conj().T @ residual)
        if support:
            corr[support] = -1.0
        support.append(int(np.argmax(corr)))
        chosen = A[:, support]
        coef, _, rank, _ = np.linalg.lstsq(chosen, y, rcond=None)
        if rank < len(support):
            # lstsq already fell back to the minimum-norm solution.
            logger.warning("rank-deficient support %s in omp, using pseudoinverse fit", support)
        residual = y - chosen @ coef
    return SparseEstimate(
        support=np.asarray(support, dtype=np.intp),
        coefficients=np.asarray(coef, dtype=complex),
        residual_norm=float(np.linalg.norm(residual)),
    )


def onecol_matched(y: npt.NDArray[np.complex128], A: npt.NDArray[np.complex128]) -> tuple[int, complex]:
    """Best single-column match of y against the columns of A.

    Returns (index, coefficient) where index is the argmax of |a^H y| over
    columns (lowest index on ties) and the coefficient is the least-squares
    projection of y onto that column. Agrees with omp(y, A, 1). For y = 0
    the first column wins with coefficient 0.
    """
    y = np.asarray(y)
    A = np.asarray(A)
    if A.ndim != 2 or y.shape != (A.shape[0],):
        raise ValueError(f"shape mismatch: y {y.shape}, A {A.shape}")
    corr = A.conj().T @ y
    j = int(np.argmax(np.abs(corr)))
    norm_sq = float(np.real(np.vdot(A[:, j], A[:, j])))
    coef = complex(corr[j] / norm_sq) if norm_sq > 0.0 else 0.0j
    return j, coef
