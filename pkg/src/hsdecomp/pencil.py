"""Generalized Hermitian eigenvalue pencils (B, C) with C positive definite.

Wraps ``scipy.linalg.eigh(B, C)`` and adds the deterministic eigenvector
phase convention used throughout the package. The pencil eigenvalues are
the stationary values of <f, B f> / <f, C f>; in particular the smallest
one is the largest scalar s with B - s C still positive semidefinite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import as_square_matrix, fix_phase, hermitian_part
from .exceptions import NumericalError

__all__ = ["PencilExtremes", "pencil_eigh", "pencil_extremes"]


@dataclass(frozen=True, slots=True)
class PencilExtremes:
    lambda_min: float
    lambda_max: float
    v_min: np.ndarray
    v_max: np.ndarray


def pencil_eigh(b, c) -> tuple[np.ndarray, np.ndarray]:
    """All pencil eigenvalues (ascending) and phase-fixed eigenvectors.

    Both inputs are Hermitized before the solve; ``c`` must be positive
    definite for the generalized problem to be well posed.
    """
    b = hermitian_part(as_square_matrix(b, "b"))
    c = hermitian_part(as_square_matrix(c, "c"))
    try:
        w, v = scipy.linalg.eigh(b, c)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericalError(f"pencil base matrix is not positive definite: {exc}") from exc
    v = np.column_stack([fix_phase(v[:, i]) for i in range(v.shape[1])])
    return w, v


def pencil_extremes(b, c) -> PencilExtremes:
    """Extreme pencil eigenvalues with unit-norm witnesses."""
    w, v = pencil_eigh(b, c)
    v_min = v[:, 0] / np.linalg.norm(v[:, 0])
    v_max = v[:, -1] / np.linalg.norm(v[:, -1])
    return PencilExtremes(float(w[0]), float(w[-1]), v_min, v_max)
