"""Dense linear algebra around the first-order difference operator.

``D`` is the ``m x m`` lower bidiagonal matrix with ones on the diagonal and
minus ones on the subdiagonal, so ``D^{-1}`` is the prefix-sum operator.  All
vectors are indexed along axis 0; 2-D inputs are treated column by column.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg


class SingularOperatorError(np.linalg.LinAlgError):
    """Raised when a normal matrix that must be inverted is (numerically) singular."""


def _check_order(r):
    if int(r) != r or r < 1:
        raise ValueError(f"order must be a positive integer, got {r!r}")
    return int(r)


def materialize_difference(m: int) -> np.ndarray:
    """Return the dense ``m x m`` difference matrix ``D``."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return np.eye(m) - np.eye(m, k=-1)


def apply_dinv_power(v, r: int) -> np.ndarray:
    """Apply ``D^{-r}`` as ``r`` successive prefix sums.

    A prefix sum performs exactly the additions of forward substitution on
    the unit lower bidiagonal system, so results agree bit for bit.
    """
    r = _check_order(r)
    out = np.asarray(v)
    for _ in range(r):
        out = np.cumsum(out, axis=0)
    return out


def apply_dpower(v, r: int) -> np.ndarray:
    """Apply ``D^r`` as ``r`` first differences with an implicit zero before index 1."""
    r = _check_order(r)
    out = np.asarray(v)
    for _ in range(r):
        out = np.diff(out, axis=0, prepend=np.zeros_like(out[:1]))
    return out


def dinv_power_matrix(m: int, r: int) -> np.ndarray:
    """Dense ``D^{-r}`` (real, lower triangular)."""
    return apply_dinv_power(np.eye(m), r)


def dpower_matrix(m: int, r: int) -> np.ndarray:
    """Dense ``D^r`` (real, banded lower triangular)."""
    return apply_dpower(np.eye(m), r)


@dataclass(frozen=True)
class AnalyticSvd:
    """Closed-form SVD of ``D^{-1}``.

    ``singular_values_of_D`` holds ``2 cos(l pi / (2m+1))`` for ``l = 1..m``
    (strictly decreasing).  Column ``l`` of ``V`` is the right singular vector
    of ``D^{-1}`` for its ``l``-th largest singular value, so the leading
    columns are the low-frequency ones.
    """

    m: int
    singular_values_of_D: np.ndarray
    V: np.ndarray

    @cached_property
    def dinv_singular_values(self) -> np.ndarray:
        """Singular values of ``D^{-1}`` in decreasing order."""
        return 1.0 / self.singular_values_of_D[::-1]

    def dinv_singular_value(self, l: int) -> float:
        """The ``l``-th largest singular value of ``D^{-1}`` (1-based)."""
        return float(self.dinv_singular_values[l - 1])

    def low_frequency_basis(self, l: int) -> np.ndarray:
        """``V_l``: the first ``l`` columns of ``V``."""
        if not 1 <= l <= self.m:
            raise ValueError(f"l must lie in [1, {self.m}], got {l}")
        return self.V[:, :l]

    @cached_property
    def left_vectors(self) -> np.ndarray:
        """Left singular vectors of ``D^{-1}``, in the same column order as ``V``.

        Column ``l`` is column ``l`` of ``V`` reversed in time, times ``(-1)^(l+1)``,
        so that ``D^{-1} V = U diag(sigma)`` with positive ``sigma``.
        """
        sign = np.where(np.arange(self.m) % 2 == 0, 1.0, -1.0)
        return self.V[::-1, :] * sign


def analytic_svd_dinv(m: int) -> AnalyticSvd:
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    l = np.arange(1, m + 1)
    sv = 2.0 * np.cos(l * np.pi / (2 * m + 1))
    k = l[:, None]
    # V(k, l) = sqrt(2/(m+1/2)) cos(2 (l-1/2)(k-1/2) pi / (2m+1))
    V = np.sqrt(2.0 / (m + 0.5)) * np.cos(
        2.0 * (l[None, :] - 0.5) * (k - 0.5) * np.pi / (2 * m + 1)
    )
    V.setflags(write=False)
    sv.setflags(write=False)
    return AnalyticSvd(m=m, singular_values_of_D=sv, V=V)


def numeric_svd(M):
    """Thin SVD ``M = U diag(S) V^H`` with ``S`` descending.

    Raises
    ------
    ValueError
        If ``M`` contains NaN or Inf.
    numpy.linalg.LinAlgError
        If LAPACK fails to converge.
    """
    M = np.asarray(M)
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    U, S, Vh = np.linalg.svd(M, full_matrices=False)
    return U, S, Vh.conj().T


def low_frequency_basis(m: int, l: int, r: int = 1) -> np.ndarray:
    """Right singular vectors of ``D^{-r}`` for its ``l`` largest singular values.

    Uses the closed form for ``r = 1`` and a numeric SVD otherwise.
    """
    r = _check_order(r)
    if r == 1:
        return analytic_svd_dinv(m).low_frequency_basis(l)
    if not 1 <= l <= m:
        raise ValueError(f"l must lie in [1, {m}], got {l}")
    _, _, V = numeric_svd(dinv_power_matrix(m, r))
    return V[:, :l]


def dinv_singular_values(m: int, r: int = 1) -> np.ndarray:
    """Singular values of ``D^{-r}``, descending."""
    r = _check_order(r)
    if r == 1:
        return analytic_svd_dinv(m).dinv_singular_values
    return np.linalg.svd(dinv_power_matrix(m, r), compute_uv=False)


def principal_angles(X, Y) -> np.ndarray:
    """Principal angles (radians) between the column spans of ``X`` and ``Y``."""
    return scipy.linalg.subspace_angles(np.asarray(X), np.asarray(Y))
