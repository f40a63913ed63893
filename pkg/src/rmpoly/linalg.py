"""Dense complex linear algebra kernel.

Conventions used throughout the package:

* Matrices are dense 2-D ``numpy.ndarray`` values, dtype ``complex128``,
  row-major layout.  Entries must be finite; NaN/Inf are rejected at the
  boundary.
* Singular values are always reported in descending order.
* ``svd`` returns factors ``(u, sigma, v)`` with ``x = u @ diag(sigma) @ v``
  -- note ``v`` is the third factor itself, not its conjugate transpose.
* A "spectrum" is a 1-D complex array representing an unordered eigenvalue
  multiset.  No ordering is promised; compare spectra with
  ``match_distance``, never positionally.

The heavy factorizations (SVD, eigenvalues, determinant) delegate to LAPACK
through numpy/scipy.  This module pins the contracts, tolerances, and error
behaviour on top of those kernels; everything above it is pure Python.
"""

from __future__ import annotations

import warnings
from typing import NamedTuple

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from .errors import ConvergenceError, SingularUpdateError, ValidationError
from .tolerances import DEFAULT, Tolerances, rank_cutoff

__all__ = [
    "as_matrix",
    "frobenius_norm",
    "spectral_norm",
    "norm_one",
    "norm_inf",
    "SvdResult",
    "svd",
    "singular_values",
    "eigenvalues",
    "pseudoinverse",
    "woodbury_inverse",
    "log_abs_det",
    "match_distance",
]


def as_matrix(x) -> np.ndarray:
    """Coerce ``x`` to a finite, non-empty complex matrix.

    Raises ``ValidationError`` for wrong dimensionality, empty shapes, or
    non-finite entries.
    """
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim != 2:
        raise ValidationError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if a.size == 0:
        raise ValidationError(f"empty matrix of shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix contains NaN or Inf entries")
    return a


def _square(x) -> np.ndarray:
    a = as_matrix(x)
    if a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    return a


# ---------------------------------------------------------------------------
# Norms


def frobenius_norm(x) -> float:
    """Entrywise 2-norm, equal to the l2 norm of the singular values."""
    return float(np.linalg.norm(as_matrix(x), "fro"))


def spectral_norm(x) -> float:
    """Largest singular value."""
    return float(singular_values(x)[0])


def norm_one(x) -> float:
    """Maximum absolute column sum."""
    return float(np.abs(as_matrix(x)).sum(axis=0).max())


def norm_inf(x) -> float:
    """Maximum absolute row sum."""
    return float(np.abs(as_matrix(x)).sum(axis=1).max())


# ---------------------------------------------------------------------------
# Factorizations


class SvdResult(NamedTuple):
    """Full SVD ``x = u @ diag(sigma) @ v``.

    ``u`` is m x m unitary, ``v`` is n x n unitary, ``sigma`` holds the
    min(m, n) singular values in descending order.
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        m, n = self.u.shape[0], self.v.shape[0]
        s = np.zeros((m, n), dtype=np.complex128)
        r = len(self.sigma)
        s[:r, :r] = np.diag(self.sigma)
        return self.u @ s @ self.v


def svd(x, tol: Tolerances = DEFAULT) -> SvdResult:
    """Full singular value decomposition.

    Tries the divide-and-conquer driver first and falls back to the slower
    but more robust one; if both fail, raises ``ConvergenceError``.
    """
    a = as_matrix(x)
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=True)
    except np.linalg.LinAlgError:
        try:
            u, s, vh = scipy.linalg.svd(a, full_matrices=True,
                                        lapack_driver="gesvd")
        except scipy.linalg.LinAlgError as exc:  # pragma: no cover - rare
            raise ConvergenceError(
                f"SVD did not converge for a {a.shape[0]}x{a.shape[1]} "
                f"matrix (Frobenius norm {np.linalg.norm(a, 'fro'):.3e})",
                residual=None,
            ) from exc
    return SvdResult(u, s, vh)


def singular_values(x) -> np.ndarray:
    """Singular values only, descending.  Cheaper than a full ``svd``."""
    a = as_matrix(x)
    try:
        return np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError:
        try:
            return scipy.linalg.svdvals(a)
        except scipy.linalg.LinAlgError as exc:  # pragma: no cover - rare
            raise ConvergenceError(
                "singular values did not converge", residual=None) from exc


def eigenvalues(x) -> np.ndarray:
    """Spectrum of a square matrix as an unordered 1-D complex array.

    The returned ordering is whatever the QR iteration produced; treat the
    result as a multiset.
    """
    a = _square(x)
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            f"eigensolver did not converge for a {a.shape[0]}x{a.shape[0]} "
            "matrix", residual=None) from exc


def pseudoinverse(x, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Moore-Penrose pseudoinverse via SVD truncation.

    Singular values at or below ``max(m, n) * eps * sigma_1`` are treated as
    exact zeros, so rank-deficient inputs invert only their numerical range.
    """
    a = as_matrix(x)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    cutoff = rank_cutoff(a.shape, float(s[0]) if s.size else 0.0, tol)
    inv = np.where(s > cutoff, 1.0 / np.where(s > cutoff, s, 1.0), 0.0)
    return (vh.conj().T * inv) @ u.conj().T


def woodbury_inverse(a_inverse, u, v, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Inverse of ``A + U @ V`` given ``A^{-1}`` and the low-rank factors.

    Uses the identity
    ``(A + U V)^{-1} = A^{-1} - A^{-1} U (I + V A^{-1} U)^{-1} V A^{-1}``.
    The p x p capacitance matrix ``I + V A^{-1} U`` must be numerically
    invertible; otherwise ``SingularUpdateError`` reports its smallest
    singular value.
    """
    ai = _square(a_inverse)
    uu = as_matrix(u)
    vv = as_matrix(v)
    n = ai.shape[0]
    if uu.shape[0] != n or vv.shape[1] != n or uu.shape[1] != vv.shape[0]:
        raise ValidationError(
            f"nonconformal update: a_inverse {ai.shape}, u {uu.shape}, "
            f"v {vv.shape}")
    p = uu.shape[1]
    small = np.eye(p, dtype=np.complex128) + vv @ ai @ uu
    sv = np.linalg.svd(small, compute_uv=False)
    cutoff = rank_cutoff(small.shape, float(sv[0]), tol)
    if sv[-1] <= cutoff:
        raise SingularUpdateError(
            "capacitance matrix I + V A^-1 U is numerically singular "
            f"(sigma_min = {sv[-1]:.3e}, cutoff = {cutoff:.3e})",
            sigma_min=float(sv[-1]))
    return ai - ai @ uu @ np.linalg.solve(small, vv @ ai)


def log_abs_det(x, method: str = "svd", tol: Tolerances = DEFAULT) -> float:
    """``log |det(x)|`` for a square matrix.

    ``method="svd"`` sums log singular values, which is the numerically
    careful route; ``method="lu"`` uses an LU factorization and is much
    faster on large matrices.  A numerically singular input warns and
    returns ``-inf`` rather than raising: downstream consumers flag infinite
    log-determinant gaps explicitly.
    """
    a = _square(x)
    if method == "svd":
        s = singular_values(a)
        if s[-1] <= rank_cutoff(a.shape, float(s[0]), tol):
            warnings.warn("log_abs_det of a numerically singular matrix; "
                          "returning -inf", RuntimeWarning, stacklevel=2)
            return float("-inf")
        return float(np.sum(np.log(s)))
    if method == "lu":
        sign, logdet = np.linalg.slogdet(a)
        if sign == 0:
            warnings.warn("log_abs_det of an exactly singular matrix; "
                          "returning -inf", RuntimeWarning, stacklevel=2)
            return float("-inf")
        return float(logdet)
    raise ValidationError(f"unknown log_abs_det method {method!r}")


def match_distance(a, b) -> float:
    """Distance between two spectra as unordered multisets.

    Pairs the points of ``a`` with those of ``b`` by a minimum-cost
    assignment on pairwise moduli of differences and returns the largest
    matched distance.  This is the order-insensitive way to compare two
    eigenvalue multisets of equal cardinality.
    """
    pa = np.asarray(a, dtype=np.complex128).ravel()
    pb = np.asarray(b, dtype=np.complex128).ravel()
    if pa.shape != pb.shape:
        raise ValidationError(
            f"spectra have different cardinality: {pa.size} vs {pb.size}")
    if pa.size == 0:
        return 0.0
    cost = np.abs(pa[:, None] - pb[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
