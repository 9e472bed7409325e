"""Symmetric-matrix helpers: validation, spectral decomposition, sampling.

Symmetric matrices are plain ``numpy`` arrays of shape ``(n, n)``.  Every
public entry point passes its input through :func:`sym_matrix`, which checks
symmetry and then copies the upper triangle onto the lower one so that
``A[i, j] == A[j, i]`` holds bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SYMMETRY_TOL = 1e-12


class DimensionError(ValueError):
    """Raised when matrix or vector shapes do not fit an operation."""


class EigenSolverError(RuntimeError):
    pass


def symmetrize_upper(A: np.ndarray) -> np.ndarray:
    """Copy the upper triangle onto the lower one (works on stacks too)."""
    A = np.asarray(A, dtype=float)
    upper = np.triu(A)
    return upper + np.swapaxes(np.triu(A, 1), -1, -2)


def sym_matrix(data, tol: float = SYMMETRY_TOL) -> np.ndarray:
    """Validate ``data`` as a symmetric matrix and return an exact copy.

    The asymmetry test is relative: ``|a_ij - a_ji| <= tol * (1 + max|a|)``.
    """
    A = np.array(data, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimensionError(f"expected a nonempty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    scale = 1.0 + float(np.max(np.abs(A)))
    if np.max(np.abs(A - A.T)) > tol * scale:
        raise ValueError("matrix is not symmetric")
    return symmetrize_upper(A)


def load_matrix(path: str | Path) -> np.ndarray:
    """Read a JSON array-of-arrays matrix literal."""
    with open(path, encoding="utf-8") as fh:
        return sym_matrix(json.load(fh))


def parse_matrix(text: str) -> np.ndarray:
    return sym_matrix(json.loads(text))


def frobenius(A: np.ndarray) -> float:
    return float(np.linalg.norm(A))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in nonincreasing order and the matching orthonormal basis."""

    eigenvalues: np.ndarray
    basis: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.basis * self.eigenvalues) @ self.basis.T


def sym_eigen(A) -> SpectralDecomposition:
    A = sym_matrix(A)
    try:
        w, V = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"symmetric eigensolver did not converge: {exc}") from exc
    order = np.argsort(w)[::-1]
    return SpectralDecomposition(eigenvalues=w[order], basis=V[:, order])


def sym_eigvals(A: np.ndarray) -> np.ndarray:
    """Eigenvalues of a symmetric matrix or a stack of them, nonincreasing."""
    return np.linalg.eigvalsh(A)[..., ::-1]


def random_orthogonal(n: int, seed=None, rng: np.random.Generator | None = None) -> np.ndarray:
    """Haar-distributed orthogonal matrix via QR of a Gaussian matrix.

    The signs of ``diag(R)`` are moved into ``Q`` so the law is exactly Haar.
    """
    if n < 1:
        raise DimensionError("n must be positive")
    rng = rng if rng is not None else np.random.default_rng(seed)
    Z = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def random_spd(n: int, seed=None, spread: float = 1.0, rng: np.random.Generator | None = None) -> np.ndarray:
    """Random positive definite matrix ``Q diag(exp(u)) Q^T``, ``u ~ U[-spread, spread]``."""
    if spread < 0:
        raise ValueError("spread must be nonnegative")
    rng = rng if rng is not None else np.random.default_rng(seed)
    Q = random_orthogonal(n, rng=rng)
    u = rng.uniform(-spread, spread, size=n)
    return symmetrize_upper((Q * np.exp(u)) @ Q.T)


def random_symmetric(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Symmetric matrix with i.i.d. Gaussian upper triangle."""
    return symmetrize_upper(scale * rng.standard_normal((n, n)))


def complex_structure(n: int) -> np.ndarray:
    """The standard complex structure on R^n, pairing coordinates (2i, 2i+1).

    ``J e_{2i} = e_{2i+1}`` and ``J e_{2i+1} = -e_{2i}`` (zero-based).
    """
    if n % 2:
        raise DimensionError(f"complex structure needs even dimension, got n={n}")
    J = np.zeros((n, n))
    for i in range(0, n, 2):
        J[i + 1, i] = 1.0
        J[i, i + 1] = -1.0
    return J


def skew_hermitian_part(A) -> tuple[np.ndarray, np.ndarray]:
    """Return ``A_sk = (A + J A J) / 2`` and its ``n/2`` nonnegative eigenvalues.

    ``A_sk`` is the part of ``A`` that anticommutes with ``J``; its spectrum is
    symmetric about zero, and the nonnegative half is returned nonincreasing.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[-1]
    J = complex_structure(n)
    A_sk = 0.5 * (A + J @ A @ J)
    eig = sym_eigvals(A_sk)
    nonneg = np.maximum(eig[..., : n // 2], 0.0)
    return A_sk, nonneg


def upper_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Row-major upper-triangle index pairs ``(i, j)`` with ``i <= j``.

    This ordering defines the entry variables of symbolic operators.
    """
    return np.triu_indices(n)


def to_entries(A: np.ndarray) -> np.ndarray:
    """Upper-triangle entries ``a_ij`` (``i <= j``) of a matrix or stack."""
    A = np.asarray(A, dtype=float)
    iu = upper_indices(A.shape[-1])
    return A[..., iu[0], iu[1]]


def from_entries(v: np.ndarray, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    iu = upper_indices(n)
    A = np.zeros(v.shape[:-1] + (n, n))
    A[..., iu[0], iu[1]] = v
    A[..., iu[1], iu[0]] = v
    return A


def entry_weights(n: int) -> np.ndarray:
    """Frobenius weights in entry coordinates: 1 on the diagonal, 2 off it.

    ``<A, B> = sum(w * to_entries(A) * to_entries(B))``.
    """
    iu = upper_indices(n)
    return np.where(iu[0] == iu[1], 1.0, 2.0)


def trace_free_basis(n: int) -> list[np.ndarray]:
    """Basis of trace-free S(n): ``E_ii - E_{i+1,i+1}`` and symmetric off-diagonal units."""
    basis = []
    for i in range(n - 1):
        E = np.zeros((n, n))
        E[i, i], E[i + 1, i + 1] = 1.0, -1.0
        basis.append(E)
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n))
            E[i, j] = E[j, i] = 1.0
            basis.append(E)
    return basis


def sqrtm_spd(A: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(A)
    return symmetrize_upper((V * np.sqrt(np.maximum(w, 0.0))) @ V.T)


def expm_sym(S: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(S)
    return symmetrize_upper((V * np.exp(w)) @ V.T)
