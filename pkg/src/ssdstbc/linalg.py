"""Dense complex matrix kernel for small fixed-size weight matrices.

Everything in this package works on square complex matrices of modest size
(n <= 32), stored as dense ``numpy.complex128`` arrays. This module collects
the construction helpers, the Hermitian/unitary/anticommutation predicates
backing the code classifier, the eigenvalue signature of Hermitian-unitary
matrices, and the JSON form used by the CLI.

Constructed weight matrices have entries drawn from {0, +-1, +-j} (possibly
times one real scale factor), so the predicates default to exact comparison
(``tol=0.0``). Spectral and determinant routines are floating point and use
looser tolerances.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

ComplexMatrix = npt.NDArray[np.complex128]

__all__ = [
    "IDENTITY2",
    "SIGMA1",
    "SIGMA2",
    "SIGMA3",
    "anticommutes",
    "commutes",
    "det",
    "hermitian_unitary_signature",
    "is_hermitian",
    "is_skew_hermitian",
    "is_unitary",
    "kron",
    "kron_power",
    "matrix_from_json",
    "matrix_to_json",
]

IDENTITY2: ComplexMatrix = np.eye(2, dtype=np.complex128)

#: First anticommuting generator; real, skew-Hermitian, squares to -I.
SIGMA1: ComplexMatrix = np.array([[0, 1], [-1, 0]], dtype=np.complex128)

#: Second generator; purely imaginary, skew-Hermitian, squares to -I.
SIGMA2: ComplexMatrix = np.array([[0, 1j], [1j, 0]], dtype=np.complex128)

#: Diagonal generator; Hermitian, squares to +I. SIGMA1 @ SIGMA2 == 1j*SIGMA3.
SIGMA3: ComplexMatrix = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def _as_matrix(a: npt.ArrayLike) -> ComplexMatrix:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def _as_square(a: npt.ArrayLike) -> ComplexMatrix:
    m = _as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def _close(a: ComplexMatrix, b: ComplexMatrix, tol: float) -> bool:
    """Entrywise comparison; ``tol=0`` demands exact equality."""
    if tol == 0.0:
        return bool(np.array_equal(a, b))
    return bool(np.allclose(a, b, rtol=0.0, atol=tol))


def kron(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    """Kronecker product of two complex matrices.

    Examples
    --------
    >>> kron(SIGMA1, SIGMA3)[0, 2]
    (1+0j)
    """
    return np.kron(_as_matrix(a), _as_matrix(b))


def kron_power(a: npt.ArrayLike, m: int) -> ComplexMatrix:
    """m-fold Kronecker power of ``a``; ``m=0`` gives the 1x1 identity."""
    if m < 0:
        raise ValueError(f"Kronecker power requires m >= 0, got {m}")
    out: ComplexMatrix = np.array([[1.0 + 0.0j]], dtype=np.complex128)
    base = _as_matrix(a)
    for _ in range(m):
        out = np.kron(out, base)
    return out


def is_hermitian(a: npt.ArrayLike, tol: float = 0.0) -> bool:
    """True iff ``a`` equals its conjugate transpose within ``tol``."""
    m = _as_square(a)
    return _close(m, m.conj().T, tol)


def is_skew_hermitian(a: npt.ArrayLike, tol: float = 0.0) -> bool:
    """True iff ``a`` equals the negative of its conjugate transpose."""
    m = _as_square(a)
    return _close(m, -m.conj().T, tol)


def is_unitary(a: npt.ArrayLike, tol: float = 0.0) -> bool:
    """True iff ``a^H a`` is the identity within ``tol``."""
    m = _as_square(a)
    return _close(m.conj().T @ m, np.eye(m.shape[0], dtype=np.complex128), tol)


def anticommutes(a: npt.ArrayLike, b: npt.ArrayLike, tol: float = 0.0) -> bool:
    """True iff ``ab + ba == 0`` within ``tol``.

    Raises
    ------
    ValueError
        If the matrices are not square with matching dimensions.
    """
    ma, mb = _as_square(a), _as_square(b)
    if ma.shape != mb.shape:
        raise ValueError(f"dimension mismatch: {ma.shape} vs {mb.shape}")
    return _close(ma @ mb, -mb @ ma, tol)


def commutes(a: npt.ArrayLike, b: npt.ArrayLike, tol: float = 0.0) -> bool:
    """True iff ``ab - ba == 0`` within ``tol``."""
    ma, mb = _as_square(a), _as_square(b)
    if ma.shape != mb.shape:
        raise ValueError(f"dimension mismatch: {ma.shape} vs {mb.shape}")
    return _close(ma @ mb, mb @ ma, tol)


def hermitian_unitary_signature(
    a: npt.ArrayLike, tol: float = 1e-9
) -> tuple[int, int]:
    """Count the +1 and -1 eigenvalues of a Hermitian-unitary matrix.

    A matrix that is both Hermitian and unitary has eigenvalues +-1 only;
    the pair ``(m_plus, m_minus)`` with ``m_plus + m_minus == n`` is its
    signature.

    Parameters
    ----------
    a
        Square matrix, Hermitian and unitary within ``tol``.
    tol
        Tolerance for the precondition check and for rounding the computed
        eigenvalues to +-1.

    Returns
    -------
    tuple[int, int]
        ``(m_plus, m_minus)``.

    Raises
    ------
    ValueError
        If ``a`` is not Hermitian-unitary within ``tol``.
    """
    m = _as_square(a)
    if not is_hermitian(m, tol):
        raise ValueError("signature requires a Hermitian matrix")
    eigs = np.linalg.eigvalsh(m)
    if not np.all(np.abs(np.abs(eigs) - 1.0) <= tol):
        raise ValueError("signature requires a unitary matrix (eigenvalues +-1)")
    m_plus = int(np.sum(eigs > 0))
    return m_plus, m.shape[0] - m_plus


def det(a: npt.ArrayLike) -> complex:
    """Determinant via LU factorization with partial pivoting."""
    return complex(np.linalg.det(_as_square(a)))


def matrix_to_json(a: npt.ArrayLike) -> dict:
    """Encode a matrix as ``{"rows", "cols", "entries"}`` with row-major
    ``[re, im]`` entry pairs."""
    m = _as_matrix(a)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def matrix_from_json(obj: dict) -> ComplexMatrix:
    """Decode the matrix JSON form produced by :func:`matrix_to_json`.

    Raises
    ------
    ValueError
        On a malformed object, an entry-count mismatch, or non-finite
        entries.
    """
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = obj["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from exc
    if rows < 1 or cols < 1:
        raise ValueError(f"matrix dimensions must be positive, got {rows}x{cols}")
    if len(entries) != rows * cols:
        raise ValueError(
            f"expected {rows * cols} entries for a {rows}x{cols} matrix, "
            f"got {len(entries)}"
        )
    flat = np.array(
        [complex(re, im) for re, im in entries], dtype=np.complex128
    )
    if not np.all(np.isfinite(flat.real)) or not np.all(np.isfinite(flat.imag)):
        raise ValueError("matrix entries must be finite")
    return flat.reshape(rows, cols)
