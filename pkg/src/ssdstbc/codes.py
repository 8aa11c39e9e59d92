"""Linear dispersion codes: constructions, normalization, classification.

A linear dispersion code transmits ``K`` complex symbols ``x_i = x_iI +
j*x_iQ`` over ``n`` antennas and ``n`` time slots as

    S = sum_i (x_iI * A_iI + x_iQ * A_iQ)

with fixed ``n x n`` weight matrices. Everything here constructs, rewrites,
or classifies such codes. The classifier evaluates three groups of
conditions:

* unitary weights: every weight matrix is unitary;
* symbol separability: for every pair of distinct symbol indices the mixed
  products ``A^H B + B^H A`` vanish across the in-phase/quadrature,
  in-phase/in-phase, and quadrature/quadrature combinations, which is what
  lets the ML metric split into one term per complex symbol;
* same-symbol orthogonality: the analogous condition between a symbol's own
  in-phase and quadrature weights.

The five taxonomy classes are the cells these booleans carve out: COD,
UW-SSD, PSSD, NU-COD for separable codes, and NOT-SSD otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .clifford import ca_generators, hurwitz_radon_family, reducible_generators
from .linalg import (
    IDENTITY2,
    SIGMA1,
    SIGMA3,
    ComplexMatrix,
    is_hermitian,
    is_unitary,
    kron,
    kron_power,
    matrix_from_json,
    matrix_to_json,
)

__all__ = [
    "CodeClassification",
    "LinearDispersionCode",
    "Violation",
    "alamouti",
    "classify",
    "ciod",
    "code_from_json",
    "code_to_json",
    "cuw_structure",
    "cuw_ssd",
    "instantiate",
    "mcuw_ssd",
    "normalize",
    "tnu_transform",
    "ygt_extend",
]


def _real_collinear(a: ComplexMatrix, b: ComplexMatrix) -> bool:
    """True iff ``b == c*a`` for some real ``c`` (or either is zero)."""
    u = np.concatenate([a.real.ravel(), a.imag.ravel()])
    v = np.concatenate([b.real.ravel(), b.imag.ravel()])
    return int(np.linalg.matrix_rank(np.stack([u, v]))) < 2


@dataclass(frozen=True)
class LinearDispersionCode:
    """An ``n x n`` code in ``K`` complex symbols with fixed weight matrices.

    Attributes
    ----------
    n
        Antenna count and block length.
    K
        Number of complex symbols.
    weights_I, weights_Q
        ``K`` matrices each, ``n x n``; entry ``i`` carries the in-phase
        (resp. quadrature) coordinate of symbol ``i``.
    label
        Free-form name used in JSON exports and reports.
    """

    n: int
    K: int
    weights_I: tuple[ComplexMatrix, ...]
    weights_Q: tuple[ComplexMatrix, ...]
    label: str

    def __post_init__(self) -> None:
        if self.K < 1:
            raise ValueError("a code needs at least one symbol")
        if len(self.weights_I) != self.K or len(self.weights_Q) != self.K:
            raise ValueError(
                f"expected {self.K} in-phase and quadrature weights, got "
                f"{len(self.weights_I)} and {len(self.weights_Q)}"
            )
        frozen_i, frozen_q = [], []
        for name, src, dst in (
            ("weights_I", self.weights_I, frozen_i),
            ("weights_Q", self.weights_Q, frozen_q),
        ):
            for idx, w in enumerate(src):
                m = np.array(w, dtype=np.complex128)
                if m.shape != (self.n, self.n):
                    raise ValueError(
                        f"{name}[{idx}] has shape {m.shape}, expected "
                        f"({self.n}, {self.n})"
                    )
                m.setflags(write=False)
                dst.append(m)
        for idx in range(self.K):
            if _real_collinear(frozen_i[idx], frozen_q[idx]):
                raise ValueError(
                    f"degenerate symbol {idx}: quadrature weight is a real "
                    "multiple of the in-phase weight"
                )
        object.__setattr__(self, "weights_I", tuple(frozen_i))
        object.__setattr__(self, "weights_Q", tuple(frozen_q))

    def instantiate(self, symbols) -> ComplexMatrix:
        """Evaluate the code matrix at the given complex symbols."""
        return instantiate(self, symbols)


class Violation(NamedTuple):
    """One failed classifier condition with its residual Frobenius norm."""

    condition: str
    i: int
    j: int
    residual: float


@dataclass(frozen=True)
class CodeClassification:
    """Classifier verdict with per-condition evidence.

    ``class_name`` is determined by the three booleans: a non-separable
    code is NOT-SSD; separable codes split into COD (unitary, same-symbol
    orthogonal), UW-SSD (unitary, not), NU-COD (non-unitary, same-symbol
    orthogonal), and PSSD (non-unitary, not).
    """

    unitary_weights: bool
    symbol_separable: bool
    same_symbol_orthogonal: bool
    class_name: str
    violations: tuple[Violation, ...]


def _cross_residual(a: ComplexMatrix, b: ComplexMatrix) -> float:
    return float(np.linalg.norm(a.conj().T @ b + b.conj().T @ a))


def classify(code: LinearDispersionCode, tol: float = 0.0) -> CodeClassification:
    """Evaluate the taxonomy conditions and name the class.

    Parameters
    ----------
    code
        Any linear dispersion code.
    tol
        Residuals up to this Frobenius norm count as satisfied. The
        constructions in this package have exact integer or dyadic entries,
        so the default demands exactness; use ~1e-9 for codes that passed
        through floating-point transforms or JSON files.
    """
    violations: list[Violation] = []
    eye = np.eye(code.n, dtype=np.complex128)

    unitary = True
    for tag, mats in (("I", code.weights_I), ("Q", code.weights_Q)):
        for i, w in enumerate(mats):
            res = float(np.linalg.norm(w.conj().T @ w - eye))
            if res > tol:
                unitary = False
                violations.append(Violation(f"unitary-{tag}", i, i, res))

    separable = True
    for i in range(code.K):
        for j in range(code.K):
            if i == j:
                continue
            res = _cross_residual(code.weights_I[i], code.weights_Q[j])
            if res > tol:
                separable = False
                violations.append(Violation("cross-IQ", i, j, res))
            if i < j:
                res = _cross_residual(code.weights_I[i], code.weights_I[j])
                if res > tol:
                    separable = False
                    violations.append(Violation("cross-II", i, j, res))
                res = _cross_residual(code.weights_Q[i], code.weights_Q[j])
                if res > tol:
                    separable = False
                    violations.append(Violation("cross-QQ", i, j, res))

    same_symbol = True
    for i in range(code.K):
        res = _cross_residual(code.weights_I[i], code.weights_Q[i])
        if res > tol:
            same_symbol = False
            violations.append(Violation("same-symbol", i, i, res))

    if not separable:
        name = "NOT-SSD"
    elif unitary:
        name = "COD" if same_symbol else "UW-SSD"
    else:
        name = "NU-COD" if same_symbol else "PSSD"
    return CodeClassification(
        unitary_weights=unitary,
        symbol_separable=separable,
        same_symbol_orthogonal=same_symbol,
        class_name=name,
        violations=tuple(violations),
    )


def instantiate(code: LinearDispersionCode, symbols) -> ComplexMatrix:
    """Sum the weight matrices against the symbol coordinates.

    Raises
    ------
    ValueError
        If ``symbols`` does not hold exactly ``K`` values.
    """
    x = np.asarray(symbols, dtype=np.complex128).ravel()
    if x.shape[0] != code.K:
        raise ValueError(f"expected {code.K} symbols, got {x.shape[0]}")
    s = np.zeros((code.n, code.n), dtype=np.complex128)
    for i in range(code.K):
        s += x[i].real * code.weights_I[i] + x[i].imag * code.weights_Q[i]
    return s


def alamouti() -> LinearDispersionCode:
    """The rate-1 orthogonal design on two antennas.

    Codeword shape ``[[x1, x2], [-conj(x2), conj(x1)]]``, decomposed into
    weight matrices. Classifies as COD.
    """
    lam = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    return LinearDispersionCode(
        n=2,
        K=2,
        weights_I=(IDENTITY2, SIGMA1),
        weights_Q=(1j * SIGMA3, 1j * lam),
        label="alamouti",
    )


def cuw_ssd(a: int) -> LinearDispersionCode:
    """Rate ``a/2^(a-1)`` unitary-weight SSD code on ``n = 2^a`` antennas.

    The in-phase weights are the identity followed by the ``2a-1``
    anticommuting family members; the quadrature weights are all of them
    left-multiplied by the family's Hermitian companion. ``K = 2a``.

    Parameters
    ----------
    a
        Number of tensor factors, ``1 <= a <= 5``.
    """
    fam = hurwitz_radon_family(a)
    n = 2**a
    weights_i = (np.eye(n, dtype=np.complex128), *fam.generators)
    anchor = fam.companion_hermitian
    weights_q = tuple(anchor @ w for w in weights_i)
    return LinearDispersionCode(
        n=n, K=2 * a, weights_I=weights_i, weights_Q=weights_q,
        label=f"cuw-ssd-{n}x{n}",
    )


def mcuw_ssd(a: int) -> LinearDispersionCode:
    """Variant unitary-weight SSD code whose first in-phase weight is the
    diagonal family member rather than the identity.

    The in-phase weights are ``j SIGMA3^(a)`` followed by the family
    members with a SIGMA2-leading word in every slot (the SIGMA1-leading
    first member is skipped). All quadrature weights are the in-phase ones
    left-multiplied by ``I2^(a-1) (x) j SIGMA1``, which anticommutes with
    every in-phase weight. Normalizing recovers the :func:`cuw_ssd`
    structure; see :func:`normalize`.
    """
    gens = ca_generators(a)
    n = 2**a
    weights_i = (gens[-1], *gens[1 : 2 * a])
    mixer = kron(kron_power(IDENTITY2, a - 1), 1j * SIGMA1)
    weights_q = tuple(mixer @ w for w in weights_i)
    return LinearDispersionCode(
        n=n, K=2 * a, weights_I=weights_i, weights_Q=weights_q,
        label=f"mcuw-ssd-{n}x{n}",
    )


def normalize(code: LinearDispersionCode, tol: float = 0.0) -> LinearDispersionCode:
    """Left-multiply every weight by the first in-phase weight's conjugate
    transpose, so the returned code has ``A_1I == I``.

    Requires every weight matrix to be unitary; classification and coding
    gain are unchanged by this rewrite.

    Raises
    ------
    ValueError
        Naming the first non-unitary weight if there is one.
    """
    for tag, mats in (("I", code.weights_I), ("Q", code.weights_Q)):
        for i, w in enumerate(mats):
            if not is_unitary(w, tol):
                raise ValueError(
                    f"normalization requires unitary weights; weights_{tag}[{i}] "
                    "is not unitary"
                )
    left = code.weights_I[0].conj().T
    return LinearDispersionCode(
        n=code.n,
        K=code.K,
        weights_I=tuple(left @ w for w in code.weights_I),
        weights_Q=tuple(left @ w for w in code.weights_Q),
        label=f"normalized-{code.label}",
    )


def cuw_structure(
    code: LinearDispersionCode, tol: float = 0.0
) -> tuple[ComplexMatrix, tuple[int, ...]]:
    """Verify the anchored unitary-weight structure and extract it.

    A code has this structure when, after normalization, the non-identity
    in-phase weights are skew-Hermitian and pairwise anticommute, the first
    quadrature weight is a Hermitian unitary anchor (not a scalar matrix)
    commuting with every in-phase weight, and each quadrature weight equals
    ``+-anchor @ A_iI``. The anchor alone determines the coding gain, and
    the per-index signs feed the closed-form diversity product.

    Returns
    -------
    tuple
        ``(anchor, signs)`` from the normalized code, ``signs[i]`` in
        ``{+1, -1}`` with ``signs[0] == +1``.

    Raises
    ------
    ValueError
        Describing the first structural condition that fails.
    """
    eye = np.eye(code.n, dtype=np.complex128)
    work = code
    if not np.allclose(code.weights_I[0], eye, rtol=0.0, atol=tol):
        work = normalize(code, tol)
    anchor = work.weights_Q[0]
    if not is_hermitian(anchor, tol):
        raise ValueError("anchor (first quadrature weight) is not Hermitian")
    if not is_unitary(anchor, tol):
        raise ValueError("anchor is not unitary")
    for i, w in enumerate(work.weights_I[1:], start=1):
        if not np.allclose(w.conj().T, -w, rtol=0.0, atol=tol):
            raise ValueError(f"in-phase weight {i} is not skew-Hermitian")
        if not np.allclose(w.conj().T @ w, eye, rtol=0.0, atol=tol):
            raise ValueError(f"in-phase weight {i} is not unitary")
        if not np.allclose(anchor @ w, w @ anchor, rtol=0.0, atol=tol):
            raise ValueError(f"anchor does not commute with in-phase weight {i}")
        for j, v in enumerate(work.weights_I[1:i], start=1):
            if not np.allclose(w @ v, -v @ w, rtol=0.0, atol=tol):
                raise ValueError(
                    f"in-phase weights {j} and {i} do not anticommute"
                )
    signs = [1]
    for i in range(1, code.K):
        ref = anchor @ work.weights_I[i]
        if np.allclose(work.weights_Q[i], ref, rtol=0.0, atol=tol):
            signs.append(1)
        elif np.allclose(work.weights_Q[i], -ref, rtol=0.0, atol=tol):
            signs.append(-1)
        else:
            raise ValueError(
                f"quadrature weight {i} is not +-anchor times the in-phase weight"
            )
    return anchor, tuple(signs)


def tnu_transform(
    code: LinearDispersionCode, alpha: float, beta: float
) -> LinearDispersionCode:
    """Mix each symbol's in-phase and quadrature weights.

    Produces the code with ``T_iI = alpha*A_iI + beta*A_iQ`` and ``T_iQ =
    alpha*A_iI - beta*A_iQ``. On an anchored unitary-weight input the
    result is always symbol-separable; it is same-symbol orthogonal (class
    NU-COD) exactly when ``alpha == +-beta`` and PSSD otherwise, since

        T_iI^H T_iQ + T_iQ^H T_iI == 2 (alpha^2 - beta^2) I.

    Parameters
    ----------
    code
        A normalized code passing :func:`cuw_structure`.
    alpha, beta
        Non-zero real mixing coefficients.

    Raises
    ------
    ValueError
        If a coefficient is zero or the input lacks the anchored structure.
    """
    if alpha == 0.0 or beta == 0.0:
        raise ValueError("mixing coefficients must be non-zero")
    cuw_structure(code)
    weights_i = tuple(
        alpha * wi + beta * wq
        for wi, wq in zip(code.weights_I, code.weights_Q)
    )
    weights_q = tuple(
        alpha * wi - beta * wq
        for wi, wq in zip(code.weights_I, code.weights_Q)
    )
    return LinearDispersionCode(
        n=code.n, K=code.K, weights_I=weights_i, weights_Q=weights_q,
        label=f"tnu({alpha:g},{beta:g})-{code.label}",
    )


def ciod(a: int, interleaved: bool = True) -> LinearDispersionCode:
    """Coordinate interleaved design on ``n = 2^a`` antennas, ``K = 2a``.

    Starts from the reducible (identity-tensored) generator family with the
    block-splitting anchor ``SIGMA3 (x) I``, mixes with coefficients
    ``alpha = beta = 1/2``, and then relabels symbols pairwise so that each
    returned weight matrix carries a natural symbol coordinate: for each
    consecutive pair ``(i, i+1)`` the quadrature halves are swapped. The
    result has non-unitary weights supported on complementary diagonal
    blocks and classifies as NU-COD.

    Parameters
    ----------
    a
        Number of tensor factors, ``2 <= a <= 4``.
    interleaved
        When False, return the intermediate mixed code without the pairwise
        relabeling (its symbols are the swapped coordinates).
    """
    if not 2 <= a <= 4:
        raise ValueError(f"block design requires 2 <= a <= 4, got {a}")
    n = 2**a
    gens = reducible_generators(a)
    anchor = kron(SIGMA3, np.eye(2 ** (a - 1), dtype=np.complex128))
    base = LinearDispersionCode(
        n=n, K=2 * a,
        weights_I=tuple(gens),
        weights_Q=tuple(anchor @ g for g in gens),
        label=f"reducible-uw-{n}x{n}",
    )
    mixed = tnu_transform(base, 0.5, 0.5)
    if not interleaved:
        return LinearDispersionCode(
            n=n, K=2 * a, weights_I=mixed.weights_I, weights_Q=mixed.weights_Q,
            label=f"ciod-{n}x{n}-paired",
        )
    wi = list(mixed.weights_I)
    wq = list(mixed.weights_Q)
    out_i: list[ComplexMatrix] = [None] * (2 * a)  # type: ignore[list-item]
    out_q: list[ComplexMatrix] = [None] * (2 * a)  # type: ignore[list-item]
    for i in range(0, 2 * a, 2):
        out_i[i] = wi[i]
        out_q[i] = wq[i + 1]
        out_i[i + 1] = wq[i]
        out_q[i + 1] = wi[i + 1]
    return LinearDispersionCode(
        n=n, K=2 * a, weights_I=tuple(out_i), weights_Q=tuple(out_q),
        label=f"ciod-{n}x{n}",
    )


def ygt_extend(
    od: LinearDispersionCode, tol: float = 0.0
) -> LinearDispersionCode:
    """Double an orthogonal design into a unitary-weight SSD code.

    From an ``(n/2)``-antenna COD with weights ``(Abar_u, Bbar_u)`` this
    builds the ``n``-antenna code with ``2K`` symbols:

    * ``A'_u       = diag(Abar_u, Abar_u)``
    * ``A'_(u+K)   = diag(Bbar_u, Bbar_u)``
    * ``B'_u       = antidiag(-Abar_u, -Abar_u)``
    * ``B'_(u+K)   = antidiag(Bbar_u, Bbar_u)``

    The first quadrature weight is ``j SIGMA2 (x) I``, a Hermitian unitary
    commuting with every in-phase weight, so the result passes
    :func:`cuw_structure` (with per-index signs) and classifies UW-SSD.

    Raises
    ------
    ValueError
        If the input does not classify as COD within ``tol``.
    """
    verdict = classify(od, tol)
    if verdict.class_name != "COD":
        raise ValueError(
            f"doubling requires a COD input, got {verdict.class_name}"
        )
    half = od.n
    z = np.zeros((half, half), dtype=np.complex128)
    diag = lambda m: np.block([[m, z], [z, m]])  # noqa: E731
    anti = lambda m: np.block([[z, m], [m, z]])  # noqa: E731
    weights_i = tuple(
        [diag(m) for m in od.weights_I] + [diag(m) for m in od.weights_Q]
    )
    weights_q = tuple(
        [anti(-m) for m in od.weights_I] + [anti(m) for m in od.weights_Q]
    )
    return LinearDispersionCode(
        n=2 * half, K=2 * od.K, weights_I=weights_i, weights_Q=weights_q,
        label=f"ygt-{2 * half}x{2 * half}",
    )


def code_to_json(code: LinearDispersionCode) -> dict:
    """Encode a code with keys ``{n, K, label, weights_I, weights_Q}``."""
    return {
        "n": code.n,
        "K": code.K,
        "label": code.label,
        "weights_I": [matrix_to_json(w) for w in code.weights_I],
        "weights_Q": [matrix_to_json(w) for w in code.weights_Q],
    }


def code_from_json(obj: dict) -> LinearDispersionCode:
    """Decode :func:`code_to_json` output, validating shapes."""
    try:
        n, k, label = int(obj["n"]), int(obj["K"]), str(obj["label"])
        wi = [matrix_from_json(m) for m in obj["weights_I"]]
        wq = [matrix_from_json(m) for m in obj["weights_Q"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed code JSON: {exc}") from exc
    return LinearDispersionCode(
        n=n, K=k, weights_I=tuple(wi), weights_Q=tuple(wq), label=label
    )
