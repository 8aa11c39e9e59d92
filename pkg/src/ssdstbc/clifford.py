"""Anticommuting generator families built from 2x2 tensor factors.

Two families feed the code constructions:

* the irreducible family of ``2a+1`` mutually anticommuting skew-Hermitian
  unitaries in dimension ``2^a``, built from Kronecker words in the three
  generator matrices, together with a Hermitian companion that commutes
  with the first ``2a-1`` of them;
* a reducible family in dimension ``2^a`` obtained by tensoring the
  identity onto the irreducible family one dimension down, which leaves
  room for the block-diagonal designs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import IDENTITY2, SIGMA1, SIGMA2, SIGMA3, ComplexMatrix, kron, kron_power

__all__ = [
    "GeneratorFamily",
    "MAX_TENSOR_FACTORS",
    "ca_generators",
    "hurwitz_radon_family",
    "reducible_generators",
]

#: Practical cap on the number of tensor factors (n = 2^a <= 32).
MAX_TENSOR_FACTORS = 5


@dataclass(frozen=True)
class GeneratorFamily:
    """A mutually anticommuting family plus its commuting companion.

    Attributes
    ----------
    a
        Number of tensor factors; the matrices are ``2^a x 2^a``.
    generators
        ``2a-1`` skew-Hermitian unitaries, pairwise anticommuting, each
        squaring to ``-I``.
    companion_hermitian
        A Hermitian unitary, not a scalar multiple of the identity, that
        commutes with every generator.
    """

    a: int
    generators: tuple[ComplexMatrix, ...]
    companion_hermitian: ComplexMatrix


def _check_a(a: int, minimum: int = 1) -> None:
    if not minimum <= a <= MAX_TENSOR_FACTORS:
        raise ValueError(
            f"tensor-factor count must satisfy {minimum} <= a <= "
            f"{MAX_TENSOR_FACTORS}, got {a}"
        )


def ca_generators(a: int) -> list[ComplexMatrix]:
    """The ``2a+1`` anticommuting skew-Hermitian unitaries in ``2^a`` dims.

    For ``k = 1..a`` the list contains, in order, the pair

    ``I2^(a-k) (x) SIGMA1 (x) SIGMA3^(k-1)`` and
    ``I2^(a-k) (x) SIGMA2 (x) SIGMA3^(k-1)``,

    followed by the diagonal member ``+j SIGMA3^(a)`` last, so that the
    first ``2a-1`` entries form the family used by the unitary-weight
    constructions. Every output squares to ``-I`` and the family pairwise
    anticommutes; all entries are exact Gaussian integers.

    Parameters
    ----------
    a
        Number of tensor factors, ``1 <= a <= 5``.
    """
    _check_a(a)
    out: list[ComplexMatrix] = []
    for k in range(1, a + 1):
        prefix = kron_power(IDENTITY2, a - k)
        suffix = kron_power(SIGMA3, k - 1)
        out.append(kron(prefix, kron(SIGMA1, suffix)))
        out.append(kron(prefix, kron(SIGMA2, suffix)))
    out.append(1j * kron_power(SIGMA3, a))
    return out


def hurwitz_radon_family(a: int) -> GeneratorFamily:
    """First ``2a-1`` generators plus the commuting Hermitian companion.

    The companion is ``j SIGMA1 (x) I2^(a-1)``, which equals the product
    of the two generators dropped from :func:`ca_generators` (the last
    pair member and the diagonal member) scaled by ``j``. It is Hermitian,
    unitary, commutes with all ``2a-1`` family members, and is not a
    scalar matrix.
    """
    _check_a(a)
    gens = ca_generators(a)
    companion = kron(1j * SIGMA1, kron_power(IDENTITY2, a - 1))
    return GeneratorFamily(
        a=a,
        generators=tuple(gens[: 2 * a - 1]),
        companion_hermitian=companion,
    )


def reducible_generators(a: int) -> list[ComplexMatrix]:
    """Identity-tensored family of ``2a`` matrices in ``2^a`` dimensions.

    The list starts with the identity, then ``I2 (x) (j SIGMA3^(a-1))``,
    then ``I2 (x) g`` for the first ``2a-2`` members ``g`` of
    :func:`ca_generators` one dimension down. Every output is
    block-diagonal with two identical ``2^(a-1)`` blocks, and the ``2a-1``
    non-identity members pairwise anticommute -- strictly fewer than the
    ``2a+1`` possible in this dimension, which is what makes the family
    reducible.

    Parameters
    ----------
    a
        Number of tensor factors, ``2 <= a <= 5``.
    """
    _check_a(a, minimum=2)
    sub = ca_generators(a - 1)
    ordered = [np.eye(2 ** (a - 1), dtype=np.complex128), sub[-1], *sub[:-1]]
    return [kron(IDENTITY2, m) for m in ordered[: 2 * a]]
