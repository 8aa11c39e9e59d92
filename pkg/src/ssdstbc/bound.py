"""Empirical rate-bound checks over the signed tensor-product group.

The search universe is the group of matrices ``phase * (F_1 (x) ... (x)
F_a)`` with ``phase`` in ``{1, -1, j, -j}`` and each factor one of ``I2,
SIGMA1, SIGMA2, SIGMA3``. Every construction in this package lives inside
it, every element is unitary and either Hermitian or skew-Hermitian, and
it is small enough to search exhaustively for ``a <= 2``. The checks here
are therefore in-group certificates, not proofs over all unitaries; the
reports say so explicitly.

Two questions are answered. First, the largest symbol count ``K`` for
which the anchored normalized structure exists (``K = 2a`` both times,
matching the constructions). Second, that no unitary-weight
symbol-separable code with ``K = 2a+1`` or ``K = 2a+2`` exists in the
universe at all: for the larger target no admissible first quadrature
weight survives, and for ``2a+1`` admissible anchors do exist, so the
search must additionally try to complete the remaining quadrature weights
against every cross condition, which always dead-ends.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import NamedTuple

import numpy as np

from .codes import LinearDispersionCode
from .linalg import IDENTITY2, SIGMA1, SIGMA2, SIGMA3, ComplexMatrix

__all__ = [
    "ClaimCheck",
    "ClaimReport",
    "PauliWord",
    "max_ssd_family",
    "pauli_words",
    "verify_claims",
]

_FACTORS = {"I": IDENTITY2, "1": SIGMA1, "2": SIGMA2, "3": SIGMA3}
_PHASES = {1 + 0j: "", -1 + 0j: "-", 1j: "j", -1j: "-j"}


def _build_factor_table() -> dict[tuple[str, str], tuple[complex, str]]:
    """Single-factor multiplication table, derived from the matrices."""
    table = {}
    for x, y in itertools.product(_FACTORS, repeat=2):
        prod = _FACTORS[x] @ _FACTORS[y]
        for sym, m in _FACTORS.items():
            for phase in _PHASES:
                if np.array_equal(prod, phase * m):
                    table[(x, y)] = (phase, sym)
        assert (x, y) in table
    return table


_FACTOR_TABLE = _build_factor_table()


@dataclass(frozen=True)
class PauliWord:
    """A signed tensor word: ``phase`` times a product of 2x2 factors."""

    phase: complex
    factors: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.phase not in _PHASES:
            raise ValueError(f"phase must be a fourth root of unity, got {self.phase}")
        if not self.factors or any(f not in _FACTORS for f in self.factors):
            raise ValueError(f"factors must be drawn from I/1/2/3, got {self.factors}")

    @property
    def name(self) -> str:
        return _PHASES[self.phase] + "".join(self.factors)

    def matrix(self) -> ComplexMatrix:
        return self.phase * reduce(np.kron, (_FACTORS[f] for f in self.factors))

    def __mul__(self, other: "PauliWord") -> "PauliWord":
        if len(self.factors) != len(other.factors):
            raise ValueError("word lengths differ")
        phase = self.phase * other.phase
        out = []
        for x, y in zip(self.factors, other.factors):
            p, sym = _FACTOR_TABLE[(x, y)]
            phase *= p
            out.append(sym)
        return PauliWord(phase, tuple(out))

    def dagger(self) -> "PauliWord":
        skew_factors = sum(1 for f in self.factors if f in ("1", "2"))
        sign = -1 if skew_factors % 2 else 1
        return PauliWord(self.phase.conjugate() * sign, self.factors)

    def is_hermitian(self) -> bool:
        return self.dagger() == self

    def is_skew_hermitian(self) -> bool:
        return self.dagger() == PauliWord(-self.phase, self.factors)

    def anticommutes_with(self, other: "PauliWord") -> bool:
        return (self * other).phase == -(other * self).phase

    def commutes_with(self, other: "PauliWord") -> bool:
        return (self * other).phase == (other * self).phase


def pauli_words(a: int) -> list[PauliWord]:
    """All ``4**a`` phase-1 words of length ``a``, in product order."""
    if a < 1:
        raise ValueError("need at least one factor")
    return [
        PauliWord(1 + 0j, combo) for combo in itertools.product("I123", repeat=a)
    ]


def _canonical_forms(a: int) -> tuple[list[PauliWord], list[PauliWord]]:
    """Skew-Hermitian and Hermitian representatives of each non-identity
    word, both in word enumeration order.

    Every word is Hermitian or skew-Hermitian, and multiplying by ``j``
    flips which, so each word contributes one element to each list; signs
    are dropped (they change no commutation relation).
    """
    skews, herms = [], []
    for w in pauli_words(a):
        if all(f == "I" for f in w.factors):
            continue
        jw = PauliWord(1j, w.factors)
        if w.is_skew_hermitian():
            skews.append(w)
            herms.append(jw)
        else:
            skews.append(jw)
            herms.append(w)
    return skews, herms


def _admissible_first_quadrature(
    family: list[PauliWord], a: int
) -> list[PauliWord]:
    """Group elements usable as the first quadrature weight against the
    given in-phase family (identity excluded: a real multiple of the first
    in-phase weight is degenerate, an imaginary one fails the cross
    conditions).

    The cross condition between a skew in-phase weight ``A`` and a
    candidate ``P`` reduces to ``P^H A == A P``; candidates are searched
    per word over the two phase classes, signs deduped.
    """
    out = []
    for w in pauli_words(a):
        if all(f == "I" for f in w.factors):
            continue
        for cand in (w, PauliWord(1j, w.factors)):
            dag = cand.dagger()
            if all((dag * m) == (m * cand) for m in family):
                out.append(cand)
    return out


def max_ssd_family(a: int) -> tuple[int, LinearDispersionCode]:
    """Largest ``K`` with the anchored normalized structure in-universe.

    Depth-first search over name-sorted skew-Hermitian words for pairwise
    anticommuting families, accepting a family when some Hermitian
    non-scalar word commutes with all of it. Returns the maximum ``K``
    (family size plus one, counting the identity in-phase weight) and the
    first witness found at that size, assembled into a code.

    Raises
    ------
    ValueError
        For ``a > 2``; larger universes are not desk-scale searchable.
    """
    if a not in (1, 2):
        raise ValueError("exhaustive search is limited to one or two factors")
    skews, herms = _canonical_forms(a)
    ordered = sorted(skews, key=lambda w: w.name)
    best: tuple[int, tuple[list[PauliWord], PauliWord] | None] = (0, None)

    def extend(clique: list[PauliWord], start: int) -> None:
        nonlocal best
        if clique:
            for h in herms:
                if all(h.commutes_with(m) for m in clique):
                    if len(clique) + 1 > best[0]:
                        best = (len(clique) + 1, (list(clique), h))
                    break
        for idx in range(start, len(ordered)):
            w = ordered[idx]
            if all(w.anticommutes_with(c) for c in clique):
                clique.append(w)
                extend(clique, idx + 1)
                clique.pop()

    extend([], 0)
    k_max, found = best
    assert found is not None
    family, anchor = found
    n = 2**a
    eye = np.eye(n, dtype=np.complex128)
    anchor_m = anchor.matrix()
    weights_i = (eye, *(m.matrix() for m in family))
    weights_q = tuple(anchor_m @ w for w in weights_i)
    witness = LinearDispersionCode(
        n=n, K=k_max, weights_I=weights_i, weights_Q=weights_q,
        label=f"pauli-search-{n}x{n}",
    )
    return k_max, witness


class ClaimCheck(NamedTuple):
    """Search outcome for one target symbol count."""

    k_target: int
    family_size: int
    families_examined: int
    anchor_pairs: int
    completions_found: int
    confirmed: bool


@dataclass(frozen=True)
class ClaimReport:
    """Exhaustive non-existence evidence for ``K`` above ``2a``.

    ``universe`` states the search restriction; ``max_anticommuting_family``
    is the largest pairwise-anticommuting skew-Hermitian set found at all,
    which caps how large a family any code could draw on.
    """

    a: int
    universe: str
    max_anticommuting_family: int
    checks: tuple[ClaimCheck, ...]


def _complete_quadratures(
    family: list[PauliWord], anchor: PauliWord, a: int
) -> bool:
    """Try to finish a code: one signed skew word per family slot.

    Slot ``j`` needs a word that anticommutes with every other family
    member (cross in-phase/quadrature), anticommutes with the previously
    placed quadrature words (quadrature/quadrature), satisfies the
    anchor's cross condition, and is not ``+-`` the slot's own in-phase
    weight. Returns True as soon as every slot is filled.
    """
    skews, _ = _canonical_forms(a)
    signed = [PauliWord(s * w.phase, w.factors) for w in skews for s in (1, -1)]
    anchor_dag = anchor.dagger()

    def assign(chosen: list[PauliWord]) -> bool:
        j = len(chosen)
        if j == len(family):
            return True
        target = family[j]
        for q in signed:
            if not all(
                q.anticommutes_with(family[i])
                for i in range(len(family))
                if i != j
            ):
                continue
            if (anchor_dag * q).phase != -((q.dagger() * anchor).phase):
                continue
            if not all(q.anticommutes_with(c) for c in chosen):
                continue
            if q.factors == target.factors and q.phase in (
                target.phase,
                -target.phase,
            ):
                continue
            if assign(chosen + [q]):
                return True
        return False

    return assign([])


def verify_claims(a: int) -> ClaimReport:
    """Exhaustively confirm that ``K = 2a+1`` and ``K = 2a+2`` are
    unreachable inside the signed tensor-product group.

    For each target, enumerate every pairwise-anticommuting skew family of
    size ``K - 1``, then every admissible first quadrature weight, then
    attempt a full quadrature completion. ``confirmed`` means zero
    completions were found anywhere.
    """
    if a not in (1, 2):
        raise ValueError("exhaustive search is limited to one or two factors")
    skews, _ = _canonical_forms(a)
    ordered = sorted(skews, key=lambda w: w.name)

    def families(size: int) -> list[list[PauliWord]]:
        found: list[list[PauliWord]] = []

        def extend(clique: list[PauliWord], start: int) -> None:
            if len(clique) == size:
                found.append(list(clique))
                return
            for idx in range(start, len(ordered)):
                w = ordered[idx]
                if all(w.anticommutes_with(c) for c in clique):
                    clique.append(w)
                    extend(clique, idx + 1)
                    clique.pop()

        extend([], 0)
        return found

    max_family = 0
    size = 1
    while families(size):
        max_family = size
        size += 1

    checks = []
    for k_target in (2 * a + 2, 2 * a + 1):
        fsize = k_target - 1
        fams = families(fsize)
        anchor_pairs = 0
        completions = 0
        for fam in fams:
            for anchor in _admissible_first_quadrature(fam, a):
                anchor_pairs += 1
                if _complete_quadratures(fam, anchor, a):
                    completions += 1
        checks.append(
            ClaimCheck(
                k_target=k_target,
                family_size=fsize,
                families_examined=len(fams),
                anchor_pairs=anchor_pairs,
                completions_found=completions,
                confirmed=completions == 0,
            )
        )
    return ClaimReport(
        a=a,
        universe=(
            "signed tensor-product group over {I, SIGMA1, SIGMA2, SIGMA3} "
            "with phases {1, -1, j, -j}; in-group evidence, not a proof "
            "over all unitary matrices"
        ),
        max_anticommuting_family=max_family,
        checks=tuple(checks),
    )
