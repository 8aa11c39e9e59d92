"""Diversity product, discriminant analysis, and constellation design.

The diversity product of a code over a finite signal set is

    DP = (1 / (2 sqrt(n))) * min |det(dS^H dS)| ** (1 / (2n))

minimized over distinct codeword pairs. For codes with the anchored
unitary-weight structure (see :func:`ssdstbc.codes.cuw_structure`) the
minimum is attained at single-symbol differences and the determinant has a
closed form driven entirely by the anchor's +-1 eigenvalue split, so the
whole computation collapses to a scan over constellation differences. The
anchor of the normalized code is called the discriminant here, and its
signature ``(m_plus, m_minus)`` is the only code-side quantity the coding
gain depends on.

The constellation side provides rectangular and square-derived QAM
generators, the two-coordinate rotation that trades minimum distance for
coordinate product distance, and the pipeline reproducing the reference
diversity-product comparison table for 4/8/32-point constellations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .codes import LinearDispersionCode, cuw_structure
from .linalg import ComplexMatrix, hermitian_unitary_signature

__all__ = [
    "DiscriminantReport",
    "FullDiversityResult",
    "SignalSet",
    "apply_rotation",
    "cpd",
    "discriminant_of",
    "diversity_product",
    "full_diversity_check",
    "rect_qam",
    "signature_sweep",
    "square_derived_qam",
    "sum_difference_map",
    "table1_constellation",
    "table1_pipeline",
    "wwx_parameters",
    "wwx_rotation",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

_NORMALIZATIONS = ("sum-energy-1", "avg-energy-1", "raw")


@dataclass(frozen=True)
class SignalSet:
    """A finite set of at least two distinct complex constellation points.

    ``normalization`` records which energy convention the points satisfy:
    ``sum-energy-1`` (total energy 1), ``avg-energy-1`` (mean energy 1), or
    ``raw`` (no constraint). The stated convention is verified to 1e-12 at
    construction time.
    """

    points: np.ndarray
    normalization: str = "raw"
    label: str = ""

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=np.complex128).ravel()
        if pts.size < 2:
            raise ValueError("a signal set needs at least two points")
        if np.unique(pts).size != pts.size:
            raise ValueError("signal set points must be distinct")
        if self.normalization not in _NORMALIZATIONS:
            raise ValueError(f"unknown normalization {self.normalization!r}")
        energy = float(np.sum(np.abs(pts) ** 2))
        if self.normalization == "sum-energy-1" and abs(energy - 1.0) > 1e-12:
            raise ValueError(f"sum energy is {energy!r}, expected 1")
        if self.normalization == "avg-energy-1" and abs(energy / pts.size - 1.0) > 1e-12:
            raise ValueError(f"average energy is {energy / pts.size!r}, expected 1")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return int(self.points.size)

    def scaled(self, normalization: str) -> "SignalSet":
        """Rescale the points to satisfy the requested energy convention."""
        if normalization == "raw":
            return SignalSet(self.points, "raw", self.label)
        energy = float(np.sum(np.abs(self.points) ** 2))
        if normalization == "sum-energy-1":
            factor = 1.0 / math.sqrt(energy)
        elif normalization == "avg-energy-1":
            factor = math.sqrt(len(self) / energy)
        else:
            raise ValueError(f"unknown normalization {normalization!r}")
        return SignalSet(self.points * factor, normalization, self.label)


def _as_points(signal_set) -> np.ndarray:
    if isinstance(signal_set, SignalSet):
        return signal_set.points
    return np.asarray(signal_set, dtype=np.complex128).ravel()


def _nonzero_differences(pts: np.ndarray) -> np.ndarray:
    d = (pts[:, None] - pts[None, :]).ravel()
    d = d[d != 0]
    if d.size == 0:
        raise ValueError("empty difference set: need at least two distinct points")
    return d


@dataclass(frozen=True)
class DiscriminantReport:
    """The normalized code's anchor matrix and its eigenvalue split."""

    discriminant: ComplexMatrix
    m_plus: int
    m_minus: int
    traceless: bool


def discriminant_of(
    code: LinearDispersionCode, tol: float = 1e-9
) -> DiscriminantReport:
    """Extract the anchor of the normalized code and its signature.

    Raises
    ------
    ValueError
        If the code lacks the anchored unitary-weight structure.
    """
    anchor, _ = cuw_structure(code, tol)
    m_plus, m_minus = hermitian_unitary_signature(anchor)
    return DiscriminantReport(
        discriminant=anchor,
        m_plus=m_plus,
        m_minus=m_minus,
        traceless=m_plus == m_minus,
    )


def _closed_form_min_det(
    diffs: np.ndarray, m_plus: int, m_minus: int, signs: tuple[int, ...]
) -> float:
    best = math.inf
    di, dq = diffs.real, diffs.imag
    for s in sorted(set(signs)):
        dets = np.abs(di + s * dq) ** (2 * m_plus) * np.abs(di - s * dq) ** (
            2 * m_minus
        )
        best = min(best, float(dets.min()))
    return best


_BRUTE_FORCE_LIMIT = 1024


def diversity_product(
    code: LinearDispersionCode,
    signal_set,
    exact: bool = True,
    tol: float = 1e-9,
) -> float:
    """Minimum normalized determinant distance over codeword pairs.

    Parameters
    ----------
    code
        With ``exact=True`` the code must have the anchored unitary-weight
        structure (checked, after normalizing if needed); the minimum over
        all codeword pairs is then attained at single-symbol differences
        and computed in closed form from the discriminant signature. With
        ``exact=False`` any code is accepted and all ``|points|**K``
        codewords are enumerated, which is limited to 1024 codewords.
    signal_set
        A :class:`SignalSet` or a plain sequence of complex points, used
        for every symbol.

    Raises
    ------
    ValueError
        If the difference set is empty, the structure check fails
        (``exact=True``), or the enumeration guard trips (``exact=False``).
    """
    pts = _as_points(signal_set)
    diffs = _nonzero_differences(pts)
    n = code.n
    if exact:
        anchor, signs = cuw_structure(code, tol)
        m_plus, m_minus = hermitian_unitary_signature(anchor)
        best = _closed_form_min_det(diffs, m_plus, m_minus, signs)
        return best ** (1.0 / (2 * n)) / (2.0 * math.sqrt(n))

    total = pts.size**code.K
    if total > _BRUTE_FORCE_LIMIT:
        raise ValueError(
            f"brute force would enumerate {total} codewords "
            f"(limit {_BRUTE_FORCE_LIMIT}); use exact=True"
        )
    coords = np.array(list(itertools.product(pts, repeat=code.K)))
    wi = np.stack(code.weights_I)
    wq = np.stack(code.weights_Q)
    mats = np.einsum("pk,kij->pij", coords.real, wi) + np.einsum(
        "pk,kij->pij", coords.imag, wq
    )
    best = math.inf
    for i in range(total - 1):
        d = mats[i + 1 :] - mats[i]
        gram = np.einsum("pji,pjk->pik", d.conj(), d)
        best = min(best, float(np.abs(np.linalg.det(gram)).min()))
    return best ** (1.0 / (2 * n)) / (2.0 * math.sqrt(n))


@dataclass(frozen=True)
class FullDiversityResult:
    """Verdict of :func:`full_diversity_check`, truthy iff it passed.

    ``witness`` names two points whose difference lies on a +-45 degree
    line when the check fails; ``margin`` is the smallest gap between the
    absolute in-phase and quadrature parts over all differences.
    """

    full_diversity: bool
    witness: tuple[complex, complex] | None
    margin: float

    def __bool__(self) -> bool:
        return self.full_diversity


def full_diversity_check(signal_set, tol: float = 1e-12) -> FullDiversityResult:
    """Check that no nonzero difference satisfies ``|Re| == |Im|``.

    Differences on the +-45 degree diagonals are exactly the ones that
    zero out the closed-form determinant for a traceless discriminant, so
    a passing check certifies a nonzero diversity product.
    """
    pts = _as_points(signal_set)
    best_margin = math.inf
    witness = None
    for a, b in itertools.combinations(range(pts.size), 2):
        d = pts[a] - pts[b]
        if d == 0:
            continue
        gap = abs(abs(d.real) - abs(d.imag))
        if gap < best_margin:
            best_margin = gap
            if gap <= tol:
                witness = (complex(pts[a]), complex(pts[b]))
    if witness is not None:
        return FullDiversityResult(False, witness, best_margin)
    return FullDiversityResult(True, None, best_margin)


def rect_qam(n1p: int, n2p: int, d: float = 2.0) -> SignalSet:
    """Rectangular QAM grid of ``2*n1p`` by ``2*n2p`` points.

    Coordinates run over odd integers scaled by ``d/2``, so neighbouring
    points are spaced ``d`` apart and the grid is centred at the origin.
    """
    if n1p < 1 or n2p < 1:
        raise ValueError("grid half-dimensions must be at least 1")
    if d <= 0:
        raise ValueError("spacing must be positive")
    re = [(2 * k + 1) * d / 2 for k in range(-n1p, n1p)]
    im = [(2 * k + 1) * d / 2 for k in range(-n2p, n2p)]
    pts = [complex(a, b) for a in re for b in im]
    return SignalSet(pts, "raw", f"rect-qam-{2 * n1p}x{2 * n2p}")


def square_derived_qam(q: int) -> SignalSet:
    """Square QAM trimmed down to ``q`` points and re-centred.

    Takes the smallest square grid with at least ``q`` points, deletes the
    excess points highest energy first (ties broken by larger polar angle
    in ``[0, 2*pi)``), and translates so the centroid sits at the origin.
    """
    if q < 2:
        raise ValueError("need at least two points")
    p = 1
    while p * p < q:
        p += 1
    coords = [2 * k - (p - 1) for k in range(p)]
    pts = [complex(a, b) for a in coords for b in coords]

    def deletion_key(z: complex) -> tuple[float, float]:
        return (abs(z) ** 2, float(np.angle(z)) % (2 * math.pi))

    pts.sort(key=deletion_key, reverse=True)
    pts = pts[p * p - q :]
    centroid = sum(pts) / len(pts)
    return SignalSet(
        [z - centroid for z in pts], "raw", f"square-derived-{q}qam"
    )


class WwxParameters(NamedTuple):
    """Power fractions and mixing angles behind :func:`wwx_rotation`."""

    epsilon1: float
    epsilon2: float
    theta1: float
    theta2: float


def wwx_parameters(
    n1: int, n2: int, epsilon_form: str = "power-fraction"
) -> WwxParameters:
    """Angles and per-axis power fractions for the coordinate rotation.

    ``epsilon_form`` selects how the odd-integer grid's power splits into
    the two fractions:

    * ``"power-fraction"``: ``eps_i = (4*N_i**2 - 1) / (2*(2*N1**2 +
      2*N2**2 - 1))``, the actual share of a ``2*N1 x 2*N2`` grid's energy
      carried by each coordinate, so ``eps1 + eps2 == 1`` and the rotation
      preserves total grid energy exactly. ``theta1`` is ``atan`` of the
      golden ratio conjugate times ``sqrt(eps2/eps1)``.
    * ``"half-share"``: ``eps_i = (2*N_i**2 - 1) / (2*(2*N1**2 + 2*N2**2 -
      1))`` with the angle ratio flipped to ``sqrt(eps1/eps2)``; kept for
      comparison, not energy-preserving on unequal grids.

    The two agree whenever ``n1 == n2`` up to the resulting matrix.
    """
    if n1 < 1 or n2 < 1:
        raise ValueError("grid half-dimensions must be at least 1")
    den = 2.0 * (2 * n1**2 + 2 * n2**2 - 1)
    if epsilon_form == "power-fraction":
        e1 = (4 * n1**2 - 1) / den
        e2 = (4 * n2**2 - 1) / den
        theta1 = math.atan(_GOLDEN * math.sqrt(e2 / e1))
    elif epsilon_form == "half-share":
        e1 = (2 * n1**2 - 1) / den
        e2 = (2 * n2**2 - 1) / den
        theta1 = math.atan(_GOLDEN * math.sqrt(e1 / e2))
    else:
        raise ValueError(f"unknown epsilon_form {epsilon_form!r}")
    alpha = math.atan(1.0 / math.sqrt(e1 * e2))
    return WwxParameters(e1, e2, theta1, alpha - theta1)


def wwx_rotation(
    n1: int, n2: int, epsilon_form: str = "power-fraction"
) -> np.ndarray:
    """2x2 real transform mixing the in-phase and quadrature coordinates.

    Applied to the stacked real coordinates of a rectangular grid, the
    output constellation has no difference on the coordinate axes, which is
    what gives a nonzero coordinate product distance. See
    :func:`wwx_parameters` for the ``epsilon_form`` conventions.
    """
    e1, e2, th1, th2 = wwx_parameters(n1, n2, epsilon_form)
    return np.array(
        [
            [math.cos(th1) / math.sqrt(2 * e1), math.sin(th1) / math.sqrt(2 * e2)],
            [-math.sin(th2) / math.sqrt(2 * e1), math.cos(th2) / math.sqrt(2 * e2)],
        ]
    )


def apply_rotation(signal_set, u: np.ndarray) -> SignalSet:
    """Send each point's ``(Re, Im)`` pair through the 2x2 matrix ``u``."""
    pts = _as_points(signal_set)
    vec = np.asarray(u, dtype=np.float64) @ np.stack([pts.real, pts.imag])
    label = signal_set.label if isinstance(signal_set, SignalSet) else ""
    return SignalSet(vec[0] + 1j * vec[1], "raw", f"rotated-{label}" if label else "rotated")


def sum_difference_map(signal_set) -> SignalSet:
    """Remix coordinates as ``(Re+Im)/sqrt(2) + j*(Re-Im)/sqrt(2)``.

    This is the change of variables that turns a constellation designed
    for coordinate product distance into one whose differences avoid the
    +-45 degree lines; it preserves point energies.
    """
    pts = _as_points(signal_set)
    mixed = (pts.real + pts.imag) / math.sqrt(2) + 1j * (
        pts.real - pts.imag
    ) / math.sqrt(2)
    label = signal_set.label if isinstance(signal_set, SignalSet) else ""
    norm = signal_set.normalization if isinstance(signal_set, SignalSet) else "raw"
    return SignalSet(mixed, norm, f"mixed-{label}" if label else "mixed")


_RECT_DIMS = {4: (1, 1), 8: (2, 1), 32: (4, 2)}


def table1_constellation(constellation_kind: str, q: int) -> SignalSet:
    """Final transformed constellation used by :func:`table1_pipeline`.

    Builds the base grid (rectangular dimensions ``2x2`` / ``4x2`` /
    ``8x4``, or the square-derived shape), rotates the coordinates,
    rescales to total energy 1, and applies the sum-difference remix. The
    returned set carries the ``sum-energy-1`` convention.
    """
    if q not in (4, 8, 32):
        raise ValueError(f"unsupported constellation size {q}; expected 4, 8, or 32")
    if constellation_kind == "rectangular":
        n1, n2 = _RECT_DIMS[q]
        base = rect_qam(n1, n2)
    elif constellation_kind == "square-derived":
        base = square_derived_qam(q)
        n1 = n2 = 2
    else:
        raise ValueError(f"unknown constellation kind {constellation_kind!r}")
    rotated = apply_rotation(base, wwx_rotation(n1, n2))
    mixed = sum_difference_map(rotated.scaled("sum-energy-1"))
    return SignalSet(mixed.points, "sum-energy-1", f"table1-{constellation_kind}-{q}")


def table1_pipeline(
    constellation_kind: str, q: int, code_size_a: int = 2
) -> float:
    """Diversity product of the anchored code on the transformed set.

    Reproduces the reference comparison table: square-derived 4/8/32-point
    constellations give approximately 0.1672 / 0.0757 / 0.0187 and
    rectangular 8/32-point give 0.0699 / 0.0167, on the 4x4 code
    (``code_size_a=2``) with the total-energy-1 convention.
    """
    from .codes import cuw_ssd

    constellation = table1_constellation(constellation_kind, q)
    return diversity_product(cuw_ssd(code_size_a), constellation, exact=True)


def cpd(signal_set) -> float:
    """Coordinate product distance: ``min |Re(d) * Im(d)|`` over nonzero
    differences ``d`` of distinct points."""
    diffs = _nonzero_differences(_as_points(signal_set))
    return float(np.abs(diffs.real * diffs.imag).min())


class SignatureGain(NamedTuple):
    """Diversity product a signal set would achieve at one signature."""

    m_plus: int
    dp: float


def signature_sweep(signal_set, n: int) -> tuple[SignatureGain, ...]:
    """Closed-form diversity product for every signature ``(m, n-m)``.

    Exploratory data only: sweeps the hypothetical discriminant signature
    from ``m = 0`` to ``m = n`` for a fixed signal set and reports the
    resulting diversity products, e.g. to inspect whether the balanced
    signature maximizes the gain. Nothing here asserts that it does.
    """
    if n < 1:
        raise ValueError("matrix size must be positive")
    diffs = _nonzero_differences(_as_points(signal_set))
    out = []
    for m in range(n + 1):
        best = _closed_form_min_det(diffs, m, n - m, (1,))
        out.append(SignatureGain(m, best ** (1.0 / (2 * n)) / (2.0 * math.sqrt(n))))
    return tuple(out)
