"""End-to-end acceptance gates with pinned tolerances.

Each test freezes one externally checkable property of the package:
exact construction identities, the classification dichotomy, the
reference diversity-product table, closed-form vs brute-force agreement,
invariance under normalization, decoder equivalence, the exhaustive
in-group rate bound, statistical simulation parity, and the
full-diversity biconditional. Expected values were derived independently
before being pinned here; tolerances are part of the gate.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from ssdstbc.bound import max_ssd_family, verify_claims
from ssdstbc.codes import (
    LinearDispersionCode,
    alamouti,
    ciod,
    classify,
    cuw_ssd,
    cuw_structure,
    mcuw_ssd,
    normalize,
    tnu_transform,
    ygt_extend,
)
from ssdstbc.gain import (
    diversity_product,
    full_diversity_check,
    rect_qam,
    square_derived_qam,
    table1_constellation,
    table1_pipeline,
)
from ssdstbc.sim import (
    ChannelConfig,
    ml_decode_exhaustive,
    ml_decode_ssd,
    power_scale,
    run_montecarlo,
)


def test_criterion_01_construction_exact():
    start = time.perf_counter()
    for a in range(1, 5):
        code = cuw_ssd(a)
        assert code.n == 2**a
        assert code.K == 2 * a
        assert Fraction(code.K, code.n) == Fraction(a, 2 ** (a - 1))
        # anchored structure at zero tolerance checks every relation:
        # identity first weight, skew-Hermitian unitary pairwise
        # anticommuting in-phase family, Hermitian unitary commuting
        # anchor, quadrature weights +-anchor times in-phase
        anchor, signs = cuw_structure(code, tol=0.0)
        assert signs == (1,) * code.K
        verdict = classify(code, tol=0.0)
        assert verdict.unitary_weights
        assert verdict.symbol_separable
        assert verdict.class_name == "UW-SSD"
    assert time.perf_counter() - start < 1.0


def test_criterion_02_mixing_dichotomy():
    grid = (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0)
    base = cuw_ssd(2)
    for alpha in grid:
        for beta in grid:
            mixed = tnu_transform(base, alpha, beta)
            verdict = classify(mixed, tol=0.0)
            expected = "NU-COD" if abs(alpha) == abs(beta) else "PSSD"
            assert verdict.class_name == expected, (alpha, beta)
            assert verdict.symbol_separable


def test_criterion_03_reference_table_values():
    start = time.perf_counter()
    table = {
        ("square-derived", 4): 0.1672,
        ("rectangular", 4): 0.1672,
        ("square-derived", 8): 0.0757,
        ("square-derived", 32): 0.0187,
        ("rectangular", 8): 0.0699,
        ("rectangular", 32): 0.0167,
    }
    for (kind, q), expected in table.items():
        assert table1_pipeline(kind, q) == pytest.approx(
            expected, abs=5e-4
        ), (kind, q)
    assert time.perf_counter() - start < 10.0


def test_criterion_04_closed_form_matches_brute_force():
    start = time.perf_counter()
    rotated = table1_constellation("square-derived", 4)
    unrotated = rect_qam(1, 1).scaled("sum-energy-1")
    bpsk = square_derived_qam(2)
    for code in (cuw_ssd(1), cuw_ssd(2)):
        for sset in (rotated, unrotated, bpsk):
            closed = diversity_product(code, sset, exact=True)
            brute = diversity_product(code, sset, exact=False)
            assert closed == pytest.approx(brute, abs=1e-9), (
                code.label, sset.label,
            )
    assert time.perf_counter() - start < 60.0


def test_criterion_05_normalization_invariance():
    rng = np.random.default_rng(20260819)
    rotated = table1_constellation("square-derived", 4)
    for trial in range(20):
        a = 1 + trial % 2
        base = cuw_ssd(a)
        n = base.n
        z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        u, _ = np.linalg.qr(z)
        shifted = LinearDispersionCode(
            n=n, K=base.K,
            weights_I=tuple(u @ w for w in base.weights_I),
            weights_Q=tuple(u @ w for w in base.weights_Q),
            label=f"shifted-{base.label}",
        )
        renorm = normalize(shifted, tol=1e-9)
        for code in (shifted, renorm):
            assert classify(code, tol=1e-9).class_name == "UW-SSD"
        dp_base = diversity_product(base, rotated)
        dp_shifted = diversity_product(shifted, rotated)
        dp_renorm = diversity_product(renorm, rotated)
        assert dp_shifted == pytest.approx(dp_base, abs=1e-9)
        assert dp_renorm == pytest.approx(dp_base, abs=1e-9)


def test_criterion_06_decoder_equivalence():
    start = time.perf_counter()
    qam = rect_qam(1, 1).scaled("avg-energy-1")
    pts = qam.points
    codes = [cuw_ssd(1), cuw_ssd(2), ciod(2), ygt_extend(alamouti())]
    for code in codes:
        rng = np.random.default_rng(61 + code.n + code.K)
        mismatches = 0
        for _ in range(10_000):
            sent = pts[rng.integers(0, pts.size, size=code.K)]
            h = (
                rng.standard_normal((code.n, 1))
                + 1j * rng.standard_normal((code.n, 1))
            ) / math.sqrt(2.0)
            noise = 0.5 * (
                rng.standard_normal((code.n, 1))
                + 1j * rng.standard_normal((code.n, 1))
            )
            y = code.instantiate(sent) @ h + noise
            fast = ml_decode_ssd(code, pts, y, h)
            slow = ml_decode_exhaustive(code, pts, y, h)
            if fast != slow:
                mismatches += 1
        assert mismatches == 0, code.label
    assert time.perf_counter() - start < 300.0


def test_criterion_07_variant_normalizes_to_anchored_form():
    for a in range(1, 4):
        renorm = normalize(mcuw_ssd(a), tol=0.0)
        anchor, signs = cuw_structure(renorm, tol=0.0)
        assert len(signs) == 2 * a
        assert set(signs) <= {1, -1}
        assert classify(renorm, tol=0.0).class_name == "UW-SSD"


def _support(m: np.ndarray) -> set[tuple[int, int]]:
    return {(int(r), int(c)) for r, c in zip(*np.nonzero(m))}


def test_criterion_08_block_design_supports():
    code = ciod(2)
    d_hi = {(0, 0), (1, 1)}
    d_lo = {(2, 2), (3, 3)}
    a_hi = {(0, 1), (1, 0)}
    a_lo = {(2, 3), (3, 2)}
    expected4 = [
        (d_hi, d_lo), (d_lo, d_hi), (a_hi, a_lo), (a_lo, a_hi),
    ]
    for i, (exp_i, exp_q) in enumerate(expected4):
        assert _support(code.weights_I[i]) == exp_i, f"W{i + 1}I"
        assert _support(code.weights_Q[i]) == exp_q, f"W{i + 1}Q"

    code = ciod(3)
    diag = {(k, k) for k in range(4)}
    pair_swap = {(0, 1), (1, 0), (2, 3), (3, 2)}
    block_swap = {(0, 2), (1, 3), (2, 0), (3, 1)}

    def lower(pattern):
        return {(r + 4, c + 4) for r, c in pattern}

    expected8 = [
        (diag, lower(diag)),
        (lower(diag), diag),
        (pair_swap, lower(pair_swap)),
        (lower(pair_swap), pair_swap),
        (block_swap, lower(block_swap)),
        (lower(block_swap), block_swap),
    ]
    for i, (exp_i, exp_q) in enumerate(expected8):
        assert _support(code.weights_I[i]) == exp_i, f"W{i + 1}I"
        assert _support(code.weights_Q[i]) == exp_q, f"W{i + 1}Q"


def test_criterion_09_exhaustive_rate_bound():
    start = time.perf_counter()
    for a, expected_k in ((1, 2), (2, 4)):
        k_max, witness = max_ssd_family(a)
        assert k_max == expected_k
        assert classify(witness, tol=0.0).class_name == "UW-SSD"
        report = verify_claims(a)
        assert all(check.confirmed for check in report.checks)
        assert {check.k_target for check in report.checks} == {
            2 * a + 1, 2 * a + 2,
        }
    assert time.perf_counter() - start < 600.0


def _wilson_interval(errors, slots, halfwidth, z=1.959963985):
    p = errors / slots
    center = (p + z * z / (2.0 * slots)) / (1.0 + z * z / slots)
    return center - halfwidth, center + halfwidth


def test_criterion_10_simulation_parity():
    # both codes carry 4 symbols of a 4-point set over 4 uses: 2 bits
    # per channel use, matched constellation and seed
    start = time.perf_counter()
    constellation = table1_constellation("square-derived", 4)
    snrs = tuple(float(s) for s in range(0, 21, 4))
    trials = 100_000
    results = []
    for code in (cuw_ssd(2), ygt_extend(alamouti())):
        cfg = ChannelConfig(
            n_tx=code.n,
            n_rx=1,
            snr_db_points=snrs,
            trials_per_point=trials,
            seed=2026,
            power_scale=power_scale(code, constellation),
        )
        results.append(run_montecarlo(code, constellation, cfg))
    for row_a, row_b in zip(results[0].per_snr, results[1].per_snr):
        slots = trials * 4
        lo_a, hi_a = _wilson_interval(
            row_a.symbol_errors, slots, row_a.wilson_halfwidth_95
        )
        lo_b, hi_b = _wilson_interval(
            row_b.symbol_errors, slots, row_b.wilson_halfwidth_95
        )
        assert lo_a <= hi_b and lo_b <= hi_a, (
            f"disjoint Wilson intervals at {row_a.snr_db} dB: "
            f"[{lo_a:.3e}, {hi_a:.3e}] vs [{lo_b:.3e}, {hi_b:.3e}]"
        )
    assert time.perf_counter() - start < 1800.0


def test_criterion_11_full_diversity_biconditional():
    code = cuw_ssd(1)
    s = math.sqrt(2.0) / 2.0
    psk8 = np.array(
        [1, s + s * 1j, 1j, -s + s * 1j, -1, -s - s * 1j, -1j, s - s * 1j]
    )
    sets = [
        rect_qam(1, 1),
        rect_qam(2, 2),
        psk8,
        np.array([0.0 + 0.0j, 1.0 + 1.0j]),
        square_derived_qam(2),
        table1_constellation("square-derived", 4),
        table1_constellation("square-derived", 8),
        table1_constellation("square-derived", 32),
        table1_constellation("rectangular", 8),
        table1_constellation("rectangular", 32),
    ]
    verdicts = []
    for sset in sets:
        dp = diversity_product(code, sset, exact=True)
        check = full_diversity_check(sset)
        assert (dp == 0.0) == (not check), getattr(sset, "label", "array")
        verdicts.append(bool(check))
    # four sets with +-45 degree differences fail, six pass
    assert verdicts == [False, False, False, False, True, True, True, True,
                        True, True]
