"""Predictor exactness, space estimates, slope fitting, classical oracle."""

import math
import random

import pytest

from revmul import (
    CostModel,
    ResourceLog,
    choose_parameters,
    classical_karatsuba_multiply,
    fit_loglog_slope,
    multiply_add_schoolbook,
    predicted_space_bits,
    predicted_toffoli_count,
)

from conftest import make_registers, run_multiply


def test_predicted_count_n1_hand_expanded():
    """m=1 path: one base product each way plus two folded piece adds.

    Geometry for n=1: one 1-bit word, input pieces 1 bit, output pieces 2.
    The base product charges ctrl_add(min(1, 2-0)) = 3, the fold charges
    add(2) = 4 per output piece, and the uncompute repeats the product:
    3 + 4 + 4 + 3 = 14.
    """
    assert predicted_toffoli_count(1) == 14


def test_predicted_count_n2_hand_expanded():
    """n=2: w=1, m=2, ipw=2, opw=5.

    recursion(1) = sum_i<2 ctrl(min(2, 5-i)) = 2 * 5 = 10
    recursion(2) = 6*1*add(5) + 4*1*add(2) + 3*recursion(1) = 60 + 16 + 30 = 106
    total = 2*recursion(2) + 4*add(5) = 212 + 40 = 252
    """
    assert predicted_toffoli_count(2) == 252


def test_predicted_schoolbook_closed_form():
    # Every controlled add runs at the full operand width: n * (2n + 1).
    for n in (1, 2, 3, 8, 64, 1000):
        assert predicted_toffoli_count(n, algorithm="schoolbook") == n * (2 * n + 1)
    assert predicted_toffoli_count(8, algorithm="schoolbook") == 136


def test_predictor_rejects_unknown_algorithm():
    with pytest.raises(ValueError):
        predicted_toffoli_count(8, algorithm="fft")


def test_predictor_matches_traced_run_small_sizes(rng):
    for n in list(range(1, 65)) + [100, 256, 700, 800, 1000]:
        _, log, _ = run_multiply(n, rng.getrandbits(2 * n), rng.getrandbits(n), rng.getrandbits(n))
        assert log.toffoli == predicted_toffoli_count(n), f"n={n}"
        assert log.high_water_bits == predicted_space_bits(n).total_high_water


def test_predictor_matches_traced_schoolbook(rng):
    for n in (1, 5, 33, 128):
        target, u, v = make_registers(n)
        u.write_uint(rng.getrandbits(n))
        v.write_uint(rng.getrandbits(n))
        log = ResourceLog()
        multiply_add_schoolbook(target, u, v, 1, log)
        assert log.toffoli == predicted_toffoli_count(n, algorithm="schoolbook")


def test_predictor_matches_traced_custom_model(rng):
    """Both code paths read the same prices, so they must agree everywhere."""
    model = CostModel(
        add_cost=lambda k: 3 * k + 1 if k > 0 else 0,
        ctrl_add_cost=lambda k: k * k if k > 0 else 0,
        ancilla_add=lambda k: 2 if k > 0 else 0,
    )
    for n in (1, 7, 24, 64):
        for threshold in (1, 2):
            cfg = choose_parameters(n, base_case_pieces=threshold, model=model)
            _, log, _ = run_multiply(n, 0, rng.getrandbits(n), rng.getrandbits(n), config=cfg)
            predicted = predicted_toffoli_count(n, model, base_case_pieces=threshold)
            assert log.toffoli == predicted, f"n={n} threshold={threshold}"


def test_predictor_matches_traced_base_case_variants(rng):
    for n in (16, 64, 200):
        for threshold in (1, 2, 4, 1 << 20):
            cfg = choose_parameters(n, base_case_pieces=threshold)
            _, log, _ = run_multiply(n, 0, rng.getrandbits(n), rng.getrandbits(n), config=cfg)
            assert log.toffoli == predicted_toffoli_count(n, base_case_pieces=threshold)


def test_predicted_staircase():
    assert predicted_toffoli_count(700) == predicted_toffoli_count(800)
    # A size in the next bucket prices differently.
    assert predicted_toffoli_count(800) != predicted_toffoli_count(1200)


def test_predicted_space_example():
    est = predicted_space_bits(1024)
    assert est.input_bits == 128 * 17 == 2176
    assert est.output_bits == 256 * 41 == 10496
    assert est.workspace_bits == 1
    assert est.io_register_bits == 4096
    assert est.total_high_water == 2 * 2176 + 10496 + 1


def test_space_bounds_universal():
    """Padded input stays under 4n and padded output under 19n for n >= 16."""
    sizes = list(range(16, 2049)) + [4096, 8192, 30720, 61441, 65536, 131072]
    for n in sizes:
        est = predicted_space_bits(n)
        assert est.input_bits <= 4 * n, f"n={n}"
        assert est.output_bits <= 19 * n, f"n={n}"


def test_space_bounds_tight_when_rounding_is_kind():
    """When ceil(n/w) is already a power of two the classic bounds hold."""
    for n in (16, 36, 40, 256, 65536):
        cfg = choose_parameters(n)
        assert -(-n // cfg.word_bits) == cfg.piece_count  # no rounding loss
        est = predicted_space_bits(n)
        assert est.input_bits <= 2 * n
        assert est.output_bits <= 10 * n


def test_fit_slope_exact_square():
    assert fit_loglog_slope([(2, 4), (4, 16), (8, 64)]) == pytest.approx(2.0, abs=1e-12)


def test_fit_slope_monomials():
    for exponent in (1.0, 1.585, 2.0, 2.5):
        points = [(n, 5 * n**exponent) for n in (16, 64, 256, 1024)]
        assert fit_loglog_slope(points) == pytest.approx(exponent, abs=1e-9)


def test_fit_slope_validation():
    with pytest.raises(ValueError):
        fit_loglog_slope([(4, 16)])
    with pytest.raises(ValueError):
        fit_loglog_slope([(4, 16), (8, 0)])
    with pytest.raises(ValueError):
        fit_loglog_slope([(4, 16), (4, 32)])
    with pytest.raises(ValueError):
        fit_loglog_slope([(0, 16), (4, 32)])


def test_classical_multiply_matches_native():
    rng = random.Random(42)
    for _ in range(10_000):
        bits_u = rng.randint(0, 256)
        bits_v = rng.randint(0, 256)
        u = rng.getrandbits(bits_u) if bits_u else 0
        v = rng.getrandbits(bits_v) if bits_v else 0
        assert classical_karatsuba_multiply(u, v) == u * v


def test_classical_multiply_recurses_on_big_inputs():
    u = (1 << 300) - 12345
    v = (1 << 290) + 67890
    assert classical_karatsuba_multiply(u, v) == u * v
    assert classical_karatsuba_multiply(u, 0) == 0
    assert classical_karatsuba_multiply(0, v) == 0
    with pytest.raises(ValueError):
        classical_karatsuba_multiply(-1, 5)


def test_crossover_exists_in_predictor():
    small, large = 1024, 65536
    assert predicted_toffoli_count(small) > predicted_toffoli_count(small, algorithm="schoolbook")
    assert predicted_toffoli_count(large) < predicted_toffoli_count(large, algorithm="schoolbook")
