"""Closed-form resource predictions, scaling fits, and a classical oracle.

The predictors here walk the recursion's shape and sum what each level
charges; they never move data and share no charging code with the traced
execution path.  Keeping the two separate is the point: a traced run and a
predicted count agreeing is a real check, not a tautology.
"""

import math
import statistics
from dataclasses import dataclass

from .karatsuba import choose_parameters
from .revarith import DEFAULT_COST_MODEL


@dataclass(frozen=True)
class SweepPoint:
    """One measured multiply: algorithm, size, geometry, and costs."""

    algorithm: str
    n: int
    w: int
    m: int
    toffoli: int
    bits_high_water: int


@dataclass(frozen=True)
class SpaceEstimate:
    """Predicted live storage for one piecewise multiply.

    ``input_bits`` counts one split operand's piece buffer; two exist at
    once.  ``io_register_bits`` is the caller-owned 4n (two operands and
    the 2n target); those bits predate and outlive the call, so they are
    reported separately and excluded from ``total_high_water``.
    """

    input_bits: int
    output_bits: int
    workspace_bits: int
    io_register_bits: int
    total_high_water: int


def _schoolbook_charge(factor1_width, factor2_width, target_width, model):
    # Prediction-side twin of the execution path's product charge.
    return sum(
        model.ctrl_add_cost(min(factor2_width, target_width - i))
        for i in range(factor1_width)
    )


def predicted_toffoli_count(n, model=DEFAULT_COST_MODEL, *, algorithm="karatsuba", base_case_pieces=1):
    """Toffoli count a traced multiply of two n-bit operands will report.

    Exact, not asymptotic: the recursion shape is walked level by level
    with the same cost model the execution path consults.
    """
    if algorithm == "schoolbook":
        return _schoolbook_charge(n, n, 2 * n, model)
    if algorithm != "karatsuba":
        raise ValueError(f"unknown algorithm {algorithm!r}")
    cfg = choose_parameters(n, base_case_pieces=base_case_pieces, model=model)
    ipw = cfg.input_piece_width
    opw = cfg.output_piece_width
    cost_out = model.add_cost(opw)
    cost_in = model.add_cost(ipw)
    cost_base = _schoolbook_charge(ipw, ipw, opw, model)
    memo = {}

    def recursion(k):
        if k <= cfg.base_case_pieces:
            return k * k * cost_base
        if k not in memo:
            h = k // 2
            # Two rescale sweeps of 3h adds each on output pieces, two
            # combine/uncombine sweeps of 2h adds each on input pieces,
            # and three half-size subproblems.
            memo[k] = 6 * h * cost_out + 4 * h * cost_in + 3 * recursion(h)
        return memo[k]

    fold = cfg.output_piece_count * cost_out
    return 2 * recursion(cfg.piece_count) + fold


def predicted_space_bits(n):
    """Predicted high-water storage for one piecewise n-bit multiply.

    Matches the traced high-water mark exactly: two padded input piece
    buffers, the output piece buffer, and one adder workspace bit.
    """
    cfg = choose_parameters(n)
    input_bits = cfg.piece_count * cfg.input_piece_width
    output_bits = cfg.output_piece_count * cfg.output_piece_width
    workspace = 1
    return SpaceEstimate(
        input_bits=input_bits,
        output_bits=output_bits,
        workspace_bits=workspace,
        io_register_bits=4 * n,
        total_high_water=2 * input_bits + output_bits + workspace,
    )


def fit_loglog_slope(points):
    """Least-squares slope of lg(count) against lg(n).

    ``points`` is an iterable of (n, count) pairs with positive entries and
    at least two distinct n values.
    """
    pts = list(points)
    if len(pts) < 2:
        raise ValueError("slope fit needs at least two points")
    if any(n <= 0 or c <= 0 for n, c in pts):
        raise ValueError("slope fit needs positive sizes and counts")
    xs = [math.log2(n) for n, _ in pts]
    ys = [math.log2(c) for _, c in pts]
    try:
        return statistics.linear_regression(xs, ys).slope
    except statistics.StatisticsError as exc:
        raise ValueError("slope fit needs at least two distinct sizes") from exc


def classical_karatsuba_multiply(u, v):
    """Product of two nonnegative ints by balanced divide and conquer.

    Plain integer arithmetic, no windows, no metering: an independent
    oracle for checking the reversible pipeline's outputs.  Small operands
    multiply natively; larger ones split at half the wider operand's bit
    length into three subproducts.
    """
    if not isinstance(u, int) or not isinstance(v, int) or u < 0 or v < 0:
        raise ValueError("operands must be nonnegative ints")
    if u < (1 << 32) or v < (1 << 32):
        return u * v
    shift = max(u.bit_length(), v.bit_length()) >> 1
    mask = (1 << shift) - 1
    u_low, u_high = u & mask, u >> shift
    v_low, v_high = v & mask, v >> shift
    low = classical_karatsuba_multiply(u_low, v_low)
    high = classical_karatsuba_multiply(u_high, v_high)
    mid = classical_karatsuba_multiply(u_low + u_high, v_low + v_high) - low - high
    return low + (mid << shift) + (high << (2 * shift))
