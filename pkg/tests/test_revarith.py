"""In-place add and multiply-accumulate: data semantics, costs, aliasing."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revmul import (
    AliasingError,
    BitBuffer,
    CostModel,
    DEFAULT_COST_MODEL,
    ResourceLog,
    plus_equal,
    plus_equal_product_schoolbook,
)
from revmul.revarith import schoolbook_product_cost


def _windows(*widths):
    gap = 3  # unaligned on purpose
    total = sum(widths) + gap * (len(widths) + 1)
    buf = BitBuffer(total)
    out = []
    offset = gap
    for w in widths:
        out.append(buf.window(offset, w))
        offset += w + gap
    return out


def test_default_cost_model_values():
    model = DEFAULT_COST_MODEL
    assert [model.add_cost(k) for k in (0, 1, 4, 10)] == [0, 2, 8, 20]
    assert [model.ctrl_add_cost(k) for k in (0, 1, 4, 10)] == [0, 3, 9, 21]
    assert [model.ancilla_add(k) for k in (0, 1, 64)] == [0, 1, 1]
    assert model.add_cost(-3) == 0 and model.ctrl_add_cost(-3) == 0


def test_plus_equal_example():
    target, source = _windows(4, 4)
    target.write_uint(10)
    source.write_uint(6)
    log = ResourceLog()
    plus_equal(target, source, 1, log)
    assert target.read_uint() == 0
    assert source.read_uint() == 6
    assert log.toffoli == 8  # one 4-bit add


def test_plus_equal_subtract_restores():
    target, source = _windows(7, 7)
    target.write_uint(45)
    source.write_uint(99)
    log = ResourceLog()
    plus_equal(target, source, 1, log)
    plus_equal(target, source, -1, log)
    assert target.read_uint() == 45
    assert log.toffoli == 28


def test_plus_equal_truncates_wide_source():
    target, source = _windows(3, 9)
    target.write_uint(5)
    source.write_uint(0b110101010)
    log = ResourceLog()
    plus_equal(target, source, 1, log)
    assert target.read_uint() == (5 + 0b010) % 8
    assert log.toffoli == DEFAULT_COST_MODEL.add_cost(3)


def test_plus_equal_same_window_doubles_and_zeroes():
    (win,) = _windows(6)
    win.write_uint(23)
    log = ResourceLog()
    plus_equal(win, win, 1, log)
    assert win.read_uint() == 46
    plus_equal(win, win, -1, log)
    assert win.read_uint() == 0


def test_plus_equal_partial_overlap_rejected():
    buf = BitBuffer(16)
    a = buf.window(0, 8)
    b = buf.window(4, 8)
    log = ResourceLog()
    with pytest.raises(AliasingError):
        plus_equal(a, b, 1, log)
    assert log.toffoli == 0


def test_sign_validation():
    target, source = _windows(4, 4)
    log = ResourceLog()
    for bad in (0, 2, -2, None, 1.0):
        with pytest.raises(ValueError):
            plus_equal(target, source, bad, log)


def test_product_example():
    target, f1, f2 = _windows(8, 4, 4)
    f1.write_uint(5)
    f2.write_uint(6)
    log = ResourceLog()
    plus_equal_product_schoolbook(target, f1, f2, 1, log)
    assert target.read_uint() == 30
    # One controlled add per factor1 bit, each at min(4, 8 - i) = 4 bits.
    assert log.toffoli == 4 * DEFAULT_COST_MODEL.ctrl_add_cost(4)


def test_product_narrow_target_truncates():
    target, f1, f2 = _windows(4, 4, 4)
    target.write_uint(3)
    f1.write_uint(5)
    f2.write_uint(6)
    log = ResourceLog()
    plus_equal_product_schoolbook(target, f1, f2, -1, log)
    assert target.read_uint() == (3 - 30) % 16
    expected = sum(DEFAULT_COST_MODEL.ctrl_add_cost(min(4, 4 - i)) for i in range(4))
    assert log.toffoli == expected == 9 + 7 + 5 + 3


def test_product_aliasing_rejected():
    buf = BitBuffer(32)
    log = ResourceLog()
    t = buf.window(0, 8)
    f1 = buf.window(6, 4)
    f2 = buf.window(20, 4)
    with pytest.raises(AliasingError):
        plus_equal_product_schoolbook(t, f1, f2, 1, log)
    f1 = buf.window(10, 4)
    with pytest.raises(AliasingError):
        plus_equal_product_schoolbook(t, f1, f1, 1, log)


def test_costs_are_data_independent():
    logs = []
    for fill in (0, 0b1011, 0b1111):
        target, source = _windows(4, 4)
        target.write_uint(fill)
        source.write_uint(fill ^ 0b0110)
        log = ResourceLog()
        plus_equal(target, source, 1, log)
        plus_equal_product_schoolbook(*_windows(8, 4, 4), -1, log)
        logs.append(log.toffoli)
    assert len(set(logs)) == 1


def test_custom_cost_model():
    model = CostModel(
        add_cost=lambda k: 3 * k + 1 if k > 0 else 0,
        ctrl_add_cost=lambda k: k * k if k > 0 else 0,
        ancilla_add=lambda k: 2 if k > 0 else 0,
    )
    target, source = _windows(5, 9)
    log = ResourceLog()
    plus_equal(target, source, 1, log, model=model)
    assert log.toffoli == 16
    target, f1, f2 = _windows(6, 3, 5)
    log = ResourceLog()
    plus_equal_product_schoolbook(target, f1, f2, 1, log, model=model)
    assert log.toffoli == 25 + 25 + 16
    assert schoolbook_product_cost(3, 5, 6, model) == 66


def test_ten_thousand_randomized_products():
    """Randomized mixed-width sweep against plain integer arithmetic."""
    rng = random.Random(99)
    log = ResourceLog()
    for _ in range(10_000):
        wt = rng.randint(1, 64)
        w1 = rng.randint(1, 64)
        w2 = rng.randint(1, 64)
        target, f1, f2 = _windows(wt, w1, w2)
        t0 = rng.getrandbits(wt)
        a = rng.getrandbits(w1)
        b = rng.getrandbits(w2)
        sign = rng.choice((1, -1))
        target.write_uint(t0)
        f1.write_uint(a)
        f2.write_uint(b)
        plus_equal_product_schoolbook(target, f1, f2, sign, log)
        assert target.read_uint() == (t0 + sign * a * b) % (1 << wt)
        assert f1.read_uint() == a and f2.read_uint() == b


@given(
    wt=st.integers(1, 48),
    ws=st.integers(1, 48),
    t0=st.integers(0),
    s=st.integers(0),
    sign=st.sampled_from([1, -1]),
)
@settings(max_examples=200, deadline=None)
def test_plus_equal_matches_integers(wt, ws, t0, s, sign):
    target, source = _windows(wt, ws)
    target.write_uint(t0)
    source.write_uint(s)
    t0 &= (1 << wt) - 1
    s &= (1 << ws) - 1
    log = ResourceLog()
    plus_equal(target, source, sign, log)
    assert target.read_uint() == (t0 + sign * s) % (1 << wt)
    assert source.read_uint() == s
    assert log.toffoli == DEFAULT_COST_MODEL.add_cost(min(wt, ws))


@given(
    wt=st.integers(1, 24),
    w1=st.integers(1, 24),
    w2=st.integers(1, 24),
    values=st.tuples(st.integers(0), st.integers(0), st.integers(0)),
    sign=st.sampled_from([1, -1]),
)
@settings(max_examples=200, deadline=None)
def test_product_round_trip(wt, w1, w2, values, sign):
    """Apply then invert; target restored and charge the same both ways."""
    target, f1, f2 = _windows(wt, w1, w2)
    t0, a, b = values
    target.write_uint(t0)
    f1.write_uint(a)
    f2.write_uint(b)
    before = target.read_uint()
    log = ResourceLog()
    plus_equal_product_schoolbook(target, f1, f2, sign, log)
    forward = log.toffoli
    plus_equal_product_schoolbook(target, f1, f2, -sign, log)
    assert target.read_uint() == before
    assert log.toffoli == 2 * forward
