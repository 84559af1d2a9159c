import random

import pytest

from revmul import BitBuffer, ResourceLog, multiply_add
from revmul import _backend


def make_registers(n):
    """A 4n-bit register bank: (target, u, v) windows, pairwise disjoint."""
    regs = BitBuffer(4 * n)
    return regs.window(0, 2 * n), regs.window(2 * n, n), regs.window(3 * n, n)


def run_multiply(n, start, u_value, v_value, sign=1, config=None):
    """One metered multiply; returns (result, log, windows)."""
    target, u, v = make_registers(n)
    target.write_uint(start)
    u.write_uint(u_value)
    v.write_uint(v_value)
    log = ResourceLog()
    multiply_add(target, u, v, sign, log, config=config)
    return target.read_uint(), log, (target, u, v)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


@pytest.fixture
def pure_backend(monkeypatch):
    """Force the pure Python recursion regardless of what is installed."""
    monkeypatch.setattr(_backend, "_kernel", None)
    yield
