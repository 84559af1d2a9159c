"""Reversible in-place arithmetic on windows, with per-operation cost metering.

Every operation here maps cleanly onto an in-place modular adder circuit:
it mutates its target window, leaves every other window untouched, and is
undone exactly by the same call with the sign flipped.  Costs are charged
to the supplied ResourceLog through a CostModel, and depend only on the
operand widths, never on the data.
"""

from dataclasses import dataclass
from typing import Callable


class AliasingError(ValueError):
    """Raised when operand windows overlap in a way the operation forbids."""


def _ripple_add_cost(width):
    """Toffoli count of an in-place width-bit controlled-free adder."""
    return 2 * width if width > 0 else 0


def _ripple_ctrl_add_cost(width):
    """Toffoli count of an in-place width-bit singly-controlled adder."""
    return 2 * width + 1 if width > 0 else 0


def _ripple_workspace(width):
    """Workspace bits the adder needs: one running carry."""
    return 1 if width > 0 else 0


@dataclass(frozen=True)
class CostModel:
    """Prices for the adder family, each a map from operand width to count.

    All three maps must return nonnegative ints and must return 0 for
    widths <= 0.
    """

    add_cost: Callable[[int], int]
    ctrl_add_cost: Callable[[int], int]
    ancilla_add: Callable[[int], int]


DEFAULT_COST_MODEL = CostModel(
    add_cost=_ripple_add_cost,
    ctrl_add_cost=_ripple_ctrl_add_cost,
    ancilla_add=_ripple_workspace,
)


def check_sign(sign):
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")


def schoolbook_product_cost(factor1_width, factor2_width, target_width, model):
    """Charge for one multiply-accumulate: one controlled add per factor1 bit.

    Bit i of factor1 controls an add of factor2 into the target at shift i,
    so the effective adder width shrinks as i approaches the target's top.
    """
    return sum(
        model.ctrl_add_cost(min(factor2_width, target_width - i))
        for i in range(factor1_width)
    )


def plus_equal(target, source, sign, log, *, model=DEFAULT_COST_MODEL):
    """target += sign * source, mod 2**target.width.

    The windows must be identical or fully disjoint.  Passing the target as
    its own source doubles it (sign +1) or zeroes it (sign -1).  A source
    wider than the target is truncated to the target's width, and the
    charge is one add at the narrower of the two widths.
    """
    check_sign(sign)
    if target.overlaps(source) and not target.same_window(source):
        raise AliasingError("plus_equal operands partially overlap")
    log.record_toffoli(model.add_cost(min(target.width, source.width)))
    target.offset_uint(sign * source.read_uint())


def plus_equal_product_schoolbook(target, factor1, factor2, sign, log, *, model=DEFAULT_COST_MODEL):
    """target += sign * factor1 * factor2, mod 2**target.width.

    All three windows must be pairwise disjoint.
    """
    check_sign(sign)
    if target.overlaps(factor1) or target.overlaps(factor2) or factor1.overlaps(factor2):
        raise AliasingError("product operands must be pairwise disjoint")
    log.record_toffoli(
        schoolbook_product_cost(factor1.width, factor2.width, target.width, model)
    )
    target.offset_uint(sign * (factor1.read_uint() * factor2.read_uint()))
