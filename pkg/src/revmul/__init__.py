"""Reversible multiply-accumulate with exact gate and space metering.

The package runs big-integer multiply-accumulate the way an in-place
reversible circuit would: every step is a modular add that a sign flip
undoes, temporaries are verified zero and released, and a ResourceLog
records exactly what the run cost.  A closed-form predictor reproduces the
traced counts without executing anything, and a CLI exports CSV traces.
"""

from ._backend import active_backend
from .analysis import (
    SpaceEstimate,
    SweepPoint,
    classical_karatsuba_multiply,
    fit_loglog_slope,
    predicted_space_bits,
    predicted_toffoli_count,
)
from .bitbuf import BitBuffer, Window
from .karatsuba import (
    MultiplierConfig,
    PieceArray,
    UncomputeError,
    add_product_into_pieces,
    allocate_output_pieces,
    choose_parameters,
    fold_pieces_into_target,
    multiply_add,
    multiply_add_schoolbook,
    release_zeroed,
    split_into_padded_pieces,
    unsplit_and_release,
)
from .revarith import (
    DEFAULT_COST_MODEL,
    AliasingError,
    CostModel,
    plus_equal,
    plus_equal_product_schoolbook,
)
from .tracer import AccountingError, ResourceLog, ResourceReport

__version__ = "0.1.0"

__all__ = [
    "AccountingError",
    "AliasingError",
    "BitBuffer",
    "CostModel",
    "DEFAULT_COST_MODEL",
    "MultiplierConfig",
    "PieceArray",
    "ResourceLog",
    "ResourceReport",
    "SpaceEstimate",
    "SweepPoint",
    "UncomputeError",
    "Window",
    "active_backend",
    "add_product_into_pieces",
    "allocate_output_pieces",
    "choose_parameters",
    "classical_karatsuba_multiply",
    "fit_loglog_slope",
    "fold_pieces_into_target",
    "multiply_add",
    "multiply_add_schoolbook",
    "plus_equal",
    "plus_equal_product_schoolbook",
    "predicted_space_bits",
    "predicted_toffoli_count",
    "release_zeroed",
    "split_into_padded_pieces",
    "unsplit_and_release",
    "__version__",
]
