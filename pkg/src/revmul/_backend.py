"""Kernel selection: the compiled extension when available, pure Python otherwise.

Set REVMUL_BACKEND=python to force the pure path, or REVMUL_BACKEND=compiled
to insist on the extension (import fails if it was not built).
"""

import os

try:
    from . import _kernel
except ImportError:
    _kernel = None

_requested = os.environ.get("REVMUL_BACKEND", "").strip().lower()
if _requested == "python":
    _kernel = None
elif _requested == "compiled" and _kernel is None:
    raise ImportError("REVMUL_BACKEND=compiled but the compiled kernel is not built")
elif _requested not in ("", "auto", "compiled", "python"):
    raise ValueError(f"REVMUL_BACKEND must be 'compiled', 'python' or 'auto', got {_requested!r}")


def kernel():
    """The compiled kernel module, or None when running pure Python."""
    return _kernel


def active_backend():
    return "python" if _kernel is None else "compiled"
