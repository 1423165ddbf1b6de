"""Exact row-reduction kernel with backend selection.

The compiled kernel is used when available; set ``NEVSMT_KERNEL=py`` to force
the pure-Python fallback or ``NEVSMT_KERNEL=c`` to insist on the extension.
Both backends implement the identical contract and produce identical results.
"""

import os

from nevsmt._kernel.pyreduce import RowReducer as PyRowReducer

_requested = os.environ.get("NEVSMT_KERNEL", "").strip().lower()

CRowReducer = None
if _requested != "py":
    try:
        from nevsmt._kernel._creduce import RowReducer as CRowReducer
    except ImportError:
        CRowReducer = None
    if _requested == "c" and CRowReducer is None:
        raise ImportError(
            "NEVSMT_KERNEL=c requested but the compiled kernel is not built"
        )

if CRowReducer is not None:
    RowReducer = CRowReducer
    KERNEL_BACKEND = "c"
else:
    RowReducer = PyRowReducer
    KERNEL_BACKEND = "py"

__all__ = ["RowReducer", "PyRowReducer", "CRowReducer", "KERNEL_BACKEND"]
