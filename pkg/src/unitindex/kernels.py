"""Backend selection for the per-d hot loop.

The compiled ``_core`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` take over. Set ``UNITINDEX_PURE_PYTHON=1`` to
force the fallback.
"""

from __future__ import annotations

import os

if os.environ.get("UNITINDEX_PURE_PYTHON", "") not in ("", "0"):
    from ._pykernels import records_d, sweep_d

    BACKEND = "python"
else:
    try:
        from ._core import records_d, sweep_d

        BACKEND = "cython"
    except ImportError:
        from ._pykernels import records_d, sweep_d

        BACKEND = "python"

__all__ = ["BACKEND", "records_d", "sweep_d"]
