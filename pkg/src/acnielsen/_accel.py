"""Select the kernel backend.

Set ``ACNIELSEN_NUMBA=0`` to force the pure numpy/scipy path; by default
numba is used when it imports.
"""
from __future__ import annotations

import os

_FLAG = os.environ.get("ACNIELSEN_NUMBA", "1").strip().lower()

try:
    import numba

    HAVE_NUMBA = True
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # the default probe warns about old TBB builds before falling back
        numba.config.THREADING_LAYER = "workqueue"
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _FLAG not in ("0", "false", "no", "off")


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"


def set_workers(workers: int | None) -> None:
    if workers and USE_NUMBA:
        import numba

        numba.set_num_threads(max(1, min(int(workers), numba.config.NUMBA_NUM_THREADS)))
