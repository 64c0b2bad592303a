"""Kernel selection: compiled extension when available, pure Python otherwise.

Set GRITTER_PURE_PYTHON=1 to force the fallback (used by the benchmark and
the parity tests). Both implementations produce identical output.
"""

import os

if os.environ.get("GRITTER_PURE_PYTHON"):
    from gritter._kernels_py import IMPL, INF, dijkstra
else:
    try:
        from gritter._kernels import IMPL, INF, dijkstra
    except ImportError:
        from gritter._kernels_py import IMPL, INF, dijkstra

__all__ = ["dijkstra", "INF", "IMPL"]
