"""Kernel backend selection.

The compiled Philox kernel is preferred when its extension module imports
cleanly; otherwise the pure NumPy fallback is used.  Both produce
bit-identical streams, so the choice affects speed only.

Set ``ORDSTAT_KERNEL=python`` or ``ORDSTAT_KERNEL=compiled`` to force a
backend (the latter raises if the extension is missing).
"""

import os

_forced = os.environ.get("ORDSTAT_KERNEL", "").strip().lower()

if _forced == "python":
    from . import _philox_np as _impl
elif _forced == "compiled":
    from . import _philox_cy as _impl  # noqa: F401  (ImportError is the point)
else:
    try:
        from . import _philox_cy as _impl
    except ImportError:
        from . import _philox_np as _impl

BACKEND = _impl.BACKEND_NAME
philox_block = _impl.philox_block
uniform_matrix = _impl.uniform_matrix

__all__ = ["BACKEND", "philox_block", "uniform_matrix"]
