"""Backend selection for the hot integration loops.

The compiled Cython extension is used when it imported successfully; the
numpy fallback otherwise. Set ``NUDGEFIT_PURE_PYTHON=1`` to force the
fallback (useful for debugging and for the backend benchmark).
"""

import os

from . import ode_py

_force_py = os.environ.get("NUDGEFIT_PURE_PYTHON", "").strip() not in ("", "0")

if _force_py:
    _backend = ode_py
else:
    try:
        from . import _ode as _backend
    except ImportError:
        _backend = ode_py

BACKEND = _backend.BACKEND
advance_l63 = _backend.advance_l63
advance_l96 = _backend.advance_l96

__all__ = ["BACKEND", "advance_l63", "advance_l96", "ode_py"]
