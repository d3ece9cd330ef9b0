"""LCS backend selection.

Prefers the compiled kernel when the extension built; falls back to the
pure-Python implementation. REMAP_PURE_PYTHON=1 forces the fallback (used
by the benchmark and by tests that compare backends).
"""

from __future__ import annotations

import os

from ._lcs_py import lcs_length as _lcs_py

if os.environ.get("REMAP_PURE_PYTHON") == "1":
    lcs_length = _lcs_py
    BACKEND = "python"
else:
    try:
        from ._lcs_c import lcs_length as _lcs_c

        lcs_length = _lcs_c
        BACKEND = "c"
    except ImportError:
        lcs_length = _lcs_py
        BACKEND = "python"
