"""Selects the compiled evaluation core when available.

Set KDM_PURE_PYTHON=1 to force the numpy fallback (used by the backend
parity tests and the benchmark script).
"""

from __future__ import annotations

import os

from . import _core_py

try:
    from . import _core  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - build environment dependent
    _core = None

if _core is not None and os.environ.get("KDM_PURE_PYTHON", "") != "1":
    impl = _core
    COMPILED = True
else:
    impl = _core_py
    COMPILED = False

gram = impl.gram
gaussian_cross_derivs = impl.gaussian_cross_derivs
cos_features = impl.cos_features
cos_feature_derivs = impl.cos_feature_derivs
