"""Kernel backend selection.

The compiled Cython extension is preferred when present; the numpy
fallback is always available. Set TELEGUARD_KERNELS=python to force the
fallback or TELEGUARD_KERNELS=compiled to require the extension.
"""

import os

from . import _pykern

_requested = os.environ.get("TELEGUARD_KERNELS", "").strip().lower()

if _requested == "python":
    backend = _pykern
else:
    try:
        from . import _nkern as backend  # type: ignore[no-redef]
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "TELEGUARD_KERNELS=compiled but the compiled extension is not built"
            )
        backend = _pykern

BACKEND_NAME: str = backend.NAME
