"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The backend is chosen at import. ``GROWDESTROY_BACKEND=python`` forces the
fallback, ``=cython`` makes a missing extension an ImportError; the default
uses the extension when it is importable.
"""

import os

from . import _pykernels

_requested = os.environ.get("GROWDESTROY_BACKEND", "auto").lower()

if _requested == "python":
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        if _requested == "cython":
            raise
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

GENERAL = _pykernels.GENERAL
CENTRAL = _pykernels.CENTRAL
PERIPHERAL = _pykernels.PERIPHERAL

grow_edges = _impl.grow_edges
attack_order = _impl.attack_order
component_labels = _impl.component_labels
local_clustering_all = _impl.local_clustering_all
weighted_draws = _impl.weighted_draws


def get_backend(name):
    """Kernel module by name (``"python"`` or ``"cython"``)."""
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
