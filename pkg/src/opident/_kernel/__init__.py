"""Kernel selection: compiled extension when available, pure Python otherwise.

Set OPIDENT_PURE_PYTHON=1 to force the fallback (used by the benchmark and
the kernel-parity tests).
"""

import os

if os.environ.get("OPIDENT_PURE_PYTHON"):
    from . import pycore as impl
else:
    try:
        from . import _cycore as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import pycore as impl

BACKEND = impl.BACKEND


def both_backends():
    """(name, module) pairs for every importable backend."""
    from . import pycore

    out = [("python", pycore)]
    try:
        from . import _cycore

        out.append(("cython", _cycore))
    except ImportError:
        pass
    return out
