"""Kernel backend selection.

The residual-digraph search is the hot loop of the solver.  A compiled
Cython twin of the pure-Python kernel is used when it has been built;
``HIVEFLOW_BACKEND=pure`` or ``fast`` forces one side (``fast`` raises if
the extension is missing).  Both backends are observationally identical.
"""

import os

from . import pure

_requested = os.environ.get("HIVEFLOW_BACKEND", "auto").lower()

impl = pure
backend_name = "pure"

if _requested in ("auto", "fast"):
    try:
        from . import _fast as _fast_mod
        impl = _fast_mod
        backend_name = "fast"
    except ImportError:
        if _requested == "fast":
            raise ImportError(
                "HIVEFLOW_BACKEND=fast but the compiled kernel is not built; "
                "run `pip install -e .` or `python setup.py build_ext --inplace`"
            )
elif _requested != "pure":
    raise ValueError(f"unknown HIVEFLOW_BACKEND {_requested!r}")


def get_backends():
    """All importable backends, for benchmarks and equivalence tests."""
    out = {"pure": pure}
    try:
        from . import _fast as _fast_mod
        out["fast"] = _fast_mod
    except ImportError:
        pass
    return out
