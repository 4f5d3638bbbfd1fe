"""Backend selection for the hot kernels.

The compiled extension ``exactkit._corec`` is preferred when available;
``exactkit._corepy`` is the pure-Python fallback.  Set
``EXACTKIT_BACKEND=py`` or ``EXACTKIT_BACKEND=c`` to force one side
(forcing ``c`` raises if the extension was not built).
"""

import os

_requested = os.environ.get("EXACTKIT_BACKEND", "").strip().lower()

if _requested == "py":
    from . import _corepy as _impl

    BACKEND = "python"
elif _requested == "c":
    from . import _corec as _impl  # noqa: F401  (hard failure wanted)

    BACKEND = "c"
elif _requested:
    raise ValueError("EXACTKIT_BACKEND must be 'py' or 'c', got %r" % _requested)
else:
    try:
        from . import _corec as _impl

        BACKEND = "c"
    except ImportError:
        from . import _corepy as _impl

        BACKEND = "python"

mat_mul = _impl.mat_mul
rref = _impl.rref
