"""Backend selection for the numeric kernels.

The compiled extension is used when it imports; setting the environment
variable ``UVORBITS_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from . import _pykernels

OK, ESCAPED, SINGULAR = _pykernels.OK, _pykernels.ESCAPED, _pykernels.SINGULAR


def _load():
    if os.environ.get("UVORBITS_PURE_PYTHON", "") not in ("", "0"):
        return None
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels


_compiled = _load()
BACKEND = "cython" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _pykernels


def available() -> dict:
    """Every importable backend by name (the fallback is always present)."""
    out = {"python": _pykernels}
    if _compiled is not None:
        out["cython"] = _compiled
    else:
        try:
            from . import _ckernels

            out["cython"] = _ckernels
        except ImportError:
            pass
    return out


def sweep(cs, uv, transient, keep, escape_radius, singular_tol=1e-12):
    import numpy as np

    return _impl.sweep(np.ascontiguousarray(cs, dtype=float), bool(uv), int(transient), int(keep),
                       float(escape_radius), float(singular_tol))


def eval_grid(coeffs, us, vs):
    import numpy as np

    return _impl.eval_grid(
        np.ascontiguousarray(coeffs, dtype=float),
        np.ascontiguousarray(us, dtype=float),
        np.ascontiguousarray(vs, dtype=float),
    )
