"""Backend selection for the hot search loops.

The compiled extension is used when it was built; setting the environment
variable ``MCG4_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
import os

from . import _isosearch_py

INT64_LIMIT = 2**62

if os.environ.get("MCG4_PURE_PYTHON", "") not in ("", "0"):
    _compiled = None
else:
    try:
        from . import _isosearch as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def available_backends() -> list[str]:
    return ["cython", "python"] if _compiled is not None else ["python"]


def search_table(inner, offsets, flat, gram, backend: str = None):
    """Prepared search problem exposing ``find_completion`` and ``count_completions``."""
    backend = backend or BACKEND
    if backend not in ("cython", "python"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernel is not available")
        fits = all(abs(x) < INT64_LIMIT for r in inner for x in r) and all(
            abs(x) < INT64_LIMIT for r in gram for x in r
        )
        if fits:
            return _compiled.SearchTable(inner, offsets, flat, gram)
    return _isosearch_py.SearchTable(inner, offsets, flat, gram)
