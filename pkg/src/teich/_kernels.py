"""Kernel selection: compiled ``_ckernels`` when importable, else pure Python.

Set ``TEICH_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from teich import _purekernels

BACKEND = "python"
_impl = _purekernels

if os.environ.get("TEICH_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from teich import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _purekernels

free_reduce = _impl.free_reduce
cyclic_reduce = _impl.cyclic_reduce
canonical_cyclic = _impl.canonical_cyclic
britton_count = _impl.britton_count
word_product = _impl.word_product
