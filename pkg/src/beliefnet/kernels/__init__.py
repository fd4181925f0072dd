"""Table-operation kernels with switchable backends.

The hot loops of propagation (marginalization, broadcast multiplication,
restriction repacking) are implemented twice: a numba-jitted backend and a
pure-numpy fallback. Selection order:

1. ``BELIEFNET_KERNELS`` environment variable (``numba`` or ``numpy``),
2. numba if it imports cleanly,
3. numpy otherwise.

``set_backend`` switches at runtime (used by the benchmark and the tests).
"""
from __future__ import annotations

import os

from . import numpy_backend

_BACKENDS = {"numpy": numpy_backend}
_active_name = "numpy"
_active = numpy_backend


def _load_numba_backend():
    if "numba" not in _BACKENDS:
        from . import numba_backend  # deferred: numba import is slow

        _BACKENDS["numba"] = numba_backend
    return _BACKENDS["numba"]


def set_backend(name: str) -> str:
    """Select the kernel backend by name; returns the previously active name."""
    global _active, _active_name
    previous = _active_name
    if name == "numpy":
        _active = numpy_backend
    elif name == "numba":
        _active = _load_numba_backend()
    else:
        raise ValueError(f"unknown kernel backend {name!r} (use 'numba' or 'numpy')")
    _active_name = name
    return previous


def active_backend() -> str:
    return _active_name


def available_backends() -> list[str]:
    names = ["numpy"]
    try:
        _load_numba_backend()
        names.insert(0, "numba")
    except Exception:
        pass
    return names


def _init_from_env():
    choice = os.environ.get("BELIEFNET_KERNELS", "").strip().lower()
    if choice:
        set_backend(choice)
        return
    try:
        set_backend("numba")
    except Exception:
        set_backend("numpy")


_init_from_env()


def reduce_sum(src, shape, keep):
    return _active.reduce_sum(src, shape, keep)


def mul_broadcast(dst, shape, src, axes):
    return _active.mul_broadcast(dst, shape, src, axes)


def safe_divide(num, den):
    return _active.safe_divide(num, den)


def take_axis(src, shape, axis, index):
    return _active.take_axis(src, shape, axis, index)


def zero_axis(cells, shape, axis, index):
    return _active.zero_axis(cells, shape, axis, index)
