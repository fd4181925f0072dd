"""Pure-numpy implementations of the table kernels (reshape/broadcast based)."""
from __future__ import annotations

import numpy as np


def reduce_sum(src: np.ndarray, shape, keep) -> np.ndarray:
    arr = src.reshape(tuple(shape))
    keep = set(int(a) for a in keep)
    drop = tuple(a for a in range(arr.ndim) if a not in keep)
    return np.asarray(arr.sum(axis=drop)).ravel()


def mul_broadcast(dst: np.ndarray, shape, src: np.ndarray, axes) -> None:
    bshape = [1] * len(shape)
    for a in axes:
        bshape[int(a)] = int(shape[int(a)])
    view = dst.reshape(tuple(shape))
    view *= src.reshape(tuple(bshape))


def safe_divide(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=den != 0)
    return out


def take_axis(src: np.ndarray, shape, axis: int, index: int) -> np.ndarray:
    return np.ascontiguousarray(src.reshape(tuple(shape)).take(int(index), axis=int(axis))).ravel()


def zero_axis(cells: np.ndarray, shape, axis: int, index: int) -> None:
    view = cells.reshape(tuple(shape))
    n = int(shape[int(axis)])
    others = [i for i in range(n) if i != int(index)]
    sl = [slice(None)] * len(shape)
    sl[int(axis)] = others
    view[tuple(sl)] = 0.0
