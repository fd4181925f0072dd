"""Numba implementations of the table kernels.

All tables are flat contiguous float64 arrays in row-major mixed-radix layout
(last axis fastest). Shapes and axis lists arrive as int64 arrays. The loops
walk the flat index with an odometer instead of divmod per cell.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _reduce_sum(src, shape, keep, out):
    ndim = shape.size
    dstride = np.zeros(ndim, np.int64)
    s = 1
    for k in range(keep.size - 1, -1, -1):
        a = keep[k]
        dstride[a] = s
        s *= shape[a]
    digits = np.zeros(ndim, np.int64)
    j = 0
    for i in range(src.size):
        out[j] += src[i]
        for a in range(ndim - 1, -1, -1):
            digits[a] += 1
            j += dstride[a]
            if digits[a] == shape[a]:
                j -= dstride[a] * shape[a]
                digits[a] = 0
            else:
                break
    return out


@njit(cache=True)
def _mul_broadcast(dst, shape, src, axes):
    ndim = shape.size
    sstride = np.zeros(ndim, np.int64)
    s = 1
    for k in range(axes.size - 1, -1, -1):
        a = axes[k]
        sstride[a] = s
        s *= shape[a]
    digits = np.zeros(ndim, np.int64)
    j = 0
    for i in range(dst.size):
        dst[i] *= src[j]
        for a in range(ndim - 1, -1, -1):
            digits[a] += 1
            j += sstride[a]
            if digits[a] == shape[a]:
                j -= sstride[a] * shape[a]
                digits[a] = 0
            else:
                break


@njit(cache=True)
def _safe_divide(num, den, out):
    for i in range(num.size):
        d = den[i]
        out[i] = num[i] / d if d != 0.0 else 0.0
    return out


@njit(cache=True)
def _take_axis(src, shape, axis, index, out):
    inner = 1
    for a in range(axis + 1, shape.size):
        inner *= shape[a]
    outer = 1
    for a in range(axis):
        outer *= shape[a]
    n = shape[axis]
    k = 0
    for o in range(outer):
        base = (o * n + index) * inner
        for i in range(inner):
            out[k] = src[base + i]
            k += 1
    return out


@njit(cache=True)
def _zero_axis(cells, shape, axis, index):
    inner = 1
    for a in range(axis + 1, shape.size):
        inner *= shape[a]
    n = shape[axis]
    outer = cells.size // (inner * n)
    for o in range(outer):
        for v in range(n):
            if v == index:
                continue
            base = (o * n + v) * inner
            for i in range(inner):
                cells[base + i] = 0.0


def _as_idx(a):
    return np.asarray(a, dtype=np.int64)


def reduce_sum(src, shape, keep):
    shape = _as_idx(shape)
    keep = _as_idx(keep)
    size = 1
    for a in keep:
        size *= int(shape[a])
    out = np.zeros(size, np.float64)
    return _reduce_sum(src, shape, keep, out)


def mul_broadcast(dst, shape, src, axes):
    _mul_broadcast(dst, _as_idx(shape), src, _as_idx(axes))


def safe_divide(num, den):
    return _safe_divide(num, den, np.empty_like(num))


def take_axis(src, shape, axis, index):
    shape = _as_idx(shape)
    out = np.empty(src.size // int(shape[axis]), np.float64)
    return _take_axis(src, shape, int(axis), int(index), out)


def zero_axis(cells, shape, axis, index):
    _zero_axis(cells, _as_idx(shape), int(axis), int(index))


def warmup():
    """Force-compile every kernel on tiny inputs."""
    src = np.arange(8.0)
    shape = np.array([2, 2, 2], np.int64)
    reduce_sum(src, shape, np.array([0, 2], np.int64))
    mul_broadcast(src.copy(), shape, np.array([2.0, 3.0]), np.array([1], np.int64))
    safe_divide(src, src[::-1].copy())
    take_axis(src, shape, 1, 0)
    zero_axis(src.copy(), shape, 2, 1)
