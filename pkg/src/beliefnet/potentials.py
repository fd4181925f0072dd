"""Dense nonnegative tables over ordered variable scopes.

A table's scope is a tuple of variable positions sorted ascending (declaration
order). ``allowed[k]`` lists the value indices still admissible for scope
variable k; the flat ``cells`` array always has exactly ``prod(len(allowed))``
entries in mixed-radix layout, last scope variable fastest. Evidence
absorption physically repacks the array, so restricted tables really shrink.
"""
from __future__ import annotations

import math

import numpy as np

from . import kernels
from .errors import EvidenceError


class PotentialTable:
    __slots__ = ("scope", "allowed", "cells")

    def __init__(self, scope, allowed, cells):
        self.scope: tuple[int, ...] = tuple(scope)
        self.allowed: list[np.ndarray] = [np.asarray(a, dtype=np.int64) for a in allowed]
        self.cells: np.ndarray = np.ascontiguousarray(cells, dtype=np.float64).ravel()
        assert self.cells.size == self.ncells_expected

    @classmethod
    def ones(cls, scope, cards) -> "PotentialTable":
        allowed = [np.arange(k, dtype=np.int64) for k in cards]
        return cls(tuple(scope), allowed, np.ones(math.prod(len(a) for a in allowed)))

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.allowed)

    @property
    def ncells(self) -> int:
        return self.cells.size

    @property
    def ncells_expected(self) -> int:
        return math.prod(len(a) for a in self.allowed)

    def copy(self) -> "PotentialTable":
        return PotentialTable(self.scope, [a.copy() for a in self.allowed], self.cells.copy())

    def axis_of(self, var: int) -> int:
        return self.scope.index(var)

    def is_restricted_to(self, var: int, value: int) -> bool:
        a = self.allowed[self.axis_of(var)]
        return len(a) == 1 and int(a[0]) == value

    def restrict(self, var: int, value: int) -> int:
        """Drop all cells incompatible with var=value and repack.

        Returns the number of cells scanned (the pre-restriction count), or 0
        if the table was already restricted to this value.
        """
        axis = self.axis_of(var)
        allowed = self.allowed[axis]
        if len(allowed) == 1 and int(allowed[0]) == value:
            return 0
        hit = np.flatnonzero(allowed == value)
        if hit.size == 0:
            raise EvidenceError(
                f"value index {value} for variable position {var} is no longer admissible")
        pre = self.cells.size
        self.cells = kernels.take_axis(self.cells, np.asarray(self.shape, np.int64),
                                       axis, int(hit[0]))
        self.allowed[axis] = np.asarray([value], dtype=np.int64)
        return pre

    def zero_restrict(self, var: int, value: int) -> int:
        """Zero incompatible cells in place; no repacking (debug mode)."""
        axis = self.axis_of(var)
        allowed = self.allowed[axis]
        hit = np.flatnonzero(allowed == value)
        if hit.size == 0:
            raise EvidenceError(
                f"value index {value} for variable position {var} is no longer admissible")
        pre = self.cells.size
        kernels.zero_axis(self.cells, np.asarray(self.shape, np.int64), axis, int(hit[0]))
        return pre

    def marginal_onto(self, target_scope) -> np.ndarray:
        """Sum out every axis not in target_scope; returns flat cells in the
        target's scope order (a subsequence of this scope)."""
        keep = np.asarray([self.axis_of(v) for v in target_scope], np.int64)
        return kernels.reduce_sum(self.cells, np.asarray(self.shape, np.int64), keep)

    def multiply_sub(self, sub_scope, sub_cells: np.ndarray) -> None:
        """In-place multiply by a table over a subset scope (broadcast)."""
        axes = np.asarray([self.axis_of(v) for v in sub_scope], np.int64)
        kernels.mul_broadcast(self.cells, np.asarray(self.shape, np.int64), sub_cells, axes)

    def total(self) -> float:
        return float(self.cells.sum())
