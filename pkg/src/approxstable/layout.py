"""Proposer-side tie arrays with a free prefix and a matched suffix.

Every tie-group of every proposer's list owns a slice ``[start, end)`` of one
global array of edge ids.  Inside the slice three zones are kept::

    [start, lo)   removed from the list (consumed, or retained by a special edge)
    [lo, bnd)     still on the list, other side free / unsaturated
    [bnd, end)    still on the list, other side already relocated

Relocating an entry swaps it with the last slot of the free zone, keeping
``pos`` (edge id -> slot) exact.  The top of a tie is always ``arr[lo]``.
"""
from __future__ import annotations

import numpy as np

from .model import Instance

__all__ = ["TieLayout", "tiebreak_order"]


def tiebreak_order(group_of_entry: np.ndarray, seed: int) -> np.ndarray:
    """Entry order that keeps groups contiguous and shuffles inside each group.

    ``seed == 0`` keeps the order as listed.  Other seeds draw one PCG64
    uniform key per entry and sort by (group, key).
    """
    n = group_of_entry.shape[0]
    if seed == 0 or n == 0:
        return np.arange(n)
    keys = np.random.Generator(np.random.PCG64(seed)).random(n)
    return np.lexsort((keys, group_of_entry))


class TieLayout:
    def __init__(self, instance: Instance, tiebreak_seed: int = 0):
        f = instance.fast
        tie_of_edge = np.asarray(f.tie_of_edge, dtype=np.int64)
        order = tiebreak_order(tie_of_edge, tiebreak_seed)
        self.arr: list[int] = order.tolist()
        pos = np.empty_like(order)
        pos[order] = np.arange(order.shape[0])
        self.pos: list[int] = pos.tolist()
        self.tie_of_edge: list[int] = f.tie_of_edge
        self.lo: list[int] = f.l_tie_ptr[:-1]
        self.bnd: list[int] = f.l_tie_ptr[1:]
        self.end: list[int] = f.l_tie_ptr[1:]

    def free_count(self, t: int) -> int:
        return self.bnd[t] - self.lo[t]

    def is_empty(self, t: int) -> bool:
        return self.lo[t] == self.end[t]

    def top(self, t: int) -> int:
        return self.arr[self.lo[t]]

    def take(self, t: int) -> int:
        """Remove and return the top entry of tie ``t``."""
        lo = self.lo[t]
        e = self.arr[lo]
        self.lo[t] = lo + 1
        if self.bnd[t] <= lo:
            self.bnd[t] = lo + 1
        return e

    def relocate(self, e: int) -> bool:
        """Move entry ``e`` behind the free zone of its tie, if it is in it."""
        t = self.tie_of_edge[e]
        p = self.pos[e]
        q = self.bnd[t] - 1
        if not (self.lo[t] <= p <= q):
            return False
        arr, pos = self.arr, self.pos
        other = arr[q]
        arr[p], arr[q] = other, e
        pos[other], pos[e] = p, q
        self.bnd[t] = q
        return True

    def remove(self, e: int) -> None:
        """Remove an arbitrary in-list entry, keeping both zones contiguous."""
        t = self.tie_of_edge[e]
        lo, bnd = self.lo[t], self.bnd[t]
        if self.pos[e] >= bnd:
            self._swap(self.pos[e], bnd)
            self._swap(bnd, lo)
            self.bnd[t] = bnd + 1
        else:
            self._swap(self.pos[e], lo)
        self.lo[t] = lo + 1

    def _swap(self, p: int, q: int) -> None:
        arr, pos = self.arr, self.pos
        a, b = arr[p], arr[q]
        arr[p], arr[q] = b, a
        pos[a], pos[b] = q, p

    def in_list(self, e: int) -> bool:
        t = self.tie_of_edge[e]
        return self.lo[t] <= self.pos[e] < self.end[t]

    def in_free_zone(self, e: int) -> bool:
        t = self.tie_of_edge[e]
        return self.lo[t] <= self.pos[e] < self.bnd[t]

    def zone_entries(self, t: int) -> list[int]:
        return self.arr[self.lo[t]:self.end[t]]

    def check(self) -> None:
        """Assert that recorded positions equal actual positions."""
        for p, e in enumerate(self.arr):
            assert self.pos[e] == p, (e, p)
