"""Seeded instance generators and the built-in 4x4 example.

All randomness comes from numpy's PCG64 bit generator, seeded through one
``SeedSequence(seed)`` that is spawned into four independent streams, in
this fixed order: edge set, left-side orders and ties, right-side orders and
ties, capacities.  Identical parameters give byte-identical instances on
every platform numpy supports.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Instance

__all__ = ["GenParams", "paper_example", "random_instance", "single_pair"]


@dataclass(frozen=True)
class GenParams:
    n_left: int
    n_right: int
    list_length: tuple[int, int] = (1, 4)
    tie_density: float = 0.3
    capacity_max_left: int = 1
    capacity_max_right: int = 1
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.list_length
        if self.n_left < 0 or self.n_right < 0:
            raise ValueError("agent counts must be non-negative")
        if not 0 <= lo <= hi:
            raise ValueError(f"list_length must satisfy 0 <= min <= max, got {self.list_length}")
        if not 0.0 <= self.tie_density <= 1.0:
            raise ValueError(f"tie_density must lie in [0, 1], got {self.tie_density}")
        if self.capacity_max_left < 1 or self.capacity_max_right < 1:
            raise ValueError("capacity maxima must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def paper_example() -> Instance:
    """The 4 men / 4 women example with ties ``(w1 w2)`` on m1 and ``(m2 m4)`` on w3.

    Only mutually acceptable pairs are kept: m2 does not list w2, so w2's
    list is ``m3 m1``.  The instance has 10 edges.
    """
    men = [
        [[0, 1], [2]],        # m1: (w1 w2) w3
        [[0], [2], [3]],      # m2: w1 w3 w4
        [[1], [0], [2]],      # m3: w2 w1 w3
        [[2]],                # m4: w3
    ]
    women = [
        [[0], [1], [2]],      # w1: m1 m2 m3
        [[2], [0]],           # w2: m3 m1
        [[0], [1, 3], [2]],   # w3: m1 (m2 m4) m3
        [[1]],                # w4: m2
    ]
    return Instance(men, women)


def single_pair() -> Instance:
    return Instance([[[0]]], [[[0]]])


def _tie_ranks(owner: np.ndarray, merge: np.ndarray) -> np.ndarray:
    """Rank of each entry (already grouped by owner) given per-entry merge flags."""
    n = owner.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    first = np.ones(n, dtype=bool)
    first[1:] = owner[1:] != owner[:-1]
    new_tie = first | ~merge
    tie_id = np.cumsum(new_tie) - 1
    return tie_id - tie_id[first][np.cumsum(first) - 1]


def _side(owner_of_edge: np.ndarray, cand_of_edge: np.ndarray, n_owner: int,
          tie_density: float, rng: np.random.Generator):
    keys = rng.random(owner_of_edge.shape[0])
    merge = rng.random(owner_of_edge.shape[0]) < tie_density
    order = np.lexsort((keys, owner_of_edge))
    owner = owner_of_edge[order]
    ptr = np.zeros(n_owner + 1, dtype=np.int64)
    np.cumsum(np.bincount(owner, minlength=n_owner), out=ptr[1:])
    return ptr, cand_of_edge[order], _tie_ranks(owner, merge)


def random_instance(params: GenParams) -> Instance:
    """Random mutually acceptable instance.

    Each left agent draws a list length uniformly from ``list_length``
    (capped by ``n_right``) and that many distinct partners.  Both sides then
    order their incident edges uniformly at random, and every entry except a
    list's first joins the preceding tie with probability ``tie_density``.
    Capacities are uniform on ``1..capacity_max``.
    """
    p = params
    s_edges, s_left, s_right, s_caps = (np.random.Generator(np.random.PCG64(s))
                                        for s in np.random.SeedSequence(p.seed).spawn(4))
    lo, hi = p.list_length
    hi_eff = min(hi, p.n_right)
    lo_eff = min(lo, hi_eff)
    deg = s_edges.integers(lo_eff, hi_eff + 1, size=p.n_left) if p.n_left else \
        np.zeros(0, dtype=np.int64)
    parts = [s_edges.choice(p.n_right, size=int(d), replace=False) for d in deg.tolist()]
    us = np.repeat(np.arange(p.n_left, dtype=np.int64), deg)
    ws = np.concatenate(parts).astype(np.int64) if parts else np.zeros(0, dtype=np.int64)

    lp, lc, lr = _side(us, ws, p.n_left, p.tie_density, s_left)
    rp, rc, rr = _side(ws, us, p.n_right, p.tie_density, s_right)
    cl = s_caps.integers(1, p.capacity_max_left + 1, size=p.n_left)
    cr = s_caps.integers(1, p.capacity_max_right + 1, size=p.n_right)
    return Instance.from_flat(p.n_left, p.n_right, lp, lc, lr, rp, rc, rr, cl, cr)
