"""Exact maximum stable (b-)matchings by exhaustive enumeration.

Only for small instances: the work is exponential in the number of edges.
Subsets are encoded as bitmasks over edge ids and processed as numpy
arrays, so a few hundred thousand candidates take milliseconds.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audit import find_blocking_pairs
from .model import Instance, Matching

__all__ = ["SizeLimitExceeded", "OracleResult", "optimal_stable", "ratio_check",
           "count_feasible_subsets", "search_tight_instance"]

DEFAULT_EDGE_BUDGET = 20


class SizeLimitExceeded(ValueError):
    def __init__(self, edges: int, limit: int):
        self.edges = edges
        self.limit = limit
        super().__init__(f"instance has {edges} edges, oracle budget is {limit}")


@dataclass(frozen=True)
class OracleResult:
    opt_size: int
    witness: Matching
    stable_count: int
    explored: int          # capacity-feasible subsets whose stability was decided
    generated: int         # subsets materialised, feasible or not


def _masks(instance: Instance):
    f = instance.fast
    E = instance.num_edges
    bit = [np.uint64(1) << np.uint64(e) for e in range(E)]
    u_mask = [np.uint64(0)] * instance.n_left
    w_mask = [np.uint64(0)] * instance.n_right
    for e in range(E):
        u_mask[f.edge_left[e]] |= bit[e]
        w_mask[f.l_cand[e]] |= bit[e]
    # edges at u (resp. w) that u (resp. w) likes strictly less than edge e
    worse_u = [np.uint64(0)] * E
    worse_w = [np.uint64(0)] * E
    for e in range(E):
        u, w = f.edge_left[e], f.l_cand[e]
        for g in range(f.l_ptr[u], f.l_ptr[u + 1]):
            if f.l_rank[g] > f.l_rank[e]:
                worse_u[e] |= bit[g]
        for j in range(f.r_ptr[w], f.r_ptr[w + 1]):
            g = f.r2l[j]
            if f.edge_rank_right[g] > f.edge_rank_right[e]:
                worse_w[e] |= bit[g]
    return bit, u_mask, w_mask, worse_u, worse_w


def _feasible(sets: np.ndarray, instance: Instance, u_mask, w_mask) -> np.ndarray:
    ok = np.ones(sets.shape[0], dtype=bool)
    for u, m in enumerate(u_mask):
        ok &= np.bitwise_count(sets & m) <= instance.capacities_left[u]
    for w, m in enumerate(w_mask):
        ok &= np.bitwise_count(sets & m) <= instance.capacities_right[w]
    return ok


def _enumerate(instance: Instance, prune: bool, bit, u_mask, w_mask):
    E = instance.num_edges
    if not prune:
        sets = np.arange(1 << E, dtype=np.uint64)
        return sets[_feasible(sets, instance, u_mask, w_mask)], 1 << E
    f = instance.fast
    deg_limit_l = f.cap_l
    deg_limit_r = f.cap_r
    sets = np.zeros(1, dtype=np.uint64)
    generated = 1
    for e in range(E):
        u, w = f.edge_left[e], f.l_cand[e]
        room = ((np.bitwise_count(sets & u_mask[u]) < deg_limit_l[u])
                & (np.bitwise_count(sets & w_mask[w]) < deg_limit_r[w]))
        grown = sets[room] | bit[e]
        generated += grown.shape[0]
        sets = np.concatenate([sets, grown])
    return sets, generated


def _stable_mask(sets: np.ndarray, instance: Instance, bit, u_mask, w_mask, worse_u, worse_w):
    f = instance.fast
    zero = np.uint64(0)
    unsat_u = [np.bitwise_count(sets & m) < f.cap_l[u] for u, m in enumerate(u_mask)]
    unsat_w = [np.bitwise_count(sets & m) < f.cap_r[w] for w, m in enumerate(w_mask)]
    stable = np.ones(sets.shape[0], dtype=bool)
    for e in range(instance.num_edges):
        u, w = f.edge_left[e], f.l_cand[e]
        blocking = (sets & bit[e]) == zero
        blocking &= unsat_u[u] | ((sets & worse_u[e]) != zero)
        blocking &= unsat_w[w] | ((sets & worse_w[e]) != zero)
        stable &= ~blocking
    return stable


def _to_matching(instance: Instance, mask: int) -> Matching:
    f = instance.fast
    return Matching.of((f.edge_left[e], f.l_cand[e])
                       for e in range(instance.num_edges) if mask >> e & 1)


def optimal_stable(instance: Instance, limit: int = DEFAULT_EDGE_BUDGET, *,
                   prune: bool = True, check: str = "masks") -> OracleResult:
    """Largest stable b-matching, by enumerating every capacity-feasible edge set.

    ``prune=True`` grows subsets edge by edge and never materialises one that
    overflows a capacity; ``prune=False`` generates all ``2^|E|`` subsets and
    filters them, for cross-checking.  ``check="audit"`` decides stability
    with :func:`~approxstable.audit.find_blocking_pairs` per subset instead
    of the bitmask test (slow, for cross-checking).  Among maximum stable
    sets the witness is the one whose sorted edge list is smallest.
    """
    E = instance.num_edges
    if E > limit:
        raise SizeLimitExceeded(E, limit)
    if E > 63:
        raise SizeLimitExceeded(E, 63)
    bit, u_mask, w_mask, worse_u, worse_w = _masks(instance)
    sets, generated = _enumerate(instance, prune, bit, u_mask, w_mask)
    if check == "masks":
        stable = _stable_mask(sets, instance, bit, u_mask, w_mask, worse_u, worse_w)
    elif check == "audit":
        stable = np.array([not find_blocking_pairs(instance, _to_matching(instance, int(s)))
                           for s in sets.tolist()], dtype=bool)
    else:
        raise ValueError(f"unknown stability check {check!r}")
    good = sets[stable]
    sizes = np.bitwise_count(good)
    opt = int(sizes.max())   # a stable matching always exists, so good is nonempty
    witness = min((_to_matching(instance, int(s)) for s in good[sizes == opt].tolist()),
                  key=lambda m: m.sorted_edges())
    return OracleResult(opt, witness, int(good.shape[0]), int(sets.shape[0]), generated)


def ratio_check(instance: Instance, matching: Matching, oracle: OracleResult) -> bool:
    """``2 * opt <= 3 * |M|`` in integers."""
    return 2 * oracle.opt_size <= 3 * len(matching)


def count_feasible_subsets(instance: Instance) -> int:
    """Closed-form count when every capacity is 1 and the graph is complete bipartite.

    For ``K_{p,q}`` the matchings with ``k`` edges number
    ``C(p,k) * C(q,k) * k!``.  Raises ``ValueError`` for anything else.
    """
    from math import comb, factorial
    p, q = instance.n_left, instance.n_right
    if not instance.is_one_to_one or instance.num_edges != p * q:
        raise ValueError("closed form needs a complete one-to-one instance")
    return sum(comb(p, k) * comb(q, k) * factorial(k) for k in range(min(p, q) + 1))


def search_tight_instance(solver, params_stream, limit: int = DEFAULT_EDGE_BUDGET):
    """First ``(instance, result, oracle)`` from the stream with ``2*opt == 3*|M|``.

    ``solver`` maps an instance to a SolveResult-like object with a
    ``matching``; ``params_stream`` yields instances.  Returns ``None`` if
    the stream runs out.
    """
    for instance in params_stream:
        if instance.num_edges > limit:
            continue
        res = solver(instance)
        orc = optimal_stable(instance, limit)
        if 2 * orc.opt_size == 3 * len(res.matching):
            return instance, res, orc
    return None
