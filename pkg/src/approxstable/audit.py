"""Blocking pairs, dangerous paths and the 3/2 certificate for any matching.

Both checks use the capacitated definitions, which reduce to the usual
one-to-one ones when every capacity is 1:

* ``(u, w)`` outside ``M`` blocks when each side is unsaturated or strictly
  prefers the other to its worst current partner;
* ``(w, u1, w1, u)`` is dangerous when ``(u1, w1)`` is in ``M``, the edges
  ``(u1, w)`` and ``(u, w1)`` are not, ``u1`` and ``w1`` are saturated, ``w``
  and ``u`` are unsaturated, and ``(u1, w1)`` does not block the matching
  obtained by trading ``(u1, w1)`` for the two outer edges.  The path is
  *masculine* when ``u1`` ranks ``w`` and ``w1`` equally and *feminine* when
  ``w1`` ranks ``u`` and ``u1`` equally.

A stable matching without dangerous paths is within a factor 3/2 of a
maximum stable matching.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .model import Instance, Matching, is_valid_matching

__all__ = [
    "InvalidMatching", "DangerousPath", "AuditReport", "Certificate",
    "find_blocking_pairs", "find_dangerous_paths", "audit", "approx_certificate",
    "naive_blocking_pairs", "naive_dangerous_paths",
]

MASCULINE = "masculine"
FEMININE = "feminine"


class InvalidMatching(ValueError):
    """The matching uses a non-edge or exceeds a capacity."""


@dataclass(frozen=True, order=True)
class DangerousPath:
    path: tuple[int, int, int, int]        # (w, u1, w1, u)
    kinds: frozenset = field(default=frozenset(), compare=False)


@dataclass(frozen=True)
class AuditReport:
    valid: bool
    blocking_pairs: list
    dangerous_paths: list

    @property
    def stable(self) -> bool:
        return self.valid and not self.blocking_pairs

    @property
    def ok(self) -> bool:
        return self.stable and not self.dangerous_paths


@dataclass(frozen=True)
class Certificate:
    stable: bool
    dangerous_free: bool

    def __bool__(self) -> bool:
        return self.stable and self.dangerous_free


class _View:
    """Per-edge membership, degrees and worst-partner ranks of one matching."""

    def __init__(self, instance: Instance, matching: Matching):
        index = instance.edge_index
        in_m = np.zeros(instance.num_edges, dtype=bool)
        if matching.edges:
            in_m[[index[p] for p in matching.edges]] = True
        self.in_m = in_m
        eu, ew = instance.edge_left, instance.edge_right
        rl, rr = instance.left_rank, instance.edge_rank_right
        self.deg_l = np.bincount(eu[in_m], minlength=instance.n_left)
        self.deg_r = np.bincount(ew[in_m], minlength=instance.n_right)
        self.worst_l = np.full(instance.n_left, -1, dtype=np.int64)
        self.worst_r = np.full(instance.n_right, -1, dtype=np.int64)
        np.maximum.at(self.worst_l, eu[in_m], rl[in_m])
        np.maximum.at(self.worst_r, ew[in_m], rr[in_m])
        self.unsat_l = self.deg_l < instance.capacities_left
        self.unsat_r = self.deg_r < instance.capacities_right


def _require_valid(instance: Instance, matching: Matching) -> None:
    if not is_valid_matching(instance, matching):
        raise InvalidMatching("matching uses a non-edge or exceeds a capacity")


def find_blocking_pairs(instance: Instance, matching: Matching) -> list[tuple[int, int]]:
    """All blocking pairs ``(u, w)``, sorted."""
    _require_valid(instance, matching)
    v = _View(instance, matching)
    eu, ew = instance.edge_left, instance.edge_right
    left_ok = v.unsat_l[eu] | (instance.left_rank < v.worst_l[eu])
    right_ok = v.unsat_r[ew] | (instance.edge_rank_right < v.worst_r[ew])
    blocking = np.flatnonzero(~v.in_m & left_ok & right_ok)
    return sorted(zip(eu[blocking].tolist(), ew[blocking].tolist()))


def _worst_without(ranks: list[int], drop: int) -> int:
    """Largest rank after removing one occurrence of ``drop`` (-1 if none left)."""
    best = -1
    skipped = False
    for r in ranks:
        if r == drop and not skipped:
            skipped = True
            continue
        best = max(best, r)
    return best


def find_dangerous_paths(instance: Instance, matching: Matching) -> list[DangerousPath]:
    """All dangerous paths, sorted by ``(w, u1, w1, u)``.

    Meaningful for stable matchings; on unstable ones the same test is run
    and a path may carry no kind.
    """
    _require_valid(instance, matching)
    v = _View(instance, matching)
    f = instance.fast
    in_m = v.in_m.tolist()
    unsat_l, unsat_r = v.unsat_l.tolist(), v.unsat_r.tolist()
    caps_l, caps_r = f.cap_l, f.cap_r
    l_ptr, l_cand, l_rank = f.l_ptr, f.l_cand, f.l_rank
    r_ptr, r_cand, r_rank = f.r_ptr, f.r_cand, f.r_rank
    # matched ranks per agent, from both points of view
    m_ranks_l: dict[int, list[int]] = {}
    m_ranks_r: dict[int, list[int]] = {}
    for e in np.flatnonzero(v.in_m).tolist():
        m_ranks_l.setdefault(f.edge_left[e], []).append(l_rank[e])
        m_ranks_r.setdefault(l_cand[e], []).append(f.edge_rank_right[e])
    out = []
    for e in np.flatnonzero(v.in_m).tolist():
        u1, w1 = f.edge_left[e], l_cand[e]
        if unsat_l[u1] or unsat_r[w1] or caps_l[u1] == 0 or caps_r[w1] == 0:
            continue
        r_u1_w1, r_w1_u1 = l_rank[e], f.edge_rank_right[e]
        rest_u1 = _worst_without(m_ranks_l[u1], r_u1_w1)
        rest_w1 = _worst_without(m_ranks_r[w1], r_w1_u1)
        outer_w = [(l_cand[j], l_rank[j]) for j in range(l_ptr[u1], l_ptr[u1 + 1])
                   if not in_m[j] and unsat_r[l_cand[j]]]
        if not outer_w:
            continue
        outer_u = [(r_cand[j], r_rank[j]) for j in range(r_ptr[w1], r_ptr[w1 + 1])
                   if not in_m[f.r2l[j]] and unsat_l[r_cand[j]]]
        for (w, r_u1_w), (u, r_w1_u) in product(outer_w, outer_u):
            u1_wants = r_u1_w1 < max(rest_u1, r_u1_w)
            w1_wants = r_w1_u1 < max(rest_w1, r_w1_u)
            if u1_wants and w1_wants:
                continue
            kinds = set()
            if r_u1_w == r_u1_w1:
                kinds.add(MASCULINE)
            if r_w1_u == r_w1_u1:
                kinds.add(FEMININE)
            out.append(DangerousPath((w, u1, w1, u), frozenset(kinds)))
    out.sort()
    return out


def audit(instance: Instance, matching: Matching) -> AuditReport:
    """Validity, blocking pairs and dangerous paths in one report."""
    if not is_valid_matching(instance, matching):
        return AuditReport(False, [], [])
    return AuditReport(True, find_blocking_pairs(instance, matching),
                       find_dangerous_paths(instance, matching))


def approx_certificate(instance: Instance, matching: Matching) -> Certificate:
    """Both flags true guarantee ``2 * |M_opt| <= 3 * |M|`` without an oracle."""
    rep = audit(instance, matching)
    return Certificate(rep.stable, rep.stable and not rep.dangerous_paths)


# -- reference checkers ------------------------------------------------------
# Straight from the definitions, with no shared code; used as test oracles.

def _blocks(instance: Instance, edges: set, u: int, w: int) -> bool:
    ru = instance.rank_left(u, w)
    rw = instance.rank_right(w, u)
    if ru is None or (u, w) in edges:
        return False
    mine = [x for (a, x) in edges if a == u]
    hers = [a for (a, x) in edges if x == w]
    u_side = len(mine) < instance.capacities_left[u] or any(
        ru < instance.rank_left(u, x) for x in mine)
    w_side = len(hers) < instance.capacities_right[w] or any(
        rw < instance.rank_right(w, a) for a in hers)
    return u_side and w_side


def naive_blocking_pairs(instance: Instance, matching: Matching) -> list[tuple[int, int]]:
    edges = set(matching.edges)
    return [(u, w) for u in range(instance.n_left) for w in range(instance.n_right)
            if _blocks(instance, edges, u, w)]


def naive_dangerous_paths(instance: Instance, matching: Matching) -> list[tuple]:
    """Every ``(w, u1, w1, u)`` meeting the definition, by brute force over 4-tuples."""
    edges = set(matching.edges)

    def deg_l(u):
        return sum(1 for (a, _) in edges if a == u)

    def deg_r(w):
        return sum(1 for (_, x) in edges if x == w)

    out = []
    for (u1, w1) in sorted(edges):
        if deg_l(u1) < instance.capacities_left[u1] or deg_r(w1) < instance.capacities_right[w1]:
            continue
        for w in range(instance.n_right):
            if instance.rank_left(u1, w) is None or (u1, w) in edges:
                continue
            if deg_r(w) >= instance.capacities_right[w]:
                continue
            for u in range(instance.n_left):
                if instance.rank_right(w1, u) is None or (u, w1) in edges:
                    continue
                if deg_l(u) >= instance.capacities_left[u]:
                    continue
                swapped = (edges - {(u1, w1)}) | {(u1, w), (u, w1)}
                if not _blocks(instance, swapped, u1, w1):
                    out.append((w, u1, w1, u))
    return sorted(out)
