"""Instances, preference lists with ties, and matchings.

Agents are dense 0-based integers per side.  The left side (``U``, "men")
proposes in both engines; the right side (``W``, "women") disposes.  A
preference list is an ordered sequence of tie-groups, earlier groups being
strictly preferred and members of one group being equally good.

Internally every instance is stored in a flat CSR layout: for each side a
pointer array, the candidates in list order and the tie index (rank) of each
entry.  Edge ids are the positions of entries in the left-side arrays, so the
edge ``(u, w)`` found at position ``e`` of ``u``'s list has id ``e``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

__all__ = [
    "Side",
    "AgentId",
    "left",
    "right",
    "ValidationKind",
    "ValidationError",
    "Instance",
    "Matching",
    "validate",
    "rank",
    "is_valid_matching",
]


class Side(enum.Enum):
    LEFT = "m"
    RIGHT = "w"

    @property
    def other(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


class AgentId(NamedTuple):
    side: Side
    index: int

    def __str__(self) -> str:
        return f"{self.side.value}{self.index + 1}"


def left(i: int) -> AgentId:
    return AgentId(Side.LEFT, i)


def right(j: int) -> AgentId:
    return AgentId(Side.RIGHT, j)


class ValidationKind(enum.Enum):
    NON_MUTUAL = "NonMutual"
    DUPLICATE_ENTRY = "DuplicateEntry"
    INDEX_OUT_OF_RANGE = "IndexOutOfRange"
    EMPTY_TIE = "EmptyTie"
    NEGATIVE_CAPACITY = "NegativeCapacity"


class ValidationError(ValueError):
    """An instance violates one of the model invariants.

    ``agent`` is the list owner (or capacity holder) where the first
    violation was found and ``other`` the offending list entry, if any.
    """

    def __init__(self, kind: ValidationKind, agent: AgentId, other: AgentId | None = None,
                 detail: str = ""):
        self.kind = kind
        self.agent = agent
        self.other = other
        msg = f"{kind.value}: {agent}"
        if other is not None:
            msg += f" -> {other}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


def _flatten(prefs: Sequence[Sequence[Sequence[int]]]):
    ptr = [0]
    cand: list[int] = []
    rk: list[int] = []
    ntie: list[int] = []
    for lst in prefs:
        for r, tie in enumerate(lst):
            for c in tie:
                cand.append(int(c))
                rk.append(r)
        ntie.append(len(lst))
        ptr.append(len(cand))
    return (np.asarray(ptr, dtype=np.int64), np.asarray(cand, dtype=np.int64),
            np.asarray(rk, dtype=np.int64), np.asarray(ntie, dtype=np.int64))


def _readonly(a) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.flags.writeable = False
    return a


class _Fast(NamedTuple):
    """Plain-list views used by the solver loops (numpy scalar access is slow)."""

    l_ptr: list
    l_cand: list
    l_rank: list
    r_ptr: list
    r_cand: list
    r_rank: list
    edge_left: list
    edge_rank_right: list
    r2l: list
    cap_l: list
    cap_r: list
    l_tie_ptr: list
    l_agent_tie: list
    tie_of_edge: list


class Instance:
    """A bipartite two-sided instance with tied, incomplete lists and capacities.

    Build one from nested lists::

        Instance([[[0, 1], [2]], ...],   # left agents: list of ties of right ids
                 [[[0], [1]], ...],      # right agents: list of ties of left ids
                 capacities_left=None, capacities_right=None)

    Capacities default to 1.  Instances are immutable; the constructor runs
    :func:`validate` unless ``check=False``.
    """

    def __init__(self, prefs_left: Sequence[Sequence[Sequence[int]]],
                 prefs_right: Sequence[Sequence[Sequence[int]]],
                 capacities_left: Sequence[int] | None = None,
                 capacities_right: Sequence[int] | None = None,
                 *, check: bool = True):
        lp, lc, lr, lt = _flatten(prefs_left)
        rp, rc, rr, rt = _flatten(prefs_right)
        self._init_flat(len(prefs_left), len(prefs_right), lp, lc, lr, lt, rp, rc, rr, rt,
                        capacities_left, capacities_right, check)

    @classmethod
    def from_flat(cls, n_left: int, n_right: int,
                  left_ptr, left_cand, left_rank,
                  right_ptr, right_cand, right_rank,
                  capacities_left=None, capacities_right=None,
                  *, check: bool = True) -> "Instance":
        """Build directly from CSR arrays (ranks must be tie indices)."""
        self = cls.__new__(cls)
        lp, lc, lr = (np.asarray(x, dtype=np.int64) for x in (left_ptr, left_cand, left_rank))
        rp, rc, rr = (np.asarray(x, dtype=np.int64) for x in (right_ptr, right_cand, right_rank))
        self._init_flat(n_left, n_right, lp, lc, lr, _tie_counts(lp, lr),
                        rp, rc, rr, _tie_counts(rp, rr),
                        capacities_left, capacities_right, check)
        return self

    def _init_flat(self, n_left, n_right, lp, lc, lr, lt, rp, rc, rr, rt, cl, cr, check):
        self.n_left = int(n_left)
        self.n_right = int(n_right)
        self.left_ptr, self.left_cand, self.left_rank = map(_readonly, (lp, lc, lr))
        self.right_ptr, self.right_cand, self.right_rank = map(_readonly, (rp, rc, rr))
        self.left_ntie, self.right_ntie = _readonly(lt), _readonly(rt)
        self.capacities_left = _readonly(np.ones(self.n_left, dtype=np.int64) if cl is None else cl)
        self.capacities_right = _readonly(np.ones(self.n_right, dtype=np.int64) if cr is None else cr)
        self._l2r: np.ndarray | None = None
        if check:
            validate(self)

    # -- basic shape ---------------------------------------------------------

    @property
    def num_edges(self) -> int:
        return int(self.left_cand.shape[0])

    def __repr__(self) -> str:
        return (f"Instance(n_left={self.n_left}, n_right={self.n_right}, "
                f"edges={self.num_edges})")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.n_left == other.n_left and self.n_right == other.n_right
                and all(np.array_equal(getattr(self, a), getattr(other, a)) for a in (
                    "left_ptr", "left_cand", "left_rank", "right_ptr", "right_cand",
                    "right_rank", "left_ntie", "right_ntie",
                    "capacities_left", "capacities_right")))

    __hash__ = None  # type: ignore[assignment]

    def prefs(self, side: Side) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """Nested tie-group view of every list on ``side``."""
        return self.prefs_left if side is Side.LEFT else self.prefs_right

    @cached_property
    def prefs_left(self):
        return _nest(self.left_ptr, self.left_cand, self.left_rank, self.left_ntie)

    @cached_property
    def prefs_right(self):
        return _nest(self.right_ptr, self.right_cand, self.right_rank, self.right_ntie)

    def capacity(self, agent: AgentId) -> int:
        caps = self.capacities_left if agent.side is Side.LEFT else self.capacities_right
        return int(caps[agent.index])

    @property
    def is_one_to_one(self) -> bool:
        return bool(np.all(self.capacities_left == 1) and np.all(self.capacities_right == 1))

    def with_capacities(self, capacities_left=None, capacities_right=None) -> "Instance":
        return Instance.from_flat(self.n_left, self.n_right,
                                  self.left_ptr, self.left_cand, self.left_rank,
                                  self.right_ptr, self.right_cand, self.right_rank,
                                  capacities_left, capacities_right)

    def transposed(self) -> "Instance":
        """Same instance with the two sides swapped."""
        return Instance.from_flat(self.n_right, self.n_left,
                                  self.right_ptr, self.right_cand, self.right_rank,
                                  self.left_ptr, self.left_cand, self.left_rank,
                                  self.capacities_right, self.capacities_left)

    # -- edges and ranks ----------------------------------------------------

    @property
    def left_to_right(self) -> np.ndarray:
        """Position of each left entry (edge id) within the right-side arrays."""
        if self._l2r is None:
            self._l2r = _readonly(_mutual_map(self)[0])
        return self._l2r

    @cached_property
    def edge_left(self) -> np.ndarray:
        return _readonly(np.repeat(np.arange(self.n_left), np.diff(self.left_ptr)))

    @property
    def edge_right(self) -> np.ndarray:
        return self.left_cand

    @cached_property
    def edge_rank_right(self) -> np.ndarray:
        """For edge ``(u, w)``: the rank of ``u`` on ``w``'s list."""
        return _readonly(self.right_rank[self.left_to_right])

    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.edge_left.tolist(), self.left_cand.tolist()))

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {pair: e for e, pair in enumerate(self.edges())}

    @cached_property
    def _rank_maps(self) -> tuple[dict, dict]:
        lm = {(u, w): r for (u, w), r in zip(self.edges(), self.left_rank.tolist())}
        rm = {(u, w): r for (u, w), r in zip(self.edges(), self.edge_rank_right.tolist())}
        return lm, rm

    def rank_left(self, u: int, w: int) -> int | None:
        """Tie index of ``w`` on ``u``'s list, ``None`` if unacceptable."""
        return self._rank_maps[0].get((u, w))

    def rank_right(self, w: int, u: int) -> int | None:
        """Tie index of ``u`` on ``w``'s list, ``None`` if unacceptable."""
        return self._rank_maps[1].get((u, w))

    def neighbors(self, agent: AgentId) -> np.ndarray:
        if agent.side is Side.LEFT:
            return self.left_cand[self.left_ptr[agent.index]:self.left_ptr[agent.index + 1]]
        return self.right_cand[self.right_ptr[agent.index]:self.right_ptr[agent.index + 1]]

    @cached_property
    def fast(self) -> _Fast:
        l2r = self.left_to_right
        # global tie ids on the left side: a new tie starts at every list start
        # and at every rank change inside a list
        n = self.num_edges
        starts = np.zeros(n, dtype=bool)
        if n:
            starts[self.left_ptr[:-1][np.diff(self.left_ptr) > 0]] = True
            starts[1:] |= self.left_rank[1:] != self.left_rank[:-1]
        tie_of_edge = np.cumsum(starts) - 1
        n_ties = int(starts.sum())
        tie_ptr = np.append(np.flatnonzero(starts), n)
        agent_tie = np.concatenate([[0], np.cumsum(self.left_ntie)])
        assert agent_tie[-1] == n_ties
        return _Fast(self.left_ptr.tolist(), self.left_cand.tolist(), self.left_rank.tolist(),
                     self.right_ptr.tolist(), self.right_cand.tolist(), self.right_rank.tolist(),
                     self.edge_left.tolist(), self.right_rank[l2r].tolist(),
                     _mutual_map(self)[1].tolist(),
                     self.capacities_left.tolist(), self.capacities_right.tolist(),
                     tie_ptr.tolist(), agent_tie.tolist(), tie_of_edge.tolist())


def _tie_counts(ptr: np.ndarray, rk: np.ndarray) -> np.ndarray:
    n = ptr.shape[0] - 1
    out = np.zeros(n, dtype=np.int64)
    nonempty = np.diff(ptr) > 0
    out[nonempty] = rk[ptr[1:][nonempty] - 1] + 1
    return out


def _nest(ptr, cand, rk, ntie):
    out = []
    cand_l, rk_l, ptr_l = cand.tolist(), rk.tolist(), ptr.tolist()
    for a, nt in enumerate(ntie.tolist()):
        ties: list[list[int]] = [[] for _ in range(nt)]
        for p in range(ptr_l[a], ptr_l[a + 1]):
            ties[rk_l[p]].append(cand_l[p])
        out.append(tuple(tuple(t) for t in ties))
    return tuple(out)


def _mutual_map(inst: Instance) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(l2r, r2l)`` index maps between the two sides' entries."""
    nr = max(inst.n_right, 1)
    lkey = np.repeat(np.arange(inst.n_left), np.diff(inst.left_ptr)) * nr + inst.left_cand
    rkey = inst.right_cand * nr + np.repeat(np.arange(inst.n_right), np.diff(inst.right_ptr))
    lo = np.argsort(lkey, kind="stable")
    ro = np.argsort(rkey, kind="stable")
    l2r = np.empty_like(lo)
    l2r[lo] = ro
    r2l = np.empty_like(ro)
    r2l[ro] = lo
    return l2r, r2l


def validate(instance: Instance) -> None:
    """Raise :class:`ValidationError` at the first broken instance invariant.

    Checks, in order: ids in range, no empty tie-groups, no duplicate list
    entries, non-negative capacities, mutual acceptability.
    """
    sides = [
        (Side.LEFT, instance.n_left, instance.n_right, instance.left_ptr,
         instance.left_cand, instance.left_rank, instance.left_ntie),
        (Side.RIGHT, instance.n_right, instance.n_left, instance.right_ptr,
         instance.right_cand, instance.right_rank, instance.right_ntie),
    ]
    for side, n_own, n_other, ptr, cand, rk, ntie in sides:
        if ptr.shape[0] != n_own + 1 or ntie.shape[0] != n_own:
            raise ValueError(f"malformed CSR arrays for side {side.name}")
        owner = np.repeat(np.arange(n_own), np.diff(ptr))
        bad = np.flatnonzero((cand < 0) | (cand >= n_other))
        if bad.size:
            p = int(bad[0])
            raise ValidationError(ValidationKind.INDEX_OUT_OF_RANGE,
                                  AgentId(side, int(owner[p])), AgentId(side.other, int(cand[p])))
    for side, n_own, n_other, ptr, cand, rk, ntie in sides:
        owner = np.repeat(np.arange(n_own), np.diff(ptr))
        # ranks step by 0 or 1 inside a list, start at 0 and end at ntie - 1
        first = np.zeros(cand.shape[0], dtype=bool)
        first[ptr[:-1][np.diff(ptr) > 0]] = True
        step = np.diff(rk, prepend=0)
        bad_entry = np.flatnonzero(np.where(first, rk != 0, (step != 0) & (step != 1)))
        length = np.diff(ptr)
        last_rank = np.where(length > 0, rk[np.maximum(ptr[1:] - 1, 0)] if rk.size else 0, -1)
        bad_owner = np.flatnonzero(last_rank != ntie - 1)
        cands = [int(owner[bad_entry[0]])] if bad_entry.size else []
        if bad_owner.size:
            cands.append(int(bad_owner[0]))
        if cands:
            raise ValidationError(ValidationKind.EMPTY_TIE, AgentId(side, min(cands)))
    for side, n_own, n_other, ptr, cand, rk, ntie in sides:
        owner = np.repeat(np.arange(n_own), np.diff(ptr))
        key = owner * max(n_other, 1) + cand
        order = np.argsort(key, kind="stable")
        dup = np.flatnonzero(np.diff(key[order]) == 0)
        if dup.size:
            p = int(order[dup + 1].min())
            raise ValidationError(ValidationKind.DUPLICATE_ENTRY,
                                  AgentId(side, int(owner[p])), AgentId(side.other, int(cand[p])))
    for side, caps, n in ((Side.LEFT, instance.capacities_left, instance.n_left),
                          (Side.RIGHT, instance.capacities_right, instance.n_right)):
        if caps.shape[0] != n:
            raise ValueError(f"capacity vector for side {side.name} has wrong length")
        neg = np.flatnonzero(caps < 0)
        if neg.size:
            raise ValidationError(ValidationKind.NEGATIVE_CAPACITY, AgentId(side, int(neg[0])),
                                  detail=f"b={int(caps[neg[0]])}")
    nr = max(instance.n_right, 1)
    lkey = np.repeat(np.arange(instance.n_left), np.diff(instance.left_ptr)) * nr + instance.left_cand
    rkey = (instance.right_cand * nr
            + np.repeat(np.arange(instance.n_right), np.diff(instance.right_ptr)))
    miss_l = np.flatnonzero(~np.isin(lkey, rkey))
    if miss_l.size:
        k = int(lkey[miss_l[0]])
        raise ValidationError(ValidationKind.NON_MUTUAL, left(k // nr), right(k % nr),
                              detail="right agent does not list left agent")
    miss_r = np.flatnonzero(~np.isin(rkey, lkey))
    if miss_r.size:
        k = int(rkey[miss_r[0]])
        raise ValidationError(ValidationKind.NON_MUTUAL, right(k % nr), left(k // nr),
                              detail="left agent does not list right agent")


def rank(instance: Instance, judge: AgentId, candidate: AgentId) -> int | None:
    """0-based tie-group index of ``candidate`` on ``judge``'s list, or ``None``."""
    if judge.side is candidate.side:
        return None
    if judge.side is Side.LEFT:
        return instance.rank_left(judge.index, candidate.index)
    return instance.rank_right(judge.index, candidate.index)


@dataclass(frozen=True)
class Matching:
    """A set of ``(left, right)`` edges.  Degrees and partners are derived."""

    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.edges, frozenset):
            object.__setattr__(self, "edges", frozenset((int(u), int(w)) for u, w in self.edges))

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> "Matching":
        return cls(frozenset((int(u), int(w)) for u, w in pairs))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.edges))

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    @cached_property
    def _partners(self) -> tuple[dict[int, list[int]], dict[int, list[int]]]:
        lp: dict[int, list[int]] = {}
        rp: dict[int, list[int]] = {}
        for u, w in sorted(self.edges):
            lp.setdefault(u, []).append(w)
            rp.setdefault(w, []).append(u)
        return lp, rp

    def partners_left(self, u: int) -> list[int]:
        return self._partners[0].get(u, [])

    def partners_right(self, w: int) -> list[int]:
        return self._partners[1].get(w, [])

    def partners(self, agent: AgentId) -> list[int]:
        return self.partners_left(agent.index) if agent.side is Side.LEFT \
            else self.partners_right(agent.index)

    def degree(self, agent: AgentId) -> int:
        return len(self.partners(agent))


def is_valid_matching(instance: Instance, matching: Matching) -> bool:
    """True iff every edge is acceptable and no capacity is exceeded."""
    index = instance.edge_index
    if any(pair not in index for pair in matching.edges):
        return False
    lp, rp = matching._partners
    caps_l, caps_r = instance.capacities_left, instance.capacities_right
    return (all(len(ws) <= caps_l[u] for u, ws in lp.items())
            and all(len(us) <= caps_r[w] for w, us in rp.items()))
