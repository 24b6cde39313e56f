"""Approximate stable b-matching (ASBM).

Proposers (U-agents, the left side unless the sides are swapped for speed)
work through their tied lists as in the one-to-one engine; "free" reads as
"unsaturated" throughout.  A disposer w keeps her current partners in a
priority queue of indifference groups, worst group on top, and inside every
group the partners that still have an unsaturated option on their own list
come first.  That makes both "evict the worst partner, preferring one who has
somewhere else to go" and "is w uneasy with respect to this proposer" cheap.

Terminology used below, for a proposer u and a disposer w:

satellite of u wrt w
    an unsaturated disposer tied with ``w`` on u's list, not matched with u
satellitic wrt w
    u is matched with w and has a satellite wrt w; w is then *insecure*
special edge (u, w)
    w is unsaturated and u has another unsaturated option tied with w
subsatellitic
    u has at least one unsaturated option (not matched with him) on his list
uneasy wrt u
    w is saturated, not insecure, and some subsatellitic partner of w is
    ranked by w equally with u
"""
from __future__ import annotations

import heapq
import math
from collections import OrderedDict, deque

import numpy as np

from .events import Counters, Event
from .gs_modified import SolveResult
from .layout import TieLayout
from .model import AgentId, Instance, Matching, Side
from .schedule import SchedulePolicy, Scheduler

__all__ = ["WAgentBook", "worst_matched", "solve_b", "RELOCATE_ON_SATURATION",
           "RELOCATE_ON_FIRST_MATCH"]

RELOCATE_ON_SATURATION = "saturation"
RELOCATE_ON_FIRST_MATCH = "first_match"


class WAgentBook:
    """Per-disposer priority queues of indifference groups.

    ``subsat`` is the proposers' live counter array; a proposer is
    subsatellitic while his entry is positive.  Every queue operation adds
    ``log2(max(b(w), 2))`` to :attr:`logweighted`.
    """

    def __init__(self, capacities: list[int], subsat: list[int]):
        n = len(capacities)
        self.subsat = subsat
        self.groups: list[dict[int, OrderedDict]] = [{} for _ in range(n)]
        self.heaps: list[list[int]] = [[] for _ in range(n)]   # negated ranks
        self.weight = [math.log2(max(b, 2)) for b in capacities]
        self.ops = 0
        self.logweighted = 0.0

    def _tick(self, w: int) -> None:
        self.ops += 1
        self.logweighted += self.weight[w]

    def add(self, w: int, u: int, rank: int) -> None:
        self._tick(w)
        g = self.groups[w].get(rank)
        if g is None:
            g = self.groups[w][rank] = OrderedDict()
            heapq.heappush(self.heaps[w], -rank)
        g[u] = None
        if self.subsat[u] > 0:
            g.move_to_end(u, last=False)

    def remove(self, w: int, u: int, rank: int) -> None:
        self._tick(w)
        g = self.groups[w][rank]
        del g[u]
        if not g:
            del self.groups[w][rank]   # its heap key is dropped lazily

    def demote(self, w: int, u: int, rank: int) -> None:
        """``u`` stopped being subsatellitic: move him behind his group."""
        self._tick(w)
        self.groups[w][rank].move_to_end(u)

    def worst(self, w: int) -> tuple[int, int] | None:
        """``(u, rank)`` of a worst partner, subsatellitic if possible."""
        self._tick(w)
        heap, groups = self.heaps[w], self.groups[w]
        while heap and -heap[0] not in groups:
            heapq.heappop(heap)
        if not heap:
            return None
        rank = -heap[0]
        return next(iter(groups[rank])), rank

    def front(self, w: int, rank: int) -> int | None:
        """First member of ``w``'s group at ``rank`` (subsatellitic ones come first)."""
        self._tick(w)
        g = self.groups[w].get(rank)
        return next(iter(g)) if g else None

    def members(self, w: int) -> list[int]:
        return [u for g in self.groups[w].values() for u in g]

    def check(self, w: int) -> None:
        for g in self.groups[w].values():
            flags = [self.subsat[u] > 0 for u in g]
            assert flags == sorted(flags, reverse=True), "subsatellitic members must lead"


def worst_matched(instance: Instance, book: WAgentBook, w: AgentId) -> AgentId | None:
    """Worst partner of ``w`` in ``book``, a subsatellitic one when there is a choice."""
    got = book.worst(w.index)
    return None if got is None else AgentId(w.side.other, got[0])


class _BState:
    def __init__(self, instance: Instance, tiebreak_seed: int, relocate_on: str,
                 trace: bool, trace_limit: int):
        if relocate_on not in (RELOCATE_ON_SATURATION, RELOCATE_ON_FIRST_MATCH):
            raise ValueError(f"unknown relocation mode {relocate_on!r}")
        self.literal = relocate_on == RELOCATE_ON_FIRST_MATCH
        f = self.f = instance.fast
        self.layout = TieLayout(instance, tiebreak_seed)
        nl, nr, m = instance.n_left, instance.n_right, instance.num_edges
        self.deg_u = [0] * nl
        self.deg_w = [0] * nr
        self.ever_matched = [False] * nr
        self.ever_saturated = [b == 0 for b in f.cap_r]
        self.in_m = [False] * m
        self.partners_u: list[dict[int, int]] = [{} for _ in range(nl)]   # w -> edge
        self.retained = [False] * m        # special entry kept while (u, w) is matched
        self.awake: list[list | None] = [None] * nl   # heap of (tie, seq, edge)
        self.seq = 0
        self.lprime: list[deque | None] = [None] * nl
        self.in_lprime = [False] * m
        self.s_w: list[deque | None] = [None] * nr
        # in-list entries whose disposer is unsaturated, per tie and per proposer
        unsat_w = [b > 0 for b in f.cap_r]
        n_ties = len(f.l_tie_ptr) - 1
        self.avail = [0] * n_ties
        self.subsat = [0] * nl
        for e in range(m):
            if unsat_w[f.l_cand[e]]:
                self.avail[f.tie_of_edge[e]] += 1
                self.subsat[f.edge_left[e]] += 1
        self.book = WAgentBook(f.cap_r, self.subsat)
        self.cursor = f.l_agent_tie[:-1]
        self.tie_stop = f.l_agent_tie[1:]
        self.l_scans = [0] * m
        self.lprime_scans = [0] * m
        self.special_first = [False] * m
        self.trace: list[Event] | None = [] if trace else None
        self.trace_limit = trace_limit
        self.trace_truncated = False
        if not self.literal:
            for w in range(nr):
                if f.cap_r[w] == 0:
                    self._relocate_all(w)

    def emit(self, ev: Event) -> None:
        if self.trace is not None:
            if len(self.trace) < self.trace_limit:
                self.trace.append(ev)
            else:
                self.trace_truncated = True

    # -- list access ---------------------------------------------------------

    def top(self, u: int) -> tuple[int, bool]:
        """``(edge, from_awake)`` at the top of L_u; edge -1 when L_u is empty."""
        layout = self.layout
        t, stop = self.cursor[u], self.tie_stop[u]
        lo, end = layout.lo, layout.end
        while t < stop and lo[t] == end[t]:
            t += 1
        self.cursor[u] = t
        aw = self.awake[u]
        if aw:
            at = aw[0][0]
            if t >= stop or at < t or (at == t and layout.free_count(t) == 0):
                return aw[0][2], True
        if t < stop:
            return layout.arr[lo[t]], False
        return -1, False

    def active(self, u: int) -> bool:
        if self.deg_u[u] >= self.f.cap_l[u]:
            return False
        return self.top(u)[0] != -1 or bool(self.lprime[u])

    def unsaturated(self, w: int) -> bool:
        return self.deg_w[w] < self.f.cap_r[w]

    def satellite(self, t: int) -> int:
        """An in-list entry of tie ``t`` whose disposer is unsaturated, or -1."""
        if self.avail[t] == 0:
            return -1
        layout = self.layout
        if not self.literal:
            return layout.top(t)
        for e in layout.zone_entries(t):
            if self.unsaturated(self.f.l_cand[e]):
                return e
        raise AssertionError("availability counter out of sync")

    def satellitic(self, e: int) -> bool:
        return self.avail[self.f.tie_of_edge[e]] > 0

    def insecure(self, w: int) -> int:
        """Edge of a partner satellitic wrt ``w``, or -1; prunes S_w on the way."""
        s = self.s_w[w]
        if not s:
            return -1
        in_m = self.in_m
        while s:
            e = s[0]
            if in_m[e] and self.satellitic(e):
                return e
            s.popleft()
        return -1

    def uneasy(self, w: int, e: int) -> bool:
        """Is ``w`` uneasy with respect to the proposer of edge ``e``?"""
        if self.unsaturated(w) or self.insecure(w) != -1:
            return False
        front = self.book.front(w, self.f.edge_rank_right[e])
        return front is not None and self.subsat[front] > 0

    # -- bookkeeping ---------------------------------------------------------

    def _lose_option(self, u: int, t: int) -> None:
        self.avail[t] -= 1
        c = self.subsat[u] - 1
        self.subsat[u] = c
        if c == 0:
            rr = self.f.edge_rank_right
            for w, e in self.partners_u[u].items():
                self.book.demote(w, u, rr[e])

    def _relocate_all(self, w: int) -> None:
        f, layout = self.f, self.layout
        for j in range(f.r_ptr[w], f.r_ptr[w + 1]):
            layout.relocate(f.r2l[j])

    def _on_saturated(self, w: int) -> None:
        f, layout = self.f, self.layout
        for j in range(f.r_ptr[w], f.r_ptr[w + 1]):
            e = f.r2l[j]
            if layout.in_list(e):
                self._lose_option(f.edge_left[e], f.tie_of_edge[e])
        if not self.literal:
            self._relocate_all(w)

    def _take_entry(self, e: int, special: bool) -> None:
        """Remove entry ``e`` from L_u, keeping it as retained if special."""
        f = self.f
        self.layout.remove(e)
        if self.unsaturated(f.l_cand[e]):
            self._lose_option(f.edge_left[e], f.tie_of_edge[e])
        if special:
            self.retained[e] = True

    def scan(self, e: int, special: bool) -> None:
        n = self.l_scans[e] + 1
        self.l_scans[e] = n
        if n == 1:
            self.special_first[e] = special

    def link(self, e: int) -> None:
        f = self.f
        u, w = f.edge_left[e], f.l_cand[e]
        self.in_m[e] = True
        self.partners_u[u][w] = e
        self.deg_u[u] += 1
        self.book.add(w, u, f.edge_rank_right[e])
        if self.satellitic(e):
            s = self.s_w[w]
            if s is None:
                s = self.s_w[w] = deque()
            s.append(e)
        first = not self.ever_matched[w]
        self.ever_matched[w] = True
        self.deg_w[w] += 1
        if self.literal and first:
            self._relocate_all(w)
        if self.deg_w[w] == f.cap_r[w] and not self.ever_saturated[w]:
            self.ever_saturated[w] = True
            self._on_saturated(w)

    def unlink(self, e: int) -> None:
        """Drop ``(u, w)`` from M; ``w`` stays saturated because a link follows."""
        f = self.f
        u, w = f.edge_left[e], f.l_cand[e]
        self.in_m[e] = False
        del self.partners_u[u][w]
        self.deg_u[u] -= 1
        self.deg_w[w] -= 1
        self.book.remove(w, u, f.edge_rank_right[e])
        if self.retained[e]:
            self.retained[e] = False
            aw = self.awake[u]
            if aw is None:
                aw = self.awake[u] = []
            self.seq += 1
            heapq.heappush(aw, (f.tie_of_edge[e], self.seq, e))

    def defer(self, u: int, e: int) -> bool:
        if self.in_lprime[e]:
            return False
        lp = self.lprime[u]
        if lp is None:
            lp = self.lprime[u] = deque()
        lp.append(e)
        self.in_lprime[e] = True
        return True

    # -- one proposal ----------------------------------------------------------

    def step(self, u: int, freed: list[int]) -> None:
        e, from_awake = self.top(u)
        if e != -1:
            self.step_primary(u, e, from_awake, freed)
        else:
            self.step_deferred(u, freed)

    def step_primary(self, u: int, e: int, from_awake: bool, freed: list[int]) -> None:
        f = self.f
        w = f.l_cand[e]
        rr = f.edge_rank_right
        if from_awake:
            heapq.heappop(self.awake[u])
            special = False
        else:
            special = self.unsaturated(w) and self.avail[f.tie_of_edge[e]] >= 2
            self._take_entry(e, special)
        self.scan(e, special)
        self.emit(Event("propose", u, w, source="L", special=special,
                        detail="retained" if from_awake else ""))

        if self.unsaturated(w):
            self.link(e)
            self.emit(Event("accept", u, w))
            return
        sat_e = self.insecure(w)
        if sat_e != -1:
            u0 = f.edge_left[sat_e]
            e2 = self.satellite(f.tie_of_edge[sat_e])
            w2 = f.l_cand[e2]
            special2 = self.avail[f.tie_of_edge[e2]] >= 2
            self._take_entry(e2, special2)
            self.scan(e2, special2)
            self.unlink(sat_e)
            self.link(e)
            self.link(e2)
            self.emit(Event("swap", u, w, displaced=u0, satellite=w2, special=special2))
            return
        worst = self.book.worst(w)
        if worst is not None and rr[e] < worst[1]:
            u0 = worst[0]
            e0 = self.partners_u[u0][w]
            self.unlink(e0)
            self.link(e)
            freed.append(u0)
            self.emit(Event("replace", u, w, displaced=u0, detail="prefers"))
            if self.uneasy(w, e0) and self.defer(u0, e0):
                self.emit(Event("defer", u, w, displaced=u0, detail="evicted"))
        elif self.uneasy(w, e):
            if self.defer(u, e):
                self.emit(Event("defer", u, w, source="L"))
            else:
                self.emit(Event("reject", u, w, detail="queued"))
        else:
            self.emit(Event("reject", u, w))

    def step_deferred(self, u: int, freed: list[int]) -> None:
        f = self.f
        e = self.lprime[u].popleft()
        self.in_lprime[e] = False
        w = f.l_cand[e]
        self.lprime_scans[e] += 1
        self.emit(Event("propose", u, w, source="L'"))
        if self.in_m[e]:
            self.emit(Event("reject", u, w, detail="stale"))
            return
        if self.uneasy(w, e):
            u0 = self.book.front(w, f.edge_rank_right[e])
            e0 = self.partners_u[u0][w]
            self.unlink(e0)
            self.link(e)
            freed.append(u0)
            self.emit(Event("replace", u, w, displaced=u0, detail="uneasy"))
            if self.uneasy(w, e0) and self.defer(u0, e0):
                self.emit(Event("defer", u, w, displaced=u0, detail="evicted"))
        else:
            self.emit(Event("reject", u, w))

    def result(self) -> tuple[list[tuple[int, int]], Counters]:
        f = self.f
        pairs = [(f.edge_left[e], f.l_cand[e]) for e, x in enumerate(self.in_m) if x]
        counters = Counters(np.asarray(self.l_scans, dtype=np.int64),
                            np.asarray(self.lprime_scans, dtype=np.int64),
                            np.asarray(self.special_first, dtype=bool),
                            self.book.ops, self.book.logweighted)
        return pairs, counters


def _should_swap(instance: Instance) -> bool:
    if instance.n_left == 0 or instance.n_right == 0:
        return False
    return int(instance.capacities_left.max()) < int(instance.capacities_right.max())


def solve_b(instance: Instance, policy: SchedulePolicy | None = None, tiebreak_seed: int = 0,
            *, relocate_on: str = RELOCATE_ON_SATURATION, orient: bool = True,
            trace: bool = False, trace_limit: int = 1_000_000) -> SolveResult:
    """Stable b-matching with no dangerous path, hence a 3/2-approximation.

    With ``orient=True`` the side with the larger maximum capacity proposes,
    so that every priority queue is bounded by the smaller maximum.  When
    the sides are swapped, ``result.proposer_side`` is ``Side.RIGHT`` and the
    trace uses the swapped roles (proposer ids are right-side ids); the
    matching and counters are always reported on the original instance.

    ``relocate_on`` picks when a disposer is moved behind the unsaturated
    part of each tie: on saturation (default) or on her first match.
    """
    policy = policy or SchedulePolicy.lifo()
    swap = orient and _should_swap(instance)
    work = instance.transposed() if swap else instance
    st = _BState(work, tiebreak_seed, relocate_on, trace, trace_limit)
    sched = Scheduler(policy, work.n_left, st.active)
    sched.add_all(range(work.n_left))
    freed: list[int] = []
    while (u := sched.next()) is not None:
        st.step(u, freed)
        if st.active(u):
            sched.add(u)
        for u0 in freed:
            sched.add(u0)
        freed.clear()
    pairs, counters = st.result()
    if swap:
        pairs = [(w, u) for (u, w) in pairs]
        back = np.asarray(instance.fast.r2l, dtype=np.int64)
        for name in ("l_scans", "lprime_scans", "special_first"):
            arr = getattr(counters, name)
            out = np.empty_like(arr)
            out[back] = arr
            setattr(counters, name, out)
    return SolveResult(Matching.of(pairs), counters, st.trace, st.trace_truncated,
                       proposer_side=Side.RIGHT if swap else Side.LEFT)
