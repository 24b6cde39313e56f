"""Linear-time 3/2-approximation for stable marriage with ties ("GS Modified").

Men propose, women dispose, as in Gale-Shapley, with three additions:

* inside a tie a man proposes to free women before matched ones;
* a proposal over a *special* edge (the woman is free and another free woman
  is tied with her) leaves her on the man's list, so he can come back;
* a woman whose partner still has a free woman tied with her (she is
  *insecure*) accepts any proposer, and her partner moves to that free
  woman; a woman who is matched to an equally good partner that still has
  some free woman on his list (she is *uneasy*) is remembered on the
  proposer's deferred list ``L'`` and accepts him from there if she is still
  uneasy when he gets to it.

The output is stable and has no alternating path ``(w, m1, w1, m)`` with
free ends that could be swapped without ``(m1, w1)`` blocking, which bounds
the size of a maximum stable matching by 3/2 times the output size.
"""
from __future__ import annotations

from collections import deque

import numpy as np

from .events import Counters, Event
from .layout import TieLayout, tiebreak_order
from .model import Instance, Matching, Side
from .schedule import SchedulePolicy, Scheduler

__all__ = ["CapacityNotOne", "SolveResult", "solve", "gale_shapley_baseline"]


class CapacityNotOne(ValueError):
    """The one-to-one engines need every capacity to be 1."""


class SolveResult:
    """Output of a solve: the matching, exact counters and an optional trace."""

    def __init__(self, matching: Matching, counters: Counters,
                 trace: list[Event] | None = None, trace_truncated: bool = False,
                 proposer_side: Side = Side.LEFT):
        self.matching = matching
        self.proposer_side = proposer_side
        self.counters = counters
        self.trace = trace
        self.trace_truncated = trace_truncated

    def __repr__(self) -> str:
        return (f"SolveResult(size={len(self.matching)}, "
                f"proposals={self.counters.total_proposals})")

    def proposers(self) -> list[int]:
        """The proposer of every step, read back from the trace."""
        if self.trace is None:
            raise ValueError("solve was run without a trace")
        return [ev.man for ev in self.trace if ev.kind == "propose"]


def _require_one_to_one(instance: Instance) -> None:
    if not instance.is_one_to_one:
        raise CapacityNotOne("every capacity must be 1 for the one-to-one engine")


class _State:
    def __init__(self, instance: Instance, tiebreak_seed: int, trace: bool, trace_limit: int):
        f = instance.fast
        self.f = f
        self.layout = TieLayout(instance, tiebreak_seed)
        n_left, n_right, m = instance.n_left, instance.n_right, instance.num_edges
        self.partner_m = [-1] * n_left          # edge id, -1 when free
        self.partner_w = [-1] * n_right
        self.freecount = np.diff(instance.left_ptr).tolist()
        self.cursor = f.l_agent_tie[:-1]
        self.tie_stop = f.l_agent_tie[1:]
        self.pending: list[deque | None] = [None] * n_left   # retained special entries
        self.lprime: list[deque | None] = [None] * n_left
        self.l_scans = [0] * m
        self.lprime_scans = [0] * m
        self.special_first = [False] * m
        self.trace: list[Event] | None = [] if trace else None
        self.trace_limit = trace_limit
        self.trace_truncated = False

    def emit(self, ev: Event) -> None:
        if self.trace is not None:
            if len(self.trace) < self.trace_limit:
                self.trace.append(ev)
            else:
                self.trace_truncated = True

    # -- predicates ----------------------------------------------------------

    def top(self, m: int) -> int:
        """Edge id at the top of L_m, -1 when L_m is empty."""
        pend = self.pending[m]
        if pend:
            return pend[0]
        layout = self.layout
        t, stop = self.cursor[m], self.tie_stop[m]
        lo, end = layout.lo, layout.end
        while t < stop and lo[t] == end[t]:
            t += 1
        self.cursor[m] = t
        return layout.arr[lo[t]] if t < stop else -1

    def active(self, m: int) -> bool:
        return self.partner_m[m] == -1 and (self.top(m) != -1 or bool(self.lprime[m]))

    def satellitic(self, m: int) -> bool:
        pe = self.partner_m[m]
        return pe != -1 and self.layout.free_count(self.f.tie_of_edge[pe]) > 0

    def insecure(self, w: int) -> bool:
        pe = self.partner_w[w]
        return pe != -1 and self.layout.free_count(self.f.tie_of_edge[pe]) > 0

    def uneasy(self, w: int, e: int) -> bool:
        """Is ``w`` uneasy with respect to the proposer over edge ``e``?"""
        pe = self.partner_w[w]
        if pe == -1 or self.insecure(w):
            return False
        rr = self.f.edge_rank_right
        return self.freecount[self.f.edge_left[pe]] > 0 and rr[pe] == rr[e]

    # -- transitions ---------------------------------------------------------

    def first_match(self, w: int) -> None:
        """Woman ``w`` just got her first partner: she is no longer free anywhere."""
        f, layout, freecount = self.f, self.layout, self.freecount
        edge_left, r2l = f.edge_left, f.r2l
        for j in range(f.r_ptr[w], f.r_ptr[w + 1]):
            e = r2l[j]
            freecount[edge_left[e]] -= 1
            layout.relocate(e)

    def scan(self, e: int, special: bool) -> None:
        n = self.l_scans[e] + 1
        self.l_scans[e] = n
        if n == 1:
            self.special_first[e] = special

    def step(self, m: int, freed: list[int]) -> None:
        e = self.top(m)
        if e != -1:
            self.step_primary(m, e, freed)
        else:
            self.step_deferred(m, freed)

    def step_primary(self, m: int, e: int, freed: list[int]) -> None:
        f, layout = self.f, self.layout
        w = f.l_cand[e]
        t = f.tie_of_edge[e]
        pend = self.pending[m]
        pw = self.partner_w
        pe = pw[w]
        if pend:
            # retained entries come up only once their tie has no free woman left
            assert layout.free_count(f.tie_of_edge[pend[0]]) == 0
            pend.popleft()
            special = False
            retained = True
        else:
            special = pe == -1 and layout.free_count(t) >= 2
            retained = False
            layout.take(t)
            if special:
                if pend is None:
                    pend = self.pending[m] = deque()
                pend.append(e)
        self.scan(e, special)
        self.emit(Event("propose", m, w, source="L", special=special,
                        detail="retained" if retained else ""))

        if pe == -1:
            pw[w] = e
            self.partner_m[m] = e
            self.first_match(w)
            self.emit(Event("accept", m, w))
        elif self.insecure(w):
            m0 = f.edge_left[pe]
            t0 = f.tie_of_edge[pe]
            e2 = layout.top(t0)
            w2 = f.l_cand[e2]
            special2 = layout.free_count(t0) >= 2
            layout.take(t0)
            if special2:
                p0 = self.pending[m0]
                if p0 is None:
                    p0 = self.pending[m0] = deque()
                p0.append(e2)
            self.scan(e2, special2)
            pw[w] = e
            self.partner_m[m] = e
            self.partner_m[m0] = e2
            pw[w2] = e2
            self.first_match(w2)
            # a proposal to a matched woman never has a free woman tied behind it
            assert not self.satellitic(m)
            self.emit(Event("swap", m, w, displaced=m0, satellite=w2, special=special2))
        elif f.edge_rank_right[e] < f.edge_rank_right[pe]:
            m0 = f.edge_left[pe]
            pw[w] = e
            self.partner_m[m] = e
            self.partner_m[m0] = -1
            freed.append(m0)
            self.emit(Event("replace", m, w, displaced=m0, detail="prefers"))
        elif self.uneasy(w, e):
            lp = self.lprime[m]
            if lp is None:
                lp = self.lprime[m] = deque()
            lp.append(e)
            self.emit(Event("defer", m, w, source="L"))
        else:
            self.emit(Event("reject", m, w))

    def step_deferred(self, m: int, freed: list[int]) -> None:
        e = self.lprime[m].popleft()
        f = self.f
        w = f.l_cand[e]
        self.lprime_scans[e] += 1
        self.emit(Event("propose", m, w, source="L'"))
        if self.uneasy(w, e):
            pe = self.partner_w[w]
            m0 = f.edge_left[pe]
            self.partner_w[w] = e
            self.partner_m[m] = e
            self.partner_m[m0] = -1
            freed.append(m0)
            self.emit(Event("replace", m, w, displaced=m0, detail="uneasy"))
        else:
            self.emit(Event("reject", m, w))

    def result(self) -> SolveResult:
        el, lc = self.f.edge_left, self.f.l_cand
        matching = Matching.of((el[e], lc[e]) for e in self.partner_m if e != -1)
        counters = Counters(np.asarray(self.l_scans, dtype=np.int64),
                            np.asarray(self.lprime_scans, dtype=np.int64),
                            np.asarray(self.special_first, dtype=bool))
        return SolveResult(matching, counters, self.trace, self.trace_truncated)


def solve(instance: Instance, policy: SchedulePolicy | None = None, tiebreak_seed: int = 0,
          *, trace: bool = False, trace_limit: int = 1_000_000) -> SolveResult:
    """Run GS Modified on a one-to-one instance.

    ``tiebreak_seed`` fixes the initial order inside every tie of the men's
    lists (0 keeps the listed order).  The result is deterministic given
    ``(policy, tiebreak_seed)``; enabling the trace never changes decisions.

    Raises :class:`CapacityNotOne` if any capacity differs from 1 and
    :class:`~approxstable.schedule.ScheduleError` if a scripted schedule
    names a man who cannot propose at his turn.
    """
    _require_one_to_one(instance)
    policy = policy or SchedulePolicy.lifo()
    st = _State(instance, tiebreak_seed, trace, trace_limit)
    sched = Scheduler(policy, instance.n_left, st.active)
    sched.add_all(range(instance.n_left))
    freed: list[int] = []
    while (m := sched.next()) is not None:
        st.step(m, freed)
        if st.active(m):
            sched.add(m)
        for m0 in freed:
            sched.add(m0)
        freed.clear()
    return st.result()


def gale_shapley_baseline(instance: Instance, tiebreak_seed: int = 0) -> Matching:
    """Classic man-proposing Gale-Shapley after breaking all ties.

    Ties on both sides are broken by ``tiebreak_seed`` (0 keeps the listed
    order; the women's side uses the seed's second stream).  The result is
    stable for the original instance.
    """
    _require_one_to_one(instance)
    f = instance.fast
    m_order = tiebreak_order(np.asarray(f.tie_of_edge, dtype=np.int64), tiebreak_seed).tolist()
    # strict position of every man on every woman's list
    r_group = np.repeat(np.arange(instance.n_right), np.diff(instance.right_ptr)) \
        * (int(instance.right_rank.max()) + 1 if instance.num_edges else 1) + instance.right_rank
    r_order = tiebreak_order(r_group, tiebreak_seed * 2 + 1 if tiebreak_seed else 0)
    strict_r = np.empty(instance.num_edges, dtype=np.int64)
    strict_r[r_order] = np.arange(instance.num_edges)
    edge_strict = strict_r[instance.left_to_right].tolist()

    l_ptr = f.l_ptr
    nxt = list(l_ptr[:-1])
    holder = [-1] * instance.n_right   # edge id held by each woman
    stack = list(range(instance.n_left - 1, -1, -1))
    while stack:
        m = stack.pop()
        while nxt[m] < l_ptr[m + 1]:
            e = m_order[nxt[m]]
            nxt[m] += 1
            w = f.l_cand[e]
            h = holder[w]
            if h == -1 or edge_strict[e] < edge_strict[h]:
                holder[w] = e
                if h != -1:
                    stack.append(f.edge_left[h])
                break
    return Matching.of((f.edge_left[e], f.l_cand[e]) for e in holder if e != -1)
