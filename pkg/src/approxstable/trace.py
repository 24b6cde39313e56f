"""Replay a solver trace and check the structural invariants event by event.

The replay keeps its own copy of the matching and evaluates every predicate
(satellitic, insecure, subsatellitic, uneasy, special) directly from the
definitions on the original lists, sharing no state with the engines.
"""
from __future__ import annotations

from .events import Event
from .model import Instance, Side

__all__ = ["TraceReplay", "check_one_to_one_invariants", "check_b_invariants", "replay_matching"]


class TraceReplay:
    """Matching state rebuilt from events, with definition-direct predicates."""

    def __init__(self, instance: Instance):
        self.inst = instance
        f = instance.fast
        self.nbrs = [[(f.l_cand[e], f.l_rank[e]) for e in range(f.l_ptr[u], f.l_ptr[u + 1])]
                     for u in range(instance.n_left)]
        self.rank_u = {(f.edge_left[e], f.l_cand[e]): f.l_rank[e] for e in range(instance.num_edges)}
        self.rank_w = {(f.edge_left[e], f.l_cand[e]): f.edge_rank_right[e]
                       for e in range(instance.num_edges)}
        self.cap_u, self.cap_w = f.cap_l, f.cap_r
        self.pu: list[set[int]] = [set() for _ in range(instance.n_left)]
        self.pw: list[set[int]] = [set() for _ in range(instance.n_right)]

    # -- definitions ----------------------------------------------------------

    def unsat_w(self, w: int) -> bool:
        return len(self.pw[w]) < self.cap_w[w]

    def saturated_w(self, w: int) -> bool:
        return not self.unsat_w(w)

    def satellites(self, u: int, w: int) -> list[int]:
        r = self.rank_u[(u, w)]
        return [x for x, rx in self.nbrs[u]
                if x != w and rx == r and self.unsat_w(x) and x not in self.pu[u]]

    def satellitic(self, u: int, w: int) -> bool:
        return bool(self.satellites(u, w))

    def insecure(self, w: int) -> bool:
        return any(self.satellitic(u, w) for u in self.pw[w])

    def subsatellitic(self, u: int) -> bool:
        return any(self.unsat_w(x) and x not in self.pu[u] for x, _ in self.nbrs[u])

    def special(self, u: int, w: int) -> bool:
        return self.unsat_w(w) and bool(self.satellites(u, w))

    def uneasy(self, w: int, u: int) -> bool:
        if self.unsat_w(w) or self.insecure(w):
            return False
        r = self.rank_w[(u, w)]
        return any(self.rank_w[(x, w)] == r and self.subsatellitic(x)
                   for x in self.pw[w] if x != u)

    def worst_rank(self, w: int) -> int:
        return max((self.rank_w[(x, w)] for x in self.pw[w]), default=-1)

    # -- mutation ---------------------------------------------------------------

    def add(self, u: int, w: int) -> None:
        self.pu[u].add(w)
        self.pw[w].add(u)

    def drop(self, u: int, w: int) -> None:
        self.pu[u].discard(w)
        self.pw[w].discard(u)

    def pairs(self) -> set[tuple[int, int]]:
        return {(u, w) for u, ws in enumerate(self.pu) for w in ws}


def _working_instance(instance: Instance, result) -> Instance:
    return instance.transposed() if getattr(result, "proposer_side", Side.LEFT) is Side.RIGHT \
        else instance


def _steps(trace: list[Event]):
    """Group events into (proposal, outcome events)."""
    i = 0
    while i < len(trace):
        ev = trace[i]
        if ev.kind != "propose":
            raise ValueError(f"trace out of step at event {i}: {ev}")
        j = i + 1
        while j < len(trace) and trace[j].kind != "propose":
            j += 1
        yield ev, trace[i + 1:j]
        i = j


def replay_matching(instance: Instance, result) -> set[tuple[int, int]]:
    """Matching obtained by applying the trace; equals the result's when consistent."""
    inst = _working_instance(instance, result)
    rp = TraceReplay(inst)
    for prop, outs in _steps(result.trace):
        _apply(rp, prop, outs)
    pairs = rp.pairs()
    if inst is not instance:
        pairs = {(w, u) for u, w in pairs}
    return pairs


def _apply(rp: TraceReplay, prop: Event, outs: list[Event]) -> None:
    u, w = prop.man, prop.woman
    for ev in outs:
        if ev.kind == "accept":
            rp.add(u, w)
        elif ev.kind == "swap":
            rp.drop(ev.displaced, w)
            rp.add(u, w)
            rp.add(ev.displaced, ev.satellite)
        elif ev.kind == "replace":
            rp.drop(ev.displaced, w)
            rp.add(u, w)


def _common_checks(rp: TraceReplay, k: int, prop: Event, outs: list[Event], out: list[str]):
    """Checks shared by both engines, evaluated on the state before the step."""
    u, w = prop.man, prop.woman
    tag = f"step {k} ({prop.man}->{prop.woman})"
    if (u, w) not in rp.rank_u:
        out.append(f"{tag}: proposal over a non-edge")
        return
    if prop.source == "L" and prop.special != rp.special(u, w):
        out.append(f"{tag}: special flag {prop.special} disagrees with the definition")
    kinds = [ev.kind for ev in outs]
    was_insecure = rp.insecure(w) and rp.saturated_w(w)
    if was_insecure and not ({"accept", "swap"} & set(kinds)):
        out.append(f"{tag}: insecure disposer did not accept")
    for ev in outs:
        if ev.kind == "accept" and not rp.unsat_w(w):
            out.append(f"{tag}: accepted by a saturated disposer without a swap")
        if ev.kind == "swap":
            u0 = ev.displaced
            if u0 not in rp.pw[w] or not rp.satellitic(u0, w):
                out.append(f"{tag}: swap displaced a partner that is not satellitic")
            elif ev.satellite not in rp.satellites(u0, w):
                out.append(f"{tag}: swap target is not a satellite")
            if rp.unsat_w(w):
                out.append(f"{tag}: swap at an unsaturated disposer")
        if ev.kind == "replace":
            u0 = ev.displaced
            r_new, r_old = rp.rank_w[(u, w)], rp.rank_w.get((u0, w))
            if u0 not in rp.pw[w] or rp.unsat_w(w):
                out.append(f"{tag}: replace of a non-partner or at an unsaturated disposer")
                continue
            if was_insecure:
                out.append(f"{tag}: insecure disposer replaced instead of swapping")
            if r_old != rp.worst_rank(w):
                out.append(f"{tag}: displaced partner is not among the worst")
            if ev.detail == "prefers":
                if not r_new < r_old:
                    out.append(f"{tag}: replaced for a proposer that is not strictly better")
                if any(rp.rank_w[(x, w)] == r_old and rp.subsatellitic(x)
                       for x in rp.pw[w]) and not rp.subsatellitic(u0):
                    out.append(f"{tag}: evicted a non-subsatellitic worst partner over a "
                               f"subsatellitic one")
            elif ev.detail == "uneasy":
                if prop.source != "L'":
                    out.append(f"{tag}: equal-rank replacement outside the deferred list")
                if r_new != r_old:
                    out.append(f"{tag}: uneasy replacement across ranks")
                if not rp.subsatellitic(u0):
                    out.append(f"{tag}: displaced equal-rank partner is not subsatellitic")
                if rp.subsatellitic(u):
                    out.append(f"{tag}: equal-rank replacement is subsatellitic")
                if not rp.uneasy(w, u):
                    out.append(f"{tag}: disposer was not uneasy wrt the proposer")
        if ev.kind == "defer" and ev.detail != "evicted" and not rp.uneasy(w, u):
            out.append(f"{tag}: deferred although the disposer was not uneasy")
        if ev.kind == "reject" and prop.source == "L" and ev.detail == "":
            if rp.unsat_w(w):
                out.append(f"{tag}: unsaturated disposer rejected")
            elif rp.rank_w[(u, w)] < rp.worst_rank(w):
                out.append(f"{tag}: rejected a proposer better than the worst partner")
            elif rp.uneasy(w, u):
                out.append(f"{tag}: rejected instead of deferring")
    if prop.source == "L'" and not outs:
        out.append(f"{tag}: deferred proposal without an outcome")


def _run(instance: Instance, result, per_step) -> list[str]:
    if result.trace is None:
        raise ValueError("the result carries no trace")
    if result.trace_truncated:
        raise ValueError("the trace was truncated")
    inst = _working_instance(instance, result)
    rp = TraceReplay(inst)
    out: list[str] = []
    ctx: dict = {}
    for k, (prop, outs) in enumerate(_steps(result.trace)):
        _common_checks(rp, k, prop, outs, out)
        per_step(rp, k, prop, outs, out, ctx, before=True)
        _apply(rp, prop, outs)
        for ev in outs:
            if ev.kind == "defer" and ev.detail == "evicted" \
                    and not rp.uneasy(prop.woman, ev.displaced):
                out.append(f"step {k}: eviction deferral although not uneasy wrt the evicted")
        per_step(rp, k, prop, outs, out, ctx, before=False)
    pairs = rp.pairs()
    if inst is not instance:
        pairs = {(w, u) for u, w in pairs}
    if pairs != set(result.matching.edges):
        out.append("replayed matching differs from the reported matching")
    return out


def check_one_to_one_invariants(instance: Instance, result) -> list[str]:
    """Violations of the four per-woman properties of the one-to-one engine.

    1. a matched woman stays matched;
    2. a woman becomes insecure only at the first proposal she receives, and
       only over a special edge; an insecure woman accepts and stops being
       insecure;
    3. a non-insecure woman changes partner only for someone at least as
       good, always for someone better, and for an equal one only when she
       is uneasy and he proposes from his deferred list;
    4. after an equal-rank change the old partner is subsatellitic and the
       new one is not.
    Parts 3 and 4 are covered by the shared replace checks.
    """
    def per_step(rp, k, prop, outs, out, ctx, before):
        w = prop.woman
        tag = f"step {k}"
        if before:
            ctx["matched"] = {x for x in range(len(rp.pw)) if rp.pw[x]}
            ctx["insecure"] = {x for x in ctx["matched"] if rp.insecure(x)}
            ctx["first"] = w not in ctx.setdefault("proposed", set())
            ctx["proposed"].add(w)
            return
        now_matched = {x for x in range(len(rp.pw)) if rp.pw[x]}
        if not ctx["matched"] <= now_matched:
            out.append(f"{tag}: a matched woman became free")
        now_insecure = {x for x in now_matched if rp.insecure(x)}
        for x in now_insecure - ctx["insecure"]:
            ok = (x == w and ctx["first"] and prop.special
                  and any(ev.kind == "accept" for ev in outs))
            # the displaced man's satellite is matched through a non-special
            # or special edge; she counts as proposed-to at that moment
            sat = [ev for ev in outs if ev.kind == "swap" and ev.satellite == x]
            if sat and sat[0].special and x not in ctx["proposed"]:
                ok = True
            if not ok:
                out.append(f"{tag}: woman {x} became insecure outside a first special proposal")
        for ev in outs:
            if ev.kind == "swap":
                ctx["proposed"].add(ev.satellite)
                if w in now_insecure:
                    out.append(f"{tag}: woman stayed insecure after a proposal")
    return _run(instance, result, per_step)


def check_b_invariants(instance: Instance, result) -> list[str]:
    """Violations of the three disposer properties of the b-matching engine.

    1. once saturated, a disposer stays saturated;
    2. an insecure disposer accepts every proposal, and a saturated
       disposer that is not insecure never becomes insecure;
    3. a partner is dropped only by a satellite swap, for a strictly better
       proposer, or for an equal one proposing from a deferred list while
       the disposer is uneasy (shared replace checks).
    """
    def per_step(rp, k, prop, outs, out, ctx, before):
        n = len(rp.pw)
        if before:
            return
        sat = ctx.setdefault("saturated", set())
        calm = ctx.setdefault("calm", set())       # saturated and not insecure, ever
        for x in range(n):
            s = rp.saturated_w(x) and rp.cap_w[x] > 0
            if x in sat and not s:
                out.append(f"step {k}: disposer {x} lost saturation")
            if s:
                sat.add(x)
                if rp.insecure(x):
                    if x in calm:
                        out.append(f"step {k}: disposer {x} became insecure again")
                else:
                    calm.add(x)
    return _run(instance, result, per_step)
