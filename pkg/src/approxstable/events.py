"""Solver events and counters shared by both engines."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Event", "Counters", "format_event"]


@dataclass(frozen=True)
class Event:
    """One solver event.  ``man``/``woman`` are 0-based proposer/disposer ids.

    kinds and their extra fields:

    ``propose``   source ``"L"`` or ``"L'"``, ``special``; ``detail`` is
                  ``"retained"`` when a kept special entry is proposed again
    ``accept``    the disposer had spare capacity
    ``swap``      ``displaced`` was satellitic and moved to ``satellite``;
                  ``special`` tells whether that new edge was special
    ``replace``   ``displaced`` lost the disposer, ``detail`` is
                  ``"prefers"`` or ``"uneasy"``
    ``defer``     disposer appended to the proposer's deferred list;
                  for ``detail == "evicted"`` the list is ``displaced``'s
    ``reject``    proposal refused (``detail == "stale"``: deferred entry
                  already matched)
    """

    kind: str
    man: int
    woman: int
    source: str = ""
    special: bool = False
    displaced: int = -1
    satellite: int = -1
    detail: str = ""


def format_event(ev: Event, swapped: bool = False) -> str:
    """``EVENT kind m<i> w<j> [detail]`` with 1-based ids.

    ``swapped`` is for traces in which the right side proposed: the
    proposer is then printed as ``w<i>`` and the disposer as ``m<j>``.
    """
    pm, pw = ("w", "m") if swapped else ("m", "w")
    parts = ["EVENT", ev.kind, f"{pm}{ev.man + 1}", f"{pw}{ev.woman + 1}"]
    if ev.kind == "propose":
        parts.append(ev.source)
        if ev.special:
            parts.append("special")
        if ev.detail:
            parts.append(ev.detail)
    elif ev.kind == "swap":
        parts += [f"displaced={pm}{ev.displaced + 1}", f"satellite={pw}{ev.satellite + 1}"]
        if ev.special:
            parts.append("special")
    elif ev.kind == "replace":
        parts += [f"displaced={pm}{ev.displaced + 1}", ev.detail]
    elif ev.kind == "defer" and ev.detail == "evicted":
        parts += [f"list={pm}{ev.displaced + 1}", "evicted"]
    elif ev.detail:
        parts.append(ev.detail)
    return " ".join(parts)


@dataclass
class Counters:
    """Exact work counters of one solve, indexed by edge id where per-edge.

    ``l_scans[e]`` counts proposals over ``e`` from the primary list,
    including the implicit proposal when a satellitic partner is moved onto
    ``e``.  ``special_first[e]`` records whether the first such scan was over
    a special edge.  ``lprime_scans[e]`` counts proposals from deferred lists.
    """

    l_scans: np.ndarray
    lprime_scans: np.ndarray
    special_first: np.ndarray
    queue_ops: int = 0
    queue_ops_logweighted: float = 0.0

    @property
    def total_proposals(self) -> int:
        return int(self.l_scans.sum() + self.lprime_scans.sum())

    def bound_violations(self) -> list[str]:
        """Every per-edge and total bound that does not hold (empty when fine)."""
        out = []
        m = self.l_scans.shape[0]
        for e in np.flatnonzero(self.l_scans > 2):
            out.append(f"edge {e}: {self.l_scans[e]} primary scans")
        for e in np.flatnonzero((self.l_scans == 2) & ~self.special_first):
            out.append(f"edge {e}: rescanned although its first scan was not special")
        for e in np.flatnonzero(self.lprime_scans > 1):
            out.append(f"edge {e}: {self.lprime_scans[e]} deferred scans")
        if self.total_proposals > 3 * m:
            out.append(f"{self.total_proposals} proposals exceed 3*|E| = {3 * m}")
        return out
