"""Order in which free proposers take their turns.

The proposal loop of both engines only says "while some free proposer has a
nonempty list"; the policy picks which one.  Guarantees must hold for every
policy, the matching itself may differ.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

__all__ = ["SchedulePolicy", "ScheduleError", "Scheduler"]


class ScheduleError(RuntimeError):
    """A scripted schedule named a proposer that cannot propose at its turn."""


@dataclass(frozen=True)
class SchedulePolicy:
    """One of ``lifo`` (default), ``fifo``, ``random`` or ``scripted``.

    ``lifo``: the most recently freed (or still rejected) proposer goes next.
    ``fifo``: round robin over free proposers.
    ``random``: uniform choice among free proposers, seeded by ``seed``.
    ``scripted``: the proposers named in ``script`` take one turn each, in
    order; once the script is exhausted the run continues as ``lifo``.
    """

    kind: str = "lifo"
    script: tuple[int, ...] = ()
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("lifo", "fifo", "random", "scripted"):
            raise ValueError(f"unknown schedule policy {self.kind!r}")

    @classmethod
    def lifo(cls) -> "SchedulePolicy":
        return cls("lifo")

    @classmethod
    def fifo(cls) -> "SchedulePolicy":
        return cls("fifo")

    @classmethod
    def random(cls, seed: int = 0) -> "SchedulePolicy":
        return cls("random", seed=seed)

    @classmethod
    def scripted(cls, script: Sequence[int]) -> "SchedulePolicy":
        return cls("scripted", script=tuple(int(m) for m in script))

    def __str__(self) -> str:
        if self.kind == "scripted":
            return "scripted:" + ",".join(f"m{m + 1}" for m in self.script)
        if self.kind == "random":
            return f"random:{self.seed}"
        return self.kind


class Scheduler:
    """Worklist of candidate proposers.

    Entries may go stale (a listed proposer that can no longer propose);
    :meth:`next` skips them using the engine's ``active`` predicate.
    """

    def __init__(self, policy: SchedulePolicy, n: int, active: Callable[[int], bool]):
        self.policy = policy
        self.active = active
        self._queued = [False] * n
        self._script = deque(policy.script) if policy.kind == "scripted" else None
        self._rng = random.Random(policy.seed) if policy.kind == "random" else None
        self._items: list[int] | deque[int] = deque() if policy.kind == "fifo" else []

    def add(self, m: int) -> None:
        if self._queued[m]:
            return
        self._queued[m] = True
        self._items.append(m)

    def add_all(self, ms) -> None:
        if self.policy.kind in ("lifo", "scripted"):
            ms = reversed(list(ms))
        for m in ms:
            self.add(m)

    def _take(self) -> int | None:
        items = self._items
        while items:
            if self._rng is not None:
                i = self._rng.randrange(len(items))
                items[i], items[-1] = items[-1], items[i]
                m = items.pop()
            elif isinstance(items, deque):
                m = items.popleft()
            else:
                m = items.pop()
            self._queued[m] = False
            if self.active(m):
                return m
        return None

    def next(self) -> int | None:
        """The proposer for the next step, or ``None`` when nobody can propose."""
        if self._script:
            m = self._script.popleft()
            if not (0 <= m < len(self._queued)) or not self.active(m):
                raise ScheduleError(f"scripted proposer m{m + 1} cannot propose at this turn")
            if self._queued[m]:
                self._queued[m] = False
                self._items.remove(m)
            return m
        return self._take()
