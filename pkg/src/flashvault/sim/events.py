"""Discrete-event core: steps on FCFS resources, a heap timeline, and
critical-path attribution.

A request is a DAG of steps.  A step becomes ready when all its
dependencies are done and starts once its resources are free.  Resources
are granted in ready order (ties by creation sequence).  A step may hold
one of its resources past its own end, until a later step finishes; this
is how the simulator models a page register that is busy until the data
has left it.

Every step records the step that determined its start (the dependency
that finished last, or the previous occupant of the resource).  Walking
that chain back from a request's final step gives its critical path, and
the per-category sums along that path add up to the request's latency.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

CATEGORIES = ("stack", "ftl", "nand", "bus", "dram", "crypto")


class Resource:
    def __init__(self, name: str, units: int = 1):
        self.name = name
        self.units = units
        self.free_at = [0.0] * units
        self.last = [None] * units
        self.held = None        # (unit, step) while a hold is active
        self.waiters = []

    def reset(self, t=0.0):
        self.free_at = [t] * self.units
        self.last = [None] * self.units
        self.held = None
        self.waiters = []

    def earliest(self):
        u = min(range(self.units), key=lambda i: (self.free_at[i], i))
        return u, self.free_at[u]


@dataclass(eq=False)
class Step:
    seq: int
    label: str
    resources: tuple
    parts: tuple            # ((category, duration_us, label), ...)
    deps: list = field(default_factory=list)
    hold: Resource | None = None
    release_by: "Step | None" = None
    request: int = -1
    succs: list = field(default_factory=list)
    pending: int = 0
    ready: float = math.nan
    start: float = math.nan
    end: float = math.nan
    pred: "Step | None" = None
    releases: list = field(default_factory=list)
    _ready_pred: "Step | None" = None
    _units: tuple = ()
    not_before: float = -math.inf

    @property
    def duration(self) -> float:
        return sum(p[1] for p in self.parts)

    @property
    def done(self) -> bool:
        return not math.isnan(self.end)


class Timeline:
    """Owns the event heap and the step sequence counter."""

    def __init__(self):
        self.seq = 0
        self.heap = []
        self.trace = []          # (request, start, end, resource, label, category)
        self.now = 0.0

    def step(self, label, resources=(), parts=(), deps=(), hold=None, request=-1) -> Step:
        if isinstance(resources, Resource):
            resources = (resources,)
        self.seq += 1
        s = Step(self.seq, label, tuple(resources), tuple(parts), [d for d in deps if d is not None],
                 hold=hold, request=request)
        return s

    def hold_until(self, holder: Step, releaser: Step):
        holder.release_by = releaser
        releaser.releases.append(holder)

    # -- running ---------------------------------------------------------
    def run(self, steps, t0: float):
        """Simulate ``steps`` (already linked by deps) starting no earlier than t0."""
        for s in steps:
            s.pending = 0
            for d in s.deps:
                if d.done:
                    if s._ready_pred is None or d.end > s._ready_pred.end:
                        s._ready_pred = d
                else:
                    s.pending += 1
                    d.succs.append(s)
        for s in steps:
            if s.pending == 0:
                t = max(t0, s.not_before, s._ready_pred.end if s._ready_pred is not None else t0)
                self._push(t, s)
        while self.heap:
            t, kind, _, _, s = heapq.heappop(self.heap)
            self.now = max(self.now, t)
            if kind == 0:
                self._on_ready(s, t)
            else:
                self._on_done(s, t)
        return max((s.end for s in steps), default=t0)

    def _push(self, t, s):
        # at equal times ready events (kind 0) run before completions (kind 1)
        heapq.heappush(self.heap, (t, 0, self._next(), id(s), s))

    def _on_ready(self, s: Step, t: float, via: Step | None = None):
        if math.isnan(s.ready):
            s.ready = t
        for r in s.resources:
            if r.held is not None:
                r.waiters.append(s)
                return
        start = t
        binding = via if via is not None else s._ready_pred
        units = []
        for r in s.resources:
            u, free = r.earliest()
            units.append(u)
            if free > start:
                start = free
                binding = r.last[u]
        s.start = start
        s.pred = binding
        s.end = start + s.duration
        s._units = tuple(units)
        for r, u in zip(s.resources, units):
            if r is s.hold:
                r.free_at[u] = math.inf
                r.held = (u, s)
            else:
                r.free_at[u] = s.end
                r.last[u] = s
        self._log(s)
        heapq.heappush(self.heap, (s.end, 1, self._next(), id(s), s))

    def _next(self):
        self.seq += 1
        return self.seq

    def _on_done(self, s: Step, t: float):
        for holder in s.releases:
            r = holder.hold
            u, _ = r.held
            r.held = None
            r.free_at[u] = s.end
            r.last[u] = s
            waiters, r.waiters = r.waiters, []
            for w in waiters:
                self._on_ready(w, t, via=s)
        for nxt in s.succs:
            nxt.pending -= 1
            if nxt._ready_pred is None or s.end > nxt._ready_pred.end:
                nxt._ready_pred = s
            if nxt.pending == 0:
                self._push(t, nxt)

    def _log(self, s: Step):
        name = "+".join(r.name for r in s.resources) or "-"
        t = s.start
        for cat, dur, lab in s.parts:
            self.trace.append((s.request, t, t + dur, name, lab or s.label, cat))
            t += dur


def critical_path(final: Step, t0: float) -> dict:
    """Per-category time along the chain of binding predecessors, clipped at t0."""
    out = dict.fromkeys(CATEGORIES, 0.0)
    s = final
    while s is not None and s.end > t0:
        t = s.start
        for cat, dur, _ in s.parts:
            a, b = max(t, t0), t + dur
            if b > a:
                out[cat] += b - a
            t += dur
        if s.start <= t0:
            break
        s = s.pred
    return out
