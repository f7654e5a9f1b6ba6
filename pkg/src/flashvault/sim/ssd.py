"""The SSD simulator: request paths for the three crypto placements.

Placements:

``FV``
    engines inside each die; data is transformed between the page register
    and the channel, never touching controller DRAM.
``NCP``
    the same engines next to the controller; every 4 KB crypto unit makes a
    DRAM round trip (in, transform, out).
``CPU``
    host software crypto from the calibration tables plus the PCIe hop.

All timing is in microseconds.
"""

from __future__ import annotations

import csv
import io
from collections import OrderedDict
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from ..ace.schemes import core_cycles, message_hash_cycles, scheme_id
from ..bce.engine import canonical_id, ctr_cycles
from ..calibration import Calibration
from ..errors import ConfigurationError, InvalidRequestError
from .config import SsdConfig
from .events import CATEGORIES, Resource, Timeline, critical_path
from .ftl import FtlState
from .host import HostModel, hash_variant

PLACEMENTS = ("CPU", "NCP", "FV")
OPS = ("read", "program")

# signature sizes in bytes, used for the signed log record
SIGNATURE_BYTES = {"RSA": 384, "ECDSA": 96, "DILITHIUM": 3366, "FALCON": 1280, "SPHINCSPLUS": 29792}
DIGEST_BYTES = {"SHA256": 32, "SHA512": 64, "SHAKE256": 32}
RECORD_HEADER = 64
TRACE_FIELDS = (["kind", "request", "start_us", "end_us", "resource", "action", "category"]
                + [f"{c}_us" for c in CATEGORIES] + ["total_us"])


def placement_id(p) -> str:
    q = str(p).upper()
    if q == "FLASHVAULT":
        q = "FV"
    if q not in PLACEMENTS:
        raise InvalidRequestError(f"placement must be one of {PLACEMENTS}, got {p!r}")
    return q


@dataclass(frozen=True)
class IoRequest:
    op: str
    lba: int
    bytes: int
    crypto: str | None = None
    placement: str = "FV"
    arrival_us: float | None = None

    def __post_init__(self):
        if self.op not in OPS:
            raise InvalidRequestError(f"op must be 'read' or 'program', got {self.op!r}")
        if not isinstance(self.bytes, (int, np.integer)) or self.bytes <= 0:
            raise InvalidRequestError(f"request size must be a positive byte count, got {self.bytes!r}")
        if self.lba < 0:
            raise InvalidRequestError(f"illegal LBA {self.lba}")
        object.__setattr__(self, "placement", placement_id(self.placement))
        if self.crypto is not None:
            # only block ciphers move bulk data
            object.__setattr__(self, "crypto", canonical_id(self.crypto))


@dataclass(frozen=True)
class LatencyBreakdown:
    stack_us: float = 0.0
    ftl_us: float = 0.0
    nand_us: float = 0.0
    bus_us: float = 0.0
    dram_us: float = 0.0
    crypto_us: float = 0.0
    total_us: float = 0.0

    @classmethod
    def from_path(cls, path: dict, total: float) -> "LatencyBreakdown":
        return cls(*(path[c] for c in CATEGORIES), total)

    def components(self) -> dict:
        return {c: getattr(self, f"{c}_us") for c in CATEGORIES}

    def consistent(self, tol=1e-6) -> bool:
        return abs(sum(self.components().values()) - self.total_us) <= tol * max(1.0, self.total_us)

    @property
    def total_ms(self) -> float:
        return self.total_us / 1000


class Simulator:
    def __init__(self, config: SsdConfig | None = None, calibration: Calibration | None = None,
                 seed: int = 0, self_encrypt: bool = True, algorithm: str = "AES"):
        self.cal = calibration or Calibration.default()
        self.config = config or SsdConfig.from_calibration(self.cal)
        self.seed = seed
        self.self_encrypt = self_encrypt
        self.algorithm = canonical_id(algorithm)
        self.host = HostModel(self.cal)
        self.ftl = FtlState(self.config)
        self.tl = Timeline()
        self.map_cache: OrderedDict | None = None     # None: every lookup hits
        self.steady = False
        self.clock = 0.0
        self._rid = 0
        self._steps = []
        self._arrival = 0.0
        self.results = []       # (request, final step label, breakdown)
        c = self.config
        self.ch = [Resource(f"ch{i}") for i in range(c.channels)]
        self.plane = [Resource(f"plane{g}") for g in range(c.n_planes)]
        self.die_bce = [Resource(f"die{d}.bce") for d in range(c.n_dies)]
        self.die_hash = [Resource(f"die{d}.hash", c.hash_alus) for d in range(c.n_dies)]
        self.die_ace = [Resource(f"die{d}.ace", c.aces) for d in range(c.n_dies)]
        self.ctrl = Resource("ctrl.cpu")
        self.ncp_bce = Resource("ncp.bce")
        self.ncp_hash = Resource("ncp.hash", c.hash_alus)
        self.ncp_ace = Resource("ncp.ace", c.aces)
        self.dram = Resource("dram")
        self.pcie = Resource("pcie")
        self.hostcpu = Resource("host.cpu")
        self._die_slots = {}
        for g in range(c.n_planes):
            self._die_slots.setdefault(c.die_index(g), []).append(g)

    # -- resources and state ---------------------------------------------
    def resources(self):
        return (self.ch + self.plane + self.die_bce + self.die_hash + self.die_ace
                + [self.ctrl, self.ncp_bce, self.ncp_hash, self.ncp_ace, self.dram, self.pcie,
                   self.hostcpu])

    def reset_timeline(self, keep_trace=False):
        """Idle device at t=0; FTL contents are kept."""
        for r in self.resources():
            r.reset(0.0)
        self.clock = 0.0
        self.tl.now = 0.0
        if not keep_trace:
            self.tl.trace.clear()
            self.results.clear()

    @property
    def trace(self):
        return self.tl.trace

    def _us(self, cycles) -> float:
        return self.config.cycles_us(cycles)

    def _S(self, label, res=(), parts=(), deps=(), hold=None):
        s = self.tl.step(label, res, parts, deps, hold=hold, request=self._rid)
        if not s.deps:
            s.not_before = self._arrival
        self._steps.append(s)
        return s

    def _run(self, t0):
        steps, self._steps = self._steps, []
        end = self.tl.run(steps, t0)
        self.clock = max(self.clock, end)
        return end

    def _breakdown(self, final, t0) -> LatencyBreakdown:
        b = LatencyBreakdown.from_path(critical_path(final, t0), final.end - t0)
        self.results.append((final.request, final.label, b))
        return b

    @contextmanager
    def isolated(self):
        """Measure one scenario cell: idle timeline in, mapping cache restored out.

        FTL placement changes made by the cell are kept (copying the full map
        per cell would dominate the run time)."""
        saved = None if self.map_cache is None else OrderedDict(self.map_cache)
        self.reset_timeline()
        try:
            yield self
        finally:
            self.map_cache = saved
            self.reset_timeline()

    # -- algorithm switching ---------------------------------------------
    def reconfigure_algorithm(self, algo_id) -> dict:
        """Load a new microprogram into every BCE; charged once as a fixed latency."""
        cid = canonical_id(algo_id)     # raises before touching state
        self._rid += 1
        t0 = self._arrival = self.clock
        self._S(f"reconfigure {cid}", self.ctrl, (("stack", self.config.reconfig_us, "fsm"),))
        end = self._run(t0)
        for r in self.die_bce + [self.ncp_bce]:
            r.free_at = [max(f, end) for f in r.free_at]
        self.algorithm = cid
        return {"algorithm": cid, "latency_us": end - t0}

    # -- mapping cache ----------------------------------------------------
    def _map_plane(self, mp) -> int:
        return (abs(int(mp)) * 40503 + 17) % self.config.n_planes

    def _map_access(self, map_pages, write, dep):
        """Walk the request's map pages through the cache; misses cost NAND work."""
        last = dep
        if self.map_cache is None:
            return last
        c = self.config
        for mp in map_pages:
            mp = int(mp)
            if mp in self.map_cache:
                self.map_cache.move_to_end(mp)
                if write:
                    self.map_cache[mp] = True
                continue
            if len(self.map_cache) >= c.map_cache_pages:
                victim, dirty = self.map_cache.popitem(last=False)
                if dirty:
                    g = self._map_plane(victim)
                    b = self._S("map.wb.xfer", self.ch[g % c.channels],
                                (("bus", c.xfer_us(c.page_bytes), None),), [last])
                    last = self._S("map.wb.prog", self.plane[g],
                                   (("nand", c.tPCBSY_us + c.tPROG_us, None),), [b])
            g = self._map_plane(mp)
            r = self._S("map.read", self.plane[g], (("nand", c.tR_us + c.tRCBSY_us, None),), [last])
            b = self._S("map.read.xfer", self.ch[g % c.channels],
                        (("bus", c.xfer_us(c.page_bytes), None),), [r])
            last = self._S("map.update", self.ctrl, (("ftl", c.map_miss_us, None),), [b])
            self.map_cache[mp] = bool(write)
        return last

    def _map_pages(self, lpns):
        e = self.config.map_entries_per_page
        return list(dict.fromkeys(int(x) // e for x in lpns))

    # -- GC work on the timeline -------------------------------------------
    def _gc_steps(self, reloc, erases, dep):
        c = self.config
        out = []
        recrypt = 0.0
        if self.self_encrypt:
            # relocated pages stay ciphertext: decrypt and re-encrypt in the die
            recrypt = 2 * self._us(ctr_cycles(self.algorithm, c.page_bytes, c.die_lanes, self.cal))
        for g in np.flatnonzero((reloc > 0) | (erases > 0)):
            parts = []
            for _ in range(int(reloc[g])):
                parts.append(("nand", c.tR_us + c.tRCBSY_us, "gc.read"))
                if recrypt:
                    parts.append(("crypto", recrypt, "gc.recrypt"))
                parts.append(("nand", c.tPCBSY_us + c.tPROG_us, "gc.prog"))
            parts += [("nand", c.tERASE_us, "gc.erase")] * int(erases[g])
            out.append(self._S("gc", self.plane[int(g)], tuple(parts), [dep]))
        return out

    def gc_step(self, plane: int):
        """Collect one victim block on ``plane`` and charge it to the timeline."""
        reloc, erases = self.ftl.gc_step(plane)
        r = np.zeros(self.config.n_planes, dtype=np.int64)
        e = np.zeros_like(r)
        r[plane], e[plane] = reloc, erases
        self._rid += 1
        t0 = self._arrival = self.clock
        final = self._S("gc.done", (), (), self._gc_steps(r, e, None))
        self._run(t0)
        self._breakdown(final, t0)
        return reloc

    def wear_level_step(self, plane: int):
        moved = self.ftl.wear_level_step(plane)
        if moved:
            r = np.zeros(self.config.n_planes, dtype=np.int64)
            e = np.zeros_like(r)
            r[plane], e[plane] = moved, 1
            self._rid += 1
            t0 = self._arrival = self.clock
            final = self._S("wl.done", (), (), self._gc_steps(r, e, None))
            self._run(t0)
            self._breakdown(final, t0)
        return moved

    # -- bulk I/O -----------------------------------------------------------
    def _crypto_alg(self, req):
        if req.crypto is not None:
            return req.crypto
        if req.placement == "FV" and self.self_encrypt:
            return self.algorithm
        return None

    def _page_sizes(self, n_bytes):
        pb = self.config.page_bytes
        n = -(-n_bytes // pb)
        sizes = [pb] * n
        sizes[-1] = n_bytes - pb * (n - 1)
        return sizes

    def _build_io(self, req: IoRequest, t0):
        c = self.config
        alg = self._crypto_alg(req)
        sizes = self._page_sizes(req.bytes)
        lpns = np.arange(req.lba, req.lba + len(sizes), dtype=np.int64)
        if lpns[-1] >= self.ftl.l2p.size:
            raise InvalidRequestError(f"LBA range [{req.lba}, {lpns[-1]}] beyond {self.ftl.l2p.size} pages")
        bce_us = (lambda nb, lanes: self._us(ctr_cycles(alg, nb, lanes, self.cal))) if alg else None
        buffered = bool(c.double_buffering)
        P = req.placement
        head = None
        if P == "CPU" and req.op == "program":
            if alg:
                head = self._S("host.encrypt", self.hostcpu,
                               (("crypto", self.host.cipher_us(alg, req.bytes), None),))
            head = self._S("host.sw", (), (("stack", self.host.software_us, None),), [head])
            head = self._S("pcie", self.pcie, (("bus", self.host.pcie_us(req.bytes), None),), [head])
        st = self._S("stack", (), (("stack", c.stack_us, None),), [head])
        last = self._S("ftl", self.ctrl, (("ftl", c.ftl_us(req.bytes), None),), [st])
        last = self._map_access(self._map_pages(lpns), req.op == "program", last)
        ends = []
        if req.op == "program":
            enc = alg is not None
            ppns, reloc, erases = self.ftl.write(lpns, encrypted=enc)
            self._gc_steps(reloc, erases, last)
            for ppn, nb in zip(ppns, sizes):
                g = int(self.ftl.plane_of(ppn))
                d = c.die_index(g)
                ch = self.ch[g % c.channels]
                pl = self.plane[g]
                prev = last
                if P == "NCP":
                    prev = self._S("dram.in", self.dram, (("dram", c.dram_access_us, None),), [prev])
                    if alg:
                        prev = self._S("ncp.encrypt", self.ncp_bce, (("crypto", bce_us(nb, c.ncp_lanes), None),), [prev])
                        prev = self._S("dram.out", self.dram, (("dram", c.dram_access_us, None),), [prev])
                elif P == "CPU":
                    prev = self._S("dram.in", self.dram, (("dram", c.dram_access_us, None),), [prev])
                if buffered:
                    x = self._S("xfer", ch, (("bus", c.xfer_us(nb), None),), [prev])
                else:
                    x = self._S("xfer", (ch, pl), (("bus", c.xfer_us(nb), None),), [prev], hold=pl)
                prev = x
                if P == "FV" and alg:
                    prev = self._S("die.encrypt", self.die_bce[d], (("crypto", bce_us(nb, c.die_lanes), None),), [prev])
                if buffered:
                    p = self._S("prog", pl, (("nand", c.tPCBSY_us + c.tPROG_us, None),), [prev])
                else:
                    p = self._S("prog", (), (("nand", c.tPCBSY_us + c.tPROG_us, None),), [prev])
                    self.tl.hold_until(x, p)
                ends.append(p)
        else:
            ppns = self.ftl.lookup(lpns)
            for ppn, nb in zip(ppns, sizes):
                if ppn < 0:
                    continue      # unwritten LBA reads back zeros without touching NAND
                g = int(self.ftl.plane_of(ppn))
                d = c.die_index(g)
                ch = self.ch[g % c.channels]
                pl = self.plane[g]
                if buffered:
                    r = self._S("sense", pl, (("nand", c.tR_us + c.tRCBSY_us, None),), [last])
                else:
                    r = self._S("sense", pl, (("nand", c.tR_us + c.tRCBSY_us, None),), [last], hold=pl)
                prev = r
                if P == "FV" and alg:
                    prev = self._S("die.decrypt", self.die_bce[d], (("crypto", bce_us(nb, c.die_lanes), None),), [prev])
                x = self._S("xfer", ch, (("bus", c.xfer_us(nb), None),), [prev])
                if not buffered:
                    self.tl.hold_until(r, x)
                prev = x
                if P in ("NCP", "CPU"):
                    prev = self._S("dram.in", self.dram, (("dram", c.dram_access_us, None),), [prev])
                if P == "NCP" and alg:
                    prev = self._S("ncp.decrypt", self.ncp_bce, (("crypto", bce_us(nb, c.ncp_lanes), None),), [prev])
                    prev = self._S("dram.out", self.dram, (("dram", c.dram_access_us, None),), [prev])
                ends.append(prev)
        final = self._S("complete", (), (), ends or [last])
        if P == "CPU" and req.op == "read":
            x = self._S("pcie", self.pcie, (("bus", self.host.pcie_us(req.bytes), None),), [final])
            x = self._S("host.sw", (), (("stack", self.host.software_us, None),), [x])
            if alg:
                x = self._S("host.decrypt", self.hostcpu, (("crypto", self.host.cipher_us(alg, req.bytes), None),), [x])
            final = x
        return final

    def submit_io(self, req: IoRequest) -> LatencyBreakdown:
        return self.run_scenario_batch([req])[0]

    def run_scenario_batch(self, requests) -> list:
        """Run requests on one timeline.  Requests without an arrival time arrive
        together at the current clock."""
        base = self.clock
        finals = []
        try:
            for req in requests:
                self._rid += 1
                t0 = base if req.arrival_us is None else max(base, req.arrival_us)
                self._arrival = t0
                finals.append((self._build_io(req, t0), t0))
        except Exception:
            self._steps = []      # drop the half-built batch
            raise
        self._run(base)
        return [self._breakdown(f, t0) for f, t0 in finals]

    # -- preconditioning ----------------------------------------------------
    def make_fresh_state(self, fill_fraction: float = 0.5):
        """Sequentially written drive, mapping cache warm."""
        if not 0 < fill_fraction < 1:
            raise ConfigurationError("fill_fraction must be in (0, 1)")
        n = int(self.ftl.l2p.size * fill_fraction)
        mapped = int((self.ftl.l2p[:n] >= 0).sum())
        if mapped < n:
            self.ftl.write(np.arange(n, dtype=np.int64), encrypted=self.self_encrypt)
        self.map_cache = None
        self.steady = False
        self.filled = n
        return n

    def make_steady_state(self, fill_fraction: float = 0.9, overwrite_ops: int | None = None,
                          seed: int | None = None):
        """Fill, then overwrite random pages until GC and WL are running."""
        n = self.make_fresh_state(fill_fraction)
        c = self.config
        rng = np.random.default_rng(self.seed if seed is None else seed)
        ops = self.ftl.l2p.size // 2 if overwrite_ops is None else int(overwrite_ops)
        lpns = rng.integers(0, n, ops, dtype=np.int64)
        if ops:
            self.ftl.write(lpns, encrypted=self.self_encrypt)
        self.ftl.idle_gc(c.gc_reserve_blocks)
        for g in range(c.n_planes):
            self.ftl.wear_level_step(g)
        # the mapping cache holds the most recently touched map pages, all dirty
        self.map_cache = OrderedDict()
        if ops:
            mps = (lpns // c.map_entries_per_page)[::-1]
            uniq, idx = np.unique(mps, return_index=True)
            recent = uniq[np.argsort(idx)][:c.map_cache_pages]
            for mp in recent[::-1]:
                self.map_cache[int(mp)] = True
        self.steady = True
        return ops

    # -- secure boot ----------------------------------------------------------
    def _boot_slots(self):
        return self._die_slots[0]

    def secure_boot(self, image_bytes: int, scheme, placement):
        """Load a firmware image from the boot die, hash it, verify the signature."""
        if image_bytes <= 0:
            raise InvalidRequestError("boot image must be non-empty")
        sid = scheme_id(scheme)
        P = placement_id(placement)
        c = self.config
        self._rid += 1
        t0 = self._arrival = self.clock
        sizes = self._page_sizes(image_bytes)
        slots = self._boot_slots()
        ch = self.ch[slots[0] % c.channels]
        buffered = bool(c.double_buffering)
        e = c.map_entries_per_page
        per_chunk = max(1, c.boot_chunk_bytes // c.page_bytes)
        variant = hash_variant(sid)
        prev_t = None
        sensed, loaded = [], []
        for i, nb in enumerate(sizes):
            dep = prev_t
            if i % e == 0:
                # firmware-region map pages sit outside the user LBA space
                dep = self._map_access([-(1 + i // e)], False, dep)
            t = self._S("boot.ftl", self.ctrl, (("ftl", c.ftl_us(c.page_bytes), None),), [dep])
            g = slots[i % len(slots)]
            if buffered:
                r = self._S("boot.sense", self.plane[g], (("nand", c.tR_us + c.tRCBSY_us, None),), [t])
            else:
                r = self._S("boot.sense", self.plane[g], (("nand", c.tR_us + c.tRCBSY_us, None),), [t], hold=self.plane[g])
            x = self._S("boot.xfer", ch, (("bus", c.xfer_us(nb, c.boot_bus_mts), None),), [r])
            if not buffered:
                self.tl.hold_until(r, x)
            if P != "FV":
                x = self._S("boot.dram", self.dram, (("dram", c.dram_access_us, None),), [x])
            prev_t = t
            sensed.append(r)
            loaded.append(x)
        chunks = [sizes[k:k + per_chunk] for k in range(0, len(sizes), per_chunk)]
        digest = DIGEST_BYTES[variant]
        combine_c = message_hash_cycles(sid, len(chunks) * digest, self.cal)
        verify_c = core_cycles(sid, "verify", self.cal)
        if P == "FV":
            hashes = []
            for k, ch_sizes in enumerate(chunks):
                deps = sensed[k * per_chunk:k * per_chunk + len(ch_sizes)]
                hashes.append(self._S("boot.hash", self.die_hash[0],
                                      (("crypto", self._us(message_hash_cycles(sid, sum(ch_sizes), self.cal)), None),), deps))
            comb = self._S("boot.combine", self.die_hash[0], (("crypto", self._us(combine_c), None),), hashes)
            v = self._S("boot.verify", self.die_ace[0], (("crypto", self._us(verify_c), None),), [comb])
            final = self._S("boot.done", (), (), [v] + loaded)
        elif P == "NCP":
            staged = self._S("boot.staged", (), (), loaded)
            hashes = []
            for ch_sizes in chunks:
                rd = self._S("boot.dram.read", self.dram, (("dram", c.dram_access_us * len(ch_sizes), None),), [staged])
                hashes.append(self._S("boot.hash", self.ncp_hash,
                                      (("crypto", self._us(message_hash_cycles(sid, sum(ch_sizes), self.cal)), None),), [rd]))
            comb = self._S("boot.combine", self.ncp_hash, (("crypto", self._us(combine_c), None),), hashes)
            final = self._S("boot.verify", self.ncp_ace, (("crypto", self._us(verify_c), None),), [comb])
        else:
            staged = self._S("boot.staged", (), (), loaded)
            x = self._S("pcie", self.pcie, (("bus", self.host.pcie_us(image_bytes), None),), [staged])
            x = self._S("host.sw", (), (("stack", self.host.software_us, None),), [x])
            x = self._S("host.hash", self.hostcpu, (("crypto", self.host.hash_us(variant, image_bytes), None),), [x])
            final = self._S("host.verify", self.hostcpu, (("crypto", self.host.verify_us(sid), None),), [x])
        self._run(t0)
        return self._breakdown(final, t0)

    # -- tamper-proof logging -------------------------------------------------
    def tamper_log(self, entry_bytes: int, scheme, placement, lba: int = 0, record_lba: int | None = None):
        """Read a log entry and sign its digest, then program the signed record.

        Signed records are appended to a separate log region (by default half
        the logical space away from the entry)."""
        if not 256 <= entry_bytes <= 10240:
            raise InvalidRequestError("log entries are 256 B to 10 KB")
        sid = scheme_id(scheme)
        P = placement_id(placement)
        c = self.config
        self._rid += 1
        t0 = self._arrival = self.clock
        die = int(lba) % c.n_dies
        slots = self._die_slots[die]
        ch = self.ch[slots[0] % c.channels]
        n_e = -(-entry_bytes // c.page_bytes)
        rec_bytes = SIGNATURE_BYTES[sid] + RECORD_HEADER
        rec_sizes = self._page_sizes(rec_bytes)
        e = c.map_entries_per_page
        head = None
        if P == "CPU":
            head = self._S("host.sw", (), (("stack", self.host.software_us, None),))
        st = self._S("stack", (), (("stack", c.stack_us, None),), [head])
        last = self._S("ftl", self.ctrl, (("ftl", c.ftl_us(entry_bytes), None),), [st])
        last = self._map_access([lba // e], False, last)
        reads = []
        for j, nb in enumerate(self._page_sizes(entry_bytes)):
            g = slots[j % len(slots)]
            r = self._S("log.sense", self.plane[g], (("nand", c.tR_us + c.tRCBSY_us, None),), [last])
            if P != "FV":
                r = self._S("log.xfer", ch, (("bus", c.xfer_us(nb), None),), [r])
                r = self._S("log.dram", self.dram, (("dram", c.dram_access_us, None),), [r])
            reads.append(r)
        hash_c = message_hash_cycles(sid, entry_bytes, self.cal)
        sign_c = core_cycles(sid, "sign", self.cal)
        if P == "FV":
            h = self._S("log.hash", self.die_hash[die], (("crypto", self._us(hash_c), None),), reads)
            sg = self._S("log.sign", self.die_ace[die], (("crypto", self._us(sign_c), None),), [h])
        elif P == "NCP":
            h = self._S("log.hash", self.ncp_hash, (("crypto", self._us(hash_c), None),), reads)
            sg = self._S("log.sign", self.ncp_ace, (("crypto", self._us(sign_c), None),), [h])
            sg = self._S("log.dram", self.dram, (("dram", c.dram_access_us * len(rec_sizes), None),), [sg])
        else:
            x = self._S("pcie", self.pcie, (("bus", self.host.pcie_us(entry_bytes), None),), reads)
            x = self._S("host.sign", self.hostcpu, (("crypto", self.host.sign_us(sid, entry_bytes), None),), [x])
            x = self._S("pcie", self.pcie, (("bus", self.host.pcie_us(rec_bytes), None),), [x])
            sg = self._S("log.dram", self.dram, (("dram", c.dram_access_us * len(rec_sizes), None),), [x])
        rec_lba = (lba + self.ftl.l2p.size // 2) % self.ftl.l2p.size if record_lba is None else record_lba
        last = self._S("ftl", self.ctrl, (("ftl", c.ftl_us(rec_bytes), None),), [sg])
        last = self._map_access([rec_lba // e], True, last)
        ends = []
        for j, nb in enumerate(rec_sizes):
            g = slots[j % len(slots)]
            prev = last
            if P != "FV":
                prev = self._S("log.xfer", ch, (("bus", c.xfer_us(nb), None),), [prev])
            ends.append(self._S("log.prog", self.plane[g], (("nand", c.tPCBSY_us + c.tPROG_us, None),), [prev]))
        final = self._S("log.done", (), (), ends)
        self._run(t0)
        return self._breakdown(final, t0)

    # -- audits --------------------------------------------------------------
    def audit(self):
        self.ftl.audit()
        if self.self_encrypt and not self.ftl.all_encrypted():
            raise AssertionError("plaintext page resident in NAND with self-encryption on")
        return True

    def trace_rows(self):
        """(request, start_us, end_us, resource, action, category) tuples in event order."""
        return sorted(self.tl.trace, key=lambda r: (r[1], r[0]))

    def trace_csv(self) -> str:
        """One row per event, then one per request breakdown.

        Columns: kind, request, start_us, end_us, resource, action, category,
        then the six component columns and total_us (request rows only).
        """
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRACE_FIELDS)
        blank = [""] * (len(CATEGORIES) + 1)
        for rid, t0, t1, res, action, cat in self.trace_rows():
            w.writerow(["event", rid, f"{t0:.4f}", f"{t1:.4f}", res, action, cat] + blank)
        for rid, label, b in self.results:
            w.writerow(["request", rid, "", "", "", label, ""]
                       + [f"{v:.4f}" for v in b.components().values()] + [f"{b.total_us:.4f}"])
        return buf.getvalue()
