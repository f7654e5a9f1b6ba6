"""Page-mapped FTL on numpy arrays: allocation, greedy GC, static wear leveling.

Physical page numbers are ``(plane * blocks + block) * pages_per_block + page``
with ``plane`` the stripe slot (see :meth:`SsdConfig.plane_location`).  The
hot write loop lives in :mod:`flashvault.kernels`.
"""

from __future__ import annotations

import numpy as np

from .. import _fallback
from ..errors import ConfigurationError, OutOfSpaceError
from ..kernels import ftl_write
from .config import SsdConfig

FREE, OPEN, FULL = 0, 1, 2


class FtlState:
    def __init__(self, config: SsdConfig):
        c = config
        self.config = c
        self.B = c.blocks
        self.ppb = c.pages_per_block
        self.n_planes = c.n_planes
        self.thr = c.gc_threshold_blocks
        self.l2p = np.full(c.logical_pages, -1, dtype=np.int32)
        self.p2l = np.full(c.n_pages, -1, dtype=np.int32)
        self.enc = np.zeros(c.n_pages, dtype=np.uint8)
        self.valid = np.zeros(c.n_blocks, dtype=np.int32)
        self.erase = np.zeros(c.n_blocks, dtype=np.int32)
        self.bstate = np.zeros(c.n_blocks, dtype=np.int8)
        self.open_blk = np.full(self.n_planes, -1, dtype=np.int32)
        self.open_ptr = np.zeros(self.n_planes, dtype=np.int32)
        self.free_cnt = np.full(self.n_planes, self.B, dtype=np.int32)
        self.cursor = np.zeros(1, dtype=np.int64)
        self.gc_reloc = np.zeros(self.n_planes, dtype=np.int64)
        self.gc_erase = np.zeros(self.n_planes, dtype=np.int64)
        self.wl_moves = 0

    # -- addressing -------------------------------------------------------
    def plane_of(self, ppn):
        return ppn // (self.B * self.ppb)

    def lookup(self, lpns):
        lpns = np.asarray(lpns, dtype=np.int64)
        if lpns.size and (lpns.min() < 0 or lpns.max() >= self.l2p.size):
            raise ConfigurationError(f"LBA out of range [0, {self.l2p.size})")
        return self.l2p[lpns].astype(np.int64)

    # -- writes -----------------------------------------------------------
    def write(self, lpns, encrypted: bool = True) -> tuple[np.ndarray, np.ndarray]:
        """Map ``lpns`` to fresh pages.  Returns (ppns, per-plane GC relocations, erases)."""
        lpns = np.ascontiguousarray(lpns, dtype=np.int64)
        if lpns.size and (lpns.min() < 0 or lpns.max() >= self.l2p.size):
            raise ConfigurationError(f"LBA out of range [0, {self.l2p.size})")
        r0 = self.gc_reloc.copy()
        e0 = self.gc_erase.copy()
        done = ftl_write(lpns, self.l2p, self.p2l, self.valid, self.erase, self.bstate,
                         self.open_blk, self.open_ptr, self.free_cnt, self.enc, self.cursor,
                         self.gc_reloc, self.gc_erase, self.B, self.ppb, self.thr,
                         1 if encrypted else 0)
        if done < lpns.size:
            raise OutOfSpaceError(f"no free block after GC ({done}/{lpns.size} pages written)")
        return self.l2p[lpns].astype(np.int64), self.gc_reloc - r0, self.gc_erase - e0

    def _arrays(self):
        return (self.erase, self.bstate, self.open_blk, self.open_ptr, self.free_cnt)

    def gc_step(self, plane: int) -> tuple[int, int]:
        """Collect one victim on ``plane`` now.  Returns (relocated pages, erases)."""
        r0, e0 = int(self.gc_reloc[plane]), int(self.gc_erase[plane])
        rc = _fallback._gc_plane(plane, self.B, self.ppb, int(self.free_cnt[plane]) + 1,
                                 self.l2p, self.p2l, self.valid, self.erase, self.bstate,
                                 self.open_blk, self.open_ptr, self.free_cnt, self.enc,
                                 self.gc_reloc, self.gc_erase, 1)
        if rc < 0:
            raise OutOfSpaceError(f"plane {plane}: no space to relocate during GC")
        return int(self.gc_reloc[plane]) - r0, int(self.gc_erase[plane]) - e0

    def idle_gc(self, reserve: int) -> int:
        """Background GC until every plane has ``threshold + reserve`` free blocks."""
        target = self.thr + reserve
        moved = 0
        for p in np.flatnonzero(self.free_cnt < target):
            while self.free_cnt[p] < target:
                r, e = self.gc_step(int(p))
                moved += r
                if e == 0:
                    break
        return moved

    def erase_spread(self, plane: int) -> int:
        sl = slice(plane * self.B, (plane + 1) * self.B)
        return int(self.erase[sl].max() - self.erase[sl].min())

    def wear_level_step(self, plane: int) -> int:
        """Move the coldest full block's data when the erase-count spread is too wide."""
        if self.erase_spread(plane) <= self.config.wl_threshold:
            return 0
        base = plane * self.B
        sl = slice(base, base + self.B)
        full = np.flatnonzero(self.bstate[sl] == FULL)
        if full.size == 0:
            return 0
        cold = base + int(full[np.argmin(self.erase[sl][full])])
        moved = 0
        for ppn in range(cold * self.ppb, (cold + 1) * self.ppb):
            lpn = int(self.p2l[ppn])
            if lpn < 0:
                continue
            dst = _fallback._alloc(plane, self.B, self.ppb, *self._arrays())
            if dst < 0:
                raise OutOfSpaceError(f"plane {plane}: no space for wear leveling")
            self.p2l[dst] = lpn
            self.l2p[lpn] = dst
            self.enc[dst] = self.enc[ppn]
            self.valid[dst // self.ppb] += 1
            self.p2l[ppn] = -1
            moved += 1
        self.valid[cold] = 0
        self.erase[cold] += 1
        self.bstate[cold] = FREE
        self.free_cnt[plane] += 1
        self.wl_moves += moved
        return moved

    # -- audits -----------------------------------------------------------
    def audit(self) -> None:
        """Injectivity of the map and page conservation; raises AssertionError."""
        mapped = np.flatnonzero(self.l2p >= 0)
        ppns = self.l2p[mapped]
        if np.unique(ppns).size != ppns.size:
            raise AssertionError("two logical pages share a physical page")
        if not np.array_equal(self.p2l[ppns], mapped.astype(np.int32)):
            raise AssertionError("p2l does not invert l2p")
        if int((self.p2l >= 0).sum()) != mapped.size:
            raise AssertionError("stale p2l entries")
        per_block = np.bincount(ppns // self.ppb, minlength=self.valid.size)
        if not np.array_equal(per_block, self.valid):
            raise AssertionError("valid-page counters out of sync")
        if (self.free_cnt < 0).any():
            raise AssertionError("negative free pool")
        free_blocks = np.bincount(np.flatnonzero(self.bstate == FREE) // self.B,
                                  minlength=self.n_planes)
        if not np.array_equal(free_blocks, self.free_cnt):
            raise AssertionError("free-block counters out of sync")
        if int(self.valid[self.bstate == FREE].sum()) != 0:
            raise AssertionError("valid data in a free block")

    def all_encrypted(self) -> bool:
        live = self.l2p[self.l2p >= 0]
        return bool(self.enc[live].all()) if live.size else True
