"""SSD geometry and timing knobs.

Geometry and NAND timing default to the simulated-SSD table; the rest are
modeling knobs with documented defaults.  Any field can be overridden from
the ``[ssd]``, ``[ftl]``, ``[fv]``, ``[ncp]`` or ``[boot]`` sections of a
calibration file (keys are the field names).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from ..calibration import Calibration
from ..errors import ConfigurationError

SECTIONS = ("ssd", "ftl", "fv", "ncp", "boot")


@dataclass(frozen=True)
class SsdConfig:
    # geometry
    channels: int = 4
    packages: int = 4
    dies: int = 2
    planes: int = 4
    blocks: int = 682
    pages_per_block: int = 128
    page_bytes: int = 4096
    # NV-DDR3 bus
    bus_mts: float = 1600
    bus_bits: int = 8
    # NAND timing, microseconds
    tR_us: float = 45
    tPROG_us: float = 400
    tERASE_us: float = 2000
    tPCBSY_us: float = 3
    tRCBSY_us: float = 3
    stack_us: float = 5
    engine_clock_hz: float = 200e6
    # in-die engines (per die)
    bce_lanes_per_engine: int = 16
    engines_per_die: int = 2
    hash_alus: int = 16
    aces: int = 4
    # near-core placement
    ncp_engines: int = 2
    dram_access_us: float = 0.75
    # page/cache register double buffering
    double_buffering: int = 1
    # FTL
    overprovision: float = 0.07
    gc_threshold: float = 0.05
    gc_reserve_blocks: int = 2
    wl_threshold: int = 64
    map_entries_per_page: int = 1024
    map_cache_pages: int = 256
    map_miss_us: float = 90
    ftl_base_us: float = 4.6
    ftl_exponent: float = 0.86
    reconfig_us: float = 10
    # boot interface
    boot_bus_mts: float = 160
    boot_chunk_bytes: int = 65536

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name in ("double_buffering",):
                continue
            if f.name in ("gc_reserve_blocks",) and v >= 0:
                continue
            if not v > 0:
                raise ConfigurationError(f"SsdConfig.{f.name} must be positive, got {v!r}")
        if not 0 < self.overprovision < 1 or not 0 < self.gc_threshold < 1:
            raise ConfigurationError("overprovision and gc_threshold must be fractions")

    # derived geometry
    @property
    def n_dies(self) -> int:
        return self.channels * self.packages * self.dies

    @property
    def n_planes(self) -> int:
        return self.n_dies * self.planes

    @property
    def n_blocks(self) -> int:
        return self.n_planes * self.blocks

    @property
    def n_pages(self) -> int:
        return self.n_blocks * self.pages_per_block

    @property
    def logical_pages(self) -> int:
        return int(self.n_pages * (1 - self.overprovision))

    @property
    def gc_threshold_blocks(self) -> int:
        return max(1, math.ceil(self.gc_threshold * self.blocks))

    @property
    def die_lanes(self) -> int:
        return self.bce_lanes_per_engine * self.engines_per_die

    @property
    def ncp_lanes(self) -> int:
        return self.bce_lanes_per_engine * self.ncp_engines

    def plane_location(self, g: int):
        """Stripe slot -> (channel, package, die, plane).  Channel first, then plane."""
        ch = g % self.channels
        g //= self.channels
        pl = g % self.planes
        g //= self.planes
        pkg = g % self.packages
        die = g // self.packages
        return ch, pkg, die, pl

    def die_index(self, g: int) -> int:
        ch, pkg, die, _ = self.plane_location(g)
        return (ch * self.packages + pkg) * self.dies + die

    # timing helpers
    def xfer_us(self, n_bytes, mts=None) -> float:
        return n_bytes / ((mts or self.bus_mts) * self.bus_bits / 8)

    def ftl_us(self, n_bytes) -> float:
        return self.ftl_base_us * (n_bytes / 1024) ** self.ftl_exponent

    def cycles_us(self, cycles) -> float:
        return cycles / self.engine_clock_hz * 1e6

    @classmethod
    def from_calibration(cls, cal: Calibration | None = None, **overrides) -> "SsdConfig":
        cal = cal or Calibration.default()
        names = {f.name: f.type for f in fields(cls)}
        kw = {}
        for sec in SECTIONS:
            for k, v in cal.tables.get(sec, {}).items():
                if k not in names:
                    raise ConfigurationError(f"unknown simulator key [{sec}] {k}")
                kw[k] = v
        kw.update(overrides)
        return cls(**kw)

    def with_(self, **kw) -> "SsdConfig":
        return replace(self, **kw)
