"""Discrete-event SSD model with FTL, GC/WL and three crypto placements."""

from .config import SsdConfig
from .events import CATEGORIES, Resource, Step, Timeline, critical_path
from .ftl import FtlState
from .host import HostModel
from .ssd import (DIGEST_BYTES, PLACEMENTS, SIGNATURE_BYTES, IoRequest, LatencyBreakdown,
                  Simulator, placement_id)

__all__ = [
    "SsdConfig", "FtlState", "HostModel", "Simulator", "IoRequest", "LatencyBreakdown",
    "Resource", "Step", "Timeline", "critical_path", "CATEGORIES", "PLACEMENTS",
    "SIGNATURE_BYTES", "DIGEST_BYTES", "placement_id",
]
