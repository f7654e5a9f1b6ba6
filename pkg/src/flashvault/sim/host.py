"""Host-CPU placement: latencies looked up from calibration tables.

Host crypto throughput is measured data, not something to derive, so it
lives in ``[host.<CIPHER>]``, ``[host.hash.<VARIANT>]`` and
``[host.sign.<SCHEME>]`` sections.  Throughputs are MB/s (= bytes/us).
"""

from __future__ import annotations

from ..ace.schemes import PQC, SCHEMES, scheme_id
from ..bce.engine import canonical_id
from ..calibration import Calibration


def hash_variant(scheme) -> str:
    sid = scheme_id(scheme)
    return "SHAKE256" if sid in PQC else SCHEMES[sid].digest_variant


class HostModel:
    def __init__(self, calibration: Calibration):
        self.cal = calibration

    @property
    def software_us(self) -> float:
        return float(self.cal.get("host", "software_us"))

    def pcie_us(self, n_bytes) -> float:
        return n_bytes / float(self.cal.get("host", "pcie_mb_per_s"))

    def cipher_us(self, cipher, n_bytes) -> float:
        sec = f"host.{canonical_id(cipher)}"
        return float(self.cal.get(sec, "fixed_us")) + n_bytes / float(self.cal.get(sec, "mb_per_s"))

    def hash_us(self, variant, n_bytes) -> float:
        sec = f"host.hash.{variant}"
        return float(self.cal.get(sec, "fixed_us")) + n_bytes / float(self.cal.get(sec, "mb_per_s"))

    def sign_us(self, scheme, msg_bytes) -> float:
        sid = scheme_id(scheme)
        return self.hash_us(hash_variant(sid), msg_bytes) + float(self.cal.get(f"host.sign.{sid}", "sign_us"))

    def verify_us(self, scheme) -> float:
        return float(self.cal.get(f"host.sign.{scheme_id(scheme)}", "verify_us"))
