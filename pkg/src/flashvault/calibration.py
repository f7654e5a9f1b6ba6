"""Cycle and latency calibration tables.

Everything the timing models need but the hardware description does not
pin down lives in one INI-style file.  Values are plain numbers, one per
``key = value`` line.  Sections:

``[cipher.<ID>]``
    ``cycles_per_round``, ``overhead`` (integers, per block) for each of the
    seven block ciphers.
``[bce]``
    ``pipeline_fill``: cycles added once per CTR job.
``[hash]``
    ``sha256_block``, ``sha512_block``: hash-ALU cycles per compression;
    ``keccak_permutation``: cycles per Keccak-f1600 call.
``[pke]``
    ``modmul_cycles_per_limb2``: asymmetric-ALU cycles per (limb x limb)
    product inside one modular multiplication; ``ecc_point_ops_per_bit``.
``[pqc.<SCHEME>.<op>]``
    primitive counts (``keccak``, ``ntt``, ``fft``, ``modmul``,
    ``compare``) for the sign/verify core of each post-quantum scheme.
``[pqc_unit]``
    cycles per primitive (``ntt``, ``fft``, ``modmul``, ``compare``).
``[host.<ALG>]``
    host-CPU calibration: ``mb_per_s`` throughput and ``fixed_us`` per call;
    for signature schemes also ``sign_us``/``verify_us``.
``[host]``
    ``pcie_mb_per_s``, ``software_us``: host transfer and stack overhead.
``[ssd]`` / ``[ncp]`` / ``[fv]`` / ``[ftl]`` / ``[boot]``
    simulator knobs; see :mod:`flashvault.sim.config`.

Unknown sections are kept, so a file may carry extra tables.
"""

from __future__ import annotations

import configparser
from importlib import resources
from pathlib import Path

from .errors import ConfigurationError


def _parse(value: str):
    try:
        return int(value)
    except ValueError:
        return float(value)


_DEFAULT = None       # parsed shipped tables; handed out as copies


class Calibration:
    def __init__(self, tables: dict[str, dict[str, float]]):
        self.tables = tables

    @classmethod
    def default(cls) -> "Calibration":
        global _DEFAULT
        if _DEFAULT is None:
            text = resources.files("flashvault").joinpath("data", "calibration.ini").read_text()
            _DEFAULT = cls.from_text(text)
        return _DEFAULT.copy()

    @classmethod
    def from_text(cls, text: str) -> "Calibration":
        cp = configparser.ConfigParser()
        cp.optionxform = str
        cp.read_string(text)
        return cls({s: {k: _parse(v) for k, v in cp[s].items()} for s in cp.sections()})

    @classmethod
    def load(cls, path=None, base: "Calibration | None" = None) -> "Calibration":
        """Load ``path`` layered over ``base`` (the shipped defaults if omitted)."""
        cal = base.copy() if base is not None else cls.default()
        if path is not None:
            try:
                text = Path(path).read_text()
            except OSError as exc:
                raise ConfigurationError(f"cannot read calibration file {path}: {exc}") from exc
            cal.update(cls.from_text(text))
        return cal

    def copy(self) -> "Calibration":
        return Calibration({s: dict(t) for s, t in self.tables.items()})

    def update(self, other: "Calibration"):
        for s, t in other.tables.items():
            self.tables.setdefault(s, {}).update(t)

    def set(self, section: str, key: str, value):
        self.tables.setdefault(section, {})[key] = value

    def get(self, section: str, key: str, default=None):
        try:
            return self.tables[section][key]
        except KeyError:
            if default is not None:
                return default
            raise ConfigurationError(f"calibration entry [{section}] {key} missing") from None

    def section(self, section: str) -> dict:
        if section not in self.tables:
            raise ConfigurationError(f"calibration section [{section}] missing")
        return self.tables[section]

    def to_text(self) -> str:
        lines = []
        for s, t in self.tables.items():
            lines.append(f"[{s}]")
            lines.extend(f"{k} = {v}" for k, v in t.items())
            lines.append("")
        return "\n".join(lines)
