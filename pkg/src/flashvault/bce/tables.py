"""Vendored S-box tables (hex text, 256 bytes each)."""

from functools import lru_cache
from importlib import resources

from ..datapath import SBoxTable


@lru_cache(maxsize=None)
def standard_table(name: str) -> SBoxTable:
    text = resources.files("flashvault").joinpath("data", f"{name}.hex").read_text()
    return SBoxTable.from_hex(text)
