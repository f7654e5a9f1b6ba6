"""In-NAND reliability: QC-LDPC encode, GDBF decode, bit-error channel."""

from .channel import ChannelModel, inject_errors
from .ldpc import (DecodeResult, QcLdpcCode, decode_page, gdbf_decode, ldpc_encode, make_code,
                   page_code, toy_code)

__all__ = ["ChannelModel", "inject_errors", "DecodeResult", "QcLdpcCode", "decode_page",
           "gdbf_decode", "ldpc_encode", "make_code", "page_code", "toy_code"]
