"""Hot-kernel dispatch: compiled extension when built, pure Python otherwise.

Set ``FLASHVAULT_PURE=1`` to force the fallback (the benchmark does this
to compare the two).
"""

import os

BACKEND = "python"

if os.environ.get("FLASHVAULT_PURE", "") not in ("1", "true", "yes"):
    try:
        from ._kernels import ftl_write, gdbf_decode, keccak_f1600  # noqa: F401
        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._fallback import ftl_write, gdbf_decode, keccak_f1600  # noqa: F401
