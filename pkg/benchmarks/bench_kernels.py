"""Compiled vs pure-Python hot kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Runs each kernel on identical inputs through both backends, checks the
outputs agree and prints wall time per call and the speedup.
"""

import argparse
import sys
import time

import numpy as np

from flashvault import _fallback
from flashvault.reliability import ChannelModel, inject_errors, ldpc_encode, page_code
from flashvault.sim import SsdConfig, ftl as ftl_mod
from flashvault.sim.ftl import FtlState

try:
    from flashvault import _kernels
except ImportError:
    _kernels = None


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def case_keccak(mod):
    state = [(0x9E3779B97F4A7C15 * (i + 1)) & ((1 << 64) - 1) for i in range(25)]

    def run():
        s = state
        for _ in range(200):
            s = mod.keccak_f1600(s)
        return list(s)
    return run, "keccak_f1600 x200"


def case_gdbf(mod):
    code = page_code()
    rng = np.random.default_rng(1)
    data = rng.integers(0, 256, code.k // 8, dtype=np.uint8).tobytes()
    cw = ldpc_encode(data, code)
    y = inject_errors(cw, ChannelModel(1e-3, seed=3))

    def run():
        x, it, ok = mod.gdbf_decode(y, code.chk_ptr, code.chk_idx, code.var_ptr, code.var_idx, code.max_iter)
        return np.asarray(x).tobytes(), it, ok
    return run, f"gdbf_decode n={code.n}"


def case_ftl(mod):
    cfg = SsdConfig(channels=2, packages=1, dies=1, planes=2, blocks=64, pages_per_block=64)

    def run():
        orig = ftl_mod.ftl_write
        ftl_mod.ftl_write = mod.ftl_write
        try:
            f = FtlState(cfg)
            n = f.l2p.size
            f.write(np.arange(int(n * 0.9)))
            f.write(np.random.default_rng(5).integers(0, int(n * 0.9), 20000))
        finally:
            ftl_mod.ftl_write = orig
        return f.l2p.tobytes(), int(f.gc_erase.sum())
    return run, "ftl_write fill+20k overwrites"


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; only the fallback is available")
        return 1
    print(f"{'kernel':<32}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}")
    for case in (case_keccak, case_gdbf, case_ftl):
        run_py, name = case(_fallback)
        run_cy, _ = case(_kernels)
        t_py, out_py = _time(run_py, args.repeat)
        t_cy, out_cy = _time(run_cy, args.repeat)
        same = out_py == out_cy
        print(f"{name:<32}{t_py:12.4f}{t_cy:12.4f}{t_py / t_cy:10.1f}x{'' if same else '  MISMATCH'}")
        if not same:
            return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
