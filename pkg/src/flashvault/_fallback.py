"""Pure-Python versions of the hot kernels (used when the extension is absent)."""

from __future__ import annotations

import numpy as np

M64 = (1 << 64) - 1

RC = (
    0x0000000000000001, 0x0000000000008082, 0x800000000000808A, 0x8000000080008000,
    0x000000000000808B, 0x0000000080000001, 0x8000000080008081, 0x8000000000008009,
    0x000000000000008A, 0x0000000000000088, 0x0000000080008009, 0x000000008000000A,
    0x000000008000808B, 0x800000000000008B, 0x8000000000008089, 0x8000000000008003,
    0x8000000000008002, 0x8000000000000080, 0x000000000000800A, 0x800000008000000A,
    0x8000000080008081, 0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
)
# rotation offsets, indexed x + 5y
ROT = (0, 1, 62, 28, 27, 36, 44, 6, 55, 20, 3, 10, 43, 25, 39, 41, 45, 15, 21, 8, 18, 2, 61, 56, 14)
# pi: lane at (x, y) moves to (y, 2x + 3y)
PI_DST = tuple(y + 5 * ((2 * x + 3 * y) % 5) for y in range(5) for x in range(5))


def keccak_f1600(state):
    """24-round Keccak-f[1600] on 25 lanes (index x + 5y); returns a new list."""
    a = list(state)
    for rc in RC:
        c = [a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20] for x in range(5)]
        d = [c[(x - 1) % 5] ^ (((c[(x + 1) % 5] << 1) | (c[(x + 1) % 5] >> 63)) & M64) for x in range(5)]
        b = [0] * 25
        for i in range(25):
            v = a[i] ^ d[i % 5]
            r = ROT[i]
            if r:
                v = ((v << r) | (v >> (64 - r))) & M64
            b[PI_DST[i]] = v
        for y in range(0, 25, 5):
            b0, b1, b2, b3, b4 = b[y:y + 5]
            a[y] = b0 ^ (~b1 & b2)
            a[y + 1] = b1 ^ (~b2 & b3)
            a[y + 2] = b2 ^ (~b3 & b4)
            a[y + 3] = b3 ^ (~b4 & b0)
            a[y + 4] = b4 ^ (~b0 & b1)
        a[0] ^= rc
    return a


def gdbf_decode(y, chk_ptr, chk_idx, var_ptr, var_idx, max_iter):
    """Single-flip GDBF with escape; returns (bits, iterations, success).

    Scores are kept incrementally: a flip only touches the checks on that
    bit and the bits on those checks.
    """
    x = y.copy()
    synd = np.bitwise_xor.reduceat(x[chk_idx], chk_ptr[:-1]).astype(np.int64)
    n_unsat = int(synd.sum())
    if n_unsat == 0:
        return x, 0, True
    unsat = np.add.reduceat(synd[var_idx], var_ptr[:-1])
    # channel agreement + sum of bipolar check values (satisfied - unsatisfied)
    score = 1 + np.diff(var_ptr) - 2 * unsat

    def flip(v):
        nonlocal n_unsat
        x[v] ^= 1
        score[v] += -2 if x[v] != y[v] else 2
        for c in var_idx[var_ptr[v]:var_ptr[v + 1]]:
            synd[c] ^= 1
            delta = 1 if synd[c] else -1
            n_unsat += delta
            score[chk_idx[chk_ptr[c]:chk_ptr[c + 1]]] -= 2 * delta

    it = 0
    while it < max_iter:
        v = int(np.argmin(score))
        it += 1
        low = score[v]
        if low >= 0:
            for u in np.flatnonzero(score == low):
                flip(int(u))
        else:
            flip(v)
        if n_unsat == 0:
            return x, it, True
    return x, it, False


# ---- FTL write path ---------------------------------------------------------
# Arrays (all numpy, mutated in place):
#   l2p[lpn] -> ppn or -1; p2l[ppn] -> lpn or -1; valid[blk]; erase[blk];
#   bstate[blk] 0 free / 1 open / 2 full; open_blk[plane], open_ptr[plane];
#   free_cnt[plane]; enc[ppn]; cursor[0] = stripe pointer;
#   gc_reloc[plane], gc_erase[plane] accumulate GC work.
# ppn = (plane * B + blk) * ppb + page, global block id = plane * B + blk.


def _open_block(plane, B, erase, bstate, open_blk, open_ptr, free_cnt):
    base = plane * B
    best = -1
    for b in range(base, base + B):
        if bstate[b] == 0 and (best < 0 or erase[b] < erase[best]):
            best = b
    if best < 0:
        return -1
    if open_blk[plane] >= 0:
        bstate[open_blk[plane]] = 2
    bstate[best] = 1
    open_blk[plane] = best
    open_ptr[plane] = 0
    free_cnt[plane] -= 1
    return best


def _alloc(plane, B, ppb, erase, bstate, open_blk, open_ptr, free_cnt):
    if open_blk[plane] < 0 or open_ptr[plane] >= ppb:
        if _open_block(plane, B, erase, bstate, open_blk, open_ptr, free_cnt) < 0:
            return -1
    ppn = open_blk[plane] * ppb + open_ptr[plane]
    open_ptr[plane] += 1
    return ppn


def _gc_plane(plane, B, ppb, thr, l2p, p2l, valid, erase, bstate, open_blk, open_ptr,
              free_cnt, enc, gc_reloc, gc_erase, limit=-1):
    """Greedy GC until ``thr`` free blocks (or ``limit`` victims, when >= 0)."""
    while free_cnt[plane] < thr and limit != 0:
        limit -= 1
        base = plane * B
        victim = -1
        for b in range(base, base + B):
            if bstate[b] != 2:
                continue
            if victim < 0 or valid[b] < valid[victim] or (
                    valid[b] == valid[victim] and erase[b] < erase[victim]):
                victim = b
        if victim < 0 or valid[victim] >= ppb:
            return 0   # nothing reclaimable
        start = victim * ppb
        for ppn in range(start, start + ppb):
            lpn = p2l[ppn]
            if lpn < 0:
                continue
            dst = _alloc(plane, B, ppb, erase, bstate, open_blk, open_ptr, free_cnt)
            if dst < 0:
                return -1
            p2l[dst] = lpn
            l2p[lpn] = dst
            enc[dst] = enc[ppn]
            valid[dst // ppb] += 1
            p2l[ppn] = -1
            gc_reloc[plane] += 1
        valid[victim] = 0
        erase[victim] += 1
        bstate[victim] = 0
        free_cnt[plane] += 1
        gc_erase[plane] += 1
    return 0


def ftl_write(lpns, l2p, p2l, valid, erase, bstate, open_blk, open_ptr, free_cnt, enc,
              cursor, gc_reloc, gc_erase, B, ppb, thr, enc_flag):
    """Write logical pages in order; returns pages written (short on out-of-space)."""
    n_planes = open_blk.shape[0]
    done = 0
    for lpn in lpns.tolist():
        plane = int(cursor[0] % n_planes)
        cursor[0] += 1
        old = l2p[lpn]
        if old >= 0:
            p2l[old] = -1
            valid[old // ppb] -= 1
        ppn = _alloc(plane, B, ppb, erase, bstate, open_blk, open_ptr, free_cnt)
        if ppn < 0:
            l2p[lpn] = -1
            return done
        l2p[lpn] = ppn
        p2l[ppn] = lpn
        valid[ppn // ppb] += 1
        enc[ppn] = enc_flag
        done += 1
        if free_cnt[plane] < thr:
            if _gc_plane(plane, B, ppb, thr, l2p, p2l, valid, erase, bstate, open_blk,
                         open_ptr, free_cnt, enc, gc_reloc, gc_erase) < 0:
                return done
    return done
