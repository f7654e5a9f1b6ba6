# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: Keccak-f[1600], the GDBF decoder loop, the FTL write path.

Same signatures and results as flashvault._fallback.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int32_t, int64_t, uint8_t, int8_t

cnp.import_array()

cdef uint64_t[24] RC = [
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808AULL, 0x8000000080008000ULL,
    0x000000000000808BULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008AULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000AULL,
    0x000000008000808BULL, 0x800000000000008BULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800AULL, 0x800000008000000AULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
]
cdef int[25] ROT = [0, 1, 62, 28, 27, 36, 44, 6, 55, 20, 3, 10, 43, 25, 39, 41, 45, 15, 21, 8,
                    18, 2, 61, 56, 14]


cdef inline uint64_t rotl64(uint64_t v, int r) nogil:
    if r == 0:
        return v
    return (v << r) | (v >> (64 - r))


cdef void _keccak(uint64_t* a) nogil:
    cdef uint64_t c[5]
    cdef uint64_t d[5]
    cdef uint64_t b[25]
    cdef int rnd, x, y, i
    for rnd in range(24):
        for x in range(5):
            c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20]
        for x in range(5):
            d[x] = c[(x + 4) % 5] ^ rotl64(c[(x + 1) % 5], 1)
        for y in range(5):
            for x in range(5):
                i = x + 5 * y
                b[y + 5 * ((2 * x + 3 * y) % 5)] = rotl64(a[i] ^ d[x], ROT[i])
        for y in range(0, 25, 5):
            for x in range(5):
                a[y + x] = b[y + x] ^ (~b[y + (x + 1) % 5] & b[y + (x + 2) % 5])
        a[0] ^= RC[rnd]


def keccak_f1600(state):
    cdef uint64_t a[25]
    cdef int i
    for i in range(25):
        a[i] = state[i]
    _keccak(a)
    return [a[i] for i in range(25)]


def gdbf_decode(const uint8_t[::1] y, const int32_t[::1] chk_ptr, const int32_t[::1] chk_idx,
                const int32_t[::1] var_ptr, const int32_t[::1] var_idx, int max_iter):
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t m = chk_ptr.shape[0] - 1
    xa = np.array(y, dtype=np.uint8)
    cdef uint8_t[::1] x = xa
    cdef cnp.ndarray[cnp.int64_t, ndim=1] score_a = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] score = score_a
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] synd_a = np.zeros(m, dtype=np.uint8)
    cdef uint8_t[::1] synd = synd_a
    cdef Py_ssize_t c, v, u, j, k, best
    cdef int64_t low, n_unsat = 0, delta
    cdef int it = 0
    cdef uint8_t s
    for c in range(m):
        s = 0
        for j in range(chk_ptr[c], chk_ptr[c + 1]):
            s ^= x[chk_idx[j]]
        synd[c] = s
        n_unsat += s
    if n_unsat == 0:
        return xa, 0, True
    for v in range(n):
        score[v] = 1
        for j in range(var_ptr[v], var_ptr[v + 1]):
            score[v] += -1 if synd[var_idx[j]] else 1
    cand_a = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] cand = cand_a
    cdef Py_ssize_t n_cand, t
    while it < max_iter:
        best = 0
        low = score[0]
        for v in range(1, n):
            if score[v] < low:
                low = score[v]
                best = v
        it += 1
        if low < 0:
            cand[0] = best
            n_cand = 1
        else:
            # escape: every bit tied at the lowest score, snapshot first
            n_cand = 0
            for v in range(best, n):
                if score[v] == low:
                    cand[n_cand] = v
                    n_cand += 1
        for t in range(n_cand):
            u = cand[t]
            x[u] ^= 1
            score[u] += -2 if x[u] != y[u] else 2
            for j in range(var_ptr[u], var_ptr[u + 1]):
                c = var_idx[j]
                synd[c] ^= 1
                delta = 1 if synd[c] else -1
                n_unsat += delta
                for k in range(chk_ptr[c], chk_ptr[c + 1]):
                    score[chk_idx[k]] -= 2 * delta
        if n_unsat == 0:
            return xa, it, True
    return xa, it, False


# ---- FTL write path (same semantics as _fallback.ftl_write) ----------------

cdef Py_ssize_t _open_block(Py_ssize_t plane, Py_ssize_t B, int32_t[::1] erase, int8_t[::1] bstate,
                            int32_t[::1] open_blk, int32_t[::1] open_ptr, int32_t[::1] free_cnt) nogil:
    cdef Py_ssize_t base = plane * B, b, best = -1
    for b in range(base, base + B):
        if bstate[b] == 0 and (best < 0 or erase[b] < erase[best]):
            best = b
    if best < 0:
        return -1
    if open_blk[plane] >= 0:
        bstate[open_blk[plane]] = 2
    bstate[best] = 1
    open_blk[plane] = <int32_t>best
    open_ptr[plane] = 0
    free_cnt[plane] -= 1
    return best


cdef int64_t _alloc(Py_ssize_t plane, Py_ssize_t B, Py_ssize_t ppb, int32_t[::1] erase,
                    int8_t[::1] bstate, int32_t[::1] open_blk, int32_t[::1] open_ptr,
                    int32_t[::1] free_cnt) nogil:
    cdef int64_t ppn
    if open_blk[plane] < 0 or open_ptr[plane] >= ppb:
        if _open_block(plane, B, erase, bstate, open_blk, open_ptr, free_cnt) < 0:
            return -1
    ppn = <int64_t>open_blk[plane] * ppb + open_ptr[plane]
    open_ptr[plane] += 1
    return ppn


cdef int _gc_plane(Py_ssize_t plane, Py_ssize_t B, Py_ssize_t ppb, int32_t thr,
                   int32_t[::1] l2p, int32_t[::1] p2l, int32_t[::1] valid, int32_t[::1] erase,
                   int8_t[::1] bstate, int32_t[::1] open_blk, int32_t[::1] open_ptr,
                   int32_t[::1] free_cnt, uint8_t[::1] enc, int64_t[::1] gc_reloc,
                   int64_t[::1] gc_erase) nogil:
    cdef Py_ssize_t base, b, victim, ppn, start
    cdef int64_t dst
    cdef int32_t lpn
    while free_cnt[plane] < thr:
        base = plane * B
        victim = -1
        for b in range(base, base + B):
            if bstate[b] != 2:
                continue
            if victim < 0 or valid[b] < valid[victim] or (
                    valid[b] == valid[victim] and erase[b] < erase[victim]):
                victim = b
        if victim < 0 or valid[victim] >= ppb:
            return 0
        start = victim * ppb
        for ppn in range(start, start + ppb):
            lpn = p2l[ppn]
            if lpn < 0:
                continue
            dst = _alloc(plane, B, ppb, erase, bstate, open_blk, open_ptr, free_cnt)
            if dst < 0:
                return -1
            p2l[dst] = lpn
            l2p[lpn] = <int32_t>dst
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


def ftl_write(const int64_t[::1] lpns, int32_t[::1] l2p, int32_t[::1] p2l, int32_t[::1] valid,
              int32_t[::1] erase, int8_t[::1] bstate, int32_t[::1] open_blk,
              int32_t[::1] open_ptr, int32_t[::1] free_cnt, uint8_t[::1] enc,
              int64_t[::1] cursor, int64_t[::1] gc_reloc, int64_t[::1] gc_erase,
              Py_ssize_t B, Py_ssize_t ppb, int32_t thr, uint8_t enc_flag):
    cdef Py_ssize_t n_planes = open_blk.shape[0], i, plane
    cdef int64_t lpn, old, ppn
    cdef Py_ssize_t done = 0
    with nogil:
        for i in range(lpns.shape[0]):
            lpn = lpns[i]
            plane = cursor[0] % n_planes
            cursor[0] += 1
            old = l2p[lpn]
            if old >= 0:
                p2l[old] = -1
                valid[old // ppb] -= 1
            ppn = _alloc(plane, B, ppb, erase, bstate, open_blk, open_ptr, free_cnt)
            if ppn < 0:
                l2p[lpn] = -1
                break
            l2p[lpn] = <int32_t>ppn
            p2l[ppn] = <int32_t>lpn
            valid[ppn // ppb] += 1
            enc[ppn] = enc_flag
            done += 1
            if free_cnt[plane] < thr:
                if _gc_plane(plane, B, ppb, thr, l2p, p2l, valid, erase, bstate, open_blk,
                             open_ptr, free_cnt, enc, gc_reloc, gc_erase) < 0:
                    break
    return done
