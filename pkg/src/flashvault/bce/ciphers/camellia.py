"""Camellia (RFC 3713) on a BCE lane.

The four TU tables hold SBOX1..SBOX4, which is exactly the table unit's
capacity.  The F-function substitutes each 32-bit half in one lookup.
"""

from ...datapath import SBoxTable
from ..tables import standard_table
from .base import BlockCipher

M64 = (1 << 64) - 1
SIGMA = (
    0xA09E667F3BCC908B, 0xB67AE8584CAA73B2, 0xC6EF372FE94F82BE,
    0x54FF53A5F1D36F1C, 0x10E527FADE682D1D, 0xB05688C2B3E6C1FD,
)

# (source key, rotation) for each 64-bit subkey pair, in encryption order
_SCHED_128 = (
    ("w", "L", 0), ("r", "A", 0), ("r", "L", 15), ("r", "A", 15),
    ("fl", "A", 30), ("r", "L", 45), ("r9", "A", 45), ("r10", "L", 60), ("r", "A", 60),
    ("fl", "L", 77), ("r", "L", 94), ("r", "A", 94), ("r", "L", 111), ("w", "A", 111),
)
_SCHED_256 = (
    ("w", "L", 0), ("r", "B", 0), ("r", "R", 15), ("r", "A", 15),
    ("fl", "R", 30), ("r", "B", 30), ("r", "L", 45), ("r", "A", 45),
    ("fl", "L", 60), ("r", "R", 60), ("r", "B", 60), ("r", "L", 77),
    ("fl", "A", 77), ("r", "R", 94), ("r", "A", 94), ("r", "L", 111), ("w", "B", 111),
)


def _rot(table, n):
    return SBoxTable(tuple(((v << n) | (v >> (8 - n))) & 0xFF for v in table.entries))


class Camellia(BlockCipher):
    name = "CAMELLIA"
    block_bytes = 16
    key_bytes = (16, 24, 32)

    @property
    def rounds(self):
        return 18 if len(self.key) == 16 else 24

    def _setup(self, key):
        lane = self.lane
        s1 = standard_table("camellia_s1")
        s2 = _rot(s1, 1)
        s3 = _rot(s1, 7)
        s4 = SBoxTable(tuple(s1[((x << 1) | (x >> 7)) & 0xFF] for x in range(256)))
        # little-endian byte i of each half: (t8, t7, t6, t5) and (t4, t3, t2, t1)
        lane.load_tables("cam_lo", (s1, s4, s3, s2))
        lane.load_tables("cam_hi", (s4, s3, s2, s1))

        kl = int.from_bytes(key[:16], "big")
        if len(key) == 16:
            kr = 0
        elif len(key) == 24:
            r = int.from_bytes(key[16:], "big")
            kr = (r << 64) | lane.not_(r, 64)
        else:
            kr = int.from_bytes(key[16:], "big")
        x = lane.xor(kl, kr, 128)
        d1, d2 = x >> 64, x & M64
        d2 = lane.xor(d2, self._f(lane, d1, SIGMA[0]), 64)
        d1 = lane.xor(d1, self._f(lane, d2, SIGMA[1]), 64)
        d1 = lane.xor(d1, kl >> 64, 64)
        d2 = lane.xor(d2, kl & M64, 64)
        d2 = lane.xor(d2, self._f(lane, d1, SIGMA[2]), 64)
        d1 = lane.xor(d1, self._f(lane, d2, SIGMA[3]), 64)
        ka = (d1 << 64) | d2
        kb = 0
        if len(key) > 16:
            x = lane.xor(ka, kr, 128)
            d1, d2 = x >> 64, x & M64
            d2 = lane.xor(d2, self._f(lane, d1, SIGMA[4]), 64)
            d1 = lane.xor(d1, self._f(lane, d2, SIGMA[5]), 64)
            kb = (d1 << 64) | d2
        src = {"L": kl, "R": kr, "A": ka, "B": kb}

        # flatten into a program of (kind, subkey...) steps
        steps = []
        sched = _SCHED_128 if len(key) == 16 else _SCHED_256
        for kind, name, n in sched:
            v = lane.rot128(src[name], n)
            hi, lo = v >> 64, v & M64
            if kind == "w":
                steps.append(("w", hi, lo))
            elif kind == "fl":
                steps.append(("fl", hi, lo))
            elif kind == "r9":
                steps.append(("r", hi))
            elif kind == "r10":
                steps.append(("r", lo))
            else:
                steps.append(("r", hi))
                steps.append(("r", lo))
        self.enc_steps = steps
        self.dec_steps = self._reverse(steps)

    @staticmethod
    def _reverse(steps):
        out = []
        for st in reversed(steps):
            if st[0] == "r":
                out.append(st)
            else:
                # FL/FL^-1 keys trade places; whitening pairs keep their (hi, lo) layout
                out.append((st[0], st[2], st[1]) if st[0] == "fl" else st)
        return out

    @staticmethod
    def _f(lane, x, k):
        x = lane.xor(x, k, 64)
        hi = lane.sbox(x >> 32, "cam_hi", 32)
        lo = lane.sbox(x & 0xFFFFFFFF, "cam_lo", 32)
        t1, t2, t3, t4 = (hi >> 24) & 0xFF, (hi >> 16) & 0xFF, (hi >> 8) & 0xFF, hi & 0xFF
        t5, t6, t7, t8 = (lo >> 24) & 0xFF, (lo >> 16) & 0xFF, (lo >> 8) & 0xFF, lo & 0xFF
        x_ = lane.xor
        # shared partial sums keep the LOU op count down
        a = x_(t1, t8, 8)
        b = x_(t2, t5, 8)
        c = x_(t3, t6, 8)
        d = x_(t4, t7, 8)
        y1 = x_(x_(x_(a, c, 8), t4, 8), t7, 8)
        y2 = x_(x_(x_(a, b, 8), t4, 8), t7, 8)
        y3 = x_(x_(a, b, 8), c, 8)
        y4 = x_(x_(b, c, 8), d, 8)
        y5 = x_(x_(a, t2, 8), x_(t6, t7, 8), 8)
        y6 = x_(x_(b, t3, 8), x_(t7, t8, 8), 8)
        y7 = x_(x_(c, t4, 8), x_(t5, t8, 8), 8)
        y8 = x_(x_(d, t1, 8), x_(t5, t6, 8), 8)
        return int.from_bytes(bytes((y1, y2, y3, y4, y5, y6, y7, y8)), "big")

    @staticmethod
    def _fl(lane, x, k):
        x1, x2 = x >> 32, x & 0xFFFFFFFF
        k1, k2 = k >> 32, k & 0xFFFFFFFF
        x2 = lane.xor(x2, lane.rotl(lane.and_(x1, k1), 1))
        x1 = lane.xor(x1, lane.or_(x2, k2))
        return (x1 << 32) | x2

    @staticmethod
    def _flinv(lane, y, k):
        y1, y2 = y >> 32, y & 0xFFFFFFFF
        k1, k2 = k >> 32, k & 0xFFFFFFFF
        y1 = lane.xor(y1, lane.or_(y2, k2))
        y2 = lane.xor(y2, lane.rotl(lane.and_(y1, k1), 1))
        return (y1 << 32) | y2

    def _run(self, lane, block, steps):
        v = int.from_bytes(block, "big")
        d1, d2 = v >> 64, v & M64
        first, *body, last = steps
        d1 = lane.xor(d1, first[1], 64)
        d2 = lane.xor(d2, first[2], 64)
        odd = True
        for st in body:
            if st[0] == "r":
                if odd:
                    d2 = lane.xor(d2, self._f(lane, d1, st[1]), 64)
                else:
                    d1 = lane.xor(d1, self._f(lane, d2, st[1]), 64)
                odd = not odd
            else:
                d1 = self._fl(lane, d1, st[1])
                d2 = self._flinv(lane, d2, st[2])
        d2 = lane.xor(d2, last[1], 64)
        d1 = lane.xor(d1, last[2], 64)
        return ((d2 << 64) | d1).to_bytes(16, "big")

    def _encrypt(self, lane, block):
        return self._run(lane, block, self.enc_steps)

    def _decrypt(self, lane, block):
        return self._run(lane, block, self.dec_steps)
