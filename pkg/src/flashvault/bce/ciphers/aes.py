"""AES (FIPS-197) on a BCE lane.

The state is held as four 32-bit row words; byte c of row r sits at bits
8c..8c+7.  ShiftRows is then a rotate per row and SubBytes a 4-table lookup.
"""

from ..tables import standard_table
from .base import BlockCipher

RCON = (0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1B, 0x36)


class AES(BlockCipher):
    name = "AES"
    block_bytes = 16
    key_bytes = (16, 24, 32)

    @property
    def rounds(self):
        return {16: 10, 24: 12, 32: 14}[len(self.key)]

    def _setup(self, key):
        lane = self.lane
        s = standard_table("aes")
        lane.load_tables("aes", (s, s, s, s))
        si = standard_table("aes_inv")
        lane.load_tables("aes_inv", (si, si, si, si))
        nk = len(key) // 4
        nr = self.rounds
        w = [int.from_bytes(key[4 * i:4 * i + 4], "big") for i in range(nk)]
        for i in range(nk, 4 * (nr + 1)):
            t = w[i - 1]
            if i % nk == 0:
                t = lane.sbox(lane.rotl(t, 8), "aes", 32)
                t = lane.xor(t, RCON[i // nk - 1] << 24)
            elif nk > 6 and i % nk == 4:
                t = lane.sbox(t, "aes", 32)
            w.append(lane.xor(w[i - nk], t))
        self.round_keys = []
        for k in range(nr + 1):
            cols = w[4 * k:4 * k + 4]
            rows = []
            for r in range(4):
                rows.append(sum(((cols[c] >> (24 - 8 * r)) & 0xFF) << (8 * c) for c in range(4)))
            self.round_keys.append(rows)

    @staticmethod
    def _to_rows(block):
        return [sum(block[4 * c + r] << (8 * c) for c in range(4)) for r in range(4)]

    @staticmethod
    def _from_rows(rows):
        return bytes((rows[r] >> (8 * c)) & 0xFF for c in range(4) for r in range(4))

    def _add_key(self, lane, rows, k):
        rk = self.round_keys[k]
        return [lane.xor(rows[r], rk[r]) for r in range(4)]

    def _encrypt(self, lane, block):
        nr = self.rounds
        rows = self._add_key(lane, self._to_rows(block), 0)
        for rnd in range(1, nr + 1):
            rows = [lane.sbox(x, "aes", 32) for x in rows]
            rows = [rows[0]] + [lane.rotr(rows[r], 8 * r) for r in (1, 2, 3)]
            if rnd != nr:
                rows = self._mix(lane, rows)
            rows = self._add_key(lane, rows, rnd)
        return self._from_rows(rows)

    def _decrypt(self, lane, block):
        nr = self.rounds
        rows = self._add_key(lane, self._to_rows(block), nr)
        for rnd in range(nr - 1, -1, -1):
            rows = [rows[0]] + [lane.rotl(rows[r], 8 * r) for r in (1, 2, 3)]
            rows = [lane.sbox(x, "aes_inv", 32) for x in rows]
            rows = self._add_key(lane, rows, rnd)
            if rnd:
                rows = self._unmix(lane, rows)
        return self._from_rows(rows)

    @staticmethod
    def _mix(lane, R):
        out = []
        for r in range(4):
            a, b, c, d = R[r], R[(r + 1) % 4], R[(r + 2) % 4], R[(r + 3) % 4]
            t = lane.xor(lane.gfmul(a, 2), lane.gfmul(b, 3))
            out.append(lane.xor(lane.xor(t, c), d))
        return out

    @staticmethod
    def _unmix(lane, R):
        out = []
        for r in range(4):
            a, b, c, d = R[r], R[(r + 1) % 4], R[(r + 2) % 4], R[(r + 3) % 4]
            t = lane.xor(lane.gfmul(a, 14), lane.gfmul(b, 11))
            t = lane.xor(t, lane.gfmul(c, 13))
            out.append(lane.xor(t, lane.gfmul(d, 9)))
        return out
