"""SM4 (GB/T 32907-2016) on a BCE lane."""

from ..tables import standard_table
from .base import BlockCipher

FK = (0xA3B1BAC6, 0x56AA3350, 0x677D9197, 0xB27022DC)
CK = tuple(
    int.from_bytes(bytes(((4 * i + j) * 7) & 0xFF for j in range(4)), "big") for i in range(32)
)


class SM4(BlockCipher):
    name = "SM4"
    block_bytes = 16
    key_bytes = (16,)
    rounds = 32

    def _setup(self, key):
        lane = self.lane
        s = standard_table("sm4")
        lane.load_tables("sm4", (s, s, s, s))
        k = [lane.xor(int.from_bytes(key[4 * i:4 * i + 4], "big"), FK[i]) for i in range(4)]
        rk = []
        for i in range(32):
            t = lane.xor(lane.xor(k[i + 1], k[i + 2]), lane.xor(k[i + 3], CK[i]))
            b = lane.sbox(t, "sm4", 32)
            b = lane.xor(lane.xor(b, lane.rotl(b, 13)), lane.rotl(b, 23))
            k.append(lane.xor(k[i], b))
            rk.append(k[-1])
        self.rk = rk

    def _crypt(self, lane, block, keys):
        x = [int.from_bytes(block[4 * i:4 * i + 4], "big") for i in range(4)]
        for rk in keys:
            t = lane.xor(lane.xor(x[1], x[2]), lane.xor(x[3], rk))
            b = lane.sbox(t, "sm4", 32)
            l = lane.xor(b, lane.rotl(b, 2))
            l = lane.xor(l, lane.rotl(b, 10))
            l = lane.xor(l, lane.rotl(b, 18))
            l = lane.xor(l, lane.rotl(b, 24))
            x = [x[1], x[2], x[3], lane.xor(x[0], l)]
        return b"".join(v.to_bytes(4, "big") for v in reversed(x))

    def _encrypt(self, lane, block):
        return self._crypt(lane, block, self.rk)

    def _decrypt(self, lane, block):
        return self._crypt(lane, block, self.rk[::-1])
