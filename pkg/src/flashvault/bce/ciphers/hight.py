"""HIGHT (TTAS.KO-12.0040) on a BCE lane.

Encryption needs XOR, rotations and addition mod 2^8.  Decryption
subtracts, which the AU does as an addition of the operand multiplied
by -1 mod 2^8.
"""

from .base import BlockCipher


def _deltas():
    s = [0, 1, 0, 1, 1, 0, 1]
    for i in range(128 - 7 + 6):
        s.append(s[i + 3] ^ s[i])
    return tuple(sum(s[i + b] << b for b in range(7)) for i in range(128))


DELTA = _deltas()


class HIGHT(BlockCipher):
    name = "HIGHT"
    block_bytes = 8
    key_bytes = (16,)
    rounds = 32

    def _setup(self, key):
        lane = self.lane
        # byte strings are written most-significant first: MK15 .. MK0
        mk = key[::-1]
        self.wk = [mk[i + 12] for i in range(4)] + [mk[i - 4] for i in range(4, 8)]
        sk = [0] * 128
        for i in range(8):
            for j in range(8):
                sk[16 * i + j] = lane.add(mk[(j - i) % 8], DELTA[16 * i + j], 8)
                sk[16 * i + j + 8] = lane.add(mk[(j - i) % 8 + 8], DELTA[16 * i + j + 8], 8)
        self.sk = sk

    @staticmethod
    def _f0(lane, x):
        return lane.xor(lane.xor(lane.rotl(x, 1, 8), lane.rotl(x, 2, 8), 8), lane.rotl(x, 7, 8), 8)

    @staticmethod
    def _f1(lane, x):
        return lane.xor(lane.xor(lane.rotl(x, 3, 8), lane.rotl(x, 4, 8), 8), lane.rotl(x, 6, 8), 8)

    @staticmethod
    def _sub(lane, a, b):
        return lane.add(a, lane.mulmod(b, 0xFF, 0x100, 8), 8)

    def _encrypt(self, lane, block):
        p = block[::-1]
        wk, sk, f0, f1 = self.wk, self.sk, self._f0, self._f1
        x = [lane.add(p[0], wk[0], 8), p[1], lane.xor(p[2], wk[1], 8), p[3],
             lane.add(p[4], wk[2], 8), p[5], lane.xor(p[6], wk[3], 8), p[7]]
        for i in range(31):
            x = [
                lane.xor(x[7], lane.add(f0(lane, x[6]), sk[4 * i + 3], 8), 8), x[0],
                lane.add(x[1], lane.xor(f1(lane, x[0]), sk[4 * i], 8), 8), x[2],
                lane.xor(x[3], lane.add(f0(lane, x[2]), sk[4 * i + 1], 8), 8), x[4],
                lane.add(x[5], lane.xor(f1(lane, x[4]), sk[4 * i + 2], 8), 8), x[6],
            ]
        x = [
            x[0], lane.add(x[1], lane.xor(f1(lane, x[0]), sk[124], 8), 8),
            x[2], lane.xor(x[3], lane.add(f0(lane, x[2]), sk[125], 8), 8),
            x[4], lane.add(x[5], lane.xor(f1(lane, x[4]), sk[126], 8), 8),
            x[6], lane.xor(x[7], lane.add(f0(lane, x[6]), sk[127], 8), 8),
        ]
        c = [lane.add(x[0], wk[4], 8), x[1], lane.xor(x[2], wk[5], 8), x[3],
             lane.add(x[4], wk[6], 8), x[5], lane.xor(x[6], wk[7], 8), x[7]]
        return bytes(c[::-1])

    def _decrypt(self, lane, block):
        c = block[::-1]
        wk, sk, f0, f1, sub = self.wk, self.sk, self._f0, self._f1, self._sub
        x = [sub(lane, c[0], wk[4]), c[1], lane.xor(c[2], wk[5], 8), c[3],
             sub(lane, c[4], wk[6]), c[5], lane.xor(c[6], wk[7], 8), c[7]]
        x = [
            x[0], sub(lane, x[1], lane.xor(f1(lane, x[0]), sk[124], 8)),
            x[2], lane.xor(x[3], lane.add(f0(lane, x[2]), sk[125], 8), 8),
            x[4], sub(lane, x[5], lane.xor(f1(lane, x[4]), sk[126], 8)),
            x[6], lane.xor(x[7], lane.add(f0(lane, x[6]), sk[127], 8), 8),
        ]
        for i in range(30, -1, -1):
            n0, n2, n4, n6 = x[1], x[3], x[5], x[7]
            x = [
                n0, sub(lane, x[2], lane.xor(f1(lane, n0), sk[4 * i], 8)),
                n2, lane.xor(x[4], lane.add(f0(lane, n2), sk[4 * i + 1], 8), 8),
                n4, sub(lane, x[6], lane.xor(f1(lane, n4), sk[4 * i + 2], 8)),
                n6, lane.xor(x[0], lane.add(f0(lane, n6), sk[4 * i + 3], 8), 8),
            ]
        p = [sub(lane, x[0], wk[0]), x[1], lane.xor(x[2], wk[1], 8), x[3],
             sub(lane, x[4], wk[2]), x[5], lane.xor(x[6], wk[3], 8), x[7]]
        return bytes(p[::-1])
