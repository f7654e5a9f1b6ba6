"""IDEA on a BCE lane: XOR, addition mod 2^16, multiplication mod 2^16+1."""

from .base import BlockCipher

M16 = 0xFFFF


def _inv(lane, x):
    # x^(2^16 - 1) in the multiplicative group of order 2^16
    acc, base, e = 1, x, 0xFFFF
    while e:
        if e & 1:
            acc = lane.mulmod_z(acc, base)
        base = lane.mulmod_z(base, base)
        e >>= 1
    return acc


def _neg(lane, x):
    return lane.mulmod(x, M16, 1 << 16, 16)


class IDEA(BlockCipher):
    name = "IDEA"
    block_bytes = 8
    key_bytes = (16,)
    rounds = 8.5

    def _setup(self, key):
        lane = self.lane
        k = int.from_bytes(key, "big")
        ek = []
        while len(ek) < 52:
            ek.extend((k >> (112 - 16 * i)) & M16 for i in range(8))
            k = lane.rot128(k, 25)
        ek = ek[:52]
        dk = [0] * 52
        dk[0], dk[1], dk[2], dk[3] = _inv(lane, ek[48]), _neg(lane, ek[49]), _neg(lane, ek[50]), _inv(lane, ek[51])
        for i in range(1, 8):
            j = 48 - 6 * i
            dk[6 * i - 2], dk[6 * i - 1] = ek[j + 4], ek[j + 5]
            dk[6 * i] = _inv(lane, ek[j])
            dk[6 * i + 1] = _neg(lane, ek[j + 2])
            dk[6 * i + 2] = _neg(lane, ek[j + 1])
            dk[6 * i + 3] = _inv(lane, ek[j + 3])
        dk[46], dk[47] = ek[4], ek[5]
        dk[48], dk[49], dk[50], dk[51] = _inv(lane, ek[0]), _neg(lane, ek[1]), _neg(lane, ek[2]), _inv(lane, ek[3])
        self.ek, self.dk = ek, dk

    @staticmethod
    def _crypt(lane, block, z):
        x1, x2, x3, x4 = (int.from_bytes(block[i:i + 2], "big") for i in range(0, 8, 2))
        for r in range(8):
            k = z[6 * r:6 * r + 6]
            a = lane.mulmod_z(x1, k[0])
            b = lane.add(x2, k[1], 16)
            c = lane.add(x3, k[2], 16)
            d = lane.mulmod_z(x4, k[3])
            e = lane.mulmod_z(lane.xor(a, c, 16), k[4])
            f = lane.mulmod_z(lane.add(lane.xor(b, d, 16), e, 16), k[5])
            e = lane.add(e, f, 16)
            x1, x2, x3, x4 = lane.xor(a, f, 16), lane.xor(c, f, 16), lane.xor(b, e, 16), lane.xor(d, e, 16)
        y = (lane.mulmod_z(x1, z[48]), lane.add(x3, z[49], 16),
             lane.add(x2, z[50], 16), lane.mulmod_z(x4, z[51]))
        return b"".join(v.to_bytes(2, "big") for v in y)

    def _encrypt(self, lane, block):
        return self._crypt(lane, block, self.ek)

    def _decrypt(self, lane, block):
        return self._crypt(lane, block, self.dk)
