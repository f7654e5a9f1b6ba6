"""Serpent on a BCE lane (bitsliced form, little-endian words).

Gathering bit j of the four state words into nibble j is a transpose,
done with two 64-bit permutations: the low 16 bits of each word feed
one network and the high 16 bits the other.  Each nibble then passes
through a zero-padded TU lookup; the table index carries the S-box
number in its upper bits.
"""

from ..lane import selection_perm
from ..tables import standard_table
from .base import BlockCipher

PHI = 0x9E3779B9
M32 = 0xFFFFFFFF


def _transpose_cfg():
    # input bit 16*w + j (word w, bit j of the half) -> output bit 4*j + w
    return selection_perm({4 * j + w: 16 * w + j for w in range(4) for j in range(16)}, 64)


def _untranspose_cfg():
    return selection_perm({16 * w + j: 4 * j + w for w in range(4) for j in range(16)}, 64)


GATHER = _transpose_cfg()
SCATTER = _untranspose_cfg()


def _sbox_words(lane, x, box, table):
    """Apply S-box ``box`` to the nibble formed by bit j of each word."""
    lo = sum(((x[w] & 0xFFFF) << (16 * w)) for w in range(4))
    hi = sum(((x[w] >> 16) << (16 * w)) for w in range(4))
    out = []
    for half in (lo, hi):
        g = lane.permute(half, GATHER)
        s = 0
        for j in range(16):
            nib = (g >> (4 * j)) & 0xF
            s |= lane.sbox((box << 4) | nib, table, 8) << (4 * j)
        out.append(lane.permute(s, SCATTER))
    lo, hi = out
    return [((lo >> (16 * w)) & 0xFFFF) | (((hi >> (16 * w)) & 0xFFFF) << 16) for w in range(4)]


def _lt(lane, x):
    x0, x1, x2, x3 = x
    x0 = lane.rotl(x0, 13)
    x2 = lane.rotl(x2, 3)
    x1 = lane.xor(lane.xor(x1, x0), x2)
    x3 = lane.xor(lane.xor(x3, x2), lane.shl(x0, 3))
    x1 = lane.rotl(x1, 1)
    x3 = lane.rotl(x3, 7)
    x0 = lane.xor(lane.xor(x0, x1), x3)
    x2 = lane.xor(lane.xor(x2, x3), lane.shl(x1, 7))
    x0 = lane.rotl(x0, 5)
    x2 = lane.rotl(x2, 22)
    return [x0, x1, x2, x3]


def _lt_inv(lane, x):
    x0, x1, x2, x3 = x
    x2 = lane.rotr(x2, 22)
    x0 = lane.rotr(x0, 5)
    x2 = lane.xor(lane.xor(x2, x3), lane.shl(x1, 7))
    x0 = lane.xor(lane.xor(x0, x1), x3)
    x3 = lane.rotr(x3, 7)
    x1 = lane.rotr(x1, 1)
    x3 = lane.xor(lane.xor(x3, x2), lane.shl(x0, 3))
    x1 = lane.xor(lane.xor(x1, x0), x2)
    x2 = lane.rotr(x2, 3)
    x0 = lane.rotr(x0, 13)
    return [x0, x1, x2, x3]


class Serpent(BlockCipher):
    name = "SERPENT"
    block_bytes = 16
    key_bytes = (16, 24, 32)
    rounds = 32

    def _setup(self, key):
        lane = self.lane
        lane.load_tables("serpent", (standard_table("serpent"),))
        lane.load_tables("serpent_inv", (standard_table("serpent_inv"),))
        words = [int.from_bytes(key[i:i + 4], "little") for i in range(0, len(key), 4)]
        if len(words) < 8:
            words.append(1)
        words += [0] * (8 - len(words))
        w = list(words)
        for i in range(132):
            t = lane.xor(lane.xor(w[i], w[i + 3]), lane.xor(w[i + 5], w[i + 7]))
            w.append(lane.rotl(lane.xor(t, PHI ^ i), 11))
        w = w[8:]
        self.subkeys = [
            _sbox_words(lane, w[4 * i:4 * i + 4], (3 - i) % 8, "serpent") for i in range(33)
        ]

    def _encrypt(self, lane, block):
        x = [int.from_bytes(block[i:i + 4], "little") for i in range(0, 16, 4)]
        k = self.subkeys
        for r in range(32):
            x = [lane.xor(a, b) for a, b in zip(x, k[r])]
            x = _sbox_words(lane, x, r % 8, "serpent")
            if r < 31:
                x = _lt(lane, x)
        x = [lane.xor(a, b) for a, b in zip(x, k[32])]
        return b"".join(v.to_bytes(4, "little") for v in x)

    def _decrypt(self, lane, block):
        x = [int.from_bytes(block[i:i + 4], "little") for i in range(0, 16, 4)]
        k = self.subkeys
        x = [lane.xor(a, b) for a, b in zip(x, k[32])]
        for r in range(31, -1, -1):
            if r < 31:
                x = _lt_inv(lane, x)
            x = _sbox_words(lane, x, r % 8, "serpent_inv")
            x = [lane.xor(a, b) for a, b in zip(x, k[r])]
        return b"".join(v.to_bytes(4, "little") for v in x)
