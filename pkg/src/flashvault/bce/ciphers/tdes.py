"""Triple DES (EDE) on a BCE lane.

All DES bit shuffles go through the permutation unit.  The expansion E
duplicates bits, so it is split into two 32-bit selections: the even
S-box groups draw 24 distinct bits of R, and so do the odd groups.  Each
6-bit group lands in its own byte of the selected word.
"""

from ..lane import selection_perm
from ..tables import standard_table
from .base import BlockCipher

IP = (58, 50, 42, 34, 26, 18, 10, 2, 60, 52, 44, 36, 28, 20, 12, 4,
      62, 54, 46, 38, 30, 22, 14, 6, 64, 56, 48, 40, 32, 24, 16, 8,
      57, 49, 41, 33, 25, 17, 9, 1, 59, 51, 43, 35, 27, 19, 11, 3,
      61, 53, 45, 37, 29, 21, 13, 5, 63, 55, 47, 39, 31, 23, 15, 7)
E = (32, 1, 2, 3, 4, 5, 4, 5, 6, 7, 8, 9, 8, 9, 10, 11, 12, 13, 12, 13, 14, 15, 16, 17,
     16, 17, 18, 19, 20, 21, 20, 21, 22, 23, 24, 25, 24, 25, 26, 27, 28, 29, 28, 29, 30, 31, 32, 1)
P = (16, 7, 20, 21, 29, 12, 28, 17, 1, 15, 23, 26, 5, 18, 31, 10,
     2, 8, 24, 14, 32, 27, 3, 9, 19, 13, 30, 6, 22, 11, 4, 25)
PC1 = (57, 49, 41, 33, 25, 17, 9, 1, 58, 50, 42, 34, 26, 18, 10, 2, 59, 51, 43, 35, 27, 19, 11, 3,
       60, 52, 44, 36, 63, 55, 47, 39, 31, 23, 15, 7, 62, 54, 46, 38, 30, 22, 14, 6, 61, 53, 45, 37,
       29, 21, 13, 5, 28, 20, 12, 4)
PC2 = (14, 17, 11, 24, 1, 5, 3, 28, 15, 6, 21, 10, 23, 19, 12, 4, 26, 8, 16, 7, 27, 20, 13, 2,
       41, 52, 31, 37, 47, 55, 30, 40, 51, 45, 33, 48, 44, 49, 39, 56, 34, 53, 46, 42, 50, 36, 29, 32)
SHIFTS = (1, 1, 2, 2, 2, 2, 2, 2, 1, 2, 2, 2, 2, 2, 2, 1)
M28 = (1 << 28) - 1


def _table_perm(table, n_in, n_out, width):
    # DES numbers bits 1..n from the MSB
    return selection_perm({n_out - 1 - o: n_in - t for o, t in enumerate(table)}, width)


def _group_selection(parity):
    # groups 0,2,4,6 (or 1,3,5,7), one per byte, MSB of the group at bit 5
    sel = {}
    for g in range(parity, 8, 2):
        for m in range(6):
            sel[8 * (g // 2) + 5 - m] = 32 - E[6 * g + m]
    return selection_perm(sel, 32)


IP_CFG = _table_perm(IP, 64, 64, 64)
FP_CFG = _table_perm(tuple(IP.index(i) + 1 for i in range(1, 65)), 64, 64, 64)
P_CFG = _table_perm(P, 32, 32, 32)
E_EVEN = _group_selection(0)
E_ODD = _group_selection(1)
PC1_CFG = _table_perm(PC1, 64, 56, 64)
PC2_CFG = _table_perm(PC2, 56, 48, 64)


def _chunked(k48):
    """Lay a 48-bit subkey out like the E selections (6 bits per byte)."""
    even = odd = 0
    for g in range(8):
        six = (k48 >> (42 - 6 * g)) & 0x3F
        if g % 2 == 0:
            even |= six << (8 * (g // 2))
        else:
            odd |= six << (8 * (g // 2))
    return even, odd


class _DES:
    def __init__(self, lane, key8):
        k = int.from_bytes(key8, "big")
        cd = lane.permute(k, PC1_CFG) & ((1 << 56) - 1)
        c, d = cd >> 28, cd & M28
        self.subkeys = []
        for s in SHIFTS:
            c = lane.rotl(c, s, 28)
            d = lane.rotl(d, s, 28)
            k48 = lane.permute((c << 28) | d, PC2_CFG) & ((1 << 48) - 1)
            self.subkeys.append(_chunked(k48))

    @staticmethod
    def _f(lane, r, keys):
        ev = lane.xor(lane.permute(r, E_EVEN), keys[0])
        od = lane.xor(lane.permute(r, E_ODD), keys[1])
        out = 0
        for g in range(8):
            src = ev if g % 2 == 0 else od
            six = (src >> (8 * (g // 2))) & 0x3F
            name = "des_a" if g < 4 else "des_b"
            nib = lane.sbox(((g % 4) << 6) | six, name, 8)
            out |= nib << (28 - 4 * g)
        return lane.permute(out, P_CFG)

    def crypt(self, lane, x, decrypt=False):
        x = lane.permute(x, IP_CFG)
        l, r = x >> 32, x & 0xFFFFFFFF
        keys = self.subkeys[::-1] if decrypt else self.subkeys
        for k in keys:
            l, r = r, lane.xor(l, self._f(lane, r, k))
        return lane.permute((r << 32) | l, FP_CFG)


class TripleDES(BlockCipher):
    name = "TDES"
    block_bytes = 8
    key_bytes = (16, 24)
    rounds = 48

    def _setup(self, key):
        lane = self.lane
        lane.load_tables("des_a", (standard_table("des_s1_4"),))
        lane.load_tables("des_b", (standard_table("des_s5_8"),))
        k3 = key[16:24] if len(key) == 24 else key[:8]
        self.stages = [_DES(lane, key[:8]), _DES(lane, key[8:16]), _DES(lane, k3)]

    def _encrypt(self, lane, block):
        x = int.from_bytes(block, "big")
        x = self.stages[0].crypt(lane, x)
        x = self.stages[1].crypt(lane, x, decrypt=True)
        x = self.stages[2].crypt(lane, x)
        return x.to_bytes(8, "big")

    def _decrypt(self, lane, block):
        x = int.from_bytes(block, "big")
        x = self.stages[2].crypt(lane, x, decrypt=True)
        x = self.stages[1].crypt(lane, x)
        x = self.stages[0].crypt(lane, x, decrypt=True)
        return x.to_bytes(8, "big")
