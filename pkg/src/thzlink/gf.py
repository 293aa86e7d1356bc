"""Finite field arithmetic for GF(2^s) with precomputed log/antilog tables."""

import functools

import numpy as np

# One fixed primitive polynomial per symbol size, written with the x^s term
# included (e.g. s=8 is x^8 + x^4 + x^3 + x^2 + 1 = 0x11d).
PRIMITIVE_POLYS = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
}


class GF:
    """GF(2^s): addition is XOR, multiplication via log/antilog tables.

    Elements are plain integers in [0, 2^s - 1]. The tables are built once
    at construction; instances are immutable afterwards and safe to share
    between threads.
    """

    def __init__(self, s: int):
        if s not in PRIMITIVE_POLYS:
            raise ValueError(f"no primitive polynomial configured for s={s}")
        self.s = s
        self.order = 1 << s
        self.poly = PRIMITIVE_POLYS[s]
        q = self.order
        exp = np.zeros(2 * q, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & q:
                x ^= self.poly
        # Duplicate the antilog table so products of two logs never need a mod.
        for i in range(q - 1, 2 * q):
            exp[i] = exp[i - (q - 1)]
        self.exp = exp
        self.log = log

    def __repr__(self) -> str:
        return f"GF(2^{self.s})"

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in GF(2^s)")
        if a == 0:
            return 0
        return int(self.exp[self.log[a] - self.log[b] + self.order - 1])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in GF(2^s)")
        return int(self.exp[self.order - 1 - self.log[a]])

    def pow_alpha(self, k: int) -> int:
        """alpha^k for the fixed primitive element alpha (k may be negative)."""
        return int(self.exp[k % (self.order - 1)])

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k > 0 else 1
        return int(self.exp[(self.log[a] * k) % (self.order - 1)])

    def mul_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product of two arrays of field elements."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp[self.log[a] + self.log[b]]
        return np.where((a == 0) | (b == 0), 0, out)


@functools.lru_cache(maxsize=None)
def get_field(s: int) -> GF:
    """Shared GF(2^s) instance (tables are built once per symbol size)."""
    return GF(s)
