"""Systematic Reed-Solomon codec over GF(2^s) with shortened-code support.

A codeword carries K data bits and R redundant bits as (K+R)/s symbols.
The code is shortened from the full length 2^s - 1 by Z zero-pad symbols
that sit in front of the data symbols; they are never transmitted but are
implied (as zeros) during decoding. Decoding runs the staged pipeline:
syndromes, error-locator polynomial (Berlekamp-Massey), error locations
(Chien search), error values (Forney), correction and re-verification.
"""

from dataclasses import dataclass

import numpy as np

from .gf import GF, get_field


def bits_to_symbols(bits: np.ndarray, s: int) -> np.ndarray:
    """Pack a bit array (MSB first within each symbol) into s-bit symbols."""
    bits = np.asarray(bits)
    if bits.shape[-1] % s != 0:
        raise ValueError(f"bit length {bits.shape[-1]} not divisible by s={s}")
    shaped = bits.reshape(bits.shape[:-1] + (bits.shape[-1] // s, s))
    out = np.zeros(shaped.shape[:-1], dtype=np.int64)
    for i in range(s):
        out <<= 1
        out |= shaped[..., i]
    return out


def symbols_to_bits(symbols: np.ndarray, s: int) -> np.ndarray:
    """Unpack s-bit symbols into a bit array (MSB first)."""
    symbols = np.asarray(symbols, dtype=np.int64)
    bits = np.empty(symbols.shape + (s,), dtype=np.uint8)
    for i in range(s):
        bits[..., i] = (symbols >> (s - 1 - i)) & 1
    return bits.reshape(symbols.shape[:-1] + (symbols.shape[-1] * s,))


def _poly_mul(gf: GF, a: list, b: list) -> list:
    """Product of two polynomials given as coefficient lists, highest power first."""
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] ^= gf.mul(ca, cb)
    return out


def generator_poly(gf: GF, r_symbols: int) -> list:
    """g(x) = (x - a^1)(x - a^2)...(x - a^r), coefficients highest power first."""
    g = [1]
    for i in range(1, r_symbols + 1):
        g = _poly_mul(gf, g, [1, gf.pow_alpha(i)])
    return g


@dataclass(frozen=True, eq=False)
class RsCodeword:
    """Transmitted symbols (data first, then parity) plus code geometry."""

    symbols: np.ndarray
    s: int
    k_symbols: int
    r_symbols: int
    zero_pad: int

    @property
    def k_bits(self) -> int:
        return self.k_symbols * self.s

    @property
    def r_bits(self) -> int:
        return self.r_symbols * self.s

    def to_bits(self) -> np.ndarray:
        return symbols_to_bits(self.symbols, self.s)

    def with_symbols(self, symbols: np.ndarray) -> "RsCodeword":
        return RsCodeword(np.asarray(symbols, dtype=np.int64), self.s,
                          self.k_symbols, self.r_symbols, self.zero_pad)

    @classmethod
    def from_bits(cls, bits: np.ndarray, s: int, k_symbols: int,
                  r_symbols: int) -> "RsCodeword":
        symbols = bits_to_symbols(np.asarray(bits), s)
        if symbols.shape[-1] != k_symbols + r_symbols:
            raise ValueError("bit length does not match the configured code")
        zero_pad = (1 << s) - 1 - (k_symbols + r_symbols)
        return cls(symbols, s, k_symbols, r_symbols, zero_pad)


@dataclass(frozen=True, eq=False)
class RsDecodeResult:
    data: np.ndarray
    corrected: int
    ok: bool

    @property
    def status(self) -> str:
        if not self.ok:
            return "uncorrectable"
        return "error-free" if self.corrected == 0 else "corrected"


class ReedSolomonCodec:
    """Encoder/decoder for a fixed symbol size and parity budget.

    Instances precompute the generator polynomial and are stateless after
    construction, so one codec can serve any number of threads.
    """

    def __init__(self, s: int, r_symbols: int):
        if r_symbols < 1:
            raise ValueError("need at least one parity symbol")
        self.gf = get_field(s)
        self.s = s
        self.r_symbols = r_symbols
        self.t = r_symbols // 2
        if r_symbols >= self.gf.order - 1:
            raise ValueError("parity cannot fill the whole codeword")
        self._gen = generator_poly(self.gf, r_symbols)
        # Per-k caches of the syndrome exponent and parity generator matrices.
        self._syndrome_logs: dict[int, np.ndarray] = {}
        self._parity_logs: dict[int, np.ndarray] = {}

    # -- encoding ---------------------------------------------------------

    def _check_k(self, k_bits: int) -> int:
        if k_bits <= 0 or k_bits % self.s != 0:
            raise ValueError(f"data length {k_bits} is not a positive multiple of s={self.s}")
        k_symbols = k_bits // self.s
        if k_symbols + self.r_symbols > self.gf.order - 1:
            raise ValueError(
                f"{k_symbols}+{self.r_symbols} symbols exceed the maximum "
                f"codeword length {self.gf.order - 1} for s={self.s}")
        return k_symbols

    def encode(self, data_bits: np.ndarray) -> RsCodeword:
        """Systematic encode: the transmitted prefix is the data itself."""
        data_bits = np.asarray(data_bits)
        k_symbols = self._check_k(data_bits.shape[-1])
        data_syms = bits_to_symbols(data_bits, self.s)
        parity = self._parity(data_syms[None, :])[0]
        symbols = np.concatenate([data_syms, parity])
        zero_pad = self.gf.order - 1 - (k_symbols + self.r_symbols)
        return RsCodeword(symbols, self.s, k_symbols, self.r_symbols, zero_pad)

    def encode_batch(self, data_bits: np.ndarray) -> np.ndarray:
        """Encode a (B, K) bit block; returns (B, K/s + r) transmitted symbols."""
        data_bits = np.asarray(data_bits)
        self._check_k(data_bits.shape[-1])
        data_syms = bits_to_symbols(data_bits, self.s)
        parity = self._parity(data_syms)
        return np.concatenate([data_syms, parity], axis=-1)

    def _parity_log_matrix(self, k_symbols: int) -> np.ndarray:
        """log of the parity generator: row j holds log(x^(r + k-1-j) mod g).

        Parity of a message is the GF-linear combination of these rows with
        the data symbols as weights; -1 marks zero entries. Leading zero-pad
        symbols of the shortened code contribute nothing, so the matrix only
        covers the real data positions.
        """
        mat = self._parity_logs.get(k_symbols)
        if mat is not None:
            return mat
        gf = self.gf
        r = self.r_symbols
        # Ascending coefficients of x^r mod g (g is monic of degree r).
        x_r = [int(self._gen[r - j]) for j in range(r)]
        rows = np.empty((k_symbols, r), dtype=np.int64)
        rem = list(x_r)
        for j in range(k_symbols):
            # Data position k-1-j carries x-power r+j; store descending
            # (parity symbol 0 is the highest remaining power, r-1).
            rows[k_symbols - 1 - j] = rem[::-1]
            top = rem[r - 1]
            rem = [0] + rem[: r - 1]
            if top:
                rem = [c ^ gf.mul(top, g) for c, g in zip(rem, x_r)]
        mat = np.where(rows == 0, -1, gf.log[rows])
        self._parity_logs[k_symbols] = mat
        return mat

    def _parity(self, data_syms: np.ndarray) -> np.ndarray:
        """Parity symbols for each row of a (B, k) data-symbol block."""
        gf = self.gf
        mat = self._parity_log_matrix(data_syms.shape[-1])
        logs = gf.log[data_syms]
        parity = np.zeros((data_syms.shape[0], self.r_symbols), dtype=np.int64)
        for col in range(self.r_symbols):
            glog = mat[:, col]
            terms = gf.exp[logs + glog]
            terms = np.where((data_syms == 0) | (glog < 0), 0, terms)
            parity[:, col] = np.bitwise_xor.reduce(terms, axis=-1)
        return parity

    # -- decoding ---------------------------------------------------------

    def _syndrome_log_matrix(self, k_symbols: int) -> np.ndarray:
        mat = self._syndrome_logs.get(k_symbols)
        if mat is None:
            qm1 = self.gf.order - 1
            length = k_symbols + self.r_symbols
            powers = np.arange(length - 1, -1, -1, dtype=np.int64)  # x-power per position
            i = np.arange(1, self.r_symbols + 1, dtype=np.int64)
            mat = (i[:, None] * powers[None, :]) % qm1
            self._syndrome_logs[k_symbols] = mat
        return mat

    def syndromes_batch(self, symbols: np.ndarray) -> np.ndarray:
        """Syndromes S_1..S_r for each row of a (B, k+r) symbol block."""
        symbols = np.asarray(symbols, dtype=np.int64)
        mat = self._syndrome_log_matrix(symbols.shape[-1] - self.r_symbols)
        logs = self.gf.log[symbols]
        terms = self.gf.exp[logs[:, None, :] + mat[None, :, :]]
        terms = np.where(symbols[:, None, :] == 0, 0, terms)
        return np.bitwise_xor.reduce(terms, axis=-1)

    def decode(self, word: RsCodeword) -> RsDecodeResult:
        """Decode one received codeword, correcting up to r/2 symbol errors."""
        received = np.asarray(word.symbols, dtype=np.int64)
        if received.shape[-1] != word.k_symbols + self.r_symbols:
            raise ValueError("received word length does not match the code")
        syndromes = self.syndromes_batch(received[None, :])[0]
        corrected, n_err, ok = self._correct_from_syndromes(received.copy(), syndromes)
        data_bits = symbols_to_bits(corrected[: word.k_symbols], self.s)
        return RsDecodeResult(data_bits, n_err, ok)

    def _correct_from_syndromes(self, word: np.ndarray,
                                syndromes: np.ndarray) -> tuple[np.ndarray, int, bool]:
        syn = [int(v) for v in syndromes]
        if not any(syn):
            return word, 0, True

        lam = self._berlekamp_massey(syn)
        n_errors = len(lam) - 1
        if n_errors > self.t:
            return word, 0, False

        positions = self._chien_search(lam)
        if len(positions) != n_errors:
            return word, 0, False
        length = word.shape[-1]
        if any(p >= length for p in positions):
            # An error in the zero-pad region is impossible: pads are not sent.
            return word, 0, False

        values = self._forney(syn, lam, positions)
        if any(v == 0 for v in values):
            return word, 0, False
        for pos, val in zip(positions, values):
            word[length - 1 - pos] ^= val

        check = self.syndromes_batch(word[None, :])[0]
        if np.any(check != 0):
            return word, 0, False
        return word, n_errors, True

    def _berlekamp_massey(self, syn: list) -> list:
        """Error-locator polynomial, ascending coefficients, lam[0] == 1."""
        gf = self.gf
        lam = [1]
        prev = [1]
        l = 0
        m = 1
        b = 1
        for n in range(len(syn)):
            d = syn[n]
            for i in range(1, l + 1):
                d ^= gf.mul(lam[i], syn[n - i])
            if d == 0:
                m += 1
                continue
            coef = gf.div(d, b)
            shifted = [0] * m + [gf.mul(coef, c) for c in prev]
            if 2 * l <= n:
                old = lam[:]
                lam = [a ^ b2 for a, b2 in
                       zip(lam + [0] * (len(shifted) - len(lam)),
                           shifted + [0] * (len(lam) - len(shifted)))]
                l = n + 1 - l
                prev = old
                b = d
                m = 1
            else:
                lam = [a ^ b2 for a, b2 in
                       zip(lam + [0] * (len(shifted) - len(lam)),
                           shifted + [0] * (len(lam) - len(shifted)))]
                m += 1
        while len(lam) > 1 and lam[-1] == 0:
            lam.pop()
        return lam

    def _chien_search(self, lam: list) -> list:
        """x-powers i where lam(alpha^-i) == 0, i.e. the error positions."""
        gf = self.gf
        positions = []
        for i in range(gf.order - 1):
            acc = 0
            x = gf.pow_alpha(-i)
            for k in range(len(lam) - 1, -1, -1):
                acc = gf.mul(acc, x) ^ lam[k]
            if acc == 0:
                positions.append(i)
        return positions

    def _forney(self, syn: list, lam: list, positions: list) -> list:
        gf = self.gf
        # omega(x) = S(x) * lam(x) mod x^r, all ascending.
        omega = [0] * self.r_symbols
        for i, sv in enumerate(syn):
            if sv == 0:
                continue
            for j, lv in enumerate(lam):
                if i + j < self.r_symbols and lv != 0:
                    omega[i + j] ^= gf.mul(sv, lv)
        # Formal derivative keeps odd-power terms only (characteristic 2).
        deriv = [lam[k] if k % 2 == 1 else 0 for k in range(1, len(lam))]
        values = []
        for pos in positions:
            x_inv = gf.pow_alpha(-pos)
            num = self._eval_ascending(omega, x_inv)
            den = self._eval_ascending(deriv, x_inv)
            if den == 0:
                values.append(0)
            else:
                values.append(gf.div(num, den))
        return values

    def _eval_ascending(self, poly: list, x: int) -> int:
        acc = 0
        for c in reversed(poly):
            acc = self.gf.mul(acc, x) ^ c
        return acc

    def decode_symbols_batch(self, symbols: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Decode a (B, k+r) symbol block.

        Returns (corrected symbols, per-row corrected count, per-row ok flag).
        Rows with zero syndromes short-circuit; single-error-correcting codes
        (r == 2) use a closed-form vectorized path, everything else falls back
        to the staged scalar decoder per row.
        """
        symbols = np.asarray(symbols, dtype=np.int64)
        batch = symbols.shape[0]
        syn = self.syndromes_batch(symbols)
        out = symbols.copy()
        corrected = np.zeros(batch, dtype=np.int64)
        ok = np.ones(batch, dtype=bool)
        dirty = np.any(syn != 0, axis=1)
        if not np.any(dirty):
            return out, corrected, ok
        idx = np.nonzero(dirty)[0]
        if self.r_symbols == 2:
            self._decode_single_error_rows(out, syn, idx, corrected, ok)
        else:
            for row in idx:
                word, n_err, row_ok = self._correct_from_syndromes(out[row], syn[row])
                out[row] = word
                corrected[row] = n_err
                ok[row] = row_ok
        return out, corrected, ok

    def _decode_single_error_rows(self, out: np.ndarray, syn: np.ndarray,
                                  idx: np.ndarray, corrected: np.ndarray,
                                  ok: np.ndarray) -> None:
        """Closed form for r == 2: locator a^i = S2/S1, magnitude S1^2/S2."""
        gf = self.gf
        qm1 = gf.order - 1
        length = out.shape[-1]
        s1 = syn[idx, 0]
        s2 = syn[idx, 1]
        solvable = (s1 != 0) & (s2 != 0)
        pos = np.where(solvable, (gf.log[s2] - gf.log[s1]) % qm1, 0)
        in_range = solvable & (pos < length)
        value = gf.exp[(2 * gf.log[np.where(s1 == 0, 1, s1)]
                        - gf.log[np.where(s2 == 0, 1, s2)]) % qm1]
        good = idx[in_range]
        out[good, length - 1 - pos[in_range]] ^= value[in_range]
        corrected[good] = 1
        ok[idx[~in_range]] = False


def rs_encode(data_bits: np.ndarray, s: int, r_symbols: int) -> RsCodeword:
    """Encode K data bits into a shortened systematic RS codeword."""
    return ReedSolomonCodec(s, r_symbols).encode(data_bits)


def rs_decode(word: RsCodeword) -> RsDecodeResult:
    """Decode a received codeword; see ReedSolomonCodec.decode."""
    return ReedSolomonCodec(word.s, word.r_symbols).decode(word)
