"""Modulation abstraction, BER lookup table, and binary symmetric channel.

Modulation only affects two things here: the bit error probability read from
the table and the raw data rate. No waveform-level processing is modeled.
"""

import enum
from dataclasses import dataclass

import numpy as np


class Modulation(enum.Enum):
    BPSK = ("BPSK", 1)
    QPSK = ("QPSK", 2)
    PSK8 = ("8PSK", 3)
    QAM16 = ("16QAM", 4)

    def __init__(self, label: str, bits_per_symbol: int):
        self.label = label
        self.bits_per_symbol = bits_per_symbol

    @classmethod
    def from_label(cls, label: str) -> "Modulation":
        for mod in cls:
            if mod.label == label.upper():
                return mod
        raise ValueError(f"unknown modulation {label!r}")


MODULATIONS = tuple(Modulation)

# Raw data rate per modulation, Gbps.
DEFAULT_DATA_RATES_GBPS = {
    Modulation.BPSK: 7.04,
    Modulation.QPSK: 14.08,
    Modulation.PSK8: 21.12,
    Modulation.QAM16: 28.16,
}

CSV_HEADER = "distance_m,modulation,ber"


class BerTable:
    """Bit error probability per (distance, modulation) on a fixed distance grid.

    Immutable after construction; lookups snap to the nearest grid distance
    (ties go to the larger, i.e. worse, distance).
    """

    def __init__(self, distances, values: dict):
        self.distances = np.asarray(distances, dtype=float)
        if self.distances.ndim != 1 or len(self.distances) == 0:
            raise ValueError("distances must be a non-empty 1-D sequence")
        if np.any(np.diff(self.distances) <= 0):
            raise ValueError("distances must be strictly ascending")
        self._values = {}
        for mod in MODULATIONS:
            if mod not in values:
                raise ValueError(f"missing BER column for {mod.label}")
            col = np.asarray(values[mod], dtype=float)
            if col.shape != self.distances.shape:
                raise ValueError(f"BER column for {mod.label} has wrong length")
            if np.any((col < 0) | (col > 0.5)):
                raise ValueError(f"BER values for {mod.label} outside [0, 0.5]")
            if np.any(np.diff(col) < 0):
                raise ValueError(f"BER for {mod.label} must be non-decreasing in distance")
            self._values[mod] = col

    def column(self, mod: Modulation) -> np.ndarray:
        return self._values[mod]

    def nearest_index(self, distance: float) -> int:
        d = self.distances
        if distance < d[0] or distance > d[-1]:
            raise ValueError(
                f"distance {distance} m outside table range [{d[0]}, {d[-1]}] m")
        i = int(np.searchsorted(d, distance))
        if i == 0:
            return 0
        if i >= len(d):
            return len(d) - 1
        # Ties snap to the larger distance (the more pessimistic channel).
        return i if (d[i] - distance) <= (distance - d[i - 1]) else i - 1

    def lookup(self, distance: float, mod: Modulation) -> float:
        """p_e at the grid distance nearest to the requested one."""
        return float(self._values[mod][self.nearest_index(distance)])

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(CSV_HEADER + "\n")
            for i, d in enumerate(self.distances):
                for mod in MODULATIONS:
                    fh.write(f"{d:g},{mod.label},{float(self._values[mod][i])!r}\n")

    @classmethod
    def from_csv(cls, path) -> "BerTable":
        rows: dict[Modulation, dict[float, float]] = {mod: {} for mod in MODULATIONS}
        with open(path) as fh:
            header = fh.readline().strip()
            if header != CSV_HEADER:
                raise ValueError(f"unexpected BER table header {header!r}")
            for line_no, line in enumerate(fh, start=2):
                line = line.strip()
                if not line:
                    continue
                parts = line.split(",")
                if len(parts) != 3:
                    raise ValueError(f"{path}:{line_no}: expected 3 columns")
                d, mod, ber = float(parts[0]), Modulation.from_label(parts[1]), float(parts[2])
                rows[mod][d] = ber
        distances = sorted(rows[MODULATIONS[0]])
        for mod in MODULATIONS:
            if sorted(rows[mod]) != distances:
                raise ValueError(f"distance grid for {mod.label} does not match")
        values = {mod: [rows[mod][d] for d in distances] for mod in MODULATIONS}
        return cls(distances, values)


def symbol_error_prob(p_e: float, s: int) -> float:
    """Probability that an s-bit symbol sees at least one bit error."""
    if not 0.0 <= p_e <= 1.0:
        raise ValueError("p_e must be within [0, 1]")
    if s < 1:
        raise ValueError("s must be >= 1")
    return 1.0 - (1.0 - p_e) ** s


# Below this many expected flips per call the channel samples a flip count
# plus positions instead of a dense Bernoulli field (identical distribution).
SPARSE_FLIP_THRESHOLD = 64.0


def sample_flip_mask(shape, p_e: float, rng: np.random.Generator) -> np.ndarray:
    """Bit-flip indicator array for a BSC with crossover probability p_e."""
    size = int(np.prod(shape))
    if p_e <= 0.0:
        return np.zeros(shape, dtype=np.uint8)
    if p_e >= 1.0:
        return np.ones(shape, dtype=np.uint8)
    if p_e * size <= SPARSE_FLIP_THRESHOLD:
        mask = np.zeros(size, dtype=np.uint8)
        count = rng.binomial(size, p_e)
        if count:
            mask[rng.choice(size, size=count, replace=False)] = 1
        return mask.reshape(shape)
    return (rng.random(shape) < p_e).astype(np.uint8)


def transmit(bits: np.ndarray, p_e: float, rng: np.random.Generator) -> np.ndarray:
    """Binary symmetric channel: flip each bit independently with probability p_e.

    Works on arrays of any shape; deterministic for a fixed generator state.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    if p_e <= 0.0:
        return bits.copy()
    if p_e >= 1.0:
        return bits ^ 1
    return bits ^ sample_flip_mask(bits.shape, p_e, rng)


def measure_ber(sent: np.ndarray, received: np.ndarray) -> float:
    """Fraction of differing bits between two equal-length bit sequences."""
    sent = np.asarray(sent)
    received = np.asarray(received)
    if sent.shape != received.shape:
        raise ValueError("sent/received length mismatch")
    if sent.size == 0:
        raise ValueError("cannot measure BER of empty sequences")
    return float(np.count_nonzero(sent != received) / sent.size)


@dataclass
class Channel:
    """A distance-parameterized BSC owned by one simulation context."""

    table: BerTable
    rng: np.random.Generator
    distance_m: float

    def error_prob(self, mod: Modulation) -> float:
        return self.table.lookup(self.distance_m, mod)

    def send(self, bits: np.ndarray, mod: Modulation) -> np.ndarray:
        return transmit(bits, self.error_prob(mod), self.rng)
