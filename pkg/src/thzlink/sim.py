"""Discrete-time link simulation.

Every update interval the transmitter encodes a batch of fresh generations
under the active configuration, pushes them through the binary symmetric
channel at the current distance, measures the pre-decode bit error rate,
decodes at the receiver, and reports the measurement to the controller. A
configuration returned by the controller takes effect at the start of the
next interval, never retroactively. One metrics row is emitted per dwell
segment; every interval additionally appends a row to the event log.
"""

import math
from dataclasses import dataclass

import numpy as np

from .config import RunSpec
from .control import (AdaptiveController, BerMessage, EpsilonPolicy, LinkConfig,
                      SCHEME_RS, initial_link_config)
from .mdpc import MdpcCodec
from .modem import BerTable, sample_flip_mask, symbol_error_prob, transmit
from .rs import ReedSolomonCodec, bits_to_symbols, symbols_to_bits

DISTANCE_GRID_M = 0.5 + 0.5 * np.arange(40)  # 0.5 .. 20.0 m
DWELL_CHOICES_S = (180.0, 240.0, 300.0, 360.0, 420.0)
WALK_SPEED_MPS = 1.0


@dataclass(frozen=True)
class TracePhase:
    kind: str  # "dwell" | "walk"
    t0: float
    t1: float
    d0: float
    d1: float

    def distance_at(self, now: float) -> float:
        if self.kind == "dwell":
            return self.d0
        frac = (now - self.t0) / (self.t1 - self.t0)
        return self.d0 + (self.d1 - self.d0) * frac


@dataclass(frozen=True)
class MobilityTrace:
    phases: tuple

    @property
    def duration_s(self) -> float:
        return self.phases[-1].t1

    def phase_index_at(self, now: float, start: int = 0) -> int:
        i = start
        while i < len(self.phases) - 1 and now >= self.phases[i].t1:
            i += 1
        return i

    def distance_at(self, now: float) -> float:
        return self.phases[self.phase_index_at(now)].distance_at(now)

    def dwell_segments(self) -> list:
        return [p for p in self.phases if p.kind == "dwell"]


def generate_trace(seed: int, duration_s: float,
                   grid=DISTANCE_GRID_M,
                   dwell_choices=DWELL_CHOICES_S,
                   walk_speed_mps: float = WALK_SPEED_MPS) -> MobilityTrace:
    """Alternating dwell/walk trace over the distance grid, 1 m/s walks."""
    if duration_s <= 0:
        raise ValueError("duration must be positive")
    rng = np.random.default_rng(seed)
    grid = np.asarray(grid, dtype=float)
    phases = []
    t = 0.0
    pos = float(rng.choice(grid))
    while t < duration_s:
        dwell = float(rng.choice(dwell_choices))
        phases.append(TracePhase("dwell", t, t + dwell, pos, pos))
        t += dwell
        if t >= duration_s:
            break
        nxt = pos
        while nxt == pos:
            nxt = float(rng.choice(grid))
        walk = abs(nxt - pos) / walk_speed_mps
        phases.append(TracePhase("walk", t, t + walk, pos, nxt))
        t += walk
        pos = nxt
    return MobilityTrace(tuple(phases))


@dataclass
class MetricsRecord:
    """Per-dwell summary row; the configuration is the one active at dwell end."""

    time_s: float
    distance_m: float
    scheme: str
    modulation: str
    k_bits: int
    r_bits: int
    code_rate: float
    overhead: float
    th_theoretical_gbps: float
    p_re_empirical: float
    generations_sent: int
    generations_error_free: int
    generations_corrected: int
    generations_failed: int

    CSV_FIELDS = ("time_s", "distance_m", "scheme", "modulation", "k_bits",
                  "r_bits", "code_rate", "overhead", "th_theoretical_gbps",
                  "p_re_empirical", "generations_sent", "generations_error_free",
                  "generations_corrected", "generations_failed")

    def to_csv_row(self) -> str:
        parts = []
        for name in self.CSV_FIELDS:
            value = getattr(self, name)
            parts.append(repr(value) if isinstance(value, float) else str(value))
        return ",".join(parts)


def write_metrics_csv(path, records) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(MetricsRecord.CSV_FIELDS) + "\n")
        for rec in records:
            fh.write(rec.to_csv_row() + "\n")


@dataclass
class IntervalStats:
    ber_m: float
    sent: int
    error_free: int
    corrected: int
    failed: int
    wrong_data_bits: int
    data_bits: int


class _DwellAccumulator:
    def __init__(self, t0: float, distance: float):
        self.t0 = t0
        self.distance = distance
        self.sent = 0
        self.error_free = 0
        self.corrected = 0
        self.failed = 0
        self.wrong_bits = 0
        self.data_bits = 0

    def add(self, stats: IntervalStats) -> None:
        self.sent += stats.sent
        self.error_free += stats.error_free
        self.corrected += stats.corrected
        self.failed += stats.failed
        self.wrong_bits += stats.wrong_data_bits
        self.data_bits += stats.data_bits

    def to_record(self, config: LinkConfig) -> MetricsRecord:
        p_re = self.wrong_bits / self.data_bits if self.data_bits else 0.0
        return MetricsRecord(
            time_s=self.t0,
            distance_m=self.distance,
            scheme=config.scheme,
            modulation=config.modulation.label,
            k_bits=config.k_bits,
            r_bits=config.r_bits,
            code_rate=config.code_rate,
            overhead=config.overhead,
            th_theoretical_gbps=config.throughput_gbps,
            p_re_empirical=p_re,
            generations_sent=self.sent,
            generations_error_free=self.error_free,
            generations_corrected=self.corrected,
            generations_failed=self.failed,
        )


class LinkSimulation:
    """One deterministic run: trace, data plane, controller, metrics."""

    def __init__(self, spec: RunSpec, table: BerTable,
                 trace: MobilityTrace | None = None):
        self.spec = spec
        self.table = table
        self.trace = trace or generate_trace(spec.seed, spec.duration_s)
        self.rng_data = np.random.default_rng([spec.seed, 1])
        self.rng_channel = np.random.default_rng([spec.seed, 2])
        self.controller = AdaptiveController(
            table,
            policy=EpsilonPolicy(dict(spec.epsilon)),
            rates=spec.rate_gbps,
            initial_config=initial_link_config(spec.rate_gbps),
            buffer_size=spec.buffer_size,
            params=spec.optimizer_params(),
        )
        self.active_config = self.controller.current_config
        self._pending: LinkConfig | None = None
        self._codecs: dict = {}
        # One (time, active config label, controller action) tuple per
        # interval; cheap, and lets tests check actuation timing.
        self.interval_log: list[tuple[float, str, str]] = []

    def _codec_for(self, config: LinkConfig):
        key = (config.scheme, config.k_bits, config.r_bits, config.s,
               config.m, config.n)
        codec = self._codecs.get(key)
        if codec is None:
            if config.scheme == SCHEME_RS:
                codec = ReedSolomonCodec(config.s, config.r_bits // config.s)
            else:
                codec = MdpcCodec(config.m, config.n,
                                  max_iterations=self.spec.mdpc_max_iterations)
            self._codecs[key] = codec
        return codec

    def _transmit_interval(self, distance_m: float) -> IntervalStats:
        config = self.active_config
        p_e = self.table.lookup(distance_m, config.modulation)
        batch = self.spec.generations_per_interval
        k = config.k_bits
        n_bits = k + config.r_bits
        flip_mask = sample_flip_mask((batch, n_bits), p_e, self.rng_channel)
        ber_m = p_e if self.spec.ber_estimator == "exact" else float(flip_mask.mean())
        if not flip_mask.any():
            # Nothing flipped this interval: every generation arrives clean.
            return IntervalStats(ber_m, batch, batch, 0, 0, 0, batch * k)

        data = self.rng_data.integers(0, 2, size=(batch, k), dtype=np.uint8)
        codec = self._codec_for(config)
        if config.scheme == SCHEME_RS:
            tx_symbols = codec.encode_batch(data)
            rx_bits = symbols_to_bits(tx_symbols, config.s) ^ flip_mask
            rx_symbols = bits_to_symbols(rx_bits, config.s)
            out_symbols, corrected_counts, ok = codec.decode_symbols_batch(rx_symbols)
            decoded = symbols_to_bits(out_symbols[:, : k // config.s], config.s)
            changed = corrected_counts > 0
        else:
            rx_bits = codec.encode_batch(data) ^ flip_mask
            decoded, _, flips, ok = codec.decode_batch(rx_bits)
            changed = flips > 0

        error_free = int(np.count_nonzero(ok & ~changed))
        corrected = int(np.count_nonzero(ok & changed))
        failed = int(np.count_nonzero(~ok))
        wrong_bits = int(np.count_nonzero(decoded != data))
        return IntervalStats(ber_m, batch, error_free, corrected, failed,
                             wrong_bits, batch * k)

    def run(self, metrics_path=None, events_path=None) -> list:
        spec = self.spec
        dt = spec.update_interval_s
        n_intervals = int(round(spec.duration_s / dt))
        records: list[MetricsRecord] = []
        events = open(events_path, "w") if events_path else None

        def log(now: float, event: str, detail: str) -> None:
            if events is not None:
                events.write(f"{now:g},{event},{detail}\n")

        phase_idx = -1
        dwell: _DwellAccumulator | None = None
        try:
            for i in range(n_intervals):
                now = i * dt
                if self._pending is not None:
                    self.active_config = self._pending
                    self._pending = None
                    log(now, "set_demodulation", self.active_config.modulation.label)
                    log(now, "set_decoding", self.active_config.label())
                new_idx = self.trace.phase_index_at(now, max(phase_idx, 0))
                if new_idx != phase_idx:
                    phase_idx = new_idx
                    phase = self.trace.phases[phase_idx]
                    if dwell is not None:
                        records.append(dwell.to_record(self.active_config))
                        dwell = None
                    if phase.kind == "dwell":
                        dwell = _DwellAccumulator(phase.t0, phase.d0)
                        log(now, "dwell_start", f"d={phase.d0:g}")
                    else:
                        log(now, "walk_start", f"d0={phase.d0:g};d1={phase.d1:g}")
                phase = self.trace.phases[phase_idx]
                distance = phase.distance_at(now)
                stats = self._transmit_interval(distance)
                if dwell is not None:
                    dwell.add(stats)
                action = self.controller.on_ber_update(BerMessage(stats.ber_m, now))
                self.interval_log.append((now, self.active_config.describe(),
                                          action.kind))
                if action.kind == "config":
                    self._pending = action.config
                    log(now, "config",
                        f"{action.config.describe()};ber_m={stats.ber_m!r}")
                else:
                    log(now, action.kind, f"ber_m={stats.ber_m!r};d={distance:g}")
            if dwell is not None:
                records.append(dwell.to_record(self.active_config))
        finally:
            if events is not None:
                events.close()
        if metrics_path is not None:
            write_metrics_csv(metrics_path, records)
        return records


def run_simulation(spec: RunSpec, table: BerTable | None = None) -> list:
    """Load the table if needed, run the full scenario, write both outputs."""
    if table is None:
        table = BerTable.from_csv(spec.table_path)
    sim = LinkSimulation(spec, table)
    return sim.run(metrics_path=spec.metrics_path, events_path=spec.events_path)


# -- fault-tolerance experiment --------------------------------------------


@dataclass
class ResidualStats:
    """Outcome of a fixed-configuration bulk transmission experiment."""

    generations: int
    t_budget: int
    within_budget_failures: int
    exceed_injected: int
    data_failures: int
    empirical_exceed_rate: float
    theoretical_tail: float

    @property
    def tail_sigma(self) -> float:
        p = self.theoretical_tail
        return math.sqrt(p * (1.0 - p) / self.generations)


def binomial_tail_above(n: int, p: float, t: int) -> float:
    """P[X > t] for X ~ Binomial(n, p)."""
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0 if t < n else 0.0
    acc = 0.0
    for i in range(t + 1):
        acc += math.comb(n, i) * (p ** i) * ((1.0 - p) ** (n - i))
    return max(0.0, 1.0 - acc)


def residual_error_experiment(config: LinkConfig, p_e: float, generations: int,
                              seed: int, batch_size: int = 2000,
                              mdpc_max_iterations: int = 10) -> ResidualStats:
    """Transmit many generations at one fixed configuration and p_e.

    Counts, per generation, the injected error units (symbols for RS, bits
    for MDPC), whether the decode returned the original data, and compares
    the exceed rate against the binomial tail for the unit error process.
    """
    rng_data = np.random.default_rng([seed, 1])
    rng_channel = np.random.default_rng([seed, 2])
    k = config.k_bits
    if config.scheme == SCHEME_RS:
        codec = ReedSolomonCodec(config.s, config.r_bits // config.s)
        t_budget = codec.t
        n_units = (k + config.r_bits) // config.s
        unit_p = symbol_error_prob(p_e, config.s)
    else:
        codec = MdpcCodec(config.m, config.n, max_iterations=mdpc_max_iterations)
        t_budget = 2 ** (config.n - 1) - 1
        n_units = (config.m + 1) ** config.n
        unit_p = p_e

    within_failures = 0
    exceed = 0
    failures = 0
    done = 0
    while done < generations:
        batch = min(batch_size, generations - done)
        data = rng_data.integers(0, 2, size=(batch, k), dtype=np.uint8)
        if config.scheme == SCHEME_RS:
            tx_symbols = codec.encode_batch(data)
            tx_bits = symbols_to_bits(tx_symbols, config.s)
            rx_bits = transmit(tx_bits, p_e, rng_channel)
            rx_symbols = bits_to_symbols(rx_bits, config.s)
            injected = np.count_nonzero(rx_symbols != tx_symbols, axis=1)
            out_symbols, _, ok = codec.decode_symbols_batch(rx_symbols)
            decoded = symbols_to_bits(out_symbols[:, : k // config.s], config.s)
        else:
            tx_bits = codec.encode_batch(data)
            rx_bits = transmit(tx_bits, p_e, rng_channel)
            injected = np.count_nonzero(rx_bits != tx_bits, axis=1)
            decoded, _, _, ok = codec.decode_batch(rx_bits)
        wrong = np.any(decoded != data, axis=1)
        within_failures += int(np.count_nonzero(wrong & (injected <= t_budget)))
        exceed += int(np.count_nonzero(injected > t_budget))
        failures += int(np.count_nonzero(wrong))
        done += batch

    return ResidualStats(
        generations=generations,
        t_budget=t_budget,
        within_budget_failures=within_failures,
        exceed_injected=exceed,
        data_failures=failures,
        empirical_exceed_rate=exceed / generations,
        theoretical_tail=binomial_tail_above(n_units, unit_p, t_budget),
    )
