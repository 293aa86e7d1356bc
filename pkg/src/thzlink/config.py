"""Run specification: flat key-value config files with strict key checking.

The format is one `key = value` pair per line, `#` comments, and dotted keys
for the per-modulation maps (e.g. ``epsilon.16qam``). Unknown keys are
rejected rather than ignored so a typo cannot silently fall back to a
default. Every value can also be overridden through the environment using
the ``THZLINK_`` prefix (dots become double underscores, case-insensitive),
e.g. ``THZLINK_SEED=9`` or ``THZLINK_EPSILON__16QAM=1e-6``.
"""

import os
from dataclasses import dataclass, field

from .control import DEFAULT_EPSILON, OptimizerParams
from .modem import DEFAULT_DATA_RATES_GBPS, MODULATIONS, Modulation

ENV_PREFIX = "THZLINK_"

BER_ESTIMATORS = ("sampled", "exact")


class SpecError(ValueError):
    """Raised for malformed, unknown, or out-of-range spec entries."""


def _mod_key(mod: Modulation) -> str:
    return mod.label.lower()


@dataclass
class RunSpec:
    """Everything a simulation run needs; defaults match the evaluation setup."""

    table_path: str
    seed: int = 1
    duration_s: float = 6060.0
    update_interval_s: float = 0.5
    buffer_size: int = 4
    epsilon: dict = field(default_factory=lambda: dict(DEFAULT_EPSILON))
    t_mdpc: int = 1
    t_rs: int = 1
    rate_gbps: dict = field(default_factory=lambda: dict(DEFAULT_DATA_RATES_GBPS))
    s_min: int = 3
    s_max: int = 12
    m_max: int = 1024
    mdpc_max_iterations: int = 10
    generations_per_interval: int = 100
    # "exact" feeds the controller the table's p_e at the current distance
    # (a noiseless estimator, matching the movement thresholds' assumption);
    # "sampled" feeds the flip fraction actually measured on the interval's
    # bits, whose sampling noise dwarfs the default epsilon values.
    ber_estimator: str = "exact"
    metrics_path: str = "metrics.csv"
    events_path: str = "events.log"

    def optimizer_params(self) -> OptimizerParams:
        return OptimizerParams(t_mdpc=self.t_mdpc, t_rs=self.t_rs,
                               s_min=self.s_min, s_max=self.s_max,
                               m_max=self.m_max)


_SCALAR_KEYS = {
    "table_path": str,
    "seed": int,
    "duration_s": float,
    "update_interval_s": float,
    "buffer_size": int,
    "t_mdpc": int,
    "t_rs": int,
    "s_min": int,
    "s_max": int,
    "m_max": int,
    "mdpc_max_iterations": int,
    "generations_per_interval": int,
    "ber_estimator": str,
    "metrics_path": str,
    "events_path": str,
}

_MAP_KEYS = {"epsilon": "epsilon", "rate_gbps": "rate_gbps"}


def known_keys() -> list[str]:
    keys = list(_SCALAR_KEYS)
    for prefix in _MAP_KEYS:
        keys.extend(f"{prefix}.{_mod_key(mod)}" for mod in MODULATIONS)
    return keys


def _coerce(key: str, raw: str):
    if key in _SCALAR_KEYS:
        typ = _SCALAR_KEYS[key]
    else:
        typ = float
    try:
        return typ(raw) if typ is not str else raw
    except ValueError as exc:
        raise SpecError(f"invalid value for {key}: {raw!r}") from exc


def parse_pairs(text: str, source: str = "<config>") -> dict:
    """Parse the flat key-value format into a {key: raw string} dict."""
    pairs: dict[str, str] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise SpecError(f"{source}:{line_no}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key in pairs:
            raise SpecError(f"{source}:{line_no}: duplicate key {key}")
        pairs[key] = value
    return pairs


def env_overrides(environ=None) -> dict:
    """Spec overrides taken from THZLINK_* environment variables."""
    environ = os.environ if environ is None else environ
    known = set(known_keys())
    out = {}
    for name, value in environ.items():
        if not name.startswith(ENV_PREFIX):
            continue
        key = name[len(ENV_PREFIX):].lower().replace("__", ".")
        if key not in known:
            raise SpecError(f"unknown key in environment override {name}")
        out[key] = value
    return out


def build_spec(pairs: dict) -> RunSpec:
    """Validate raw key/value pairs and produce a RunSpec."""
    known = set(known_keys())
    for key in pairs:
        if key not in known:
            raise SpecError(f"unknown key: {key}")
    if "table_path" not in pairs or not pairs["table_path"]:
        raise SpecError("missing required key: table_path")

    kwargs = {}
    for key, raw in pairs.items():
        if key in _SCALAR_KEYS:
            kwargs[key] = _coerce(key, raw)
    epsilon = dict(DEFAULT_EPSILON)
    rates = dict(DEFAULT_DATA_RATES_GBPS)
    for key, raw in pairs.items():
        if "." not in key:
            continue
        prefix, _, mod_label = key.partition(".")
        mod = Modulation.from_label(mod_label)
        value = _coerce(key, raw)
        if prefix == "epsilon":
            epsilon[mod] = value
        else:
            rates[mod] = value
    spec = RunSpec(epsilon=epsilon, rate_gbps=rates, **kwargs)
    _validate(spec)
    return spec


def _validate(spec: RunSpec) -> None:
    def bad(key, why):
        raise SpecError(f"invalid {key}: {why}")

    if spec.duration_s <= 0:
        bad("duration_s", "must be positive")
    if spec.update_interval_s <= 0:
        bad("update_interval_s", "must be positive")
    if spec.buffer_size < 1:
        bad("buffer_size", "must be >= 1")
    if spec.t_rs < 1:
        bad("t_rs", "must be >= 1")
    try:
        spec.optimizer_params().mdpc_dims()
    except ValueError as exc:
        bad("t_mdpc", str(exc))
    if not 2 <= spec.s_min <= spec.s_max <= 12:
        bad("s_min/s_max", "need 2 <= s_min <= s_max <= 12")
    if spec.m_max < 2:
        bad("m_max", "must be >= 2")
    if spec.mdpc_max_iterations < 1:
        bad("mdpc_max_iterations", "must be >= 1")
    if spec.generations_per_interval < 1:
        bad("generations_per_interval", "must be >= 1")
    if spec.ber_estimator not in BER_ESTIMATORS:
        bad("ber_estimator", f"must be one of {', '.join(BER_ESTIMATORS)}")
    for mod in MODULATIONS:
        if spec.epsilon[mod] <= 0:
            bad(f"epsilon.{_mod_key(mod)}", "must be positive")
        if spec.rate_gbps[mod] <= 0:
            bad(f"rate_gbps.{_mod_key(mod)}", "must be positive")


def parse_spec(text: str, source: str = "<config>") -> RunSpec:
    return build_spec(parse_pairs(text, source))


def load_spec(path, extra_pairs: dict | None = None, environ=None) -> RunSpec:
    """Load a spec file, then apply environment and explicit overrides."""
    with open(path) as fh:
        pairs = parse_pairs(fh.read(), source=str(path))
    pairs.update(env_overrides(environ))
    if extra_pairs:
        pairs.update(extra_pairs)
    return build_spec(pairs)


def emit_spec(spec: RunSpec) -> str:
    """Serialize a RunSpec back into the flat key-value format."""
    lines = []
    for key in _SCALAR_KEYS:
        lines.append(f"{key} = {getattr(spec, key)}")
    for mod in MODULATIONS:
        lines.append(f"epsilon.{_mod_key(mod)} = {spec.epsilon[mod]!r}")
    for mod in MODULATIONS:
        lines.append(f"rate_gbps.{_mod_key(mod)} = {spec.rate_gbps[mod]!r}")
    return "\n".join(lines) + "\n"
