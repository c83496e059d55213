"""Experiment configuration and its line-based ``key = value`` file format.

Blank lines and lines starting with ``#`` are ignored. List values are
comma-separated. Example::

    corpus_dir = data/corpus
    output_dir = results
    methods = janssen_tf_raw, janssen_tf_context, gapwise_janssen
    gap_lengths = 1, 2, 3, 4, 5, 6
    seed = 2024
    ar_order = 512
"""

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path

from .baseline import default_context
from .exceptions import InvalidParameterError
from .metrics import METHODS
from .solver import AdmmConfig
from .stft import StftParams

__all__ = ["ExperimentConfig", "parse_config_text", "load_config", "apply_overrides", "config_to_text"]


@dataclass(frozen=True)
class ExperimentConfig:
    corpus_dir: str = "."
    output_dir: str = "results"
    methods: tuple = METHODS
    gap_lengths: tuple = (1, 2, 3, 4, 5, 6)
    n_gaps: int = 5
    seed: int = 0
    margin_columns: int | None = None
    separation_columns: int | None = None
    # solver
    rho: float = 1.0
    inner_iters: int = 20
    outer_iters: int = 10
    ar_order: int = 512
    # time-domain baseline
    baseline_order: int = 512
    baseline_iters: int = 10
    baseline_context: int | None = None
    # transform
    win_len: int = 2048
    hop: int = 512
    n_channels: int = 2048
    frame_offset: int = 0
    # harness
    alpha: float = 0.05
    n_resamples: int = 10000
    workers: int = 1
    record_runtime: bool = False
    save_reconstructions: bool = True

    def __post_init__(self):
        if not self.methods:
            raise InvalidParameterError("at least one method is required")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise InvalidParameterError(f"unknown methods {sorted(unknown)}; choose from {METHODS}")
        if not self.gap_lengths:
            raise InvalidParameterError("at least one gap length is required")
        if any(g < 1 for g in self.gap_lengths):
            raise InvalidParameterError("gap lengths must be positive")
        if self.n_gaps < 0 or self.workers < 1:
            raise InvalidParameterError("n_gaps must be >= 0 and workers >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidParameterError("alpha must lie in (0, 1)")
        # constructs and validates the nested configurations
        self.stft_params()
        self.admm_config()
        if self.baseline_order < 1 or self.baseline_iters < 1:
            raise InvalidParameterError("baseline order and iterations must be positive")

    def stft_params(self):
        return StftParams(
            win_len=self.win_len, hop=self.hop, n_channels=self.n_channels,
            frame_offset=self.frame_offset,
        )

    def admm_config(self):
        return AdmmConfig(
            rho=self.rho, inner_iters=self.inner_iters,
            outer_iters=self.outer_iters, ar_order=self.ar_order,
        )

    @property
    def margin(self):
        if self.margin_columns is not None:
            return self.margin_columns
        return self.win_len // self.hop

    @property
    def separation(self):
        if self.separation_columns is not None:
            return self.separation_columns
        return 2 * self.win_len // self.hop

    @property
    def context(self):
        if self.baseline_context is not None:
            return self.baseline_context
        return default_context(self.baseline_order)


_FIELDS = {f.name: f for f in fields(ExperimentConfig)}
_LIST_OF = {"methods": str, "gap_lengths": int}
_OPTIONAL_INT = {"margin_columns", "separation_columns", "baseline_context"}
_BOOL = {"record_runtime", "save_reconstructions"}
_FLOAT = {"rho", "alpha"}
_STR = {"corpus_dir", "output_dir"}


def _convert(key, raw):
    raw = raw.strip()
    try:
        if key in _LIST_OF:
            return tuple(_LIST_OF[key](v.strip()) for v in raw.split(",") if v.strip())
        if key in _BOOL:
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if key in _OPTIONAL_INT:
            return None if raw.lower() in ("", "none", "auto") else int(raw)
        if key in _FLOAT:
            return float(raw)
        if key in _STR:
            return raw
        return int(raw)
    except ValueError:
        raise InvalidParameterError(f"invalid value for {key}: {raw!r}") from None


def parse_config_text(text, base=None):
    """Parse ``key = value`` lines into a dict of converted values."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise InvalidParameterError(f"line {lineno}: expected 'key = value'")
        if key not in _FIELDS:
            raise InvalidParameterError(f"line {lineno}: unknown key {key!r}")
        values[key] = _convert(key, value)
    if base is not None:
        for key in ("corpus_dir", "output_dir"):
            if key in values and not Path(values[key]).is_absolute():
                values[key] = str(Path(base) / values[key])
    return values


def load_config(path, overrides=()):
    """Read a config file (paths relative to the file) and apply ``key=value`` overrides."""
    text = Path(path).read_text(encoding="utf-8")
    values = parse_config_text(text, base=Path(path).parent)
    values.update(parse_config_text("\n".join(overrides)))
    return ExperimentConfig(**values)


def apply_overrides(config, overrides):
    return dataclasses.replace(config, **parse_config_text("\n".join(overrides)))


def config_to_text(config):
    lines = []
    for f in fields(config):
        value = getattr(config, f.name)
        if isinstance(value, tuple):
            value = ", ".join(str(v) for v in value)
        elif value is None:
            value = "auto"
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"
