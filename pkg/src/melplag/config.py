"""Runtime configuration: defaults, JSON config file, and flag overrides.

Precedence is built-in defaults < config file < explicit flags. The
effective values are echoed into every report so runs are reproducible.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from .align import CostParams
from .errors import InvalidParamsError, MissingFileError


@dataclass(frozen=True, slots=True)
class Config:
    l: int = 16
    r: float = 0.5
    k_down: float = 2.0
    c_ins: float = 1.0
    c_del: float = 1.0
    pitch_scale: float = 1.0
    dur_scale: float = 1.0
    normalize_by_length: bool = True
    binary_mismatch: bool = False
    q: float = 1.0
    theta: float = 0.45
    ngram_n: int = 3
    seed: int = 0

    def __post_init__(self) -> None:
        if self.l < 2:
            raise InvalidParamsError(f"l {self.l} < 2")
        if not 0 <= self.r < 1:
            raise InvalidParamsError(f"r {self.r} outside [0, 1)")
        if not 0 < self.q <= 1:
            raise InvalidParamsError(f"q {self.q} outside (0, 1]")
        if self.ngram_n < 1:
            raise InvalidParamsError(f"ngram_n {self.ngram_n} < 1")
        self.cost_params()  # validates the cost fields

    def cost_params(self) -> CostParams:
        return CostParams(
            k_down=self.k_down,
            c_ins=self.c_ins,
            c_del=self.c_del,
            pitch_scale=self.pitch_scale,
            dur_scale=self.dur_scale,
            normalize_by_length=self.normalize_by_length,
            binary_mismatch=self.binary_mismatch,
        )

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


_FIELDS = {f.name: f.type for f in dataclasses.fields(Config)}


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> Config:
    """Merge defaults, an optional JSON config file, and explicit overrides."""
    values: dict = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise MissingFileError(f"config file not found: {path}")
        try:
            loaded = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise InvalidParamsError(f"config file {path}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise InvalidParamsError(f"config file {path}: expected a JSON object")
        values.update(loaded)
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    unknown = sorted(set(values) - set(_FIELDS))
    if unknown:
        raise InvalidParamsError(f"unknown config keys: {', '.join(unknown)}")
    return Config(**values)
