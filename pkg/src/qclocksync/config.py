"""Experiment configuration and its flat TOML file format.

The grammar is documented in docs/configuration.md. Every semantic rule raises
ConfigError naming the offending key; type errors from pydantic are converted by
``load_config`` so callers only ever see ConfigError.
"""

from __future__ import annotations

import re
import sys
from collections.abc import Mapping
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import ConfigError
from .estimation.efficiency import linearized_window, offsets_within_window
from .estimation.fringe import EstimatorMode
from .protocol.kinds import ProtocolKind
from .protocol.rounds import DickeSampler
from .protocol.schedule import QuadraturePolicy, ScheduleMode
from .protocol.sequences import DEFAULT_SEQUENCE_CAP, sequence_count
from .quantum.states import DEFAULT_STATEVECTOR_LIMIT

# largest register the statevector path can hold in memory
MAX_STATEVECTOR_LIMIT = 26

_ENUM_FIELDS = ("protocol", "schedule_mode", "estimator_mode", "dicke_sampler")


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True, frozen=True)

    protocol: ProtocolKind = ProtocolKind.GHZ
    n: int = Field(default=4, alias="N")
    omega: float = 1.0
    offsets: list[float] | None = None
    offset_spread: float = 0.3  # omega * Delta_max, radians
    k: int = 12288
    trials: int = 200
    seed: int = 0
    schedule_mode: ScheduleMode = ScheduleMode.ROUND_ROBIN
    estimator_mode: EstimatorMode = EstimatorMode.LINEARIZED
    nominal_time: float = 0.0
    statevector_limit: int = DEFAULT_STATEVECTOR_LIMIT
    sequence_cap: int = DEFAULT_SEQUENCE_CAP
    dicke_sampler: DickeSampler = DickeSampler.AUTO
    standard_party: int | None = None
    stress: bool = False
    threads: int = 1

    # efficiency sweep
    sweep_n: list[int] = Field(default_factory=lambda: [4, 6, 8])
    sweep_q: int | None = None
    sweep_protocols: list[ProtocolKind] = Field(default_factory=lambda: list(ProtocolKind))

    @field_validator(*_ENUM_FIELDS, mode="before")
    @classmethod
    def _upper(cls, v: Any) -> Any:
        return v.upper() if isinstance(v, str) else v

    @field_validator("sweep_protocols", mode="before")
    @classmethod
    def _upper_list(cls, v: Any) -> Any:
        if isinstance(v, list):
            return [p.upper() if isinstance(p, str) else p for p in v]
        return v

    @field_validator("n")
    @classmethod
    def _even_n(cls, v: int) -> int:
        if v < 2 or v % 2:
            raise ConfigError(f"N must be even and at least 2, got {v}", key="N")
        return v

    @field_validator("omega")
    @classmethod
    def _positive_omega(cls, v: float) -> float:
        if not v > 0:
            raise ConfigError(f"omega must be positive, got {v}", key="omega")
        return v

    @field_validator("k", "trials", "threads", "sequence_cap")
    @classmethod
    def _positive_int(cls, v: int, info: Any) -> int:
        if v < 1:
            raise ConfigError(f"{info.field_name} must be positive, got {v}", key=info.field_name)
        return v

    @field_validator("offset_spread")
    @classmethod
    def _non_negative_spread(cls, v: float) -> float:
        if v < 0:
            raise ConfigError(f"offset_spread must be non-negative, got {v}", key="offset_spread")
        return v

    @field_validator("seed")
    @classmethod
    def _u64_seed(cls, v: int) -> int:
        if not 0 <= v < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {v}", key="seed")
        return v

    @field_validator("statevector_limit")
    @classmethod
    def _limit_range(cls, v: int) -> int:
        if not 2 <= v <= MAX_STATEVECTOR_LIMIT:
            raise ConfigError(
                f"statevector_limit must lie in [2, {MAX_STATEVECTOR_LIMIT}], got {v}",
                key="statevector_limit",
            )
        return v

    @field_validator("sweep_n")
    @classmethod
    def _sweep_n(cls, v: list[int]) -> list[int]:
        if not v:
            raise ConfigError("sweep_n must list at least one party count", key="sweep_n")
        odd = [n for n in v if n < 2 or n % 2]
        if odd:
            raise ConfigError(f"sweep_n entries must be even and at least 2, got {odd}", key="sweep_n")
        return v

    @field_validator("sweep_q")
    @classmethod
    def _sweep_q(cls, v: int | None) -> int | None:
        if v is not None and v < 1:
            raise ConfigError(f"sweep_q must be positive, got {v}", key="sweep_q")
        return v

    @model_validator(mode="after")
    def _check_consistency(self) -> ExperimentConfig:
        if self.protocol is ProtocolKind.GHZ and sequence_count(self.n) > self.sequence_cap:
            raise ConfigError(
                f"N={self.n} has {sequence_count(self.n)} distribution sequences, above "
                f"sequence_cap={self.sequence_cap}; lower N or raise sequence_cap",
                key="sequence_cap",
            )
        if self.schedule_mode is ScheduleMode.ROUND_ROBIN and self.k % self.round_robin_multiple:
            raise ConfigError(
                f"ROUND_ROBIN needs k to be a multiple of {self.round_robin_multiple}, got k={self.k}",
                key="k",
            )
        if self.offsets is not None and len(self.offsets) != self.n:
            raise ConfigError(
                f"offsets lists {len(self.offsets)} values but N={self.n}", key="offsets"
            )
        if self.standard_party is not None and not 0 <= self.standard_party < self.n:
            raise ConfigError(
                f"standard_party must name a party in 0..{self.n - 1}", key="standard_party"
            )
        if not self.stress:
            self._check_window()
        return self

    def _check_window(self) -> None:
        if self.offsets is not None:
            if not offsets_within_window(
                self.protocol, self.omega, self.offsets, self.estimator_mode
            ):
                raise ConfigError(
                    f"offsets leave the unambiguous {self.estimator_mode.value} window; "
                    "shrink them or set stress = true",
                    key="offsets",
                )
            return
        window = linearized_window(self.protocol, self.n, self.estimator_mode)
        if self.offset_spread >= window:
            raise ConfigError(
                f"offset_spread={self.offset_spread} must stay below {window:.6g} for "
                f"{self.protocol.value} N={self.n} with {self.estimator_mode.value}; "
                "shrink it or set stress = true",
                key="offset_spread",
            )

    @property
    def quadrature_policy(self) -> QuadraturePolicy:
        if self.estimator_mode is EstimatorMode.LINEARIZED:
            return QuadraturePolicy.SINE_ONLY
        return QuadraturePolicy.ALTERNATE

    @property
    def num_sequences(self) -> int:
        """Fringe labels per quadrature: C(N, N/2) for GHZ, one shared round shape otherwise."""
        return sequence_count(self.n) if self.protocol is ProtocolKind.GHZ else 1

    @property
    def round_robin_multiple(self) -> int:
        return self.num_sequences * len(self.quadrature_policy.quadratures)


def _error_key(err: Mapping[str, Any]) -> str | None:
    loc = err.get("loc") or ()
    return str(loc[0]) if loc else None


def load_config(data: Mapping[str, Any]) -> ExperimentConfig:
    """Validate a mapping of config keys, raising ConfigError on any problem."""
    try:
        return ExperimentConfig.model_validate(dict(data))
    except ValidationError as e:
        first = e.errors()[0]
        key = _error_key(first)
        if first.get("type") == "extra_forbidden":
            raise ConfigError(f"unknown key '{key}'", key=key) from e
        raise ConfigError(f"invalid value for '{key}': {first.get('msg')}", key=key) from e


_LINE_RE = re.compile(r"line (\d+)")


def parse_config(path: Path) -> ExperimentConfig:
    """Read a flat TOML config file. Nested tables are rejected."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        m = _LINE_RE.search(str(e))
        line = int(m.group(1)) if m else None
        where = f"{path}:{line}" if line else str(path)
        raise ConfigError(f"{where}: {e}", line=line) from e
    for key, value in data.items():
        if isinstance(value, dict):
            raise ConfigError(f"tables are not allowed; found [{key}]", key=key)
    return load_config(data)
