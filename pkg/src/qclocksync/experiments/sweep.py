"""Qubit-efficiency sweep: accuracy 1/(omega dt)^2 reached with a fixed qubit budget Q."""

from __future__ import annotations

from collections.abc import Sequence
from math import lcm

import structlog
from pydantic import BaseModel, Field

from ..config import ExperimentConfig, load_config
from ..errors import ConfigError
from ..estimation.adjustment import REPORT_SCHEMA_VERSION
from ..estimation.efficiency import linearized_window, qubit_efficiency
from ..protocol.kinds import ProtocolKind, round_qubit_cost
from ..protocol.schedule import ScheduleMode
from .monte_carlo import monte_carlo

log = structlog.get_logger(__name__)

# default budget is the smallest admissible Q at or above this
DEFAULT_MIN_QUBITS = 50_000


class SweepRow(BaseModel):
    protocol: ProtocolKind
    n: int
    q: int
    k: int
    offset_spread: float
    empirical_accuracy: float
    analytic_accuracy: float
    ratio: float


class SweepTable(BaseModel):
    schema_version: int = REPORT_SCHEMA_VERSION
    q: int
    trials: int
    seed: int
    rows: list[SweepRow] = Field(default_factory=list)

    def row(self, protocol: ProtocolKind, n: int) -> SweepRow:
        for r in self.rows:
            if r.protocol is protocol and r.n == n:
                return r
        raise KeyError((protocol, n))


def _row_config(base: ExperimentConfig, protocol: ProtocolKind, n: int, k: int) -> ExperimentConfig:
    data = base.model_dump()
    data.update(protocol=protocol, n=n, k=k, offsets=None, standard_party=None)
    # keep every fringe well inside the linear window at each N
    window = linearized_window(protocol, n, base.estimator_mode)
    data["offset_spread"] = min(base.offset_spread, window / 2)
    return load_config(data)


def qubit_multiple(base: ExperimentConfig, protocol: ProtocolKind, n: int) -> int:
    """Smallest Q step giving whole rounds (and whole ROUND_ROBIN cycles)."""
    cost = round_qubit_cost(protocol, n)
    if base.schedule_mode is not ScheduleMode.ROUND_ROBIN:
        return cost
    candidate = base.model_copy(update={"protocol": protocol, "n": n})
    return cost * candidate.round_robin_multiple


def default_qubit_budget(
    base: ExperimentConfig, n_values: Sequence[int], protocols: Sequence[ProtocolKind]
) -> int:
    step = lcm(*(qubit_multiple(base, p, n) for p in protocols for n in n_values))
    return -(-DEFAULT_MIN_QUBITS // step) * step


def check_budget(
    base: ExperimentConfig, q: int, n_values: Sequence[int], protocols: Sequence[ProtocolKind]
) -> None:
    for protocol in protocols:
        for n in n_values:
            step = qubit_multiple(base, protocol, n)
            if q % step:
                lower = q // step * step
                raise ConfigError(
                    f"Q={q} is not usable for {protocol.value} at N={n}: it must be a multiple "
                    f"of {step}; try Q={lower + step}"
                    + (f" or Q={lower}" if lower else ""),
                    key="sweep_q",
                )


def efficiency_sweep(
    n_values: Sequence[int],
    q: int | None,
    protocols: Sequence[ProtocolKind],
    base: ExperimentConfig,
) -> SweepTable:
    """One Monte Carlo run per (protocol, N) at the same qubit budget."""
    if not n_values:
        raise ConfigError("the sweep needs at least one N", key="sweep_n")
    if not protocols:
        raise ConfigError("the sweep needs at least one protocol", key="sweep_protocols")
    budget = default_qubit_budget(base, n_values, protocols) if q is None else q
    check_budget(base, budget, n_values, protocols)

    table = SweepTable(q=budget, trials=base.trials, seed=base.seed)
    for protocol in protocols:
        for n in n_values:
            k = budget // round_qubit_cost(protocol, n)
            config = _row_config(base, protocol, n, k)
            summary = monte_carlo(config)
            empirical = 1.0 / (config.omega * summary.pooled_rms) ** 2
            analytic = qubit_efficiency(protocol, n, budget)
            table.rows.append(
                SweepRow(
                    protocol=protocol,
                    n=n,
                    q=budget,
                    k=k,
                    offset_spread=config.offset_spread,
                    empirical_accuracy=empirical,
                    analytic_accuracy=analytic,
                    ratio=empirical / analytic,
                )
            )
            log.info("sweep_row", protocol=protocol.value, n=n, k=k, ratio=empirical / analytic)
    return table
