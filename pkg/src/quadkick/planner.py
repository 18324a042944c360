"""Operational planning on top of the dynamics: minimal pulse counts,
timing-jitter sensitivity, and parameter-grid sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import NamedTuple

from .dissipation import decoherence_term, dissipate
from .errors import ParameterError
from .kicks import (
    Dissipate,
    Free,
    Kick,
    PhysicalParams,
    PulseSchedule,
    effective_stiffness,
    free_matrix,
    kick_matrix,
    optimal_kick_duration,
    quarter_period,
    two_pulse_variance,
)
from .state import GaussianState, propagate, quadrature_variances, thermal_state

_PARAM_FIELDS = tuple(f.name for f in fields(PhysicalParams))
OBSERVABLES = ("var_x", "var_p", "pulses_needed", "decoherence_term")


@dataclass(frozen=True)
class PlanResult:
    """Outcome of a pulse-count search."""

    pulses: int
    schedule: PulseSchedule
    final_state: GaussianState
    history: tuple[tuple[float, float, float], ...]  # (var_p, var_x, cross) per state
    target_met: bool

    def __post_init__(self):
        if self.pulses < 0:
            raise ParameterError("pulse count cannot be negative")
        if len(self.history) != len(self.schedule.segments) + 1:
            raise ParameterError("history must hold one entry per segment plus the initial state")


def min_pulses(
    params: PhysicalParams,
    threshold: float = 0.5,
    include_dissipation: bool = False,
    max_pulses: int = 64,
    occupancy: float | None = None,
) -> PlanResult:
    """Smallest number of pulses driving var_x strictly below ``threshold``.

    Builds the canonical protocol: optimal-duration kicks separated by
    quarter-period free evolutions (each followed by a same-length thermal
    contact when ``include_dissipation``).  ``occupancy`` overrides the
    initial/bath occupancy otherwise derived from the params' temperature.
    Exhausting ``max_pulses`` is reported through ``target_met``, not an
    error.
    """
    if threshold <= 0.0:
        raise ParameterError(f"threshold must be positive, got {threshold!r}")
    if max_pulses < 0:
        raise ParameterError(f"max_pulses must be non-negative, got {max_pulses!r}")
    n_bar = params.occupancy() if occupancy is None else occupancy
    g_tilde = effective_stiffness(params.g, params.n_p, params.omega_m)
    t_kick = optimal_kick_duration(g_tilde, params.omega_m)
    tau = quarter_period(params.omega_m)
    kick = kick_matrix(g_tilde, params.omega_m, t_kick)
    rotate = free_matrix(params.omega_m, tau)

    state = thermal_state(n_bar)
    segments: list = []
    history = [quadrature_variances(state)]

    def push(segment, new_state):
        segments.append(segment)
        history.append(quadrature_variances(new_state))
        return new_state

    pulses = 0
    met = state.var_x < threshold
    while not met and pulses < max_pulses:
        if pulses > 0:
            state = push(Free(tau), propagate(state, rotate))
            if include_dissipation:
                state = push(Dissipate(tau), dissipate(state, params.gamma, tau, n_bar))
        state = push(Kick(t_kick), propagate(state, kick))
        pulses += 1
        met = state.var_x < threshold
    return PlanResult(
        pulses=pulses,
        schedule=PulseSchedule(tuple(segments), label=f"canonical-{pulses}-pulse"),
        final_state=state,
        history=tuple(history),
        target_met=met,
    )


def jitter_sensitivity(
    params: PhysicalParams, n_bar: float, delta_tau_values
) -> list[tuple[float, float, float]]:
    """Two-pulse variances at free times offset from the quarter period.

    Returns rows (delta_tau, var_x, var_p) in the input order.
    """
    g_tilde = effective_stiffness(params.g, params.n_p, params.omega_m)
    tau0 = quarter_period(params.omega_m)
    rows = []
    for dtau in delta_tau_values:
        if not math.isfinite(dtau):
            raise ParameterError(f"delta_tau values must be finite, got {dtau!r}")
        var_p, var_x = two_pulse_variance(tau0 + dtau, g_tilde, params.omega_m, n_bar)
        rows.append((dtau, var_x, var_p))
    return rows


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter: a PhysicalParams field name or "delta_tau"."""

    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if self.name not in _PARAM_FIELDS and self.name != "delta_tau":
            raise ParameterError(f"unknown sweep parameter {self.name!r}")
        if not self.values:
            raise ParameterError(f"axis {self.name}: value list is empty")
        for v in self.values:
            if not math.isfinite(v):
                raise ParameterError(f"axis {self.name}: value {v!r} is not finite")


@dataclass(frozen=True)
class SweepSpec:
    """Up to two axes, a base parameter set, and an observable selector."""

    axes: tuple[SweepAxis, ...]
    base: PhysicalParams
    observable: str = "var_x"
    include_dissipation: bool = False
    threshold: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        if not 1 <= len(self.axes) <= 2:
            raise ParameterError("sweep needs one or two axes")
        if len({a.name for a in self.axes}) != len(self.axes):
            raise ParameterError("sweep axes must be distinct")
        if self.observable not in OBSERVABLES:
            raise ParameterError(
                f"unknown observable {self.observable!r}; choose from {OBSERVABLES}"
            )


class SweepCell(NamedTuple):
    """One grid cell: axis coordinates plus the observable value or an error."""

    coords: tuple[tuple[str, float], ...]
    value: float | None
    error: str | None


def _evaluate_cell(spec: SweepSpec, coords: tuple[tuple[str, float], ...]) -> float:
    overrides = {name: v for name, v in coords if name != "delta_tau"}
    dtau = dict(coords).get("delta_tau", 0.0)
    params = replace(spec.base, **overrides)
    if spec.observable == "pulses_needed":
        return float(min_pulses(params, spec.threshold, spec.include_dissipation).pulses)
    if spec.observable == "decoherence_term":
        tau_wait = math.pi / params.omega_m
        return decoherence_term(params.gamma, tau_wait, params.occupancy())
    g_tilde = effective_stiffness(params.g, params.n_p, params.omega_m)
    tau = quarter_period(params.omega_m) + dtau
    var_p, var_x = two_pulse_variance(tau, g_tilde, params.omega_m, params.occupancy())
    return var_x if spec.observable == "var_x" else var_p


def sweep(spec: SweepSpec) -> list[SweepCell]:
    """Evaluate the observable over the grid, axis-1 major.

    A cell whose substituted parameters are invalid records the error
    message in place of a value; the sweep itself never aborts.
    """
    grids = [[(axis.name, v) for v in axis.values] for axis in spec.axes]
    if len(grids) == 1:
        points = [(c,) for c in grids[0]]
    else:
        points = [(c1, c2) for c1 in grids[0] for c2 in grids[1]]
    cells = []
    for coords in points:
        try:
            value = _evaluate_cell(spec, coords)
        except ParameterError as exc:
            cells.append(SweepCell(coords=coords, value=None, error=str(exc)))
        else:
            cells.append(SweepCell(coords=coords, value=value, error=None))
    return cells
