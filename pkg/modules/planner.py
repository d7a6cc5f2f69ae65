"""
Long-horizon forest planning as a linear program.

A scenario fixes the age-class dynamics, the area limit, the carbon floors,
the terminal box and the yield/cost coefficients. `build_lp` turns it into a
LinearProgram over the stage states v(1..T), harvests u(0..T-1) and plantings
w(0..T-1); `solve_plan` solves it and returns a verified trajectory.
"""

import dataclasses
import logging
import numpy as np
import pandas as pd
from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Optional, Tuple

from config import Config
from modules import lp_core
from modules.forest_model import (
    DimensionMismatch, ForestState, HarvestExceedsStock, ManagementAction, TransitionOperator, simulate
)
from modules.lp_core import Constraint, LinearProgram, LpStatus, Relation, SimplexSettings
from utils import performance_monitor

logger = logging.getLogger(__name__)

CONSTRAINT_FAMILIES = ('area', 'carbon', 'stock', 'terminal_lo', 'terminal_hi')

class ScenarioError(ValueError):
    """A scenario parameter violates the model's invariants."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")

class InfeasibleScenario(RuntimeError):
    """No management trajectory satisfies every constraint."""

class UnboundedModel(RuntimeError):
    """The criterion can grow without limit; the scenario is mis-specified."""

class Violation(NamedTuple):
    constraint: str
    stage: int
    residual: float
    age_class: Optional[int] = None

def _vector(values, field: str, size: int, allow_inf: bool = False) -> np.ndarray:
    try:
        array = np.array(values, dtype=float)
    except (TypeError, ValueError):
        raise ScenarioError(field, Config.ERROR_MESSAGES['entry_not_numeric'])
    if array.ndim != 1 or array.size != size:
        got = array.size if array.ndim == 1 else array.shape
        raise ScenarioError(field, Config.ERROR_MESSAGES['length'].format(size, got))
    if np.any(np.isnan(array)) or (not allow_inf and not np.all(np.isfinite(array))):
        raise ScenarioError(field, Config.ERROR_MESSAGES['non_finite'])
    array.setflags(write=False)
    return array

def _nonnegative(array: np.ndarray, field: str) -> np.ndarray:
    if np.any(array < 0):
        raise ScenarioError(field, Config.ERROR_MESSAGES['negative'])
    return array

@dataclass(frozen=True)
class Scenario:
    """All parameters of one planning problem."""

    horizon: int
    n_classes: int
    min_harvest_age: int
    max_planting_age: int
    area_limit: float
    initial_state: ForestState
    carbon_rates: np.ndarray
    carbon_floors: np.ndarray
    timber_yield: np.ndarray
    planting_cost: np.ndarray
    transition: TransitionOperator
    terminal_lo: Optional[np.ndarray] = None
    terminal_hi: Optional[np.ndarray] = None
    criterion: str = Config.DEFAULT_CRITERION

    def __post_init__(self):
        T, L = self.horizon, self.n_classes
        if int(T) != T or T < 1:
            raise ScenarioError('T', f"must be a positive integer, got {T}")
        if int(L) != L or L < 1:
            raise ScenarioError('L', f"must be a positive integer, got {L}")
        l, l0 = self.min_harvest_age, self.max_planting_age
        if int(l) != l or int(l0) != l0 or not 1 <= l0 < l <= L:
            raise ScenarioError('l0', f"must satisfy 1 <= l0 < l <= L, got l0 = {l0}, l = {l}, L = {L}")

        S = float(self.area_limit)
        if np.isnan(S) or S <= 0:
            raise ScenarioError('S', f"must be positive, got {self.area_limit}")

        state = self.initial_state
        if not isinstance(state, ForestState):
            try:
                state = ForestState(_vector(state, 'v0', L))
            except ValueError as e:
                if isinstance(e, ScenarioError):
                    raise
                raise ScenarioError('v0', Config.ERROR_MESSAGES['negative'])
        if state.n_classes != L:
            raise ScenarioError('v0', Config.ERROR_MESSAGES['length'].format(L, state.n_classes))
        if state.total_area > S + Config.FEASIBILITY_TOL:
            raise ScenarioError('v0', f"total area {state.total_area:g} exceeds S = {S:g}")

        carbon_rates = _nonnegative(_vector(self.carbon_rates, 'gamma', L), 'gamma')
        carbon_floors = _nonnegative(_vector(self.carbon_floors, 'Gamma', T), 'Gamma')
        timber_yield = _nonnegative(_vector(self.timber_yield, 'mu', L), 'mu')
        planting_cost = _nonnegative(_vector(self.planting_cost, 'eta', L), 'eta')

        if not isinstance(self.transition, TransitionOperator):
            raise ScenarioError('matrix', "expected a TransitionOperator")
        if self.transition.order != L:
            raise ScenarioError('matrix', f"operator has order {self.transition.order}, expected {L}")

        lo = np.zeros(L) if self.terminal_lo is None else self.terminal_lo
        hi = np.full(L, S) if self.terminal_hi is None else self.terminal_hi
        lo = _vector(lo, 'terminal_lo', L)
        hi = _vector(hi, 'terminal_hi', L, allow_inf=True)
        if np.any(lo > hi):
            i = int(np.argmax(lo > hi)) + 1
            raise ScenarioError('terminal_lo', f"exceeds terminal_hi in age class {i}")

        if self.criterion not in Config.CRITERIA:
            raise ScenarioError('criterion', f"must be one of {', '.join(Config.CRITERIA)}, got {self.criterion!r}")

        for name, value in (('horizon', int(T)), ('n_classes', int(L)), ('min_harvest_age', int(l)),
                            ('max_planting_age', int(l0)), ('area_limit', S), ('initial_state', state),
                            ('carbon_rates', carbon_rates), ('carbon_floors', carbon_floors),
                            ('timber_yield', timber_yield), ('planting_cost', planting_cost),
                            ('terminal_lo', lo), ('terminal_hi', hi)):
            object.__setattr__(self, name, value)

    def replace(self, **changes) -> "Scenario":
        return dataclasses.replace(self, **changes)

    @property
    def harvest_classes(self) -> int:
        """Number of harvestable age classes l..L."""
        return self.n_classes - self.min_harvest_age + 1

@dataclass(frozen=True)
class PlanTrajectory:
    """
    States v(0..T) and actions u(0..T-1), w(0..T-1) of one plan.

    Arrays are indexed [stage, age class - 1].
    """

    states: np.ndarray
    harvest: np.ndarray
    plant: np.ndarray
    objective_value: float
    feasible: bool = True
    violations: Tuple[Violation, ...] = ()
    status: str = LpStatus.OPTIMAL.value
    pivots: int = 0

    def __post_init__(self):
        for name in ('states', 'harvest', 'plant'):
            array = np.array(getattr(self, name), dtype=float)
            if array.ndim != 2:
                raise DimensionMismatch(f"{name}: expected a stage x class table, got shape {array.shape}")
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        if self.harvest.shape != self.plant.shape or self.states.shape != (self.harvest.shape[0] + 1, self.harvest.shape[1]):
            raise DimensionMismatch(
                f"states {self.states.shape}, harvest {self.harvest.shape} and plant {self.plant.shape} disagree"
            )
        object.__setattr__(self, 'violations', tuple(self.violations))

    @property
    def horizon(self) -> int:
        return self.harvest.shape[0]

    @property
    def n_classes(self) -> int:
        return self.harvest.shape[1]

    def to_frame(self) -> pd.DataFrame:
        """Long table with one row per (t, age_class); actions at t = T are zero."""
        T, L = self.horizon, self.n_classes
        harvest = np.vstack([self.harvest, np.zeros((1, L))])
        plant = np.vstack([self.plant, np.zeros((1, L))])
        return pd.DataFrame({
            't': np.repeat(np.arange(T + 1), L),
            'age_class': np.tile(np.arange(1, L + 1), T + 1),
            'v': self.states.ravel(),
            'u': harvest.ravel(),
            'w': plant.ravel(),
        })

class _Layout:
    """Column positions of v(t, i), u(t, i) and w(t, i) in the LP."""

    def __init__(self, scenario: Scenario):
        self.T = scenario.horizon
        self.L = scenario.n_classes
        self.l = scenario.min_harvest_age
        self.l0 = scenario.max_planting_age
        self.u_offset = self.T * self.L
        self.w_offset = self.u_offset + self.T * (self.L - self.l + 1)
        self.z_offset = self.w_offset + self.T * self.l0
        self.uniform = scenario.criterion == 'uniform'
        self.size = self.z_offset + (2 if self.uniform else 0)

    def v(self, t: int, i: int) -> int:
        return (t - 1) * self.L + (i - 1)

    def u(self, t: int, i: int) -> int:
        return self.u_offset + t * (self.L - self.l + 1) + (i - self.l)

    def w(self, t: int, i: int) -> int:
        return self.w_offset + t * self.l0 + (i - 1)

    def names(self) -> List[str]:
        names = [f"v[{t},{i}]" for t in range(1, self.T + 1) for i in range(1, self.L + 1)]
        names += [f"u[{t},{i}]" for t in range(self.T) for i in range(self.l, self.L + 1)]
        names += [f"w[{t},{i}]" for t in range(self.T) for i in range(1, self.l0 + 1)]
        if self.uniform:
            names += ['z_pos', 'z_neg']
        return names

    def unpack(self, x: np.ndarray, initial: np.ndarray):
        states = np.vstack([initial, x[:self.u_offset].reshape(self.T, self.L)])
        harvest = np.zeros((self.T, self.L))
        harvest[:, self.l - 1:] = x[self.u_offset:self.w_offset].reshape(self.T, self.L - self.l + 1)
        plant = np.zeros((self.T, self.L))
        plant[:, :self.l0] = x[self.w_offset:self.z_offset].reshape(self.T, self.l0)
        return states, harvest, plant

def _stage_value_row(scenario: Scenario, layout: _Layout, t: int) -> np.ndarray:
    row = np.zeros(layout.size)
    for i in range(scenario.min_harvest_age, scenario.n_classes + 1):
        row[layout.u(t, i)] = scenario.timber_yield[i - 1]
    for i in range(1, scenario.max_planting_age + 1):
        row[layout.w(t, i)] = -scenario.planting_cost[i - 1]
    return row

def build_lp(scenario: Scenario, exclude: Iterable[str] = ()) -> LinearProgram:
    """Assemble the planning LP; `exclude` drops whole constraint families."""
    exclude = set(exclude)
    unknown = exclude - set(CONSTRAINT_FAMILIES)
    if unknown:
        raise ValueError(f"unknown constraint families: {', '.join(sorted(unknown))}")

    layout = _Layout(scenario)
    T, L = scenario.horizon, scenario.n_classes
    l, l0 = scenario.min_harvest_age, scenario.max_planting_age
    A = scenario.transition.matrix
    v0 = scenario.initial_state.areas
    S = scenario.area_limit
    rows: List[Constraint] = []

    if layout.uniform:
        objective = np.zeros(layout.size)
        objective[layout.z_offset] = 1.0
        objective[layout.z_offset + 1] = -1.0
    else:
        objective = sum(_stage_value_row(scenario, layout, t) for t in range(T))

    # v(t+1) - A v(t) + A u(t) - w(t) = 0, with A v(0) moved to the right-hand side
    for t in range(T):
        for k in range(1, L + 1):
            a = np.zeros(layout.size)
            a[layout.v(t + 1, k)] = 1.0
            rhs = 0.0
            for j in np.flatnonzero(A[k - 1]) + 1:
                coef = A[k - 1, j - 1]
                if t == 0:
                    rhs += coef * v0[j - 1]
                else:
                    a[layout.v(t, j)] -= coef
                if j >= l:
                    a[layout.u(t, j)] += coef
            if k <= l0:
                a[layout.w(t, k)] -= 1.0
            rows.append(Constraint(a, Relation.EQ, rhs, f"dynamics[{t},{k}]"))

    if 'area' not in exclude and np.isfinite(S):
        for t in range(1, T + 1):
            a = np.zeros(layout.size)
            a[layout.v(t, 1):layout.v(t, L) + 1] = 1.0
            rows.append(Constraint(a, Relation.LE, S, f"area[{t}]"))

    if 'carbon' not in exclude:
        for t in range(1, T + 1):
            a = np.zeros(layout.size)
            a[layout.v(t, 1):layout.v(t, L) + 1] = scenario.carbon_rates
            rows.append(Constraint(a, Relation.GE, scenario.carbon_floors[t - 1], f"carbon[{t}]"))

    if 'stock' not in exclude:
        for t in range(T):
            for i in range(l, L + 1):
                a = np.zeros(layout.size)
                a[layout.u(t, i)] = 1.0
                if t == 0:
                    rows.append(Constraint(a, Relation.LE, v0[i - 1], f"stock[{t},{i}]"))
                else:
                    a[layout.v(t, i)] = -1.0
                    rows.append(Constraint(a, Relation.LE, 0.0, f"stock[{t},{i}]"))

    for i in range(1, L + 1):
        if 'terminal_lo' not in exclude:
            a = np.zeros(layout.size)
            a[layout.v(T, i)] = 1.0
            rows.append(Constraint(a, Relation.GE, scenario.terminal_lo[i - 1], f"terminal_lo[{i}]"))
        if 'terminal_hi' not in exclude and np.isfinite(scenario.terminal_hi[i - 1]):
            a = np.zeros(layout.size)
            a[layout.v(T, i)] = 1.0
            rows.append(Constraint(a, Relation.LE, scenario.terminal_hi[i - 1], f"terminal_hi[{i}]"))

    # z_pos - z_neg <= stage value(t)
    if layout.uniform:
        for t in range(T):
            a = -_stage_value_row(scenario, layout, t)
            a[layout.z_offset] = 1.0
            a[layout.z_offset + 1] = -1.0
            rows.append(Constraint(a, Relation.LE, 0.0, f"uniform[{t}]"))

    logger.debug(f"Built LP with {layout.size} variables and {len(rows)} constraints")
    return LinearProgram(objective, tuple(rows), tuple(layout.names()))

def _check_dimensions(scenario: Scenario, traj: PlanTrajectory):
    if traj.horizon != scenario.horizon or traj.n_classes != scenario.n_classes:
        raise DimensionMismatch(
            f"trajectory has {traj.horizon} stages x {traj.n_classes} classes, "
            f"scenario has {scenario.horizon} x {scenario.n_classes}"
        )

def stage_values(scenario: Scenario, traj: PlanTrajectory) -> np.ndarray:
    """Criterion value of each stage t = 0..T-1."""
    _check_dimensions(scenario, traj)
    l, l0 = scenario.min_harvest_age, scenario.max_planting_age
    harvested = traj.harvest[:, l - 1:] @ scenario.timber_yield[l - 1:]
    planted = traj.plant[:, :l0] @ scenario.planting_cost[:l0]
    return harvested - planted

def evaluate_objective(scenario: Scenario, traj: PlanTrajectory) -> float:
    """Sum of stage values, or their minimum under the uniform criterion."""
    values = stage_values(scenario, traj)
    if scenario.criterion == 'uniform':
        return float(values.min())
    return float(values.sum())

def check_feasibility(scenario: Scenario, traj: PlanTrajectory) -> Tuple[bool, List[Violation]]:
    """Re-verify every constraint class; feasible iff all residuals are within tolerance."""
    _check_dimensions(scenario, traj)
    tol = Config.FEASIBILITY_TOL
    T = scenario.horizon
    l, l0 = scenario.min_harvest_age, scenario.max_planting_age
    A = scenario.transition.matrix
    v, u, w = traj.states, traj.harvest, traj.plant
    violations: List[Violation] = []

    def report(constraint: str, stage: int, residuals: np.ndarray, offset: int = 0):
        residuals = np.asarray(residuals, dtype=float)
        if residuals.size and residuals.max() > tol:
            k = int(np.argmax(residuals))
            violations.append(Violation(constraint, stage, float(residuals[k]), k + 1 + offset))

    report('initial_state', 0, np.abs(v[0] - scenario.initial_state.areas))

    for t in range(T):
        expected = A @ (v[t] - u[t]) + w[t]
        report('dynamics', t, np.abs(v[t + 1] - expected))

    for t in range(T + 1):
        report('nonnegativity', t, -v[t])
    for t in range(T):
        report('nonnegativity', t, -u[t])
        report('nonnegativity', t, -w[t])
        report('harvest_age', t, np.abs(u[t, :l - 1]))
        report('planting_age', t, np.abs(w[t, l0:]), offset=l0)
        report('stock', t, u[t] - v[t])

    for t in range(1, T + 1):
        if np.isfinite(scenario.area_limit):
            excess = v[t].sum() - scenario.area_limit
            if excess > tol:
                violations.append(Violation('area', t, float(excess)))
        deficit = scenario.carbon_floors[t - 1] - scenario.carbon_rates @ v[t]
        if deficit > tol:
            violations.append(Violation('carbon', t, float(deficit)))

    report('terminal_lo', T, scenario.terminal_lo - v[T])
    report('terminal_hi', T, v[T] - scenario.terminal_hi)

    return not violations, violations

def management_actions(scenario: Scenario, harvest: np.ndarray, plant: np.ndarray) -> List[ManagementAction]:
    """Per-stage actions, with solver round-off below zero clipped."""
    return [
        ManagementAction(np.clip(harvest[t], 0.0, None), np.clip(plant[t], 0.0, None),
                         scenario.min_harvest_age, scenario.max_planting_age)
        for t in range(scenario.horizon)
    ]

def replay_policy(scenario: Scenario, harvest: np.ndarray, plant: np.ndarray) -> PlanTrajectory:
    """
    Roll a user policy forward exactly as given.

    Nothing is clipped or rejected: negative areas, harvests outside the
    harvestable ages, plantings above the planting age and harvests beyond
    the standing stock all flow into the states and are reported by
    check_feasibility with their stage and age class.
    """
    T, L = scenario.horizon, scenario.n_classes
    harvest = np.asarray(harvest, dtype=float)
    plant = np.asarray(plant, dtype=float)
    for name, table in (('harvest', harvest), ('plant', plant)):
        if table.shape != (T, L):
            raise DimensionMismatch(f"{name}: expected {T} stages x {L} age classes, got shape {table.shape}")

    A = scenario.transition.matrix
    states = np.empty((T + 1, L))
    states[0] = scenario.initial_state.areas
    for t in range(T):
        states[t + 1] = A @ (states[t] - harvest[t]) + plant[t]

    traj = PlanTrajectory(states, harvest, plant, objective_value=0.0, status='Simulated')
    feasible, violations = check_feasibility(scenario, traj)
    return dataclasses.replace(
        traj,
        objective_value=evaluate_objective(scenario, traj),
        feasible=feasible,
        violations=tuple(violations),
    )

def _first_infeasible_carbon_stage(scenario: Scenario, settings: Optional[SimplexSettings]) -> Optional[int]:
    """Smallest k such that the carbon floors of stages 1..k cannot all be met."""
    lp = build_lp(scenario)

    def feasible_through(k: int) -> bool:
        rows = tuple(
            row for row in lp.constraints
            if row.family != 'carbon' or int(row.name[len('carbon['):-1]) <= k
        )
        relaxed = LinearProgram(np.zeros(lp.n_variables), rows, lp.variable_names)
        return lp_core.solve(relaxed, settings).status != LpStatus.INFEASIBLE

    if feasible_through(scenario.horizon):
        return None
    low, high = 1, scenario.horizon
    while low < high:
        mid = (low + high) // 2
        if feasible_through(mid):
            low = mid + 1
        else:
            high = mid
    return low

def diagnose_infeasibility(scenario: Scenario, settings: Optional[SimplexSettings] = None) -> str:
    """Name the constraint family (and stage, for carbon) that makes a scenario infeasible."""
    tol = Config.FEASIBILITY_TOL
    S = scenario.area_limit
    reasons = []

    capacity = scenario.carbon_rates.max() * S
    for t, floor in enumerate(scenario.carbon_floors, start=1):
        if floor > capacity + tol:
            reasons.append(
                f"carbon constraint at stage {t}: floor {floor:.6f} exceeds the largest "
                f"achievable sequestration {capacity:.6f}"
            )
    if scenario.terminal_lo.sum() > S + tol:
        reasons.append(
            f"terminal constraint: lower bounds total {scenario.terminal_lo.sum():.6f} exceed S = {S:g}"
        )
    if reasons:
        return "; ".join(reasons)

    objective = np.zeros(build_lp(scenario).n_variables)
    for family in CONSTRAINT_FAMILIES:
        relaxed = build_lp(scenario, exclude=[family]).with_objective(objective)
        if lp_core.solve(relaxed, settings).status == LpStatus.INFEASIBLE:
            continue
        if family == 'carbon':
            stage = _first_infeasible_carbon_stage(scenario, settings)
            reasons.append(f"carbon constraint at stage {stage} cannot be met together with the forest dynamics")
        else:
            reasons.append(f"{family} constraints cannot be met together with the forest dynamics")

    if not reasons:
        reasons.append("several constraint families conflict; no single family explains the infeasibility")
    return "; ".join(reasons)

@performance_monitor("solve_plan")
def solve_plan(scenario: Scenario, settings: Optional[SimplexSettings] = None) -> PlanTrajectory:
    """
    Solve the planning LP and return the optimal trajectory.

    Raises:
        InfeasibleScenario: no trajectory meets all constraints
        UnboundedModel: the criterion is unbounded (e.g. no area limit)
    """
    lp = build_lp(scenario)
    solution = lp_core.solve(lp, settings)

    if solution.status == LpStatus.INFEASIBLE:
        message = diagnose_infeasibility(scenario, settings)
        logger.warning(f"Infeasible scenario: {message}")
        raise InfeasibleScenario(message)
    if solution.status == LpStatus.UNBOUNDED:
        raise UnboundedModel("objective is unbounded; check the area limit S and the terminal upper bounds")

    layout = _Layout(scenario)
    states, harvest, plant = layout.unpack(solution.x, scenario.initial_state.areas)

    draft = PlanTrajectory(states, harvest, plant, solution.objective_value, pivots=solution.pivots)
    feasible, violations = check_feasibility(scenario, draft)

    try:
        replayed = simulate(scenario.initial_state, management_actions(scenario, harvest, plant), scenario.transition)
    except HarvestExceedsStock as e:
        logger.warning(f"Forward replay failed: {e}")
        violations.append(Violation('stock', e.stage, e.harvest - e.stock, e.age_class))
        feasible = False
    else:
        deviation = np.abs(np.vstack([state.areas for state in replayed]) - states).max(axis=1)
        if deviation.max() > Config.CONSISTENCY_TOL:
            t = int(np.argmax(deviation))
            logger.warning(f"Forward replay deviates by {deviation[t]:.3e} at stage {t}")
            violations.append(Violation('consistency', t, float(deviation[t])))
            feasible = False

    logger.info(
        f"Planned {scenario.horizon} stages x {scenario.n_classes} classes: "
        f"objective {solution.objective_value:.6f}, {solution.pivots} pivots"
    )
    return dataclasses.replace(draft, feasible=feasible, violations=tuple(violations))
