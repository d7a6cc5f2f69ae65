"""
Dense linear-programming kernel.

Problems are stated as

    maximize  c.x   subject to   a_k.x (<=, =, >=) b_k,   x >= 0

and solved with a two-phase primal simplex on a dense tableau using Bland's
rule for both the entering and the leaving variable.
"""

import logging
import numpy as np
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

from config import Config

logger = logging.getLogger(__name__)

class Relation(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="

class LpStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"

@dataclass(frozen=True)
class Constraint:
    coefficients: np.ndarray
    relation: Relation
    rhs: float
    name: str = ""

    def __post_init__(self):
        coefficients = np.array(self.coefficients, dtype=float)
        coefficients.setflags(write=False)
        object.__setattr__(self, 'coefficients', coefficients)
        object.__setattr__(self, 'relation', Relation(self.relation))
        object.__setattr__(self, 'rhs', float(self.rhs))

    @property
    def family(self) -> str:
        return self.name.split('[', 1)[0]

@dataclass(frozen=True)
class LinearProgram:
    """Maximize objective . x over x >= 0 subject to the listed constraints."""

    objective: np.ndarray
    constraints: Tuple[Constraint, ...]
    variable_names: Tuple[str, ...]

    def __post_init__(self):
        objective = np.array(self.objective, dtype=float)
        if objective.ndim != 1:
            raise ValueError("objective: expected a vector")
        objective.setflags(write=False)
        constraints = tuple(self.constraints)
        names = tuple(self.variable_names)

        if len(names) != objective.size:
            raise ValueError(f"variable_names: expected {objective.size} names, got {len(names)}")
        if len(set(names)) != len(names):
            raise ValueError("variable_names: names must be unique")
        for k, row in enumerate(constraints):
            if row.coefficients.shape != objective.shape:
                label = row.name or f"row {k}"
                raise ValueError(
                    f"constraint {label}: has {row.coefficients.size} coefficients, "
                    f"objective has {objective.size}"
                )

        object.__setattr__(self, 'objective', objective)
        object.__setattr__(self, 'constraints', constraints)
        object.__setattr__(self, 'variable_names', names)

    @classmethod
    def from_arrays(cls, objective: Sequence[float], matrix: Sequence[Sequence[float]],
                    relations: Sequence[str], rhs: Sequence[float],
                    variable_names: Optional[Sequence[str]] = None) -> "LinearProgram":
        objective = np.asarray(objective, dtype=float)
        if variable_names is None:
            variable_names = [f"x{j + 1}" for j in range(objective.size)]
        constraints = [
            Constraint(row, relation, b, name=f"row[{k}]")
            for k, (row, relation, b) in enumerate(zip(matrix, relations, rhs))
        ]
        return cls(objective, tuple(constraints), tuple(variable_names))

    @property
    def n_variables(self) -> int:
        return self.objective.size

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)

    def arrays(self) -> Tuple[np.ndarray, List[Relation], np.ndarray]:
        """Constraint matrix, relations and right-hand sides."""
        if not self.constraints:
            return np.zeros((0, self.n_variables)), [], np.zeros(0)
        matrix = np.vstack([row.coefficients for row in self.constraints])
        relations = [row.relation for row in self.constraints]
        rhs = np.array([row.rhs for row in self.constraints])
        return matrix, relations, rhs

    def without(self, families: Iterable[str]) -> "LinearProgram":
        """Copy with every constraint of the named families removed."""
        families = set(families)
        kept = tuple(row for row in self.constraints if row.family not in families)
        return LinearProgram(self.objective, kept, self.variable_names)

    def with_objective(self, objective: Sequence[float]) -> "LinearProgram":
        return LinearProgram(np.asarray(objective, dtype=float), self.constraints, self.variable_names)

@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    x: Optional[np.ndarray] = None
    objective_value: Optional[float] = None
    pivots: int = 0
    reduced_costs: Optional[np.ndarray] = None

    @property
    def is_optimal(self) -> bool:
        return self.status == LpStatus.OPTIMAL

@dataclass(frozen=True)
class SimplexSettings:
    pivot_tol: float = Config.PIVOT_TOL
    residual_tol: float = Config.RESIDUAL_TOL
    phase_one_tol: float = Config.PHASE_ONE_TOL
    max_pivots: int = Config.MAX_PIVOTS

def constraint_residuals(lp: LinearProgram, x: Sequence[float]) -> np.ndarray:
    """Amount by which each constraint is violated at x (0 when satisfied)."""
    matrix, relations, rhs = lp.arrays()
    if matrix.shape[0] == 0:
        return np.zeros(0)
    lhs = matrix @ np.asarray(x, dtype=float)
    residuals = np.empty_like(rhs)
    for k, relation in enumerate(relations):
        if relation == Relation.LE:
            residuals[k] = max(0.0, lhs[k] - rhs[k])
        elif relation == Relation.GE:
            residuals[k] = max(0.0, rhs[k] - lhs[k])
        else:
            residuals[k] = abs(lhs[k] - rhs[k])
    return residuals

class SimplexSolver:
    """Two-phase primal simplex with Bland's anti-cycling rule."""

    def __init__(self, settings: Optional[SimplexSettings] = None):
        self.settings = settings or SimplexSettings()
        self.pivots = 0

    def solve(self, lp: LinearProgram) -> LpSolution:
        self.pivots = 0
        n = lp.n_variables
        matrix, relations, rhs = self._normalize(*lp.arrays())
        m = matrix.shape[0]

        n_slack = sum(1 for r in relations if r != Relation.EQ)
        art_rows = [i for i, r in enumerate(relations) if r != Relation.LE]
        n_art = len(art_rows)
        n_cols = n + n_slack + n_art

        # Standard form A_std [x | s] = b is kept for the final basis solve
        std = np.zeros((m, n + n_slack))
        std[:, :n] = matrix

        tableau = np.zeros((m + 1, n_cols + 1))
        tableau[:m, :n] = matrix
        tableau[:m, -1] = rhs
        basis = [0] * m

        slack = n
        art = n + n_slack
        for i, relation in enumerate(relations):
            if relation == Relation.LE:
                std[i, slack] = tableau[i, slack] = 1.0
                basis[i] = slack
                slack += 1
            elif relation == Relation.GE:
                std[i, slack] = tableau[i, slack] = -1.0
                slack += 1
                tableau[i, art] = 1.0
                basis[i] = art
                art += 1
            else:
                tableau[i, art] = 1.0
                basis[i] = art
                art += 1

        rows = list(range(m))
        if n_art:
            costs = np.zeros(n_cols)
            costs[n + n_slack:] = -1.0
            self._price(tableau, basis, costs)
            status = self._iterate(tableau, basis, n_cols, phase=1)
            phase_one_value = tableau[-1, -1]
            logger.debug(f"Phase one finished after {self.pivots} pivots, value {phase_one_value:.3e}")
            if status == LpStatus.UNBOUNDED or phase_one_value < -self.settings.phase_one_tol:
                return LpSolution(LpStatus.INFEASIBLE, pivots=self.pivots)

            tableau, basis, rows = self._drive_out_artificials(tableau, basis, rows, n + n_slack)

        n_cols = n + n_slack
        costs = np.zeros(n_cols)
        costs[:n] = lp.objective
        self._price(tableau, basis, costs)
        status = self._iterate(tableau, basis, n_cols, phase=2)
        if status == LpStatus.UNBOUNDED:
            logger.debug(f"Unbounded after {self.pivots} pivots")
            return LpSolution(LpStatus.UNBOUNDED, pivots=self.pivots)

        x = self._basic_solution(tableau, basis, std[rows], rhs[rows], n)
        value = float(lp.objective @ x)
        reduced_costs = -tableau[-1, :n_cols].copy()

        worst = constraint_residuals(lp, x).max(initial=0.0)
        if worst > self.settings.residual_tol:
            logger.warning(f"Optimal basis leaves residual {worst:.3e} above tolerance")

        logger.debug(f"Optimal after {self.pivots} pivots, objective {value:.6f}")
        return LpSolution(LpStatus.OPTIMAL, x, value, self.pivots, reduced_costs)

    def _normalize(self, matrix: np.ndarray, relations: List[Relation], rhs: np.ndarray):
        """Negate rows so that b >= 0; >= rows with b = 0 become <= rows."""
        matrix = matrix.copy()
        rhs = rhs.copy()
        relations = list(relations)
        flip = {Relation.LE: Relation.GE, Relation.GE: Relation.LE, Relation.EQ: Relation.EQ}
        for i, relation in enumerate(relations):
            if rhs[i] < 0 or (rhs[i] == 0 and relation == Relation.GE):
                matrix[i] *= -1
                rhs[i] *= -1
                relations[i] = flip[relation]
        return matrix, relations, rhs

    @staticmethod
    def _price(tableau: np.ndarray, basis: List[int], costs: np.ndarray):
        """Objective row: z_j - c_j for every column, c_B.x_B in the last entry."""
        m = len(basis)
        basic_costs = costs[basis] if m else np.zeros(0)
        tableau[-1, :] = 0.0
        tableau[-1, :costs.size] = -costs
        if m:
            tableau[-1, :] += basic_costs @ tableau[:m, :]
            tableau[-1, basis] = 0.0

    def _iterate(self, tableau: np.ndarray, basis: List[int], n_cols: int, phase: int) -> LpStatus:
        tol = self.settings.pivot_tol
        m = len(basis)
        while True:
            entering = np.flatnonzero(tableau[-1, :n_cols] < -tol)
            if entering.size == 0:
                return LpStatus.OPTIMAL
            col = int(entering[0])

            column = tableau[:m, col]
            eligible = np.flatnonzero(column > tol)
            if eligible.size == 0:
                return LpStatus.UNBOUNDED

            ratios = tableau[eligible, -1] / column[eligible]
            best = ratios.min()
            ties = eligible[ratios <= best + tol * max(1.0, abs(best))]
            row = int(min(ties, key=lambda r: basis[r]))

            self._pivot(tableau, row, col)
            basis[row] = col
            self.pivots += 1
            if self.pivots > self.settings.max_pivots:
                raise RuntimeError(f"simplex exceeded {self.settings.max_pivots} pivots in phase {phase}")

    def _pivot(self, tableau: np.ndarray, row: int, col: int):
        tableau[row] /= tableau[row, col]
        factors = tableau[:, col].copy()
        factors[row] = 0.0
        touched = np.flatnonzero(factors)
        tableau[touched] -= np.outer(factors[touched], tableau[row])
        tableau[:, col] = 0.0
        tableau[row, col] = 1.0

        rhs = tableau[:-1, -1]
        rhs[(rhs < 0) & (rhs > -self.settings.residual_tol)] = 0.0

    def _drive_out_artificials(self, tableau: np.ndarray, basis: List[int], rows: List[int], n_real: int):
        """Pivot zero-level artificials out of the basis and drop redundant rows."""
        tol = self.settings.pivot_tol
        redundant = []
        for r, var in enumerate(basis):
            if var < n_real:
                continue
            candidates = np.flatnonzero(np.abs(tableau[r, :n_real]) > tol)
            if candidates.size:
                col = int(candidates[0])
                self._pivot(tableau, r, col)
                basis[r] = col
                self.pivots += 1
            else:
                redundant.append(r)

        if redundant:
            logger.debug(f"Dropping {len(redundant)} redundant equality rows")
        dropped = set(redundant)
        keep = [r for r in range(len(basis)) if r not in dropped]
        tableau = np.vstack([tableau[keep][:, list(range(n_real)) + [tableau.shape[1] - 1]],
                             tableau[-1:, list(range(n_real)) + [tableau.shape[1] - 1]]])
        basis = [basis[r] for r in keep]
        rows = [rows[r] for r in keep]
        return tableau, basis, rows

    def _basic_solution(self, tableau: np.ndarray, basis: List[int], std: np.ndarray,
                        rhs: np.ndarray, n: int) -> np.ndarray:
        """Recover x from the final basis, re-solving B x_B = b on the original rows."""
        values = tableau[:-1, -1].copy()
        if basis:
            try:
                refined = np.linalg.solve(std[:, basis], rhs)
                if np.all(refined > -self.settings.residual_tol) and \
                        np.max(np.abs(refined - values)) < 1e-6 * max(1.0, np.abs(values).max()):
                    values = refined
            except np.linalg.LinAlgError:
                logger.debug("Final basis is numerically singular, keeping tableau values")

        full = np.zeros(std.shape[1])
        full[basis] = values
        return np.clip(full[:n], 0.0, None)

def solve(lp: LinearProgram, settings: Optional[SimplexSettings] = None) -> LpSolution:
    """Solve lp; status is Optimal, Infeasible or Unbounded."""
    return SimplexSolver(settings).solve(lp)
