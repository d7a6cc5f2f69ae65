import logging
import numpy as np
from dataclasses import dataclass
from typing import List, Optional, Sequence

from config import Config

logger = logging.getLogger(__name__)

class DimensionMismatch(ValueError):
    """Vector or matrix sizes disagree with the number of age classes."""

class HarvestExceedsStock(ValueError):
    """A harvest vector removes more area than an age class holds."""

    def __init__(self, age_class: int, harvest: float, stock: float, stage: Optional[int] = None):
        self.age_class = age_class
        self.harvest = harvest
        self.stock = stock
        self.stage = stage
        where = f"stage {stage}, " if stage is not None else ""
        super().__init__(
            f"harvest exceeds stock at {where}age class {age_class}: "
            f"{harvest:.6f} > {stock:.6f}"
        )

def _frozen_array(values, name: str, ndim: int = 1) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.ndim != ndim:
        raise DimensionMismatch(f"{name}: expected a {ndim}-dimensional array, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValueError(f"{name}: entries must be finite")
    array.setflags(write=False)
    return array

@dataclass(frozen=True)
class ForestState:
    """Forest area (hectares) by age class 1..L at the end of a stage."""

    areas: np.ndarray

    def __post_init__(self):
        areas = _frozen_array(self.areas, "areas")
        if np.any(areas < 0):
            raise ValueError("areas: entries must be nonnegative")
        object.__setattr__(self, 'areas', areas)

    @property
    def n_classes(self) -> int:
        return self.areas.size

    @property
    def total_area(self) -> float:
        return float(self.areas.sum())

    def carbon(self, rates: Sequence[float]) -> float:
        """Carbon sequestered by this state for per-hectare rates."""
        rates = np.asarray(rates, dtype=float)
        if rates.size != self.n_classes:
            raise DimensionMismatch(f"carbon rates: expected {self.n_classes} values, got {rates.size}")
        return float(rates @ self.areas)

@dataclass(frozen=True)
class TransitionOperator:
    """
    Nonnegative L x L matrix advancing the age-class vector one stage.

    Column j says where the area of age class j goes; a column sum below one
    means some of that area is lost to natural mortality.
    """

    matrix: np.ndarray

    def __post_init__(self):
        matrix = _frozen_array(self.matrix, "matrix", ndim=2)
        if matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatch(f"matrix: must be square, got shape {matrix.shape}")
        if np.any(matrix < 0):
            raise ValueError("matrix: entries must be nonnegative")
        column_sums = matrix.sum(axis=0)
        if np.any(column_sums > 1 + 1e-12):
            worst = int(np.argmax(column_sums)) + 1
            raise ValueError(f"matrix: column {worst} sums to {column_sums.max():g}, an age class cannot create area")
        object.__setattr__(self, 'matrix', matrix)

    @classmethod
    def from_survival(cls, survival: Sequence[float]) -> "TransitionOperator":
        """Aging shift: class i moves to i+1 with fraction s_i, the oldest class stays with s_L."""
        survival = np.asarray(survival, dtype=float)
        if survival.ndim != 1 or survival.size < 1:
            raise DimensionMismatch("survival: expected a nonempty vector")
        if np.any((survival < 0) | (survival > 1)):
            raise ValueError("survival: fractions must lie in [0, 1]")

        n = survival.size
        matrix = np.zeros((n, n))
        idx = np.arange(n - 1)
        matrix[idx + 1, idx] = survival[:-1]
        matrix[n - 1, n - 1] = survival[-1]
        return cls(matrix)

    @classmethod
    def identity(cls, n_classes: int) -> "TransitionOperator":
        return cls(np.eye(n_classes))

    @property
    def order(self) -> int:
        return self.matrix.shape[0]

    def apply(self, areas: np.ndarray) -> np.ndarray:
        areas = np.asarray(areas, dtype=float)
        if areas.shape != (self.order,):
            raise DimensionMismatch(f"state has {areas.size} age classes, operator has order {self.order}")
        return self.matrix @ areas

@dataclass(frozen=True)
class ManagementAction:
    """Harvest and planting areas for one stage."""

    harvest: np.ndarray
    plant: np.ndarray
    min_harvest_age: int = 1
    max_planting_age: Optional[int] = None

    def __post_init__(self):
        harvest = _frozen_array(self.harvest, "harvest")
        plant = _frozen_array(self.plant, "plant")
        if harvest.size != plant.size:
            raise DimensionMismatch(f"harvest has {harvest.size} classes, plant has {plant.size}")
        if np.any(harvest < 0):
            raise ValueError("harvest: entries must be nonnegative")
        if np.any(plant < 0):
            raise ValueError("plant: entries must be nonnegative")

        max_planting_age = harvest.size if self.max_planting_age is None else self.max_planting_age
        if np.any(harvest[:self.min_harvest_age - 1] != 0):
            raise ValueError(f"harvest: age classes below {self.min_harvest_age} cannot be harvested")
        if np.any(plant[max_planting_age:] != 0):
            raise ValueError(f"plant: age classes above {max_planting_age} cannot be planted")

        object.__setattr__(self, 'harvest', harvest)
        object.__setattr__(self, 'plant', plant)
        object.__setattr__(self, 'max_planting_age', max_planting_age)

    @classmethod
    def zero(cls, n_classes: int) -> "ManagementAction":
        return cls(np.zeros(n_classes), np.zeros(n_classes))

    @property
    def n_classes(self) -> int:
        return self.harvest.size

def natural_step(state: ForestState, op: TransitionOperator) -> ForestState:
    """v(t+1) = A v(t)"""
    return ForestState(op.apply(state.areas))

def managed_step(state: ForestState, action: ManagementAction, op: TransitionOperator,
                 stage: Optional[int] = None) -> ForestState:
    """v(t+1) = A (v(t) - u(t)) + w(t)"""
    if action.n_classes != state.n_classes:
        raise DimensionMismatch(
            f"action has {action.n_classes} age classes, state has {state.n_classes}"
        )

    remaining = state.areas - action.harvest
    # Harvests within tolerance of the stock are accepted and clipped
    short = remaining < -Config.FEASIBILITY_TOL
    if np.any(short):
        i = int(np.argmax(short))
        raise HarvestExceedsStock(i + 1, float(action.harvest[i]), float(state.areas[i]), stage)

    return ForestState(op.apply(np.clip(remaining, 0.0, None)) + action.plant)

def simulate(initial: ForestState, actions: Sequence[ManagementAction],
             op: TransitionOperator) -> List[ForestState]:
    """Roll the managed dynamics forward; returns v(0), ..., v(T)."""
    states = [initial]
    for t, action in enumerate(actions):
        states.append(managed_step(states[-1], action, op, stage=t))

    logger.debug(f"Simulated {len(actions)} stages, final area {states[-1].total_area:.6f}")
    return states
