import math
import logging
import numpy as np
from dataclasses import dataclass

from config import Config

logger = logging.getLogger(__name__)

class InvalidDistribution(ValueError):
    """Probabilities are negative or do not sum to one."""

@dataclass(frozen=True)
class DiscreteState:
    """Probability distribution over n elementary events."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise InvalidDistribution("need at least one probability")
        if not np.all(np.isfinite(probs)):
            raise InvalidDistribution("probabilities must be finite")
        if np.any(probs < 0):
            raise InvalidDistribution(f"negative probability {probs.min():g}")
        total = math.fsum(probs)
        if abs(total - 1.0) > Config.PROBABILITY_SUM_TOL:
            raise InvalidDistribution(Config.ERROR_MESSAGES['probability_sum'].format(total))
        probs.setflags(write=False)
        object.__setattr__(self, 'probs', probs)

    @classmethod
    def uniform(cls, n: int) -> "DiscreteState":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def degenerate(cls, n: int, k: int = 0) -> "DiscreteState":
        probs = np.zeros(n)
        probs[k] = 1.0
        return cls(probs)

    @property
    def n(self) -> int:
        return self.probs.size

def _check_base(base: float):
    if not math.isfinite(base) or base <= 0 or base == 1:
        raise ValueError(Config.ERROR_MESSAGES['log_base'].format(base))

def entropy(state: DiscreteState, base: float = 2.0) -> float:
    """H = -sum p_i log p_i over p_i > 0; bits by default."""
    _check_base(base)
    p = state.probs[state.probs > 0]
    if base == 2:
        value = -np.sum(p * np.log2(p))
    else:
        value = -np.sum(p * np.log(p)) / math.log(base)
    return float(max(0.0, value))

def max_entropy(n: int, base: float = 2.0) -> float:
    """Entropy of the uniform distribution on n events."""
    _check_base(base)
    if base == 2:
        return math.log2(n)
    return math.log(n) / math.log(base)

def information_gain(before: DiscreteState, after: DiscreteState, base: float = 2.0) -> float:
    """Entropy decrease H(before) - H(after); negative when uncertainty grows."""
    _check_base(base)
    gain = entropy(before, base) - entropy(after, base)
    logger.debug(f"Information gain {gain:.6f} ({before.n} -> {after.n} events)")
    return gain
