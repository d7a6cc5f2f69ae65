import numpy as np
import pytest
from pathlib import Path

from modules.data_processor import DataProcessor
from modules.forest_model import ForestState, TransitionOperator
from modules.planner import Scenario

ROOT = Path(__file__).resolve().parent.parent
SCENARIO_DIR = ROOT / 'scenarios'
POLICY_DIR = ROOT / 'policies'

def make_scenario(T=2, L=3, l=2, l0=1, S=10.0, v0=None, survival=None, matrix=None,
                  gamma=None, Gamma=None, mu=None, eta=None,
                  terminal_lo=None, terminal_hi=None, criterion='sum'):
    """Scenario with simple defaults; every parameter can be overridden."""
    if matrix is not None:
        transition = TransitionOperator(matrix)
    else:
        transition = TransitionOperator.from_survival(np.ones(L) if survival is None else survival)
    return Scenario(
        horizon=T,
        n_classes=L,
        min_harvest_age=l,
        max_planting_age=l0,
        area_limit=S,
        initial_state=ForestState(np.ones(L) if v0 is None else v0),
        carbon_rates=np.ones(L) if gamma is None else gamma,
        carbon_floors=np.zeros(T) if Gamma is None else Gamma,
        timber_yield=np.arange(L, dtype=float) if mu is None else mu,
        planting_cost=np.ones(L) if eta is None else eta,
        transition=transition,
        terminal_lo=terminal_lo,
        terminal_hi=terminal_hi,
        criterion=criterion,
    )

def random_feasible_scenario(seed, T=4, L=4, l=3, l0=1):
    """
    Random scenario that the zero policy satisfies: carbon floors and the
    terminal box are set around the natural (unmanaged) trajectory.
    """
    rng = np.random.default_rng(seed)
    survival = rng.uniform(0.7, 1.0, size=L)
    transition = TransitionOperator.from_survival(survival)
    v0 = rng.uniform(0.0, 10.0, size=L)
    S = v0.sum() * rng.uniform(1.0, 1.5)
    gamma = rng.uniform(0.1, 2.0, size=L)

    states = [v0]
    for _ in range(T):
        states.append(transition.matrix @ states[-1])
    carbon = np.array([gamma @ v for v in states[1:]])

    return make_scenario(
        T=T, L=L, l=l, l0=l0, S=S, v0=v0, survival=survival, gamma=gamma,
        Gamma=0.5 * carbon,
        mu=np.where(np.arange(1, L + 1) >= l, rng.uniform(1.0, 10.0, size=L), 0.0),
        eta=rng.uniform(0.5, 3.0, size=L),
        terminal_lo=0.5 * states[-1],
        terminal_hi=states[-1] + rng.uniform(0.0, 5.0, size=L),
    )

@pytest.fixture
def processor():
    return DataProcessor()

@pytest.fixture
def steady_rotation(processor):
    return processor.load_scenario(SCENARIO_DIR / 'steady_rotation.json')

@pytest.fixture(scope='session')
def pine():
    return DataProcessor().load_scenario(SCENARIO_DIR / 'pine_scaled.json')
