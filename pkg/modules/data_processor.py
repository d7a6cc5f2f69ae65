import json
import logging
import numpy as np
import pandas as pd
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from config import Config, ValidationRules
from modules.forest_model import TransitionOperator
from modules.planner import (
    PlanTrajectory, Scenario, ScenarioError, Violation
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

class DataProcessor:
    """
    Scenario and policy ingestion plus report export for the planning CLI.
    Handles JSON loading, field validation, and CSV/JSON output.
    """

    def __init__(self):
        self.required_keys = Config.REQUIRED_KEYS
        self.optional_keys = Config.OPTIONAL_KEYS

    def load_scenario(self, path: PathLike) -> Scenario:
        """
        Load and validate a scenario file.

        Args:
            path: JSON scenario file

        Returns:
            Scenario

        Raises:
            ScenarioError: naming the offending field
        """
        document = self._read_json(path)
        return self.parse_scenario(document)

    def parse_scenario(self, document: Dict[str, Any]) -> Scenario:
        """Build a Scenario from an already-decoded scenario document."""
        if not isinstance(document, dict):
            raise ScenarioError('scenario', "expected a JSON object")

        self._validate_keys(document)

        T = self._integer(document, 'T', min_val=1)
        L = self._integer(document, 'L', min_val=1)
        l = self._integer(document, 'l', min_val=1)
        l0 = self._integer(document, 'l0', min_val=1)
        S = self._number(document, 'S')

        if 'matrix' in document:
            matrix = self._table(document, 'matrix', L, L)
            try:
                transition = TransitionOperator(matrix)
            except ValueError as e:
                raise ScenarioError('matrix', str(e).split(': ', 1)[-1])
        else:
            survival = self._vector(document, 'survival', L, default=np.ones(L))
            if not all(ValidationRules.validate_numeric_range(s, 0.0, 1.0) for s in survival):
                raise ScenarioError('survival', "fractions must lie in [0, 1]")
            transition = TransitionOperator.from_survival(survival)

        return Scenario(
            horizon=T,
            n_classes=L,
            min_harvest_age=l,
            max_planting_age=l0,
            area_limit=S,
            initial_state=self._vector(document, 'v0', L),
            carbon_rates=self._vector(document, 'gamma', L),
            carbon_floors=self._vector(document, 'Gamma', T),
            timber_yield=self._vector(document, 'mu', L),
            planting_cost=self._vector(document, 'eta', L),
            transition=transition,
            terminal_lo=self._vector(document, 'terminal_lo', L, default=np.zeros(L)),
            terminal_hi=self._vector(document, 'terminal_hi', L, default=np.full(L, S)),
            criterion=document.get('criterion', Config.DEFAULT_CRITERION),
        )

    def load_policy(self, path: PathLike, scenario: Scenario) -> Tuple[np.ndarray, np.ndarray]:
        """
        Load the harvest and planting tables (T x L) of a fixed policy.

        Accepts a policy JSON with "harvest" and "plant" tables (T x L) or a
        trajectory CSV previously written by export_trajectory. Only shape and
        number format are checked here; the values are passed on unchanged so
        that replay_policy can report every constraint they break.
        """
        path = Path(path)
        if path.suffix.lower() == '.csv':
            harvest, plant = self._policy_from_trajectory(path, scenario)
        else:
            document = self._read_json(path)
            if not isinstance(document, dict):
                raise ScenarioError('policy', "expected a JSON object")
            harvest = self._table(document, 'harvest', scenario.horizon, scenario.n_classes)
            plant = self._table(document, 'plant', scenario.horizon, scenario.n_classes)

        for name, table in (('harvest', harvest), ('plant', plant)):
            if not np.all(np.isfinite(table)):
                raise ScenarioError(name, Config.ERROR_MESSAGES['non_finite'])
        return harvest, plant

    def _policy_from_trajectory(self, path: Path, scenario: Scenario) -> Tuple[np.ndarray, np.ndarray]:
        df = pd.read_csv(path)
        missing = [col for col in ('t', 'age_class', 'u', 'w') if col not in df.columns]
        if missing:
            raise ScenarioError('policy', f"missing columns: {', '.join(missing)}")

        df = df[df['t'] < scenario.horizon]
        T, L = scenario.horizon, scenario.n_classes
        harvest = df.pivot(index='t', columns='age_class', values='u')
        plant = df.pivot(index='t', columns='age_class', values='w')
        if harvest.shape != (T, L):
            raise ScenarioError('policy', f"expected {T} stages x {L} age classes, got {harvest.shape[0]} x {harvest.shape[1]}")
        harvest = harvest.sort_index().sort_index(axis=1).to_numpy(dtype=float)
        plant = plant.sort_index().sort_index(axis=1).to_numpy(dtype=float)
        return harvest, plant

    def _read_json(self, path: PathLike) -> Any:
        path = Path(path)
        with path.open('r', encoding='utf-8') as handle:
            try:
                return json.load(handle)
            except json.JSONDecodeError as e:
                raise ScenarioError(path.name, Config.ERROR_MESSAGES['bad_json'].format(e.msg, e.lineno))

    def _validate_keys(self, document: Dict[str, Any]):
        missing = [key for key in self.required_keys if key not in document]
        if missing:
            raise ScenarioError(missing[0], Config.ERROR_MESSAGES['required'])

        unknown = [key for key in document if key not in self.required_keys + self.optional_keys]
        if unknown:
            logger.warning(f"Ignoring unknown scenario keys: {', '.join(unknown)}")

    def _number(self, document: Dict[str, Any], key: str) -> float:
        value = document[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioError(key, Config.ERROR_MESSAGES['not_numeric'])
        return float(value)

    def _integer(self, document: Dict[str, Any], key: str, min_val: Optional[int] = None) -> int:
        value = self._number(document, key)
        if value != int(value):
            raise ScenarioError(key, f"expected an integer, got {value:g}")
        if not ValidationRules.validate_numeric_range(value, min_val=min_val):
            raise ScenarioError(key, f"must be at least {min_val}, got {value:g}")
        return int(value)

    def _vector(self, document: Dict[str, Any], key: str, size: int, default=None) -> np.ndarray:
        if key not in document:
            if default is None:
                raise ScenarioError(key, Config.ERROR_MESSAGES['required'])
            return np.asarray(default, dtype=float)

        value = document[key]
        if not isinstance(value, list):
            raise ScenarioError(key, Config.ERROR_MESSAGES['not_list'].format(size))
        if len(value) != size:
            raise ScenarioError(key, Config.ERROR_MESSAGES['length'].format(size, len(value)))
        if any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in value):
            raise ScenarioError(key, Config.ERROR_MESSAGES['entry_not_numeric'])
        return np.asarray(value, dtype=float)

    def _table(self, document: Dict[str, Any], key: str, rows: int, cols: int) -> np.ndarray:
        if key not in document:
            raise ScenarioError(key, Config.ERROR_MESSAGES['required'])
        value = document[key]
        if not isinstance(value, list) or len(value) != rows:
            got = len(value) if isinstance(value, list) else type(value).__name__
            raise ScenarioError(key, Config.ERROR_MESSAGES['rows'].format(rows, got))
        for r, row in enumerate(value):
            if not isinstance(row, list) or len(row) != cols:
                got = len(row) if isinstance(row, list) else type(row).__name__
                raise ScenarioError(key, Config.ERROR_MESSAGES['row_length'].format(r, got, cols))
            if any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in row):
                raise ScenarioError(key, f"stage {r}: {Config.ERROR_MESSAGES['not_numeric']}")
        return np.asarray(value, dtype=float)

    def get_plan_summary(self, scenario: Scenario, traj: PlanTrajectory) -> Dict[str, Any]:
        """
        Per-stage totals and the violation list of a trajectory.

        Args:
            scenario: planning scenario
            traj: solved or replayed trajectory

        Returns:
            dict: JSON-ready summary
        """
        df = traj.to_frame()
        df['carbon'] = df['v'] * np.tile(scenario.carbon_rates, traj.horizon + 1)
        by_stage = df.groupby('t').agg(area=('v', 'sum'), carbon=('carbon', 'sum'),
                                       harvest=('u', 'sum'), planting=('w', 'sum'))

        return {
            'status': traj.status,
            'criterion': scenario.criterion,
            'objective_value': float(traj.objective_value),
            'feasible': bool(traj.feasible),
            'area_by_stage': by_stage['area'].tolist(),
            'carbon_by_stage': by_stage['carbon'].tolist(),
            'harvest_by_stage': by_stage['harvest'].tolist()[:traj.horizon],
            'planting_by_stage': by_stage['planting'].tolist()[:traj.horizon],
            'violations': [self._violation_record(v) for v in traj.violations],
            'pivots': int(traj.pivots),
        }

    @staticmethod
    def _violation_record(violation: Violation) -> Dict[str, Any]:
        return {
            'constraint': violation.constraint,
            'stage': int(violation.stage),
            'residual': float(violation.residual),
            'age_class': None if violation.age_class is None else int(violation.age_class),
        }

    def export_trajectory(self, traj: PlanTrajectory, out_dir: PathLike) -> Path:
        """Write trajectory.csv (t, age_class, v, u, w) at full precision."""
        path = Path(out_dir) / Config.TRAJECTORY_FILE
        path.parent.mkdir(parents=True, exist_ok=True)
        traj.to_frame().to_csv(path, index=False, float_format='%.17g')
        return path

    def export_json(self, payload: Dict[str, Any], out_dir: PathLike, filename: str) -> Path:
        path = Path(out_dir) / filename
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open('w', encoding='utf-8') as handle:
            json.dump(payload, handle, indent=2, sort_keys=True)
            handle.write('\n')
        return path
