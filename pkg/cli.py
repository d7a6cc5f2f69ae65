"""
Batch command-line front end for the Forest Planning Workbench.

    plan       --scenario <file|dir> --out <dir>
    simulate   --scenario <file> --policy <file> --out <dir>
    condorcet  --n <int>
    entropy    <p1> <p2> ...

Exit codes: 0 success, 1 parse/usage error, 2 infeasible, 3 unbounded.
"""

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

from config import Config, ErrorHandler
from modules import info_measures, planner, social_choice
from modules.data_processor import DataProcessor
from utils import safe_execute, setup_logging

logger = logging.getLogger(__name__)

class UsageError(Exception):
    """Bad command-line arguments."""

class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)

def _fmt(value: float) -> str:
    return f"{value:.{Config.FLOAT_DECIMALS}f}"

def _plan_one(scenario_path: Path, out_dir: Path) -> int:
    processor = DataProcessor()
    label = f"plan {scenario_path.name}"
    try:
        scenario = processor.load_scenario(scenario_path)
    except Exception as e:
        return ErrorHandler.handle_cli_error(e, label)

    try:
        traj = planner.solve_plan(scenario)
    except (planner.InfeasibleScenario, planner.UnboundedModel) as e:
        status = 'Infeasible' if isinstance(e, planner.InfeasibleScenario) else 'Unbounded'
        processor.export_json({'status': status, 'message': str(e)}, out_dir, Config.SUMMARY_FILE)
        return ErrorHandler.handle_cli_error(e, label)
    except Exception as e:
        return ErrorHandler.handle_cli_error(e, label)

    processor.export_trajectory(traj, out_dir)
    processor.export_json(processor.get_plan_summary(scenario, traj), out_dir, Config.SUMMARY_FILE)

    verdict = "feasible" if traj.feasible else f"{len(traj.violations)} violations"
    print(f"{scenario_path.name}: objective = {_fmt(traj.objective_value)} ({traj.status}, {verdict})")
    return Config.EXIT_OK

def cmd_plan(scenario_path, out_dir) -> int:
    """Plan one scenario file, or every *.json scenario in a directory in parallel."""
    scenario_path, out_dir = Path(scenario_path), Path(out_dir)
    if not scenario_path.is_dir():
        return _plan_one(scenario_path, out_dir)

    files = sorted(scenario_path.glob('*.json'))
    if not files:
        print(f"❌ plan: no *.json scenarios in {scenario_path}", file=sys.stderr)
        return Config.EXIT_PARSE_ERROR

    workers = min(Config.MAX_WORKERS, len(files))
    logger.info(f"Planning {len(files)} scenarios with {workers} workers")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_plan_one, f, out_dir / f.stem) for f in files]
        codes = [
            safe_execute(future.result, f"plan {f.name}", Config.EXIT_PARSE_ERROR)
            for f, future in zip(files, futures)
        ]
    return max(codes)

def cmd_simulate(scenario_path, policy_path, out_dir) -> int:
    """Replay a fixed policy as given and report every constraint it breaks."""
    processor = DataProcessor()
    try:
        scenario = processor.load_scenario(scenario_path)
        harvest, plant = processor.load_policy(policy_path, scenario)
        traj = planner.replay_policy(scenario, harvest, plant)
    except Exception as e:
        return ErrorHandler.handle_cli_error(e, "simulate")

    processor.export_trajectory(traj, out_dir)
    processor.export_json(processor.get_plan_summary(scenario, traj), out_dir, Config.FEASIBILITY_FILE)

    print(f"objective = {_fmt(traj.objective_value)}")
    if traj.feasible:
        print("feasible")
        return Config.EXIT_OK

    print(f"infeasible: {len(traj.violations)} violations")
    for v in traj.violations:
        label = Config.VIOLATION_LABELS.get(v.constraint, v.constraint)
        where = f", age class {v.age_class}" if v.age_class is not None else ""
        print(f"  {label} at stage {v.stage}{where}: residual {_fmt(v.residual)}")
    return Config.EXIT_INFEASIBLE

def cmd_condorcet(n: int) -> int:
    """Print the generalized Condorcet profile, its majority edges and the cycle."""
    if n < 3:
        print(f"❌ condorcet: usage error: --n must be at least 3, got {n}", file=sys.stderr)
        return Config.EXIT_PARSE_ERROR

    profile = social_choice.condorcet_profile(n)
    graph = social_choice.majority_aggregate(profile)
    cycle = social_choice.find_cycle(graph)

    print(f"Profile ({n} candidates, {profile.n_representatives} representatives):")
    for k, pairs in enumerate(profile.prefs, start=1):
        stated = ", ".join(f"a{i} > a{j}" for i, j in sorted(pairs))
        print(f"  rep {k}: {stated}")

    print("Majority edges:")
    print(graph.to_frame().to_string(index=False))

    if cycle is None:
        print("Cycle: none")
    else:
        print("Cycle: " + " -> ".join(str(c) for c in cycle + cycle[:1]))
    return Config.EXIT_OK

def cmd_entropy(probs: Sequence[float]) -> int:
    """Print the entropy of a distribution in bits and the maximum log2 n."""
    try:
        state = info_measures.DiscreteState(probs)
    except info_measures.InvalidDistribution as e:
        return ErrorHandler.handle_cli_error(e, "entropy")

    h = info_measures.entropy(state)
    print(f"H = {_fmt(h)} bits (max {_fmt(info_measures.max_entropy(state.n))})")
    return Config.EXIT_OK

def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog='workbench', description=f"{Config.APP_NAME}: {Config.APP_DESCRIPTION}")
    parser.add_argument('--version', action='version', version=f"%(prog)s {Config.APP_VERSION}")
    parser.add_argument('--log-level', default=Config.LOG_LEVEL,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    sub = parser.add_subparsers(dest='command', required=True)

    plan = sub.add_parser('plan', help="Solve a scenario (or a directory of scenarios)")
    plan.add_argument('--scenario', type=Path, required=True)
    plan.add_argument('--out', type=Path, required=True)

    sim = sub.add_parser('simulate', help="Replay a fixed policy and check feasibility")
    sim.add_argument('--scenario', type=Path, required=True)
    sim.add_argument('--policy', type=Path, required=True)
    sim.add_argument('--out', type=Path, required=True)

    condorcet = sub.add_parser('condorcet', help="Generalized Condorcet cycle demonstration")
    condorcet.add_argument('--n', type=int, required=True)

    entropy = sub.add_parser('entropy', help="Entropy of a probability vector")
    entropy.add_argument('probs', type=float, nargs='+')

    return parser

def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print(f"❌ usage error: {e}", file=sys.stderr)
        return Config.EXIT_PARSE_ERROR

    setup_logging(args.log_level)
    if not Config.validate_config():
        return Config.EXIT_PARSE_ERROR

    if args.command == 'plan':
        return cmd_plan(args.scenario, args.out)
    if args.command == 'simulate':
        return cmd_simulate(args.scenario, args.policy, args.out)
    if args.command == 'condorcet':
        return cmd_condorcet(args.n)
    return cmd_entropy(args.probs)

if __name__ == "__main__":
    sys.exit(main())
