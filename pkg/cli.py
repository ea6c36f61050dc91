"""
Command-line entry point: train, eval, report, overestimation, scenario.
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

from models.agent import Algo
from models.navigation import TerminalKind
from models.run import RunConfig
from models.study import STUDY_COLUMNS, OverestimationConfig
from services.evaluation_service import EvaluationService
from services.overestimation_service import OverestimationService
from services.report_service import ReportService
from services.training_service import TrainingService
from services.world_service import WorldService
from utils.errors import ConfigurationError, NavError
from utils.file_utils import FileUtils
from utils.logging_utils import LoggingUtils

logger = logging.getLogger('cli')

CONFIG_SECTIONS = ('env', 'agent')


def load_train_config(path: Optional[str]) -> dict:
    """Sections 'env' and 'agent' of a JSON config file"""
    if not path:
        return {section: {} for section in CONFIG_SECTIONS}
    data = FileUtils.read_json(path)
    unknown = sorted(set(data) - set(CONFIG_SECTIONS))
    if unknown:
        raise ConfigurationError(f"Unknown config section(s) in {path}: {', '.join(unknown)}")
    config = {}
    for section in CONFIG_SECTIONS:
        value = data.get(section, {})
        if not isinstance(value, dict):
            raise ConfigurationError(f"Config section '{section}' in {path} must be an object")
        config[section] = value
    return config


def cmd_train(args: argparse.Namespace) -> int:
    config = load_train_config(args.config)
    run = RunConfig(
        scenario_id=args.scenario,
        algo=Algo.parse(args.algo),
        episodes=args.episodes,
        seed=args.seed,
        output_directory=args.out,
        env_overrides=config['env'],
        agent_overrides=config['agent'],
        checkpoint_interval=args.checkpoint_interval,
        show_progress=not args.no_progress
    )
    records = TrainingService.train(run)
    arrived = sum(r.outcome is TerminalKind.ARRIVED for r in records[-100:])
    print(f"Trained {len(records)} episodes; last {min(100, len(records))}: {arrived} arrivals")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    summary = EvaluationService.evaluate(args.checkpoint, args.scenario, args.trials_per_goal,
                                         args.seed, out_dir=args.out, workers=args.workers)
    sys.stdout.write(ReportService.format_text([summary]))
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    summaries = ReportService.load_summaries(args.inputs)
    sys.stdout.write(ReportService.report(summaries, args.format))
    return 0


def cmd_overestimation(args: argparse.Namespace) -> int:
    cfg = OverestimationConfig.from_dict(FileUtils.read_json(args.config)) if args.config else OverestimationConfig()
    if args.seeds is not None:
        cfg.seeds = list(range(args.seeds))
    if args.steps is not None:
        cfg.steps = args.steps
    if cfg.measure_last > cfg.steps:
        raise ConfigurationError(f"measure_last ({cfg.measure_last}) exceeds steps ({cfg.steps})")
    outcomes = OverestimationService.run_study(cfg, show_progress=not args.no_progress)
    for o in outcomes:
        print(f"seed {o.seed:3d}  DQN {o.dqn_max_q:+.4f}  DDQN {o.ddqn_max_q:+.4f}")
    print(f"DQN above DDQN in {sum(o.dqn_higher for o in outcomes)} of {len(outcomes)} seeds")
    if args.out:
        FileUtils.ensure_writable_dir(args.out)
        FileUtils.write_csv(os.path.join(args.out, 'overestimation.csv'), [o.to_row() for o in outcomes],
                            STUDY_COLUMNS)
        FileUtils.write_json(os.path.join(args.out, 'overestimation_config.json'), cfg.to_dict())
    return 0


def cmd_scenario(args: argparse.Namespace) -> int:
    text = WorldService.serialize_world(WorldService.builtin_scenario(args.id))
    if args.out:
        FileUtils.write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(description="DQN / Double DQN mapless navigation in a 2D lidar simulator.")
    ap.add_argument("--log-level", default="INFO", choices=("DEBUG", "INFO", "WARNING", "ERROR"))
    sub = ap.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="Train an agent on a builtin scenario.")
    train.add_argument("--scenario", type=int, choices=(1, 2, 3), required=True)
    train.add_argument("--algo", choices=("dqn", "ddqn"), required=True)
    train.add_argument("--episodes", type=int, required=True)
    train.add_argument("--seed", type=int, required=True)
    train.add_argument("--out", required=True, help="Run directory.")
    train.add_argument("--config", default=None, help="JSON file with optional 'env' and 'agent' sections.")
    train.add_argument("--checkpoint-interval", type=int, default=500, help="Episodes between checkpoints.")
    train.add_argument("--no-progress", action="store_true", help="Disable the progress bar.")
    train.set_defaults(func=cmd_train)

    ev = sub.add_parser("eval", help="Greedy evaluation over four fixed goals.")
    ev.add_argument("--checkpoint", required=True)
    ev.add_argument("--scenario", type=int, choices=(1, 2, 3), required=True)
    ev.add_argument("--trials-per-goal", type=int, required=True)
    ev.add_argument("--seed", type=int, required=True)
    ev.add_argument("--out", required=True)
    ev.add_argument("--workers", type=int, default=1, help="Parallel trial threads.")
    ev.set_defaults(func=cmd_eval)

    report = sub.add_parser("report", help="Compare evaluation summaries.")
    report.add_argument("--in", dest="inputs", nargs="+", required=True, help="Evaluation output directories.")
    report.add_argument("--format", choices=("text", "csv"), default="text")
    report.set_defaults(func=cmd_report)

    over = sub.add_parser("overestimation", help="Toy-chain max-Q bias of DQN vs DDQN.")
    over.add_argument("--seeds", type=int, default=None, help="Number of seeds (0..N-1).")
    over.add_argument("--steps", type=int, default=None)
    over.add_argument("--config", default=None, help="JSON study config.")
    over.add_argument("--out", default=None)
    over.add_argument("--no-progress", action="store_true")
    over.set_defaults(func=cmd_overestimation)

    scenario = sub.add_parser("scenario", help="Export a builtin world file.")
    scenario.add_argument("--id", type=int, choices=(1, 2, 3), required=True)
    scenario.add_argument("--out", default=None)
    scenario.set_defaults(func=cmd_scenario)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    LoggingUtils.configure(args.log_level)
    try:
        return args.func(args)
    except NavError as e:
        logger.error("%s", e)
        return 1
    except OSError as e:
        logger.error("I/O error: %s", e)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
