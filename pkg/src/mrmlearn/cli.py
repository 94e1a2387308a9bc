"""Command-line interface: ``mrmlearn {learn,exploit,batch,inspect-table}``."""

import argparse
import random
import statistics
import sys
from pathlib import Path

from .agent import simulate_episode
from .errors import MrmError
from .experiments import (DOMAINS, MODES, format_csv, load_run_config, make_environment,
                          run_batch, run_trial)
from .formats import emit_mrm, parse_mrm
from .mdp import discounted_sum, product
from .solver import value_iteration


def _common(parser):
    parser.add_argument("--config", help="key = value settings file")
    parser.add_argument("--domain", choices=DOMAINS)
    parser.add_argument("--mode", choices=MODES)
    parser.add_argument("--apf", type=float, help="action precision factor in (0, 1]")
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="output file (default: stdout)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mrmlearn",
        description="Learn hidden Mealy reward machines by acting in a known MDP.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="run one trial and print the learned machine")
    _common(p)

    p = sub.add_parser("exploit", help="solve the product with a machine and evaluate it")
    _common(p)
    p.add_argument("--machine", help=".mrm file to exploit (default: learn one first)")
    p.add_argument("--episodes", type=int, default=100)
    p.add_argument("--horizon", type=int, default=200)

    p = sub.add_parser("batch", help="run seeded trials and write the metrics CSV")
    _common(p)
    p.add_argument("--jobs", type=int, help="worker processes")

    p = sub.add_parser("inspect-table", help="run one trial and print the observation table")
    _common(p)
    return parser


def _config(args):
    overrides = {k: getattr(args, k, None)
                 for k in ("domain", "mode", "apf", "trials", "seed", "jobs")}
    if args.out:
        overrides["output"] = args.out
    return load_run_config(args.config, overrides)


def _write(text, path):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _learn(cfg):
    res = run_trial(cfg, 0, keep_model=True)
    print(f"# seed {res.seed}: {len(res.hypothesis)} nodes, learned_ok={res.learned_ok}, "
          f"mq_attempts={res.mq_attempts}, counterexamples={res.counterexamples}, "
          f"return={res.total_return:g}", file=sys.stderr)
    return res


def cmd_learn(cfg):
    _write(emit_mrm(_learn(cfg).hypothesis), cfg.output)


def cmd_inspect_table(cfg):
    _write(_learn(cfg).table.dump() + "\n", cfg.output)


def cmd_batch(cfg):
    _write(format_csv(run_batch(cfg)), cfg.output)


def cmd_exploit(cfg, args):
    env = make_environment(cfg)
    if args.machine:
        machine = parse_mrm(Path(args.machine).read_text())
    else:
        machine = _learn(cfg).hypothesis
    lcfg = cfg.learner_config()
    prod = product(env.mdp, env.labeling, machine)
    values, strategy = value_iteration(prod, lcfg.gamma)
    rng = random.Random(cfg.seed)
    returns = [discounted_sum(simulate_episode(env, env.machine, strategy, args.horizon, rng,
                                               planner_machine=machine), lcfg.gamma)
               for _ in range(args.episodes)]
    sd = statistics.stdev(returns) if len(returns) > 1 else 0.0
    print(f"# V(s0, u0) = {values[prod.initial]:.6f} under the exploited machine; "
          f"true discounted return {statistics.fmean(returns):.4f} ± {sd:.4f} "
          f"over {args.episodes} episodes", file=sys.stderr)
    _write(strategy.to_text(), cfg.output)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "learn":
            cmd_learn(cfg)
        elif args.command == "exploit":
            if args.episodes < 1 or args.horizon < 1:
                raise MrmError("episodes and horizon must be positive")
            cmd_exploit(cfg, args)
        elif args.command == "batch":
            cmd_batch(cfg)
        else:
            cmd_inspect_table(cfg)
    except (MrmError, OSError) as exc:
        print(f"mrmlearn: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
