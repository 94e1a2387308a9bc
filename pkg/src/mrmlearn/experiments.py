"""Seeded experiment batches and their CSV report."""

import csv
import io
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

from .agent import (LearnerConfig, run_approximate_active_learning,
                    run_optimal_active_learning)
from .automata import equivalent
from .envs import Environment, build_cookie_domain, build_treasure_map, parse_grid
from .envs.gridworld import cell_name
from .errors import ConfigError
from .formats import parse_key_values, parse_labels, parse_mdp, parse_mrm

DOMAINS = ("treasure", "cookie", "custom")
MODES = ("learn-random", "learn-mcts", "optimal")
COLUMNS = ("trial", "seed", "apf", "return", "mq_attempts", "counterexamples",
           "learn_seconds", "exploit_seconds", "epochs", "learned_ok")
TIMING_COLUMNS = ("learn_seconds", "exploit_seconds")

# how membership queries are answered when the config does not say
_DOMAIN_MQ_PLANNER = {"treasure": "mcts", "cookie": "random", "custom": "mcts"}


@dataclass
class RunConfig:
    domain: str = "treasure"
    mode: str = "learn-mcts"
    apf: float = 0.95
    trials: int = 10
    seed: int = 0
    output: str = ""
    jobs: int = 1
    mdp: str = ""
    labels: str = ""
    grid: str = ""
    machine: str = ""
    learner: dict = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.domain not in DOMAINS:
            raise ConfigError(f"domain must be one of {DOMAINS}, got {self.domain!r}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.trials < 1:
            raise ConfigError(f"trials must be at least 1, got {self.trials}")
        if not 0.0 < self.apf <= 1.0:
            raise ConfigError(f"apf must lie in (0, 1], got {self.apf}")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        if self.domain == "custom":
            if not self.machine:
                raise ConfigError("custom domain needs 'machine' (the hidden reward machine)")
            if not self.grid and not (self.mdp and self.labels):
                raise ConfigError("custom domain needs 'grid' or both 'mdp' and 'labels'")
        unknown = set(self.learner) - set(LearnerConfig.field_names())
        if unknown:
            raise ConfigError(f"unknown learner setting(s): {sorted(unknown)}")
        self.learner_config()

    def learner_config(self):
        settings = {
            "mq_planner": _DOMAIN_MQ_PLANNER[self.domain],
            "exploit_planner": "random" if self.mode == "learn-random" else "mcts",
            "ct_planner": _DOMAIN_MQ_PLANNER[self.domain],
        }
        settings.update(self.learner)
        try:
            return LearnerConfig(**settings)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None


def _convert(value, kind, key, lineno):
    try:
        if kind is bool:
            low = value.lower()
            if low not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(value)
            return low in ("true", "1", "yes")
        if kind is int:
            return int(value)
        if kind is float:
            return float(value)
        return value
    except ValueError:
        where = f"line {lineno}: " if lineno else ""
        raise ConfigError(f"{where}{key} = {value!r} is not a valid {kind.__name__}") from None


_RUN_TYPES = {f.name: f.type for f in fields(RunConfig) if f.name != "learner"}
_LEARNER_TYPES = {f.name: f.type for f in fields(LearnerConfig)}
_TYPES = {"str": str, "int": int, "float": float, "bool": bool}


def _kind(t):
    return _TYPES.get(t, t) if isinstance(t, str) else t


def build_run_config(pairs, base_dir=None):
    """``RunConfig`` from ``{key: (value, lineno)}``; relative paths resolve against ``base_dir``."""
    run, learner = {}, {}
    for key, (value, lineno) in pairs.items():
        if key in _RUN_TYPES:
            v = _convert(value, _kind(_RUN_TYPES[key]), key, lineno)
            if key in ("mdp", "labels", "grid", "machine", "output") and v and base_dir:
                v = str(Path(base_dir, v)) if not Path(v).is_absolute() else v
            run[key] = v
        elif key in _LEARNER_TYPES:
            learner[key] = _convert(value, _kind(_LEARNER_TYPES[key]), key, lineno)
        else:
            where = f"line {lineno}: " if lineno else ""
            raise ConfigError(f"{where}unknown setting {key!r}")
    return RunConfig(learner=learner, **run)


def load_run_config(path, overrides=None):
    """Read a key = value file; ``overrides`` (plain values) win over the file."""
    pairs = {}
    base = None
    if path:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        pairs = parse_key_values(text)
        base = Path(path).parent
    for key, value in (overrides or {}).items():
        if value is not None:
            pairs[key] = (str(value), 0)
    return build_run_config(pairs, base)


def make_environment(cfg):
    if cfg.domain == "treasure":
        return build_treasure_map(cfg.apf)
    if cfg.domain == "cookie":
        return build_cookie_domain()
    machine = parse_mrm(_read(cfg.machine))
    if cfg.grid:
        grid = parse_grid(_read(cfg.grid), cfg.apf)
        mdp, lab = grid.build()
        starts = [cell_name(c) for c in grid.null_cells()]
    else:
        mdp = parse_mdp(_read(cfg.mdp))
        lab = parse_labels(_read(cfg.labels), mdp)
        starts = None
    return Environment("custom", mdp, lab, machine, starts)


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None


@dataclass
class TrialResult:
    trial: int
    seed: int
    apf: float
    total_return: float
    mq_attempts: int
    counterexamples: int
    learn_seconds: float
    exploit_seconds: float
    epochs: int
    learned_ok: int
    hypothesis: object = None
    table: object = None

    def row(self):
        return [str(self.trial), str(self.seed), f"{self.apf:g}", f"{self.total_return:.4f}",
                str(self.mq_attempts), str(self.counterexamples), f"{self.learn_seconds:.4f}",
                f"{self.exploit_seconds:.4f}", str(self.epochs), str(self.learned_ok)]


def run_trial(cfg, trial, keep_model=False):
    """One seeded trial; the environment, table and rng are private to it."""
    seed = cfg.seed + trial
    rng = random.Random(seed)
    env = make_environment(cfg)
    lcfg = cfg.learner_config()
    if cfg.mode == "optimal":
        hyp, _, table, log = run_optimal_active_learning(env, lcfg, rng)
    else:
        hyp, table, log = run_approximate_active_learning(env, lcfg, rng)
    ok = int(equivalent(hyp, env.machine) is None)
    return TrialResult(trial, seed, cfg.apf, log.total_return, log.mq_attempts,
                       log.counterexamples, log.learn_seconds, log.exploit_seconds,
                       log.epochs, ok, hyp if keep_model else None,
                       table if keep_model else None)


def _run_trial_star(args):
    return run_trial(*args)


def run_batch(cfg):
    """Trials ``seed, seed+1, ...``, returned in trial order."""
    jobs = [(cfg, i) for i in range(cfg.trials)]
    if cfg.jobs > 1 and cfg.trials > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            return list(pool.map(_run_trial_star, jobs))
    return [run_trial(c, i) for c, i in jobs]


def _mean_sd(values):
    m = statistics.fmean(values)
    sd = statistics.stdev(values) if len(values) > 1 else 0.0
    return f"{m:.4f}±{sd:.4f}"


def summary_row(results):
    cols = {
        "return": [r.total_return for r in results],
        "mq_attempts": [r.mq_attempts for r in results],
        "counterexamples": [r.counterexamples for r in results],
        "learn_seconds": [r.learn_seconds for r in results],
        "exploit_seconds": [r.exploit_seconds for r in results],
        "epochs": [r.epochs for r in results],
        "learned_ok": [r.learned_ok for r in results],
    }
    apfs = {r.apf for r in results}
    apf = f"{results[0].apf:g}" if len(apfs) == 1 else ""
    return ["mean±sd", "", apf] + [_mean_sd(cols[c]) for c in COLUMNS[3:]]


def format_csv(results):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in results:
        writer.writerow(r.row())
    writer.writerow(summary_row(results))
    return buf.getvalue()


def strip_timing(csv_text):
    """CSV text with the wall-clock columns blanked, for reproducibility checks."""
    rows = list(csv.reader(io.StringIO(csv_text)))
    drop = [rows[0].index(c) for c in TIMING_COLUMNS]
    for row in rows:
        for i in drop:
            row[i] = ""
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def summarize(results):
    """``{column: (mean, sd)}`` for the numeric columns."""
    out = {}
    for name, attr in (("return", "total_return"), ("mq_attempts", "mq_attempts"),
                       ("counterexamples", "counterexamples"), ("epochs", "epochs"),
                       ("learn_seconds", "learn_seconds"),
                       ("exploit_seconds", "exploit_seconds"), ("learned_ok", "learned_ok")):
        vals = [getattr(r, attr) for r in results]
        out[name] = (statistics.fmean(vals),
                     statistics.stdev(vals) if len(vals) > 1 else 0.0)
    return out

