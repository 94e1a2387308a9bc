"""Learning agents: membership queries answered by acting in the environment.

Two drivers are provided. :func:`run_approximate_active_learning` alternates
L* with exploitation of a high-reward observation sequence and learns from
any reward it failed to predict. :func:`run_optimal_active_learning` solves
the product of the known MDP and the current hypothesis, exploits the
resulting strategy when it promises enough, and otherwise hunts for
counterexamples by conformance testing.
"""

import math
import time
from dataclasses import dataclass, field, fields

from .automata import NULL, REWARD_TOL
from .errors import ConfigError
from .lstar import COUNTEREXAMPLE_MODES, ObservationTable
from .mdp import (InteractionTrace, discounted_sum, extract_obs_trace, product,
                  sample_transition, strip_null)
from .planning import MctsPlanner, RandomPlanner
from .solver import value_iteration

PLANNERS = ("mcts", "random")


@dataclass
class LearnerConfig:
    gamma: float = 0.95
    theta: float = -math.inf
    dynamic_theta: bool = False
    beta: float = 0.5
    k: int = 6
    acts_to_ext: int = 2000
    mq_action_budget: int = 1000
    mq_max_attempts: int = 200
    arbitrary_reward: float = 0.0
    ct_bound: int = 4
    ct_budget: int = 500
    reset_after: int = 100
    max_rounds: int = 50
    table_tol: float = 0.0
    counterexample_mode: str = "shortest"
    mq_planner: str = "mcts"
    exploit_planner: str = "mcts"
    ct_planner: str = "mcts"
    mcts_trajectories: int = 100
    mcts_depth: int = 30
    mcts_exploration: float = math.sqrt(2)
    mcts_x: float = 1.0
    mcts_y: float = 10.0
    mcts_rollout_greedy: float = 0.9

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not 0.0 < self.gamma < 1.0:
            raise ConfigError(f"gamma must lie in (0, 1), got {self.gamma}")
        for name in ("k", "acts_to_ext", "mq_max_attempts", "mq_action_budget",
                     "mcts_trajectories", "mcts_depth", "ct_bound", "reset_after"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1")
        if not 0.0 <= self.beta <= 1.0:
            raise ConfigError(f"beta must lie in [0, 1], got {self.beta}")
        for name in ("ct_budget", "max_rounds"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if not self.mcts_y > self.mcts_x > 0:
            raise ConfigError("MCTS shaping needs y > x > 0")
        if not 0.0 <= self.mcts_rollout_greedy <= 1.0:
            raise ConfigError("mcts_rollout_greedy must lie in [0, 1]")
        for name in ("mq_planner", "exploit_planner", "ct_planner"):
            if getattr(self, name) not in PLANNERS:
                raise ConfigError(f"{name} must be one of {PLANNERS}")
        if self.counterexample_mode not in COUNTEREXAMPLE_MODES:
            raise ConfigError(f"counterexample_mode must be one of {COUNTEREXAMPLE_MODES}")

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]


@dataclass
class ExperimentLog:
    total_return: float = 0.0
    mq_attempts: int = 0
    membership_queries: int = 0
    counterexamples: int = 0
    learn_seconds: float = 0.0
    exploit_seconds: float = 0.0
    epochs: int = 0
    exploit_actions: int = 0
    ct_rounds: int = 0
    hypothesis_sizes: list = field(default_factory=list)


def make_planner(kind, env, cfg):
    if kind == "random":
        return RandomPlanner(env.model)
    return MctsPlanner(env.model, trajectories=cfg.mcts_trajectories, depth=cfg.mcts_depth,
                       exploration=cfg.mcts_exploration, x=cfg.mcts_x, y=cfg.mcts_y,
                       rollout_greedy=cfg.mcts_rollout_greedy)


def get_experience(env, query, planner, cfg, rng, table=None, log=None):
    """Try to make the environment emit ``query``; return its rewards or ``None``.

    Each attempt resets the environment and chases the query symbols in
    order. An attempt fails as soon as a non-null observation differs from
    the symbol being chased or the action budget runs out. Queries the
    known model cannot produce at all are reported unanswerable at once.
    Partial experience from every attempt is fed into ``table``.
    """
    query = tuple(query)
    if not query:
        return []
    if not env.model.realizable(query):
        return None
    for _ in range(cfg.mq_max_attempts):
        if log is not None:
            log.mq_attempts += 1
        env.reset()
        seen, rewards = [], []
        acts = 0
        while len(seen) < len(query) and acts < cfg.mq_action_budget:
            want = query[len(seen)]
            a = planner.plan(want, env.state, rng)
            _, z, r = env.step(a, rng)
            acts += 1
            if z == NULL:
                continue
            seen.append(z)
            rewards.append(r)
            if z != want:
                break
        if table is not None and seen:
            table.record(seen, rewards)
        if tuple(seen) == query:
            return rewards
    return None


def good_obs_seq(machine, k):
    """Observation sequence of length ``k`` with the largest reward sum from the start node.

    Ties go to the lexicographically first sequence in alphabet order.
    """
    best = [{u: 0.0 for u in machine.nodes}]
    for j in range(1, k + 1):
        prev = best[-1]
        best.append({u: max(machine.rewards[(u, z)] + prev[machine.transitions[(u, z)]]
                            for z in machine.alphabet) for u in machine.nodes})
    seq = []
    u = machine.start
    for j in range(k, 0, -1):
        for z in machine.alphabet:
            v = machine.transitions[(u, z)]
            if machine.rewards[(u, z)] + best[j - 1][v] == best[j][u]:
                seq.append(z)
                u = v
                break
    return seq


def _mismatch(pred, r, tol):
    return abs(pred - r) > max(tol, REWARD_TOL)


def conformance_test(env, hypothesis, cfg, planner, rng, log=None):
    """Random test sequences until the environment contradicts ``hypothesis``.

    Every test resets, draws a sequence of 1 to ``ct_bound + |Z|`` symbols
    and chases them one by one, tolerating wrong observations on the way.
    Returns the interaction trace that exposed a wrong reward, or ``None``
    after ``ct_budget`` tests.
    """
    alphabet = hypothesis.alphabet
    for _ in range(cfg.ct_budget):
        if log is not None:
            log.ct_rounds += 1
        length = rng.randint(1, cfg.ct_bound + len(alphabet))
        seq = [rng.choice(alphabet) for _ in range(length)]
        env.reset()
        trace = InteractionTrace([env.state])
        u = hypothesis.start
        for want in seq:
            if math.isinf(env.model.distance(want)[env.mdp.state_index[env.state]]):
                break
            for _ in range(cfg.mq_action_budget):
                a = planner.plan(want, env.state, rng)
                s2, z, r = env.step(a, rng)
                u, pred = hypothesis.step(u, z)
                trace.append(a, s2, r)
                if z != NULL and _mismatch(pred, r, cfg.table_tol):
                    return trace
                if z == want:
                    break
            else:
                break
    return None


def _learn(table, env, planner, cfg, rng, log):
    t0 = time.perf_counter()
    q = table.get_mq()
    while q is not None:
        table.resolve_mq(q, get_experience(env, q, planner, cfg, rng, table, log))
        q = table.get_mq()
    hyp = table.build_reward_machine(env.default_reward)
    log.membership_queries = table.membership_queries
    log.hypothesis_sizes.append(len(hyp))
    log.learn_seconds += time.perf_counter() - t0
    return hyp


def _new_table(env, cfg):
    return ObservationTable(env.alphabet, tol=cfg.table_tol,
                            arbitrary_reward=cfg.arbitrary_reward,
                            counterexample_mode=cfg.counterexample_mode)


def _exploit_sequence(env, hyp, seq, planner, cfg, rng, log, acts, budget, on_reset):
    """Chase ``seq`` epoch after epoch until a counterexample or the budget."""
    while acts < budget:
        log.epochs += 1
        env.reset_random(rng)
        u = hyp.start
        if on_reset is not None:
            on_reset(env, hyp, u)
        obs, rews = [], []
        for want in seq:
            while acts < budget:
                a = planner.plan(want, env.state, rng)
                _, z, r = env.step(a, rng)
                acts += 1
                log.total_return += r
                log.exploit_actions += 1
                u, pred = hyp.step(u, z)
                if z != NULL:
                    obs.append(z)
                    rews.append(r)
                    if _mismatch(pred, r, cfg.table_tol):
                        return ((obs, rews) if acts < budget else None), acts
                if z == want:
                    break
    return None, acts


def run_approximate_active_learning(env, cfg, rng, max_actions=None, table=None,
                                    on_reset=None):
    """Learn while exploiting ``good_obs_seq`` for ``max_actions`` actions.

    ``max_actions`` defaults to ``cfg.acts_to_ext``. Every exploitation
    epoch starts from a uniformly drawn start state of ``env``. If given,
    ``on_reset(env, hypothesis, node)`` is called after each reset.
    Returns ``(hypothesis, table, log)``.
    """
    budget = cfg.acts_to_ext if max_actions is None else max_actions
    log = ExperimentLog()
    table = table or _new_table(env, cfg)
    mq_planner = make_planner(cfg.mq_planner, env, cfg)
    ex_planner = make_planner(cfg.exploit_planner, env, cfg)
    acts = 0
    while True:
        hyp = _learn(table, env, mq_planner, cfg, rng, log)
        if acts >= budget:
            break
        seq = good_obs_seq(hyp, cfg.k)
        t0 = time.perf_counter()
        ce, acts = _exploit_sequence(env, hyp, seq, ex_planner, cfg, rng, log, acts, budget,
                                     on_reset)
        log.exploit_seconds += time.perf_counter() - t0
        if ce is None:
            break
        table.add_counterexample(ce[0], ce[1], hyp)
        log.counterexamples += 1
    return hyp, table, log


class Threshold:
    """Exploitation threshold, fixed or following the best epoch return so far."""

    def __init__(self, cfg):
        self.fixed = cfg.theta
        self.dynamic = cfg.dynamic_theta
        self.beta = cfg.beta
        self.best = []

    @property
    def value(self):
        if not self.dynamic or not self.best:
            return self.fixed
        rho = self.best[-1]
        slope = self.best[-1] - self.best[-2] if len(self.best) > 1 else 0.0
        return rho + self.beta * slope

    def update(self, epoch_value):
        if self.dynamic:
            self.best.append(max(epoch_value, self.best[-1]) if self.best else epoch_value)


def _reset(env, hyp, on_reset):
    s, u = env.reset(), hyp.start
    if on_reset is not None:
        on_reset(env, hyp, u)
    return s, u


def _exploit_strategy(env, hyp, strategy, cfg, rng, log, acts, budget, threshold, on_reset):
    s, u = _reset(env, hyp, on_reset)
    epoch = []
    log.epochs += 1
    while acts < budget:
        a = strategy[(s, u)]
        s, z, r = env.step(a, rng)
        acts += 1
        log.total_return += r
        log.exploit_actions += 1
        u, pred = hyp.step(u, z)
        epoch.append((z, r))
        if z != NULL and _mismatch(pred, r, cfg.table_tol):
            obs, rews = strip_null([e[0] for e in epoch], [e[1] for e in epoch])
            return (obs, rews), acts
        if len(epoch) >= cfg.reset_after:
            value = discounted_sum([e[1] for e in epoch], cfg.gamma)
            low = value < threshold.value
            threshold.update(value)
            epoch = []
            if low:
                s, u = _reset(env, hyp, on_reset)
                log.epochs += 1
    return None, acts


def run_optimal_active_learning(env, cfg, rng, max_actions=None, table=None, on_reset=None):
    """Learn, then exploit the optimal product strategy whenever it clears the threshold.

    Every ``reset_after`` actions the discounted return of that window is
    compared with the threshold; a window below it restarts exploitation
    from the initial state.
    Returns ``(hypothesis, strategy, table, log)``.
    """
    budget = cfg.acts_to_ext if max_actions is None else max_actions
    log = ExperimentLog()
    table = table or _new_table(env, cfg)
    mq_planner = make_planner(cfg.mq_planner, env, cfg)
    ct_planner = make_planner(cfg.ct_planner, env, cfg)
    threshold = Threshold(cfg)
    acts = 0
    rounds = 0
    while True:
        hyp = _learn(table, env, mq_planner, cfg, rng, log)
        prod = product(env.mdp, env.labeling, hyp)
        values, strategy = value_iteration(prod, cfg.gamma)
        if acts >= budget or rounds >= cfg.max_rounds:
            break
        rounds += 1
        t0 = time.perf_counter()
        if values[prod.initial] >= threshold.value:
            ce, acts = _exploit_strategy(env, hyp, strategy, cfg, rng, log, acts, budget,
                                         threshold, on_reset)
            log.exploit_seconds += time.perf_counter() - t0
            if ce is None:
                break
        else:
            trace = conformance_test(env, hyp, cfg, ct_planner, rng, log)
            log.exploit_seconds += time.perf_counter() - t0
            if trace is None:
                break
            ce = strip_null(extract_obs_trace(trace, env.labeling), trace.rewards)
        table.add_counterexample(ce[0], ce[1], hyp)
        log.counterexamples += 1
    return hyp, strategy, table, log


def simulate_episode(env, machine, strategy, horizon, rng, start=None, planner_machine=None):
    """Rewards of one ``horizon``-step episode run on the NMRDP ``(env.mdp, machine)``.

    ``strategy`` is indexed by ``(state, node)`` of ``planner_machine``
    (default ``machine``), so a strategy computed for a hypothesis can be
    scored against the hidden machine.
    """
    tracker = machine if planner_machine is None else planner_machine
    s = env.mdp.initial if start is None else start
    u = machine.start
    w = tracker.start
    rewards = []
    for _ in range(horizon):
        a = strategy[(s, w)]
        s = sample_transition(env.mdp, s, a, rng)
        z = env.labeling(a, s)
        u, r = machine.step(u, z)
        w = tracker.step(w, z)[0]
        rewards.append(r)
    return rewards


def simulate_product_episode(prod, strategy, horizon, rng):
    """Rewards of one ``horizon``-step episode run directly on a product MDP."""
    x = prod.initial
    rewards = []
    for _ in range(horizon):
        x, r = prod.sample(x, strategy[x], rng)
        rewards.append(r)
    return rewards
