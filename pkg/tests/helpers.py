"""Shared oracles and generators for the test suite."""

import itertools
import random

import numpy as np

from mrmlearn.automata import MealyRewardMachine, equivalent
from mrmlearn.lstar import ObservationTable
from mrmlearn.mdp import NrMdp, ProductMdp

SYMBOLS = "abcd"


def random_machine(rng, max_nodes=5, max_symbols=4, rewards=range(10), default=0.0):
    n = rng.randint(1, max_nodes)
    k = rng.randint(1, max_symbols)
    nodes = [f"n{i}" for i in range(n)]
    alphabet = list(SYMBOLS[:k])
    delta = {(u, z): rng.choice(nodes) for u in nodes for z in alphabet}
    out = {(u, z): float(rng.choice(rewards)) for u in nodes for z in alphabet}
    return MealyRewardMachine(nodes, nodes[0], alphabet, delta, out, default)


def learn_with_teacher(target, mode="suffixes"):
    """L* with exact membership answers and ``equivalent`` as equivalence oracle.

    Returns ``(hypothesis, table, equivalence_queries, longest_counterexample)``.
    """
    table = ObservationTable(target.alphabet, counterexample_mode=mode)
    eqs = 0
    longest = 0
    while True:
        q = table.get_mq()
        while q is not None:
            table.resolve_mq(q, target.run(q))
            q = table.get_mq()
        hyp = table.build_reward_machine(target.default_reward)
        eqs += 1
        ce = equivalent(hyp, target)
        if ce is None:
            return hyp, table, eqs, longest
        longest = max(longest, len(ce))
        table.add_counterexample(ce, target.run(ce), hyp)


def brute_equal(m1, m2, max_len):
    """Compare two machines on every trace up to ``max_len``."""
    for n in range(max_len + 1):
        for trace in itertools.product(m1.alphabet, repeat=n):
            if m1.run(trace) != m2.run(trace):
                return False
    return True


def minimal_size(machine):
    """Number of distinguishable reachable nodes, by partition refinement."""
    nodes = machine.reachable_nodes()
    block = {u: tuple(machine.rewards[(u, z)] for z in machine.alphabet) for u in nodes}
    while True:
        refined = {u: (block[u],) + tuple(block[machine.transitions[(u, z)]]
                                          for z in machine.alphabet) for u in nodes}
        if len(set(refined.values())) == len(set(block.values())):
            return len(set(block.values()))
        block = refined


def random_mdp(rng, n_states, n_actions, max_succ=2):
    states = [f"s{i}" for i in range(n_states)]
    actions = [f"a{i}" for i in range(n_actions)]
    trans = {}
    for s in states:
        for a in actions:
            succ = rng.sample(states, rng.randint(1, min(max_succ, n_states)))
            weights = [rng.randint(1, 4) for _ in succ]
            total = sum(weights)
            trans[(s, a)] = [(s2, w / total) for s2, w in zip(succ, weights)]
    return NrMdp(states, actions, trans, states[0])


def enumerate_strategies(p):
    """Every memoryless strategy of a product MDP."""
    choices = [p.available_actions(x) for x in p.states]
    for combo in itertools.product(*choices):
        yield dict(zip(p.states, combo))


def exact_policy_value(p, strat, gamma):
    """Dense solve of ``(I - gamma P) v = gamma R`` (values count the first reward once discounted)."""
    n = len(p.states)
    idx = p.state_index
    a = np.eye(n)
    b = np.zeros(n)
    for x in p.states:
        i = idx[x]
        for x2, pr, r in p.transitions[(x, strat[x])]:
            b[i] += gamma * pr * r
            a[i, idx[x2]] -= gamma * pr
    v = np.linalg.solve(a, b)
    return {x: float(v[idx[x]]) for x in p.states}


def single_state_product(rewards):
    """One product state with one deterministic self-loop per reward."""
    x = ("s", "u")
    actions = [f"a{i}" for i in range(len(rewards))]
    trans = {(x, a): ((x, 1.0, float(r)),) for a, r in zip(actions, rewards)}
    return ProductMdp([x], actions, trans, x)


def seeded(seed):
    return random.Random(seed)
