"""Observation-chasing planners over a known MDP and labeling function."""

import math
from collections import deque

import numpy as np

from . import kernels
from .automata import NULL


class FlatModel:
    """Index-based view of an ``NrMdp`` with labels attached to each outcome.

    Outcome ``k`` of state-action pair ``(s, a)`` lives at positions
    ``ptr[s*A + a] <= k < ptr[s*A + a + 1]``; ``lab[k]`` is the index of the
    observation in ``symbols`` (``-1`` for null).
    """

    def __init__(self, mdp, lab, symbols):
        self.mdp = mdp
        self.symbols = tuple(symbols)
        self.code = {z: i for i, z in enumerate(self.symbols)}
        S, A = len(mdp.states), len(mdp.actions)
        self.n_states, self.n_actions = S, A
        ptr = [0]
        succ, cum, labs = [], [], []
        for s in mdp.states:
            for a in mdp.actions:
                acc = 0.0
                for s2, p in mdp.transitions.get((s, a), ()):
                    acc += p
                    succ.append(mdp.state_index[s2])
                    cum.append(acc)
                    z = lab(a, s2)
                    labs.append(-1 if z == NULL else self.code.get(z, len(self.symbols)))
                ptr.append(len(succ))
        self.ptr = np.asarray(ptr, dtype=np.int64)
        self.succ = np.asarray(succ, dtype=np.int64)
        self.cum = np.asarray(cum, dtype=np.float64)
        self.lab = np.asarray(labs, dtype=np.int64)
        self._greedy = {}
        self._dist = {}

    def outcomes(self, si, ai):
        lo, hi = self.ptr[si * self.n_actions + ai], self.ptr[si * self.n_actions + ai + 1]
        return range(int(lo), int(hi))

    def distance(self, target):
        """Fewest steps from each state until ``target`` is observed, passing only null outcomes."""
        if target in self._dist:
            return self._dist[target]
        code = self.code[target]
        S, A = self.n_states, self.n_actions
        dist = np.full(S, np.inf)
        reverse = [[] for _ in range(S)]
        queue = deque()
        for si in range(S):
            for ai in range(A):
                for k in self.outcomes(si, ai):
                    if self.lab[k] == code:
                        if dist[si] > 1:
                            dist[si] = 1
                            queue.append(si)
                    elif self.lab[k] < 0:
                        reverse[int(self.succ[k])].append(si)
        while queue:
            s2 = queue.popleft()
            for si in reverse[s2]:
                if dist[si] > dist[s2] + 1:
                    dist[si] = dist[s2] + 1
                    queue.append(si)
        self._dist[target] = dist
        return dist

    def greedy_actions(self, target):
        """Per state, the lowest-index action with a best-case shortest path to ``target``."""
        if target in self._greedy:
            return self._greedy[target]
        code = self.code[target]
        dist = self.distance(target)
        out = np.full(self.n_states, -1, dtype=np.int64)
        for si in range(self.n_states):
            best = math.inf
            for ai in range(self.n_actions):
                q = math.inf
                for k in self.outcomes(si, ai):
                    if self.lab[k] == code:
                        q = min(q, 1.0)
                    elif self.lab[k] < 0:
                        q = min(q, 1.0 + dist[int(self.succ[k])])
                if q < best:
                    best = q
                    out[si] = ai
        self._greedy[target] = out
        return out

    def realizable(self, query, start=None):
        """Whether ``query`` can be observed exactly, with only null observations in between."""
        si0 = self.mdp.state_index[self.mdp.initial if start is None else start]
        frontier = {si0}
        for z in query:
            code = self.code.get(z)
            if code is None:
                return False
            closure = set(frontier)
            stack = list(frontier)
            hits = set()
            while stack:
                si = stack.pop()
                for ai in range(self.n_actions):
                    for k in self.outcomes(si, ai):
                        s2 = int(self.succ[k])
                        if self.lab[k] == code:
                            hits.add(s2)
                        elif self.lab[k] < 0 and s2 not in closure:
                            closure.add(s2)
                            stack.append(s2)
            if not hits:
                return False
            frontier = hits
        return True


class RandomPlanner:
    """Uniformly random available action."""

    def __init__(self, model):
        self.model = model

    def plan(self, target, state, rng):
        return rng.choice(self.model.mdp.available_actions(state))


class MctsPlanner:
    """UCT search towards the next observation to chase.

    Shaped reward per simulated step: ``-x`` on a null observation, ``+y``
    when the observation is ``target`` and ``-y`` for any other observation.
    Reaching ``target`` ends a simulated trajectory. The search runs
    ``trajectories`` simulations per available root action.
    """

    def __init__(self, model, trajectories=100, depth=30, exploration=math.sqrt(2),
                 x=1.0, y=10.0, rollout_greedy=0.9, backend=None):
        if not y > x > 0:
            raise ValueError("shaping magnitudes must satisfy y > x > 0")
        self.model = model
        self.trajectories = trajectories
        self.depth = depth
        self.exploration = exploration
        self.x = x
        self.y = y
        self.rollout_greedy = rollout_greedy
        self.search = backend or kernels.mcts_search

    def search_stats(self, target, state, seed):
        m = self.model
        greedy = m.greedy_actions(target)
        return self.search(m.ptr, m.succ, m.cum, m.lab, greedy, m.n_actions,
                           m.mdp.state_index[state], m.code[target],
                           self.trajectories * m.n_actions,
                           self.depth, self.exploration, self.x, self.y,
                           self.rollout_greedy, seed)

    def plan(self, target, state, rng):
        a, _ = self.search_stats(target, state, rng.getrandbits(64))
        return self.model.mdp.actions[a]
