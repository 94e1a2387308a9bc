"""Mealy reward machines: observation sequences in, reward sequences out."""

from collections import deque
from types import MappingProxyType

from .errors import AlphabetMismatch, MalformedHistory, UnknownNode, UnknownObservation

NULL = "null"

REWARD_TOL = 1e-9


class MealyRewardMachine:
    """Deterministic finite transducer from observations to rewards.

    ``transitions`` and ``rewards`` map ``(node, symbol)`` to the successor
    node and the emitted reward. Pairs missing from either map become
    self-loops emitting 0, so the machine is total over ``nodes x alphabet``.
    The ``NULL`` observation is never part of the alphabet: on it every node
    loops onto itself and emits ``default_reward``.
    """

    __slots__ = ("_nodes", "_start", "_alphabet", "_delta", "_out",
                 "_default", "_node_set", "_symbol_set")

    def __init__(self, nodes, start, alphabet, transitions=None, rewards=None,
                 default_reward=0.0):
        nodes = tuple(nodes)
        alphabet = tuple(alphabet)
        if len(set(nodes)) != len(nodes):
            raise ValueError("duplicate node names")
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("duplicate alphabet symbols")
        if NULL in alphabet:
            raise ValueError(f"{NULL!r} may not be declared as an alphabet symbol")
        if start not in nodes:
            raise UnknownNode(start)
        transitions = dict(transitions or {})
        rewards = dict(rewards or {})
        node_set = frozenset(nodes)
        symbol_set = frozenset(alphabet)
        for key in list(transitions) + list(rewards):
            u, z = key
            if u not in node_set:
                raise UnknownNode(u)
            if z not in symbol_set:
                raise UnknownObservation(z)
        for (u, z), v in transitions.items():
            if v not in node_set:
                raise UnknownNode(v)

        delta = {}
        out = {}
        for u in nodes:
            for z in alphabet:
                delta[(u, z)] = transitions.get((u, z), u)
                out[(u, z)] = float(rewards.get((u, z), 0.0))
        self._nodes = nodes
        self._start = start
        self._alphabet = alphabet
        self._delta = MappingProxyType(delta)
        self._out = MappingProxyType(out)
        self._default = float(default_reward)
        self._node_set = node_set
        self._symbol_set = symbol_set

    @property
    def nodes(self):
        return self._nodes

    @property
    def start(self):
        return self._start

    @property
    def alphabet(self):
        return self._alphabet

    @property
    def default_reward(self):
        return self._default

    @property
    def transitions(self):
        return self._delta

    @property
    def rewards(self):
        return self._out

    def __len__(self):
        return len(self._nodes)

    def __repr__(self):
        return (f"MealyRewardMachine(nodes={len(self._nodes)}, "
                f"alphabet={list(self._alphabet)}, start={self._start!r})")

    def step(self, node, obs):
        if node not in self._node_set:
            raise UnknownNode(node)
        if obs == NULL:
            return node, self._default
        try:
            return self._delta[(node, obs)], self._out[(node, obs)]
        except KeyError:
            raise UnknownObservation(obs) from None

    def run(self, trace, node=None):
        """Reward trace produced by feeding ``trace`` from ``node`` (default: start)."""
        u = self._start if node is None else node
        rewards = []
        for z in trace:
            u, r = self.step(u, z)
            rewards.append(r)
        return rewards

    def final_node(self, trace, node=None):
        u = self._start if node is None else node
        for z in trace:
            u, _ = self.step(u, z)
        return u

    def reachable_nodes(self):
        seen = {self._start}
        order = [self._start]
        queue = deque(order)
        while queue:
            u = queue.popleft()
            for z in self._alphabet:
                v = self._delta[(u, z)]
                if v not in seen:
                    seen.add(v)
                    order.append(v)
                    queue.append(v)
        return order

    def edges(self):
        """Yield ``(u, z, v, r)`` for every node/symbol pair, in declaration order."""
        for u in self._nodes:
            for z in self._alphabet:
                yield u, z, self._delta[(u, z)], self._out[(u, z)]

    def with_reward(self, node, obs, reward):
        """Copy of this machine with the single edge ``(node, obs)`` re-weighted."""
        rewards = dict(self._out)
        if (node, obs) not in rewards:
            raise UnknownObservation(obs)
        rewards[(node, obs)] = reward
        return MealyRewardMachine(self._nodes, self._start, self._alphabet,
                                  self._delta, rewards, self._default)

    def renamed(self, mapping):
        return MealyRewardMachine(
            [mapping[u] for u in self._nodes], mapping[self._start], self._alphabet,
            {(mapping[u], z): mapping[v] for (u, z), v in self._delta.items()},
            {(mapping[u], z): r for (u, z), r in self._out.items()},
            self._default)


def rewards_of_history(machine, labeling, history):
    """Rewards the machine assigns to a history ``s0 a0 s1 a1 ... sk``.

    Each action/state pair ``(a_i, s_{i+1})`` is mapped through the labeling
    function and the resulting observation trace is run from the start node.
    """
    history = list(history)
    if len(history) % 2 != 1:
        raise MalformedHistory(
            f"a history alternates states and actions and has odd length, got {len(history)}")
    obs = [labeling(history[i], history[i + 1]) for i in range(1, len(history), 2)]
    return machine.run(obs)


def equivalent(m1, m2, tol=REWARD_TOL):
    """Return a shortest trace on which the machines disagree, or ``None``.

    Breadth-first search over the synchronous product of both machines;
    symbols are tried in ``m1``'s declaration order.
    """
    if set(m1.alphabet) != set(m2.alphabet):
        raise AlphabetMismatch(
            f"alphabets differ: {sorted(m1.alphabet)} vs {sorted(m2.alphabet)}")
    if abs(m1.default_reward - m2.default_reward) > tol:
        return (NULL,)
    start = (m1.start, m2.start)
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        u1, u2 = pair
        for z in m1.alphabet:
            v1, r1 = m1.step(u1, z)
            v2, r2 = m2.step(u2, z)
            if abs(r1 - r2) > tol:
                return _path(parent, pair) + (z,)
            nxt = (v1, v2)
            if nxt not in parent:
                parent[nxt] = (pair, z)
                queue.append(nxt)
    return None


def _path(parent, pair):
    symbols = []
    while parent[pair] is not None:
        pair, z = parent[pair]
        symbols.append(z)
    return tuple(reversed(symbols))
