"""Reward-free MDPs, labeling functions, traces and the synchronized product."""

from collections import deque
from dataclasses import dataclass, field

from .automata import NULL
from .errors import (AlphabetMismatch, EmptyTrace, InvalidModel, MalformedTrace,
                     UndefinedAction)

PROB_TOL = 1e-9


class NrMdp:
    """Finite MDP without rewards: ``(states, actions, transitions, initial)``.

    ``transitions`` maps ``(s, a)`` to a sequence of ``(s_next, p)`` pairs.
    Pairs not present are actions that are unavailable in ``s``. Successor
    order is preserved, which makes sampling reproducible.
    """

    def __init__(self, states, actions, transitions, initial):
        self.states = tuple(states)
        self.actions = tuple(actions)
        self.initial = initial
        self.state_index = {s: i for i, s in enumerate(self.states)}
        self.action_index = {a: i for i, a in enumerate(self.actions)}
        if len(self.state_index) != len(self.states):
            raise InvalidModel("duplicate state names")
        if len(self.action_index) != len(self.actions):
            raise InvalidModel("duplicate action names")
        if initial not in self.state_index:
            raise InvalidModel(f"initial state {initial!r} is not a state")
        table = {}
        for (s, a), dist in transitions.items():
            if s not in self.state_index:
                raise InvalidModel(f"unknown state {s!r}")
            if a not in self.action_index:
                raise InvalidModel(f"unknown action {a!r}")
            merged = {}
            for s2, p in dist:
                if s2 not in self.state_index:
                    raise InvalidModel(f"unknown successor {s2!r} of ({s!r}, {a!r})")
                p = float(p)
                if p < 0:
                    raise InvalidModel(f"negative probability for ({s!r}, {a!r}, {s2!r})")
                if p > 0:
                    merged[s2] = merged.get(s2, 0.0) + p
            total = sum(merged.values())
            if abs(total - 1.0) > PROB_TOL:
                raise InvalidModel(f"T({s!r}, {a!r}, .) sums to {total!r}, not 1")
            table[(s, a)] = tuple(merged.items())
        self._T = table
        self._compiled = None

    def __repr__(self):
        return f"NrMdp(states={len(self.states)}, actions={list(self.actions)})"

    @property
    def transitions(self):
        return self._T

    def distribution(self, s, a):
        try:
            return self._T[(s, a)]
        except KeyError:
            raise UndefinedAction((s, a)) from None

    def available_actions(self, s):
        return [a for a in self.actions if (s, a) in self._T]

    def successors(self, s):
        out = []
        for a in self.actions:
            for s2, _ in self._T.get((s, a), ()):
                out.append((a, s2))
        return out


def sample_transition(m, s, a, rng):
    """Draw ``s'`` from ``T(s, a, .)`` using exactly one ``rng.random()`` draw."""
    dist = m.distribution(s, a)
    u = rng.random()
    acc = 0.0
    for s2, p in dist:
        acc += p
        if u < acc:
            return s2
    return dist[-1][0]


class LabelingFunction:
    """Maps an action and the state it leads to onto an observation.

    Pairs missing from ``mapping`` label ``NULL``.
    """

    def __init__(self, mapping):
        self._map = dict(mapping)

    def __call__(self, a, s):
        return self._map.get((a, s), NULL)

    @classmethod
    def from_function(cls, fn, actions, states):
        mapping = {}
        for s in states:
            for a in actions:
                z = fn(a, s)
                if z != NULL:
                    mapping[(a, s)] = z
        return cls(mapping)

    @property
    def mapping(self):
        return dict(self._map)

    def symbols(self):
        """Non-null observations in order of first appearance."""
        seen = {}
        for z in self._map.values():
            if z != NULL:
                seen.setdefault(z, None)
        return list(seen)


@dataclass
class InteractionTrace:
    """``s0 a0 r1 s1 a1 r2 ... sk``: ``k`` actions, ``k`` rewards, ``k+1`` states."""

    states: list
    actions: list = field(default_factory=list)
    rewards: list = field(default_factory=list)

    def append(self, action, state, reward):
        self.actions.append(action)
        self.states.append(state)
        self.rewards.append(reward)

    def __len__(self):
        return len(self.actions)

    def check(self):
        if len(self.states) != len(self.actions) + 1 or len(self.rewards) != len(self.actions):
            raise MalformedTrace(
                f"{len(self.states)} states, {len(self.actions)} actions and "
                f"{len(self.rewards)} rewards do not form an interaction trace")


def extract_obs_trace(t, lab):
    t.check()
    return [lab(a, s) for a, s in zip(t.actions, t.states[1:])]


def extract_rew_trace(t):
    t.check()
    return list(t.rewards)


def strip_null(obs, rewards):
    """Keep only the positions with a non-null observation."""
    keep = [(z, r) for z, r in zip(obs, rewards) if z != NULL]
    return [z for z, _ in keep], [r for _, r in keep]


def discounted_sum(trace, gamma):
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    total = 0.0
    g = 1.0
    for r in trace:
        g *= gamma
        total += g * r
    return total


def mean_payoff(trace):
    trace = list(trace)
    if not trace:
        raise EmptyTrace("mean payoff of an empty trace is undefined")
    return sum(trace) / len(trace)


class ProductMdp:
    """Immediate-reward MDP over ``(s, u)`` pairs.

    ``transitions[((s, u), a)]`` lists ``((s', u'), p, r)``; the reward of a
    move is read at the source machine node with the observation of the
    entered MDP state: ``r = rewardOut(u, label(a, s'))``.
    """

    def __init__(self, states, actions, transitions, initial):
        self.states = tuple(states)
        self.actions = tuple(actions)
        self.transitions = transitions
        self.initial = initial
        self.state_index = {x: i for i, x in enumerate(self.states)}

    def __len__(self):
        return len(self.states)

    def available_actions(self, x):
        return [a for a in self.actions if (x, a) in self.transitions]

    def distribution(self, x, a):
        try:
            return self.transitions[(x, a)]
        except KeyError:
            raise UndefinedAction((x, a)) from None

    def reward(self, a, s_next, u):
        for (s2, _), _, r in self._by_node.get((u, a), ()):
            if s2 == s_next:
                return r
        raise UndefinedAction((a, s_next, u))

    def sample(self, x, a, rng):
        """Draw ``(x', r)`` with one ``rng.random()`` draw, same order as the MDP."""
        dist = self.distribution(x, a)
        u = rng.random()
        acc = 0.0
        for x2, p, r in dist:
            acc += p
            if u < acc:
                return x2, r
        return dist[-1][0], dist[-1][2]

    @property
    def _by_node(self):
        index = {}
        for ((s, u), a), dist in self.transitions.items():
            index.setdefault((u, a), []).extend(dist)
        return index


def product(m, lab, rm):
    """Reachable fragment of the synchronized product of ``m`` and ``rm`` under ``lab``."""
    symbols = set(rm.alphabet)
    start = (m.initial, rm.start)
    order = [start]
    seen = {start}
    queue = deque(order)
    transitions = {}
    while queue:
        x = queue.popleft()
        s, u = x
        for a in m.actions:
            dist = m.transitions.get((s, a))
            if dist is None:
                continue
            row = []
            for s2, p in dist:
                z = lab(a, s2)
                if z != NULL and z not in symbols:
                    raise AlphabetMismatch(
                        f"label {z!r} of ({a!r}, {s2!r}) is outside the machine alphabet")
                u2, r = rm.step(u, z)
                x2 = (s2, u2)
                row.append((x2, p, r))
                if x2 not in seen:
                    seen.add(x2)
                    order.append(x2)
                    queue.append(x2)
            transitions[(x, a)] = tuple(row)
    return ProductMdp(order, m.actions, transitions, start)
