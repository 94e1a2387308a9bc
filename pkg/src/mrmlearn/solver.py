"""Discounted-sum value iteration and policy evaluation on product MDPs.

Values are expected discounted sums ``sum_{i>=1} gamma^i r_i`` with the
first reward already discounted once, the same convention as
:func:`mrmlearn.mdp.discounted_sum`. They are therefore ``gamma`` times the
textbook values; strategies are unaffected.
"""

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from .errors import EmptyModel, InvalidGamma, IterationLimit, PartialStrategy

DEFAULT_GAMMA = 0.95
DEFAULT_TOL = 1e-8
MAX_SWEEPS = 10**6


class Strategy(dict):
    """Memoryless strategy: product state -> action."""

    def to_text(self, states=None):
        lines = []
        for x in states if states is not None else self:
            lines.append(f"{_state_str(x)} -> {self[x]}")
        return "\n".join(lines) + "\n"


class ValueFunction(dict):
    """Product state -> value."""


def _state_str(x):
    if isinstance(x, tuple):
        return " ".join(str(c) for c in x)
    return str(x)


class _Arrays:
    """Flattened transition table of a product MDP.

    Every row ``k`` is one ``(state, action, successor)`` triple; ``sa`` is
    the index ``state * n_actions + action`` it contributes to.
    """

    def __init__(self, p):
        n, m = len(p.states), len(p.actions)
        idx = p.state_index
        aidx = {a: i for i, a in enumerate(p.actions)}
        sa, dst, prob, rew = [], [], [], []
        defined = np.zeros(n * m, dtype=bool)
        for (x, a), dist in p.transitions.items():
            k = idx[x] * m + aidx[a]
            defined[k] = True
            for x2, pr, r in dist:
                sa.append(k)
                dst.append(idx[x2])
                prob.append(pr)
                rew.append(r)
        self.n, self.m = n, m
        self.sa = np.asarray(sa, dtype=np.int64)
        self.dst = np.asarray(dst, dtype=np.int64)
        self.prob = np.asarray(prob, dtype=float)
        self.rew = np.asarray(rew, dtype=float)
        self.defined = defined.reshape(n, m)
        self.expected_reward = np.bincount(self.sa, weights=self.prob * self.rew,
                                           minlength=n * m)

    def q_values(self, v, gamma):
        q = gamma * (self.expected_reward + np.bincount(
            self.sa, weights=self.prob * v[self.dst], minlength=self.n * self.m))
        q = q.reshape(self.n, self.m)
        return np.where(self.defined, q, -np.inf)


def _greedy(q):
    """Lowest-index action within a scale-relative tie band of the maximum."""
    best = q.max(axis=1, keepdims=True)
    finite = np.where(np.isfinite(q), np.abs(q), 0.0)
    band = 1e-10 * finite.max(axis=1, keepdims=True)
    return np.argmax(q >= best - band, axis=1)


def _check(p, gamma, tol):
    if not 0.0 < gamma < 1.0:
        raise InvalidGamma(f"gamma must lie in (0, 1), got {gamma}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if len(p.states) == 0:
        raise EmptyModel("product MDP has no states")


def value_iteration(p, gamma=DEFAULT_GAMMA, tol=DEFAULT_TOL, max_sweeps=MAX_SWEEPS,
                    history=None):
    """Optimal discounted values and a greedy memoryless strategy.

    ``V(x) = max_a sum_{x'} T(x, a, x') gamma (R(x, a, x') + V(x'))``.
    Sweeps stop once successive iterates differ by less than
    ``tol (1 - gamma) / (2 gamma)`` in sup norm, which keeps the returned
    values within ``tol / 2`` of the optimum. If ``history`` is a list, the
    sup-norm difference of every sweep is appended to it.
    """
    _check(p, gamma, tol)
    stop = tol * (1.0 - gamma) / (2.0 * gamma)
    arr = _Arrays(p)
    if not arr.defined.any(axis=1).all():
        dead = [p.states[i] for i in np.flatnonzero(~arr.defined.any(axis=1))]
        raise EmptyModel(f"states without any action: {dead[:5]}")
    v = np.zeros(arr.n)
    for _ in range(max_sweeps):
        q = arr.q_values(v, gamma)
        v_new = q.max(axis=1)
        diff = float(np.max(np.abs(v_new - v)))
        if history is not None:
            history.append(diff)
        v = v_new
        if diff < stop:
            break
    else:
        raise IterationLimit(f"value iteration did not converge in {max_sweeps} sweeps")
    choice = _greedy(arr.q_values(v, gamma))
    values = ValueFunction(zip(p.states, v.tolist()))
    strategy = Strategy((x, p.actions[c]) for x, c in zip(p.states, choice.tolist()))
    return values, strategy


def evaluate_policy(p, strat, gamma=DEFAULT_GAMMA, tol=DEFAULT_TOL):
    """Value of a memoryless strategy, by solving the linear Bellman system."""
    _check(p, gamma, tol)
    n = len(p.states)
    idx = p.state_index
    rows, cols, vals = [], [], []
    b = np.zeros(n)
    for x in p.states:
        if x not in strat:
            raise PartialStrategy(f"strategy has no action for {x!r}")
        a = strat[x]
        if (x, a) not in p.transitions:
            raise PartialStrategy(f"action {a!r} is unavailable in {x!r}")
        i = idx[x]
        for x2, pr, r in p.transitions[(x, a)]:
            b[i] += gamma * pr * r
            rows.append(i)
            cols.append(idx[x2])
            vals.append(pr)
    P = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    A = (sp.identity(n, format="csr") - gamma * P).tocsc()
    v = np.atleast_1d(spsolve(A, b))
    # a couple of fixed-point sweeps polish round-off from the direct solve
    for _ in range(100):
        v_new = b + gamma * (P @ v)
        done = float(np.max(np.abs(v_new - v))) < tol * 1e-3
        v = v_new
        if done:
            break
    return ValueFunction(zip(p.states, v.tolist()))


def bellman_residual(p, v, gamma, strat=None):
    """``||V - TV||_inf`` (optimality operator, or the strategy's operator)."""
    arr = _Arrays(p)
    vec = np.array([v[x] for x in p.states])
    q = arr.q_values(vec, gamma)
    if strat is None:
        tv = q.max(axis=1)
    else:
        aidx = {a: i for i, a in enumerate(p.actions)}
        tv = np.array([q[i, aidx[strat[x]]] for i, x in enumerate(p.states)])
    return float(np.max(np.abs(vec - tv)))
