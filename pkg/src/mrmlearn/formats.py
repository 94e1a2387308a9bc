"""Text formats: reward machines, explicit MDPs, labeling files and key = value configs.

``.mrm``::

    alphabet: m e g t j1 j2
    start: u0
    default: -1
    u0 m u1 10
    u1 e u2 25

An optional ``nodes:`` header fixes node order and declares nodes without
outgoing edges. Omitted ``(u, z)`` pairs are 0-reward self-loops.

Explicit MDP::

    states: s0 s1
    actions: a b
    initial: s0
    s0 a s1 0.5
    s0 a s0 0.5

Labeling file: one ``a s z`` row per labeled action/state pair.

In every format ``#`` starts a comment and blank lines are ignored.
"""

from .automata import NULL, MealyRewardMachine
from .errors import ConfigError, InvalidModel, ModelParseError
from .mdp import LabelingFunction, NrMdp


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _header(line):
    key, sep, rest = line.partition(":")
    if not sep or " " in key.strip():
        return None, None
    return key.strip().lower(), rest.split()


def _number(tok, lineno, what):
    try:
        return float(tok)
    except ValueError:
        raise ModelParseError(f"{what} {tok!r} is not a number", lineno) from None


def _fmt_num(x):
    return repr(int(x)) if float(x).is_integer() else repr(float(x))


def parse_mrm(text):
    alphabet = start = nodes = None
    default = 0.0
    edges = []
    for lineno, line in _lines(text):
        key, vals = _header(line)
        if key is not None:
            if key == "alphabet":
                if not vals:
                    raise ModelParseError("empty alphabet", lineno)
                if NULL in vals:
                    raise ModelParseError(f"{NULL!r} cannot be an alphabet symbol", lineno)
                alphabet = vals
            elif key == "start":
                if len(vals) != 1:
                    raise ModelParseError("start needs exactly one node", lineno)
                start = vals[0]
            elif key == "default":
                if len(vals) != 1:
                    raise ModelParseError("default needs exactly one reward", lineno)
                default = _number(vals[0], lineno, "default reward")
            elif key == "nodes":
                nodes = vals
            else:
                raise ModelParseError(f"unknown header {key!r}", lineno)
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ModelParseError(f"edge must read 'u z u2 r', got {line!r}", lineno)
        if alphabet is None:
            raise ModelParseError("edge before the alphabet header", lineno)
        u, z, v, r = parts
        if z not in alphabet:
            raise ModelParseError(f"unknown symbol {z!r}", lineno)
        edges.append((lineno, u, z, v, _number(r, lineno, "reward")))
    if alphabet is None:
        raise ModelParseError("missing 'alphabet:' header")
    if start is None:
        raise ModelParseError("missing 'start:' header")
    order = list(nodes) if nodes is not None else [start]
    known = set(order)
    for lineno, u, _, v, _ in edges:
        for n in (u, v):
            if n not in known:
                if nodes is not None:
                    raise ModelParseError(f"node {n!r} is not declared in 'nodes:'", lineno)
                known.add(n)
                order.append(n)
    if start not in known:
        raise ModelParseError(f"start node {start!r} is not declared in 'nodes:'")
    delta, out = {}, {}
    for lineno, u, z, v, r in edges:
        if (u, z) in delta:
            raise ModelParseError(f"duplicate edge for ({u}, {z})", lineno)
        delta[(u, z)] = v
        out[(u, z)] = r
    return MealyRewardMachine(order, start, alphabet, delta, out, default)


def emit_mrm(machine):
    lines = [
        "alphabet: " + " ".join(machine.alphabet),
        f"start: {machine.start}",
        f"default: {_fmt_num(machine.default_reward)}",
        "nodes: " + " ".join(machine.nodes),
    ]
    for u, z, v, r in machine.edges():
        if v != u or r != 0.0:
            lines.append(f"{u} {z} {v} {_fmt_num(r)}")
    return "\n".join(lines) + "\n"


def parse_mdp(text):
    states = actions = initial = None
    rows = {}
    for lineno, line in _lines(text):
        key, vals = _header(line)
        if key is not None:
            if key == "states":
                states = vals
            elif key == "actions":
                actions = vals
            elif key == "initial":
                if len(vals) != 1:
                    raise ModelParseError("initial needs exactly one state", lineno)
                initial = vals[0]
            else:
                raise ModelParseError(f"unknown header {key!r}", lineno)
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ModelParseError(f"transition must read 's a s2 p', got {line!r}", lineno)
        if states is None or actions is None:
            raise ModelParseError("transition before the states/actions headers", lineno)
        s, a, s2, p = parts
        for name, pool, what in ((s, states, "state"), (s2, states, "state"),
                                 (a, actions, "action")):
            if name not in pool:
                raise ModelParseError(f"unknown {what} {name!r}", lineno)
        rows.setdefault((s, a), []).append((s2, _number(p, lineno, "probability")))
    for key, what in ((states, "states"), (actions, "actions"), (initial, "initial")):
        if key is None:
            raise ModelParseError(f"missing '{what}:' header")
    try:
        return NrMdp(states, actions, rows, initial)
    except InvalidModel as exc:
        raise ModelParseError(str(exc)) from None


def emit_mdp(mdp):
    lines = [
        "states: " + " ".join(mdp.states),
        "actions: " + " ".join(mdp.actions),
        f"initial: {mdp.initial}",
    ]
    for (s, a), dist in mdp.transitions.items():
        for s2, p in dist:
            lines.append(f"{s} {a} {s2} {p!r}")
    return "\n".join(lines) + "\n"


def parse_labels(text, mdp=None):
    mapping = {}
    for lineno, line in _lines(text):
        parts = line.split()
        if len(parts) != 3:
            raise ModelParseError(f"label row must read 'a s z', got {line!r}", lineno)
        a, s, z = parts
        if mdp is not None:
            if a not in mdp.action_index:
                raise ModelParseError(f"unknown action {a!r}", lineno)
            if s not in mdp.state_index:
                raise ModelParseError(f"unknown state {s!r}", lineno)
        if (a, s) in mapping:
            raise ModelParseError(f"duplicate label for ({a}, {s})", lineno)
        if z != NULL:
            mapping[(a, s)] = z
    return LabelingFunction(mapping)


def emit_labels(lab):
    return "".join(f"{a} {s} {z}\n" for (a, s), z in lab.mapping.items())


def parse_key_values(text):
    """``{key: (value, lineno)}`` from ``key = value`` lines."""
    out = {}
    for lineno, line in _lines(text):
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = (value.strip(), lineno)
    return out
