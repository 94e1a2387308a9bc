from ..automata import NULL
from ..planning import FlatModel


class Environment:
    """Resettable simulator: known dynamics and labels, hidden reward machine.

    The agent may inspect ``mdp`` and ``labeling``; rewards only come back
    through :meth:`step`, produced by the hidden ``machine``.
    """

    def __init__(self, name, mdp, labeling, machine, start_states=None):
        self.name = name
        self.mdp = mdp
        self.labeling = labeling
        self.machine = machine
        self.start_states = tuple(start_states) if start_states else (mdp.initial,)
        self.state = mdp.initial
        self.node = machine.start
        self.resets = 0
        self._model = None

    def __repr__(self):
        return f"Environment({self.name!r}, {self.mdp!r}, {self.machine!r})"

    @property
    def alphabet(self):
        return self.machine.alphabet

    @property
    def default_reward(self):
        return self.machine.default_reward

    @property
    def model(self):
        if self._model is None:
            self._model = FlatModel(self.mdp, self.labeling, self.alphabet)
        return self._model

    def reset(self, state=None):
        self.state = self.mdp.initial if state is None else state
        self.node = self.machine.start
        self.resets += 1
        return self.state

    def reset_random(self, rng):
        """Reset to a start state drawn uniformly from ``start_states``."""
        return self.reset(rng.choice(self.start_states))

    def available_actions(self):
        return self.mdp.available_actions(self.state)

    def step(self, action, rng):
        from ..mdp import sample_transition

        s2 = sample_transition(self.mdp, self.state, action, rng)
        z = self.labeling(action, s2)
        self.node, r = self.machine.step(self.node, z)
        self.state = s2
        return s2, z, r

    def observable_symbols(self):
        """Alphabet symbols that some reachable ``(a, s')`` pair emits."""
        reach = {self.mdp.initial}
        stack = [self.mdp.initial]
        seen = set()
        while stack:
            s = stack.pop()
            for a, s2 in self.mdp.successors(s):
                z = self.labeling(a, s2)
                if z != NULL:
                    seen.add(z)
                if s2 not in reach:
                    reach.add(s2)
                    stack.append(s2)
        return [z for z in self.alphabet if z in seen]
