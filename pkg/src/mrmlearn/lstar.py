"""Observation-table learner for Mealy reward machines (L* style).

Cells hold the reward suffix answering ``prefix + suffix``. A membership
query may also come back *unanswerable* (the environment never produced the
observation sequence). Such cells act as wildcards when rows are compared,
and an edge whose own cell is unanswerable becomes a self-loop emitting the
configured arbitrary reward.
"""

from .automata import REWARD_TOL, MealyRewardMachine
from .errors import (EmptyAlphabet, LengthMismatch, NotACounterexample,
                     TableIncomplete, UnknownObservation)

EPSILON = ()

UNANSWERABLE = None

_PENDING = object()

COUNTEREXAMPLE_MODES = ("suffixes", "shortest", "prefixes")


def _fmt(word):
    return "·".join(word) if word else "ε"


class ObservationTable:
    """Prefix/suffix table driving the learner.

    ``counterexample_mode`` is ``"suffixes"`` (every suffix of a
    counterexample joins the suffix set), ``"shortest"`` (suffixes join one
    at a time, shortest first, until the hypothesis reproduces the
    counterexample) or ``"prefixes"`` (Angluin's original rule: every prefix
    joins the prefix set).
    """

    def __init__(self, alphabet, tol=0.0, arbitrary_reward=0.0,
                 counterexample_mode="suffixes"):
        alphabet = tuple(alphabet)
        if not alphabet:
            raise EmptyAlphabet("the observation alphabet must be nonempty")
        if counterexample_mode not in COUNTEREXAMPLE_MODES:
            raise ValueError(f"unknown counterexample mode {counterexample_mode!r}")
        self.alphabet = alphabet
        self.tol = float(tol)
        self.arbitrary_reward = float(arbitrary_reward)
        self.counterexample_mode = counterexample_mode
        self._symbols = frozenset(alphabet)
        self._prefixes = [EPSILON]
        self._prefix_set = {EPSILON}
        self._suffixes = [(z,) for z in alphabet]
        self._suffix_set = set(self._suffixes)
        self._answers = {}
        self._cells = {}
        self._hypothesis = None
        self._open_ce = None
        self.membership_queries = 0

    # -- inspection -----------------------------------------------------

    @property
    def prefixes(self):
        return tuple(self._prefixes)

    @property
    def suffixes(self):
        return tuple(self._suffixes)

    @property
    def entries(self):
        """Defined cells as ``{(prefix, suffix): tail}``; unanswerable cells map to ``None``."""
        out = {}
        for s in self.rows():
            for e in self._suffixes:
                v = self._lookup(s, e)
                if v is not _PENDING:
                    out[(s, e)] = v
        return out

    @property
    def hypothesis(self):
        return self._hypothesis

    def extended_prefixes(self):
        out = []
        for s in self._prefixes:
            for z in self.alphabet:
                t = s + (z,)
                if t not in self._prefix_set:
                    out.append(t)
        return out

    def rows(self):
        return list(self._prefixes) + self.extended_prefixes()

    def cell(self, prefix, suffix):
        self._check_word(prefix)
        value = self._lookup(tuple(prefix), tuple(suffix))
        if value is _PENDING:
            raise KeyError((prefix, suffix))
        return value

    def row(self, prefix):
        return tuple(self._lookup(tuple(prefix), e) for e in self._suffixes)

    def is_complete(self):
        return (self._open_ce is None and self._first_pending() is None
                and self._closedness_defect() is None
                and self._consistency_defect() is None)

    # -- membership queries ----------------------------------------------

    def get_mq(self):
        """Next query needed to fill the table, or ``None`` once complete."""
        self._settle()
        pending = self._first_pending()
        return None if pending is None else pending[0] + pending[1]

    def resolve_mq(self, query, answer):
        """Record the teacher's reward trace for ``query``.

        ``answer=None`` marks the query unanswerable.
        """
        query = tuple(query)
        self._check_word(query)
        if answer is not UNANSWERABLE:
            answer = tuple(float(r) for r in answer)
            if len(answer) != len(query):
                raise LengthMismatch(
                    f"query has {len(query)} symbols but answer has {len(answer)} rewards")
        self.membership_queries += 1
        self._store(query, answer)
        self._settle()
        return self

    def record(self, obs, rewards):
        """Feed experience gathered outside the query loop (answers every prefix)."""
        obs = tuple(obs)
        rewards = tuple(float(r) for r in rewards)
        if len(obs) != len(rewards):
            raise LengthMismatch("observation and reward traces differ in length")
        self._check_word(obs)
        self._store(obs, rewards)

    def known_answer(self, query):
        query = tuple(query)
        if query in self._answers:
            return True, self._answers[query]
        return False, None

    # -- hypotheses ------------------------------------------------------

    def build_reward_machine(self, default_reward=0.0):
        if not self.is_complete():
            raise TableIncomplete("the observation table is not closed and consistent")
        self._hypothesis = self._assemble(default_reward)
        return self._hypothesis

    def _assemble(self, default_reward):
        classes, index_of = self._group()
        rep_of_class = []
        for s in self._prefixes:
            if index_of[s] == len(rep_of_class):
                rep_of_class.append(s)
        names = [f"q{i}" for i in range(len(classes))]
        transitions = {}
        rewards = {}
        for i, s in enumerate(rep_of_class):
            for z in self.alphabet:
                edge = self._lookup(s, (z,))
                if edge is UNANSWERABLE:
                    transitions[(names[i], z)] = names[i]
                    rewards[(names[i], z)] = self.arbitrary_reward
                    continue
                target = self._match(s + (z,), classes, i)
                transitions[(names[i], z)] = names[target]
                rewards[(names[i], z)] = edge[-1]
        return MealyRewardMachine(names, names[0], self.alphabet, transitions,
                                  rewards, default_reward)

    def add_counterexample(self, obs, rewards, hypothesis=None):
        obs = tuple(obs)
        rewards = tuple(float(r) for r in rewards)
        if len(obs) != len(rewards):
            raise LengthMismatch("observation and reward traces differ in length")
        self._check_word(obs)
        hyp = hypothesis or self._hypothesis
        if hyp is None:
            hyp = self.build_reward_machine()
        predicted = hyp.run(obs)
        tol = max(self.tol, REWARD_TOL)
        if all(abs(p - r) <= tol for p, r in zip(predicted, rewards)):
            raise NotACounterexample(f"hypothesis already reproduces {_fmt(obs)}")
        self._store(obs, rewards)
        if self.counterexample_mode == "suffixes":
            for i in range(len(obs) - 1, -1, -1):
                self._add_suffix(obs[i:])
        elif self.counterexample_mode == "shortest":
            self._open_ce = (obs, rewards, len(obs))
        else:
            for i in range(1, len(obs) + 1):
                self._add_prefix(obs[:i])
        self._settle()
        return self

    # -- rendering -------------------------------------------------------

    def dump(self):
        """Human-readable grid: one line per row, one column per suffix."""
        header = ["", *(_fmt(e) for e in self._suffixes)]
        lines = []
        body = []
        for s in self.rows():
            label = _fmt(s) if s in self._prefix_set else "  " + _fmt(s)
            cells = []
            for e in self._suffixes:
                v = self._lookup(s, e)
                if v is _PENDING:
                    cells.append("")
                elif v is UNANSWERABLE:
                    cells.append("?")
                else:
                    cells.append(",".join(f"{r:g}" for r in v))
            body.append([label, *cells])
        widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
        lines.append(" | ".join(h.ljust(w) for h, w in zip(header, widths)))
        lines.append("-+-".join("-" * w for w in widths))
        n_short = len(self._prefixes)
        for k, row in enumerate(body):
            if k == n_short:
                lines.append("-+-".join("-" * w for w in widths))
            lines.append(" | ".join(c.ljust(w) for c, w in zip(row, widths)))
        return "\n".join(lines)

    # -- internals -------------------------------------------------------

    def _check_word(self, word):
        for z in word:
            if z not in self._symbols:
                raise UnknownObservation(z)

    def _store(self, query, answer):
        if answer is UNANSWERABLE:
            self._answers.setdefault(query, UNANSWERABLE)
            return
        for i in range(1, len(query) + 1):
            q = query[:i]
            if self._answers.get(q) is None:
                self._answers[q] = answer[:i]

    def _lookup(self, s, e):
        key = (s, e)
        v = self._cells.get(key, _PENDING)
        if v is not _PENDING:
            return v
        q = s + e
        if q not in self._answers:
            return _PENDING
        ans = self._answers[q]
        if ans is UNANSWERABLE:
            # not cached: a later observation may still answer it
            return UNANSWERABLE
        v = ans[len(s):]
        self._cells[key] = v
        return v

    def _first_pending(self):
        for s in self.rows():
            for e in self._suffixes:
                if self._lookup(s, e) is _PENDING:
                    return s, e
        return None

    def _same(self, a, b):
        if a is UNANSWERABLE or b is UNANSWERABLE:
            return a is b
        return all(abs(x - y) <= self.tol for x, y in zip(a, b))

    def _compatible(self, r1, r2):
        for a, b in zip(r1, r2):
            if a is UNANSWERABLE or b is UNANSWERABLE:
                continue
            if any(abs(x - y) > self.tol for x, y in zip(a, b)):
                return False
        return True

    def _has_pending(self, row):
        return any(v is _PENDING for v in row)

    def _group(self):
        """Distinct rows of the prefix set and the class index of each prefix."""
        classes = []
        index_of = {}
        for s in self._prefixes:
            r = self.row(s)
            for i, c in enumerate(classes):
                if all(self._same(a, b) for a, b in zip(r, c)):
                    index_of[s] = i
                    break
            else:
                index_of[s] = len(classes)
                classes.append(r)
        return classes, index_of

    def _match(self, t, classes, own):
        """Index of the S-class representing row ``t``, or ``None``.

        Preference order: an exactly equal class, the originating class
        (self-loop), then the first compatible class.
        """
        r = self.row(t)
        for i, c in enumerate(classes):
            if all(self._same(a, b) for a, b in zip(r, c)):
                return i
        if own is not None and self._compatible(r, classes[own]):
            return own
        for i, c in enumerate(classes):
            if self._compatible(r, c):
                return i
        return None

    def _closedness_defect(self):
        if any(self._has_pending(self.row(s)) for s in self._prefixes):
            return None
        classes, index_of = self._group()
        for s in self._prefixes:
            for z in self.alphabet:
                t = s + (z,)
                if t in self._prefix_set:
                    continue
                if self._lookup(s, (z,)) is UNANSWERABLE:
                    continue
                if self._has_pending(self.row(t)):
                    return None
                if self._match(t, classes, index_of[s]) is None:
                    return t
        return None

    def _consistency_defect(self):
        prefixes = self._prefixes
        rows = [self.row(s) for s in prefixes]
        for i in range(len(prefixes)):
            for j in range(i + 1, len(prefixes)):
                if not all(self._same(a, b) for a, b in zip(rows[i], rows[j])):
                    continue
                for z in self.alphabet:
                    ri = self.row(prefixes[i] + (z,))
                    rj = self.row(prefixes[j] + (z,))
                    for e, a, b in zip(self._suffixes, ri, rj):
                        if a is _PENDING or b is _PENDING:
                            continue
                        if a is UNANSWERABLE or b is UNANSWERABLE:
                            continue
                        if not self._same(a, b):
                            return (z,) + e
        return None

    def _settle(self):
        while self._first_pending() is None:
            t = self._closedness_defect()
            if t is not None:
                self._add_prefix(t)
                continue
            e = self._consistency_defect()
            if e is not None:
                self._add_suffix(e)
                continue
            if self._open_ce is not None and self._advance_counterexample():
                continue
            return

    def _advance_counterexample(self):
        """Add the next suffix of the open counterexample; ``False`` once it is explained."""
        obs, rewards, cut = self._open_ce
        predicted = self._assemble(0.0).run(obs)
        tol = max(self.tol, REWARD_TOL)
        while cut > 0:
            if all(abs(p - r) <= tol for p, r in zip(predicted, rewards)):
                break
            cut -= 1
            if obs[cut:] not in self._suffix_set:
                self._add_suffix(obs[cut:])
                self._open_ce = (obs, rewards, cut)
                return True
        self._open_ce = None
        return False

    def _add_prefix(self, t):
        t = tuple(t)
        for i in range(1, len(t) + 1):
            p = t[:i]
            if p not in self._prefix_set:
                self._prefix_set.add(p)
                self._prefixes.append(p)

    def _add_suffix(self, e):
        e = tuple(e)
        if e and e not in self._suffix_set:
            self._suffix_set.add(e)
            self._suffixes.append(e)


def init_table(alphabet, **kwargs):
    return ObservationTable(alphabet, **kwargs)
