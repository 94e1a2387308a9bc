import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrmlearn.automata import NULL, MealyRewardMachine, equivalent, rewards_of_history
from mrmlearn.errors import AlphabetMismatch, MalformedHistory, UnknownNode, UnknownObservation
from mrmlearn.mdp import LabelingFunction

from helpers import brute_equal, random_machine, seeded


def test_step_on_symbol_and_null(treasure):
    assert treasure.step("u0", "m") == ("u1", 10.0)
    for u in treasure.nodes:
        assert treasure.step(u, NULL) == (u, -1.0)


def test_step_rejects_unknown_inputs(treasure):
    with pytest.raises(UnknownObservation):
        treasure.step("u0", "x")
    with pytest.raises(UnknownNode):
        treasure.step("nowhere", "m")


def test_quoted_traces(treasure):
    assert treasure.run(["m", "g", "t", "j2"]) == [10, 25, 90, 35]
    assert treasure.run(["m", "j1", "j2"]) == [10, 60, 0]
    assert treasure.run([]) == []


def test_missing_edges_are_zero_self_loops():
    m = MealyRewardMachine(["p", "q"], "p", ["a", "b"], {("p", "a"): "q"}, {("p", "a"): 3})
    assert m.step("q", "b") == ("q", 0.0)
    assert m.step("p", "b") == ("p", 0.0)
    assert len(list(m.edges())) == 4


def test_null_is_not_an_alphabet_symbol():
    with pytest.raises(ValueError):
        MealyRewardMachine(["p"], "p", ["a", NULL])


def test_rewards_of_history(treasure):
    cells = {"cm": "m", "cg": "g", "ct": "t", "cj": "j2"}
    lab = LabelingFunction({("go", c): z for c, z in cells.items()})
    h = ["s0", "go", "cm", "go", "cg", "go", "ct", "go", "cj"]
    assert rewards_of_history(treasure, lab, h) == [10, 25, 90, 35]
    assert rewards_of_history(treasure, lab, ["s0"]) == []
    assert rewards_of_history(treasure, lab, ["s0", "go", "x", "go", "y"]) == [-1, -1]
    with pytest.raises(MalformedHistory):
        rewards_of_history(treasure, lab, ["s0", "go"])


def test_equivalent_identity_and_mutation(treasure):
    assert equivalent(treasure, treasure) is None
    mutated = treasure.with_reward("u2", "t", 0)
    ce = equivalent(treasure, mutated)
    assert ce == ("m", "e", "t")
    assert treasure.run(ce) != mutated.run(ce)


def test_equivalent_on_bisimilar_unrolling(treasure):
    # duplicate u1 into u1b: u0 goes to u1b, which behaves exactly like u1
    delta = dict(treasure.transitions)
    out = dict(treasure.rewards)
    for z in treasure.alphabet:
        delta[("u1b", z)] = delta[("u1", z)] if delta[("u1", z)] != "u1" else "u1b"
        out[("u1b", z)] = out[("u1", z)]
    delta[("u0", "m")] = "u1b"
    big = MealyRewardMachine(list(treasure.nodes) + ["u1b"], "u0", treasure.alphabet,
                             delta, out, treasure.default_reward)
    assert len(big) == 6
    assert equivalent(treasure, big) is None
    assert equivalent(big, treasure) is None


def test_equivalent_alphabet_mismatch(treasure):
    other = MealyRewardMachine(["p"], "p", ["a"])
    with pytest.raises(AlphabetMismatch):
        equivalent(treasure, other)


def test_equivalent_reports_default_reward_difference():
    a = MealyRewardMachine(["p"], "p", ["a"], default_reward=0)
    b = MealyRewardMachine(["p"], "p", ["a"], default_reward=-1)
    assert equivalent(a, b) == (NULL,)


def test_shortest_counterexample_matches_brute_force():
    rng = seeded(11)
    for _ in range(60):
        m1 = random_machine(rng, max_nodes=3, max_symbols=2, rewards=range(2))
        m2 = MealyRewardMachine(["x" + u for u in m1.nodes], "x" + m1.start, m1.alphabet,
                                {("x" + u, z): "x" + rng.choice(m1.nodes)
                                 for u in m1.nodes for z in m1.alphabet},
                                {("x" + u, z): float(rng.randint(0, 1))
                                 for u in m1.nodes for z in m1.alphabet})
        ce = equivalent(m1, m2)
        shortest = None
        for n in range(1, 8):
            for t in itertools.product(m1.alphabet, repeat=n):
                if m1.run(t) != m2.run(t):
                    shortest = n
                    break
            if shortest:
                break
        if ce is None:
            assert shortest is None and brute_equal(m1, m2, 7)
        else:
            assert len(ce) == shortest
            assert m1.run(ce) != m2.run(ce)


machines = st.integers(0, 10**6).map(lambda s: random_machine(seeded(s)))


@settings(max_examples=60, deadline=None)
@given(machines, st.data())
def test_run_properties(m, data):
    trace = data.draw(st.lists(st.sampled_from(list(m.alphabet) + [NULL]), max_size=12))
    out = m.run(trace)
    assert len(out) == len(trace)
    assert m.run(trace) == out
    z = data.draw(st.sampled_from(m.alphabet))
    assert m.run(trace + [z])[:-1] == out


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_equivalent_is_symmetric(s1, s2):
    m1 = random_machine(seeded(s1), max_symbols=2)
    m2 = random_machine(seeded(s2), max_symbols=2)
    if set(m1.alphabet) != set(m2.alphabet):
        return
    assert (equivalent(m1, m2) is None) == (equivalent(m2, m1) is None)
    assert equivalent(m1, m1) is None


@settings(max_examples=40, deadline=None)
@given(machines, st.data())
def test_rewards_of_history_equals_run_of_induced_trace(m, data):
    states = ["s0", "s1", "s2"]
    actions = ["x", "y"]
    lab = LabelingFunction({(a, s): data.draw(st.sampled_from(list(m.alphabet) + [NULL]))
                            for a in actions for s in states})
    k = data.draw(st.integers(0, 8))
    h = ["s0"]
    for _ in range(k):
        h += [data.draw(st.sampled_from(actions)), data.draw(st.sampled_from(states))]
    obs = [lab(h[i], h[i + 1]) for i in range(1, len(h), 2)]
    assert rewards_of_history(m, lab, h) == m.run(obs)


def test_machines_are_immutable(treasure):
    with pytest.raises(TypeError):
        treasure.transitions[("u0", "m")] = "u0"
    with pytest.raises(AttributeError):
        treasure.foo = 1
