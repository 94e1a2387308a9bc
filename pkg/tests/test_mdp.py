import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrmlearn.automata import NULL, MealyRewardMachine
from mrmlearn.errors import (AlphabetMismatch, EmptyTrace, InvalidModel, MalformedTrace,
                             UndefinedAction)
from mrmlearn.mdp import (InteractionTrace, LabelingFunction, NrMdp, discounted_sum,
                         extract_obs_trace, extract_rew_trace, mean_payoff, product,
                         sample_transition, strip_null)

from helpers import random_machine, random_mdp, seeded


def test_deterministic_edge_always_taken():
    m = NrMdp(["a", "b"], ["go"], {("a", "go"): [("b", 1.0)]}, "a")
    for seed in range(20):
        assert sample_transition(m, "a", "go", random.Random(seed)) == "b"


def test_stuck_frequency_at_apf_075(treasure_env):
    from mrmlearn.envs import build_treasure_map

    env = build_treasure_map(0.75)
    rng = random.Random(0)
    stays = sum(sample_transition(env.mdp, "4_4", "east", rng) == "4_4" for _ in range(100000))
    assert 0.24 <= stays / 100000 <= 0.26


def test_undefined_action():
    m = NrMdp(["a"], ["go", "stop"], {("a", "go"): [("a", 1.0)]}, "a")
    with pytest.raises(UndefinedAction):
        sample_transition(m, "a", "stop", random.Random(0))
    assert m.available_actions("a") == ["go"]


def test_model_validation():
    with pytest.raises(InvalidModel):
        NrMdp(["a"], ["go"], {("a", "go"): [("a", 0.5)]}, "a")
    with pytest.raises(InvalidModel):
        NrMdp(["a"], ["go"], {("a", "go"): [("b", 1.0)]}, "a")
    with pytest.raises(InvalidModel):
        NrMdp(["a"], ["go"], {}, "z")
    with pytest.raises(InvalidModel):
        NrMdp(["a"], ["go"], {("a", "go"): [("a", 1.5), ("a", -0.5)]}, "a")


def test_discounted_sum_and_mean_payoff():
    tr = [10, 25, 90, 35]
    assert discounted_sum(tr, 1.0) == 160
    expected = 0.9 * 10 + 0.81 * 25 + 0.729 * 90 + 0.6561 * 35
    assert discounted_sum(tr, 0.9) == pytest.approx(expected, abs=1e-12)
    assert round(discounted_sum(tr, 0.9), 4) == 117.8235
    assert discounted_sum([], 0.5) == 0
    assert mean_payoff(tr) == 40
    assert mean_payoff([3.5] * 7) == 3.5
    with pytest.raises(EmptyTrace):
        mean_payoff([])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-100, 100), min_size=1, max_size=10),
       st.lists(st.floats(-100, 100), min_size=1, max_size=10),
       st.floats(0.01, 1.0), st.floats(-3, 3))
def test_discounted_sum_linear_and_monotone(a, b, gamma, c):
    n = min(len(a), len(b))
    a, b = a[:n], b[:n]
    lhs = discounted_sum([x + c * y for x, y in zip(a, b)], gamma)
    rhs = discounted_sum(a, gamma) + c * discounted_sum(b, gamma)
    assert lhs == pytest.approx(rhs, abs=1e-6)
    for i in range(n):
        bumped = list(a)
        bumped[i] += 1.0
        assert discounted_sum(bumped, gamma) >= discounted_sum(a, gamma)
    bumped = [a[0] + 1.0] + a[1:]
    assert discounted_sum(bumped, gamma) > discounted_sum(a, gamma)


def test_extract_traces(treasure_env):
    env = treasure_env
    rng = random.Random(0)
    env.reset("1_6")
    t = InteractionTrace([env.state])
    for a in ["south", "south"]:
        s, z, r = env.step(a, rng)
        t.append(a, s, r)
    assert extract_obs_trace(t, env.labeling) == [NULL, "m"]
    assert extract_rew_trace(t) == [-1.0, 10.0]
    empty = InteractionTrace(["s0"])
    assert extract_obs_trace(empty, env.labeling) == []
    assert extract_rew_trace(empty) == []
    with pytest.raises(MalformedTrace):
        extract_rew_trace(InteractionTrace(["s0"], ["a"], []))
    assert strip_null([NULL, "m"], [-1.0, 10.0]) == (["m"], [10.0])


def test_trivial_product():
    m = NrMdp(["s"], ["a"], {("s", "a"): [("s", 1.0)]}, "s")
    rm = MealyRewardMachine(["u"], "u", ["z"], default_reward=2)
    p = product(m, LabelingFunction({}), rm)
    assert p.states == (("s", "u"),)
    assert p.transitions[(("s", "u"), "a")] == ((("s", "u"), 1.0, 2.0),)


def test_product_rejects_foreign_labels():
    m = NrMdp(["s"], ["a"], {("s", "a"): [("s", 1.0)]}, "s")
    rm = MealyRewardMachine(["u"], "u", ["z"])
    with pytest.raises(AlphabetMismatch):
        product(m, LabelingFunction({("a", "s"): "other"}), rm)


def test_treasure_product_rows(treasure_env):
    env = treasure_env
    from mrmlearn.envs import build_treasure_map

    env = build_treasure_map(0.85)
    p = product(env.mdp, env.labeling, env.machine)
    assert len(p) <= len(env.mdp.states) * len(env.machine.nodes)
    for ((s, u), a), row in p.transitions.items():
        assert sum(pr for _, pr, _ in row) == pytest.approx(1.0, abs=1e-9)
        # projection onto the MDP component reproduces the MDP row
        assert [(x2[0], pr) for x2, pr, _ in row] == list(env.mdp.distribution(s, a))
        for (s2, u2), pr, r in row:
            assert (u2, r) == env.machine.step(u, env.labeling(a, s2))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_product_definition_on_random_models(seed):
    rng = seeded(seed)
    m = random_mdp(rng, rng.randint(1, 4), rng.randint(1, 2))
    rm = random_machine(rng, max_nodes=3, max_symbols=2)
    lab = LabelingFunction({(a, s): rng.choice(list(rm.alphabet) + [NULL])
                            for a in m.actions for s in m.states})
    p = product(m, lab, rm)
    assert p.initial == (m.initial, rm.start)
    for ((s, u), a), row in p.transitions.items():
        expect = {}
        for s2, pr in m.distribution(s, a):
            u2, r = rm.step(u, lab(a, s2))
            expect[(s2, u2)] = (pr, r)
        assert {x2: (pr, r) for x2, pr, r in row} == expect
