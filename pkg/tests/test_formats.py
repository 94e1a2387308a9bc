import pytest

from mrmlearn.automata import NULL, equivalent
from mrmlearn.envs import build_cookie_domain
from mrmlearn.errors import ConfigError, ModelParseError
from mrmlearn.formats import (emit_labels, emit_mdp, emit_mrm, parse_key_values, parse_labels,
                              parse_mdp, parse_mrm)


def test_mrm_round_trip(treasure):
    again = parse_mrm(emit_mrm(treasure))
    assert equivalent(again, treasure) is None
    assert again.nodes == treasure.nodes
    assert again.default_reward == -1
    assert emit_mrm(again) == emit_mrm(treasure)


def test_mrm_unknown_symbol_names_symbol_and_line():
    text = "alphabet: a b\nstart: u\n\nu a v 1\nu c v 2\n"
    with pytest.raises(ModelParseError) as err:
        parse_mrm(text)
    assert "'c'" in str(err.value) and "line 5" in str(err.value)


def test_mrm_omitted_edges_are_silent_self_loops():
    m = parse_mrm("# tiny\nalphabet: a b\nstart: u\ndefault: -2\nu a v 3  # go\n")
    assert m.step("v", "b") == ("v", 0.0)
    assert m.step("u", "b") == ("u", 0.0)
    assert m.step("u", NULL) == ("u", -2.0)


@pytest.mark.parametrize("text", [
    "start: u\nu a v 1\n",
    "alphabet: a\nu a v 1\n",
    "alphabet: a\nstart: u\nu a v x\n",
    "alphabet: a\nstart: u\nu a v\n",
    "alphabet: a\nstart: u\nu a v 1\nu a w 2\n",
    "alphabet: a null\nstart: u\n",
    "alphabet: a\nstart: u\nnodes: u\nu a v 1\n",
    "alphabet: a\nstart: u\ncolour: red\n",
])
def test_mrm_errors(text):
    with pytest.raises(ModelParseError):
        parse_mrm(text)


def test_mdp_and_labels_round_trip():
    env = build_cookie_domain()
    mdp = parse_mdp(emit_mdp(env.mdp))
    assert mdp.states == env.mdp.states and mdp.actions == env.mdp.actions
    assert mdp.transitions == env.mdp.transitions
    lab = parse_labels(emit_labels(env.labeling), mdp)
    assert lab.mapping == env.labeling.mapping


@pytest.mark.parametrize("text", [
    "states: s\nactions: a\ninitial: s\ns a s 0.5\n",
    "states: s\nactions: a\ninitial: s\ns b s 1\n",
    "states: s\nactions: a\ns a s 1\n",
    "states: s\ninitial: s\n",
    "s a s 1\n",
])
def test_mdp_errors(text):
    with pytest.raises(ModelParseError):
        parse_mdp(text)


def test_label_errors():
    mdp = parse_mdp("states: s t\nactions: a\ninitial: s\ns a t 1\nt a s 1\n")
    assert parse_labels("a t x\na s null\n", mdp).mapping == {("a", "t"): "x"}
    for text in ("a q x\n", "b s x\n", "a s\n", "a s x\na s y\n"):
        with pytest.raises(ModelParseError):
            parse_labels(text, mdp)


def test_key_values():
    assert parse_key_values("a = 1\n# note\n\nb=two words\n") == {"a": ("1", 1),
                                                                  "b": ("two words", 4)}
    with pytest.raises(ConfigError, match="line 2"):
        parse_key_values("a = 1\nnonsense\n")
    with pytest.raises(ConfigError, match="duplicate"):
        parse_key_values("a = 1\na = 2\n")
