"""The cookie domain: press a button, find the cookie, eat it.

Three rooms hang off a hallway: yellow (north, with the button), blue (west)
and red (east). Pressing the button places a cookie in blue or red, chosen
uniformly, and removes any cookie already lying around. Eating a cookie
leaves crumbs in its room for good. Episodes start in the yellow room with
crumbs already scattered uniformly at random over the four subsets of
{blue, red}.
"""

from itertools import product as cartesian

from ..automata import MealyRewardMachine
from ..mdp import LabelingFunction, NrMdp
from .base import Environment

ACTIONS = ("north", "east", "south", "west", "push_button", "eat")
SYMBOLS = ("blu", "blu_cook", "blu_crum", "red", "red_cook", "red_crum", "yel", "yel_bd")
START = "start"

_MOVES = {
    ("H", "north"): "Y", ("H", "west"): "B", ("H", "east"): "R",
    ("Y", "south"): "H", ("B", "east"): "H", ("R", "west"): "H",
}
_CRUMBS = ("", "B", "R", "BR")


def _name(pos, cookie, crumbs):
    return f"{pos}|{cookie}|{crumbs}"


def _apply(pos, cookie, crumbs, a):
    if a == "push_button" and pos == "Y":
        return [(_name(pos, c, crumbs), 0.5) for c in ("B", "R")]
    if a == "eat" and pos in ("B", "R") and cookie == pos:
        merged = "".join(c for c in "BR" if c in crumbs or c == pos)
        return [(_name(pos, "-", merged), 1.0)]
    return [(_name(_MOVES.get((pos, a), pos), cookie, crumbs), 1.0)]


def _label(a, s):
    if s == START:
        return "null"
    pos, cookie, crumbs = s.split("|")
    if pos == "H":
        return "null"
    if pos == "Y":
        return "yel_bd" if a == "push_button" else "yel"
    room = "blu" if pos == "B" else "red"
    if cookie == pos:
        return room + "_cook"
    if pos in crumbs:
        return room + "_crum"
    return room


def cookie_machine():
    """Reward 1 for the first crumbs seen after each button press."""
    delta = {("v0", "yel_bd"): "v1", ("v1", "blu_crum"): "v0", ("v1", "red_crum"): "v0"}
    out = {("v1", "blu_crum"): 1.0, ("v1", "red_crum"): 1.0}
    return MealyRewardMachine(["v0", "v1"], "v0", SYMBOLS, delta, out, 0.0)


def build_cookie_domain():
    states = [START] + [_name(p, c, k) for p, c, k in cartesian("YHBR", "-BR", _CRUMBS)]
    transitions = {}
    for s in states[1:]:
        pos, cookie, crumbs = s.split("|")
        for a in ACTIONS:
            transitions[(s, a)] = _apply(pos, cookie, crumbs, a)
    for a in ACTIONS:
        dist = []
        for k in _CRUMBS:
            dist.extend((s2, 0.25 * p) for s2, p in _apply("Y", "-", k, a))
        transitions[(START, a)] = dist
    mdp = NrMdp(states, ACTIONS, transitions, START)
    lab = LabelingFunction.from_function(_label, ACTIONS, states)
    return Environment("cookie", mdp, lab, cookie_machine())
