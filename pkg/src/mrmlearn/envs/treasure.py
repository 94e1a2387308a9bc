"""The treasure-map grid: find a map, a key, the treasure and then sell it."""

from importlib import resources

from ..automata import MealyRewardMachine
from .base import Environment
from .gridworld import cell_name, parse_grid


def load_treasure_grid(apf=1.0):
    text = resources.files(__package__).joinpath("data", "treasure.map").read_text()
    return parse_grid(text, apf)


def treasure_machine(default_reward=-1.0):
    """Hidden reward machine of the treasure task.

    Reading the map (m) lets a key (e or g) be fetched; a key opens the
    treasure chest (t) and a jeweler (j1 or j2) then buys the treasure.
    Visiting a jeweler before finding any key ends the game.
    """
    nodes = ["u0", "u1", "u2", "u3", "u4"]
    alphabet = ["m", "e", "g", "t", "j1", "j2"]
    delta, out = {}, {}

    def edge(u, z, v, r):
        delta[(u, z)] = v
        out[(u, z)] = r

    edge("u0", "m", "u1", 10)
    for z in ("e", "g"):
        edge("u1", z, "u2", 25)
    for z in ("j1", "j2"):
        edge("u1", z, "u3", 60)
        edge("u4", z, "u1", 35)
    edge("u2", "t", "u4", 90)
    return MealyRewardMachine(nodes, "u0", alphabet, delta, out, default_reward)


def build_treasure_map(apf=1.0, default_reward=-1.0):
    grid = load_treasure_grid(apf)
    mdp, lab = grid.build()
    starts = [cell_name(c) for c in grid.null_cells()]
    return Environment("treasure", mdp, lab, treasure_machine(default_reward), starts)
