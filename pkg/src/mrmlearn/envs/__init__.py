from .base import Environment
from .cookie import build_cookie_domain
from .gridworld import GridWorld, emit_grid, parse_grid
from .treasure import build_treasure_map, treasure_machine

__all__ = ["Environment", "GridWorld", "build_cookie_domain", "build_treasure_map",
           "emit_grid", "parse_grid", "treasure_machine"]
