"""Grid worlds with labeled cells, loaded from a small ASCII format.

::

    S.........
    .j.e....g.
    ..#.......
    legend:
    j = j1
    e = e

``.`` is an open unlabeled cell, ``#`` a wall, ``S`` the (unlabeled) start
cell and every lowercase character a labeled cell whose observation symbol
is given in the legend block. Coordinates are ``(x, y)`` with ``y`` counting
rows from the top.
"""

from collections import deque
from dataclasses import dataclass, field

from ..errors import InvalidApf, ModelParseError
from ..mdp import LabelingFunction, NrMdp

MOVES = {"north": (0, -1), "east": (1, 0), "south": (0, 1), "west": (-1, 0)}


def cell_name(cell):
    return f"{cell[0]}_{cell[1]}"


@dataclass
class GridWorld:
    width: int
    height: int
    walls: frozenset
    labels: dict
    start: tuple
    apf: float = 1.0
    symbols: tuple = field(default=())

    def __post_init__(self):
        if not 0.0 < self.apf <= 1.0:
            raise InvalidApf(f"action precision factor must lie in (0, 1], got {self.apf}")
        if not self.symbols:
            self.symbols = tuple(dict.fromkeys(self.labels.values()))
        unreachable = [c for c in self.labels if c not in self.reachable_cells()]
        if unreachable:
            raise ValueError(f"labeled cells unreachable from start: {unreachable}")

    def is_open(self, cell):
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height and cell not in self.walls

    def open_cells(self):
        return [(x, y) for y in range(self.height) for x in range(self.width)
                if (x, y) not in self.walls]

    def reachable_cells(self):
        seen = {self.start}
        queue = deque([self.start])
        while queue:
            x, y = queue.popleft()
            for dx, dy in MOVES.values():
                c = (x + dx, y + dy)
                if self.is_open(c) and c not in seen:
                    seen.add(c)
                    queue.append(c)
        return seen

    def with_apf(self, apf):
        return GridWorld(self.width, self.height, self.walls, dict(self.labels),
                         self.start, apf, self.symbols)

    def build(self):
        """The grid as an ``NrMdp`` plus its labeling function.

        A move succeeds with probability ``apf`` and otherwise leaves the
        agent in place; moving into a wall or off the grid never moves.
        """
        cells = self.open_cells()
        transitions = {}
        for c in cells:
            for a, (dx, dy) in MOVES.items():
                dst = (c[0] + dx, c[1] + dy)
                if not self.is_open(dst):
                    dist = [(cell_name(c), 1.0)]
                elif self.apf >= 1.0:
                    dist = [(cell_name(dst), 1.0)]
                else:
                    dist = [(cell_name(dst), self.apf), (cell_name(c), 1.0 - self.apf)]
                transitions[(cell_name(c), a)] = dist
        mdp = NrMdp([cell_name(c) for c in cells], list(MOVES), transitions,
                    cell_name(self.start))
        mapping = {(a, cell_name(c)): z for c, z in self.labels.items() for a in MOVES}
        return mdp, LabelingFunction(mapping)

    def null_cells(self):
        return [c for c in self.open_cells() if c not in self.labels]


def parse_grid(text, apf=1.0):
    lines = text.splitlines()
    rows = []
    legend = {}
    in_legend = False
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip()
        if not line:
            continue
        if line.strip().lower() == "legend:":
            in_legend = True
            continue
        if in_legend:
            if "=" not in line:
                raise ModelParseError(f"legend entry must look like 'c = symbol': {line!r}", lineno)
            ch, sym = (p.strip() for p in line.split("=", 1))
            if len(ch) != 1 or not ch.islower():
                raise ModelParseError(f"legend key must be one lowercase character, got {ch!r}",
                                      lineno)
            if not sym or sym == "null":
                raise ModelParseError(f"invalid observation symbol {sym!r}", lineno)
            legend[ch] = sym
        else:
            rows.append((lineno, line))
    if not rows:
        raise ModelParseError("grid has no rows")
    width = len(rows[0][1])
    walls, cells, start = set(), {}, None
    for y, (lineno, line) in enumerate(rows):
        if len(line) != width:
            raise ModelParseError(f"row has {len(line)} cells, expected {width}", lineno)
        for x, ch in enumerate(line):
            if ch == "#":
                walls.add((x, y))
            elif ch == "S":
                if start is not None:
                    raise ModelParseError("more than one start cell", lineno)
                start = (x, y)
            elif ch.islower():
                cells[(x, y)] = ch
            elif ch != ".":
                raise ModelParseError(f"unknown grid character {ch!r}", lineno)
    if start is None:
        raise ModelParseError("grid has no start cell 'S'")
    labels = {}
    for c, ch in cells.items():
        if ch not in legend:
            raise ModelParseError(f"character {ch!r} is not in the legend")
        labels[c] = legend[ch]
    symbols = tuple(dict.fromkeys(legend.values()))
    return GridWorld(width, len(rows), frozenset(walls), labels, start, apf, symbols)


def emit_grid(grid):
    inverse = {}
    legend = {}
    for sym in grid.symbols:
        first = sym[0]
        if first.islower() and first not in legend:
            ch = first
        else:
            ch = next(c for c in "abcdefghijklmnopqrstuvwxyz" if c not in legend)
        legend[ch] = sym
        inverse[sym] = ch
    out = []
    for y in range(grid.height):
        row = []
        for x in range(grid.width):
            c = (x, y)
            if c in grid.walls:
                row.append("#")
            elif c == grid.start:
                row.append("S")
            elif c in grid.labels:
                row.append(inverse[grid.labels[c]])
            else:
                row.append(".")
        out.append("".join(row))
    out.append("legend:")
    out.extend(f"{ch} = {sym}" for ch, sym in legend.items())
    return "\n".join(out) + "\n"
