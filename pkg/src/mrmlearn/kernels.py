"""Backend selection for the search kernel.

The compiled extension is used when it was built; otherwise, or when
``MRMLEARN_PURE_PYTHON`` is set, the pure-Python twin is used. Both take
the same arguments and return the same values.
"""

import os

from ._mcts_py import mcts_search as python_mcts_search

compiled_mcts_search = None
if not os.environ.get("MRMLEARN_PURE_PYTHON"):
    try:
        from ._mcts import mcts_search as compiled_mcts_search
    except ImportError:
        compiled_mcts_search = None

mcts_search = compiled_mcts_search or python_mcts_search
BACKEND = "compiled" if compiled_mcts_search is not None else "python"
