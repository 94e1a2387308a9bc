"""Time the compiled MCTS kernel against the pure-Python fallback.

Usage: python3 benchmarks/bench_mcts.py [--searches N] [--apf P]

Both backends search the treasure grid from the same states with the same
seeds; the script checks that they agree before reporting timings.
"""

import argparse
import math
import time

from mrmlearn import kernels
from mrmlearn.envs import build_treasure_map
from mrmlearn.planning import MctsPlanner


def _same(a, b):
    return a[0] == b[0] and all(
        (math.isnan(x) and math.isnan(y)) or x == y for x, y in zip(a[1], b[1]))


def bench(backend, planner_args, jobs):
    planner = MctsPlanner(*planner_args, backend=backend)
    out = []
    t0 = time.perf_counter()
    for target, state, seed in jobs:
        out.append(planner.search_stats(target, state, seed))
    return time.perf_counter() - t0, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--searches", type=int, default=40)
    ap.add_argument("--apf", type=float, default=0.85)
    args = ap.parse_args()

    env = build_treasure_map(args.apf)
    states = env.start_states
    targets = env.alphabet
    jobs = [(targets[i % len(targets)], states[(7 * i) % len(states)], 1000 + i)
            for i in range(args.searches)]

    if kernels.compiled_mcts_search is None:
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation`")
    t_py, r_py = bench(kernels.python_mcts_search, (env.model,), jobs)
    t_c, r_c = bench(kernels.compiled_mcts_search, (env.model,), jobs)
    agree = all(_same(a, b) for a, b in zip(r_py, r_c))

    print(f"searches          {args.searches} (400 simulations each, depth 30)")
    print(f"python fallback   {t_py / args.searches * 1e3:9.3f} ms/search")
    print(f"compiled kernel   {t_c / args.searches * 1e3:9.3f} ms/search")
    print(f"speedup           {t_py / t_c:9.1f}x")
    print(f"identical results {agree}")
    if not agree:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
