"""Active learning of Mealy reward machines in known stochastic environments."""

from .automata import NULL, MealyRewardMachine, equivalent, rewards_of_history
from .lstar import ObservationTable, init_table
from .mdp import (InteractionTrace, LabelingFunction, NrMdp, ProductMdp, discounted_sum,
                  extract_obs_trace, extract_rew_trace, mean_payoff, product)
from .solver import evaluate_policy, value_iteration

__version__ = "0.1.0"

__all__ = [
    "NULL", "MealyRewardMachine", "equivalent", "rewards_of_history",
    "ObservationTable", "init_table",
    "InteractionTrace", "LabelingFunction", "NrMdp", "ProductMdp", "discounted_sum",
    "extract_obs_trace", "extract_rew_trace", "mean_payoff", "product",
    "evaluate_policy", "value_iteration",
]
