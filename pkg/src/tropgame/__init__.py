"""Exact tools for stochastic mean-payoff games given by tropical Shapley operators."""
from .game import StochasticGame, game_stats, generate_random_game, parse_game, serialize_game, validate_game
from .oracle import solve_game, solve_operator
from .shapley import ShapleyOperator, apply, build_operator, conjugate, recession
from .value_iteration import VIConfig, Winner, predict_bounds, run_exact, run_finite_precision, run_perturbed_rescaled

__all__ = [
    "StochasticGame", "game_stats", "generate_random_game", "parse_game", "serialize_game", "validate_game",
    "solve_game", "solve_operator", "ShapleyOperator", "apply", "build_operator", "conjugate", "recession",
    "VIConfig", "Winner", "predict_bounds", "run_exact", "run_finite_precision", "run_perturbed_rescaled",
]
