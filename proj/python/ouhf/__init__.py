from ._ouhf import (
    OuhfError,
    OuParams,
    cycle_moments,
    fit,
    optimal_policy,
    optimize_signals,
    passage_mean,
    passage_variance,
    predict_mom_bias,
    simulate,
    strategy_moments,
)

__all__ = [
    "OuhfError",
    "OuParams",
    "cycle_moments",
    "fit",
    "optimal_policy",
    "optimize_signals",
    "passage_mean",
    "passage_variance",
    "predict_mom_bias",
    "simulate",
    "strategy_moments",
]
