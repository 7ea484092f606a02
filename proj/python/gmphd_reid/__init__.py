"""GM-PHD multi-object tracker with appearance-augmented likelihood and re-identification."""

from ._core import (
    InputError,
    NumericalError,
    Tracker,
    ablate,
    appearance_likelihood,
    config_keys,
    evaluate,
    resolve_config,
    solve_min_cost,
    synthesize,
    track,
)
from ._core import default_config as _default_config_text

__all__ = [
    "InputError",
    "NumericalError",
    "Tracker",
    "ablate",
    "appearance_likelihood",
    "config_keys",
    "default_config",
    "evaluate",
    "resolve_config",
    "solve_min_cost",
    "synthesize",
    "track",
]


def _typed(text):
    if text in ("true", "false"):
        return text == "true"
    for kind in (int, float):
        try:
            return kind(text)
        except ValueError:
            pass
    return text


def default_config():
    """Default tracker parameters keyed by their config-file names."""
    return {key: _typed(value) for key, value in _default_config_text().items()}
