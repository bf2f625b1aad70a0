"""Partially observable crop-management environment.

A single-layer soil-water bucket, a mineral-nitrogen pool, and a thermal-
time driven canopy stand in for a full crop-physiology engine. The
environment exposes a small step/reset interface (see
:class:`cropq.env.crop.CropEnv`) so an external simulator could be swapped
in behind the same surface; everything downstream (agent, harness) only
touches that interface.
"""

from .actions import N_ACTIONS, N_LEVELS, WATER_LEVELS, ActionChoice
from .reward import CASE_PRESETS, RewardWeights, SeasonTotals, season_reward_total
from .config import CropParams, SeasonConfig, SoilParams, load_season_config, save_season_config
from .history import ObservationBuffer, observe_history
from .crop import (
    CropEnv,
    DayDiagnostics,
    EpisodeRecord,
    FixedWeatherSource,
    Observation,
    StepOutcome,
    WgenWeatherSource,
    write_episode_log,
)
from .toy import DelayedCueEnv

__all__ = [
    "ActionChoice",
    "N_ACTIONS",
    "N_LEVELS",
    "WATER_LEVELS",
    "RewardWeights",
    "CASE_PRESETS",
    "SeasonTotals",
    "season_reward_total",
    "SoilParams",
    "CropParams",
    "SeasonConfig",
    "load_season_config",
    "save_season_config",
    "ObservationBuffer",
    "observe_history",
    "CropEnv",
    "Observation",
    "StepOutcome",
    "DayDiagnostics",
    "EpisodeRecord",
    "FixedWeatherSource",
    "WgenWeatherSource",
    "write_episode_log",
    "DelayedCueEnv",
]
