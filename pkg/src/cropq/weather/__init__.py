"""Stochastic daily weather generation.

Wet/dry occurrence follows a first-order two-state Markov chain; wet-day
amounts come from a two-parameter gamma distribution; tmax/tmin/srad
residuals follow a lag-1 multivariate normal process conditioned on the
day's wet/dry state. Climate scenarios perturb monthly temperature means
and rainfall scale, optionally pinning monthly totals to a reference year.
"""

from .types import WeatherDay, WeatherSeries
from .wgen import (
    ClimateScenario,
    MonthParams,
    WgenParams,
    fit_params,
    generate_day,
    generate_season,
    perturbed_params,
    stationary_wet_probability,
)
from .io import read_params_file, read_weather_file, write_params_file, write_weather_file
from .reference import reference_params, reference_series

__all__ = [
    "WeatherDay",
    "WeatherSeries",
    "MonthParams",
    "WgenParams",
    "ClimateScenario",
    "fit_params",
    "generate_day",
    "generate_season",
    "perturbed_params",
    "stationary_wet_probability",
    "read_weather_file",
    "write_weather_file",
    "read_params_file",
    "write_params_file",
    "reference_params",
    "reference_series",
]
