"""Feature extraction for the emission models.

pp2/pp7 total water input (rain + irrigation, mm; 1 L/m2 of irrigation is
exactly 1 mm of depth) over the trailing 2/7 calendar days ending the day
before sampling. airT is the day's mean temperature, and daysAF counts
days since the most recent nitrogen application, with a 365-day sentinel
when none has occurred this season.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from typing import Iterable, Mapping

from ..errors import DomainError, ValidationError
from ..weather.types import WeatherSeries

DAYS_AF_SENTINEL = 365


@dataclass(frozen=True)
class EmissionFeatures:
    pp2: float
    pp7: float
    air_t: float
    days_af: float

    def __post_init__(self):
        if self.pp2 < 0.0 or self.pp7 < 0.0:
            raise ValidationError("precipitation features must be >= 0")
        if self.pp2 > self.pp7 + 1e-9:
            raise ValidationError(f"pp2 ({self.pp2}) cannot exceed pp7 ({self.pp7})")
        if self.days_af < 0.0:
            raise ValidationError("days_af must be >= 0")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.pp2, self.pp7, self.air_t, self.days_af)


def extract_features(weather: WeatherSeries, irrigation: Mapping[dt.date, float],
                     fertilization: Iterable[dt.date], day: dt.date,
                     season_start: dt.date | None = None) -> EmissionFeatures:
    """Build the model features for one sampling day.

    irrigation maps dates to applied depths (mm); fertilization lists the
    dates nitrogen was applied. Days before the weather record contribute
    nothing to the precipitation windows.
    """
    start = season_start if season_start is not None else weather.start
    if day < start:
        raise DomainError(f"sampling day {day} precedes season start {start}")
    if day not in weather:
        raise DomainError(f"sampling day {day} not covered by the weather series")

    def water_on(d: dt.date) -> float:
        rain = weather.at(d).rain if d in weather else 0.0
        return rain + irrigation.get(d, 0.0)

    pp2 = sum(water_on(day - dt.timedelta(days=k)) for k in (1, 2))
    pp7 = sum(water_on(day - dt.timedelta(days=k)) for k in range(1, 8))

    today = weather.at(day)
    air_t = 0.5 * (today.tmax + today.tmin)

    past = [d for d in fertilization if d <= day]
    days_af = (day - max(past)).days if past else DAYS_AF_SENTINEL
    return EmissionFeatures(pp2=pp2, pp7=pp7, air_t=air_t, days_af=float(days_af))
