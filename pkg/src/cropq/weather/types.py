"""Daily weather records and series containers."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ..errors import ValidationError

VARIABLES = ("srad", "tmax", "tmin", "rain")


@dataclass(frozen=True)
class WeatherDay:
    """One day of weather: solar radiation (MJ/m2/d), temperatures (degC),
    rainfall (mm/d)."""

    date: dt.date
    srad: float
    tmax: float
    tmin: float
    rain: float

    def validate(self) -> "WeatherDay":
        if self.rain < 0.0:
            raise ValidationError(f"{self.date}: rain must be >= 0, got {self.rain}")
        if self.srad < 0.0:
            raise ValidationError(f"{self.date}: srad must be >= 0, got {self.srad}")
        if self.tmax < self.tmin:
            raise ValidationError(
                f"{self.date}: tmax ({self.tmax}) < tmin ({self.tmin})")
        return self

    @property
    def wet(self) -> bool:
        # Wet day threshold: any measurable rain.
        return self.rain > 0.0

    @property
    def tmean(self) -> float:
        return 0.5 * (self.tmax + self.tmin)


class WeatherSeries(Sequence[WeatherDay]):
    """An immutable run of consecutive daily records."""

    def __init__(self, days: Sequence[WeatherDay], validate: bool = True):
        days = tuple(days)
        if validate:
            for prev, cur in zip(days, days[1:]):
                if (cur.date - prev.date).days != 1:
                    raise ValidationError(
                        f"dates must be consecutive: {prev.date} -> {cur.date}")
            for day in days:
                day.validate()
        self._days = days
        self._index = {day.date: i for i, day in enumerate(days)}

    def __len__(self) -> int:
        return len(self._days)

    def __iter__(self) -> Iterator[WeatherDay]:
        return iter(self._days)

    def __getitem__(self, i):
        return self._days[i]

    @property
    def start(self) -> dt.date:
        return self._days[0].date

    @property
    def end(self) -> dt.date:
        return self._days[-1].date

    def at(self, date: dt.date) -> WeatherDay:
        return self._days[self._index[date]]

    def __contains__(self, date) -> bool:
        return date in self._index

    def column(self, name: str) -> np.ndarray:
        if name not in VARIABLES:
            raise KeyError(name)
        return np.array([getattr(d, name) for d in self._days])

    def monthly_rain_totals(self) -> dict[int, float]:
        """Total rain per calendar month present in the series."""
        totals: dict[int, float] = {}
        for day in self._days:
            totals[day.date.month] = totals.get(day.date.month, 0.0) + day.rain
        return totals

    def slice_dates(self, start: dt.date, end: dt.date) -> "WeatherSeries":
        """Inclusive date-range slice; both endpoints must be present."""
        i, j = self._index[start], self._index[end]
        return WeatherSeries(self._days[i:j + 1], validate=False)
