"""Weather and parameter file I/O.

Weather CSV schema: header ``date,srad,tmax,tmin,rain``, one ISO-dated row
per day. Values are written with full float precision, so a write/read
cycle is lossless. Parameter files are JSON with one entry per month plus
the shared residual matrices.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
from pathlib import Path

import numpy as np

from ..errors import ParseError, ValidationError
from .types import WeatherDay, WeatherSeries
from .wgen import MonthParams, WgenParams

WEATHER_HEADER = ["date", "srad", "tmax", "tmin", "rain"]


def write_weather_file(series: WeatherSeries, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(WEATHER_HEADER)
        for day in series:
            writer.writerow([day.date.isoformat(), repr(float(day.srad)),
                             repr(float(day.tmax)), repr(float(day.tmin)),
                             repr(float(day.rain))])


def read_weather_file(path) -> WeatherSeries:
    path = Path(path)
    days: list[WeatherDay] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty weather file", path=str(path)) from None
        if [h.strip() for h in header] != WEATHER_HEADER:
            raise ParseError(
                f"missing or wrong header, expected {','.join(WEATHER_HEADER)}",
                path=str(path), line=1)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise ParseError(f"expected 5 fields, got {len(row)}",
                                 path=str(path), line=lineno)
            try:
                date = dt.date.fromisoformat(row[0].strip())
                srad, tmax, tmin, rain = (float(v) for v in row[1:])
            except ValueError as exc:
                raise ParseError(str(exc), path=str(path), line=lineno) from exc
            day = WeatherDay(date=date, srad=srad, tmax=tmax, tmin=tmin, rain=rain)
            try:
                day.validate()
            except ValidationError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from exc
            days.append(day)
    return WeatherSeries(days)


def _month_to_dict(m: MonthParams) -> dict:
    return {
        "p_wd": m.p_wd,
        "p_ww": m.p_ww,
        "gamma_shape": m.gamma_shape,
        "gamma_scale": m.gamma_scale,
        "mean_wet": m.mean_wet.tolist(),
        "mean_dry": m.mean_dry.tolist(),
        "sd_wet": m.sd_wet.tolist(),
        "sd_dry": m.sd_dry.tolist(),
    }


def write_params_file(params: WgenParams, path) -> None:
    doc = {
        "months": [_month_to_dict(m) for m in params.months],
        "a": params.a.tolist(),
        "b": params.b.tolist(),
        "notes": params.notes,
    }
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True))


def read_params_file(path) -> WgenParams:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}", path=str(path)) from exc
    try:
        months = [MonthParams(
            p_wd=m["p_wd"], p_ww=m["p_ww"],
            gamma_shape=m["gamma_shape"], gamma_scale=m["gamma_scale"],
            mean_wet=np.array(m["mean_wet"]), mean_dry=np.array(m["mean_dry"]),
            sd_wet=np.array(m["sd_wet"]), sd_dry=np.array(m["sd_dry"]),
        ) for m in doc["months"]]
        return WgenParams(months=months, a=np.array(doc["a"]), b=np.array(doc["b"]),
                          notes=list(doc.get("notes", [])))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing or malformed field: {exc}", path=str(path)) from exc
