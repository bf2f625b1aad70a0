"""Parameter containers, fitting, and day/season generation.

Temperature/radiation residuals use the lag-1 process

    z_t = A z_{t-1} + B eps_t,   eps_t ~ N(0, I)

over the variable order (tmax, tmin, srad). A and B are fitted from all
months pooled: monthly 3x3 correlation fits are far too noisy at one
observation per day, and the residual process is near-stationary across
the year once the seasonal means/SDs are removed.
"""

from __future__ import annotations

import calendar
import dataclasses
import datetime as dt
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError, ValidationError
from ..rng import as_generator
from .types import WeatherDay, WeatherSeries

RESIDUAL_VARS = ("tmax", "tmin", "srad")

# Fallbacks for months whose history shows no (or a single) wet day.
FALLBACK_GAMMA_SHAPE = 1.0
FALLBACK_GAMMA_SCALE = 5.0

# Radiation floor: keeps heavily negative residual draws physical.
SRAD_FLOOR = 0.1


@dataclass
class MonthParams:
    """Occurrence, amount, and conditional temperature/radiation parameters
    for one calendar month. mean_/sd_ arrays are ordered (tmax, tmin, srad)."""

    p_wd: float
    p_ww: float
    gamma_shape: float
    gamma_scale: float
    mean_wet: np.ndarray
    mean_dry: np.ndarray
    sd_wet: np.ndarray
    sd_dry: np.ndarray

    def validate(self) -> None:
        for name in ("p_wd", "p_ww"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValidationError(f"{name} must be in [0,1], got {p}")
        if self.gamma_shape <= 0.0 or self.gamma_scale <= 0.0:
            raise ValidationError("gamma parameters must be positive")
        for name in ("mean_wet", "mean_dry", "sd_wet", "sd_dry"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.shape != (3,):
                raise ValidationError(f"{name} must have shape (3,)")
            setattr(self, name, arr)
        if np.any(self.sd_wet < 0.0) or np.any(self.sd_dry < 0.0):
            raise ValidationError("standard deviations must be >= 0")


@dataclass
class WgenParams:
    """Twelve MonthParams plus the shared residual matrices A and B."""

    months: list[MonthParams]
    a: np.ndarray
    b: np.ndarray
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=np.float64)
        self.b = np.asarray(self.b, dtype=np.float64)
        if len(self.months) != 12:
            raise ValidationError("WgenParams needs exactly 12 months")
        if self.a.shape != (3, 3) or self.b.shape != (3, 3):
            raise ValidationError("A and B must be 3x3")
        for m in self.months:
            m.validate()

    def month(self, month_number: int) -> MonthParams:
        return self.months[month_number - 1]


@dataclass(frozen=True)
class ClimateScenario:
    """Perturbation applied before sampling: temp_offset (degC) is added to
    monthly tmax/tmin means, rain_factor scales the wet-day gamma scale.

    With preserve_monthly_totals set, each generated month's rainfall is
    rescaled so its total equals rain_factor times the reference month's
    total, exactly. At factor 1.0 this pins totals to the reference year.
    """

    temp_offset: float = 0.0
    rain_factor: float = 1.0
    preserve_monthly_totals: bool = False

    def __post_init__(self):
        if self.temp_offset < 0.0:
            raise ValidationError(f"temp_offset must be >= 0, got {self.temp_offset}")
        if not 0.0 < self.rain_factor <= 1.0:
            raise ValidationError(f"rain_factor must be in (0,1], got {self.rain_factor}")

    @property
    def is_identity(self) -> bool:
        return (self.temp_offset == 0.0 and self.rain_factor == 1.0
                and not self.preserve_monthly_totals)


IDENTITY_SCENARIO = ClimateScenario()


def stationary_wet_probability(month: MonthParams) -> float:
    """Long-run wet-day frequency of the two-state chain."""
    denom = 1.0 - month.p_ww + month.p_wd
    if denom <= 0.0:
        # p_ww = 1 and p_wd = 0: both states absorbing; split the difference.
        return 0.5
    return month.p_wd / denom


def perturbed_params(params: WgenParams, scenario: ClimateScenario) -> WgenParams:
    """Apply scenario offsets to a copy of params (means only, SDs kept)."""
    if scenario.is_identity:
        return params
    months = []
    for m in params.months:
        mean_wet = m.mean_wet.copy()
        mean_dry = m.mean_dry.copy()
        mean_wet[0] += scenario.temp_offset
        mean_wet[1] += scenario.temp_offset
        mean_dry[0] += scenario.temp_offset
        mean_dry[1] += scenario.temp_offset
        months.append(dataclasses.replace(
            m, mean_wet=mean_wet, mean_dry=mean_dry,
            gamma_scale=m.gamma_scale * scenario.rain_factor))
    return WgenParams(months=months, a=params.a, b=params.b, notes=list(params.notes))


def _residual_of(params: WgenParams, day: WeatherDay) -> np.ndarray:
    """Back out the standardized residual vector of an existing day."""
    m = params.month(day.date.month)
    mean = m.mean_wet if day.wet else m.mean_dry
    sd = m.sd_wet if day.wet else m.sd_dry
    vals = np.array([day.tmax, day.tmin, day.srad])
    z = np.zeros(3)
    ok = sd > 1e-9
    z[ok] = (vals[ok] - mean[ok]) / sd[ok]
    return z


def generate_day(params: WgenParams, day: dt.date, prev: WeatherDay | None, rng) -> WeatherDay:
    """Sample one day conditioned on the previous day (or the stationary
    wet probability when prev is None).

    Draw order per day: one uniform for occurrence, one gamma draw if wet,
    then three standard normals for the residual process.
    """
    gen = as_generator(rng)
    m = params.month(day.month)
    if prev is None:
        p_wet = stationary_wet_probability(m)
        z_prev = np.zeros(3)
    else:
        p_wet = m.p_ww if prev.wet else m.p_wd
        z_prev = _residual_of(params, prev)

    wet = gen.uniform() < p_wet
    rain = float(gen.gamma(m.gamma_shape, m.gamma_scale)) if wet else 0.0

    eps = gen.standard_normal(3)
    z = params.a @ z_prev + params.b @ eps
    mean = m.mean_wet if wet else m.mean_dry
    sd = m.sd_wet if wet else m.sd_dry
    tmax, tmin, srad = mean + sd * z
    if tmax < tmin:
        tmax, tmin = tmin, tmax
    srad = max(srad, SRAD_FLOOR)
    return WeatherDay(date=day, srad=float(srad), tmax=float(tmax),
                      tmin=float(tmin), rain=rain)


def _date_range(start: dt.date, end: dt.date):
    d = start
    while d <= end:
        yield d
        d += dt.timedelta(days=1)


def generate_season(params: WgenParams, scenario: ClimateScenario,
                    span: tuple[dt.date, dt.date], rng,
                    reference_totals: dict[int, float] | None = None) -> WeatherSeries:
    """Generate a daily series over an inclusive date span within one year."""
    start, end = span
    if end < start:
        return WeatherSeries([], validate=False)
    if start.year != end.year:
        raise ConfigurationError("season span must lie within one calendar year")
    if scenario.preserve_monthly_totals and reference_totals is None:
        raise ConfigurationError(
            "preserve_monthly_totals requires reference monthly totals")

    gen = as_generator(rng)
    p = perturbed_params(params, scenario)
    days: list[WeatherDay] = []
    prev = None
    for day in _date_range(start, end):
        prev = generate_day(p, day, prev, gen)
        days.append(prev)

    if scenario.preserve_monthly_totals:
        days = _rescale_monthly_totals(days, scenario, reference_totals, gen)
    return WeatherSeries(days, validate=False)


def _rescale_monthly_totals(days, scenario, reference_totals, gen):
    out = list(days)
    by_month: dict[int, list[int]] = {}
    for i, d in enumerate(out):
        by_month.setdefault(d.date.month, []).append(i)
    for month, idxs in by_month.items():
        if month not in reference_totals:
            raise ConfigurationError(f"no reference rainfall total for month {month}")
        target = reference_totals[month] * scenario.rain_factor
        total = sum(out[i].rain for i in idxs)
        if total > 0.0:
            factor = target / total
            for i in idxs:
                out[i] = dataclasses.replace(out[i], rain=out[i].rain * factor)
        elif target > 0.0:
            # Degenerate all-dry month: place the whole target on one day.
            i = idxs[int(gen.integers(0, len(idxs)))]
            out[i] = dataclasses.replace(out[i], rain=target)
    return out


# ---------------------------------------------------------------------------
# Fitting


def fit_params(history: WeatherSeries) -> WgenParams:
    """Estimate WgenParams from at least one full year of daily records.

    Transition probabilities come from wet/dry run counts per month, gamma
    parameters from method-of-moments on wet-day amounts, conditional
    means/SDs per month and wet/dry state, and A/B from lag-0/lag-1
    correlations of the pooled standardized residuals. Degenerate months
    fall back to documented defaults and are flagged in params.notes.
    """
    if len(history) < 365:
        raise ConfigurationError("need at least one full year of daily records")
    present_months = {d.date.month for d in history}
    if present_months != set(range(1, 13)):
        raise ConfigurationError("history must cover all 12 calendar months")

    notes: list[str] = []
    month_days: dict[int, list[WeatherDay]] = {m: [] for m in range(1, 13)}
    for day in history:
        month_days[day.date.month].append(day)

    # Transition counts; a pair belongs to the month of its second day.
    trans = {m: [0, 0, 0, 0] for m in range(1, 13)}  # dry->wet, dry, wet->wet, wet
    for prev, cur in zip(history, history[1:]):
        t = trans[cur.date.month]
        if prev.wet:
            t[3] += 1
            t[2] += cur.wet
        else:
            t[1] += 1
            t[0] += cur.wet

    months: list[MonthParams] = []
    for m in range(1, 13):
        dw, dn, ww, wn = trans[m]
        p_wd = dw / dn if dn else 0.0
        if dn == 0:
            notes.append(f"month {m}: no dry-previous days, p_wd defaulted to 0")
        p_ww = ww / wn if wn else 0.0
        if wn == 0:
            notes.append(f"month {m}: no wet-previous days, p_ww defaulted to 0")

        amounts = np.array([d.rain for d in month_days[m] if d.wet])
        if amounts.size >= 2 and amounts.var() > 0.0:
            mean = amounts.mean()
            var = amounts.var()
            shape = mean * mean / var
            scale = var / mean
        else:
            shape, scale = FALLBACK_GAMMA_SHAPE, FALLBACK_GAMMA_SCALE
            notes.append(f"month {m}: too few wet days, gamma parameters defaulted")

        stats = {}
        for wet in (True, False):
            sel = [d for d in month_days[m] if d.wet == wet]
            if sel:
                vals = np.array([[d.tmax, d.tmin, d.srad] for d in sel])
                stats[wet] = (vals.mean(axis=0), vals.std(axis=0))
            else:
                stats[wet] = None
        if stats[True] is None:
            stats[True] = stats[False]
            notes.append(f"month {m}: no wet days, wet-state stats copied from dry")
        if stats[False] is None:
            stats[False] = stats[True]
            notes.append(f"month {m}: no dry days, dry-state stats copied from wet")

        months.append(MonthParams(
            p_wd=p_wd, p_ww=p_ww, gamma_shape=float(shape), gamma_scale=float(scale),
            mean_wet=stats[True][0], mean_dry=stats[False][0],
            sd_wet=stats[True][1], sd_dry=stats[False][1]))

    params = WgenParams(months=months, a=np.zeros((3, 3)), b=np.eye(3), notes=notes)
    a, b = _fit_residual_matrices(params, history, notes)
    params.a = a
    params.b = b
    return params


def _fit_residual_matrices(params: WgenParams, history: WeatherSeries, notes: list[str]):
    z = np.array([_residual_of(params, d) for d in history])
    if len(z) < 30:
        notes.append("history too short for residual correlations, using identity B")
        return np.zeros((3, 3)), np.eye(3)
    sd = z.std(axis=0)
    sd[sd < 1e-9] = 1.0
    zn = (z - z.mean(axis=0)) / sd
    m0 = (zn.T @ zn) / len(zn)
    m1 = (zn[1:].T @ zn[:-1]) / (len(zn) - 1)
    try:
        m0_inv = np.linalg.inv(m0)
    except np.linalg.LinAlgError:
        notes.append("singular lag-0 correlation, using identity B")
        return np.zeros((3, 3)), np.eye(3)
    a = m1 @ m0_inv
    c = m0 - m1 @ m0_inv @ m1.T
    # PSD repair before the matrix square root.
    c = 0.5 * (c + c.T)
    vals, vecs = np.linalg.eigh(c)
    vals = np.clip(vals, 1e-10, None)
    b = vecs @ np.diag(np.sqrt(vals))
    return a, b


def days_in_month(month: int, year: int = 2012) -> int:
    return calendar.monthrange(year, month)[1]
