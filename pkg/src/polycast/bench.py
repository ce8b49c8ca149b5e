"""Forecast evaluation: single corrected forecasts, surveys over many
anchors, and error metrics.

Entries are labelled 1-based for reporting.  A record's ``entry`` is the
anchor: the last series entry whose value the forecaster may use.  The
forecast itself targets the next entry, and ``actual`` (when the series
extends that far) is that next entry's true value.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence, Tuple

import numpy as np

from .correction import (
    DifferenceTable,
    NoPlateauError,
    corrected_forecast,
    find_plateau,
)
from .embedding import PhaseSpace, TimeSeries
from .fitting import PolynomialMap

FLAG_NO_PLATEAU = "no_plateau"
FLAG_NO_CORRECTION_NEEDED = "no_correction_needed"
FLAG_NEAR_ZERO_ACTUAL = "near_zero_actual"

# Actuals at least this close to zero make percentage error unstable;
# such records are flagged rather than rejected.
NEAR_ZERO_THRESHOLD = 1e-9

# Log error ratios are clipped to +/- this when one error is zero.
LOG_RATIO_CAP = 50.0


def percentage_error(actual: float, forecast: float) -> float:
    """100 * |(actual - forecast) / actual|; infinite when actual is 0."""
    if actual == 0.0:
        return math.inf
    return 100.0 * abs((actual - forecast) / actual)


@dataclass(frozen=True)
class ForecastRecord:
    """One forecast of the entry after ``entry``, raw and corrected.

    ``k_star`` is None when no correction was applied (perfect error
    window or no plateau found); ``actual`` and both errors are None when
    the forecast target lies beyond the series end.
    """

    entry: int
    gf_forecast: float
    igf_forecast: float
    k_star: int | None
    actual: float | None = None
    gf_error_pct: float | None = None
    igf_error_pct: float | None = None
    flags: frozenset = frozenset()


def error_window(
    fmap: PolynomialMap,
    series: TimeSeries,
    space: PhaseSpace,
    point_index: int,
    window: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """Actuals and map forecasts for points point_index-window..point_index.

    These are the inputs of the correction's difference table: entry j of
    either array belongs to the forecast made from point
    point_index - window + j.
    """
    if point_index - window < 0:
        raise ValueError(
            f"correction window of size {window} extends before the series "
            f"start at point {point_index}"
        )
    rows = np.arange(point_index - window, point_index + 1)
    span = space.params.window_span
    forecasts = fmap.predict_many(space.points[rows])
    actuals = series.values[rows + span + 1]
    return actuals, forecasts


def forecast_improved(
    fmap: PolynomialMap,
    series: TimeSeries,
    space: PhaseSpace,
    point_index: int,
    window: int = 40,
    n_cap: int = 30,
    fallback_on_no_plateau: bool = False,
) -> ForecastRecord:
    """Forecast the entry after point ``point_index``'s newest component.

    The raw (GF) forecast evaluates the map at point point_index + 1; the
    improved (IGF) forecast adds the plateau-order partial sum of the
    difference table built over the previous ``window`` + 1 forecast
    errors.  Raises NoPlateauError when the magnitudes never stop falling
    within ``n_cap`` orders, unless ``fallback_on_no_plateau`` is set, in
    which case the record carries the raw forecast and a flag.
    """
    if window < n_cap:
        raise ValueError(f"window {window} must be at least n_cap {n_cap}")
    if not 0 <= point_index < space.point_count - 1:
        raise ValueError(
            f"point {point_index} cannot anchor a forecast; need "
            f"0 <= point < {space.point_count - 1} so the forecast point exists"
        )
    span = space.params.window_span
    entry = point_index + span + 2  # 1-based label of the anchor series entry
    actuals, forecasts = error_window(fmap, series, space, point_index, window)
    gf = fmap.predict(space.points[point_index + 1])

    flags = set()
    k_star: int | None = None
    igf = gf
    eps = actuals - forecasts
    if np.all(eps == 0.0):
        flags.add(FLAG_NO_CORRECTION_NEEDED)
    else:
        table = DifferenceTable(eps, anchor=entry)
        try:
            plateau = find_plateau(table, n_cap=n_cap)
        except NoPlateauError:
            if not fallback_on_no_plateau:
                raise
            flags.add(FLAG_NO_PLATEAU)
        else:
            k_star = plateau.k_star
            igf = corrected_forecast(gf, table, k_star)

    target_next = point_index + span + 2  # 0-based index of the forecast entry
    actual = gf_err = igf_err = None
    if target_next < len(series):
        actual = float(series.values[target_next])
        if abs(actual) < NEAR_ZERO_THRESHOLD:
            flags.add(FLAG_NEAR_ZERO_ACTUAL)
        gf_err = percentage_error(actual, gf)
        igf_err = percentage_error(actual, igf)
    return ForecastRecord(
        entry=entry,
        gf_forecast=gf,
        igf_forecast=igf,
        k_star=k_star,
        actual=actual,
        gf_error_pct=gf_err,
        igf_error_pct=igf_err,
        flags=frozenset(flags),
    )


class LogRatioPoint(NamedTuple):
    entry: int
    value: float
    capped: bool


def log_ratio_series(
    records: Sequence[ForecastRecord], cap: float = LOG_RATIO_CAP
) -> Tuple[LogRatioPoint, ...]:
    """ln(gf_error / igf_error) per record with known errors.

    A zero error on either side would give an infinite ratio; those
    values are clipped to +/- ``cap`` and marked capped.
    """
    out = []
    for rec in records:
        if rec.gf_error_pct is None or rec.igf_error_pct is None:
            continue
        gf, igf = rec.gf_error_pct, rec.igf_error_pct
        if igf == 0.0 and gf == 0.0:
            point = LogRatioPoint(rec.entry, 0.0, True)
        elif igf == 0.0:
            point = LogRatioPoint(rec.entry, cap, True)
        elif gf == 0.0:
            point = LogRatioPoint(rec.entry, -cap, True)
        else:
            raw = math.log(gf / igf)
            if raw > cap:
                point = LogRatioPoint(rec.entry, cap, True)
            elif raw < -cap:
                point = LogRatioPoint(rec.entry, -cap, True)
            else:
                point = LogRatioPoint(rec.entry, raw, False)
        out.append(point)
    return tuple(out)


@dataclass(frozen=True)
class SurveyReport:
    """Forecasts over a set of anchors plus aggregate percentage errors."""

    records: Tuple[ForecastRecord, ...]
    mean_gf_error_pct: float
    mean_igf_error_pct: float
    log_ratio: Tuple[LogRatioPoint, ...]


def equally_spaced(start: int, stop: int, step: int) -> Tuple[int, ...]:
    """Anchor entries start, start+step, ... up to and including stop."""
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    return tuple(range(start, stop + 1, step))


def survey(
    fmap: PolynomialMap,
    series: TimeSeries,
    space: PhaseSpace,
    entries: Iterable[int],
    window: int = 40,
    n_cap: int = 30,
    include_near_zero: bool = True,
    jobs: int = 1,
) -> SurveyReport:
    """Run corrected forecasts at many anchors and aggregate the errors.

    ``entries`` are 1-based anchor entries; every one must admit a full
    correction window and an in-range forecast point.  Per-anchor plateau
    failures become flagged records rather than aborting the survey.
    Means cover records with known actuals, excluding near-zero actuals
    when ``include_near_zero`` is false.  Output order follows input
    order regardless of ``jobs``.
    """
    span = space.params.window_span
    entries = list(entries)
    points = []
    for entry in entries:
        point = entry - span - 2  # invert entry = point + span + 2
        if point < window or point >= space.point_count - 1:
            raise ValueError(
                f"anchor entry {entry} does not admit a correction window of "
                f"size {window} inside the series"
            )
        points.append(point)

    def run(point: int) -> ForecastRecord:
        return forecast_improved(
            fmap, series, space, point, window, n_cap,
            fallback_on_no_plateau=True,
        )

    if jobs > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = tuple(pool.map(run, points))
    else:
        records = tuple(run(p) for p in points)

    included = [
        rec
        for rec in records
        if rec.gf_error_pct is not None
        and (include_near_zero or FLAG_NEAR_ZERO_ACTUAL not in rec.flags)
    ]
    if included:
        mean_gf = float(np.mean([rec.gf_error_pct for rec in included]))
        mean_igf = float(np.mean([rec.igf_error_pct for rec in included]))
    else:
        mean_gf = mean_igf = math.nan
    return SurveyReport(
        records=records,
        mean_gf_error_pct=mean_gf,
        mean_igf_error_pct=mean_igf,
        log_ratio=log_ratio_series(records),
    )
