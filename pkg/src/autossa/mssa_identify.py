"""MSSA versions of the identification methods.

Left singular vectors of MSSA look like 1D singular vectors, so the ``*_left``
functions delegate to :mod:`autossa.identify`.  Right singular vectors and
elementary series are split into channels and the per-channel measures are
aggregated: maximum for the trend share and the two-bin mass, minimum for the
angle measure, union for the frequency candidate sets.
"""

from __future__ import annotations

from typing import Any, Sequence

import numpy as np

from . import spectral
from .core import DEGENERATE_PART_NORM, FactorVectorParts, split_factor_vector
from .errors import ParameterError
from .identify import (
    AngleIdConfig,
    FreqIdConfig,
    GroupingResult,
    TrendIdConfig,
    identify_periodic_angle,
    identify_periodic_freq,
    identify_trend,
    safe_tau_norm,
    select_by_angle,
    trend_result,
    _near_nyquist,
)


def identify_trend_mssa_left(U, cfg: TrendIdConfig, indices=None) -> GroupingResult:
    return identify_trend(U, cfg, indices)


def identify_periodic_freq_mssa_left(U, cfg: FreqIdConfig = FreqIdConfig(), start: int = 0) -> GroupingResult:
    return identify_periodic_freq(U, cfg, start)


def identify_periodic_angle_mssa_left(U, cfg: AngleIdConfig, start: int = 0) -> GroupingResult:
    return identify_periodic_angle(U, cfg, start)


def _channel_items(items, widths) -> list[list[np.ndarray | None]]:
    """Per-item lists of channel vectors, None marking degenerate channels.

    All measures applied downstream are scale invariant, so the raw parts are
    used in place of their unit-norm copies.

    An item is either a multichannel series (a list of arrays), a
    :class:`FactorVectorParts`, or a stacked right vector split by ``widths``.
    """
    out = []
    for item in items:
        if isinstance(item, FactorVectorParts):
            out.append([None if bad else part for part, bad in zip(item.parts, item.degenerate)])
        elif isinstance(item, (list, tuple)):
            chans = []
            for c in item:
                c = np.asarray(c, dtype=float)
                chans.append(None if np.linalg.norm(c) < DEGENERATE_PART_NORM else c)
            out.append(chans)
        else:
            if widths is None:
                raise ParameterError("stacked right vectors need the channel widths K_p")
            fv = split_factor_vector(item, widths)
            out.append([None if bad else part for part, bad in zip(fv.parts, fv.degenerate)])
    return out


def identify_trend_mssa_right(
    items: Sequence[Any], cfg: TrendIdConfig, widths: Sequence[int] | None = None,
    indices: Sequence[int] | None = None,
) -> GroupingResult:
    """Trend method on right singular vectors or elementary multichannel series.

    Each item's measure is the maximum over its non-degenerate channels of the
    band share; items with no usable channel are flagged.
    """
    idx = list(range(len(items))) if indices is None else list(indices)
    if len(idx) != len(items):
        raise ParameterError("indices and items differ in length")
    per_item = _channel_items(items, widths)
    measures, per_channel, flagged = {}, {}, []
    for i, chans in zip(idx, per_item):
        vals = [None if c is None else spectral.freq_contribution(c, cfg.omega1, cfg.omega2)
                for c in chans]
        per_channel[i] = vals
        usable = [v for v in vals if v is not None]
        if not usable:
            flagged.append(i)
            measures[i] = 0.0
        else:
            measures[i] = max(usable)
    res = trend_result(measures, flagged, cfg.threshold)
    res.details["per_channel"] = per_channel
    return res


def identify_periodic_freq_mssa_right(
    V: Sequence[Any], cfg: FreqIdConfig = FreqIdConfig(), widths: Sequence[int] | None = None,
    start: int = 0,
) -> GroupingResult:
    """Frequency method on the normalized channel parts of right singular vectors.

    Candidate pairs and singles are collected per channel on that channel's own
    grid of ``K_p`` points and united; the two-bin masses are then maximized
    over all non-degenerate channels.
    """
    if len(V) < 1:
        raise ParameterError("need at least one right singular vector")
    per_item = _channel_items(V, widths)
    n_ch = len(per_item[0])
    if any(len(c) != n_ch for c in per_item):
        raise ParameterError("all right vectors must have the same channel layout")
    # pgs[p][i]: periodogram of channel p of vector i, None if degenerate
    pgs = [[None if item[p] is None else spectral.periodogram_1d(item[p]) for item in per_item]
           for p in range(n_ch)]
    j1: set[int] = set()
    j2: set[int] = set()
    thetas = []
    for p in range(n_ch):
        ks = [None if pg is None else spectral.argmax_index(pg) for pg in pgs[p]]
        thetas.append([None if k is None else k / pgs[p][i].M for i, k in enumerate(ks)])
        for i in range(len(ks) - 1):
            a, b = ks[i], ks[i + 1]
            if a is not None and b is not None and a > 0 and b > 0 and abs(a - b) <= cfg.s0:
                j1.add(i)
        for i, k in enumerate(ks):
            if k is not None and _near_nyquist(k, pgs[p][i].M, cfg.s0):
                j2.add(i)
    flagged = tuple(start + i for i, item in enumerate(per_item) if all(c is None for c in item))

    measures: dict[Any, float] = {}
    pairs, singles = [], []
    for i in sorted(j1):
        vals = [spectral.max_two_bin_mass((pgs[p][i].normalized + pgs[p][i + 1].normalized) / 2)
                for p in range(n_ch) if pgs[p][i] is not None and pgs[p][i + 1] is not None]
        if not vals:
            continue
        key = (start + i, start + i + 1)
        measures[key] = max(vals)
        if measures[key] >= cfg.rho0:
            pairs.append(key)
    for i in sorted(j2):
        vals = [spectral.nyquist_two_bin_mass(pgs[p][i].normalized, pgs[p][i].M)
                for p in range(n_ch) if pgs[p][i] is not None]
        if not vals:
            continue
        measures[start + i] = max(vals)
        if measures[start + i] >= cfg.rho0:
            singles.append(start + i)
    details = {
        "theta": thetas,
        "J1": [(start + i, start + i + 1) for i in sorted(j1)],
        "J2": [start + i for i in sorted(j2)],
    }
    return GroupingResult(tuple(pairs), tuple(singles), measures, cfg.rho0, flagged, details)


def identify_periodic_angle_mssa_right(
    V: Sequence[Any], cfg: AngleIdConfig, widths: Sequence[int] | None = None, start: int = 0
) -> GroupingResult:
    """Angle method with the per-pair measure minimized over channels.

    Channels where either vector is degenerate are left out of the minimum; a
    pair with no usable channel gets ``inf``.
    """
    if len(V) < 2:
        raise ParameterError("angle method needs at least two vectors")
    if cfg.m is not None and 2 * cfg.m > len(V):
        raise ParameterError(f"m={cfg.m} exceeds half the number of vectors ({len(V)})")
    per_item = _channel_items(V, widths)
    n_ch = len(per_item[0])
    vals, per_channel = [], []
    for j in range(len(per_item) - 1):
        chan_vals = []
        for p in range(n_ch):
            a, b = per_item[j][p], per_item[j + 1][p]
            chan_vals.append(np.inf if a is None or b is None else safe_tau_norm(a, b))
        per_channel.append(chan_vals)
        vals.append(min(chan_vals))
    res = select_by_angle(vals, cfg, start)
    res.details["per_channel"] = per_channel
    return res
