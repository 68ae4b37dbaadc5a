"""Automatic identification of trend and oscillatory eigentriples in 1D SSA.

Three methods are provided:

* :func:`identify_trend` -- low-frequency share of each candidate's periodogram;
* :func:`identify_periodic_freq` -- periodogram argmax matching of consecutive
  singular vectors followed by a two-bin mass check;
* :func:`identify_periodic_angle` -- regularity of the angles swept by the 2D
  scatter of consecutive singular vectors.

All indices are 0-based positions in the candidate list, shifted by ``start``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from . import spectral
from .errors import DegenerateInputError, ParameterError

POINT_EPS = 1e-12


@dataclass(frozen=True)
class GroupingResult:
    """Identified pairs and singletons plus the measures that led to them."""

    pairs: tuple[tuple[int, int], ...] = ()
    singles: tuple[int, ...] = ()
    measures: dict[Any, float] = field(default_factory=dict)
    threshold: float | None = None
    flagged: tuple[int, ...] = ()
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def indices(self) -> list[int]:
        """Sorted union of all identified component indices."""
        out = set(self.singles)
        for i, j in self.pairs:
            out.update((i, j))
        return sorted(out)

    def __contains__(self, item) -> bool:
        if isinstance(item, tuple):
            return item in self.pairs
        return item in self.indices


@dataclass(frozen=True)
class TrendIdConfig:
    omega1: float = 0.0
    omega2: float = 0.1
    threshold: float = 0.5

    def __post_init__(self):
        if not 0 <= self.omega1 <= self.omega2:
            raise ParameterError("trend band needs 0 <= omega1 <= omega2")
        if not 0 <= self.omega1 <= 0.5:
            raise ParameterError("omega1 must lie in [0, 0.5]")
        if not 0 <= self.threshold <= 1:
            raise ParameterError("trend threshold must lie in [0, 1]")


@dataclass(frozen=True)
class FreqIdConfig:
    s0: int = 1
    rho0: float = 0.9

    def __post_init__(self):
        if self.s0 < 0 or int(self.s0) != self.s0:
            raise ParameterError("s0 must be a nonnegative integer")
        if not 0 <= self.rho0 <= 1:
            raise ParameterError("rho0 must lie in [0, 1]")


@dataclass(frozen=True)
class AngleIdConfig:
    """Exactly one of ``m`` (number of harmonics) or ``t0`` (threshold) is set."""

    m: int | None = None
    t0: float | None = None

    def __post_init__(self):
        if (self.m is None) == (self.t0 is None):
            raise ParameterError("give either the harmonic count m or the threshold t0")
        if self.m is not None and self.m < 0:
            raise ParameterError("m must be nonnegative")
        if self.t0 is not None and self.t0 < 0:
            raise ParameterError("t0 must be nonnegative")


# -- low-frequency trend method ------------------------------------------------


def trend_result(measures: dict[int, float], flagged: Sequence[int], threshold: float) -> GroupingResult:
    chosen = tuple(i for i, t in measures.items() if i not in flagged and t >= threshold)
    return GroupingResult(singles=chosen, measures=dict(measures), threshold=threshold,
                          flagged=tuple(flagged))


def identify_trend(
    candidates: Sequence[ArrayLike],
    cfg: TrendIdConfig,
    indices: Sequence[int] | None = None,
) -> GroupingResult:
    """Select candidates whose band share ``T(Y; omega1, omega2)`` reaches the threshold.

    ``candidates`` may be left or right singular vectors or elementary
    reconstructed series; ``indices`` labels them (default ``0..len-1``).
    Zero candidates are flagged and never selected.
    """
    idx = list(range(len(candidates))) if indices is None else list(indices)
    if len(idx) != len(candidates):
        raise ParameterError("indices and candidates differ in length")
    measures, flagged = {}, []
    for i, y in zip(idx, candidates):
        pg = spectral.periodogram_1d(y)
        if pg.degenerate:
            flagged.append(i)
            measures[i] = 0.0
            continue
        measures[i] = spectral.band_share(pg, cfg.omega1, cfg.omega2)
    return trend_result(measures, flagged, cfg.threshold)


# -- periodogram frequency method -------------------------------------------------


def _pair_candidates(theta_k: Sequence[int | None], s0: int) -> list[int]:
    """Left indices i of consecutive pairs whose argmax grid indices differ by <= s0."""
    out = []
    for i in range(len(theta_k) - 1):
        a, b = theta_k[i], theta_k[i + 1]
        if a is None or b is None:
            continue
        if a > 0 and b > 0 and abs(a - b) <= s0:
            out.append(i)
    return out


def _near_nyquist(k: int | None, M: int, s0: int) -> bool:
    # M |k/M - 0.5| <= s0, kept in integers
    return k is not None and abs(2 * k - M) <= 2 * s0


def identify_periodic_freq(
    U: Sequence[ArrayLike], cfg: FreqIdConfig = FreqIdConfig(), start: int = 0
) -> GroupingResult:
    """Frequency method for e-m harmonics on left singular vectors.

    Step one keeps consecutive pairs whose periodogram maxima are within
    ``s0`` grid steps of each other, and single vectors whose maximum lies
    within ``s0`` steps of 0.5.  Step two keeps the pairs with
    ``rho_ij >= rho0`` (maximum over k of the averaged two-bin mass) and the
    singles with ``rho_i >= rho0`` (mass at the two bins next to 0.5).
    """
    if len(U) < 1:
        raise ParameterError("need at least one singular vector")
    pgs = [spectral.periodogram_1d(u) for u in U]
    L = pgs[0].M
    if any(pg.M != L for pg in pgs):
        raise ParameterError("singular vectors must share a length")
    theta_k = [None if pg.degenerate else spectral.argmax_index(pg) for pg in pgs]
    flagged = tuple(start + i for i, k in enumerate(theta_k) if k is None)
    j1 = _pair_candidates(theta_k, cfg.s0)
    j2 = [i for i, k in enumerate(theta_k) if _near_nyquist(k, L, cfg.s0)]

    measures: dict[Any, float] = {}
    pairs, singles = [], []
    for i in j1:
        avg = (pgs[i].normalized + pgs[i + 1].normalized) / 2
        rho = spectral.max_two_bin_mass(avg)
        key = (start + i, start + i + 1)
        measures[key] = rho
        if rho >= cfg.rho0:
            pairs.append(key)
    for i in j2:
        rho = spectral.nyquist_two_bin_mass(pgs[i].normalized, L)
        measures[start + i] = rho
        if rho >= cfg.rho0:
            singles.append(start + i)
    details = {
        "theta": [None if k is None else k / L for k in theta_k],
        "J1": [(start + i, start + i + 1) for i in j1],
        "J2": [start + i for i in j2],
    }
    return GroupingResult(tuple(pairs), tuple(singles), measures, cfg.rho0, flagged, details)


# -- angle-regularity method -------------------------------------------------------


@dataclass(frozen=True)
class AngleSequence:
    theta: NDArray[np.float64]

    @property
    def mean(self) -> float:
        return float(self.theta.mean())

    @property
    def variance(self) -> float:
        """Sample variance with the ``1/(L-1)`` factor, L-1 being the number of angles."""
        th = self.theta
        return float(np.sum((th - th.mean()) ** 2) / th.size)


def angle_sequence(P: ArrayLike, Q: ArrayLike) -> AngleSequence:
    """Angles in ``[0, pi]`` between consecutive points ``(p_k, q_k)``."""
    p = np.ascontiguousarray(P, dtype=float)
    q = np.ascontiguousarray(Q, dtype=float)
    if p.shape != q.shape or p.ndim != 1:
        raise ParameterError("P and Q must be vectors of equal length")
    if p.size < 3:
        raise ParameterError("angle measure needs vectors of length >= 3")
    radius = np.hypot(p, q)
    top = radius.max()
    if top == 0 or np.any(radius < POINT_EPS * top):
        raise DegenerateInputError("a point of the (P, Q) scatter lies at the origin")
    cross = p[:-1] * q[1:] - q[:-1] * p[1:]
    dot = p[:-1] * p[1:] + q[:-1] * q[1:]
    return AngleSequence(np.abs(np.arctan2(cross, dot)))


def tau(P: ArrayLike, Q: ArrayLike) -> float:
    """Sample variance of the angles between consecutive points of the (P, Q) scatter."""
    return angle_sequence(P, Q).variance


def normalize_tau(seq: AngleSequence) -> float:
    var = seq.variance
    scale = min(1.0, seq.mean**2)
    if scale == 0.0:
        # all angles zero, hence var == 0 too
        return 0.0
    return var / scale


def tau_norm(P: ArrayLike, Q: ArrayLike) -> float:
    """``tau / min(1, mean_angle^2)``; penalizes pairs that barely rotate."""
    return normalize_tau(angle_sequence(P, Q))


def safe_tau_norm(P: ArrayLike, Q: ArrayLike) -> float:
    """:func:`tau_norm`, or ``inf`` when the scatter passes through the origin."""
    try:
        return tau_norm(P, Q)
    except DegenerateInputError:
        return np.inf


def select_by_angle(
    pair_values: Sequence[float], cfg: AngleIdConfig, start: int = 0
) -> GroupingResult:
    """Elimination, sorting and stopping applied to precomputed per-pair measures.

    ``pair_values[j]`` is the measure of the pair ``(j, j+1)``.  Walking
    ``j = 1..r-2``, the larger of the values of pairs ``j-1`` and ``j`` is dropped
    (ties drop pair ``j``).  Survivors are sorted ascending and taken while the
    count is below ``m`` or the value is below ``t0``.
    """
    vals = np.asarray(pair_values, dtype=float)
    keep = np.ones(vals.size, dtype=bool)
    for j in range(1, vals.size):
        if vals[j] < vals[j - 1]:
            keep[j - 1] = False
        else:
            keep[j] = False
    survivors = sorted((float(vals[j]), int(j)) for j in np.flatnonzero(keep))
    chosen = []
    for rank, (v, j) in enumerate(survivors):
        if cfg.m is not None:
            if rank >= cfg.m:
                break
        elif not v < cfg.t0:
            break
        if not np.isfinite(v):
            break
        chosen.append(j)
    pairs = tuple((start + j, start + j + 1) for j in chosen)
    measures = {(start + j, start + j + 1): float(v) for j, v in enumerate(vals)}
    flagged = tuple(start + j for j in range(vals.size) if not np.isfinite(vals[j]))
    details = {
        "ordered": [((start + j, start + j + 1), float(v)) for v, j in survivors],
    }
    threshold = cfg.t0 if cfg.t0 is not None else None
    return GroupingResult(pairs, (), measures, threshold, flagged, details)


def identify_periodic_angle(
    U: Sequence[ArrayLike], cfg: AngleIdConfig, start: int = 0
) -> GroupingResult:
    """Angle-regularity method on ``r`` consecutive singular vectors.

    ``start`` is the index of ``U[0]`` in the full decomposition.  Pairs whose
    scatter hits the origin get an infinite measure and are never selected.
    """
    if len(U) < 2:
        raise ParameterError("angle method needs at least two vectors")
    if cfg.m is not None and 2 * cfg.m > len(U):
        raise ParameterError(f"m={cfg.m} exceeds half the number of vectors ({len(U)})")
    vals = [safe_tau_norm(U[j], U[j + 1]) for j in range(len(U) - 1)]
    return select_by_angle(vals, cfg, start)
