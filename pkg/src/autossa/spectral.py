"""Periodograms and frequency-contribution measures.

The 1D periodogram lives on the grid ``k/M, k = 0..floor(M/2)`` and satisfies
Parseval exactly: ``sum(power) == ||Y||^2``.  The 2D periodogram is folded the
same way onto ``k = 0..floor(Mx/2), l = 0..floor(My/2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DataError, DegenerateInputError, ParameterError


def _as_vector(y: ArrayLike) -> NDArray[np.float64]:
    # contiguous so that dot products do not depend on the memory layout
    arr = np.ascontiguousarray(y, dtype=float)
    if arr.ndim != 1:
        raise DataError(f"expected a vector, got shape {arr.shape}")
    if arr.size < 2:
        raise DataError("periodogram needs at least 2 points")
    if not np.all(np.isfinite(arr)):
        raise DataError("vector contains non-finite values")
    return arr


@dataclass(frozen=True)
class Periodogram:
    M: int
    power: NDArray[np.float64]
    norm_sq: float

    @property
    def grid(self) -> NDArray[np.float64]:
        return np.arange(self.power.size) / self.M

    @property
    def degenerate(self) -> bool:
        return self.norm_sq == 0.0

    @property
    def normalized(self) -> NDArray[np.float64]:
        """Power divided by ``||Y||^2``; all zeros for a zero vector."""
        if self.degenerate:
            return np.zeros_like(self.power)
        return self.power / self.norm_sq


def _fold_weights(M: int) -> NDArray[np.float64]:
    # interior frequencies collect both k and M-k
    w = np.full(M // 2 + 1, 2.0)
    w[0] = 1.0
    if M % 2 == 0:
        w[-1] = 1.0
    return w


def periodogram_1d(y: ArrayLike) -> Periodogram:
    """Periodogram via the real FFT.

    With ``F_k = sum_n y_n exp(-2 pi i k n / M)`` the power is ``|F_0|^2/M`` at
    zero, ``2|F_k|^2/M`` for ``0 < k < M/2`` and ``|F_{M/2}|^2/M`` at the Nyquist
    frequency, which is the cosine/sine-coefficient form ``M/2 (C_k^2 + S_k^2)``.
    """
    arr = _as_vector(y)
    m = arr.size
    spec = np.fft.rfft(arr)
    power = _fold_weights(m) * np.abs(spec) ** 2 / m
    power.setflags(write=False)
    return Periodogram(m, power, float(arr @ arr))


def periodogram_1d_direct(y: ArrayLike) -> Periodogram:
    """O(M^2) evaluation from the Fourier cosine/sine coefficients.

    Kept as an independent check of :func:`periodogram_1d`.
    """
    arr = _as_vector(y)
    m = arr.size
    n = np.arange(1, m + 1)
    power = np.empty(m // 2 + 1)
    for k in range(m // 2 + 1):
        c = np.cos(2 * np.pi * n * k / m)
        s = np.sin(2 * np.pi * n * k / m)
        if k == 0 or 2 * k == m:
            ck = arr @ c / m
            power[k] = m / 2 * 2 * ck**2
        else:
            ck = 2 * (arr @ c) / m
            sk = 2 * (arr @ s) / m
            power[k] = m / 2 * (ck**2 + sk**2)
    return Periodogram(m, power, float(arr @ arr))


def _check_band(w1: float, w2: float) -> None:
    if not 0 <= w1 <= 0.5:
        raise ParameterError(f"lower frequency {w1} must lie in [0, 0.5]")
    if w2 < w1:
        raise ParameterError(f"frequency band [{w1}, {w2}) is empty")


def band_share(pg: Periodogram, w1: float, w2: float) -> float:
    """Share of normalized power on grid points with ``w1 <= k/M < w2``."""
    _check_band(w1, w2)
    grid = pg.grid
    mask = (grid >= w1) & (grid < w2)
    return float(pg.normalized[mask].sum())


def freq_contribution(y: ArrayLike, w1: float, w2: float) -> float:
    """Share of the energy of ``y`` in the half-open band ``[w1, w2)``.

    Returns 0 for a zero vector.  ``w2`` may exceed 0.5 to include the Nyquist
    point; ``freq_contribution(y, 0, w)`` is the low-frequency trend measure.
    """
    return band_share(periodogram_1d(y), w1, w2)


def trend_measure(y: ArrayLike, w: float) -> float:
    return freq_contribution(y, 0.0, w)


def argmax_frequency(y: ArrayLike | Periodogram) -> tuple[float, float]:
    """Frequency of the periodogram maximum over ``0 < k <= M/2`` and its normalized value.

    Ties go to the smallest ``k``.
    """
    pg = y if isinstance(y, Periodogram) else periodogram_1d(y)
    if pg.degenerate:
        raise DegenerateInputError("argmax of the periodogram of a zero vector is undefined")
    k = argmax_index(pg)
    return k / pg.M, float(pg.normalized[k])


def argmax_index(pg: Periodogram) -> int:
    """Grid index ``k >= 1`` of the periodogram maximum (first one on ties)."""
    return 1 + int(np.argmax(pg.power[1:]))


def mean_normalized(vectors: Sequence[ArrayLike]) -> NDArray[np.float64]:
    """Average normalized periodogram of equal-length vectors on the common grid."""
    if len(vectors) == 0:
        raise ParameterError("rho needs a nonempty set of vectors")
    pgs = [periodogram_1d(v) for v in vectors]
    if len({pg.M for pg in pgs}) != 1:
        raise ParameterError("rho needs vectors of equal length")
    return np.mean([pg.normalized for pg in pgs], axis=0)


def rho_mean(vectors: Sequence[ArrayLike], k: int) -> float:
    """Mean over the set of the normalized periodogram value at ``k/L``.

    Grid points beyond ``L/2`` carry no mass and give 0.
    """
    avg = mean_normalized(vectors)
    if k < 0:
        raise ParameterError("grid index must be nonnegative")
    return float(avg[k]) if k < avg.size else 0.0


def max_two_bin_mass(avg: NDArray[np.float64]) -> float:
    """``max_{0<k<=M/2} (avg[k] + avg[k+1])``, with the point past the grid counted as 0."""
    padded = np.append(avg, 0.0)
    return float(np.max(padded[1:-1] + padded[2:]))


def nyquist_two_bin_mass(avg: NDArray[np.float64], M: int) -> float:
    """``avg[floor(M/2)] + avg[floor(M/2) + 1]``, the second term 0 when off the grid."""
    k = M // 2
    return float(avg[k] + (avg[k + 1] if k + 1 < avg.size else 0.0))


@dataclass(frozen=True)
class Periodogram2D:
    """Folded 2D periodogram on ``k = 0..floor(Mx/2)``, ``l = 0..floor(My/2)``.

    ``full_power`` keeps ``Mx*My*|G_kl|^2`` on the whole DFT grid.
    """

    Mx: int
    My: int
    full_power: NDArray[np.float64]
    power: NDArray[np.float64]
    norm_sq: float

    @property
    def grid_x(self) -> NDArray[np.float64]:
        return np.arange(self.power.shape[0]) / self.Mx

    @property
    def grid_y(self) -> NDArray[np.float64]:
        return np.arange(self.power.shape[1]) / self.My

    @property
    def degenerate(self) -> bool:
        return self.norm_sq == 0.0

    @property
    def normalized(self) -> NDArray[np.float64]:
        if self.degenerate:
            return np.zeros_like(self.power)
        return self.power / self.norm_sq


def _fold_axis(a: NDArray, axis: int) -> NDArray:
    m = a.shape[axis]
    a = np.moveaxis(a, axis, 0)
    out = a[: m // 2 + 1].copy()
    for k in range(1, (m + 1) // 2):
        out[k] += a[m - k]
    return np.moveaxis(out, 0, axis)


def _as_field(f: ArrayLike) -> NDArray[np.float64]:
    arr = np.asarray(f, dtype=float)
    if arr.ndim != 2:
        raise DataError(f"expected a 2D field, got shape {arr.shape}")
    if min(arr.shape) < 2:
        raise DataError("field must be at least 2 x 2")
    if not np.all(np.isfinite(arr)):
        raise DataError("field contains non-finite values")
    return arr


def periodogram_2d(f: ArrayLike) -> Periodogram2D:
    """2D periodogram ``Mx*My*|G_kl|^2`` with ``G = DFT2(f) / (Mx*My)``, folded over signs."""
    arr = _as_field(f)
    mx, my = arr.shape
    full = np.abs(np.fft.fft2(arr)) ** 2 / (mx * my)
    folded = _fold_axis(_fold_axis(full, 0), 1)
    return Periodogram2D(mx, my, full, folded, float(np.sum(arr * arr)))


def periodogram_2d_direct(f: ArrayLike) -> Periodogram2D:
    """Brute-force O((Mx*My)^2) DFT counterpart of :func:`periodogram_2d`."""
    arr = _as_field(f)
    mx, my = arr.shape
    n = np.arange(mx)[:, None]
    m = np.arange(my)[None, :]
    full = np.empty((mx, my))
    for k in range(mx):
        for l in range(my):
            g = np.sum(arr * np.exp(-2j * np.pi * (n * k / mx + m * l / my))) / (mx * my)
            full[k, l] = mx * my * abs(g) ** 2
    folded = _fold_axis(_fold_axis(full, 0), 1)
    return Periodogram2D(mx, my, full, folded, float(np.sum(arr * arr)))


def rectangle_share(pg: Periodogram2D, w1: float, w2: float) -> float:
    """Normalized mass on ``0 <= k/Mx <= w1``, ``0 <= l/My <= w2`` (closed bounds)."""
    for w in (w1, w2):
        if not 0 <= w <= 0.5:
            raise ParameterError(f"2D frequency bound {w} must lie in [0, 0.5]")
    mx = pg.grid_x <= w1
    my = pg.grid_y <= w2
    return float(pg.normalized[np.ix_(mx, my)].sum())


def freq_contribution_2d(f: ArrayLike, w1: float, w2: float) -> float:
    """Low-frequency share of a field's energy; 0 for a zero field."""
    return rectangle_share(periodogram_2d(f), w1, w2)
