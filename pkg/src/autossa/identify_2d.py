"""Low-frequency identification of trend/pattern components in 2D-SSA."""

from __future__ import annotations

from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike

from . import spectral
from .core import HBH, Decomposition, devectorize, elementary_component
from .errors import ParameterError
from .identify import GroupingResult, trend_result


def candidate_fields(dec: Decomposition, source: str = "eigen", indices: Sequence[int] | None = None):
    """Fields to feed :func:`identify_trend_2d`.

    ``source`` is ``"eigen"`` (left vectors as ``Lx x Ly``), ``"factor"`` (right
    vectors as ``Kx x Ky``) or ``"recon"`` (elementary reconstructed fields).
    """
    if dec.kind != HBH:
        raise ParameterError("2D candidates need a 2D decomposition")
    lx, ly = dec.trajectory.window
    nx, ny = dec.trajectory.source_shape
    idx = list(range(dec.n_triples)) if indices is None else list(indices)
    if source == "eigen":
        return [devectorize(dec.U[:, i], (lx, ly)) for i in idx]
    if source == "factor":
        return [devectorize(dec.V[:, i], (nx - lx + 1, ny - ly + 1)) for i in idx]
    if source == "recon":
        return [elementary_component(dec, i) for i in idx]
    raise ParameterError(f"unknown candidate source {source!r}")


def identify_trend_2d(
    fields: Sequence[ArrayLike],
    omega1: float,
    omega2: float,
    threshold: float,
    indices: Sequence[int] | None = None,
) -> GroupingResult:
    """Select fields whose low-frequency rectangle share reaches ``threshold``.

    The share sums the normalized 2D periodogram over
    ``0 <= k/Mx <= omega1, 0 <= l/My <= omega2``.  Zero fields are flagged.
    """
    if not 0 <= threshold <= 1:
        raise ParameterError("threshold must lie in [0, 1]")
    idx = list(range(len(fields))) if indices is None else list(indices)
    if len(idx) != len(fields):
        raise ParameterError("indices and fields differ in length")
    measures, flagged = {}, []
    for i, f in zip(idx, fields):
        pg = spectral.periodogram_2d(np.asarray(f, dtype=float))
        measures[i] = spectral.rectangle_share(pg, omega1, omega2)
        if pg.degenerate:
            flagged.append(i)
    return trend_result(measures, flagged, threshold)
