"""Embedding, SVD and diagonal-averaging reconstruction for 1D, multichannel and 2D SSA.

Component indices are 0-based throughout the Python API.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from numpy.typing import ArrayLike, NDArray
from scipy.signal import convolve2d

from .errors import DataError, ParameterError

HANKEL = "hankel"
STACKED = "stacked-hankel"
HBH = "hbh"

DEFAULT_RANK_TOL = 1e-9
DEGENERATE_PART_NORM = 1e-12


def _frozen(a: NDArray) -> NDArray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


def _as_series(x: ArrayLike, name: str = "series") -> NDArray[np.float64]:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise DataError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < 2:
        raise DataError(f"{name} must have at least 2 values")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite values")
    return arr


@dataclass(frozen=True)
class TrajectoryMatrix:
    """Trajectory matrix together with the metadata needed to invert the embedding.

    ``window`` is ``L`` for the 1D and stacked kinds and ``(Lx, Ly)`` for 2D.
    ``source_shape`` is ``(N,)``, the tuple of channel lengths, or ``(Nx, Ny)``.
    """

    matrix: NDArray[np.float64]
    kind: str
    window: int | tuple[int, int]
    source_shape: tuple[int, ...]

    @property
    def channel_widths(self) -> tuple[int, ...]:
        """Column counts K_p of the per-channel blocks (a single block for 1D)."""
        if self.kind == HANKEL:
            return (self.matrix.shape[1],)
        if self.kind == STACKED:
            return tuple(n - self.window + 1 for n in self.source_shape)
        raise ParameterError("channel widths are defined only for 1D and MSSA embeddings")

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def embed_1d(series: ArrayLike, L: int) -> TrajectoryMatrix:
    """Hankel trajectory matrix of shape ``(L, N - L + 1)``; entry (i, j) is x[i + j]."""
    x = _as_series(series)
    n = x.size
    if not 2 <= L <= n - 1:
        raise ParameterError(f"window length L={L} must satisfy 2 <= L <= N-1 = {n - 1}")
    mat = sliding_window_view(x, L).T
    return TrajectoryMatrix(_frozen(mat), HANKEL, int(L), (n,))


def embed_mssa(channels: Sequence[ArrayLike], L: int) -> TrajectoryMatrix:
    """Horizontally stacked Hankel matrices ``[H(X1) : ... : H(Xs)]``.

    Channels may have different lengths; each must be longer than ``L``.
    """
    if len(channels) < 1:
        raise ParameterError("at least one channel is required")
    xs = [_as_series(c, f"channel {p}") for p, c in enumerate(channels)]
    shortest = min(x.size for x in xs)
    if not 2 <= L <= shortest - 1:
        raise ParameterError(
            f"window length L={L} must satisfy 2 <= L <= min N_p - 1 = {shortest - 1}"
        )
    mat = np.hstack([sliding_window_view(x, L).T for x in xs])
    return TrajectoryMatrix(_frozen(mat), STACKED, int(L), tuple(x.size for x in xs))


def embed_2d(field_: ArrayLike, Lx: int, Ly: int) -> TrajectoryMatrix:
    """Hankel-block-Hankel matrix of all ``Lx x Ly`` windows of a field.

    Row ``lx + Lx*ly`` and column ``kx + Kx*ky`` hold ``F[lx + kx, ly + ky]``,
    i.e. both the window contents and the window positions are vectorized in
    column-major order.  :func:`devectorize` inverts this for singular vectors.
    """
    f = np.asarray(field_, dtype=float)
    if f.ndim != 2:
        raise DataError(f"field must be two-dimensional, got shape {f.shape}")
    nx, ny = f.shape
    if nx < 2 or ny < 2:
        raise DataError("field must be at least 2 x 2")
    if not np.all(np.isfinite(f)):
        raise DataError("field contains non-finite values")
    if not (2 <= Lx <= nx - 1 and 2 <= Ly <= ny - 1):
        raise ParameterError(
            f"2D window ({Lx}, {Ly}) must satisfy 2 <= Lx <= {nx - 1}, 2 <= Ly <= {ny - 1}"
        )
    kx, ky = nx - Lx + 1, ny - Ly + 1
    # windows[kx, ky, lx, ly] = f[kx + lx, ky + ly]
    windows = sliding_window_view(f, (Lx, Ly))
    mat = windows.transpose(3, 2, 1, 0).reshape(Lx * Ly, kx * ky, order="C")
    # after the transpose, axes are (ly, lx, ky, kx); C-order flattening of (ly, lx)
    # gives row index lx + Lx*ly, and of (ky, kx) gives column index kx + Kx*ky
    return TrajectoryMatrix(_frozen(mat), HBH, (int(Lx), int(Ly)), (nx, ny))


def devectorize(vec: ArrayLike, shape: tuple[int, int]) -> NDArray[np.float64]:
    """Reshape a left (``Lx x Ly``) or right (``Kx x Ky``) 2D singular vector."""
    return np.reshape(np.asarray(vec, dtype=float), shape, order="F")


@dataclass(frozen=True)
class Eigentriple:
    sigma: float
    U: NDArray[np.float64]
    V: NDArray[np.float64]

    @property
    def eigenvalue(self) -> float:
        return self.sigma**2


@dataclass(frozen=True)
class Decomposition:
    """Ordered SVD of a trajectory matrix.

    ``U[:, i]``, ``sigma[i]``, ``V[:, i]`` form the i-th eigentriple; ``d`` counts
    singular values above ``rank_tol * sigma[0]``.
    """

    sigma: NDArray[np.float64]
    U: NDArray[np.float64]
    V: NDArray[np.float64]
    d: int
    trajectory: TrajectoryMatrix = field(repr=False)

    @property
    def n_triples(self) -> int:
        return self.sigma.size

    @property
    def eigenvalues(self) -> NDArray[np.float64]:
        return self.sigma**2

    @property
    def kind(self) -> str:
        return self.trajectory.kind

    def eigentriple(self, i: int) -> Eigentriple:
        _check_indices([i], self.n_triples)
        return Eigentriple(float(self.sigma[i]), self.U[:, i], self.V[:, i])

    @property
    def eigentriples(self) -> list[Eigentriple]:
        return [self.eigentriple(i) for i in range(self.n_triples)]

    def left_vectors(self, indices: Iterable[int] | None = None) -> list[NDArray[np.float64]]:
        idx = range(self.n_triples) if indices is None else list(indices)
        _check_indices(idx, self.n_triples)
        return [self.U[:, i] for i in idx]

    def right_vectors(self, indices: Iterable[int] | None = None) -> list[NDArray[np.float64]]:
        idx = range(self.n_triples) if indices is None else list(indices)
        _check_indices(idx, self.n_triples)
        return [self.V[:, i] for i in idx]

    def factor_parts(self, i: int) -> FactorVectorParts:
        """Per-channel split of the i-th right singular vector (MSSA and 1D)."""
        _check_indices([i], self.n_triples)
        return split_factor_vector(self.V[:, i], self.trajectory.channel_widths)

    def lowrank_matrix(self, indices: Iterable[int] | None = None) -> NDArray[np.float64]:
        idx = list(range(self.n_triples)) if indices is None else list(indices)
        _check_indices(idx, self.n_triples)
        return (self.U[:, idx] * self.sigma[idx]) @ self.V[:, idx].T


def decompose(
    tm: TrajectoryMatrix, rank_tol: float = DEFAULT_RANK_TOL, max_rank: int | None = None
) -> Decomposition:
    """Thin SVD with nonincreasing singular values and a deterministic sign.

    Each pair ``(U_i, V_i)`` is flipped so that the entry of ``U_i`` with the
    largest absolute value is positive.
    """
    mat = np.asarray(tm.matrix, dtype=float)
    if not np.all(np.isfinite(mat)):
        raise DataError("trajectory matrix contains non-finite entries")
    u, s, vt = np.linalg.svd(mat, full_matrices=False)
    if max_rank is not None:
        if max_rank < 1:
            raise ParameterError("max_rank must be positive")
        u, s, vt = u[:, :max_rank], s[:max_rank], vt[:max_rank]
    v = vt.T.copy()
    pivots = np.argmax(np.abs(u), axis=0)
    signs = np.where(u[pivots, np.arange(u.shape[1])] < 0, -1.0, 1.0)
    u = u * signs
    v = v * signs
    d = 0 if s.size == 0 or s[0] == 0 else int(np.count_nonzero(s > rank_tol * s[0]))
    return Decomposition(_frozen(s), _frozen(u), _frozen(v), d, tm)


def _check_indices(indices: Iterable[int], n: int) -> list[int]:
    idx = [int(i) for i in indices]
    for i in idx:
        if not 0 <= i < n:
            raise ParameterError(f"component index {i} out of range 0..{n - 1}")
    if len(set(idx)) != len(idx):
        raise ParameterError("component indices must be distinct")
    return idx


def _hankelize_rank_one(u: NDArray, v: NDArray) -> NDArray:
    """Diagonal averaging of the outer product ``u v^T``."""
    counts = np.convolve(np.ones(u.size), np.ones(v.size))
    return np.convolve(u, v) / counts


def reconstruct(dec: Decomposition, group: Iterable[int]):
    """Diagonal-averaged sum of the selected elementary matrices.

    Returns an array of length N (1D), a list of per-channel arrays (MSSA) or an
    ``Nx x Ny`` array (2D).  An empty group yields zeros of the source shape.
    """
    idx = _check_indices(group, dec.n_triples)
    tm = dec.trajectory
    if tm.kind == HANKEL:
        out = np.zeros(tm.source_shape[0])
        for i in idx:
            out += dec.sigma[i] * _hankelize_rank_one(dec.U[:, i], dec.V[:, i])
        return out
    if tm.kind == STACKED:
        widths = tm.channel_widths
        bounds = np.cumsum((0,) + widths)
        outs = [np.zeros(n) for n in tm.source_shape]
        for i in idx:
            for p in range(len(widths)):
                part = dec.V[bounds[p] : bounds[p + 1], i]
                outs[p] += dec.sigma[i] * _hankelize_rank_one(dec.U[:, i], part)
        return outs
    if tm.kind == HBH:
        lx, ly = tm.window
        nx, ny = tm.source_shape
        kx, ky = nx - lx + 1, ny - ly + 1
        counts = convolve2d(np.ones((lx, ly)), np.ones((kx, ky)))
        out = np.zeros((nx, ny))
        for i in idx:
            a = devectorize(dec.U[:, i], (lx, ly))
            b = devectorize(dec.V[:, i], (kx, ky))
            out += dec.sigma[i] * convolve2d(a, b)
        return out / counts
    raise ParameterError(f"unknown trajectory kind {tm.kind!r}")


def elementary_component(dec: Decomposition, i: int):
    return reconstruct(dec, [i])


@dataclass(frozen=True)
class FactorVectorParts:
    """Channel-wise parts of an MSSA right singular vector."""

    parts: tuple[NDArray[np.float64], ...]
    norms: tuple[float, ...]
    normalized: tuple[NDArray[np.float64] | None, ...]
    degenerate: tuple[bool, ...]

    def __len__(self) -> int:
        return len(self.parts)


def split_factor_vector(V: ArrayLike, widths: Sequence[int]) -> FactorVectorParts:
    """Split ``V`` into consecutive parts of lengths ``widths``.

    Parts with norm below 1e-12 are flagged degenerate and have no normalized copy.
    """
    v = np.asarray(V, dtype=float)
    widths = [int(w) for w in widths]
    if any(w < 1 for w in widths) or sum(widths) != v.size:
        raise ParameterError(f"part lengths {widths} do not sum to vector length {v.size}")
    bounds = np.cumsum([0] + widths)
    parts, norms, normed, degen = [], [], [], []
    for p in range(len(widths)):
        part = v[bounds[p] : bounds[p + 1]].copy()
        nrm = float(np.linalg.norm(part))
        parts.append(part)
        norms.append(nrm)
        bad = nrm < DEGENERATE_PART_NORM
        degen.append(bad)
        normed.append(None if bad else part / nrm)
    return FactorVectorParts(tuple(parts), tuple(norms), tuple(normed), tuple(degen))


def ssa_1d(series: ArrayLike, L: int, **kwargs) -> Decomposition:
    """Shortcut for ``decompose(embed_1d(series, L))``."""
    return decompose(embed_1d(series, L), **kwargs)


def mssa(channels: Sequence[ArrayLike], L: int, **kwargs) -> Decomposition:
    return decompose(embed_mssa(channels, L), **kwargs)


def ssa_2d(field_: ArrayLike, Lx: int, Ly: int, **kwargs) -> Decomposition:
    return decompose(embed_2d(field_, Lx, Ly), **kwargs)
