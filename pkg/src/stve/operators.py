"""Structured operators of the random-walk regression system.

The hidden coefficient path is a random walk; each step is observed through an
inner product with a known vector u_t plus noise.  Composing the block
prefix-sum map with the per-step observation map gives the system operator
whose Gram matrix has the closed form

    G[s, t] = min(time_s, time_t) * <u_s, u_t>.

Everything downstream (spectra, estimator functionals) is computed from this
T' x T' Gram matrix; the T' x (T*n) system matrix itself is only ever
materialized on a small debug path.  Row deletion (missing observations,
negligible-norm rows) keeps the original 1-based time labels, so deleting a
row never re-times the walk.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEFAULT_MIN_ROW_NORM",
    "RegressionDataset",
    "NormSummary",
    "apply_summation",
    "apply_block_summation",
    "apply_observation",
    "gram_matrix",
    "system_hs_norm_sq",
    "difference_spectrum",
    "norm_summary",
    "filter_rows",
    "select_rows",
    "dense_system_matrix",
]

DEFAULT_MIN_ROW_NORM = 1e-8

# The dense system matrix is quadratic in the horizon and exists only so that
# small instances can be checked against brute force.
_DENSE_MAX_TIME = 64


@dataclass(frozen=True, eq=False)
class RegressionDataset:
    """Observation vectors and scalar responses on a shared time grid.

    u[k] is the observation vector of row k, y[k] its scalar response and
    observed[k] whether that response is available.  time_index carries the
    1-based original time label of each row; constructing a dataset from a
    subset of rows keeps the surviving labels.  Instances are immutable and
    the arrays are marked read-only.
    """

    u: np.ndarray
    y: np.ndarray
    observed: np.ndarray | None = None
    time_index: np.ndarray | None = None

    def __post_init__(self) -> None:
        u = np.array(self.u, dtype=np.float64)
        if u.ndim != 2:
            raise ValueError("u must be a 2-D array, one observation vector per row")
        rows, dim = u.shape
        if rows < 2:
            raise ValueError("a dataset needs at least 2 rows")
        if dim < 1:
            raise ValueError("observation vectors need at least 1 coordinate")
        if not np.all(np.isfinite(u)):
            raise ValueError("u contains non-finite entries")

        y = np.array(self.y, dtype=np.float64).reshape(-1)
        if y.shape[0] != rows:
            raise ValueError("y length does not match the number of rows")

        if self.observed is None:
            observed = np.ones(rows, dtype=bool)
        else:
            observed = np.array(self.observed, dtype=bool).reshape(-1)
            if observed.shape[0] != rows:
                raise ValueError("observed length does not match the number of rows")
        if int(observed.sum()) < 2:
            raise ValueError("a dataset needs at least 2 observed rows")
        if not np.all(np.isfinite(y[observed])):
            raise ValueError("y must be finite at every observed row")

        if self.time_index is None:
            time_index = np.arange(1, rows + 1, dtype=np.int64)
        else:
            time_index = np.array(self.time_index, dtype=np.int64).reshape(-1)
            if time_index.shape[0] != rows:
                raise ValueError("time_index length does not match the number of rows")
            if time_index[0] < 1 or np.any(np.diff(time_index) <= 0):
                raise ValueError("time_index must be 1-based and strictly increasing")

        for name, arr in (("u", u), ("y", y), ("observed", observed), ("time_index", time_index)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def horizon(self) -> int:
        """Number of rows."""
        return self.u.shape[0]

    @property
    def dim(self) -> int:
        """Coordinates per observation vector."""
        return self.u.shape[1]

    @property
    def effective_horizon(self) -> int:
        """Number of observed rows."""
        return int(self.observed.sum())

    def row_norms(self) -> np.ndarray:
        return np.linalg.norm(self.u, axis=1)


@dataclass(frozen=True)
class NormSummary:
    """Row-norm extremes of the observed rows.

    u_tilde_* are extremes of |sum_j u[t, j]|, the coordinate sums that drive
    the structural lower bound on the spectral gap.
    """

    u_min_norm: float
    u_max_norm: float
    u_tilde_min: float
    u_tilde_max: float


def norm_summary(dataset: RegressionDataset) -> NormSummary:
    """Norm extremes over the observed rows of the dataset."""
    rows = dataset.u[dataset.observed]
    norms = np.linalg.norm(rows, axis=1)
    sums = np.abs(rows.sum(axis=1))
    return NormSummary(
        u_min_norm=float(norms.min()),
        u_max_norm=float(norms.max()),
        u_tilde_min=float(sums.min()),
        u_tilde_max=float(sums.max()),
    )


def apply_summation(values: np.ndarray) -> np.ndarray:
    """Prefix sums of a 1-D sequence: out[t] = values[0] + ... + values[t]."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise ValueError("expected a non-empty 1-D array")
    if not np.all(np.isfinite(arr)):
        raise ValueError("input contains non-finite entries")
    return np.cumsum(arr)


def apply_block_summation(values: np.ndarray, dim: int) -> np.ndarray:
    """Per-coordinate prefix sums of a flat sequence of length-`dim` blocks."""
    arr = np.asarray(values, dtype=np.float64).reshape(-1)
    if dim < 1 or arr.shape[0] % dim != 0:
        raise ValueError("length must be a positive multiple of dim")
    if not np.all(np.isfinite(arr)):
        raise ValueError("input contains non-finite entries")
    return np.cumsum(arr.reshape(-1, dim), axis=0).reshape(-1)


def apply_observation(dataset: RegressionDataset, x: np.ndarray) -> np.ndarray:
    """Blockwise inner products <u_t, x block t> over the observed rows.

    x holds one length-`dim` block per observed row.
    """
    rows = dataset.u[dataset.observed]
    count, dim = rows.shape
    arr = np.asarray(x, dtype=np.float64).reshape(-1)
    if arr.shape[0] != count * dim:
        raise ValueError(f"x must have length {count * dim} (rows x dim), got {arr.shape[0]}")
    return np.einsum("ti,ti->t", rows, arr.reshape(count, dim))


def _require_filtered(dataset: RegressionDataset) -> None:
    if not bool(dataset.observed.all()):
        raise ValueError("dataset has unobserved rows; apply filter_rows first")
    if np.any(dataset.row_norms() == 0.0):
        raise ValueError("dataset has zero-norm rows; apply filter_rows first")


def gram_matrix(dataset: RegressionDataset) -> np.ndarray:
    """Gram matrix of the system operator, from its closed form.

    Entry (s, t) is min(time_s, time_t) * <u_s, u_t>, where the times are the
    original 1-based labels of the rows.  The dataset must already be
    row-filtered (no unobserved rows, no zero-norm rows).
    """
    _require_filtered(dataset)
    times = dataset.time_index.astype(np.float64)
    return np.minimum.outer(times, times) * (dataset.u @ dataset.u.T)


def system_hs_norm_sq(dataset: RegressionDataset) -> float:
    """Squared Hilbert-Schmidt norm of the system operator: sum_t time_t * ||u_t||^2."""
    _require_filtered(dataset)
    times = dataset.time_index.astype(np.float64)
    return float(np.sum(times * np.sum(dataset.u * dataset.u, axis=1)))


def difference_spectrum(horizon: int) -> np.ndarray:
    """Singular values of the (T-1) x T first-difference map, descending.

    Closed form: 2 sin(pi (T - l) / (2 T)) for l = 1, ..., T-1.
    """
    if horizon < 2:
        raise ValueError("horizon must be at least 2")
    l = np.arange(1, horizon, dtype=np.float64)
    return 2.0 * np.sin(np.pi * (horizon - l) / (2.0 * horizon))


def select_rows(dataset: RegressionDataset, rows: np.ndarray) -> RegressionDataset:
    """Dataset restricted to the given row positions, original time labels kept."""
    idx = np.asarray(rows)
    return RegressionDataset(
        u=dataset.u[idx],
        y=dataset.y[idx],
        observed=dataset.observed[idx],
        time_index=dataset.time_index[idx],
    )


def filter_rows(
    dataset: RegressionDataset, min_norm: float = DEFAULT_MIN_ROW_NORM
) -> tuple[RegressionDataset, np.ndarray]:
    """Drop unobserved rows and rows with ||u_t|| <= min_norm.

    Returns the filtered dataset (original time labels kept) and the original
    time labels of the dropped rows.  Raises if fewer than 2 rows survive.
    """
    if not (min_norm >= 0.0 and np.isfinite(min_norm)):
        raise ValueError("min_norm must be finite and non-negative")
    keep = dataset.observed & (dataset.row_norms() > min_norm)
    if int(keep.sum()) < 2:
        raise ValueError("fewer than 2 rows remain after row filtering")
    dropped = dataset.time_index[~keep].copy()
    return select_rows(dataset, np.flatnonzero(keep)), dropped


def dense_system_matrix(dataset: RegressionDataset) -> np.ndarray:
    """Materialized system matrix, debug path only (time horizon <= 64).

    Row a (an observed row with original time r) holds u_a in every coordinate
    block i <= r: entry (a, (i-1)*dim + j) = u[a, j] for i <= r, else 0.
    Multiplying the flat process-noise vector by this matrix reproduces the
    observation means; its Gram equals gram_matrix(dataset).
    """
    _require_filtered(dataset)
    max_time = int(dataset.time_index[-1])
    if max_time > _DENSE_MAX_TIME:
        raise ValueError(
            f"dense materialization is a debug path, limited to time horizon {_DENSE_MAX_TIME}"
        )
    steps = np.arange(1, max_time + 1)
    active = steps[None, :] <= dataset.time_index[:, None]  # (rows, max_time)
    blocks = active[:, :, None] * dataset.u[:, None, :]  # (rows, max_time, dim)
    return blocks.reshape(dataset.horizon, max_time * dataset.dim)
