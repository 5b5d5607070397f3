"""Sub-Gaussian simulator for the random-walk regression model.

Data generation is bitwise reproducible from the config seed: the generator
is numpy's default PRNG seeded through a SeedSequence, and draws happen in a
fixed order (observation vectors if random, then process noise, then
observation noise).  Replications derive independent child streams by
spawning the base SeedSequence, so results do not depend on execution order
or parallelism.

Estimators only ever receive the dataset; the hidden coefficient path is
returned separately and never crosses that interface.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dataio import quadratic_features
from .operators import RegressionDataset

__all__ = [
    "NOISE_FAMILIES",
    "NoiseSpec",
    "SimulationConfig",
    "ReplicationResult",
    "simulate",
    "replicate",
]

NOISE_FAMILIES = ("gaussian", "rademacher", "uniform")

U_KINDS = ("gaussian", "constant", "quadratic", "array")

# Point estimator protocol: dataset -> (sigma2_hat, eta2_hat).
Estimator = Callable[[RegressionDataset], tuple[float, float]]


@dataclass(frozen=True)
class NoiseSpec:
    """A zero-mean sub-Gaussian family at a given variance.

    Families: "gaussian"; "rademacher" (+-sqrt(variance) with equal mass);
    "uniform" (uniform on [-sqrt(3 variance), +sqrt(3 variance)]).  kappa is
    the sub-Gaussian tail scale of the family at this variance, reported as
    metadata and never used numerically.
    """

    family: str = "gaussian"
    variance: float = 1.0

    def __post_init__(self) -> None:
        if self.family not in NOISE_FAMILIES:
            raise ValueError(f"unknown noise family {self.family!r}")
        if not (np.isfinite(self.variance) and self.variance >= 0.0):
            raise ValueError("variance must be finite and non-negative")

    @property
    def kappa(self) -> float:
        """Sub-Gaussian tail scale: P(|X| > t) <= 2 exp(-t^2 / kappa^2)."""
        v = self.variance
        if self.family == "gaussian":
            return math.sqrt(2.0 * v)
        if self.family == "rademacher":
            return math.sqrt(v / math.log(2.0))
        return math.sqrt(3.0 * v / math.log(2.0))

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        if self.variance == 0.0:
            return np.zeros(size)
        root = math.sqrt(self.variance)
        if self.family == "gaussian":
            return rng.normal(0.0, root, size)
        if self.family == "rademacher":
            return (rng.integers(0, 2, size) * 2 - 1) * root
        bound = math.sqrt(3.0 * self.variance)
        return rng.uniform(-bound, bound, size)


@dataclass(frozen=True, eq=False)
class SimulationConfig:
    """Config for one simulated trajectory.

    u_kind selects the observation-vector process: "gaussian" (iid standard
    normal rows), "constant" (u_constant repeated), "quadratic" (rows
    (1, v, v^2) from the scalar series u_series, requires n = 3), or "array"
    (u_matrix passed through).  missing lists 1-based time indices whose
    responses are masked.
    """

    T: int
    n: int
    sigma2: float
    eta2: float
    noise_family: str = "gaussian"
    u_kind: str = "gaussian"
    u_constant: np.ndarray | None = None
    u_series: np.ndarray | None = None
    u_matrix: np.ndarray | None = None
    seed: int = 0
    missing: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.T < 2:
            raise ValueError("T must be at least 2")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        for name in ("sigma2", "eta2"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0.0):
                raise ValueError(f"{name} must be finite and non-negative")
        if self.noise_family not in NOISE_FAMILIES:
            raise ValueError(f"unknown noise family {self.noise_family!r}")
        if self.u_kind not in U_KINDS:
            raise ValueError(f"unknown u_kind {self.u_kind!r}")
        if self.u_kind == "constant":
            vec = np.array(self.u_constant, dtype=np.float64).reshape(-1)
            if vec.shape[0] != self.n or not np.all(np.isfinite(vec)):
                raise ValueError("u_constant must be a finite vector of length n")
            vec.setflags(write=False)
            object.__setattr__(self, "u_constant", vec)
        if self.u_kind == "quadratic":
            if self.n != 3:
                raise ValueError("quadratic features require n = 3")
            series = np.array(self.u_series, dtype=np.float64).reshape(-1)
            if series.shape[0] != self.T or not np.all(np.isfinite(series)):
                raise ValueError("u_series must be a finite series of length T")
            series.setflags(write=False)
            object.__setattr__(self, "u_series", series)
        if self.u_kind == "array":
            mat = np.array(self.u_matrix, dtype=np.float64)
            if mat.shape != (self.T, self.n) or not np.all(np.isfinite(mat)):
                raise ValueError("u_matrix must be a finite array of shape (T, n)")
            mat.setflags(write=False)
            object.__setattr__(self, "u_matrix", mat)
        missing = tuple(sorted(int(t) for t in self.missing))
        if missing and (missing[0] < 1 or missing[-1] > self.T):
            raise ValueError("missing indices must lie in [1, T]")
        if len(set(missing)) != len(missing):
            raise ValueError("missing indices must be distinct")
        object.__setattr__(self, "missing", missing)


def _draw_u(config: SimulationConfig, rng: np.random.Generator) -> np.ndarray:
    if config.u_kind == "gaussian":
        return rng.standard_normal((config.T, config.n))
    if config.u_kind == "constant":
        return np.tile(config.u_constant, (config.T, 1))
    if config.u_kind == "quadratic":
        return quadratic_features(config.u_series)
    return np.array(config.u_matrix)


def simulate(
    config: SimulationConfig, seed_sequence: np.random.SeedSequence | None = None
) -> tuple[RegressionDataset, np.ndarray]:
    """Simulate one trajectory; returns (dataset, hidden coefficient path).

    The walk starts from zero: the first coefficient vector is the first
    process-noise draw, so the path is exactly the per-coordinate prefix sum
    of the process noise and the observations are the system operator applied
    to that noise plus observation noise.
    """
    if seed_sequence is None:
        seed_sequence = np.random.SeedSequence(config.seed)
    rng = np.random.default_rng(seed_sequence)
    u = _draw_u(config, rng)
    steps = NoiseSpec(config.noise_family, config.sigma2).sample(rng, (config.T, config.n))
    states = np.cumsum(steps, axis=0)
    noise = NoiseSpec(config.noise_family, config.eta2).sample(rng, config.T)
    y = np.einsum("ti,ti->t", u, states) + noise
    observed = np.ones(config.T, dtype=bool)
    if config.missing:
        observed[np.array(config.missing) - 1] = False
    dataset = RegressionDataset(u=u, y=y, observed=observed)
    states.setflags(write=False)
    return dataset, states


@dataclass(frozen=True, eq=False)
class ReplicationResult:
    """Per-replication absolute estimation errors and their summary stats."""

    sigma2_errors: np.ndarray
    eta2_errors: np.ndarray

    @property
    def replications(self) -> int:
        return self.sigma2_errors.shape[0]

    @property
    def mean_abs_error_sigma2(self) -> float:
        return float(self.sigma2_errors.mean())

    @property
    def mean_abs_error_eta2(self) -> float:
        return float(self.eta2_errors.mean())

    @property
    def stderr_sigma2(self) -> float:
        return float(self.sigma2_errors.std(ddof=1) / math.sqrt(self.replications))

    @property
    def stderr_eta2(self) -> float:
        return float(self.eta2_errors.std(ddof=1) / math.sqrt(self.replications))


def _replication_errors(job: tuple[SimulationConfig, np.random.SeedSequence, Estimator]) -> tuple[float, float]:
    config, child, estimator = job
    dataset, _states = simulate(config, child)
    sigma2_hat, eta2_hat = estimator(dataset)
    return abs(float(sigma2_hat) - config.sigma2), abs(float(eta2_hat) - config.eta2)


def replicate(
    config: SimulationConfig,
    replications: int,
    estimator: Estimator,
    max_workers: int = 1,
) -> ReplicationResult:
    """Run independent replications of simulate + estimate and collect |error|s.

    Child streams are spawned from SeedSequence(config.seed), one per
    replication, so the result is deterministic for a given config and
    independent of max_workers.
    """
    if replications < 2:
        raise ValueError("need at least 2 replications for standard errors")
    children = np.random.SeedSequence(config.seed).spawn(replications)
    jobs = [(config, child, estimator) for child in children]
    if max_workers <= 1:
        pairs = [_replication_errors(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            pairs = list(pool.map(_replication_errors, jobs, chunksize=max(1, replications // (4 * max_workers))))
    errors = np.array(pairs, dtype=np.float64)
    return ReplicationResult(sigma2_errors=errors[:, 0].copy(), eta2_errors=errors[:, 1].copy())
