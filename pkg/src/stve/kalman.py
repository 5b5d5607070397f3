"""Kalman filter for the random-walk regression model, in filtered form.

Per observed step, with prior state x and covariance C:

    C_next = eta^2 / (<(C + sigma^2 I) u, u> + eta^2) * (C + sigma^2 I)
    x_next = x + (C_next / eta^2) u (y - <x, u>)

The covariance update is a positive scalar times a PSD matrix, so symmetry
and positive semidefiniteness are preserved by construction.  Missing steps
propagate only: the covariance inflates by sigma^2 I and the state is
unchanged.  The log-likelihood accumulates Gaussian innovation terms over the
observed steps, with innovation variance <(C + sigma^2 I) u, u> + eta^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import RegressionDataset

__all__ = ["KalmanConfig", "KalmanTrajectory", "run_filter", "predict_next"]


@dataclass(frozen=True, eq=False)
class KalmanConfig:
    """Filter parameters: noise variances, initial state, initial covariance scale.

    The initial covariance is c0_scale * I; x0 defaults to the zero vector.
    eta2 must be strictly positive, sigma2 non-negative.
    """

    sigma2: float
    eta2: float
    x0: np.ndarray | None = None
    c0_scale: float = 1e4

    def __post_init__(self) -> None:
        if not (np.isfinite(self.sigma2) and self.sigma2 >= 0.0):
            raise ValueError("sigma2 must be finite and non-negative")
        if not (np.isfinite(self.eta2) and self.eta2 > 0.0):
            raise ValueError("eta2 must be finite and strictly positive")
        if not (np.isfinite(self.c0_scale) and self.c0_scale > 0.0):
            raise ValueError("c0_scale must be finite and strictly positive")
        if self.x0 is not None:
            vec = np.array(self.x0, dtype=np.float64).reshape(-1)
            if not np.all(np.isfinite(vec)):
                raise ValueError("x0 must be finite")
            vec.setflags(write=False)
            object.__setattr__(self, "x0", vec)


@dataclass(frozen=True, eq=False)
class KalmanTrajectory:
    """Filter output over the full horizon.

    states[t] and covariances[t] are the filtered state and covariance after
    step t.  predictions[t] is the one-step-ahead mean <x_{t-1}, u_t>, defined
    at every step; innovations[t] is y_t minus that mean, NaN at missing
    steps.  loglik sums the Gaussian innovation terms of the observed steps.
    """

    states: np.ndarray
    covariances: np.ndarray
    predictions: np.ndarray
    innovations: np.ndarray
    loglik: float


def run_filter(dataset: RegressionDataset, config: KalmanConfig) -> KalmanTrajectory:
    """Run the filter over the dataset; raises FloatingPointError if the
    recursion leaves the finite range."""
    horizon, dim = dataset.horizon, dataset.dim
    if config.x0 is None:
        state = np.zeros(dim)
    else:
        if config.x0.shape[0] != dim:
            raise ValueError("x0 length does not match the dataset dimension")
        state = np.array(config.x0)
    cov = config.c0_scale * np.eye(dim)
    process = config.sigma2 * np.eye(dim)
    eta2 = config.eta2

    states = np.empty((horizon, dim))
    covariances = np.empty((horizon, dim, dim))
    predictions = np.empty(horizon)
    innovations = np.full(horizon, np.nan)
    loglik = 0.0

    for t in range(horizon):
        u = dataset.u[t]
        prior_cov = cov + process
        predictions[t] = state @ u
        if dataset.observed[t]:
            weighted = prior_cov @ u
            innovation_var = float(weighted @ u) + eta2
            if not (np.isfinite(innovation_var) and innovation_var > 0.0):
                raise FloatingPointError(
                    f"non-finite or non-positive innovation variance at step {t + 1}"
                )
            residual = dataset.y[t] - predictions[t]
            innovations[t] = residual
            cov = (eta2 / innovation_var) * prior_cov
            # The gain (C_next / eta^2) u collapses to weighted / innovation_var.
            state = state + (residual / innovation_var) * weighted
            loglik -= 0.5 * (
                math.log(2.0 * math.pi * innovation_var) + residual * residual / innovation_var
            )
        else:
            cov = prior_cov
        states[t] = state
        covariances[t] = cov

    if not (np.all(np.isfinite(states)) and np.isfinite(loglik)):
        raise FloatingPointError("filter recursion produced non-finite values")
    for arr in (states, covariances, predictions, innovations):
        arr.setflags(write=False)
    return KalmanTrajectory(
        states=states,
        covariances=covariances,
        predictions=predictions,
        innovations=innovations,
        loglik=float(loglik),
    )


def predict_next(state: np.ndarray, u_next: np.ndarray) -> float:
    """One-step-ahead mean <state, u_next> for a caller-supplied next vector."""
    s = np.asarray(state, dtype=np.float64).reshape(-1)
    u = np.asarray(u_next, dtype=np.float64).reshape(-1)
    if s.shape != u.shape:
        raise ValueError("state and u_next must have the same length")
    if not (np.all(np.isfinite(s)) and np.all(np.isfinite(u))):
        raise ValueError("state and u_next must be finite")
    return float(s @ u)
