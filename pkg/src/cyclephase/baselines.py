"""Single-predictor logistic baselines scored by in-sample AUC.

Three designs are supported: local clock time, band phase and the next-day
sleep score. Angles enter as ``(sin, cos)`` pairs so the model sees no
discontinuity at +/- pi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit
from scipy.stats import rankdata
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .analytic import AnalyticSeries
from .events import EventSet
from .exceptions import DataError
from .timeseries import SECONDS_PER_HOUR, RegularSeries, interpolate_gaps, local_hour, shift_daily, zscore

PREDICTOR_KINDS = ("clock_time", "circadian_phase", "sleep_score")


@dataclass(frozen=True)
class LabelledDesign:
    X: np.ndarray
    y: np.ndarray
    timestamps: np.ndarray
    predictor_kind: str
    feature_names: tuple[str, ...]

    @property
    def n_positive(self) -> int:
        return int(self.y.sum())


@dataclass(frozen=True)
class LogisticFit:
    coefficients: np.ndarray  # intercept first
    converged: bool
    iterations: int
    auc: float
    gradient_norm: float

    def to_dict(self) -> dict:
        return {
            "coefficients": [float(c) for c in self.coefficients],
            "converged": self.converged,
            "iterations": self.iterations,
            "auc": self.auc,
            "gradient_max_abs": self.gradient_norm,
        }


def build_design(grid: RegularSeries, analytic: list[AnalyticSeries], sleep: RegularSeries | None,
                 events: EventSet, kind: str, tz_offset_minutes: int = 0) -> LabelledDesign:
    """One row per hourly grid sample where the predictor is defined.

    A row is labelled 1 when at least one onset falls in ``[t, t + step)``.

    ``sleep`` must already be on a daily grid, shifted to the following day
    and z-scored (see :func:`prepare_sleep`); ``analytic`` supplies the phase
    for ``circadian_phase``.
    """
    if not np.isclose(grid.step, SECONDS_PER_HOUR):
        raise DataError("build_design needs an hourly grid")
    if kind not in PREDICTOR_KINDS:
        raise ValueError(f"unknown predictor kind {kind!r}")
    times = grid.times
    n = times.size

    if kind == "clock_time":
        h = local_hour(times, tz_offset_minutes)
        X = np.column_stack([np.sin(2 * np.pi * h / 24), np.cos(2 * np.pi * h / 24)])
        defined = np.ones(n, dtype=bool)
        names = ("sin_hour", "cos_hour")
    elif kind == "circadian_phase":
        phase = np.full(n, np.nan)
        for a in analytic:
            i0 = int(round((a.start - grid.start) / grid.step))
            phase[i0:i0 + len(a)] = a.phase
        defined = ~np.isnan(phase)
        X = np.column_stack([np.sin(phase), np.cos(phase)])
        names = ("sin_phase", "cos_phase")
    else:
        if sleep is None:
            raise DataError("sleep_score predictor needs a sleep series")
        local = times + 60.0 * tz_offset_minutes
        day = np.floor((local - sleep.start) / sleep.step).astype(int)
        value = np.full(n, np.nan)
        ok = (day >= 0) & (day < len(sleep))
        value[ok] = sleep.values[day[ok]]
        defined = ~np.isnan(value)
        X = value.reshape(-1, 1)
        names = ("sleep_score",)

    y = np.zeros(n, dtype=int)
    idx = np.floor((events.onsets - grid.start) / grid.step).astype(int)
    idx = idx[(idx >= 0) & (idx < n)]
    y[idx] = 1

    X, y, t = X[defined], y[defined], times[defined]
    if y.sum() == 0:
        raise DataError("no events in coverage")
    return LabelledDesign(X, y, t, kind, names)


def auc(scores, labels) -> float:
    """Mann-Whitney AUC: P(score_pos > score_neg) + 0.5 P(tie)."""
    s = np.asarray(scores, dtype=float).reshape(-1)
    y = np.asarray(labels).reshape(-1)
    if s.shape != y.shape:
        raise ValueError("scores and labels must have the same length")
    pos = y == 1
    n_pos = int(pos.sum())
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DataError("auc needs both positive and negative labels")
    ranks = rankdata(s)  # average ranks give the half-credit for ties
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2
    return float(u / (n_pos * n_neg))


class IRLSLogisticRegression(ClassifierMixin, BaseEstimator):
    """Ridge-penalised logistic regression fitted by Newton/IRLS.

    Parameters
    ----------
    ridge : float
        L2 penalty on the slopes; the intercept is not penalised.
    max_iter : int
    tol : float
        Convergence when the max-abs gradient of the penalised
        log-likelihood drops below ``tol``.

    Attributes
    ----------
    coef_, intercept_, converged_, n_iter_, gradient_norm_
    """

    def __init__(self, ridge=1e-4, max_iter=100, tol=1e-8):
        self.ridge = ridge
        self.max_iter = max_iter
        self.tol = tol

    def _objective(self, A, y, beta, pen):
        eta = A @ beta
        # log-likelihood written to stay finite for large |eta|
        ll = np.sum(y * eta - np.logaddexp(0.0, eta))
        return ll - 0.5 * self.ridge * np.sum(pen * beta ** 2)

    def fit(self, X, y):
        if self.ridge < 0:
            raise ValueError("ridge must be >= 0")
        X, y = check_X_y(X, y)
        self.classes_, y = np.unique(y, return_inverse=True)
        if self.classes_.size != 2:
            raise DataError("need exactly two classes")
        A = np.column_stack([np.ones(X.shape[0]), X])
        pen = np.ones(A.shape[1])
        pen[0] = 0.0
        beta = np.zeros(A.shape[1])
        converged = False
        it = 0
        grad = None
        for it in range(self.max_iter + 1):
            p = expit(A @ beta)
            grad = A.T @ (y - p) - self.ridge * pen * beta
            if self.ridge == 0 and np.all(np.abs(p - y) < 1e-8):
                # perfect separation: the unpenalised MLE is at infinity
                break
            if np.max(np.abs(grad)) < self.tol:
                converged = True
                break
            if it == self.max_iter:
                break
            w = p * (1 - p)
            H = (A * w[:, None]).T @ A + self.ridge * np.diag(pen)
            try:
                step = np.linalg.solve(H, grad)
            except np.linalg.LinAlgError:
                break
            if not np.all(np.isfinite(step)):
                break
            f0 = self._objective(A, y, beta, pen)
            t = 1.0
            for _ in range(30):
                if self._objective(A, y, beta + t * step, pen) >= f0 - 1e-12 * abs(f0):
                    break
                t *= 0.5
            beta = beta + t * step
        self.intercept_ = float(beta[0])
        self.coef_ = beta[1:].copy()
        self.converged_ = converged
        self.n_iter_ = it
        self.gradient_norm_ = float(np.max(np.abs(grad)))
        return self

    def decision_function(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X)
        return X @ self.coef_ + self.intercept_

    def predict_proba(self, X):
        p = expit(self.decision_function(X))
        return np.column_stack([1 - p, p])

    def predict(self, X):
        return self.classes_[(self.decision_function(X) > 0).astype(int)]


def fit_logistic(design: LabelledDesign, ridge: float = 1e-4, max_iter: int = 100, tol: float = 1e-8) -> LogisticFit:
    """Fit one baseline and score it with in-sample AUC."""
    if design.y.min() == design.y.max():
        raise DataError("design needs both positive and negative rows")
    model = IRLSLogisticRegression(ridge=ridge, max_iter=max_iter, tol=tol).fit(design.X, design.y)
    score = auc(model.decision_function(design.X), design.y)
    coefs = np.concatenate([[model.intercept_], model.coef_])
    return LogisticFit(coefs, model.converged_, model.n_iter_, score, model.gradient_norm_)


def prepare_sleep(sleep: RegularSeries, max_gap_days: int = 2) -> RegularSeries:
    """Fill short gaps, assign each night to the next day and z-score."""
    return zscore(shift_daily(interpolate_gaps(sleep, max_gap_days), 1))
