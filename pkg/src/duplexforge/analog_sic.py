"""N-tap analog SIC filter modeling and least-squares tap-weight fitting.

The filter injects A @ x at the receiver, where column i of A is the
(measured or synthesized) impulse response of tap i. Given quiet-period SI
samples y, the weights minimizing ||-y - A x||^2 have the closed form
x* = -(A^H A)^{-1} A^H y; the residual after cancellation is y + A x*.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .link_math import DB_FLOOR

__all__ = [
    "TapResponseMatrix",
    "FirFilterSpec",
    "SicFit",
    "RIDGE_CONDITION_LIMIT",
    "CANCELLATION_CAP_DB",
    "ideal_tap_matrix",
    "ls_tap_weights",
    "apply_sic",
]

# Condition number of A^H A beyond which the normal equations are ridge-regularized.
RIDGE_CONDITION_LIMIT = 1e12
# Reporting cap for cancellation when the residual is exactly zero.
CANCELLATION_CAP_DB = 300.0


@dataclass(frozen=True)
class FirFilterSpec:
    """An N-tap FIR cancellation filter with fixed, uniform tap delay (seconds)."""

    n_taps: int
    tap_delay: float

    def __post_init__(self) -> None:
        if self.n_taps < 1:
            raise ValueError(f"n_taps must be >= 1, got {self.n_taps}")
        if not self.tap_delay > 0.0:
            raise ValueError(f"tap_delay must be > 0, got {self.tap_delay}")


@dataclass(eq=False)
class TapResponseMatrix:
    """Per-tap impulse responses: column i is tap i's response, T samples long.

    ``fractional`` marks synthesized responses whose tap delays fell between
    sample instants (sinc-interpolated columns).
    """

    columns: np.ndarray
    sample_period: float
    fractional: bool = False

    def __post_init__(self) -> None:
        a = np.asarray(self.columns, dtype=complex)
        if a.ndim != 2 or not np.all(np.isfinite(a)):
            raise ValueError("columns must be a finite 2-D array (T x K)")
        if not self.sample_period > 0.0:
            raise ValueError(f"sample_period must be > 0, got {self.sample_period}")
        self.columns = a

    @property
    def n_samples(self) -> int:
        return self.columns.shape[0]

    @property
    def n_taps(self) -> int:
        return self.columns.shape[1]


@dataclass(eq=False)
class SicFit:
    """Fitted tap weights and the cancellation they achieve on the fitted data."""

    weights: np.ndarray
    residual_power_db: float
    cancellation_db: float


def ideal_tap_matrix(spec: FirFilterSpec, sample_period: float, n_samples: int) -> TapResponseMatrix:
    """Synthesize an ideal tap-response matrix for simulation.

    Tap i is a unit impulse delayed by (i-1)*tap_delay. Delays that are not
    integer sample multiples fall back to truncated sinc interpolation; the
    truncated kernels are renormalized to unit energy and the matrix is
    flagged ``fractional``.
    """
    if not sample_period > 0.0:
        raise ValueError(f"sample_period must be > 0, got {sample_period}")
    if n_samples < spec.n_taps:
        raise ValueError(f"n_samples {n_samples} < n_taps {spec.n_taps}")
    delays = np.arange(spec.n_taps) * (spec.tap_delay / sample_period)
    if delays[-1] >= n_samples:
        raise ValueError(
            f"last tap delay {delays[-1]:g} samples does not fit in {n_samples} samples"
        )

    rounded = np.round(delays)
    if np.allclose(delays, rounded, atol=1e-9):
        a = np.zeros((n_samples, spec.n_taps), dtype=complex)
        a[rounded.astype(int), np.arange(spec.n_taps)] = 1.0
        return TapResponseMatrix(a, sample_period)

    warnings.warn(
        "tap delay is not an integer number of samples; using truncated sinc interpolation",
        stacklevel=2,
    )
    t = np.arange(n_samples)
    a = np.sinc(t[:, None] - delays[None, :]).astype(complex)
    a /= np.linalg.norm(a, axis=0, keepdims=True)
    return TapResponseMatrix(a, sample_period, fractional=True)


def ls_tap_weights(y: np.ndarray, taps: TapResponseMatrix | np.ndarray) -> SicFit:
    """Least-squares tap weights reconstructing an inverted copy of y.

    Solves the normal equations of x* = -(A^H A)^{-1} A^H y. When A^H A is
    ill-conditioned (condition number beyond RIDGE_CONDITION_LIMIT), a small
    ridge proportional to trace(A^H A)/K is added and a warning is issued.
    """
    y = np.asarray(y, dtype=complex)
    a = taps.columns if isinstance(taps, TapResponseMatrix) else np.asarray(taps, dtype=complex)
    if y.size == 0:
        raise ValueError("y must be non-empty")
    if y.ndim != 1 or y.size != a.shape[0]:
        raise ValueError(f"y has shape {y.shape}, expected ({a.shape[0]},)")

    gram = a.conj().T @ a
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > RIDGE_CONDITION_LIMIT:
        eps = 1e-9 * float(np.trace(gram).real) / gram.shape[0]
        warnings.warn(
            f"tap responses are ill-conditioned (cond {cond:.3g}); ridge {eps:.3g} applied",
            stacklevel=2,
        )
        gram = gram + eps * np.eye(gram.shape[0])
    x = -np.linalg.solve(gram, a.conj().T @ y)

    residual = y + a @ x
    t = y.size
    res_power = float(np.vdot(residual, residual).real) / t
    y_power = float(np.vdot(y, y).real) / t
    residual_power_db = 10.0 * math.log10(res_power) if res_power > 0.0 else DB_FLOOR
    if res_power == 0.0 or y_power == 0.0:
        cancellation_db = CANCELLATION_CAP_DB if y_power > 0.0 else 0.0
    else:
        # LS never increases residual power vs x = 0; clamp float rounding.
        cancellation_db = max(0.0, 10.0 * math.log10(y_power / res_power))
    return SicFit(x, residual_power_db, cancellation_db)


def apply_sic(y: np.ndarray, taps: TapResponseMatrix | np.ndarray, fit: SicFit) -> np.ndarray:
    """Residual after injecting the filter output: y + A @ x."""
    y = np.asarray(y, dtype=complex)
    a = taps.columns if isinstance(taps, TapResponseMatrix) else np.asarray(taps, dtype=complex)
    if y.shape != (a.shape[0],):
        raise ValueError(f"y has shape {y.shape}, expected ({a.shape[0]},)")
    if fit.weights.shape != (a.shape[1],):
        raise ValueError(f"fit has {fit.weights.shape} weights, expected ({a.shape[1]},)")
    return y + a @ fit.weights
