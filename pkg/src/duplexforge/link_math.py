"""Scalar link-level duplexing math.

SNR/INR/SINR arithmetic, spectral efficiencies for TDD/FDD/full-duplex, and
rate-region boundary generation. All functions here take and return either
explicit dB quantities (suffix ``_db``/``_dbm``) or linear power ratios;
conversions are centralized in ``db_to_linear``/``linear_to_db``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "DB_FLOOR",
    "LinkBudget",
    "LinkSnrs",
    "LinkInrs",
    "RatePoint",
    "DuplexShare",
    "BoundaryPoint",
    "db_to_linear",
    "linear_to_db",
    "log2_1p",
    "sinr",
    "residual_si_inr",
    "capacity_fd",
    "rate_fd",
    "rate_tdd",
    "rate_fdd",
    "rate_region_boundary",
]

from .errors import ConfigError

# Reporting floor for dB conversions of zero power (keeps CSV output finite).
DB_FLOOR = -300.0


def db_to_linear(value_db: float) -> float:
    """Convert a dB power ratio to linear. -inf maps to 0."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float, floor_db: float = DB_FLOOR) -> float:
    """Convert a linear power ratio to dB, clamped below at ``floor_db``."""
    if value < 0.0:
        raise ValueError(f"negative power ratio: {value}")
    if value == 0.0:
        return floor_db
    return max(10.0 * math.log10(value), floor_db)


def log2_1p(x: float) -> float:
    """log2(1 + x), numerically stable for tiny x."""
    return math.log1p(x) / math.log(2.0)


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")


@dataclass(frozen=True)
class LinkBudget:
    """Transmit power, integrated noise power, and total SI mitigation."""

    p_tx_dbm: float
    p_noise_dbm: float
    cancellation_db: float

    def __post_init__(self) -> None:
        _require_finite("p_tx_dbm", self.p_tx_dbm)
        _require_finite("p_noise_dbm", self.p_noise_dbm)
        _require_finite("cancellation_db", self.cancellation_db)
        if self.cancellation_db < 0.0:
            raise ValueError(f"cancellation_db must be >= 0, got {self.cancellation_db}")


@dataclass(frozen=True)
class LinkSnrs:
    """Maximum SNRs of the transmit and receive links (linear ratios)."""

    snr_tx: float
    snr_rx: float

    def __post_init__(self) -> None:
        for name, v in (("snr_tx", self.snr_tx), ("snr_rx", self.snr_rx)):
            _require_finite(name, v)
            if v < 0.0:
                raise ValueError(f"{name} must be >= 0, got {v}")


@dataclass(frozen=True)
class LinkInrs:
    """Interference-to-noise ratios on the two links (linear ratios)."""

    inr_tx: float
    inr_rx: float

    def __post_init__(self) -> None:
        for name, v in (("inr_tx", self.inr_tx), ("inr_rx", self.inr_rx)):
            if math.isnan(v) or v < 0.0:
                raise ValueError(f"{name} must be >= 0, got {v}")


@dataclass(frozen=True)
class RatePoint:
    """An achievable (transmit, receive) spectral-efficiency pair in bits/s/Hz."""

    r_tx: float
    r_rx: float

    def __post_init__(self) -> None:
        if self.r_tx < 0.0 or self.r_rx < 0.0:
            raise ValueError(f"rates must be >= 0, got ({self.r_tx}, {self.r_rx})")

    @property
    def sum_rate(self) -> float:
        return self.r_tx + self.r_rx


@dataclass(frozen=True)
class DuplexShare:
    """Fraction of the resource (time for TDD, bandwidth for FDD) given to transmission."""

    alpha: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")


def sinr(snr: float, inr: float) -> float:
    """Effective signal quality when treating interference as noise: snr / (1 + inr)."""
    if snr < 0.0:
        raise ValueError(f"snr must be >= 0, got {snr}")
    if inr < 0.0:
        raise ValueError(f"inr must be >= 0, got {inr}")
    return snr / (1.0 + inr)


def residual_si_inr(budget: LinkBudget) -> float:
    """INR (dB) of residual self-interference after mitigation.

    The residual SI power is the transmit power knocked down by the total
    cancellation, referenced to the noise floor:
    INR = P_tx - L - P_noise (all in dB).
    """
    return budget.p_tx_dbm - budget.cancellation_db - budget.p_noise_dbm


def capacity_fd(snrs: LinkSnrs) -> RatePoint:
    """Interference-free full-duplex capacity point."""
    return RatePoint(log2_1p(snrs.snr_tx), log2_1p(snrs.snr_rx))


def rate_fd(snrs: LinkSnrs, inrs: LinkInrs) -> RatePoint:
    """Full-duplex rates with residual interference treated as noise."""
    return RatePoint(
        log2_1p(sinr(snrs.snr_tx, inrs.inr_tx)),
        log2_1p(sinr(snrs.snr_rx, inrs.inr_rx)),
    )


def rate_tdd(snrs: LinkSnrs, share: DuplexShare) -> RatePoint:
    """Time-division rates: a fraction alpha of time is spent transmitting."""
    a = share.alpha
    return RatePoint(a * log2_1p(snrs.snr_tx), (1.0 - a) * log2_1p(snrs.snr_rx))


def rate_fdd(snrs: LinkSnrs, share: DuplexShare) -> RatePoint:
    """Frequency-division rates: shrinking bandwidth boosts per-link SNR.

    alpha in {0, 1} is handled as the continuous limit, where the vanishing
    link contributes zero rate.
    """
    a = share.alpha
    r_tx = 0.0 if a == 0.0 else a * log2_1p(snrs.snr_tx / a)
    r_rx = 0.0 if a == 1.0 else (1.0 - a) * log2_1p(snrs.snr_rx / (1.0 - a))
    return RatePoint(r_tx, r_rx)


@dataclass(frozen=True)
class BoundaryPoint:
    """One point on a rate-region boundary; ``alpha`` is None for full-duplex."""

    alpha: float | None
    point: RatePoint
    is_star: bool


def rate_region_boundary(
    strategy: str,
    snrs: LinkSnrs,
    inrs: LinkInrs = LinkInrs(0.0, 0.0),
    n_points: int = 51,
) -> list[BoundaryPoint]:
    """Boundary of the achievable rate region for one duplexing strategy.

    For ``tdd``/``fdd`` the share alpha is swept over ``n_points`` uniform
    values from 1 down to 0 (transmit-heavy corner first). For ``fd`` the
    boundary is the rectangle with corner ``rate_fd``: corner plus the two
    axis endpoints. The point maximizing the sum rate is starred; exact sum
    ties are broken toward the smaller alpha.
    """
    if n_points < 2:
        raise ConfigError(f"n_points must be >= 2, got {n_points}")
    if strategy == "tdd" or strategy == "fdd":
        rate = rate_tdd if strategy == "tdd" else rate_fdd
        alphas = [1.0 - i / (n_points - 1) for i in range(n_points)]
        pts = [(a, rate(snrs, DuplexShare(a))) for a in alphas]
    elif strategy == "fd":
        corner = rate_fd(snrs, inrs)
        pts = [
            (None, RatePoint(corner.r_tx, 0.0)),
            (None, corner),
            (None, RatePoint(0.0, corner.r_rx)),
        ]
    else:
        raise ConfigError(f"unknown strategy {strategy!r} (expected tdd, fdd, or fd)")

    # >= keeps the later point on exact ties; the sweep is alpha-descending,
    # so ties resolve toward the smaller alpha.
    star = 0
    for i, (_, p) in enumerate(pts):
        if p.sum_rate >= pts[star][1].sum_rate:
            star = i
    return [BoundaryPoint(a, p, i == star) for i, (a, p) in enumerate(pts)]
