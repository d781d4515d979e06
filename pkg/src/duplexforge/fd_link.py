"""Beamformed full-duplex link metrics.

Evaluates the four power ratios of a base station serving a downlink user
with transmit beam f while receiving from an uplink user with beam w:

    snr_tx = P_bs * |h_tx^H f|^2 / N_ue      (transmit link, beam f only)
    snr_rx = P_ue * |w^H h_rx|^2 / N_bs      (receive link, beam w only)
    inr_rx = P_bs * |w^H H f|^2 / N_bs       (self-interference, both beams)
    inr_tx = P_ue * |h_cl|^2 / N_ue          (cross-link, beam-independent)

The canonical core is linear; dB variants are thin wrappers.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .arrays import BeamWeights
from .channels import CrossLinkChannel, SiChannel, UserChannel
from .link_math import linear_to_db, log2_1p

__all__ = [
    "FdScenarioLink",
    "LinkRates",
    "with_beams",
    "snr_tx",
    "snr_rx",
    "inr_rx",
    "inr_tx",
    "snr_tx_db",
    "snr_rx_db",
    "inr_rx_db",
    "inr_tx_db",
    "sum_spectral_efficiency",
]


@dataclass(eq=False)
class FdScenarioLink:
    """One concrete full-duplex link: beams, channels, and power budget.

    ``f``/``w`` may be None for a beamless context (a template that search
    routines fill in via ``with_beams``).
    """

    f: BeamWeights | None
    w: BeamWeights | None
    h_tx: UserChannel
    h_rx: UserChannel
    h_cl: CrossLinkChannel
    si: SiChannel
    p_bs_dbm: float
    p_ue_dbm: float
    n_bs_dbm: float
    n_ue_dbm: float

    def __post_init__(self) -> None:
        n_rx, n_tx = self.si.n_rx, self.si.n_tx
        if self.h_tx.coefficients.size != n_tx:
            raise ValueError(f"h_tx has {self.h_tx.coefficients.size} entries, expected {n_tx}")
        if self.h_rx.coefficients.size != n_rx:
            raise ValueError(f"h_rx has {self.h_rx.coefficients.size} entries, expected {n_rx}")
        if self.f is not None and len(self.f) != n_tx:
            raise ValueError(f"f has {len(self.f)} entries, expected {n_tx}")
        if self.w is not None and len(self.w) != n_rx:
            raise ValueError(f"w has {len(self.w)} entries, expected {n_rx}")


def with_beams(link: FdScenarioLink, f: BeamWeights, w: BeamWeights) -> FdScenarioLink:
    """Copy of the link with the beams replaced."""
    return dataclasses.replace(link, f=f, w=w)


def _dbm_to_mw(p_dbm: float) -> float:
    return 10.0 ** (p_dbm / 10.0)


def _require_beams(link: FdScenarioLink) -> tuple[np.ndarray, np.ndarray]:
    if link.f is None or link.w is None:
        raise ValueError("link has no beams set; use with_beams")
    return link.f.weights, link.w.weights


def snr_tx(link: FdScenarioLink) -> float:
    """Transmit-link SNR (linear); a function of f only."""
    f, _ = _require_beams(link)
    return _dbm_to_mw(link.p_bs_dbm) * abs(np.vdot(link.h_tx.coefficients, f)) ** 2 / _dbm_to_mw(link.n_ue_dbm)


def snr_rx(link: FdScenarioLink) -> float:
    """Receive-link SNR (linear); a function of w only."""
    _, w = _require_beams(link)
    return _dbm_to_mw(link.p_ue_dbm) * abs(np.vdot(w, link.h_rx.coefficients)) ** 2 / _dbm_to_mw(link.n_bs_dbm)


def inr_rx(link: FdScenarioLink) -> float:
    """Self-interference INR on the receive link (linear); couples f and w."""
    f, w = _require_beams(link)
    return _dbm_to_mw(link.p_bs_dbm) * abs(np.vdot(w, link.si.matrix @ f)) ** 2 / _dbm_to_mw(link.n_bs_dbm)


def inr_tx(link: FdScenarioLink) -> float:
    """Cross-link INR at the downlink user (linear); beam-independent."""
    return _dbm_to_mw(link.p_ue_dbm) * abs(link.h_cl.coefficient) ** 2 / _dbm_to_mw(link.n_ue_dbm)


def snr_tx_db(link: FdScenarioLink) -> float:
    return linear_to_db(snr_tx(link))


def snr_rx_db(link: FdScenarioLink) -> float:
    return linear_to_db(snr_rx(link))


def inr_rx_db(link: FdScenarioLink) -> float:
    return linear_to_db(inr_rx(link))


def inr_tx_db(link: FdScenarioLink) -> float:
    return linear_to_db(inr_tx(link))


@dataclass(frozen=True)
class LinkRates:
    """Achievable spectral efficiencies (bits/s/Hz) treating interference as noise."""

    r_tx: float
    r_rx: float

    @property
    def sum_rate(self) -> float:
        return self.r_tx + self.r_rx


def sum_spectral_efficiency(link: FdScenarioLink) -> LinkRates:
    """Rates of both links: log2(1 + snr / (1 + inr)) per link."""
    r_tx = log2_1p(snr_tx(link) / (1.0 + inr_tx(link)))
    r_rx = log2_1p(snr_rx(link) / (1.0 + inr_rx(link)))
    return LinkRates(r_tx, r_rx)
