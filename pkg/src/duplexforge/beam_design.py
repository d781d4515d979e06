"""Per-user-pair analog beam selection over finite candidate sets.

``exhaustive_beam_search`` is the oracle: it scores every (f, w) pair and
returns the global optimum. ``alternating_beam_search`` is the faster
coordinate-ascent heuristic, initialized SNR-greedily (independent beam
alignment on each link) and guaranteed monotone per half-step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arrays import Codebook
from .errors import ConfigError
from .fd_link import FdScenarioLink, inr_tx

__all__ = [
    "BeamSearchSpace",
    "BeamDesignResult",
    "DEFAULT_EVALUATION_BUDGET",
    "exhaustive_beam_search",
    "alternating_beam_search",
]

DEFAULT_EVALUATION_BUDGET = 10_000_000


@dataclass(eq=False)
class BeamSearchSpace:
    """Finite transmit and receive candidate sets."""

    tx_candidates: Codebook
    rx_candidates: Codebook


@dataclass(eq=False)
class BeamDesignResult:
    """Selected beam pair, its sum spectral efficiency, and the search cost.

    ``trace`` records the sum spectral efficiency after the initial pair and
    after every accepted half-step (exhaustive search has a single entry).
    """

    f_index: int
    w_index: int
    sum_se: float
    evaluations: int
    trace: tuple[float, ...]

    def beams(self, space: BeamSearchSpace):
        return space.tx_candidates.beams[self.f_index], space.rx_candidates.beams[self.w_index]


class _PairScorer:
    """Vectorized sum-SE scoring over codebook columns for a fixed link context."""

    def __init__(self, space: BeamSearchSpace, link: FdScenarioLink):
        f_mat = space.tx_candidates.matrix()
        w_mat = space.rx_candidates.matrix()
        if f_mat.shape[0] != link.si.n_tx:
            raise ValueError(
                f"tx candidates have {f_mat.shape[0]} elements, channel expects {link.si.n_tx}"
            )
        if w_mat.shape[0] != link.si.n_rx:
            raise ValueError(
                f"rx candidates have {w_mat.shape[0]} elements, channel expects {link.si.n_rx}"
            )
        self.f_mat = f_mat
        self.w_mat = w_mat
        p_bs = 10.0 ** (link.p_bs_dbm / 10.0)
        p_ue = 10.0 ** (link.p_ue_dbm / 10.0)
        n_bs = 10.0 ** (link.n_bs_dbm / 10.0)
        n_ue = 10.0 ** (link.n_ue_dbm / 10.0)
        snr_tx_all = p_bs * np.abs(link.h_tx.coefficients.conj() @ f_mat) ** 2 / n_ue
        snr_rx_all = p_ue * np.abs(w_mat.conj().T @ link.h_rx.coefficients) ** 2 / n_bs
        self.r_tx = np.log1p(snr_tx_all / (1.0 + inr_tx(link))) / math.log(2.0)
        self.snr_rx = snr_rx_all
        self.h_f = link.si.matrix @ f_mat  # columns H f_i, reused by both searches
        self.inr_scale = p_bs / n_bs

    @property
    def n_tx(self) -> int:
        return self.f_mat.shape[1]

    @property
    def n_rx(self) -> int:
        return self.w_mat.shape[1]

    def r_rx_for_f(self, f_index: int) -> np.ndarray:
        """Receive rate of every w candidate when f is fixed."""
        inr = self.inr_scale * np.abs(self.w_mat.conj().T @ self.h_f[:, f_index]) ** 2
        return np.log1p(self.snr_rx / (1.0 + inr)) / math.log(2.0)

    def r_rx_for_w(self, w_index: int) -> np.ndarray:
        """Receive rate of the fixed w against every f candidate."""
        inr = self.inr_scale * np.abs(self.w_mat[:, w_index].conj() @ self.h_f) ** 2
        return np.log1p(self.snr_rx[w_index] / (1.0 + inr)) / math.log(2.0)

    def sum_se(self, f_index: int, w_index: int) -> float:
        return float(self.r_tx[f_index] + self.r_rx_for_f(f_index)[w_index])


def exhaustive_beam_search(
    space: BeamSearchSpace,
    link: FdScenarioLink,
    budget: int = DEFAULT_EVALUATION_BUDGET,
) -> BeamDesignResult:
    """Globally optimal pair over the finite sets.

    Evaluates every pair; ties break toward the lowest transmit index, then
    the lowest receive index.
    """
    scorer = _PairScorer(space, link)
    n_pairs = scorer.n_tx * scorer.n_rx
    if n_pairs > budget:
        raise ConfigError(
            f"search space of {scorer.n_tx} x {scorer.n_rx} = {n_pairs} pairs "
            f"exceeds the evaluation budget of {budget}"
        )
    sums = scorer.r_tx[:, None] + np.stack(
        [scorer.r_rx_for_f(i) for i in range(scorer.n_tx)], axis=0
    )
    # argmax scans row-major (tx index outer), giving the required tie-break.
    best = int(np.argmax(sums))
    f_index, w_index = divmod(best, scorer.n_rx)
    best_sum = float(sums[f_index, w_index])
    return BeamDesignResult(f_index, w_index, best_sum, n_pairs, (best_sum,))


def alternating_beam_search(
    space: BeamSearchSpace,
    link: FdScenarioLink,
    max_rounds: int = 16,
) -> BeamDesignResult:
    """Coordinate ascent on the pair: best w for fixed f, then best f for fixed w.

    Starts from the SNR-greedy pair (each link's independent beam-alignment
    winner). Each half-step keeps the incumbent among its candidates, so the
    sum-SE trace is non-decreasing; stops when a full round changes nothing.
    """
    if max_rounds < 1:
        raise ConfigError(f"max_rounds must be >= 1, got {max_rounds}")
    scorer = _PairScorer(space, link)
    f_index = int(np.argmax(np.abs(link.h_tx.coefficients.conj() @ scorer.f_mat)))
    w_index = int(np.argmax(scorer.snr_rx))
    current = scorer.sum_se(f_index, w_index)
    evaluations = 1
    trace = [current]

    for _ in range(max_rounds):
        changed = False

        candidates = scorer.r_tx[f_index] + scorer.r_rx_for_f(f_index)
        evaluations += scorer.n_rx
        j = int(np.argmax(candidates))
        if candidates[j] > current:
            w_index, current, changed = j, float(candidates[j]), True
        trace.append(current)

        candidates = scorer.r_tx + scorer.r_rx_for_w(w_index)
        evaluations += scorer.n_tx
        i = int(np.argmax(candidates))
        if candidates[i] > current:
            f_index, current, changed = i, float(candidates[i]), True
        trace.append(current)

        if not changed:
            break
    return BeamDesignResult(f_index, w_index, current, evaluations, tuple(trace))
