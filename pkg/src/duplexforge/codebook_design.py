"""SI-aware transmit/receive codebook design.

Jointly shapes codebooks F and W to minimize the total self-interference
coupled across the channel, ||W^H H F||_F^2, while keeping every beam's gain
toward its assigned coverage direction close to the ideal N (the
coverage-variance constraints):

    ||N_tx * 1 - diag(A_tx^H F)||^2 <= sigma2_tx * N_tx^2 * M_tx   (and rx alike)

The solver alternates sides. With one side fixed the coupling is a convex
quadratic in the other side's columns, so each column update is a
closed-form penalized least squares; the penalty weight adapts (doubling
until the coverage budget is met, halving when slack). A candidate half-step
is accepted only when it strictly lowers the raw coupling while staying
within the coverage budget, which makes the objective trace monotone and
keeps the design at least as good as its projected-conjugate initialization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arrays import ArrayGeometry, BeamWeights, Codebook, Direction, PhaseShifterSpec
from .arrays import project_weights, steering_vector
from .channels import SiChannel
from .link_math import DB_FLOOR

__all__ = [
    "CoverageSpec",
    "CodebookDesignConfig",
    "CodebookDesignResult",
    "coverage_spec",
    "coverage_variance",
    "coverage_budget",
    "average_coupling_db",
    "design_codebooks",
]


@dataclass(eq=False)
class CoverageSpec:
    """Service-region directions and their steering matrix (N x M, column j
    paired with codebook beam j)."""

    directions: list[Direction]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[1] != len(self.directions):
            raise ValueError("matrix must be (n_elements, n_directions)")
        self.matrix = m

    @property
    def n_elements(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_beams(self) -> int:
        return self.matrix.shape[1]


def coverage_spec(geometry: ArrayGeometry, directions: list[Direction]) -> CoverageSpec:
    """Coverage spec whose columns are the steering vectors of the directions."""
    if not directions:
        raise ValueError("directions must be non-empty")
    mat = np.stack([steering_vector(geometry, d) for d in directions], axis=1)
    return CoverageSpec(list(directions), mat)


@dataclass(frozen=True)
class CodebookDesignConfig:
    """Design knobs: coverage-variance budgets, iteration limits, realizability."""

    sigma2_tx: float = 0.1
    sigma2_rx: float = 0.1
    max_iters: int = 200
    tolerance: float = 1e-6
    spec: PhaseShifterSpec | None = None
    lambda_init: float = 1.0

    def __post_init__(self) -> None:
        if self.sigma2_tx < 0.0 or self.sigma2_rx < 0.0:
            raise ValueError("coverage-variance budgets must be >= 0")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.tolerance > 0.0:
            raise ValueError(f"tolerance must be > 0, got {self.tolerance}")


@dataclass(eq=False)
class CodebookDesignResult:
    """Designed codebooks plus the solver's audit trail.

    ``objective_trace`` holds the raw coupling ||W^H H F||_F^2 at
    initialization and after each outer iteration (monotone non-increasing).
    ``projection_jump_db`` is the objective change caused by the final
    projection onto the quantized set (0 for unquantized designs).
    ``feasible`` is False when the returned codebooks violate a coverage
    budget (possible only under quantization).
    """

    F: Codebook
    W: Codebook
    objective_trace: tuple[float, ...]
    coverage_tx: float
    coverage_rx: float
    feasible: bool
    projection_jump_db: float = 0.0
    fell_back_to_baseline: bool = False
    iterations: int = 0


def _as_matrix(x: Codebook | np.ndarray) -> np.ndarray:
    return x.matrix() if isinstance(x, Codebook) else np.asarray(x, dtype=complex)


def _as_channel(h: SiChannel | np.ndarray) -> np.ndarray:
    return h.matrix if isinstance(h, SiChannel) else np.asarray(h, dtype=complex)


def coverage_variance(x: Codebook | np.ndarray, a: CoverageSpec) -> float:
    """Constraint left-hand side: ||N*1 - diag(A^H X)||^2."""
    mat = _as_matrix(x)
    if mat.shape != a.matrix.shape:
        raise ValueError(f"codebook shape {mat.shape} does not match coverage {a.matrix.shape}")
    diag = np.sum(a.matrix.conj() * mat, axis=0)
    return float(np.sum(np.abs(a.n_elements - diag) ** 2))


def coverage_budget(a: CoverageSpec, sigma2: float) -> float:
    """Constraint right-hand side: sigma2 * N^2 * M."""
    return sigma2 * a.n_elements**2 * a.n_beams


def _coupling(w_mat: np.ndarray, h: np.ndarray, f_mat: np.ndarray) -> float:
    return float(np.linalg.norm(w_mat.conj().T @ h @ f_mat) ** 2)


def average_coupling_db(
    f: Codebook | np.ndarray, w: Codebook | np.ndarray, h: SiChannel | np.ndarray
) -> float:
    """Per-beam-pair average of |w^H H f|^2 in dB, clamped at the reporting floor."""
    f_mat, w_mat, h_mat = _as_matrix(f), _as_matrix(w), _as_channel(h)
    if h_mat.shape != (w_mat.shape[0], f_mat.shape[0]):
        raise ValueError(
            f"channel shape {h_mat.shape} does not match W {w_mat.shape} / F {f_mat.shape}"
        )
    total = _coupling(w_mat, h_mat, f_mat)
    per_pair = total / (f_mat.shape[1] * w_mat.shape[1])
    if per_pair == 0.0:
        return DB_FLOOR
    return max(10.0 * math.log10(per_pair), DB_FLOOR)


def _penalized_columns(gram: np.ndarray, a: np.ndarray, n: int, lam: float) -> np.ndarray:
    """Closed-form minimizers of x^H G x + lam * |n - a_i^H x|^2, one per column of a.

    With u_i = G^{-1} a_i and s_i = a_i^H u_i, the minimizer is
    lam * n * u_i / (1 + lam * s_i).
    """
    u = np.linalg.solve(gram, a)
    s = np.sum(a.conj() * u, axis=0).real
    return u * (lam * n / (1.0 + lam * s))[None, :]


def _half_step(
    gram_op: np.ndarray,
    cov: CoverageSpec,
    current: np.ndarray,
    current_obj: float,
    budget: float,
    lam: float,
) -> tuple[np.ndarray, float, float, bool]:
    """One side's update: returns (columns, objective, lambda, accepted).

    ``gram_op`` is the PSD operator G with objective sum_i x_i^H G x_i. A
    ridge keeps the column solves well-posed; the candidate is only accepted
    if it meets the coverage budget and strictly lowers the raw objective.
    """
    n = cov.n_elements
    tr = float(np.trace(gram_op).real)
    ridge = 1e-9 * tr / gram_op.shape[0] if tr > 0.0 else 1.0
    gram = gram_op + ridge * np.eye(gram_op.shape[0])

    candidate = None
    for _ in range(200):
        cand = _penalized_columns(gram, cov.matrix, n, lam)
        if coverage_variance(cand, cov) <= budget:
            candidate = cand
            break
        lam *= 2.0
    if candidate is None:
        return current, current_obj, lam, False

    cand_obj = float(np.sum((candidate.conj() * (gram_op @ candidate)).real))
    if cand_obj < current_obj:
        if coverage_variance(candidate, cov) <= 0.5 * budget:
            lam = max(lam / 2.0, 1e-12)
        return candidate, cand_obj, lam, True
    return current, current_obj, lam, False


def _to_codebook(
    mat: np.ndarray, directions: list[Direction], spec: PhaseShifterSpec | None, quantize: bool
) -> Codebook:
    beams = []
    for i in range(mat.shape[1]):
        if quantize and spec is not None:
            beams.append(project_weights(mat[:, i], spec))
        else:
            beams.append(BeamWeights(mat[:, i].copy(), spec if quantize else None))
    return Codebook(beams, list(directions))


def design_codebooks(
    h: SiChannel | np.ndarray,
    cov_tx: CoverageSpec,
    cov_rx: CoverageSpec,
    config: CodebookDesignConfig = CodebookDesignConfig(),
) -> CodebookDesignResult:
    """Design transmit and receive codebooks minimizing coupled SI.

    Starts from projected conjugate codebooks (feasible for coverage by
    construction, up to any quantization-induced floor) and alternates
    penalized column updates. A zero coverage budget pins that side to its
    conjugate codebook: the conjugate beams are the equality case of the
    constraint, so the side has no room to move.
    """
    h_mat = _as_channel(h)
    if h_mat.shape != (cov_rx.n_elements, cov_tx.n_elements):
        raise ValueError(
            f"channel shape {h_mat.shape} does not match coverage specs "
            f"({cov_rx.n_elements} x {cov_tx.n_elements})"
        )

    # Projected-conjugate initialization; iterates stay unquantized until the
    # final projection.
    f_mat = np.stack(
        [project_weights(cov_tx.matrix[:, i], config.spec).weights for i in range(cov_tx.n_beams)],
        axis=1,
    )
    w_mat = np.stack(
        [project_weights(cov_rx.matrix[:, i], config.spec).weights for i in range(cov_rx.n_beams)],
        axis=1,
    )
    budget_tx = coverage_budget(cov_tx, config.sigma2_tx)
    budget_rx = coverage_budget(cov_rx, config.sigma2_rx)
    frozen_tx = config.sigma2_tx == 0.0
    frozen_rx = config.sigma2_rx == 0.0

    obj = _coupling(w_mat, h_mat, f_mat)
    init_obj = obj
    trace = [obj]
    lam_tx = lam_rx = config.lambda_init

    iterations = 0
    for _ in range(config.max_iters):
        iterations += 1
        prev = obj
        if not frozen_tx:
            b = w_mat.conj().T @ h_mat
            f_mat, obj, lam_tx, _ = _half_step(
                b.conj().T @ b, cov_tx, f_mat, obj, budget_tx, lam_tx
            )
        if not frozen_rx:
            c = h_mat @ f_mat
            w_mat, obj, lam_rx, _ = _half_step(c @ c.conj().T, cov_rx, w_mat, obj, budget_rx, lam_rx)
        trace.append(obj)
        if abs(prev - obj) <= config.tolerance * max(prev, 1e-30):
            break

    projection_jump_db = 0.0
    if config.spec is not None:
        f_q = np.stack(
            [project_weights(f_mat[:, i], config.spec).weights for i in range(f_mat.shape[1])],
            axis=1,
        )
        w_q = np.stack(
            [project_weights(w_mat[:, i], config.spec).weights for i in range(w_mat.shape[1])],
            axis=1,
        )
        obj_q = _coupling(w_q, h_mat, f_q)
        # jump relative to the unquantized optimum, clamped when either side
        # sits at a numerical null
        projection_jump_db = 10.0 * (
            math.log10(max(obj_q, 1e-300)) - math.log10(max(obj, 1e-300))
        )
        f_mat, w_mat, obj = f_q, w_q, obj_q

    fell_back = False
    if obj > init_obj:
        # The projected design lost to its own initialization; keep the baseline.
        f_mat = np.stack(
            [project_weights(cov_tx.matrix[:, i], config.spec).weights for i in range(cov_tx.n_beams)],
            axis=1,
        )
        w_mat = np.stack(
            [project_weights(cov_rx.matrix[:, i], config.spec).weights for i in range(cov_rx.n_beams)],
            axis=1,
        )
        obj = init_obj
        fell_back = True

    cov_tx_val = coverage_variance(f_mat, cov_tx)
    cov_rx_val = coverage_variance(w_mat, cov_rx)
    # Absolute slack covers float noise of the exact-conjugate equality case.
    feasible = (
        cov_tx_val <= budget_tx + 1e-9 * cov_tx.n_elements**2 * cov_tx.n_beams
        and cov_rx_val <= budget_rx + 1e-9 * cov_rx.n_elements**2 * cov_rx.n_beams
    )
    quantize = config.spec is not None
    return CodebookDesignResult(
        F=_to_codebook(f_mat, cov_tx.directions, config.spec, quantize),
        W=_to_codebook(w_mat, cov_rx.directions, config.spec, quantize),
        objective_trace=tuple(trace),
        coverage_tx=cov_tx_val,
        coverage_rx=cov_rx_val,
        feasible=feasible,
        projection_jump_db=projection_jump_db,
        fell_back_to_baseline=fell_back,
        iterations=iterations,
    )
