"""Array geometry, steering vectors, and quantized analog beamforming weights.

Conventions: element positions are in wavelengths. A direction (azimuth,
elevation) in degrees maps to the unit vector
``(cos(el)*sin(az), cos(el)*cos(az), sin(el))``, so broadside of an array
laid out in the x-z plane is (0, 0). The steering vector toward a direction
has entries ``exp(+j*2*pi*<u, p_m>)``; all beam/channel pairings downstream
use the conjugating inner product ``a^H w``, so the gain-maximizing
("conjugate") beam toward a direction is the steering vector itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .link_math import DB_FLOOR

__all__ = [
    "ArrayGeometry",
    "Direction",
    "PhaseShifterSpec",
    "BeamWeights",
    "Codebook",
    "uniform_linear_array",
    "uniform_planar_array",
    "steering_vector",
    "phase_set",
    "project_weights",
    "conjugate_beam",
    "conjugate_codebook",
    "beamforming_gain",
]


@dataclass(frozen=True, eq=False)
class ArrayGeometry:
    """Antenna element positions, one (x, y, z) triple per element, in wavelengths."""

    element_positions: np.ndarray

    def __post_init__(self) -> None:
        pos = np.asarray(self.element_positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape[0] < 1:
            raise ValueError(f"element_positions must be (n, 3) with n >= 1, got {pos.shape}")
        if not np.all(np.isfinite(pos)):
            raise ValueError("element positions must be finite")
        object.__setattr__(self, "element_positions", pos)

    @property
    def n_elements(self) -> int:
        return self.element_positions.shape[0]


def uniform_linear_array(n: int, spacing_wavelengths: float = 0.5) -> ArrayGeometry:
    """Line array along the x (azimuth) axis, first element at the origin."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    pos = np.zeros((n, 3))
    pos[:, 0] = np.arange(n) * spacing_wavelengths
    return ArrayGeometry(pos)


def uniform_planar_array(n_rows: int, n_cols: int, spacing_wavelengths: float = 0.5) -> ArrayGeometry:
    """Planar array in the x-z plane: columns along x, rows along z, row-major order."""
    if n_rows < 1 or n_cols < 1:
        raise ValueError(f"rows and cols must be >= 1, got ({n_rows}, {n_cols})")
    rows, cols = np.meshgrid(np.arange(n_rows), np.arange(n_cols), indexing="ij")
    pos = np.zeros((n_rows * n_cols, 3))
    pos[:, 0] = cols.ravel() * spacing_wavelengths
    pos[:, 2] = rows.ravel() * spacing_wavelengths
    return ArrayGeometry(pos)


@dataclass(frozen=True)
class Direction:
    """Steering direction: azimuth in [-180, 180), elevation in [-90, 90], degrees."""

    azimuth_deg: float
    elevation_deg: float

    def __post_init__(self) -> None:
        if not -180.0 <= self.azimuth_deg < 180.0:
            raise ValueError(f"azimuth_deg must be in [-180, 180), got {self.azimuth_deg}")
        if not -90.0 <= self.elevation_deg <= 90.0:
            raise ValueError(f"elevation_deg must be in [-90, 90], got {self.elevation_deg}")

    @classmethod
    def wrapped(cls, azimuth_deg: float, elevation_deg: float) -> "Direction":
        """Construct with the azimuth wrapped into [-180, 180)."""
        az = (azimuth_deg + 180.0) % 360.0 - 180.0
        return cls(az, elevation_deg)

    def unit_vector(self) -> np.ndarray:
        az = math.radians(self.azimuth_deg)
        el = math.radians(self.elevation_deg)
        return np.array([math.cos(el) * math.sin(az), math.cos(el) * math.cos(az), math.sin(el)])


@dataclass(frozen=True)
class PhaseShifterSpec:
    """Quantized analog weight control.

    ``phase_bits`` gives 2**b uniformly spaced phase settings in [0, 2*pi).
    ``amplitude_bits`` = 0 means phase-only (unit-modulus) weights; when it is
    positive, the realizable magnitudes are the explicit ``amplitude_levels_db``
    gains (there is no standard attenuator step to default to).
    """

    phase_bits: int
    amplitude_bits: int = 0
    amplitude_levels_db: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.phase_bits < 1:
            raise ValueError(f"phase_bits must be >= 1, got {self.phase_bits}")
        if self.amplitude_bits < 0:
            raise ValueError(f"amplitude_bits must be >= 0, got {self.amplitude_bits}")
        if self.amplitude_bits > 0:
            levels = self.amplitude_levels_db
            if levels is None or not 1 <= len(levels) <= 2**self.amplitude_bits:
                raise ValueError(
                    "amplitude_bits > 0 requires 1..2**bits explicit amplitude_levels_db"
                )

    def amplitude_levels(self) -> np.ndarray | None:
        """Realizable magnitudes (linear), or None for phase-only control."""
        if self.amplitude_bits == 0:
            return None
        return 10.0 ** (np.asarray(self.amplitude_levels_db, dtype=float) / 20.0)


def phase_set(spec: PhaseShifterSpec) -> np.ndarray:
    """The realizable phase settings in radians: {i * 2*pi / 2**b}."""
    n = 2**spec.phase_bits
    return np.arange(n) * (2.0 * math.pi / n)


@dataclass(eq=False)
class BeamWeights:
    """Complex per-antenna weights plus the control spec they satisfy.

    ``spec`` None means unconstrained weights. ``zero_entries`` flags indices
    whose input magnitude was zero during projection (phase undefined; they
    were mapped to phase 0).
    """

    weights: np.ndarray
    spec: PhaseShifterSpec | None = None
    zero_entries: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=complex)
        if w.ndim != 1 or w.size < 1:
            raise ValueError(f"weights must be a non-empty vector, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        self.weights = w

    def __len__(self) -> int:
        return self.weights.size


@dataclass(eq=False)
class Codebook:
    """Ordered beams (columns of the codebook matrix) with optional direction labels."""

    beams: list[BeamWeights]
    labels: list[Direction] | None = None

    def __post_init__(self) -> None:
        if not self.beams:
            raise ValueError("codebook must contain at least one beam")
        n = len(self.beams[0])
        if any(len(b) != n for b in self.beams):
            raise ValueError("all beams in a codebook must have the same length")
        if self.labels is not None and len(self.labels) != len(self.beams):
            raise ValueError("labels must pair one direction with each beam")

    @property
    def n_beams(self) -> int:
        return len(self.beams)

    @property
    def n_elements(self) -> int:
        return len(self.beams[0])

    def matrix(self) -> np.ndarray:
        """Codebook as an (n_elements, n_beams) matrix, beam i in column i."""
        return np.stack([b.weights for b in self.beams], axis=1)


def steering_vector(geometry: ArrayGeometry, direction: Direction) -> np.ndarray:
    """Unit-modulus array response: entry m is exp(+j*2*pi*<u(dir), p_m>)."""
    phases = 2.0 * math.pi * (geometry.element_positions @ direction.unit_vector())
    return np.exp(1j * phases)


def project_weights(raw: np.ndarray, spec: PhaseShifterSpec | None) -> BeamWeights:
    """Snap raw weights onto the realizable set of a phase-shifter spec.

    Phases snap to the nearest realizable setting under the circular metric;
    magnitudes snap to the nearest realizable level (unit modulus when the
    spec is phase-only). ``spec`` None returns the weights unchanged.
    Zero-magnitude entries have no defined phase: they are mapped to phase 0
    and flagged in ``zero_entries``.
    """
    w = np.asarray(raw, dtype=complex)
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    if spec is None:
        return BeamWeights(w.copy(), None)

    zero = np.flatnonzero(w == 0)
    step = 2.0 * math.pi / 2**spec.phase_bits
    # Rounding the phase index is the circular nearest-neighbor for a uniform set.
    idx = np.round(np.angle(w) / step).astype(int) % 2**spec.phase_bits
    snapped_phase = idx * step

    levels = spec.amplitude_levels()
    if levels is None:
        mag = np.ones(w.size)
    else:
        mag = levels[np.argmin(np.abs(np.abs(w)[:, None] - levels[None, :]), axis=1)]
    return BeamWeights(mag * np.exp(1j * snapped_phase), spec, tuple(zero.tolist()))


def conjugate_beam(
    geometry: ArrayGeometry, direction: Direction, spec: PhaseShifterSpec | None = None
) -> BeamWeights:
    """Maximum-gain beam toward a direction, projected onto the realizable set.

    Under the a^H w pairing used throughout, the matched weights equal the
    steering vector itself.
    """
    return project_weights(steering_vector(geometry, direction), spec)


def conjugate_codebook(
    geometry: ArrayGeometry,
    directions: list[Direction],
    spec: PhaseShifterSpec | None = None,
) -> Codebook:
    """Codebook of matched beams, one per direction, labeled by those directions."""
    if not directions:
        raise ValueError("directions must be non-empty")
    return Codebook([conjugate_beam(geometry, d, spec) for d in directions], list(directions))


def beamforming_gain(
    weights: BeamWeights | np.ndarray, geometry: ArrayGeometry, direction: Direction
) -> float:
    """Array gain |a(dir)^H w|^2 in dB, clamped at the -300 dB reporting floor."""
    w = weights.weights if isinstance(weights, BeamWeights) else np.asarray(weights, dtype=complex)
    if w.shape != (geometry.n_elements,):
        raise ValueError(
            f"weights length {w.shape} does not match {geometry.n_elements} elements"
        )
    power = abs(np.vdot(steering_vector(geometry, direction), w)) ** 2
    if power == 0.0:
        return DB_FLOOR
    return max(10.0 * math.log10(power), DB_FLOOR)
