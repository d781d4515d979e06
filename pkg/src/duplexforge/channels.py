"""Channel generation: user channels, the MIMO self-interference channel, and
a log-normal INR model standing in for measured beam-pair statistics.

The spherical-wave model is the idealized near-field reference: entry (m, n)
couples transmit element n to receive element m with amplitude rho / r and
phase -2*pi*r, where r is their separation in wavelengths. Absolute SI power
is controlled downstream through link budgets, not baked into the matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arrays import ArrayGeometry, Direction, steering_vector

__all__ = [
    "UserChannel",
    "CrossLinkChannel",
    "SiChannel",
    "ArrayPose",
    "LogNormalInrModel",
    "DEFAULT_PANEL_SEPARATION_WAVELENGTHS",
    "rotation_zyx_deg",
    "los_user_channel",
    "spherical_wave_si_channel",
    "rayleigh_si_channel",
    "sample_inr_db",
    "cross_link_channel",
]

# Two-panel transceiver default: receive array coplanar with the transmit
# array, offset along the azimuth axis. Order of a small-cell platform's
# panel separation at 28 GHz.
DEFAULT_PANEL_SEPARATION_WAVELENGTHS = 10.0


@dataclass(eq=False)
class UserChannel:
    """Channel vector between one array and a single-antenna user."""

    coefficients: np.ndarray
    description: str = ""

    def __post_init__(self) -> None:
        c = np.asarray(self.coefficients, dtype=complex)
        if c.ndim != 1 or not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be a finite complex vector")
        self.coefficients = c


@dataclass(frozen=True)
class CrossLinkChannel:
    """Scalar channel from the uplink user to the downlink user."""

    coefficient: complex

    def __post_init__(self) -> None:
        if not (math.isfinite(self.coefficient.real) and math.isfinite(self.coefficient.imag)):
            raise ValueError("coefficient must be finite")


@dataclass(eq=False)
class SiChannel:
    """N_rx x N_tx self-interference channel between the two arrays."""

    matrix: np.ndarray
    model_tag: str = "custom"

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or not np.all(np.isfinite(m)):
            raise ValueError("matrix must be a finite 2-D complex array")
        if self.model_tag not in ("spherical_wave", "rayleigh", "custom"):
            raise ValueError(f"unknown model_tag {self.model_tag!r}")
        self.matrix = m

    @property
    def n_rx(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_tx(self) -> int:
        return self.matrix.shape[1]


def rotation_zyx_deg(yaw_deg: float, pitch_deg: float, roll_deg: float) -> np.ndarray:
    """Rotation matrix from intrinsic z-y-x Euler angles in degrees."""
    cz, sz = math.cos(math.radians(yaw_deg)), math.sin(math.radians(yaw_deg))
    cy, sy = math.cos(math.radians(pitch_deg)), math.sin(math.radians(pitch_deg))
    cx, sx = math.cos(math.radians(roll_deg)), math.sin(math.radians(roll_deg))
    rz = np.array([[cz, -sz, 0.0], [sz, cz, 0.0], [0.0, 0.0, 1.0]])
    ry = np.array([[cy, 0.0, sy], [0.0, 1.0, 0.0], [-sy, 0.0, cy]])
    rx = np.array([[1.0, 0.0, 0.0], [0.0, cx, -sx], [0.0, sx, cx]])
    return rz @ ry @ rx


@dataclass(eq=False)
class ArrayPose:
    """Rigid placement of the receive array relative to the transmit array.

    Receive element positions in the transmit frame are R @ p + t, with t in
    wavelengths.
    """

    translation: np.ndarray = field(
        default_factory=lambda: np.array([DEFAULT_PANEL_SEPARATION_WAVELENGTHS, 0.0, 0.0])
    )
    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self) -> None:
        t = np.asarray(self.translation, dtype=float)
        r = np.asarray(self.rotation, dtype=float)
        if t.shape != (3,) or not np.all(np.isfinite(t)):
            raise ValueError("translation must be a finite 3-vector")
        if r.shape != (3, 3) or not np.allclose(r @ r.T, np.eye(3), atol=1e-9):
            raise ValueError("rotation must be a 3x3 orthonormal matrix")
        self.translation = t
        self.rotation = r

    def inverse(self) -> "ArrayPose":
        """The pose of the transmit array as seen from the receive array frame."""
        rt = self.rotation.T
        return ArrayPose(-(rt @ self.translation), rt)


@dataclass(frozen=True)
class LogNormalInrModel:
    """INR across measured beam pairs is normal in dB: mean mu_db, std sigma_db.

    The defaults are calibrated stand-ins (about 2.3% of pairs at or below
    the noise floor); they are not fitted to any published measurement.
    """

    mu_db: float = 20.0
    sigma_db: float = 10.0

    def __post_init__(self) -> None:
        if self.sigma_db < 0.0:
            raise ValueError(f"sigma_db must be >= 0, got {self.sigma_db}")


def los_user_channel(geometry: ArrayGeometry, direction: Direction, gain_db: float) -> UserChannel:
    """Line-of-sight ray toward a user: scaled steering vector.

    ``gain_db`` is a per-element amplitude gain (20*log10 domain), so the
    channel norm squared is n_elements * 10**(gain_db / 10).
    """
    amp = 10.0 ** (gain_db / 20.0)
    return UserChannel(
        amp * steering_vector(geometry, direction),
        f"los az={direction.azimuth_deg} el={direction.elevation_deg} gain={gain_db}dB",
    )


def spherical_wave_si_channel(
    tx_geometry: ArrayGeometry,
    rx_geometry: ArrayGeometry,
    pose: ArrayPose | None = None,
    rho: float = 1.0,
) -> SiChannel:
    """Idealized near-field SI channel: H[m, n] = (rho / r_mn) * exp(-j*2*pi*r_mn)."""
    if pose is None:
        pose = ArrayPose()
    rx_world = rx_geometry.element_positions @ pose.rotation.T + pose.translation
    diff = rx_world[:, None, :] - tx_geometry.element_positions[None, :, :]
    r = np.linalg.norm(diff, axis=2)
    if np.any(r == 0.0):
        raise ValueError("coincident transmit/receive elements (r = 0) in spherical-wave model")
    return SiChannel((rho / r) * np.exp(-2j * math.pi * r), "spherical_wave")


def rayleigh_si_channel(n_rx: int, n_tx: int, seed: int) -> SiChannel:
    """I.i.d. circularly-symmetric complex normal entries with unit variance."""
    rng = np.random.default_rng(seed)
    h = (rng.standard_normal((n_rx, n_tx)) + 1j * rng.standard_normal((n_rx, n_tx))) / math.sqrt(2.0)
    return SiChannel(h, "rayleigh")


def sample_inr_db(model: LogNormalInrModel, n: int, seed: int) -> np.ndarray:
    """Draw n i.i.d. INR values in dB from the log-normal model."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    return model.mu_db + model.sigma_db * rng.standard_normal(n)


def cross_link_channel(distance_gain_db: float, seed: int) -> CrossLinkChannel:
    """Cross-link scalar with magnitude 10**(gain/20) and uniform random phase."""
    rng = np.random.default_rng(seed)
    phase = rng.uniform(0.0, 2.0 * math.pi)
    return CrossLinkChannel(complex(10.0 ** (distance_gain_db / 20.0) * np.exp(1j * phase)))
