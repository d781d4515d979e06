"""Measurement-driven beam selection over spatial neighborhoods.

Starting from the beam-alignment directions, the selector probes transmit and
receive steering offsets inside a discretized spatial neighborhood, looking
for the pair that meets an INR constraint while deviating as little as
possible from the initial selections. The deviation is measured by the
squared sub-neighborhood radius r_theta^2 + r_phi^2 shared by both links; the
INR constraint is inr <= max(target, minimum over the full neighborhood), so
a solution always exists.

``steer_select`` expands the sub-neighborhood radius outward and stops at the
first feasible pair, measuring far fewer pairs than exhaustion whenever the
target is met early. ``brute_force_steer`` measures everything and solves the
same problem by enumeration; both use identical orderings, so their
selections match exactly.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .arrays import ArrayGeometry, Direction, PhaseShifterSpec, conjugate_beam
from .fd_link import FdScenarioLink, inr_rx_db, with_beams

__all__ = [
    "NeighborhoodSpec",
    "SteerResult",
    "InrMeasurer",
    "MapInrMeasurer",
    "FunctionInrMeasurer",
    "SimulatedInrMeasurer",
    "neighborhood_offsets",
    "steer_select",
    "brute_force_steer",
    "simulated_measurer",
    "fd_link_inr_surface",
    "write_inr_map_csv",
    "read_inr_map_csv",
]

_KEY_DECIMALS = 9


@dataclass(frozen=True)
class NeighborhoodSpec:
    """Spatial-neighborhood geometry: maximum deviations and measurement resolution.

    ``delta_*`` are the maximum absolute azimuthal/elevational deviations in
    degrees; ``res_*`` are the measurement resolutions, which may not exceed
    the corresponding deviation unless that deviation is zero.
    """

    delta_theta_deg: float
    delta_phi_deg: float
    res_theta_deg: float
    res_phi_deg: float

    def __post_init__(self) -> None:
        if self.delta_theta_deg < 0.0 or self.delta_phi_deg < 0.0:
            raise ValueError("maximum deviations must be >= 0")
        if not (self.res_theta_deg > 0.0 and self.res_phi_deg > 0.0):
            raise ValueError("resolutions must be > 0")
        if self.delta_theta_deg > 0.0 and self.res_theta_deg > self.delta_theta_deg:
            raise ValueError("res_theta_deg must not exceed delta_theta_deg")
        if self.delta_phi_deg > 0.0 and self.res_phi_deg > self.delta_phi_deg:
            raise ValueError("res_phi_deg must not exceed delta_phi_deg")


def _axis_offsets(delta: float, res: float) -> list[float]:
    steps = int(math.floor(delta / res + 1e-12))
    return [m * res for m in range(-steps, steps + 1)]


def neighborhood_offsets(spec: NeighborhoodSpec) -> list[tuple[float, float]]:
    """All (d_theta, d_phi) offsets of the neighborhood lattice.

    The lattice is the product of m * res_theta for |m| <= floor(delta/res)
    with the same in elevation, sorted by (d_theta^2 + d_phi^2, d_theta,
    d_phi) so the zero offset comes first.
    """
    offs = [
        (dt, dp)
        for dt in _axis_offsets(spec.delta_theta_deg, spec.res_theta_deg)
        for dp in _axis_offsets(spec.delta_phi_deg, spec.res_phi_deg)
    ]
    offs.sort(key=lambda o: (o[0] * o[0] + o[1] * o[1], o[0], o[1]))
    return offs


def _radius_lattice(spec: NeighborhoodSpec) -> list[tuple[float, float]]:
    """Candidate sub-neighborhood radii, ordered by increasing squared deviation."""
    radii = [
        (rt, rp)
        for rt in _axis_offsets(spec.delta_theta_deg, spec.res_theta_deg)
        if rt >= 0.0
        for rp in _axis_offsets(spec.delta_phi_deg, spec.res_phi_deg)
        if rp >= 0.0
    ]
    radii.sort(key=lambda r: (r[0] * r[0] + r[1] * r[1], r[0], r[1]))
    return radii


@dataclass(frozen=True)
class SteerResult:
    """Selected directions, their INR, and the cost of finding them.

    ``deviation`` is the attained sub-neighborhood radius (r_theta, r_phi);
    ``met_target`` is False when the full neighborhood had no pair at or
    below the target and the global minimum-INR pair was returned instead.
    """

    tx_dir: Direction
    rx_dir: Direction
    inr_db: float
    deviation: tuple[float, float]
    measurements_used: int
    met_target: bool

    @property
    def deviation_sq(self) -> float:
        return self.deviation[0] ** 2 + self.deviation[1] ** 2


class InrMeasurer(abc.ABC):
    """One measurement session: INR in dB for a (transmit, receive) direction pair.

    Results must be deterministic per pair within a session. ``calls`` counts
    the measurements taken.
    """

    def __init__(self) -> None:
        self.calls = 0

    def measure(self, tx_dir: Direction, rx_dir: Direction) -> float:
        self.calls += 1
        return self._measure(tx_dir, rx_dir)

    @abc.abstractmethod
    def _measure(self, tx_dir: Direction, rx_dir: Direction) -> float: ...


class FunctionInrMeasurer(InrMeasurer):
    """Measurer backed by an arbitrary deterministic function."""

    def __init__(self, fn: Callable[[Direction, Direction], float]):
        super().__init__()
        self._fn = fn

    def _measure(self, tx_dir: Direction, rx_dir: Direction) -> float:
        return float(self._fn(tx_dir, rx_dir))


def _circ_diff_deg(a: float, b: float) -> float:
    return (a - b + 180.0) % 360.0 - 180.0


def _offset_key(direction: Direction, initial: Direction) -> tuple[float, float]:
    return (
        round(_circ_diff_deg(direction.azimuth_deg, initial.azimuth_deg), _KEY_DECIMALS),
        round(direction.elevation_deg - initial.elevation_deg, _KEY_DECIMALS),
    )


def _round_off(off: tuple[float, float]) -> tuple[float, float]:
    return (round(off[0], _KEY_DECIMALS), round(off[1], _KEY_DECIMALS))


class MapInrMeasurer(InrMeasurer):
    """Measurer backed by a table of INR values keyed by (tx, rx) offset pairs.

    Offsets are degrees relative to the initial directions, the layout used
    by the CSV grid interchange format.
    """

    def __init__(
        self,
        initial_tx: Direction,
        initial_rx: Direction,
        table: dict[tuple[float, float, float, float], float],
    ):
        super().__init__()
        self.initial_tx = initial_tx
        self.initial_rx = initial_rx
        self.table = {
            (*_round_off(k[:2]), *_round_off(k[2:])): float(v) for k, v in table.items()
        }

    def _measure(self, tx_dir: Direction, rx_dir: Direction) -> float:
        key = _offset_key(tx_dir, self.initial_tx) + _offset_key(rx_dir, self.initial_rx)
        try:
            return self.table[key]
        except KeyError:
            raise ValueError(f"direction pair at offsets {key} is not in the INR map") from None


class SimulatedInrMeasurer(InrMeasurer):
    """Deterministic simulated measurements over a neighborhood.

    INR at each offset pair is a base surface plus an i.i.d. small-scale
    log-normal term (normal in dB, std ``sigma_db``). The full map is
    materialized lazily on first use, with draws assigned to offset pairs in
    canonical order, so values do not depend on query order and two sessions
    with the same seed observe the same map.
    """

    def __init__(
        self,
        initial_tx: Direction,
        initial_rx: Direction,
        spec: NeighborhoodSpec,
        base_inr_db: float | Callable[[Direction, Direction], float],
        sigma_db: float,
        seed: int,
    ):
        super().__init__()
        if sigma_db < 0.0:
            raise ValueError(f"sigma_db must be >= 0, got {sigma_db}")
        self.initial_tx = initial_tx
        self.initial_rx = initial_rx
        self.spec = spec
        self.base_inr_db = base_inr_db
        self.sigma_db = sigma_db
        self.seed = seed
        self._table: dict[tuple[float, float, float, float], float] | None = None

    def _base(self, tx_dir: Direction, rx_dir: Direction) -> float:
        if callable(self.base_inr_db):
            return float(self.base_inr_db(tx_dir, rx_dir))
        return float(self.base_inr_db)

    def _materialize(self) -> dict[tuple[float, float, float, float], float]:
        if self._table is None:
            offs = neighborhood_offsets(self.spec)
            draws = np.random.default_rng(self.seed).standard_normal(len(offs) ** 2)
            table = {}
            k = 0
            for to in offs:
                tx_dir = _shift(self.initial_tx, to)
                for ro in offs:
                    rx_dir = _shift(self.initial_rx, ro)
                    table[_round_off(to) + _round_off(ro)] = (
                        self._base(tx_dir, rx_dir) + self.sigma_db * float(draws[k])
                    )
                    k += 1
            self._table = table
        return self._table

    def _measure(self, tx_dir: Direction, rx_dir: Direction) -> float:
        key = _offset_key(tx_dir, self.initial_tx) + _offset_key(rx_dir, self.initial_rx)
        try:
            return self._materialize()[key]
        except KeyError:
            raise ValueError(f"direction pair at offsets {key} is outside the neighborhood") from None


def simulated_measurer(
    initial_tx: Direction,
    initial_rx: Direction,
    spec: NeighborhoodSpec,
    base_inr_db: float | Callable[[Direction, Direction], float],
    small_scale_sigma_db: float,
    seed: int,
) -> SimulatedInrMeasurer:
    """Convenience constructor for :class:`SimulatedInrMeasurer`."""
    return SimulatedInrMeasurer(initial_tx, initial_rx, spec, base_inr_db, small_scale_sigma_db, seed)


def fd_link_inr_surface(
    link: FdScenarioLink,
    tx_geometry: ArrayGeometry,
    rx_geometry: ArrayGeometry,
    spec: PhaseShifterSpec | None = None,
) -> Callable[[Direction, Direction], float]:
    """Base INR surface: self-interference of conjugate beams steered per query.

    Suitable as the ``base_inr_db`` of a simulated measurer; captures how the
    coupled SI varies as the beams deviate from their initial directions.
    """

    def surface(tx_dir: Direction, rx_dir: Direction) -> float:
        f = conjugate_beam(tx_geometry, tx_dir, spec)
        w = conjugate_beam(rx_geometry, rx_dir, spec)
        return inr_rx_db(with_beams(link, f, w))

    return surface


def _shift(initial: Direction, offset: tuple[float, float]) -> Direction:
    return Direction.wrapped(initial.azimuth_deg + offset[0], initial.elevation_deg + offset[1])


class _Prober:
    """Probe cache: measures each offset pair at most once per session."""

    def __init__(self, initial_tx: Direction, initial_rx: Direction, measurer: InrMeasurer):
        self.initial_tx = initial_tx
        self.initial_rx = initial_rx
        self.measurer = measurer
        self.cache: dict[tuple, float] = {}

    def probe(self, tx_off: tuple[float, float], rx_off: tuple[float, float]) -> float:
        key = (_round_off(tx_off), _round_off(rx_off))
        if key not in self.cache:
            self.cache[key] = self.measurer.measure(
                _shift(self.initial_tx, tx_off), _shift(self.initial_rx, rx_off)
            )
        return self.cache[key]

    @property
    def measurements(self) -> int:
        return len(self.cache)


def _result(
    prober: _Prober,
    tx_off: tuple[float, float],
    rx_off: tuple[float, float],
    inr_db: float,
    deviation: tuple[float, float],
    met_target: bool,
) -> SteerResult:
    return SteerResult(
        tx_dir=_shift(prober.initial_tx, tx_off),
        rx_dir=_shift(prober.initial_rx, rx_off),
        inr_db=inr_db,
        deviation=deviation,
        measurements_used=prober.measurements,
        met_target=met_target,
    )


def _argmin_pair(prober: _Prober, offsets: list[tuple[float, float]]):
    """Global minimum-INR pair over the full neighborhood, ties by scan order."""
    best = None
    for to in offsets:
        for ro in offsets:
            v = prober.probe(to, ro)
            if best is None or v < best[2]:
                best = (to, ro, v)
    return best


def _min_radius(tx_off: tuple[float, float], rx_off: tuple[float, float]) -> tuple[float, float]:
    return (max(abs(tx_off[0]), abs(rx_off[0])), max(abs(tx_off[1]), abs(rx_off[1])))


def steer_select(
    initial_tx: Direction,
    initial_rx: Direction,
    spec: NeighborhoodSpec,
    target_inr_db: float,
    measurer: InrMeasurer,
) -> SteerResult:
    """Minimal-deviation beam pair meeting the INR constraint.

    Expands the shared sub-neighborhood radius in increasing squared-deviation
    order and returns the first pair measured at or below the target (pair
    ties break by the canonical offset order, transmit before receive). If the
    full neighborhood holds no such pair, every pair has been measured and the
    global minimum-INR pair is returned with ``met_target`` False.
    """
    offsets = neighborhood_offsets(spec)
    prober = _Prober(initial_tx, initial_rx, measurer)
    for rt, rp in _radius_lattice(spec):
        sub = [o for o in offsets if abs(o[0]) <= rt + 1e-9 and abs(o[1]) <= rp + 1e-9]
        for to in sub:
            for ro in sub:
                v = prober.probe(to, ro)
                if v <= target_inr_db:
                    return _result(prober, to, ro, v, (rt, rp), True)
    to, ro, v = _argmin_pair(prober, offsets)
    return _result(prober, to, ro, v, _min_radius(to, ro), False)


def brute_force_steer(
    initial_tx: Direction,
    initial_rx: Direction,
    spec: NeighborhoodSpec,
    target_inr_db: float,
    measurer: InrMeasurer,
) -> SteerResult:
    """Oracle: measure every pair, then solve the selection problem exactly.

    Uses the same radius and pair orderings as ``steer_select``, so the two
    return identical selections; only the measurement count differs.
    """
    offsets = neighborhood_offsets(spec)
    prober = _Prober(initial_tx, initial_rx, measurer)
    for to in offsets:
        for ro in offsets:
            prober.probe(to, ro)
    for rt, rp in _radius_lattice(spec):
        sub = [o for o in offsets if abs(o[0]) <= rt + 1e-9 and abs(o[1]) <= rp + 1e-9]
        for to in sub:
            for ro in sub:
                if prober.probe(to, ro) <= target_inr_db:
                    return _result(prober, to, ro, prober.probe(to, ro), (rt, rp), True)
    to, ro, v = _argmin_pair(prober, offsets)
    return _result(prober, to, ro, v, _min_radius(to, ro), False)


_MAP_HEADER = "tx_dtheta_deg,tx_dphi_deg,rx_dtheta_deg,rx_dphi_deg,inr_db"


def write_inr_map_csv(path: str | Path, table: dict[tuple[float, float, float, float], float]) -> None:
    """Write an INR map as a CSV grid of offset pairs (degrees) and INR (dB)."""
    lines = [_MAP_HEADER]
    for key in sorted(table):
        lines.append(",".join(format(v, ".9g") for v in (*key, table[key])))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_inr_map_csv(path: str | Path) -> dict[tuple[float, float, float, float], float]:
    """Read an INR map written by :func:`write_inr_map_csv` (or measured externally)."""
    lines = Path(path).read_text(encoding="utf-8").strip().splitlines()
    if not lines or lines[0].strip() != _MAP_HEADER:
        raise ValueError(f"INR map must start with header {_MAP_HEADER!r}")
    table = {}
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 5:
            raise ValueError(f"malformed INR map row: {line!r}")
        vals = [float(p) for p in parts]
        table[(vals[0], vals[1], vals[2], vals[3])] = vals[4]
    return table
