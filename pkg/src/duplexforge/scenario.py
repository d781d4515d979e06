"""Declarative experiment scenarios.

A scenario file is plain text, one ``key = value`` per line with dotted
section paths (``arrays.tx.n_cols = 16``), ``#`` comments, and UTF-8 text.
Unknown keys are rejected, and validation reports every problem found, not
just the first. Angles are degrees, powers dBm, gains dB; linear values
exist only inside the toolkit.

The experiment blocks (``region``, ``sic``, ``codebook``, ``steer``) are
optional; a block exists once any of its keys appears. All randomness is
derived from ``master_seed`` via :func:`derive_seed`, which is required
whenever a stochastic component is configured.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .arrays import ArrayGeometry, Direction, PhaseShifterSpec, uniform_planar_array
from .channels import (
    ArrayPose,
    CrossLinkChannel,
    SiChannel,
    cross_link_channel,
    los_user_channel,
    rotation_zyx_deg,
    spherical_wave_si_channel,
    rayleigh_si_channel,
)
from .errors import ScenarioError
from .fd_link import FdScenarioLink
from .seeding import derive_seed

__all__ = [
    "Scenario",
    "ArrayConfig",
    "PoseConfig",
    "PhaseShifterConfig",
    "ChannelsConfig",
    "BudgetsConfig",
    "RegionConfig",
    "SicConfig",
    "CodebookConfig",
    "SteerConfig",
    "derive_seed",
    "load_scenario",
    "load_scenario_file",
    "dumps",
    "build_tx_geometry",
    "build_rx_geometry",
    "build_pose",
    "build_phase_spec",
    "build_si_channel",
    "build_link_context",
]


@dataclass(frozen=True)
class ArrayConfig:
    n_rows: int = 4
    n_cols: int = 4
    spacing_wavelengths: float = 0.5

    @property
    def n_elements(self) -> int:
        return self.n_rows * self.n_cols


@dataclass(frozen=True)
class PoseConfig:
    translation_wavelengths: tuple[float, float, float] = (10.0, 0.0, 0.0)
    rotation_zyx_deg: tuple[float, float, float] = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class PhaseShifterConfig:
    phase_bits: int = 6
    amplitude_bits: int = 0
    amplitude_levels_db: tuple[float, ...] | None = None


@dataclass(frozen=True)
class ChannelsConfig:
    si_model: str = "spherical_wave"
    rho: float = 1.0
    tx_direction_deg: tuple[float, float] = (0.0, 0.0)
    rx_direction_deg: tuple[float, float] = (0.0, 0.0)
    tx_gain_db: float = 0.0
    rx_gain_db: float = 0.0
    cross_link_gain_db: float = -math.inf


@dataclass(frozen=True)
class BudgetsConfig:
    p_bs_dbm: float = 0.0
    p_ue_dbm: float = 0.0
    n_bs_dbm: float = 0.0
    n_ue_dbm: float = 0.0


@dataclass(frozen=True)
class RegionConfig:
    snr_tx_db: float
    snr_rx_db: float
    n_points: int = 51
    inr_tx_levels_db: tuple[float, ...] = (-math.inf,)
    inr_rx_levels_db: tuple[float, ...] = (-math.inf,)


@dataclass(frozen=True)
class SicConfig:
    n_taps: int
    tap_delay_s: float
    sample_period_s: float
    n_samples: int
    true_n_taps: int | None = None
    noise_db: float = -math.inf


@dataclass(frozen=True)
class CodebookConfig:
    n_beams_tx: int
    n_beams_rx: int
    az_min_deg: float = -60.0
    az_max_deg: float = 60.0
    sigma2_tx: float = 0.1
    sigma2_rx: float = 0.1
    max_iters: int = 200
    tolerance: float = 1e-6
    quantize: bool = False
    n_tx: int | None = None
    n_rx: int | None = None


@dataclass(frozen=True)
class SteerConfig:
    delta_theta_deg: float = 2.0
    delta_phi_deg: float = 2.0
    res_theta_deg: float = 1.0
    res_phi_deg: float = 1.0
    target_inr_db: float = 0.0
    trials: int = 100
    small_scale_sigma_db: float = 10.0
    base_model: str = "flat"
    flat_base_inr_db: float = 20.0
    initial_tx_deg: tuple[float, float] = (0.0, 0.0)
    initial_rx_deg: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class Scenario:
    master_seed: int | None = None
    tx_array: ArrayConfig = ArrayConfig()
    rx_array: ArrayConfig = ArrayConfig()
    pose: PoseConfig = PoseConfig()
    phase_shifters: PhaseShifterConfig = PhaseShifterConfig()
    channels: ChannelsConfig = ChannelsConfig()
    budgets: BudgetsConfig = BudgetsConfig()
    region: RegionConfig | None = None
    sic: SicConfig | None = None
    codebook: CodebookConfig | None = None
    steer: SteerConfig | None = None


# Schema: path -> (value kind, constraint tag). Kinds: int, float, floats,
# pair, triple, bool, str:<choices>.
_SCHEMA: dict[str, tuple[str, str]] = {
    "master_seed": ("int", "u64"),
    "arrays.tx.n_rows": ("int", "ge1"),
    "arrays.tx.n_cols": ("int", "ge1"),
    "arrays.tx.spacing_wavelengths": ("float", "pos"),
    "arrays.rx.n_rows": ("int", "ge1"),
    "arrays.rx.n_cols": ("int", "ge1"),
    "arrays.rx.spacing_wavelengths": ("float", "pos"),
    "arrays.pose.translation_wavelengths": ("triple", ""),
    "arrays.pose.rotation_zyx_deg": ("triple", ""),
    "phase_shifters.phase_bits": ("int", "ge1"),
    "phase_shifters.amplitude_bits": ("int", "ge0"),
    "phase_shifters.amplitude_levels_db": ("floats", ""),
    "channels.si.model": ("str:spherical_wave|rayleigh|none", ""),
    "channels.si.rho": ("float", "pos"),
    "channels.users.tx_direction_deg": ("pair", ""),
    "channels.users.rx_direction_deg": ("pair", ""),
    "channels.users.tx_gain_db": ("float", ""),
    "channels.users.rx_gain_db": ("float", ""),
    "channels.cross_link_gain_db": ("float", ""),
    "budgets.p_bs_dbm": ("float", ""),
    "budgets.p_ue_dbm": ("float", ""),
    "budgets.n_bs_dbm": ("float", ""),
    "budgets.n_ue_dbm": ("float", ""),
    "region.snr_tx_db": ("float", ""),
    "region.snr_rx_db": ("float", ""),
    "region.n_points": ("int", "ge2"),
    "region.inr_tx_levels_db": ("floats", ""),
    "region.inr_rx_levels_db": ("floats", ""),
    "sic.n_taps": ("int", "ge1"),
    "sic.tap_delay_s": ("float", "pos"),
    "sic.sample_period_s": ("float", "pos"),
    "sic.n_samples": ("int", "ge1"),
    "sic.true_n_taps": ("int", "ge1"),
    "sic.noise_db": ("float", ""),
    "codebook.n_beams_tx": ("int", "ge1"),
    "codebook.n_beams_rx": ("int", "ge1"),
    "codebook.az_min_deg": ("float", ""),
    "codebook.az_max_deg": ("float", ""),
    "codebook.sigma2_tx": ("float", "ge0f"),
    "codebook.sigma2_rx": ("float", "ge0f"),
    "codebook.max_iters": ("int", "ge1"),
    "codebook.tolerance": ("float", "pos"),
    "codebook.quantize": ("bool", ""),
    "codebook.n_tx": ("int", "ge1"),
    "codebook.n_rx": ("int", "ge1"),
    "steer.delta_theta_deg": ("float", "ge0f"),
    "steer.delta_phi_deg": ("float", "ge0f"),
    "steer.res_theta_deg": ("float", "pos"),
    "steer.res_phi_deg": ("float", "pos"),
    "steer.target_inr_db": ("float", ""),
    "steer.trials": ("int", "ge1"),
    "steer.small_scale_sigma_db": ("float", "ge0f"),
    "steer.base_model": ("str:flat|fd_link", ""),
    "steer.flat_base_inr_db": ("float", ""),
    "steer.initial_tx_deg": ("pair", ""),
    "steer.initial_rx_deg": ("pair", ""),
}

_REQUIRED_IN_BLOCK = {
    "region": ("region.snr_tx_db", "region.snr_rx_db"),
    "sic": ("sic.n_taps", "sic.tap_delay_s", "sic.sample_period_s", "sic.n_samples"),
    "codebook": ("codebook.n_beams_tx", "codebook.n_beams_rx"),
    "steer": (),
}


def _parse_float(token: str) -> float:
    v = float(token)
    if math.isnan(v):
        raise ValueError("nan is not allowed")
    return v


def _parse_value(kind: str, raw: str):
    if kind == "int":
        return int(raw)
    if kind == "float":
        return _parse_float(raw)
    if kind == "bool":
        low = raw.strip().lower()
        if low in ("true", "yes", "on", "1"):
            return True
        if low in ("false", "no", "off", "0"):
            return False
        raise ValueError(f"expected a boolean, got {raw!r}")
    if kind in ("floats", "pair", "triple"):
        vals = tuple(_parse_float(t.strip()) for t in raw.split(",") if t.strip())
        if kind == "pair" and len(vals) != 2:
            raise ValueError(f"expected 2 comma-separated values, got {len(vals)}")
        if kind == "triple" and len(vals) != 3:
            raise ValueError(f"expected 3 comma-separated values, got {len(vals)}")
        if kind == "floats" and not vals:
            raise ValueError("expected at least one value")
        return vals
    if kind.startswith("str:"):
        choices = kind[4:].split("|")
        if raw not in choices:
            raise ValueError(f"expected one of {choices}, got {raw!r}")
        return raw
    raise AssertionError(f"unknown schema kind {kind}")


def _check_constraint(tag: str, value) -> str | None:
    if tag == "ge1" and value < 1:
        return "must be >= 1"
    if tag == "ge2" and value < 2:
        return "must be >= 2"
    if tag == "ge0" and value < 0:
        return "must be >= 0"
    if tag == "ge0f" and value < 0.0:
        return "must be >= 0"
    if tag == "pos" and not value > 0.0:
        return "must be > 0"
    if tag == "u64" and not 0 <= value < 2**64:
        return "must fit in a u64"
    return None


def _parse_lines(text: str) -> tuple[dict[str, object], list[str]]:
    values: dict[str, object] = {}
    errors: list[str] = []
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value', got {raw_line.strip()!r}")
            continue
        key, _, raw = line.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in _SCHEMA:
            errors.append(f"line {lineno}: unknown key {key!r}")
            continue
        if key in values:
            errors.append(f"line {lineno}: duplicate key {key!r}")
            continue
        kind, tag = _SCHEMA[key]
        try:
            value = _parse_value(kind, raw)
        except ValueError as exc:
            errors.append(f"line {lineno}: {key}: {exc}")
            continue
        problem = _check_constraint(tag, value)
        if problem:
            errors.append(f"line {lineno}: {key}: {problem}")
            continue
        values[key] = value
    return values, errors


_BLOCK_FIELD_MAP = {
    "region": {
        "region.snr_tx_db": "snr_tx_db",
        "region.snr_rx_db": "snr_rx_db",
        "region.n_points": "n_points",
        "region.inr_tx_levels_db": "inr_tx_levels_db",
        "region.inr_rx_levels_db": "inr_rx_levels_db",
    },
    "sic": {
        "sic.n_taps": "n_taps",
        "sic.tap_delay_s": "tap_delay_s",
        "sic.sample_period_s": "sample_period_s",
        "sic.n_samples": "n_samples",
        "sic.true_n_taps": "true_n_taps",
        "sic.noise_db": "noise_db",
    },
    "codebook": {
        "codebook.n_beams_tx": "n_beams_tx",
        "codebook.n_beams_rx": "n_beams_rx",
        "codebook.az_min_deg": "az_min_deg",
        "codebook.az_max_deg": "az_max_deg",
        "codebook.sigma2_tx": "sigma2_tx",
        "codebook.sigma2_rx": "sigma2_rx",
        "codebook.max_iters": "max_iters",
        "codebook.tolerance": "tolerance",
        "codebook.quantize": "quantize",
        "codebook.n_tx": "n_tx",
        "codebook.n_rx": "n_rx",
    },
    "steer": {
        "steer.delta_theta_deg": "delta_theta_deg",
        "steer.delta_phi_deg": "delta_phi_deg",
        "steer.res_theta_deg": "res_theta_deg",
        "steer.res_phi_deg": "res_phi_deg",
        "steer.target_inr_db": "target_inr_db",
        "steer.trials": "trials",
        "steer.small_scale_sigma_db": "small_scale_sigma_db",
        "steer.base_model": "base_model",
        "steer.flat_base_inr_db": "flat_base_inr_db",
        "steer.initial_tx_deg": "initial_tx_deg",
        "steer.initial_rx_deg": "initial_rx_deg",
    },
}

_BLOCK_TYPES = {
    "region": RegionConfig,
    "sic": SicConfig,
    "codebook": CodebookConfig,
    "steer": SteerConfig,
}


def _build_block(block: str, values: dict[str, object], errors: list[str]):
    present = any(k.startswith(block + ".") for k in values)
    if not present:
        return None
    missing = [k for k in _REQUIRED_IN_BLOCK[block] if k not in values]
    if missing:
        errors.extend(f"{k}: required when the {block} block is present" for k in missing)
        return None
    kwargs = {
        field: values[key] for key, field in _BLOCK_FIELD_MAP[block].items() if key in values
    }
    return _BLOCK_TYPES[block](**kwargs)


def _validate_direction(name: str, pair: tuple[float, float], errors: list[str]) -> None:
    az, el = pair
    if not -180.0 <= az < 180.0:
        errors.append(f"{name}: azimuth must be in [-180, 180), got {az}")
    if not -90.0 <= el <= 90.0:
        errors.append(f"{name}: elevation must be in [-90, 90], got {el}")


def _cross_validate(sc: Scenario, errors: list[str]) -> None:
    ps = sc.phase_shifters
    if ps.amplitude_bits > 0:
        levels = ps.amplitude_levels_db
        if levels is None or not 1 <= len(levels) <= 2**ps.amplitude_bits:
            errors.append(
                "phase_shifters.amplitude_levels_db: required (1..2**bits values) "
                "when amplitude_bits > 0"
            )

    _validate_direction("channels.users.tx_direction_deg", sc.channels.tx_direction_deg, errors)
    _validate_direction("channels.users.rx_direction_deg", sc.channels.rx_direction_deg, errors)

    if sc.region is not None:
        if len(sc.region.inr_tx_levels_db) != len(sc.region.inr_rx_levels_db):
            errors.append(
                "region.inr_tx_levels_db and region.inr_rx_levels_db must pair up "
                f"({len(sc.region.inr_tx_levels_db)} vs {len(sc.region.inr_rx_levels_db)} levels)"
            )
        if not math.isfinite(sc.region.snr_tx_db):
            errors.append("region.snr_tx_db: must be finite")
        if not math.isfinite(sc.region.snr_rx_db):
            errors.append("region.snr_rx_db: must be finite")

    if sc.sic is not None:
        cfg = sc.sic
        if cfg.n_samples < cfg.n_taps:
            errors.append(f"sic.n_samples: must be >= sic.n_taps ({cfg.n_samples} < {cfg.n_taps})")
        taps = max(cfg.n_taps, cfg.true_n_taps or cfg.n_taps)
        span = (taps - 1) * cfg.tap_delay_s / cfg.sample_period_s
        if span >= cfg.n_samples:
            errors.append(
                f"sic: tap span of {span:g} samples does not fit in n_samples = {cfg.n_samples}"
            )

    if sc.codebook is not None:
        cb = sc.codebook
        if cb.az_min_deg >= cb.az_max_deg:
            errors.append("codebook.az_min_deg must be < codebook.az_max_deg")
        if cb.n_tx is not None and cb.n_tx != sc.tx_array.n_elements:
            errors.append(
                f"codebook.n_tx: declared {cb.n_tx} but tx array has "
                f"{sc.tx_array.n_elements} elements"
            )
        if cb.n_rx is not None and cb.n_rx != sc.rx_array.n_elements:
            errors.append(
                f"codebook.n_rx: declared {cb.n_rx} but rx array has "
                f"{sc.rx_array.n_elements} elements"
            )

    if sc.steer is not None:
        st = sc.steer
        if st.delta_theta_deg > 0.0 and st.res_theta_deg > st.delta_theta_deg:
            errors.append("steer.res_theta_deg must not exceed steer.delta_theta_deg")
        if st.delta_phi_deg > 0.0 and st.res_phi_deg > st.delta_phi_deg:
            errors.append("steer.res_phi_deg must not exceed steer.delta_phi_deg")
        _validate_direction("steer.initial_tx_deg", st.initial_tx_deg, errors)
        _validate_direction("steer.initial_rx_deg", st.initial_rx_deg, errors)
        for name, pair in (
            ("steer.initial_tx_deg", st.initial_tx_deg),
            ("steer.initial_rx_deg", st.initial_rx_deg),
        ):
            if abs(pair[1]) + st.delta_phi_deg > 90.0:
                errors.append(f"{name}: elevation neighborhood leaves [-90, 90]")

    needs_seed = (
        sc.channels.si_model == "rayleigh"
        or sc.channels.cross_link_gain_db != -math.inf
        or sc.sic is not None
        or sc.steer is not None
    )
    if needs_seed and sc.master_seed is None:
        errors.append("master_seed: required because the scenario has stochastic components")


def load_scenario(text: str) -> Scenario:
    """Parse and validate a scenario; raises ScenarioError listing every problem."""
    values, errors = _parse_lines(text)

    tx = ArrayConfig(
        n_rows=values.get("arrays.tx.n_rows", 4),
        n_cols=values.get("arrays.tx.n_cols", 4),
        spacing_wavelengths=values.get("arrays.tx.spacing_wavelengths", 0.5),
    )
    rx = ArrayConfig(
        n_rows=values.get("arrays.rx.n_rows", 4),
        n_cols=values.get("arrays.rx.n_cols", 4),
        spacing_wavelengths=values.get("arrays.rx.spacing_wavelengths", 0.5),
    )
    pose = PoseConfig(
        translation_wavelengths=values.get("arrays.pose.translation_wavelengths", (10.0, 0.0, 0.0)),
        rotation_zyx_deg=values.get("arrays.pose.rotation_zyx_deg", (0.0, 0.0, 0.0)),
    )
    ps = PhaseShifterConfig(
        phase_bits=values.get("phase_shifters.phase_bits", 6),
        amplitude_bits=values.get("phase_shifters.amplitude_bits", 0),
        amplitude_levels_db=values.get("phase_shifters.amplitude_levels_db"),
    )
    ch = ChannelsConfig(
        si_model=values.get("channels.si.model", "spherical_wave"),
        rho=values.get("channels.si.rho", 1.0),
        tx_direction_deg=values.get("channels.users.tx_direction_deg", (0.0, 0.0)),
        rx_direction_deg=values.get("channels.users.rx_direction_deg", (0.0, 0.0)),
        tx_gain_db=values.get("channels.users.tx_gain_db", 0.0),
        rx_gain_db=values.get("channels.users.rx_gain_db", 0.0),
        cross_link_gain_db=values.get("channels.cross_link_gain_db", -math.inf),
    )
    budgets = BudgetsConfig(
        p_bs_dbm=values.get("budgets.p_bs_dbm", 0.0),
        p_ue_dbm=values.get("budgets.p_ue_dbm", 0.0),
        n_bs_dbm=values.get("budgets.n_bs_dbm", 0.0),
        n_ue_dbm=values.get("budgets.n_ue_dbm", 0.0),
    )
    sc = Scenario(
        master_seed=values.get("master_seed"),
        tx_array=tx,
        rx_array=rx,
        pose=pose,
        phase_shifters=ps,
        channels=ch,
        budgets=budgets,
        region=_build_block("region", values, errors),
        sic=_build_block("sic", values, errors),
        codebook=_build_block("codebook", values, errors),
        steer=_build_block("steer", values, errors),
    )
    _cross_validate(sc, errors)
    if errors:
        raise ScenarioError(errors)
    return sc


def load_scenario_file(path: str | Path) -> Scenario:
    return load_scenario(Path(path).read_text(encoding="utf-8"))


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dumps(sc: Scenario) -> str:
    """Serialize a scenario to config text; load(dumps(sc)) == sc."""
    lines = []
    if sc.master_seed is not None:
        lines.append(f"master_seed = {sc.master_seed}")
    for prefix, cfg in (("arrays.tx", sc.tx_array), ("arrays.rx", sc.rx_array)):
        lines.append(f"{prefix}.n_rows = {cfg.n_rows}")
        lines.append(f"{prefix}.n_cols = {cfg.n_cols}")
        lines.append(f"{prefix}.spacing_wavelengths = {_format_value(cfg.spacing_wavelengths)}")
    lines.append(
        "arrays.pose.translation_wavelengths = "
        + _format_value(sc.pose.translation_wavelengths)
    )
    lines.append("arrays.pose.rotation_zyx_deg = " + _format_value(sc.pose.rotation_zyx_deg))
    lines.append(f"phase_shifters.phase_bits = {sc.phase_shifters.phase_bits}")
    lines.append(f"phase_shifters.amplitude_bits = {sc.phase_shifters.amplitude_bits}")
    if sc.phase_shifters.amplitude_levels_db is not None:
        lines.append(
            "phase_shifters.amplitude_levels_db = "
            + _format_value(sc.phase_shifters.amplitude_levels_db)
        )
    lines.append(f"channels.si.model = {sc.channels.si_model}")
    lines.append(f"channels.si.rho = {_format_value(sc.channels.rho)}")
    lines.append("channels.users.tx_direction_deg = " + _format_value(sc.channels.tx_direction_deg))
    lines.append("channels.users.rx_direction_deg = " + _format_value(sc.channels.rx_direction_deg))
    lines.append(f"channels.users.tx_gain_db = {_format_value(sc.channels.tx_gain_db)}")
    lines.append(f"channels.users.rx_gain_db = {_format_value(sc.channels.rx_gain_db)}")
    lines.append(f"channels.cross_link_gain_db = {_format_value(sc.channels.cross_link_gain_db)}")
    for field in fields(BudgetsConfig):
        lines.append(f"budgets.{field.name} = {_format_value(getattr(sc.budgets, field.name))}")
    for block in ("region", "sic", "codebook", "steer"):
        cfg = getattr(sc, block)
        if cfg is None:
            continue
        for key, field_name in _BLOCK_FIELD_MAP[block].items():
            value = getattr(cfg, field_name)
            if value is None:
                continue
            lines.append(f"{key} = {_format_value(value)}")
    return "\n".join(lines) + "\n"


def build_tx_geometry(sc: Scenario) -> ArrayGeometry:
    return uniform_planar_array(sc.tx_array.n_rows, sc.tx_array.n_cols, sc.tx_array.spacing_wavelengths)


def build_rx_geometry(sc: Scenario) -> ArrayGeometry:
    return uniform_planar_array(sc.rx_array.n_rows, sc.rx_array.n_cols, sc.rx_array.spacing_wavelengths)


def build_pose(sc: Scenario) -> ArrayPose:
    return ArrayPose(
        np.asarray(sc.pose.translation_wavelengths, dtype=float),
        rotation_zyx_deg(*sc.pose.rotation_zyx_deg),
    )


def build_phase_spec(sc: Scenario) -> PhaseShifterSpec:
    ps = sc.phase_shifters
    return PhaseShifterSpec(ps.phase_bits, ps.amplitude_bits, ps.amplitude_levels_db)


def build_si_channel(sc: Scenario) -> SiChannel:
    model = sc.channels.si_model
    if model == "spherical_wave":
        return spherical_wave_si_channel(
            build_tx_geometry(sc), build_rx_geometry(sc), build_pose(sc), sc.channels.rho
        )
    if model == "rayleigh":
        return rayleigh_si_channel(
            sc.rx_array.n_elements,
            sc.tx_array.n_elements,
            derive_seed(sc.master_seed, "si"),
        )
    return SiChannel(
        np.zeros((sc.rx_array.n_elements, sc.tx_array.n_elements), dtype=complex), "custom"
    )


def build_link_context(sc: Scenario) -> FdScenarioLink:
    """Beamless link context binding the scenario's channels and budgets."""
    ch = sc.channels
    h_tx = los_user_channel(build_tx_geometry(sc), Direction(*ch.tx_direction_deg), ch.tx_gain_db)
    h_rx = los_user_channel(build_rx_geometry(sc), Direction(*ch.rx_direction_deg), ch.rx_gain_db)
    if ch.cross_link_gain_db == -math.inf:
        h_cl = CrossLinkChannel(0j)
    else:
        h_cl = cross_link_channel(ch.cross_link_gain_db, derive_seed(sc.master_seed, "cross-link"))
    return FdScenarioLink(
        f=None,
        w=None,
        h_tx=h_tx,
        h_rx=h_rx,
        h_cl=h_cl,
        si=build_si_channel(sc),
        p_bs_dbm=sc.budgets.p_bs_dbm,
        p_ue_dbm=sc.budgets.p_ue_dbm,
        n_bs_dbm=sc.budgets.n_bs_dbm,
        n_ue_dbm=sc.budgets.n_ue_dbm,
    )
