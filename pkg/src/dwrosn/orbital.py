"""Circular Walker-Delta orbit propagation and line-of-sight checks (ECI frame)."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

EARTH_RADIUS_KM = 6378.137
CLEARANCE_KM = 100.0


class Layer(str, enum.Enum):
    LEO = "LEO"
    GEO = "GEO"


@dataclass(frozen=True)
class LayerSpec:
    """One Walker-Delta shell ``T/P/F:h:I`` with an explicit orbital period."""

    layer: Layer
    total_sats: int
    planes: int
    phase: int
    alt_km: float
    incl_deg: float
    period_s: float

    def __post_init__(self):
        if self.total_sats < 1 or self.planes < 1:
            raise ValueError(f"{self.layer.value}: need at least one satellite and one plane")
        if self.total_sats % self.planes:
            raise ValueError(f"{self.layer.value}: {self.total_sats} satellites do not split over {self.planes} planes")
        if not 0 <= self.phase <= self.planes - 1:
            raise ValueError(f"{self.layer.value}: phase factor must be in [0, P-1]")
        if self.alt_km <= 0 or self.period_s <= 0:
            raise ValueError(f"{self.layer.value}: altitude and period must be positive")
        if not 0 <= self.incl_deg < 180:
            raise ValueError(f"{self.layer.value}: inclination must be in [0, 180)")

    @property
    def sats_per_plane(self) -> int:
        return self.total_sats // self.planes

    @property
    def angular_velocity(self) -> float:
        return 2 * math.pi / self.period_s


@dataclass(frozen=True)
class SatelliteId:
    layer: Layer
    plane: int
    slot: int
    index: int

    @property
    def label(self) -> str:
        return f"{self.layer.value}:{self.plane}:{self.slot}"


@dataclass(frozen=True)
class EciPosition:
    x: float
    y: float
    z: float
    t: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class ConstellationSpec:
    layers: tuple[LayerSpec, ...]
    earth_radius: float = EARTH_RADIUS_KM
    clearance: float = CLEARANCE_KM
    _sats: tuple[SatelliteId, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not self.layers:
            raise ValueError("constellation needs at least one layer")
        if self.clearance < 0:
            raise ValueError("clearance must be non-negative")
        sats = []
        for spec in self.layers:
            for p in range(spec.planes):
                for m in range(spec.sats_per_plane):
                    sats.append(SatelliteId(spec.layer, p, m, len(sats)))
        object.__setattr__(self, "_sats", tuple(sats))

    @classmethod
    def reference(cls, earth_radius: float = EARTH_RADIUS_KM, clearance: float = CLEARANCE_KM) -> "ConstellationSpec":
        """120/10/1:1200:55 LEO shell plus 3/1/0:35786:0 GEO ring."""
        return cls(
            (
                LayerSpec(Layer.LEO, 120, 10, 1, 1200.0, 55.0, 6565.0),
                LayerSpec(Layer.GEO, 3, 1, 0, 35786.0, 0.0, 86400.0),
            ),
            earth_radius,
            clearance,
        )

    @property
    def satellites(self) -> tuple[SatelliteId, ...]:
        return self._sats

    @property
    def n_sats(self) -> int:
        return len(self._sats)

    def layer_spec(self, layer: Layer) -> LayerSpec:
        for spec in self.layers:
            if spec.layer == layer:
                return spec
        raise ValueError(f"no {layer} layer in constellation")

    def radius(self, layer: Layer) -> float:
        return self.earth_radius + self.layer_spec(layer).alt_km

    def satellite(self, layer: Layer | str, plane: int, slot: int) -> SatelliteId:
        layer = Layer(layer)
        offset = 0
        for spec in self.layers:
            if spec.layer == layer:
                if not (0 <= plane < spec.planes and 0 <= slot < spec.sats_per_plane):
                    raise ValueError(f"no satellite {layer.value}:{plane}:{slot}")
                return self._sats[offset + plane * spec.sats_per_plane + slot]
            offset += spec.total_sats
        raise ValueError(f"no {layer} layer in constellation")

    def check(self, sat: SatelliteId) -> None:
        if not (0 <= sat.index < len(self._sats)) or self._sats[sat.index] != sat:
            raise ValueError(f"{sat} is not a satellite of this constellation")


def _layer_positions(spec: LayerSpec, radius: float, t: np.ndarray) -> np.ndarray:
    M = spec.sats_per_plane
    p = np.repeat(np.arange(spec.planes), M)
    m = np.tile(np.arange(M), spec.planes)
    u = spec.angular_velocity * t[..., None] + 2 * np.pi * (m / M + p * spec.phase / (spec.planes * M))
    raan = 2 * np.pi * p / spec.planes
    ci, si = math.cos(math.radians(spec.incl_deg)), math.sin(math.radians(spec.incl_deg))
    su, cu = np.sin(u), np.cos(u)
    x = -radius * ci * np.sin(raan) * su + radius * np.cos(raan) * cu
    y = radius * ci * np.cos(raan) * su + radius * np.sin(raan) * cu
    z = radius * si * su
    return np.stack([x, y, z], axis=-1)


def positions(spec: ConstellationSpec, t) -> np.ndarray:
    """All satellite positions, shape ``t.shape + (N, 3)``, in flat-index order."""
    t = np.asarray(t, dtype=float)
    return np.concatenate(
        [_layer_positions(layer, spec.earth_radius + layer.alt_km, t) for layer in spec.layers], axis=-2
    )


def position(spec: ConstellationSpec, sat: SatelliteId, t: float) -> EciPosition:
    spec.check(sat)
    if t < 0:
        raise ValueError("t must be non-negative")
    layer = spec.layer_spec(sat.layer)
    M = layer.sats_per_plane
    u = layer.angular_velocity * t + 2 * math.pi * (sat.slot / M + sat.plane * layer.phase / (layer.planes * M))
    raan = 2 * math.pi * sat.plane / layer.planes
    inc = math.radians(layer.incl_deg)
    R = spec.earth_radius + layer.alt_km
    x = -R * math.cos(inc) * math.sin(raan) * math.sin(u) + R * math.cos(raan) * math.cos(u)
    y = R * math.cos(inc) * math.cos(raan) * math.sin(u) + R * math.sin(raan) * math.cos(u)
    z = R * math.sin(inc) * math.sin(u)
    return EciPosition(x, y, z, t)


def segment_min_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from the origin to the closed segment [a, b]; broadcasts over leading axes."""
    d = b - a
    dd = np.einsum("...i,...i->...", d, d)
    if np.any(dd == 0):
        raise ValueError("segment endpoints coincide")
    s = np.clip(-np.einsum("...i,...i->...", a, d) / dd, 0.0, 1.0)
    return np.linalg.norm(a + s[..., None] * d, axis=-1)


def is_visible(a, b, earth_radius: float = EARTH_RADIUS_KM, clearance: float = CLEARANCE_KM) -> bool:
    a = a.as_array() if isinstance(a, EciPosition) else np.asarray(a, dtype=float)
    b = b.as_array() if isinstance(b, EciPosition) else np.asarray(b, dtype=float)
    return bool(segment_min_distance(a, b) >= earth_radius + clearance)


def sample_times(t0: float, t1: float, step: float) -> np.ndarray:
    """Half-open sampling grid t0, t0+step, ... < t1."""
    if not t0 < t1:
        raise ValueError("need t0 < t1")
    if step <= 0:
        raise ValueError("step must be positive")
    n = math.ceil((t1 - t0) / step)
    times = t0 + step * np.arange(n)
    return times[times < t1]


def visible_over_window(
    spec: ConstellationSpec, sat_a: SatelliteId, sat_b: SatelliteId, t0: float, t1: float, step: float = 1.0
) -> bool:
    if sat_a == sat_b:
        raise ValueError("a satellite is not linked to itself")
    spec.check(sat_a)
    spec.check(sat_b)
    limit = spec.earth_radius + spec.clearance
    first = (position(spec, sat_a, t0), position(spec, sat_b, t0))
    if not is_visible(*first, spec.earth_radius, spec.clearance):
        return False
    pos = positions(spec, sample_times(t0, t1, step))
    dist = segment_min_distance(pos[:, sat_a.index], pos[:, sat_b.index])
    return bool(np.all(dist >= limit))


def visibility_matrix(spec: ConstellationSpec, t: float) -> np.ndarray:
    """Instantaneous N x N line-of-sight matrix (zero diagonal)."""
    return window_visibility(spec, np.array([t]))


def window_visibility(spec: ConstellationSpec, times: Sequence[float], chunk: int = 250) -> np.ndarray:
    """Pairs that stay in line of sight at every sample time."""
    times = np.asarray(times, dtype=float)
    n = spec.n_sats
    iu, ju = np.triu_indices(n, 1)
    ok = np.ones(iu.size, dtype=bool)
    limit = spec.earth_radius + spec.clearance
    for start in range(0, times.size, chunk):
        pos = positions(spec, times[start : start + chunk])
        live = np.flatnonzero(ok)
        if live.size == 0:
            break
        dist = segment_min_distance(pos[:, iu[live]], pos[:, ju[live]])
        ok[live] = np.all(dist >= limit, axis=0)
    out = np.zeros((n, n), dtype=bool)
    out[iu, ju] = ok
    return out | out.T
