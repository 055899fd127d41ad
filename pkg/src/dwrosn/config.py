"""Experiment configuration and its flat ``key = value`` file format."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

from .las import RANKINGS, Scheme
from .orbital import ConstellationSpec, Layer, LayerSpec


class ConfigError(ValueError):
    pass


def _parse_hops(text: str) -> tuple[int | None, ...]:
    out = []
    for tok in _split(text):
        if tok.lower() in ("inf", "none", "∞"):
            out.append(None)
        else:
            out.append(int(tok))
    return tuple(out)


def _split(text: str) -> list[str]:
    return [tok for tok in text.replace(",", " ").split() if tok]


@dataclass(frozen=True)
class ExperimentConfig:
    leo: LayerSpec = LayerSpec(Layer.LEO, 120, 10, 1, 1200.0, 55.0, 6565.0)
    geo: LayerSpec = LayerSpec(Layer.GEO, 3, 1, 0, 35786.0, 0.0, 86400.0)
    earth_radius_km: float = 6378.137
    clearance_km: float = 100.0
    dt_s: float = 2000.0
    horizon_s: float = 20000.0
    step_s: float = 1.0
    count: int = 100
    schemes: tuple[Scheme, ...] = (Scheme.PEIM, Scheme.ACT, Scheme.GREEDY)
    peim_ranking: str = "lexicographic"
    d_leo: int = 5
    d_geo: int = 6
    sweep_d_geo: tuple[int, ...] = (5, 6, 7, 8)
    max_hops: tuple[int | None, ...] = (1, 2, 3, 4, 5, None)
    k_cap: int = 16
    reps: int = 10
    delay_step_s: float = 100.0
    seed: int = 0
    slots: tuple[int, ...] | None = None

    def __post_init__(self):
        if not self.schemes:
            raise ConfigError("at least one scheme is required")
        if self.dt_s <= 0 or self.horizon_s <= 0 or self.step_s <= 0:
            raise ConfigError("slot length, horizon and step must be positive")
        if not math.isclose(self.horizon_s / self.dt_s, round(self.horizon_s / self.dt_s)):
            raise ConfigError("horizon must be a whole number of slots")
        if self.count < 1 or self.reps < 1 or self.k_cap < 1:
            raise ConfigError("count, reps and k_cap must be at least 1")
        if self.d_leo < 1 or self.d_geo < 1 or any(d < 1 for d in self.sweep_d_geo):
            raise ConfigError("node degrees must be at least 1")
        if any(h is not None and h < 1 for h in self.max_hops):
            raise ConfigError("max_hops entries must be at least 1 or inf")
        if self.peim_ranking not in RANKINGS:
            raise ConfigError(f"las.ranking must be one of {RANKINGS}")
        if self.slots is not None and any(not 0 <= s < self.n_slots for s in self.slots):
            raise ConfigError("slot index outside the horizon")

    @property
    def n_slots(self) -> int:
        return int(round(self.horizon_s / self.dt_s))

    @property
    def slot_indices(self) -> tuple[int, ...]:
        return tuple(range(self.n_slots)) if self.slots is None else self.slots

    def constellation(self) -> ConstellationSpec:
        return ConstellationSpec((self.leo, self.geo), self.earth_radius_km, self.clearance_km)

    def with_overrides(self, **kw) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        raw: dict[str, str] = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"line {lineno}: expected 'key = value'")
            raw[key.strip()] = value.strip()
        try:
            return cls._from_mapping(raw)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_text(Path(path).read_text())

    @classmethod
    def _from_mapping(cls, raw: dict[str, str]) -> "ExperimentConfig":
        base = cls()
        kw = {}

        def layer(prefix: str, default: LayerSpec) -> LayerSpec:
            return LayerSpec(
                default.layer,
                int(raw.pop(f"{prefix}.sats", default.total_sats)),
                int(raw.pop(f"{prefix}.planes", default.planes)),
                int(raw.pop(f"{prefix}.phase", default.phase)),
                float(raw.pop(f"{prefix}.alt_km", default.alt_km)),
                float(raw.pop(f"{prefix}.incl_deg", default.incl_deg)),
                float(raw.pop(f"{prefix}.period_s", default.period_s)),
            )

        kw["leo"] = layer("leo", base.leo)
        kw["geo"] = layer("geo", base.geo)
        scalars = {
            "earth.radius_km": ("earth_radius_km", float),
            "earth.clearance_km": ("clearance_km", float),
            "slot.dt_s": ("dt_s", float),
            "slot.horizon_s": ("horizon_s", float),
            "slot.step_s": ("step_s", float),
            "las.count": ("count", int),
            "las.ranking": ("peim_ranking", str),
            "nodes.d_leo": ("d_leo", int),
            "nodes.d_geo": ("d_geo", int),
            "rwa.k_cap": ("k_cap", int),
            "rwa.reps": ("reps", int),
            "rwa.delay_step_s": ("delay_step_s", float),
            "seed": ("seed", int),
        }
        for key, (name, conv) in scalars.items():
            if key in raw:
                kw[name] = conv(raw.pop(key))
        if "las.schemes" in raw:
            kw["schemes"] = tuple(Scheme(s.lower()) for s in _split(raw.pop("las.schemes")))
        if "rwa.max_hops" in raw:
            kw["max_hops"] = _parse_hops(raw.pop("rwa.max_hops"))
        if "sweep.d_geo" in raw:
            kw["sweep_d_geo"] = tuple(int(s) for s in _split(raw.pop("sweep.d_geo")))
        if "slot.indices" in raw:
            kw["slots"] = tuple(int(s) for s in _split(raw.pop("slot.indices"))) or None
        if raw:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(raw))}")
        return cls(**kw)

    def to_text(self) -> str:
        def hops(h):
            return "inf" if h is None else str(h)

        lines = []
        for prefix, spec in (("leo", self.leo), ("geo", self.geo)):
            lines += [
                f"{prefix}.sats = {spec.total_sats}",
                f"{prefix}.planes = {spec.planes}",
                f"{prefix}.phase = {spec.phase}",
                f"{prefix}.alt_km = {spec.alt_km:g}",
                f"{prefix}.incl_deg = {spec.incl_deg:g}",
                f"{prefix}.period_s = {spec.period_s:g}",
            ]
        lines += [
            f"earth.radius_km = {self.earth_radius_km!r}",
            f"earth.clearance_km = {self.clearance_km:g}",
            f"slot.dt_s = {self.dt_s:g}",
            f"slot.horizon_s = {self.horizon_s:g}",
            f"slot.step_s = {self.step_s:g}",
            f"las.count = {self.count}",
            f"las.schemes = {','.join(s.value for s in self.schemes)}",
            f"las.ranking = {self.peim_ranking}",
            f"nodes.d_leo = {self.d_leo}",
            f"nodes.d_geo = {self.d_geo}",
            f"sweep.d_geo = {','.join(map(str, self.sweep_d_geo))}",
            f"rwa.max_hops = {','.join(hops(h) for h in self.max_hops)}",
            f"rwa.k_cap = {self.k_cap}",
            f"rwa.reps = {self.reps}",
            f"rwa.delay_step_s = {self.delay_step_s:g}",
            f"seed = {self.seed}",
        ]
        if self.slots is not None:
            lines.append(f"slot.indices = {','.join(map(str, self.slots))}")
        return "\n".join(lines) + "\n"
