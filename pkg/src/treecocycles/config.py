"""Run configuration shared by the verifier and the command line."""

from __future__ import annotations

from dataclasses import dataclass

from .cellcomplex import HoroballSpec
from .fields import field_from_name
from .group import BALL_RADIUS_CAP, RingSpec


@dataclass(frozen=True)
class Config:
    field_name: str = "q"
    ring_name: str = "z"
    threshold: int = 1
    word_radius: int = 2
    ball_radius: int = 3
    samples: int = 20
    seed: int = 0
    format: str = "json"

    def __post_init__(self):
        if self.ring_name not in ("z", "fp"):
            raise ValueError(f"unknown ring {self.ring_name!r}; expected z or fp")
        field = self.field
        if (self.ring_name == "fp") != field.is_finite:
            raise ValueError(f"ring {self.ring_name} is inconsistent with field {self.field_name}")
        if not 0 < self.word_radius <= BALL_RADIUS_CAP:
            raise ValueError(f"word radius must lie in [1, {BALL_RADIUS_CAP}]")
        if self.ball_radius <= 0 or self.samples < 0:
            raise ValueError("caps must be positive")
        if self.format not in ("json", "text", "dot"):
            raise ValueError(f"unknown format {self.format!r}")

    @property
    def field(self):
        return field_from_name(self.field_name)

    @property
    def ring(self) -> RingSpec:
        if self.ring_name == "z":
            return RingSpec.integers()
        return RingSpec.prime(self.field.characteristic)

    @property
    def horoball(self) -> HoroballSpec:
        return HoroballSpec(self.threshold)
