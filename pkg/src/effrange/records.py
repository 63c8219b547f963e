"""Per-momentum scattering output shared by the analytic and numerical routes."""

from __future__ import annotations

import math
from dataclasses import dataclass

# |sin(delta)| or |cos(delta)| below this marks an effective-range function pole
POLE_FLAG_TOL = 1e-10


@dataclass(frozen=True)
class PhaseRecord:
    """One momentum point.

    ``delta`` is the principal value in (-pi/2, pi/2]; both effective-range
    functions are pi-periodic in delta so no branch is tracked.
    """

    k: float
    delta: float
    tan_delta_over_k: float
    k_cot_delta: float
    pole_near_kcot: bool = False
    pole_near_tan: bool = False

    @property
    def flagged(self) -> bool:
        return self.pole_near_kcot or self.pole_near_tan

    @property
    def minus_delta_over_k(self) -> float:
        return -self.delta / self.k

    @classmethod
    def from_tangent(cls, k: float, num: float, den: float) -> "PhaseRecord":
        """Build a record from tan(delta) = num / den without dividing early."""
        k, num, den = float(k), float(num), float(den)
        norm = math.hypot(num, den)
        if norm == 0.0 or not math.isfinite(norm):
            raise ValueError("phase undefined: numerator and denominator both vanish")
        delta = math.atan2(num, den)
        if delta > math.pi / 2:
            delta -= math.pi
        elif delta <= -math.pi / 2:
            delta += math.pi
        tdk = num / (k * den) if den != 0.0 else math.copysign(math.inf, num)
        kcot = k * den / num if num != 0.0 else math.copysign(math.inf, den)
        return cls(
            k=k,
            delta=delta,
            tan_delta_over_k=tdk,
            k_cot_delta=kcot,
            pole_near_kcot=abs(num) / norm < POLE_FLAG_TOL,
            pole_near_tan=abs(den) / norm < POLE_FLAG_TOL,
        )

    @classmethod
    def from_delta(cls, k: float, delta: float) -> "PhaseRecord":
        return cls.from_tangent(k, math.sin(delta), math.cos(delta))

    @classmethod
    def from_tan_delta_over_k(cls, k: float, value: float) -> "PhaseRecord":
        return cls.from_tangent(k, k * value, 1.0)
