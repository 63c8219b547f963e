"""Closed-form S-wave results for the attractive square well.

Lengths are in units of the well range ``R`` only when ``R = 1``; nothing
here assumes it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateError, PoleError, ResonancePoleError
from .potentials import SquareWell, is_pole
from .records import PhaseRecord

EPS_POLE = 1e-12
# below this kR the threshold limit -a is returned directly
K_THRESHOLD = 1e-8


@dataclass(frozen=True)
class SquareWellCoefficients:
    """k**2 coefficients of both effective-range functions.

    ``b_small`` multiplies k**2 in tan(delta)/k, ``c_large`` in k*cot(delta);
    ``c_large`` and ``r0_full`` are ``None`` when a = 0.
    """

    a: float
    b_small: float
    c_large: Optional[float]
    r0_full: Optional[float]


def scattering_length(well: SquareWell) -> float:
    """a = R - tan(beta R) / beta.

    Raises
    ------
    ResonancePoleError
        If beta R is within ``EPS_POLE`` of an odd multiple of pi/2.
    """
    R, beta = well.R, well.beta
    x = beta * R
    if x < 1e-4:
        # R - tan(x)/beta expanded; exact limit 0 at beta = 0
        return -(x**2) * R / 3.0 - 2.0 * x**4 * R / 15.0
    if is_pole(x, EPS_POLE):
        raise ResonancePoleError(
            f"beta*R = {x!r} is at a zero-energy resonance; scattering length diverges"
        )
    return R - math.tan(x) / beta


def _num_den(well: SquareWell, k: float):
    # tan(delta)/k = num/den, the tan-form multiplied through by cos(gR)cos(kR)
    R = well.R
    g = math.sqrt(well.beta**2 + k * k)
    sg, cg = math.sin(g * R), math.cos(g * R)
    sk, ck = math.sin(k * R), math.cos(k * R)
    num = k * sg * ck - g * cg * sk
    den = k * k * sg * sk + g * k * cg * ck
    return num, den, g


def exact_tan_delta_over_k(well: SquareWell, k: float) -> float:
    """Exact tan(delta)/k, smooth across the poles of tan(gamma R) and tan(kR)."""
    if not k > 0:
        raise ValueError(f"momentum must be positive, got k={k}")
    if k * well.R < K_THRESHOLD:
        return -scattering_length(well)
    num, den, g = _num_den(well, k)
    if abs(den) < EPS_POLE * (k * k + g * k):
        raise PoleError(f"tan(delta)/k has a pole at k={k!r} (delta = pi/2)")
    return num / den


def exact_k_cot_delta(well: SquareWell, k: float) -> float:
    """Exact k*cot(delta), the reciprocal of :func:`exact_tan_delta_over_k`."""
    if not k > 0:
        raise ValueError(f"momentum must be positive, got k={k}")
    if k * well.R < K_THRESHOLD:
        a = scattering_length(well)
        if a == 0.0:
            raise PoleError("k*cot(delta) diverges at threshold when a = 0")
        return -1.0 / a
    num, den, g = _num_den(well, k)
    if abs(num) < EPS_POLE * (k + g) * max(well.R, 1.0 / g):
        raise PoleError(f"k*cot(delta) has a pole at k={k!r} (delta = 0)")
    return den / num


def exact_phase_record(well: SquareWell, k: float) -> PhaseRecord:
    """PhaseRecord from the closed form; delta is the principal value."""
    if not k > 0:
        raise ValueError(f"momentum must be positive, got k={k}")
    num, den, _ = _num_den(well, k)
    return PhaseRecord.from_tangent(k, k * num, den)


def tan_delta_over_k_ksq(well: SquareWell, ksq: float) -> float:
    """tan(delta)/k as a function of k**2, continued to k**2 < 0.

    The function is real-analytic in k**2, so negative energies are reached
    through complex momentum. Used for centered differences at threshold.
    """
    if ksq == 0.0:
        return -scattering_length(well)
    R = well.R
    k = cmath.sqrt(ksq)
    g = cmath.sqrt(well.beta**2 + ksq)
    sg, cg = cmath.sin(g * R), cmath.cos(g * R)
    sk, ck = cmath.sin(k * R), cmath.cos(k * R)
    num = k * sg * ck - g * cg * sk
    den = ksq * sg * sk + g * k * cg * ck
    return (num / den).real


def interior_wavefunction(well: SquareWell, k: float, delta: float, r):
    """u(r) inside the well, normalized to sin(kr + delta)/k outside.

    Raises
    ------
    DegenerateError
        If cos(gamma R) vanishes and the normalization is undefined.
    """
    R = well.R
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0) or np.any(r_arr > R):
        raise ValueError("interior wave function requires 0 <= r <= R")
    g = math.sqrt(well.beta**2 + k * k)
    cg = math.cos(g * R)
    if abs(cg) < EPS_POLE:
        raise DegenerateError(f"cos(gamma R) = {cg!r}; interior normalization degenerates")
    u = math.cos(k * R + delta) * np.sin(g * r_arr) / (g * cg)
    return float(u) if np.ndim(r) == 0 else u


def taylor_coefficients(well: SquareWell) -> SquareWellCoefficients:
    """Threshold k**2 coefficients of tan(delta)/k and k*cot(delta)."""
    R, beta = well.R, well.beta
    if not beta > 0:
        raise ValueError("taylor coefficients need a non-zero well depth")
    a = scattering_length(well)
    b_small = a / (2 * beta**2) + R**3 / 6 - a**2 * R / 2
    if a == 0.0:
        return SquareWellCoefficients(a, b_small, None, None)
    c_large = R / 2 - R**3 / (6 * a**2) - 1 / (2 * a * beta**2)
    return SquareWellCoefficients(a, b_small, c_large, 2 * c_large)
