"""Short-range radial potentials in units hbar = 2m = 1.

All wells are attractive, ``V(r) = -V0 * f(r/R)`` with ``f >= 0``; energies
and potentials therefore carry units of inverse length squared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConfigurationError, SingularOriginError


@dataclass(frozen=True)
class SquareWell:
    """V(r) = -beta**2 for r < R, 0 for r >= R."""

    R: float = 1.0
    beta: float = 0.0

    def __post_init__(self):
        if not self.R > 0:
            raise ConfigurationError(f"square well range must be positive, got R={self.R}")
        if not self.beta >= 0:
            raise ConfigurationError(f"square well depth must be >= 0, got beta={self.beta}")


@dataclass(frozen=True)
class Gaussian:
    """V(r) = -V0 * exp(-(r/R)**2)."""

    V0: float
    R: float = 1.0

    def __post_init__(self):
        _check_range(self.R)


@dataclass(frozen=True)
class Exponential:
    """V(r) = -V0 * exp(-r/R)."""

    V0: float
    R: float = 1.0

    def __post_init__(self):
        _check_range(self.R)


@dataclass(frozen=True)
class Yukawa:
    """V(r) = -V0 * exp(-r/R) / r, with V0 in inverse length."""

    V0: float
    R: float = 1.0

    def __post_init__(self):
        _check_range(self.R)


PotentialSpec = Union[SquareWell, Gaussian, Exponential, Yukawa]

_NAMES = {
    "squarewell": SquareWell,
    "gaussian": Gaussian,
    "exponential": Exponential,
    "yukawa": Yukawa,
}


def _check_range(R):
    if not R > 0:
        raise ConfigurationError(f"potential range must be positive, got R={R}")


def evaluate_potential(spec: PotentialSpec, r):
    """Evaluate V(r) for a scalar or an array of radii.

    Parameters
    ----------
    spec : PotentialSpec
        One of :class:`SquareWell`, :class:`Gaussian`, :class:`Exponential`,
        :class:`Yukawa`.
    r : float or ndarray
        Radial coordinate(s), ``r >= 0``.

    Returns
    -------
    float or ndarray
        The potential in inverse length squared.

    Raises
    ------
    SingularOriginError
        For a Yukawa well evaluated at ``r = 0``.
    """
    scalar = np.ndim(r) == 0
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be non-negative")

    if isinstance(spec, SquareWell):
        v = np.where(r < spec.R, -spec.beta**2, 0.0)
    elif isinstance(spec, Gaussian):
        v = -spec.V0 * np.exp(-((r / spec.R) ** 2))
    elif isinstance(spec, Exponential):
        v = -spec.V0 * np.exp(-r / spec.R)
    elif isinstance(spec, Yukawa):
        if np.any(r == 0):
            raise SingularOriginError("Yukawa potential is singular at r = 0")
        v = -spec.V0 * np.exp(-r / spec.R) / r
    else:
        raise TypeError(f"unknown potential spec {spec!r}")

    return float(v) if scalar else v


def origin_rv(spec: PotentialSpec) -> float:
    """Limit of r*V(r) as r -> 0 (non-zero only for Yukawa)."""
    if isinstance(spec, Yukawa):
        return -spec.V0
    return 0.0


def tail_radius(spec: PotentialSpec, threshold: float, r_max_factor: float = 1e4) -> float:
    """Smallest r beyond which |V(r)| < threshold.

    All supported profiles decay monotonically, so the crossing is found by
    doubling out from R and bisecting.
    """
    if isinstance(spec, SquareWell):
        return spec.R
    if not threshold > 0:
        raise ConfigurationError("tail threshold must be positive")

    def above(r):
        return abs(evaluate_potential(spec, r)) >= threshold

    lo, hi = 0.0, spec.R
    while above(hi):
        lo, hi = hi, 2.0 * hi
        if hi > r_max_factor * spec.R:
            raise ConfigurationError(
                f"potential does not fall below {threshold:g} within "
                f"{r_max_factor:g} ranges; not short-range"
            )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if above(mid):
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12 * hi:
            break
    return hi


def parse_potential(text: str) -> PotentialSpec:
    """Parse ``name:key=value,...`` such as ``squarewell:R=1,beta=4.4934``."""
    name, _, body = text.partition(":")
    cls = _NAMES.get(name.strip().lower())
    if cls is None:
        raise ValueError(f"unknown potential {name!r}; expected one of {sorted(_NAMES)}")
    kwargs = {}
    for item in filter(None, (s.strip() for s in body.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise ValueError(f"malformed potential parameter {item!r}")
        kwargs[key.strip()] = float(value)
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {name}: {exc}") from None


def describe(spec: PotentialSpec) -> str:
    """Inverse of :func:`parse_potential`."""
    for name, cls in _NAMES.items():
        if isinstance(spec, cls):
            fields = ",".join(f"{k}={v!r}" for k, v in vars(spec).items())
            return f"{name}:{fields}"
    raise TypeError(f"unknown potential spec {spec!r}")


def is_pole(x: float, tol: float) -> bool:
    """True if x lies within tol of an odd multiple of pi/2."""
    n = math.floor(x / math.pi)
    return abs(x - (n + 0.5) * math.pi) < tol
