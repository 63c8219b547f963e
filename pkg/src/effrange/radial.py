"""Numerov integration of the S-wave radial equation u'' + (k**2 - V) u = 0.

The phase shift is read off from u and u' at a matching radius beyond which
the potential is zero (square well) or negligible (other wells). The
integral identity ``tan(delta)/k = -int u v V dr`` provides an independent
second route to the same number.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

from . import squarewell
from .errors import ConfigurationError, DegenerateError, QuadratureError
from .potentials import PotentialSpec, SquareWell, evaluate_potential, origin_rv, tail_radius
from .records import PhaseRecord


@dataclass(frozen=True)
class SolverConfig:
    """Grid and tolerance settings.

    ``step`` and ``r_match`` default to ``1e-4 * R`` and automatic matching:
    exactly R for the square well, otherwise the radius where
    ``|V| < tail_epsilon * max(k**2, 1/R**2)``.
    """

    step: Optional[float] = None
    r_match: Union[float, str] = "auto"
    tail_epsilon: float = 1e-12
    quadrature_tol: float = 1e-10

    def __post_init__(self):
        if self.step is not None and not self.step > 0:
            raise ConfigurationError(f"step must be positive, got {self.step}")
        if self.r_match != "auto" and not (isinstance(self.r_match, (int, float)) and self.r_match > 0):
            raise ConfigurationError(f"r_match must be 'auto' or positive, got {self.r_match!r}")
        if not 0 < self.tail_epsilon <= 1e-6:
            raise ConfigurationError(f"tail_epsilon must lie in (0, 1e-6], got {self.tail_epsilon}")
        if not self.quadrature_tol > 0:
            raise ConfigurationError("quadrature_tol must be positive")


@dataclass
class RadialSolution:
    """Grid solution; ``u`` carries the arbitrary starting normalization."""

    r: np.ndarray
    u: np.ndarray
    du_match: float
    record: PhaseRecord

    @property
    def r_match(self) -> float:
        return float(self.r[-1])


def matching_radius(spec: PotentialSpec, k: float, cfg: SolverConfig) -> float:
    if cfg.r_match != "auto":
        return float(cfg.r_match)
    if isinstance(spec, SquareWell):
        return spec.R
    return tail_radius(spec, cfg.tail_epsilon * max(k * k, 1.0 / spec.R**2))


def _numerov(f, c, u1, y0):
    """Numerov recurrence in summed form.

    With y_n = (1 + c f_n) u_n the scheme reads y_{n+1} - 2 y_n + y_{n-1}
    = -12 c f_n u_n. Carrying the first difference, with a compensated sum
    for y, keeps roundoff from growing quadratically in the step count.
    ``y0`` stands in for (1 + c f_0) u_0, finite even where f_0 is not.
    """
    n_pts = len(f)
    fc = (c * f).tolist()
    u = [0.0] * n_pts
    u[1] = u1
    y = (1.0 + fc[1]) * u1
    d = y - y0
    comp = 0.0
    cur = u1
    for n in range(1, n_pts - 1):
        d -= 12.0 * fc[n] * cur
        t = y + (d - comp)
        comp = (t - y) - (d - comp)
        y = t
        cur = y / (1.0 + fc[n + 1])
        u[n + 1] = cur
    return np.array(u)


def radial_solution(spec: PotentialSpec, k: float, cfg: Optional[SolverConfig] = None,
                    u1: Optional[float] = None) -> RadialSolution:
    """Integrate outward from u(0) = 0 and match at the matching radius.

    Parameters
    ----------
    spec : PotentialSpec
    k : float
        Momentum, ``k > 0``.
    cfg : SolverConfig, optional
    u1 : float, optional
        Starting value u(h); defaults to h. Only the sign matters for delta.
    """
    if not k > 0:
        raise ValueError(f"momentum must be positive, got k={k}")
    cfg = cfg or SolverConfig()
    r_m = matching_radius(spec, k, cfg)
    h_req = cfg.step if cfg.step is not None else 1e-4 * spec.R
    n_steps = max(int(math.ceil(r_m / h_req - 1e-9)), 2)
    h = r_m / n_steps
    r = h * np.arange(n_steps + 1)
    r[-1] = r_m

    v = np.empty_like(r)
    v[1:-1] = evaluate_potential(spec, r[1:-1])
    # left limit at the matching node keeps the interior solution smooth up to r_m
    v[-1] = evaluate_potential(spec, np.nextafter(r_m, 0.0))
    v[0] = 0.0
    f = k * k - v

    if u1 is None:
        u1 = h
    c = h * h / 12.0
    # u''(0) = lim V u = lim(rV) * u'(0), with u'(0) ~ u1/h
    w0 = origin_rv(spec) * u1 / h
    u = _numerov(f, c, u1, -c * w0)

    w = -f * u
    w[0] = w0
    du = (u[-1] - u[-2]) / h + h * (7.0 * w[-1] / 24.0 + w[-2] / 4.0 - w[-3] / 24.0)

    s, co = math.sin(k * r_m), math.cos(k * r_m)
    um = u[-1]
    num = k * um * co - du * s
    den = du * co + k * um * s
    return RadialSolution(r=r, u=u, du_match=du, record=PhaseRecord.from_tangent(k, num, den))


def solve_phase(spec: PotentialSpec, k: float, cfg: Optional[SolverConfig] = None,
                u1: Optional[float] = None) -> PhaseRecord:
    """Phase shift of ``spec`` at momentum ``k`` by Numerov integration."""
    return radial_solution(spec, k, cfg, u1).record


def _quad(func, lo, hi, tol):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(func, lo, hi, epsabs=tol, epsrel=1e-13, limit=500)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature did not converge: {exc}") from None
    if err > tol:
        raise QuadratureError(f"quadrature error estimate {err:.3g} exceeds tolerance {tol:.3g}")
    return value


def integral_identity(spec: PotentialSpec, k: float, cfg: Optional[SolverConfig] = None) -> float:
    """Evaluate -int_0^inf u(r) v(r) V(r) dr.

    ``u`` is normalized to sin(kr + delta)/k outside the potential and
    ``v = sin(kr) / (k cos(delta))``. The square well uses its closed-form
    interior solution; other wells use the Numerov solution through a cubic
    spline. The result should equal tan(delta)/k.

    Raises
    ------
    DegenerateError
        If |cos(delta)| < 1e-8, where v is undefined.
    QuadratureError
        If adaptive quadrature misses ``cfg.quadrature_tol``.
    """
    cfg = cfg or SolverConfig()
    if not k > 0:
        raise ValueError(f"momentum must be positive, got k={k}")

    if isinstance(spec, SquareWell):
        if spec.beta == 0.0:
            return 0.0
        delta = squarewell.exact_phase_record(spec, k).delta
        _check_cos(delta)
        g = math.sqrt(spec.beta**2 + k * k)
        amp = math.cos(k * spec.R + delta) / (g * math.cos(g * spec.R))
        vnorm = 1.0 / (k * math.cos(delta))
        depth = spec.beta**2

        def integrand(r):
            return depth * amp * math.sin(g * r) * vnorm * math.sin(k * r)

        return _quad(integrand, 0.0, spec.R, cfg.quadrature_tol)

    sol = radial_solution(spec, k, cfg)
    delta = sol.record.delta
    _check_cos(delta)
    r_m = sol.r_match
    # least-squares match of (u, u'/k) to the asymptotic form at r_m
    target_u = math.sin(k * r_m + delta) / k
    target_du = math.cos(k * r_m + delta)
    um, dum = sol.u[-1], sol.du_match
    scale = (target_u * um + target_du * dum / k**2) / (um**2 + (dum / k) ** 2)
    spline = CubicSpline(sol.r, scale * sol.u)
    vnorm = 1.0 / (k * math.cos(delta))

    def integrand(r):
        return -float(spline(r)) * vnorm * math.sin(k * r) * evaluate_potential(spec, r)

    return _quad(integrand, 0.0, r_m, cfg.quadrature_tol)


def _check_cos(delta):
    if abs(math.cos(delta)) < 1e-8:
        raise DegenerateError("cos(delta) ~ 0: free solution v is undefined, identity skipped")
