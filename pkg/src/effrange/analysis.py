"""Root finding, fitting and expansion-versus-exact comparisons."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import BracketError, FitInversionError, PoleError, ScatteringError
from .expansions import KCOT, MINUS_DELTA, TAN, ErParams, ExpansionKind, eval_expansion
from .potentials import SquareWell, is_pole
from .records import PhaseRecord
from .squarewell import exact_phase_record, scattering_length, tan_delta_over_k_ksq

SCAN_POLE_TOL = 1e-6
BISECT_XTOL = 1e-12
BISECT_MAXITER = 200
DEFAULT_WINDOW = (0.005, 0.5)
DEFAULT_N = 100

USE_RANGE_R = "use_range_R"
USE_FITTED = "use_fitted"


class ScanPoint(NamedTuple):
    beta_R: float
    a_over_R: Optional[float]
    pole: bool


@dataclass
class ErFitResult:
    kind: ExpansionKind
    params: ErParams
    rms_residual: float
    window: Tuple[float, float]
    n_points: int
    intercept: float
    slope: float


@dataclass
class ErrorReport:
    """Deviation of one expansion from the exact function on a k**2 grid.

    ``samples`` holds (k**2, exact, approx) for every grid point; points in
    ``flagged`` sit at a pole of the exact function and are left out of the
    statistics.
    """

    kind: ExpansionKind
    params: ErParams
    max_abs_dev: float
    mean_abs_dev: float
    window: Tuple[float, float]
    samples: List[Tuple[float, float, float]]
    flagged: List[bool] = field(default_factory=list)

    @property
    def n_flagged(self) -> int:
        return sum(self.flagged)


# -- scattering length curve ------------------------------------------------

def _a_over_R(x):
    return 1.0 - math.tan(x) / x


def scattering_length_scan(R: float, beta_max: float, n: int) -> List[ScanPoint]:
    """a/R on the uniform grid beta*R = beta_max*R*i/n, i = 1..n."""
    if n < 2:
        raise ValueError("scan needs at least two points")
    if not beta_max > 0 or not R > 0:
        raise ValueError("beta_max and R must be positive")
    x_max = beta_max * R
    out = []
    for i in range(1, n + 1):
        x = x_max * i / n
        if is_pole(x, SCAN_POLE_TOL):
            out.append(ScanPoint(x, None, True))
        else:
            out.append(ScanPoint(x, scattering_length(SquareWell(R, x / R)) / R, False))
    return out


def scattering_length_zeros(x_max: float) -> List[float]:
    """Non-trivial zeros of a/R in (0, x_max], the roots of tan(x) = x.

    One root lies in each interval (n pi, (n + 1/2) pi), n >= 1.
    """
    zeros = []
    n = 1
    while n * math.pi < x_max:
        lo, hi = n * math.pi + 1e-9, (n + 0.5) * math.pi - 1e-9
        root = bisect_secant(lambda x: math.tan(x) - x, lo, hi)
        if root <= x_max:
            zeros.append(root)
        n += 1
    return zeros


def bisect_secant(func: Callable[[float], float], lo: float, hi: float,
                  xtol: float = BISECT_XTOL, maxiter: int = BISECT_MAXITER,
                  polish: int = 3) -> float:
    """Bisection to ``xtol`` followed by a few guarded secant steps."""
    f_lo, f_hi = func(lo), func(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0:
        raise BracketError(f"no sign change on [{lo!r}, {hi!r}]")
    for _ in range(maxiter):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        f_mid = func(mid)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0:
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid

    best, f_best = (lo, f_lo) if abs(f_lo) <= abs(f_hi) else (hi, f_hi)
    x0, f0, x1, f1 = lo, f_lo, hi, f_hi
    for _ in range(polish):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        if not lo - xtol <= x2 <= hi + xtol:
            break
        f2 = func(x2)
        if abs(f2) < abs(f_best):
            best, f_best = x2, f2
        x0, f0, x1, f1 = x1, f1, x2, f2
        if f2 == 0.0:
            break
    return best


def _poles_in(lo, hi):
    n0 = math.ceil(lo / math.pi - 0.5)
    n1 = math.floor(hi / math.pi - 0.5)
    return [(n + 0.5) * math.pi for n in range(n0, n1 + 1)]


def solve_beta_for_target_a(R: float, a_target: float, bracket: Tuple[float, float]) -> float:
    """Depth beta giving scattering length ``a_target``.

    Parameters
    ----------
    R : float
        Well range.
    a_target : float
        Desired scattering length.
    bracket : (float, float)
        Search interval in beta*R; must exclude the poles of tan(beta R).

    Raises
    ------
    BracketError
        If the bracket contains a pole or a - a_target does not change sign.
    """
    lo, hi = sorted(bracket)
    if not lo > 0:
        raise BracketError("bracket must lie at positive beta*R")
    inside = _poles_in(lo, hi)
    if inside:
        raise BracketError(
            f"bracket [{lo}, {hi}] contains zero-energy resonance(s) at beta*R = "
            + ", ".join(f"{p:.6f}" for p in inside)
        )
    target = a_target / R

    def g(x):
        return _a_over_R(x) - target

    if g(lo) * g(hi) > 0:
        poles = [p for p in _poles_in(max(lo - 2 * math.pi, 1e-9), hi + 2 * math.pi)]
        near_poles = sorted(poles, key=lambda p: min(abs(p - lo), abs(p - hi)))[:2]
        near_zeros = [z for z in scattering_length_zeros(hi + 2 * math.pi)
                      if abs(z - lo) < 2 * math.pi or abs(z - hi) < 2 * math.pi]
        raise BracketError(
            f"a(beta) - {a_target} does not change sign on beta*R in [{lo}, {hi}]; "
            f"nearest poles {[round(p, 6) for p in near_poles]}, "
            f"zeros of a {[round(z, 6) for z in near_zeros]}"
        )
    return bisect_secant(g, lo, hi) / R


# -- threshold derivative ----------------------------------------------------

def ksq_slope_at_threshold(well: SquareWell, step: Optional[float] = None, levels: int = 4) -> float:
    """d(tan(delta)/k)/d(k**2) at k**2 = 0 by Richardson-extrapolated centred differences.

    Negative k**2 is reached by analytic continuation, so the difference is
    symmetric about threshold.
    """
    if step is None:
        step = 1e-2 / well.R**2
    table = []
    h = step
    for _ in range(levels):
        table.append((tan_delta_over_k_ksq(well, h) - tan_delta_over_k_ksq(well, -h)) / (2 * h))
        h /= 2
    # the centred difference error is even in h
    for j in range(1, levels):
        fac = 4.0**j
        table = [(fac * table[i + 1] - table[i]) / (fac - 1) for i in range(len(table) - 1)]
    return table[0]


# -- fitting -----------------------------------------------------------------

def record_value(rec: PhaseRecord, role: str) -> float:
    if role == TAN:
        return rec.tan_delta_over_k
    if role == KCOT:
        return rec.k_cot_delta
    if role == MINUS_DELTA:
        return rec.minus_delta_over_k
    raise ValueError(role)


def _is_flagged(rec: PhaseRecord, role: str) -> bool:
    if role == KCOT:
        return rec.pole_near_kcot
    return rec.pole_near_tan


def _smallest_positive_root(coeffs, what, slope):
    roots = np.roots(coeffs)
    scale = max(1.0, float(np.max(np.abs(roots)))) if len(roots) else 1.0
    real = [r.real for r in roots if abs(r.imag) <= 1e-9 * scale and r.real > 0]
    if not real:
        raise FitInversionError(
            f"{what}: no positive real effective range reproduces slope {slope!r}", slope=slope
        )
    x = min(real)
    poly = np.poly1d(coeffs)
    dpoly = poly.deriv()
    for _ in range(3):
        d = dpoly(x)
        if d == 0:
            break
        x -= poly(x) / d
    return float(x)


def _back_map(kind: ExpansionKind, intercept: float, slope: float) -> ErParams:
    role = kind.value_role
    if role == KCOT:
        if intercept == 0.0:
            raise FitInversionError(f"{kind.token}: zero intercept means infinite a", slope=slope)
        a = -1.0 / intercept
    elif role == TAN:
        a = -intercept
    else:
        a = intercept

    if kind in (ExpansionKind.TextbookLargeA, ExpansionKind.LowestLarge):
        r = 2.0 * slope
    elif kind in (ExpansionKind.ReciprocalSmallA, ExpansionKind.LowestSmall):
        if not slope > 0:
            raise FitInversionError(f"{kind.token}: slope {slope!r} gives no positive range", slope=slope)
        r = (6.0 * slope) ** (1.0 / 3.0)
    elif kind is ExpansionKind.ImprovedSmallA:
        # r^3 - 3 a^2 r - 6 slope = 0
        r = _smallest_positive_root([1.0, 0.0, -3.0 * a * a, -6.0 * slope], kind.token, slope)
    elif kind is ExpansionKind.ImprovedLargeA:
        # r^3 + (12 a / pi^2) r^2 - 3 a^2 r + 6 a^2 slope = 0
        r = _smallest_positive_root(
            [1.0, 12.0 * a / math.pi**2, -3.0 * a * a, 6.0 * a * a * slope], kind.token, slope
        )
    elif kind is ExpansionKind.InverseOfTextbook:
        if a == 0.0:
            raise FitInversionError("inv4: a = 0 leaves r0 undetermined", slope=slope)
        r = -2.0 * slope / a**2
    elif kind is ExpansionKind.KetterleParam:
        if a == 0.0:
            raise FitInversionError("er2: a = 0 leaves r0 undetermined", slope=slope)
        r = 2.0 * (slope + a**3 / 3.0) / a**2
    else:
        raise TypeError(kind)

    if kind.needs_positive_range and not r > 0:
        raise FitInversionError(f"{kind.token}: fitted range {r!r} is not positive", slope=slope)
    return ErParams(a=a, r0=r)


def fit_effective_range(records: Sequence[PhaseRecord], kind: ExpansionKind,
                        window: Tuple[float, float]) -> ErFitResult:
    """Least-squares straight line of the kind's function against k**2.

    Records outside ``window`` (a closed k**2 interval, open at 0) or flagged
    at a pole of the fitted function are skipped. The intercept and slope are
    then mapped back to (a, effective range).
    """
    kk_min, kk_max = window
    role = kind.value_role
    slack = 1e-12 * kk_max
    xs, ys = [], []
    for rec in records:
        s = rec.k * rec.k
        if not (s > 0 and kk_min - slack <= s <= kk_max + slack):
            continue
        if _is_flagged(rec, role):
            if role == KCOT:
                raise ScatteringError(
                    f"record at k**2={s!r} has tan(delta) ~ 0; k*cot(delta) fit is ill-posed"
                )
            continue
        xs.append(s)
        ys.append(record_value(rec, role))
    if len(xs) < 3:
        raise ScatteringError(f"need at least 3 usable records in window {window}, got {len(xs)}")

    x = np.asarray(xs)
    y = np.asarray(ys)
    design = np.column_stack([np.ones_like(x), x])
    (intercept, slope), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - (intercept + slope * x)
    rms = float(np.sqrt(np.mean(resid**2)))
    params = _back_map(kind, float(intercept), float(slope))
    return ErFitResult(kind, params, rms, (kk_min, kk_max), len(xs), float(intercept), float(slope))


# -- comparisons ---------------------------------------------------------------

def ksq_grid(window: Tuple[float, float], n: int) -> np.ndarray:
    """n uniform k**2 points; a window starting at 0 is treated as open there."""
    lo, hi = window
    if n < 1 or not hi > 0 or lo > hi:
        raise ValueError(f"bad k**2 window {window} with n={n}")
    if lo <= 0:
        return hi * np.arange(1, n + 1) / n
    if n == 1:
        return np.array([hi])
    return np.linspace(lo, hi, n)


def compare_expansions(well: SquareWell, kinds: Sequence[ExpansionKind],
                       params_policy: str = USE_RANGE_R,
                       window: Tuple[float, float] = DEFAULT_WINDOW,
                       n: int = DEFAULT_N) -> List[ErrorReport]:
    """Sample the exact square-well functions and each expansion on a k**2 grid.

    With ``use_range_R`` the effective range is set to R and a to the exact
    scattering length; with ``use_fitted`` both come from a least-squares fit
    of the same exact data. Deviations are absolute.
    """
    if params_policy not in (USE_RANGE_R, USE_FITTED):
        raise ValueError(f"unknown params policy {params_policy!r}")
    if not window[1] < well.beta**2:
        raise ScatteringError(
            f"window k**2 <= {window[1]} is not small compared with beta**2 = {well.beta**2:.6g}"
        )
    grid = ksq_grid(window, n)
    records = [exact_phase_record(well, math.sqrt(s)) for s in grid]
    a = scattering_length(well)

    reports = []
    for kind in kinds:
        role = kind.value_role
        if params_policy == USE_RANGE_R:
            params = ErParams(a=a, r0=well.R)
        else:
            params = fit_effective_range(records, kind, (grid[0], grid[-1])).params
        exact = np.array([record_value(r, role) for r in records])
        flagged = [_is_flagged(r, role) for r in records]
        approx = eval_expansion(kind, params, np.sqrt(grid))
        ok = ~np.array(flagged)
        if not ok.any():
            raise PoleError(f"{kind.token}: every sample sits at a pole of the exact function")
        dev = np.abs(exact[ok] - approx[ok])
        reports.append(ErrorReport(
            kind=kind,
            params=params,
            max_abs_dev=float(dev.max()),
            mean_abs_dev=float(dev.mean()),
            window=(float(grid[0]), float(grid[-1])),
            samples=[(float(s), float(e), float(p)) for s, e, p in zip(grid, exact, approx)],
            flagged=flagged,
        ))
    return reports
